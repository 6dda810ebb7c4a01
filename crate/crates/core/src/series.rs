//! Domain types shared by every solver and report: the canonical data
//! series, cut-index partitionings, and the x-axis cut points derived
//! from them.
//!
//! Indexing follows the half-open interval convention throughout: a
//! partitioning of `n` points into `k` parts is a strictly increasing
//! vector of `k - 1` cut indices `c` in `1..n`, where cut `c` places the
//! boundary after the `c`-th point (1-based). Partition `j` covers the
//! index interval `(c_{j-1}, c_j]`, so the same numbers double as
//! 0-based half-open slice bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered sequence of `(x, y)` observations, sorted by `x` with ties
/// broken by `y` and then input position. Construction validates that
/// there are at least two points and that every value is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSeries {
    points: Vec<(f64, f64)>,
}

impl DataSeries {
    /// Sorts raw observations into canonical order. Never drops or
    /// mutates values; rejects inputs with fewer than 2 points or any
    /// non-finite coordinate.
    pub fn canonicalize(raw: &[(f64, f64)]) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::TooFewPoints(raw.len()));
        }
        for (row, &(x, y)) in raw.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::NonFiniteValue { row, x, y });
            }
        }
        let mut points = raw.to_vec();
        // Stable sort keeps input order for fully tied points.
        points.sort_by(|a, b| a.partial_cmp(b).expect("finite values are totally ordered"));
        Ok(DataSeries { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    /// The y values in canonical order.
    pub fn ys(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }

    pub fn x_at(&self, idx: usize) -> f64 {
        self.points[idx].0
    }

    pub fn y_at(&self, idx: usize) -> f64 {
        self.points[idx].1
    }

    /// True when the boundary after the `cut`-th point (1-based) falls
    /// inside a run of equal x values, i.e. the cut separates points
    /// that share an x coordinate.
    pub fn cut_splits_x_tie(&self, cut: usize) -> bool {
        cut >= 1 && cut < self.points.len() && self.points[cut - 1].0 == self.points[cut].0
    }
}

/// Sorts raw points into the canonical order used everywhere else.
pub fn canonicalize(raw: &[(f64, f64)]) -> Result<DataSeries> {
    DataSeries::canonicalize(raw)
}

/// Which deviation measure a solve minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Sum of squared deviations of y from the partition mean.
    Lsqm,
    /// Sum of absolute deviations of y from the partition mean
    /// (the mean, not the median).
    Ladm,
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Objective::Lsqm => write!(f, "lsqm"),
            Objective::Ladm => write!(f, "ladm"),
        }
    }
}

/// An order-preserving split of `n` points into `k` non-empty parts,
/// stored as the `k - 1` interior cut indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partitioning {
    n: usize,
    cuts: Vec<usize>,
}

impl Partitioning {
    /// Validates that `cuts` is strictly increasing with every index in
    /// `1..n`, which also guarantees `1 <= k <= n`.
    pub fn new(n: usize, cuts: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadPartitioning("n must be positive".into()));
        }
        let mut prev = 0usize;
        for &c in &cuts {
            if c <= prev {
                return Err(Error::BadPartitioning(format!(
                    "cut indices must be strictly increasing, got {cuts:?}"
                )));
            }
            if c >= n {
                return Err(Error::BadPartitioning(format!(
                    "cut index {c} out of range 1..{n}"
                )));
            }
            prev = c;
        }
        Ok(Partitioning { n, cuts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.cuts.len() + 1
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    /// The `k` half-open index ranges `(lo, hi]` tiling `(0, n]`.
    pub fn ranges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.k());
        let mut lo = 0usize;
        for &c in &self.cuts {
            out.push((lo, c));
            lo = c;
        }
        out.push((lo, self.n));
        out
    }
}

/// The `k - 1` x-axis values reported to users: the x coordinate of the
/// last point of each partition except the final one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutPoints {
    values: Vec<f64>,
}

impl CutPoints {
    /// Wraps an already non-decreasing sequence of cut values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        use std::cmp::Ordering;
        for w in values.windows(2) {
            let ordered = matches!(
                w[0].partial_cmp(&w[1]),
                Some(Ordering::Less | Ordering::Equal)
            );
            if !ordered {
                return Err(Error::BadPartitioning(format!(
                    "cut points must be non-decreasing, got {values:?}"
                )));
            }
        }
        Ok(CutPoints { values })
    }

    /// Sorts arbitrary user-supplied cut values into a valid sequence.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::BadPartitioning(format!(
                    "cut points must be finite, got {v}"
                )));
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(CutPoints { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Maps cut indices to the x coordinates reported to users: the x of the
/// highest-index point of each partition but the last.
pub fn cuts_to_x(series: &DataSeries, partitioning: &Partitioning) -> Result<CutPoints> {
    if partitioning.n() != series.len() {
        return Err(Error::LengthMismatch {
            series: series.len(),
            partitioning: partitioning.n(),
        });
    }
    let values = partitioning
        .cuts()
        .iter()
        .map(|&c| series.x_at(c - 1))
        .collect();
    CutPoints::new(values)
}

/// Which algorithm produced a [`SolveResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Dp,
    Brute,
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverKind::Dp => write!(f, "dp"),
            SolverKind::Brute => write!(f, "brute"),
        }
    }
}

/// Per-partition slice of a solve: the range `(lo, hi]`, its mean, and
/// its contribution to the objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub lo: usize,
    pub hi: usize,
    pub mean: f64,
    pub cost: f64,
}

/// The outcome of one solve: the optimal partitioning, its cut points on
/// the x axis, total cost, per-partition breakdown, and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub objective: Objective,
    pub partitioning: Partitioning,
    pub cut_points: CutPoints,
    pub total_cost: f64,
    pub per_partition: Vec<PartitionSummary>,
    pub solver: SolverKind,
    /// For each cut, whether it falls inside a run of tied x values.
    pub tie_split_flags: Vec<bool>,
}

impl SolveResult {
    pub(crate) fn assemble(
        series: &DataSeries,
        objective: Objective,
        partitioning: Partitioning,
        total_cost: f64,
        per_partition: Vec<PartitionSummary>,
        solver: SolverKind,
    ) -> Result<Self> {
        let cut_points = cuts_to_x(series, &partitioning)?;
        let tie_split_flags = partitioning
            .cuts()
            .iter()
            .map(|&c| series.cut_splits_x_tie(c))
            .collect();
        Ok(SolveResult {
            objective,
            partitioning,
            cut_points,
            total_cost,
            per_partition,
            solver,
            tie_split_flags,
        })
    }

    pub fn k(&self) -> usize {
        self.partitioning.k()
    }
}
