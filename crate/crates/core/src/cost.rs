//! Interval cost tables: the within-partition deviation of y around the
//! partition mean, for any half-open index interval `(a, b]` with
//! `0 <= a < b <= n`.
//!
//! Squared-deviation costs are answered in O(1) from compensated prefix
//! sums of y and y². Absolute-deviation costs have no comparable prefix
//! identity; the table precomputes every interval in O(n² log n) by
//! sweeping a Fenwick tree over value ranks per left endpoint, using
//! `Σ|y - μ| = Σ_{y>μ}(y - μ) + Σ_{y<=μ}(μ - y)`.
//!
//! Values are shifted by a central data value before summing, and
//! intervals that are constant in y (detected from run boundaries) cost
//! exactly zero, so step plateaus and all-equal inputs behave exactly.

use crate::error::{Error, Result};
use crate::series::{DataSeries, Objective};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn compensated_total(values: &[f64]) -> f64 {
    let mut acc = CompensatedSum::default();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// Prefix sums kept as (sum, compensation) pairs so that interval
/// differences retain the compensated precision instead of collapsing
/// to the ulp of the running total.
#[derive(Debug, Clone, Default)]
struct PairedPrefix {
    sums: Vec<f64>,
    comps: Vec<f64>,
}

impl PairedPrefix {
    fn with_capacity(n: usize) -> Self {
        let mut p = PairedPrefix {
            sums: Vec::with_capacity(n + 1),
            comps: Vec::with_capacity(n + 1),
        };
        p.sums.push(0.0);
        p.comps.push(0.0);
        p
    }

    fn push(&mut self, acc: &CompensatedSum) {
        self.sums.push(acc.sum);
        self.comps.push(acc.comp);
    }

    fn interval(&self, a: usize, b: usize) -> f64 {
        (self.sums[b] - self.sums[a]) + (self.comps[b] - self.comps[a])
    }
}

/// Per-series scaffolding shared by both objectives: shifted values,
/// compensated prefix sums of the shifted values and their squares, and
/// run boundaries for exact constant-interval detection.
#[derive(Debug, Clone)]
struct Prefixes {
    shift: f64,
    shifted: Vec<f64>,
    sum: PairedPrefix,
    sum_sq: PairedPrefix,
    runs: Vec<u32>,
}

impl Prefixes {
    fn new(ys: &[f64]) -> Self {
        let n = ys.len();
        let shift = ys[n / 2];
        let shifted: Vec<f64> = ys.iter().map(|&y| y - shift).collect();
        let mut sum = PairedPrefix::with_capacity(n);
        let mut sum_sq = PairedPrefix::with_capacity(n);
        let mut runs = Vec::with_capacity(n + 1);
        let mut s = CompensatedSum::default();
        let mut s2 = CompensatedSum::default();
        runs.push(0);
        for (i, &v) in shifted.iter().enumerate() {
            s.add(v);
            s2.add(v * v);
            sum.push(&s);
            sum_sq.push(&s2);
            let bump = if i > 0 && ys[i] != ys[i - 1] { 1 } else { 0 };
            runs.push(runs[i] + bump);
        }
        Prefixes {
            shift,
            shifted,
            sum,
            sum_sq,
            runs,
        }
    }

    fn n(&self) -> usize {
        self.shifted.len()
    }

    fn interval_sum(&self, a: usize, b: usize) -> f64 {
        self.sum.interval(a, b)
    }

    /// True when y is constant on `(a, b]`; singletons count.
    fn constant(&self, a: usize, b: usize) -> bool {
        self.runs[b] == self.runs[a + 1]
    }

    fn mean(&self, a: usize, b: usize) -> f64 {
        self.shift + self.interval_sum(a, b) / (b - a) as f64
    }

    fn sq_cost(&self, a: usize, b: usize) -> f64 {
        if self.constant(a, b) {
            return 0.0;
        }
        let cnt = (b - a) as f64;
        let m = self.interval_sum(a, b) / cnt;
        (self.sum_sq.interval(a, b) - cnt * m * m).max(0.0)
    }
}

/// Fenwick tree over value ranks, accumulating counts and sums of the
/// values inserted so far.
#[derive(Debug, Clone)]
struct Fenwick {
    counts: Vec<u32>,
    sums: Vec<f64>,
}

impl Fenwick {
    fn new(universe: usize) -> Self {
        Fenwick {
            counts: vec![0; universe + 1],
            sums: vec![0.0; universe + 1],
        }
    }

    fn clear(&mut self) {
        self.counts.fill(0);
        self.sums.fill(0.0);
    }

    fn add(&mut self, rank: usize, v: f64) {
        let mut i = rank + 1;
        while i < self.counts.len() {
            self.counts[i] += 1;
            self.sums[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    /// Count and sum of inserted values with rank < `upto`.
    fn prefix(&self, upto: usize) -> (u32, f64) {
        let mut i = upto;
        let mut cnt = 0u32;
        let mut sum = 0.0f64;
        while i > 0 {
            cnt += self.counts[i];
            sum += self.sums[i];
            i -= i & i.wrapping_neg();
        }
        (cnt, sum)
    }
}

/// Streams absolute-deviation costs `cost(a, b)` for a fixed left
/// endpoint `a` and growing `b`, one interval per step. Each step costs
/// O(log n): one Fenwick insertion plus one rank query at the running
/// mean.
#[derive(Debug, Clone)]
pub(crate) struct AbsCostScanner {
    pre: Prefixes,
    uniq: Vec<f64>,
    ranks: Vec<usize>,
    fen: Fenwick,
    row: usize,
    next_b: usize,
}

impl AbsCostScanner {
    pub(crate) fn new(ys: &[f64]) -> Self {
        let pre = Prefixes::new(ys);
        let mut uniq = pre.shifted.clone();
        uniq.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        uniq.dedup();
        let ranks = pre
            .shifted
            .iter()
            .map(|&v| uniq.partition_point(|&u| u < v))
            .collect();
        let fen = Fenwick::new(uniq.len());
        AbsCostScanner {
            pre,
            uniq,
            ranks,
            fen,
            row: 0,
            next_b: 1,
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.pre.n()
    }

    pub(crate) fn mean(&self, a: usize, b: usize) -> f64 {
        self.pre.mean(a, b)
    }

    pub(crate) fn start_row(&mut self, a: usize) {
        self.fen.clear();
        self.row = a;
        self.next_b = a + 1;
    }

    /// Extends the current interval by one point and returns
    /// `(b, cost(row, b))`.
    pub(crate) fn step(&mut self) -> (usize, f64) {
        let b = self.next_b;
        self.next_b += 1;
        self.fen.add(self.ranks[b - 1], self.pre.shifted[b - 1]);
        let cost = if self.pre.constant(self.row, b) {
            0.0
        } else {
            let cnt = (b - self.row) as f64;
            let total = self.pre.interval_sum(self.row, b);
            let mu = total / cnt;
            let r = self.uniq.partition_point(|&u| u <= mu);
            let (cnt_le, sum_le) = self.fen.prefix(r);
            (total - 2.0 * sum_le + mu * (2.0 * f64::from(cnt_le) - cnt)).max(0.0)
        };
        (b, cost)
    }

    /// One-off random access; costs a partial row sweep.
    pub(crate) fn cost_once(&mut self, a: usize, b: usize) -> f64 {
        self.start_row(a);
        let mut out = 0.0;
        for _ in a + 1..=b {
            out = self.step().1;
        }
        out
    }
}

/// Row-major triangular storage of every interval cost.
#[derive(Debug, Clone)]
struct Triangle {
    n: usize,
    offsets: Vec<usize>,
    data: Vec<f64>,
}

impl Triangle {
    fn get(&self, a: usize, b: usize) -> f64 {
        self.data[self.offsets[a] + (b - a - 1)]
    }

    fn row(&self, a: usize) -> &[f64] {
        &self.data[self.offsets[a]..self.offsets[a] + (self.n - a)]
    }
}

/// Bytes of storage a dense absolute-deviation table needs for `n`
/// points: one f64 per interval, n(n+1)/2 intervals.
pub fn abs_table_bytes(n: usize) -> usize {
    n * (n + 1) / 2 * std::mem::size_of::<f64>()
}

enum Kernel {
    /// O(1) queries from prefix sums.
    SquaredPrefix,
    /// Precomputed triangle of absolute-deviation costs.
    AbsDense(Triangle),
}

/// Immutable interval-cost oracle for one series and objective.
///
/// `query(a, b)` returns the chosen deviation measure over `(a, b]` and
/// `mean(a, b)` the partition mean. Squared-deviation tables build in
/// O(n) and answer in O(1); absolute-deviation tables build in
/// O(n² log n) and store n(n+1)/2 doubles (see [`abs_table_bytes`] —
/// roughly 100 MB at n = 5000), after which queries are O(1). For large
/// absolute-deviation problems prefer [`crate::solver::optimal_partition`],
/// which switches to a row-streaming evaluation over a memory budget.
pub struct CostTable {
    objective: Objective,
    pre: Prefixes,
    kernel: Kernel,
}

impl CostTable {
    pub fn build(series: &DataSeries, objective: Objective) -> Self {
        let ys = series.ys();
        match objective {
            Objective::Lsqm => CostTable {
                objective,
                pre: Prefixes::new(&ys),
                kernel: Kernel::SquaredPrefix,
            },
            Objective::Ladm => {
                let n = ys.len();
                let mut scanner = AbsCostScanner::new(&ys);
                let mut offsets = Vec::with_capacity(n);
                let mut data = vec![0.0; n * (n + 1) / 2];
                let mut at = 0usize;
                for a in 0..n {
                    offsets.push(at);
                    scanner.start_row(a);
                    for _ in a + 1..=n {
                        let (b, cost) = scanner.step();
                        data[at + (b - a - 1)] = cost;
                    }
                    at += n - a;
                }
                CostTable {
                    objective,
                    pre: scanner.pre,
                    kernel: Kernel::AbsDense(Triangle { n, offsets, data }),
                }
            }
        }
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn n(&self) -> usize {
        self.pre.n()
    }

    fn check(&self, a: usize, b: usize) {
        assert!(
            a < b && b <= self.n(),
            "invalid interval ({a}, {b}] for n = {}",
            self.n()
        );
    }

    /// Interval cost over `(a, b]`. Panics on an invalid interval.
    pub fn query(&self, a: usize, b: usize) -> f64 {
        self.check(a, b);
        match &self.kernel {
            Kernel::SquaredPrefix => self.pre.sq_cost(a, b),
            Kernel::AbsDense(tri) => tri.get(a, b),
        }
    }

    /// Mean of y over `(a, b]`. Panics on an invalid interval.
    pub fn mean(&self, a: usize, b: usize) -> f64 {
        self.check(a, b);
        self.pre.mean(a, b)
    }
}

/// Builds the interval-cost table for a series under the chosen
/// objective. Identical to [`CostTable::build`].
pub fn build_cost_table(series: &DataSeries, objective: Objective) -> CostTable {
    CostTable::build(series, objective)
}

fn check_interval(series: &DataSeries, a: usize, b: usize) -> Result<()> {
    if a >= b || b > series.len() {
        return Err(Error::BadInterval {
            a,
            b,
            n: series.len(),
        });
    }
    Ok(())
}

/// Mean of y over the interval `(a, b]`.
pub fn interval_mean(series: &DataSeries, a: usize, b: usize) -> Result<f64> {
    check_interval(series, a, b)?;
    let ys = series.ys();
    Ok(compensated_total(&ys[a..b]) / (b - a) as f64)
}

/// Sum of squared deviations of y from the interval mean over `(a, b]`,
/// computed via compensated prefix sums of y and y².
pub fn interval_cost_sq(series: &DataSeries, a: usize, b: usize) -> Result<f64> {
    check_interval(series, a, b)?;
    let ys = series.ys();
    let pre = Prefixes::new(&ys[a..b]);
    Ok(pre.sq_cost(0, b - a))
}

/// Sum of absolute deviations of y from the interval mean over `(a, b]`.
/// The deviation is around the mean, not the median.
pub fn interval_cost_abs(series: &DataSeries, a: usize, b: usize) -> Result<f64> {
    check_interval(series, a, b)?;
    let ys = series.ys();
    Ok(direct_abs_cost(&ys[a..b]))
}

fn direct_abs_cost(ys: &[f64]) -> f64 {
    let (lo, hi) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| {
            (lo.min(y), hi.max(y))
        });
    if lo == hi {
        return 0.0;
    }
    let mean = compensated_total(ys) / ys.len() as f64;
    let mut acc = CompensatedSum::default();
    for &y in ys {
        acc.add((y - mean).abs());
    }
    acc.value()
}

/// Mutable row-oriented access to interval costs, shared by the dynamic
/// program. Dense backends ignore the mutability; the streaming backend
/// recomputes each row on demand.
pub(crate) trait RowCosts {
    fn n(&self) -> usize;
    fn mean_of(&self, a: usize, b: usize) -> f64;
    fn cost_of(&mut self, a: usize, b: usize) -> f64;
    /// Visits `(b, cost(a, b))` for b = a+1..=n in order, stopping early
    /// when the callback returns `false`.
    fn scan_row(&mut self, a: usize, f: &mut dyn FnMut(usize, f64) -> bool);
}

pub(crate) struct TableRows<'a>(pub &'a CostTable);

impl RowCosts for TableRows<'_> {
    fn n(&self) -> usize {
        self.0.n()
    }

    fn mean_of(&self, a: usize, b: usize) -> f64 {
        self.0.mean(a, b)
    }

    fn cost_of(&mut self, a: usize, b: usize) -> f64 {
        self.0.query(a, b)
    }

    fn scan_row(&mut self, a: usize, f: &mut dyn FnMut(usize, f64) -> bool) {
        match &self.0.kernel {
            Kernel::SquaredPrefix => {
                for b in a + 1..=self.0.n() {
                    if !f(b, self.0.pre.sq_cost(a, b)) {
                        return;
                    }
                }
            }
            Kernel::AbsDense(tri) => {
                for (i, &cost) in tri.row(a).iter().enumerate() {
                    if !f(a + 1 + i, cost) {
                        return;
                    }
                }
            }
        }
    }
}

pub(crate) struct StreamingRows(pub AbsCostScanner);

impl RowCosts for StreamingRows {
    fn n(&self) -> usize {
        self.0.n()
    }

    fn mean_of(&self, a: usize, b: usize) -> f64 {
        self.0.mean(a, b)
    }

    fn cost_of(&mut self, a: usize, b: usize) -> f64 {
        self.0.cost_once(a, b)
    }

    fn scan_row(&mut self, a: usize, f: &mut dyn FnMut(usize, f64) -> bool) {
        self.0.start_row(a);
        for _ in a + 1..=self.0.n() {
            let (b, cost) = self.0.step();
            if !f(b, cost) {
                return;
            }
        }
    }
}
