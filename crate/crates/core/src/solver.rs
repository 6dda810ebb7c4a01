//! Exact minimization of both objectives over all order-preserving
//! k-partitionings: a dynamic program over suffixes, plus an exhaustive
//! enumeration oracle that shares none of its arithmetic.
//!
//! `dp[i][j]` holds the minimal cost of splitting the suffix `(i, n]`
//! into `j` non-empty parts, so `dp[0][j]` is the optimum for every
//! partition count up to `k` in one pass. Cuts are recovered front to
//! back: at each state the smallest cut index whose completion stays
//! within the cost budget is taken, which yields the lexicographically
//! smallest cut vector among all partitionings whose total cost is
//! within `tie_rel_tol` of the optimum. Ties are real: on all-equal
//! input every partitioning costs zero and the solver must still be
//! deterministic.

use crate::cost::{
    abs_table_bytes, AbsCostScanner, CostTable, RowCosts, StreamingRows, TableRows,
};
use crate::error::{Error, Result};
use crate::series::{
    DataSeries, Objective, PartitionSummary, Partitioning, SolveResult, SolverKind,
};

/// Tuning knobs for the solvers. The defaults match the documented
/// contracts; tests override them to force rare code paths.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Two totals within this relative distance count as tied; the
    /// lexicographically smallest cut vector among ties wins.
    pub tie_rel_tol: f64,
    /// Largest dense absolute-deviation table the solver will build
    /// before switching to row-streaming evaluation.
    pub abs_dense_budget_bytes: usize,
    /// Cap on brute-force candidate vectors.
    pub brute_cap: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tie_rel_tol: 1e-9,
            abs_dense_budget_bytes: 512 << 20,
            brute_cap: 1_000_000,
        }
    }
}

fn validate_k(k: usize, n: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::KZero);
    }
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    Ok(())
}

/// Suffix-oriented DP table: `get(i, j)` is the minimal cost of
/// splitting the points `(i, n]` into `j` non-empty parts (infinite
/// when `j` exceeds the points available).
pub(crate) struct DpTable {
    n: usize,
    width: usize,
    dp: Vec<f64>,
}

impl DpTable {
    fn get(&self, i: usize, j: usize) -> f64 {
        self.dp[i * self.width + j]
    }

    fn build(costs: &mut dyn RowCosts, k_max: usize) -> DpTable {
        let n = costs.n();
        let width = k_max + 1;
        let mut dp = vec![f64::INFINITY; (n + 1) * width];
        dp[n * width] = 0.0; // zero parts of the empty suffix
        let mut best = vec![f64::INFINITY; width];
        for i in (0..n).rev() {
            let jmax = k_max.min(n - i);
            best[1..=jmax].fill(f64::INFINITY);
            costs.scan_row(i, &mut |c, q| {
                let base = c * width;
                let jhi = jmax.min(n - c + 1);
                for j in 1..=jhi {
                    let v = q + dp[base + j - 1];
                    if v < best[j] {
                        best[j] = v;
                    }
                }
                true
            });
            dp[i * width + 1..i * width + jmax + 1].copy_from_slice(&best[1..=jmax]);
        }
        DpTable { n, width, dp }
    }
}

/// Walks the DP front to back, taking at every state the smallest cut
/// whose completion fits the remaining budget. The budget starts at
/// `optimum * (1 + tie_rel_tol)`, so exactly the within-tolerance
/// optima are eligible and the result is their lexicographic minimum.
fn reconstruct(costs: &mut dyn RowCosts, dp: &DpTable, k: usize, tie_rel_tol: f64) -> Vec<usize> {
    let n = dp.n;
    let optimum = dp.get(0, k);
    let mut budget = optimum * (1.0 + tie_rel_tol);
    let mut cuts = Vec::with_capacity(k - 1);
    let mut start = 0usize;
    for j in (2..=k).rev() {
        let mut chosen: Option<(usize, f64)> = None;
        costs.scan_row(start, &mut |c, q| {
            if c + (j - 1) > n {
                return false; // no room left for the remaining parts
            }
            let completion = dp.get(c, j - 1);
            if q + completion <= budget {
                chosen = Some((c, q));
                return false;
            }
            true
        });
        let (c, q) = chosen.expect("the optimal completion is always within budget");
        cuts.push(c);
        // The optimal completion must stay affordable even if budget - q
        // rounds below it.
        budget = (budget - q).max(dp.get(c, j - 1));
        start = c;
    }
    cuts
}

fn per_partition(costs: &mut dyn RowCosts, partitioning: &Partitioning) -> Vec<PartitionSummary> {
    partitioning
        .ranges()
        .into_iter()
        .map(|(lo, hi)| PartitionSummary {
            lo,
            hi,
            mean: costs.mean_of(lo, hi),
            cost: costs.cost_of(lo, hi),
        })
        .collect()
}

fn solve_dp(
    series: &DataSeries,
    costs: &mut dyn RowCosts,
    k: usize,
    objective: Objective,
    options: &SolverOptions,
) -> Result<SolveResult> {
    let dp = DpTable::build(costs, k);
    let total_cost = dp.get(0, k);
    let cuts = reconstruct(costs, &dp, k, options.tie_rel_tol);
    let partitioning = Partitioning::new(series.len(), cuts)?;
    let per = per_partition(costs, &partitioning);
    SolveResult::assemble(series, objective, partitioning, total_cost, per, SolverKind::Dp)
}

fn with_backend<T>(
    series: &DataSeries,
    objective: Objective,
    options: &SolverOptions,
    f: impl FnOnce(&mut dyn RowCosts) -> Result<T>,
) -> Result<T> {
    match objective {
        Objective::Lsqm => {
            let table = CostTable::build(series, objective);
            f(&mut TableRows(&table))
        }
        Objective::Ladm => {
            if abs_table_bytes(series.len()) <= options.abs_dense_budget_bytes {
                let table = CostTable::build(series, objective);
                f(&mut TableRows(&table))
            } else {
                let mut rows = StreamingRows(AbsCostScanner::new(&series.ys()));
                f(&mut rows)
            }
        }
    }
}

/// Finds the globally minimal-cost order-preserving k-partitioning under
/// the chosen objective. Among ties (relative tolerance 1e-9) the
/// lexicographically smallest cut vector is returned.
pub fn optimal_partition(
    series: &DataSeries,
    k: usize,
    objective: Objective,
) -> Result<SolveResult> {
    optimal_partition_with(series, k, objective, &SolverOptions::default())
}

pub fn optimal_partition_with(
    series: &DataSeries,
    k: usize,
    objective: Objective,
    options: &SolverOptions,
) -> Result<SolveResult> {
    validate_k(k, series.len())?;
    with_backend(series, objective, options, |costs| {
        solve_dp(series, costs, k, objective, options)
    })
}

/// Optimal cost for every partition count `1..=k_max`, from one DP
/// table. Non-increasing in k; exactly zero at `k = n`.
pub fn cost_curve(
    series: &DataSeries,
    k_max: usize,
    objective: Objective,
) -> Result<Vec<(usize, f64)>> {
    cost_curve_with(series, k_max, objective, &SolverOptions::default())
}

pub fn cost_curve_with(
    series: &DataSeries,
    k_max: usize,
    objective: Objective,
    options: &SolverOptions,
) -> Result<Vec<(usize, f64)>> {
    validate_k(k_max, series.len())?;
    with_backend(series, objective, options, |costs| {
        let dp = DpTable::build(costs, k_max);
        Ok((1..=k_max).map(|j| (j, dp.get(0, j))).collect())
    })
}

/// Number of candidate cut vectors a brute-force solve of (n, k) must
/// enumerate: n-1 choose k-1. `None` on overflow.
pub fn enumeration_count(n: usize, k: usize) -> Option<u128> {
    if k < 1 || k > n {
        return Some(0);
    }
    let (n, r) = ((n - 1) as u128, (k - 1) as u128);
    let r = r.min(n - r);
    let mut out = 1u128;
    for i in 0..r {
        out = out.checked_mul(n - i)?;
        out /= i + 1;
    }
    Some(out)
}

/// Deliberately naive two-pass interval cost: plain mean, then plain
/// deviation sum. Shares no arithmetic with the cost tables.
fn direct_interval_cost(ys: &[f64], objective: Objective) -> f64 {
    if ys.len() == 1 {
        return 0.0;
    }
    let (lo, hi) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| {
            (lo.min(y), hi.max(y))
        });
    if lo == hi {
        return 0.0;
    }
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    match objective {
        Objective::Lsqm => ys.iter().map(|&y| (y - mean) * (y - mean)).sum(),
        Objective::Ladm => ys.iter().map(|&y| (y - mean).abs()).sum(),
    }
}

fn direct_total_cost(ys: &[f64], cuts: &[usize], objective: Objective) -> f64 {
    let mut total = 0.0;
    let mut lo = 0usize;
    for &c in cuts {
        total += direct_interval_cost(&ys[lo..c], objective);
        lo = c;
    }
    total + direct_interval_cost(&ys[lo..], objective)
}

/// Advances `cuts` to the next strictly increasing vector over `1..n`,
/// in lexicographic order. Returns false when exhausted.
fn next_cut_vector(cuts: &mut [usize], n: usize) -> bool {
    let m = cuts.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        let max_here = n - 1 - (m - 1 - i);
        if cuts[i] < max_here {
            cuts[i] += 1;
            for j in i + 1..m {
                cuts[j] = cuts[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn for_each_cut_vector(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut cuts: Vec<usize> = (1..k).collect();
    loop {
        if !f(&cuts) || !next_cut_vector(&mut cuts, n) {
            return;
        }
    }
}

/// Exhaustive oracle: enumerates every cut vector in lexicographic
/// order, scores each by direct two-pass summation, and returns the
/// first one within the tie tolerance of the minimum.
pub fn brute_force_partition(
    series: &DataSeries,
    k: usize,
    objective: Objective,
) -> Result<SolveResult> {
    brute_force_partition_with(series, k, objective, &SolverOptions::default())
}

pub fn brute_force_partition_with(
    series: &DataSeries,
    k: usize,
    objective: Objective,
    options: &SolverOptions,
) -> Result<SolveResult> {
    let n = series.len();
    validate_k(k, n)?;
    let candidates = enumeration_count(n, k).unwrap_or(u128::MAX);
    if candidates > u128::from(options.brute_cap) {
        return Err(Error::EnumerationTooLarge {
            candidates,
            cap: options.brute_cap,
        });
    }

    let ys = series.ys();
    let mut min_cost = f64::INFINITY;
    for_each_cut_vector(n, k, |cuts| {
        let cost = direct_total_cost(&ys, cuts, objective);
        if cost < min_cost {
            min_cost = cost;
        }
        true
    });

    let budget = min_cost + options.tie_rel_tol * min_cost;
    let mut chosen: Option<Vec<usize>> = None;
    for_each_cut_vector(n, k, |cuts| {
        if direct_total_cost(&ys, cuts, objective) <= budget {
            chosen = Some(cuts.to_vec());
            return false;
        }
        true
    });

    let cuts = chosen.expect("the minimum itself is always within budget");
    let partitioning = Partitioning::new(n, cuts)?;
    let per: Vec<PartitionSummary> = partitioning
        .ranges()
        .into_iter()
        .map(|(lo, hi)| {
            let slice = &ys[lo..hi];
            PartitionSummary {
                lo,
                hi,
                mean: slice.iter().sum::<f64>() / slice.len() as f64,
                cost: direct_interval_cost(slice, objective),
            }
        })
        .collect();
    let total_cost = per.iter().map(|p| p.cost).sum();
    SolveResult::assemble(series, objective, partitioning, total_cost, per, SolverKind::Brute)
}
