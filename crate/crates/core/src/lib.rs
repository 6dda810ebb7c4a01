//! Exact impact-driven discretization of numeric attributes.
//!
//! Given n observations `(x_i, y_i)` sorted by x and a partition count
//! k, this crate finds the order-preserving k-partitioning that
//! minimizes the within-partition deviation of y around each partition
//! mean — squared deviations (`Objective::Lsqm`) or absolute deviations
//! (`Objective::Ladm`) — and reports the k-1 cut points on the x axis.
//! Unlike equal-width or equal-frequency binning, the cuts reflect how
//! the independent attribute drives the response.
//!
//! The solver is an exact dynamic program over cut indices with a
//! deterministic lexicographic tie-break, paired with an exhaustive
//! brute-force oracle for verification. Classical equal-width and
//! equal-frequency baselines and a tolerance-based cut-point agreement
//! score round out the toolkit.
//!
//! ```
//! use ordcut::{canonicalize, optimal_partition, Objective};
//!
//! let pts: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64, if i <= 3 { 0.0 } else { 10.0 })).collect();
//! let series = canonicalize(&pts).unwrap();
//! let result = optimal_partition(&series, 2, Objective::Lsqm).unwrap();
//! assert_eq!(result.cut_points.values(), &[3.0]);
//! assert_eq!(result.total_cost, 0.0);
//! ```

pub mod agree;
pub mod baseline;
pub mod cost;
pub mod error;
pub mod io;
pub mod series;
pub mod solver;

pub use agree::{
    agreement_score, classify_match, AgreementReport, MatchBand, MatchedPair,
    DEFAULT_CUT_TOLERANCE,
};
pub use baseline::{equal_frequency, equal_width, BinMethod, BinSpec};
pub use cost::{
    abs_table_bytes, build_cost_table, interval_cost_abs, interval_cost_sq, interval_mean,
    CostTable,
};
pub use error::{Error, Result};
pub use io::{
    generate, load_csv, step_boundaries, write_result, write_series_csv, ColumnSelector, CsvLoad,
    InputSource, LoadReport, OutputFormat, RunConfig, Segment, SegmentKind, SolveMethod,
    SynthFamily, SynthSpec,
};
pub use series::{
    canonicalize, cuts_to_x, CutPoints, DataSeries, Objective, PartitionSummary, Partitioning,
    SolveResult, SolverKind,
};
pub use solver::{
    brute_force_partition, brute_force_partition_with, cost_curve, cost_curve_with,
    enumeration_count, optimal_partition, optimal_partition_with, SolverOptions,
};
