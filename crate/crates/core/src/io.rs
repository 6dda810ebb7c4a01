//! CSV ingestion, synthetic series generation, and result serialization.
//!
//! CSV dialect: comma separator, optional header (auto-detected: a first
//! row whose selected columns fail numeric parse is a header), UTF-8,
//! '.' decimal point. Rows whose selected columns are missing or not
//! finite numbers are skipped and counted, not fatal.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{DataSeries, Objective, PartitionSummary, SolveResult};
use crate::solver::{brute_force_partition, optimal_partition};

/// Selects a CSV column by zero-based position or by header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(idx) => ColumnSelector::Index(idx),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

impl std::fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnSelector::Index(i) => write!(f, "{i}"),
            ColumnSelector::Name(n) => write!(f, "{n}"),
        }
    }
}

/// Row accounting from a CSV load, kept so users can replicate exactly
/// which rows fed a solve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    /// Data rows in the file (header excluded).
    pub rows_read: usize,
    pub rows_used: usize,
    pub rows_skipped: usize,
    pub header_detected: bool,
}

#[derive(Debug)]
pub struct CsvLoad {
    pub series: DataSeries,
    pub report: LoadReport,
}

fn parse_finite(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn resolve_column(
    header: &csv::StringRecord,
    selector: &ColumnSelector,
    by_name: bool,
) -> Result<usize> {
    match selector {
        ColumnSelector::Index(i) => {
            if *i < header.len() {
                Ok(*i)
            } else {
                Err(Error::ColumnNotFound(i.to_string()))
            }
        }
        ColumnSelector::Name(name) => {
            if !by_name {
                return Err(Error::ColumnNotFound(name.clone()));
            }
            header
                .iter()
                .position(|f| f.trim() == name)
                .ok_or_else(|| Error::ColumnNotFound(name.clone()))
        }
    }
}

/// Loads the selected columns of a CSV file into a canonical series.
/// Returns the series together with a row-count report.
pub fn load_csv(path: &Path, x_col: &ColumnSelector, y_col: &ColumnSelector) -> Result<CsvLoad> {
    let file = std::fs::File::open(path).map_err(|source| Error::FileNotFound {
        path: path.display().to_string(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(file);

    let mut records = reader.records();
    let first = match records.next() {
        Some(rec) => rec?,
        None => return Err(Error::TooFewPoints(0)),
    };

    let needs_names = matches!(x_col, ColumnSelector::Name(_))
        || matches!(y_col, ColumnSelector::Name(_));
    // With positional selectors the first row is data iff its selected
    // fields parse as finite numbers; named selectors force a header.
    let header_detected = if needs_names {
        true
    } else {
        let xi = resolve_column(&first, x_col, false)?;
        let yi = resolve_column(&first, y_col, false)?;
        parse_finite(&first[xi]).is_none() || parse_finite(&first[yi]).is_none()
    };

    let x_idx = resolve_column(&first, x_col, header_detected)?;
    let y_idx = resolve_column(&first, y_col, header_detected)?;

    let mut rows_read = 0usize;
    let mut points = Vec::new();
    let mut ingest = |rec: &csv::StringRecord| {
        rows_read += 1;
        let x = rec.get(x_idx).and_then(parse_finite);
        let y = rec.get(y_idx).and_then(parse_finite);
        if let (Some(x), Some(y)) = (x, y) {
            points.push((x, y));
        }
    };
    if !header_detected {
        ingest(&first);
    }
    for rec in records {
        ingest(&rec?);
    }

    let report = LoadReport {
        rows_read,
        rows_used: points.len(),
        rows_skipped: rows_read - points.len(),
        header_detected,
    };
    let series = DataSeries::canonicalize(&points)?;
    Ok(CsvLoad { series, report })
}

/// One segment of a mixed synthetic series.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub len: usize,
    pub kind: SegmentKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SegmentKind {
    Constant { value: f64 },
    /// y = slope * x + intercept over the global x coordinate.
    Ramp { slope: f64, intercept: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SynthFamily {
    /// Contiguous blocks of the given levels, split as evenly as n allows.
    Step { levels: Vec<f64> },
    Linear { slope: f64, intercept: f64 },
    Mixed { segments: Vec<Segment> },
    ConstantNoise { value: f64 },
}

/// Deterministic synthetic-series recipe; the seed fully determines the
/// output.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub family: SynthFamily,
    pub n: usize,
    pub noise_sd: f64,
    pub seed: u64,
}

/// Interior block boundaries for a step series of `n` points over
/// `levels` blocks: `floor(j * n / levels)` for j = 1..levels.
pub fn step_boundaries(n: usize, levels: usize) -> Vec<usize> {
    (1..levels).map(|j| j * n / levels).collect()
}

impl SynthSpec {
    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::BadSpec(format!("n must be at least 2, got {}", self.n)));
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::BadSpec(format!(
                "noise_sd must be finite and non-negative, got {}",
                self.noise_sd
            )));
        }
        match &self.family {
            SynthFamily::Step { levels } => {
                if levels.len() < 2 {
                    return Err(Error::BadSpec(format!(
                        "step family needs at least 2 levels, got {}",
                        levels.len()
                    )));
                }
                let mut sorted = levels.clone();
                sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                sorted.dedup();
                if sorted.len() != levels.len() {
                    return Err(Error::BadSpec("step levels must be distinct".into()));
                }
                if self.n < levels.len() {
                    return Err(Error::BadSpec(format!(
                        "n = {} cannot fit {} non-empty level blocks",
                        self.n,
                        levels.len()
                    )));
                }
                if levels.iter().any(|l| !l.is_finite()) {
                    return Err(Error::BadSpec("step levels must be finite".into()));
                }
            }
            SynthFamily::Linear { slope, intercept } => {
                if !slope.is_finite() || !intercept.is_finite() {
                    return Err(Error::BadSpec("slope and intercept must be finite".into()));
                }
            }
            SynthFamily::Mixed { segments } => {
                if segments.is_empty() {
                    return Err(Error::BadSpec("mixed family needs at least one segment".into()));
                }
                if segments.iter().any(|s| s.len == 0) {
                    return Err(Error::BadSpec("mixed segments must be non-empty".into()));
                }
                let total: usize = segments.iter().map(|s| s.len).sum();
                if total != self.n {
                    return Err(Error::BadSpec(format!(
                        "segment lengths sum to {total} but n = {}",
                        self.n
                    )));
                }
            }
            SynthFamily::ConstantNoise { value } => {
                if !value.is_finite() {
                    return Err(Error::BadSpec("constant value must be finite".into()));
                }
            }
        }
        Ok(())
    }
}

/// Generates the series described by `spec`: x = 1..=n plus the family's
/// base shape, with optional Gaussian noise on y.
pub fn generate(spec: &SynthSpec) -> Result<DataSeries> {
    spec.validate()?;
    let n = spec.n;
    let mut ys = vec![0.0f64; n];
    match &spec.family {
        SynthFamily::Step { levels } => {
            let mut lo = 0usize;
            let bounds = step_boundaries(n, levels.len());
            for (level, &hi) in levels.iter().zip(bounds.iter().chain(std::iter::once(&n))) {
                ys[lo..hi].fill(*level);
                lo = hi;
            }
        }
        SynthFamily::Linear { slope, intercept } => {
            for (i, y) in ys.iter_mut().enumerate() {
                *y = slope * (i + 1) as f64 + intercept;
            }
        }
        SynthFamily::Mixed { segments } => {
            let mut at = 0usize;
            for seg in segments {
                for (offset, y) in ys.iter_mut().enumerate().skip(at).take(seg.len) {
                    let x = (offset + 1) as f64;
                    *y = match seg.kind {
                        SegmentKind::Constant { value } => value,
                        SegmentKind::Ramp { slope, intercept } => slope * x + intercept,
                    };
                }
                at += seg.len;
            }
        }
        SynthFamily::ConstantNoise { value } => ys.fill(*value),
    }
    if spec.noise_sd > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal = Normal::new(0.0, spec.noise_sd)
            .map_err(|e| Error::BadSpec(format!("bad noise distribution: {e}")))?;
        for y in ys.iter_mut() {
            *y += normal.sample(&mut rng);
        }
    }
    let points: Vec<(f64, f64)> = ys
        .into_iter()
        .enumerate()
        .map(|(i, y)| ((i + 1) as f64, y))
        .collect();
    DataSeries::canonicalize(&points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Rounds to 12 significant digits, the precision all reported numbers
/// carry.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(11 - magnitude);
    (x * factor).round() / factor
}

#[derive(Debug, Serialize, Deserialize)]
struct ResultDoc {
    objective: Objective,
    k: usize,
    cut_indices: Vec<usize>,
    cut_points: Vec<f64>,
    total_cost: f64,
    partitions: Vec<PartitionSummary>,
    solver: crate::series::SolverKind,
    tie_split_flags: Vec<bool>,
}

impl ResultDoc {
    fn from_result(result: &SolveResult) -> Self {
        ResultDoc {
            objective: result.objective,
            k: result.k(),
            cut_indices: result.partitioning.cuts().to_vec(),
            cut_points: result
                .cut_points
                .values()
                .iter()
                .copied()
                .map(round_sig12)
                .collect(),
            total_cost: round_sig12(result.total_cost),
            partitions: result
                .per_partition
                .iter()
                .map(|p| PartitionSummary {
                    lo: p.lo,
                    hi: p.hi,
                    mean: round_sig12(p.mean),
                    cost: round_sig12(p.cost),
                })
                .collect(),
            solver: result.solver,
            tie_split_flags: result.tie_split_flags.clone(),
        }
    }
}

/// Serializes a solve result as JSON or CSV. The CSV layout is one row
/// per partition plus a trailing summary row.
pub fn write_result(result: &SolveResult, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
    let doc = ResultDoc::from_result(result);
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &doc)
                .map_err(|e| Error::WriteFailed(std::io::Error::other(e)))?;
            out.write_all(b"\n")?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "kind",
                "index",
                "lo",
                "hi",
                "mean",
                "cost",
                "cut_point",
                "tie_split",
                "objective",
                "k",
                "solver",
            ])?;
            for (i, p) in doc.partitions.iter().enumerate() {
                let (cut_point, tie_split) = if i < doc.cut_points.len() {
                    (
                        doc.cut_points[i].to_string(),
                        doc.tie_split_flags[i].to_string(),
                    )
                } else {
                    (String::new(), String::new())
                };
                w.write_record([
                    "partition".to_string(),
                    (i + 1).to_string(),
                    p.lo.to_string(),
                    p.hi.to_string(),
                    p.mean.to_string(),
                    p.cost.to_string(),
                    cut_point,
                    tie_split,
                    String::new(),
                    String::new(),
                    String::new(),
                ])?;
            }
            w.write_record([
                "summary".to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                doc.total_cost.to_string(),
                String::new(),
                String::new(),
                doc.objective.to_string(),
                doc.k.to_string(),
                doc.solver.to_string(),
            ])?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Writes the raw series as `x,y` CSV with full round-trip precision.
pub fn write_series_csv(series: &DataSeries, out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y"])?;
    for &(x, y) in series.points() {
        w.write_record([x.to_string(), y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Where a run's data comes from: exactly one source.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Csv {
        path: PathBuf,
        x_col: ColumnSelector,
        y_col: ColumnSelector,
    },
    Synth(SynthSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Dp,
    Brute,
}

/// A fully resolved solve job: one input source, a partition count, an
/// objective, and output formatting.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: InputSource,
    pub k: usize,
    pub objective: Objective,
    pub method: SolveMethod,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn load_series(&self) -> Result<(DataSeries, Option<LoadReport>)> {
        match &self.source {
            InputSource::Csv { path, x_col, y_col } => {
                let loaded = load_csv(path, x_col, y_col)?;
                Ok((loaded.series, Some(loaded.report)))
            }
            InputSource::Synth(spec) => Ok((generate(spec)?, None)),
        }
    }

    pub fn run(&self) -> Result<SolveResult> {
        let (series, _) = self.load_series()?;
        match self.method {
            SolveMethod::Dp => optimal_partition(&series, self.k, self.objective),
            SolveMethod::Brute => brute_force_partition(&series, self.k, self.objective),
        }
    }
}
