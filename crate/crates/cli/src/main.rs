//! `ordcut` — impact-driven discretization of numeric attributes.
//!
//! Exit codes: 0 success, 1 oracle-check mismatch, 2 usage error,
//! 3 data error, 4 solver capacity error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordcut::{
    agreement_score, brute_force_partition, classify_match, cost_curve, equal_frequency,
    equal_width, generate, load_csv, optimal_partition, write_result, write_series_csv,
    ColumnSelector, CutPoints, DataSeries, Error, InputSource, Objective, OutputFormat, RunConfig,
    Segment, SegmentKind, SolveMethod, SynthFamily, SynthSpec, DEFAULT_CUT_TOLERANCE,
};

#[derive(Parser)]
#[command(
    name = "ordcut",
    version,
    about = "Exact impact-driven discretization: order-preserving cut points that minimize \
             within-partition deviation of y around the partition mean"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Lsqm,
    Ladm,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Lsqm => Objective::Lsqm,
            ObjectiveArg::Ladm => Objective::Ladm,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dp,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineMethodArg {
    EqualWidth,
    EqualFrequency,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Step,
    Linear,
    Mixed,
    ConstantNoise,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the optimal k-partitioning of a CSV series
    Discretize {
        #[arg(long)]
        input: PathBuf,
        /// x column, by zero-based index or header name
        #[arg(long)]
        x_col: String,
        /// y column, by zero-based index or header name
        #[arg(long)]
        y_col: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value = "dp")]
        method: MethodArg,
        /// Output file; stdout when omitted
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Optimal cost for every partition count 1..=k-max, as JSON
    Curve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x_col: String,
        #[arg(long)]
        y_col: String,
        #[arg(long)]
        k_max: usize,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classical unsupervised binning edges for comparison
    Baseline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x_col: String,
        #[arg(long)]
        y_col: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        method: BaselineMethodArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Score agreement between two comma-separated cut-point lists
    Compare {
        #[arg(long)]
        cuts_a: String,
        #[arg(long)]
        cuts_b: String,
        /// x-axis tolerance for treating two cuts as matching
        #[arg(long, default_value_t = DEFAULT_CUT_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a deterministic synthetic series as CSV
    Synth {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Number of points (derived from --segments for mixed)
        #[arg(long)]
        n: Option<usize>,
        /// Step levels, e.g. "0,10,25"
        #[arg(long, default_value = "")]
        levels: String,
        #[arg(long, default_value_t = 1.0)]
        slope: f64,
        #[arg(long, default_value_t = 0.0)]
        intercept: f64,
        /// Constant value for the constant-noise family
        #[arg(long, default_value_t = 0.0)]
        value: f64,
        /// Mixed segments, e.g. "const:5:20,ramp:0.5:0:30"
        /// (const:VALUE:LEN, ramp:SLOPE:INTERCEPT:LEN)
        #[arg(long, default_value = "")]
        segments: String,
        #[arg(long, default_value_t = 0.0)]
        noise_sd: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized self-check: DP against the brute-force oracle
    OracleCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_class(&err))
        }
    }
}

fn exit_class(err: &Error) -> u8 {
    match err {
        Error::KZero | Error::OutOfRange(_) | Error::BadSpec(_) | Error::BadPartitioning(_) => 2,
        Error::KTooLarge { .. } | Error::EnumerationTooLarge { .. } => 4,
        _ => 3,
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Discretize {
            input,
            x_col,
            y_col,
            k,
            objective,
            method,
            output,
            format,
        } => {
            let config = RunConfig {
                source: InputSource::Csv {
                    path: input,
                    x_col: selector(&x_col),
                    y_col: selector(&y_col),
                },
                k,
                objective: objective.into(),
                method: match method {
                    MethodArg::Dp => SolveMethod::Dp,
                    MethodArg::Brute => SolveMethod::Brute,
                },
                format: match format {
                    FormatArg::Json => OutputFormat::Json,
                    FormatArg::Csv => OutputFormat::Csv,
                },
            };
            let (series, report) = config.load_series()?;
            if let Some(report) = report {
                eprintln!(
                    "loaded {} rows ({} used, {} skipped, header: {})",
                    report.rows_read, report.rows_used, report.rows_skipped,
                    report.header_detected
                );
            }
            let result = match config.method {
                SolveMethod::Dp => optimal_partition(&series, config.k, config.objective)?,
                SolveMethod::Brute => brute_force_partition(&series, config.k, config.objective)?,
            };
            let mut out = open_output(&output)?;
            write_result(&result, config.format, &mut out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Curve {
            input,
            x_col,
            y_col,
            k_max,
            objective,
            output,
        } => {
            let series = load_input(&input, &x_col, &y_col)?;
            let objective: Objective = objective.into();
            let curve = cost_curve(&series, k_max, objective)?;
            let doc = serde_json::json!({
                "objective": objective,
                "k_max": k_max,
                "curve": curve
                    .iter()
                    .map(|&(k, cost)| serde_json::json!({"k": k, "cost": ordcut::io::round_sig12(cost)}))
                    .collect::<Vec<_>>(),
            });
            emit_json(&doc, &output)
        }

        Command::Baseline {
            input,
            x_col,
            y_col,
            k,
            method,
            output,
        } => {
            let series = load_input(&input, &x_col, &y_col)?;
            let spec = match method {
                BaselineMethodArg::EqualWidth => equal_width(&series, k)?,
                BaselineMethodArg::EqualFrequency => equal_frequency(&series, k)?,
            };
            emit_json(&serde_json::to_value(&spec).expect("binspec serializes"), &output)
        }

        Command::Compare {
            cuts_a,
            cuts_b,
            tolerance,
            output,
        } => {
            if !(tolerance >= 0.0 && tolerance.is_finite()) {
                return Err(Error::OutOfRange(tolerance));
            }
            let a = parse_cuts(&cuts_a)?;
            let b = parse_cuts(&cuts_b)?;
            let report = agreement_score(&a, &b, tolerance);
            let band = classify_match(report.score)?;
            let mut doc = serde_json::to_value(&report).expect("report serializes");
            doc["band"] = serde_json::to_value(band).expect("band serializes");
            emit_json(&doc, &output)
        }

        Command::Synth {
            family,
            n,
            levels,
            slope,
            intercept,
            value,
            segments,
            noise_sd,
            seed,
            out,
        } => {
            let spec = build_synth_spec(
                family, n, &levels, slope, intercept, value, &segments, noise_sd, seed,
            )?;
            let series = generate(&spec)?;
            let mut out = open_output(&out)?;
            write_series_csv(&series, &mut out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::OracleCheck { n, k, trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut mismatches = Vec::new();
            for trial in 0..trials {
                let pts: Vec<(f64, f64)> = (0..n)
                    .map(|i| ((i + 1) as f64, rng.gen_range(0.0..100.0)))
                    .collect();
                let series = ordcut::canonicalize(&pts)?;
                for objective in [Objective::Lsqm, Objective::Ladm] {
                    let dp = optimal_partition(&series, k, objective)?;
                    let brute = brute_force_partition(&series, k, objective)?;
                    let tol = 1e-9 * dp.total_cost.abs().max(brute.total_cost.abs());
                    let costs_agree = (dp.total_cost - brute.total_cost).abs() <= tol;
                    let cuts_agree = dp.partitioning.cuts() == brute.partitioning.cuts();
                    if !costs_agree || !cuts_agree {
                        mismatches.push(serde_json::json!({
                            "trial": trial,
                            "objective": objective,
                            "dp_cost": dp.total_cost,
                            "brute_cost": brute.total_cost,
                            "dp_cuts": dp.partitioning.cuts(),
                            "brute_cuts": brute.partitioning.cuts(),
                        }));
                    }
                }
            }
            let passed = mismatches.is_empty();
            let doc = serde_json::json!({
                "n": n,
                "k": k,
                "trials": trials,
                "seed": seed,
                "status": if passed { "pass" } else { "fail" },
                "mismatches": mismatches,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn selector(s: &str) -> ColumnSelector {
    s.parse().expect("column selectors parse infallibly")
}

fn load_input(path: &std::path::Path, x_col: &str, y_col: &str) -> Result<DataSeries, Error> {
    let loaded = load_csv(path, &selector(x_col), &selector(y_col))?;
    eprintln!(
        "loaded {} rows ({} used, {} skipped, header: {})",
        loaded.report.rows_read,
        loaded.report.rows_used,
        loaded.report.rows_skipped,
        loaded.report.header_detected
    );
    Ok(loaded.series)
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn emit_json(doc: &serde_json::Value, output: &Option<PathBuf>) -> Result<ExitCode, Error> {
    let mut out = open_output(output)?;
    serde_json::to_writer_pretty(&mut out, doc)
        .map_err(|e| Error::WriteFailed(std::io::Error::other(e)))?;
    out.write_all(b"\n")?;
    Ok(ExitCode::SUCCESS)
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("cannot parse {:?} as a number", p.trim()))
        })
        .collect()
}

fn parse_cuts(s: &str) -> Result<CutPoints, Error> {
    let values = parse_floats(s).map_err(Error::BadPartitioning)?;
    CutPoints::from_unsorted(values)
}

fn parse_segments(s: &str) -> Result<Vec<Segment>, Error> {
    s.split(',')
        .map(|seg| {
            let parts: Vec<&str> = seg.trim().split(':').collect();
            let bad = || Error::BadSpec(format!("cannot parse segment {seg:?}"));
            let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
            let len = |p: &str| p.trim().parse::<usize>().map_err(|_| bad());
            match parts.as_slice() {
                ["const", v, l] => Ok(Segment {
                    len: len(l)?,
                    kind: SegmentKind::Constant { value: num(v)? },
                }),
                ["ramp", sl, ic, l] => Ok(Segment {
                    len: len(l)?,
                    kind: SegmentKind::Ramp {
                        slope: num(sl)?,
                        intercept: num(ic)?,
                    },
                }),
                _ => Err(bad()),
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn build_synth_spec(
    family: FamilyArg,
    n: Option<usize>,
    levels: &str,
    slope: f64,
    intercept: f64,
    value: f64,
    segments: &str,
    noise_sd: f64,
    seed: u64,
) -> Result<SynthSpec, Error> {
    let need_n = || n.ok_or_else(|| Error::BadSpec("--n is required for this family".into()));
    let (family, n) = match family {
        FamilyArg::Step => (
            SynthFamily::Step {
                levels: parse_floats(levels).map_err(Error::BadSpec)?,
            },
            need_n()?,
        ),
        FamilyArg::Linear => (SynthFamily::Linear { slope, intercept }, need_n()?),
        FamilyArg::ConstantNoise => (SynthFamily::ConstantNoise { value }, need_n()?),
        FamilyArg::Mixed => {
            if segments.trim().is_empty() {
                return Err(Error::BadSpec("--segments is required for mixed".into()));
            }
            let segments = parse_segments(segments)?;
            let total: usize = segments.iter().map(|s| s.len).sum();
            if let Some(n) = n {
                if n != total {
                    return Err(Error::BadSpec(format!(
                        "--n {n} disagrees with segment lengths summing to {total}"
                    )));
                }
            }
            (SynthFamily::Mixed { segments }, total)
        }
    };
    Ok(SynthSpec {
        family,
        n,
        noise_sd,
        seed,
    })
}
