//! `gainlattice`: estimate the gain `τ` of a quantized counting detector from
//! the integers it reports.
//!
//! Exit status: 0 on success, 2 for usage or input parse errors, 3 when an
//! estimator rejects the data, 1 when an output file cannot be written.

mod figures;
mod input;
mod svg;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gainlattice::alt::{double_poisson_mle_counts, fourier_estimate, regression_estimate};
use gainlattice::kde::{kde, Bandwidth};
use gainlattice::simulation::{
    run_experiment_with, write_experiment_csv, write_kde_csv, CountLaw, Method, SimConfig,
};
use gainlattice::{
    bound_report, build_empirical_lattice, enumerate_compatible_set, is_compatible,
    largest_compatible_interval, recover_count_distribution, recover_indices, Dataset,
    EmpiricalLattice, Execution, Rational, RationalInterval,
};
use serde::Serialize;

use crate::figures::Figure;

#[derive(Parser)]
#[command(
    name = "gainlattice",
    version,
    about = "Gain estimation for quantized count data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the gain with one estimator and print a JSON report.
    Estimate {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value_t = EstimateMethod::Compat)]
        method: EstimateMethod,
    },
    /// Print the closed-form upper bounds as JSON.
    Bounds {
        #[command(flatten)]
        input: InputArg,
    },
    /// Print every compatible interval above 1 as JSON.
    CompatSet {
        #[command(flatten)]
        input: InputArg,
    },
    /// Recover the latent counts for a given gain and print their frequencies.
    Recover {
        #[command(flatten)]
        input: InputArg,
        /// Gain as "p/q", an integer, or a terminating decimal.
        #[arg(long, value_parser = parse_rational)]
        tau: Rational,
        /// Print the `x,n` mapping of each distinct observation instead.
        #[arg(long)]
        by_value: bool,
    },
    /// Run a seeded Monte Carlo experiment and write one CSV row per repeat and method.
    Simulate {
        #[arg(long, value_parser = parse_rational)]
        tau: Rational,
        /// `poisson:<mean>`, `range:<lo>:<hi>` or `explicit:<n1>,<n2>,...`.
        #[arg(long, value_parser = parse_law)]
        law: CountLaw,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        repeats: usize,
        #[arg(long)]
        seed: u64,
        /// Comma-separated estimator tags; all of them by default.
        #[arg(long, value_delimiter = ',', value_parser = parse_method)]
        methods: Vec<Method>,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a kernel density estimate of one method's estimates.
        #[arg(long)]
        kde_out: Option<PathBuf>,
        #[arg(long, value_parser = parse_method, default_value = "compat")]
        kde_method: Method,
        #[arg(long)]
        sequential: bool,
    },
    /// Regenerate the data and an SVG rendering of one figure, or all of them.
    Figures {
        #[arg(value_enum)]
        which: Figure,
        #[arg(long, default_value = "figures")]
        outdir: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args)]
struct InputArg {
    /// Observation file; "-" or omitted reads stdin.
    #[arg(default_value = "-")]
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimateMethod {
    Compat,
    DoublePoisson,
    Fourier,
    Regression,
}

impl EstimateMethod {
    fn tag(self) -> &'static str {
        match self {
            EstimateMethod::Compat => "compat",
            EstimateMethod::DoublePoisson => "double-poisson",
            EstimateMethod::Fourier => "fourier",
            EstimateMethod::Regression => "regression",
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Estimation(gainlattice::Error),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Estimation(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Io(msg) => f.write_str(msg),
            Failure::Estimation(e) => write!(f, "{e}"),
        }
    }
}

impl From<gainlattice::Error> for Failure {
    fn from(e: gainlattice::Error) -> Self {
        Failure::Estimation(e)
    }
}

pub fn io_failure(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let t: Rational = s.parse().map_err(|e: gainlattice::Error| e.to_string())?;
    if !t.is_positive() {
        return Err(format!("gain must be positive, got {t}"));
    }
    Ok(t)
}

fn parse_law(s: &str) -> Result<CountLaw, String> {
    s.parse().map_err(|e: gainlattice::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: gainlattice::Error| e.to_string())
}

fn load(arg: &InputArg) -> Result<Dataset, Failure> {
    let text = input::read_source(&arg.input)
        .map_err(|e| Failure::Usage(format!("{}: {e}", arg.input.display())))?;
    input::parse_observations(&text).map_err(|e| {
        let name = arg.input.display();
        if e.line == 0 {
            Failure::Usage(format!("{name}: {}", e.message))
        } else {
            Failure::Usage(format!("{name}:{}: {}", e.line, e.message))
        }
    })
}

fn exact_pair(iv: &RationalInterval) -> [String; 2] {
    [iv.lo.to_string(), iv.hi.to_string()]
}

fn float_pair(iv: &RationalInterval) -> [f64; 2] {
    [iv.lo.to_f64(), iv.hi.to_f64()]
}

#[derive(Serialize)]
struct EstimateReport {
    method: &'static str,
    /// Exact "p/q" for the lattice estimators, a decimal float otherwise.
    estimate: String,
    estimate_f64: f64,
    interval: Option<[String; 2]>,
    interval_f64: Option<[f64; 2]>,
    precision: Option<String>,
    precision_f64: Option<f64>,
    steps: Option<u64>,
    warnings: Vec<String>,
}

impl EstimateReport {
    fn float(method: EstimateMethod, value: f64, s: &EmpiricalLattice) -> Self {
        let mut warnings = Vec::new();
        incompatibility_warning(
            Rational::from_f64(value).as_ref(),
            &value.to_string(),
            s,
            &mut warnings,
        );
        EstimateReport {
            method: method.tag(),
            estimate: value.to_string(),
            estimate_f64: value,
            interval: None,
            interval_f64: None,
            precision: None,
            precision_f64: None,
            steps: None,
            warnings,
        }
    }
}

fn incompatibility_warning(
    exact: Option<&Rational>,
    shown: &str,
    s: &EmpiricalLattice,
    warnings: &mut Vec<String>,
) {
    let compatible = exact.is_some_and(|t| t.is_positive() && is_compatible(t, s).unwrap_or(false));
    if !compatible {
        warnings.push(format!(
            "estimate {shown} is not compatible with the observed values"
        ));
    }
}

fn estimate(data: &Dataset, method: EstimateMethod) -> Result<EstimateReport, Failure> {
    let s = build_empirical_lattice(data)?;
    let report = match method {
        EstimateMethod::Compat => {
            let est = largest_compatible_interval(&s)?;
            let mut warnings = Vec::new();
            let missing = est.missing_count(&s);
            if missing > 0 {
                warnings.push(format!("{missing} lattice values below the largest observation are missing from the data"));
            }
            EstimateReport {
                method: method.tag(),
                estimate: est.point.to_string(),
                estimate_f64: est.point.to_f64(),
                interval: Some(exact_pair(&est.interval)),
                interval_f64: Some(float_pair(&est.interval)),
                precision: Some(est.precision.to_string()),
                precision_f64: Some(est.precision.to_f64()),
                steps: Some(est.scan_steps),
                warnings,
            }
        }
        EstimateMethod::Fourier => {
            let fit = fourier_estimate(&s)?;
            let mut warnings = Vec::new();
            incompatibility_warning(
                Some(&fit.tau_f_exact),
                &fit.tau_f_exact.to_string(),
                &s,
                &mut warnings,
            );
            EstimateReport {
                method: method.tag(),
                estimate: fit.tau_f_exact.to_string(),
                estimate_f64: fit.tau_f,
                interval: None,
                interval_f64: None,
                precision: None,
                precision_f64: None,
                steps: None,
                warnings,
            }
        }
        EstimateMethod::Regression => {
            EstimateReport::float(method, regression_estimate(&s)?.slope, &s)
        }
        EstimateMethod::DoublePoisson => {
            let fit = double_poisson_mle_counts(data)?;
            EstimateReport {
                precision_f64: Some(fit.stddev_tau),
                ..EstimateReport::float(method, fit.tau_hat, &s)
            }
        }
    };
    Ok(report)
}

#[derive(Serialize)]
struct BoundsReport {
    pairwise_bound: Option<String>,
    pairwise_bound_f64: Option<f64>,
    interval_bound: Option<String>,
    interval_bound_f64: Option<f64>,
    density_bound: String,
    density_bound_f64: f64,
    witnesses: gainlattice::bounds::BoundWitnesses,
}

#[derive(Serialize)]
struct CompatSetReport {
    intervals: Vec<[String; 2]>,
    intervals_f64: Vec<[f64; 2]>,
    includes_unit: bool,
    top: Option<[String; 2]>,
}

fn print_json(value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_failure(dir))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(io_failure(path))
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Estimate { input, method } => print_json(&estimate(&load(&input)?, method)?),
        Command::Bounds { input } => {
            let s = build_empirical_lattice(&load(&input)?)?;
            let r = bound_report(&s)?;
            print_json(&BoundsReport {
                pairwise_bound_f64: r.pairwise_bound.as_ref().map(Rational::to_f64),
                pairwise_bound: r.pairwise_bound.as_ref().map(Rational::to_string),
                interval_bound_f64: r.interval_bound.as_ref().map(Rational::to_f64),
                interval_bound: r.interval_bound.as_ref().map(Rational::to_string),
                density_bound_f64: r.density_bound.to_f64(),
                density_bound: r.density_bound.to_string(),
                witnesses: r.witnesses,
            })
        }
        Command::CompatSet { input } => {
            let s = build_empirical_lattice(&load(&input)?)?;
            let set = enumerate_compatible_set(&s)?;
            print_json(&CompatSetReport {
                intervals: set.intervals.iter().map(exact_pair).collect(),
                intervals_f64: set.intervals.iter().map(float_pair).collect(),
                includes_unit: set.includes_unit,
                top: set.top().map(exact_pair),
            })
        }
        Command::Recover {
            input,
            tau,
            by_value,
        } => {
            let data = load(&input)?;
            let stdout = io::stdout();
            let mut out = stdout.lock();
            let written = if by_value {
                let pairs = recover_indices(&tau, &build_empirical_lattice(&data)?)?;
                writeln!(out, "x,n").and_then(|_| {
                    pairs
                        .iter()
                        .try_for_each(|p| writeln!(out, "{},{}", p.x, p.k))
                })
            } else {
                let table = recover_count_distribution(&tau, &data)?;
                writeln!(out, "n,count")
                    .and_then(|_| table.iter().try_for_each(|(n, c)| writeln!(out, "{n},{c}")))
            };
            written.map_err(|e| Failure::Io(e.to_string()))
        }
        Command::Simulate {
            tau,
            law,
            size,
            repeats,
            seed,
            methods,
            out,
            kde_out,
            kde_method,
            sequential,
        } => {
            let methods = if methods.is_empty() {
                Method::ALL.to_vec()
            } else {
                methods
            };
            let cfg = SimConfig {
                tau,
                law,
                sample_size: size,
                repeats,
                seed,
            };
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            if kde_out.is_some() && !methods.contains(&kde_method) {
                return Err(Failure::Usage(format!(
                    "--kde-method {kde_method} is not among --methods"
                )));
            }
            let result = run_experiment_with(&cfg, &methods, execution(sequential))?;
            match &out {
                Some(path) => {
                    let mut w = create(path)?;
                    write_experiment_csv(&result, &mut w)
                        .and_then(|_| w.flush())
                        .map_err(io_failure(path))?;
                }
                None => write_experiment_csv(&result, io::stdout().lock())
                    .map_err(|e| Failure::Io(e.to_string()))?,
            }
            if let Some(path) = &kde_out {
                let curve = kde(&result.values(kde_method), Bandwidth::Silverman)?;
                let mut w = create(path)?;
                write_kde_csv(&curve, &mut w)
                    .and_then(|_| w.flush())
                    .map_err(io_failure(path))?;
            }
            for s in &result.summary {
                eprintln!(
                    "{}: mean {:.6} std {:.6} bias {:+.6} compatible {:.3} failures {}",
                    s.method, s.mean, s.std, s.bias, s.compatibility_rate, s.failures
                );
            }
            Ok(())
        }
        Command::Figures {
            which,
            outdir,
            seed,
            sequential,
        } => {
            for path in figures::generate(which, &outdir, seed, execution(sequential))? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
