//! Seeded synthetic datasets `X = floor(τ N)` and repeated experiments.
//!
//! Randomness comes from ChaCha8 with the 64-bit seed expanded by
//! `SeedableRng::seed_from_u64` and the repeat index selecting the stream, so
//! every repeat is an independent, reproducible counter-based sequence.
//! Uniforms take the top 53 bits of each 64-bit output. Poisson draws use
//! sequential inversion for `λ <= 30`; larger means are split into
//! `ceil(λ/30)` equal parts whose inversions are summed.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alt::{double_poisson_mle, fourier_estimate, regression_estimate};
use crate::compat::largest_compatible_interval;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::kde::KdeCurve;
use crate::lattice::{build_empirical_lattice, is_compatible, Dataset, EmpiricalLattice};
use crate::rational::{Rational, RationalInterval};

const INVERSION_LIMIT: f64 = 30.0;

/// Distribution of the latent count `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CountLaw {
    Poisson {
        lambda: f64,
    },
    /// Uniform on the integers `lo..=hi`.
    FixedRange {
        lo: u64,
        hi: u64,
    },
    /// The listed values in order, cycled to the sample size.
    Explicit(Vec<u64>),
}

impl fmt::Display for CountLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountLaw::Poisson { lambda } => write!(f, "poisson:{lambda}"),
            CountLaw::FixedRange { lo, hi } => write!(f, "range:{lo}:{hi}"),
            CountLaw::Explicit(values) => {
                let parts: Vec<String> = values.iter().map(u64::to_string).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

/// `poisson:<λ>`, `range:<lo>:<hi>` or `explicit:<n1>,<n2>,...`.
impl FromStr for CountLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unrecognized count law {s:?}"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let law = match kind {
            "poisson" => CountLaw::Poisson {
                lambda: rest.parse().map_err(|_| bad())?,
            },
            "range" => {
                let (lo, hi) = rest.split_once(':').ok_or_else(bad)?;
                CountLaw::FixedRange {
                    lo: lo.parse().map_err(|_| bad())?,
                    hi: hi.parse().map_err(|_| bad())?,
                }
            }
            "explicit" => CountLaw::Explicit(
                rest.split(',')
                    .map(|v| v.trim().parse().map_err(|_| bad()))
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(bad()),
        };
        Ok(law)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub tau: Rational,
    pub law: CountLaw,
    pub sample_size: usize,
    pub repeats: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.tau.is_positive() {
            return Err(Error::NonPositiveParameter(self.tau.to_string()));
        }
        if self.sample_size == 0 || self.repeats == 0 {
            return Err(Error::InvalidArgument(
                "sample size and repeats must be positive".into(),
            ));
        }
        match &self.law {
            CountLaw::Poisson { lambda } if !(*lambda > 0.0 && lambda.is_finite()) => Err(
                Error::InvalidArgument(format!("Poisson mean must be positive, got {lambda}")),
            ),
            CountLaw::FixedRange { lo, hi } if lo > hi => {
                Err(Error::InvalidArgument(format!("empty range {lo}..={hi}")))
            }
            CountLaw::Explicit(values) if values.is_empty() => Err(Error::InvalidArgument(
                "explicit law needs at least one value".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// The per-repeat random stream.
pub struct RepeatRng(ChaCha8Rng);

impl RepeatRng {
    pub fn new(seed: u64, repeat_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(repeat_index);
        RepeatRng(rng)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `lo..=hi` by rejection, free of modulo bias.
    pub fn uniform_int(&mut self, lo: u64, hi: u64) -> u64 {
        let span = hi - lo;
        if span == u64::MAX {
            return self.next_u64();
        }
        let range = span + 1;
        let zone = u64::MAX - (u64::MAX % range) - 1;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return lo + v % range;
            }
        }
    }

    fn poisson_inversion(&mut self, lambda: f64) -> u64 {
        let u = self.uniform();
        let mut k = 0u64;
        let mut p = (-lambda).exp();
        let mut cdf = p;
        while u >= cdf {
            k += 1;
            p *= lambda / k as f64;
            let next = cdf + p;
            if next == cdf {
                // Remaining tail mass below f64 resolution.
                break;
            }
            cdf = next;
        }
        k
    }

    pub fn poisson(&mut self, lambda: f64) -> u64 {
        if lambda <= INVERSION_LIMIT {
            return self.poisson_inversion(lambda);
        }
        let parts = (lambda / INVERSION_LIMIT).ceil() as u64;
        let share = lambda / parts as f64;
        (0..parts).map(|_| self.poisson_inversion(share)).sum()
    }
}

/// Latent counts for one repeat.
pub fn generate_counts(cfg: &SimConfig, repeat_index: usize) -> Result<Vec<u64>> {
    cfg.validate()?;
    let mut rng = RepeatRng::new(cfg.seed, repeat_index as u64);
    let counts = match &cfg.law {
        CountLaw::Poisson { lambda } => {
            (0..cfg.sample_size).map(|_| rng.poisson(*lambda)).collect()
        }
        CountLaw::FixedRange { lo, hi } => (0..cfg.sample_size)
            .map(|_| rng.uniform_int(*lo, *hi))
            .collect(),
        CountLaw::Explicit(values) => values
            .iter()
            .copied()
            .cycle()
            .take(cfg.sample_size)
            .collect(),
    };
    Ok(counts)
}

/// `floor(τ k)`, exact.
pub fn quantize(tau: &Rational, k: u64) -> u64 {
    let product = BigInt::from(k) * tau.numer();
    let floor = num_integer::Integer::div_floor(&product, tau.denom());
    floor.to_u64().expect("quantized value fits in u64")
}

pub fn generate_dataset(cfg: &SimConfig, repeat_index: usize) -> Result<Dataset> {
    let counts = generate_counts(cfg, repeat_index)?;
    Ok(Dataset::new(
        counts.into_iter().map(|k| quantize(&cfg.tau, k)).collect(),
    ))
}

/// Lattice points `floor(τ k)`, `1 <= k <= max N`, that no draw produced.
pub fn missing_values(counts: &[u64]) -> u64 {
    let mut distinct: Vec<u64> = counts.iter().copied().filter(|&k| k > 0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    distinct
        .last()
        .map_or(0, |&max| max - distinct.len() as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Compat,
    DoublePoisson,
    /// Double Poisson fit on the unquantized `τ N`.
    DoublePoissonRaw,
    Fourier,
    Regression,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Compat,
        Method::DoublePoisson,
        Method::DoublePoissonRaw,
        Method::Fourier,
        Method::Regression,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Compat => "compat",
            Method::DoublePoisson => "double-poisson",
            Method::DoublePoissonRaw => "double-poisson-raw",
            Method::Fourier => "fourier",
            Method::Regression => "regression",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// One estimator's output on one dataset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub method: Method,
    pub value: Option<f64>,
    /// Exact rational form of the estimate, used for the compatibility check.
    pub exact: Option<Rational>,
    pub interval: Option<RationalInterval>,
    pub compatible: bool,
    pub error: Option<String>,
}

impl Estimate {
    fn failed(method: Method, err: Error) -> Self {
        Estimate {
            method,
            value: None,
            exact: None,
            interval: None,
            compatible: false,
            error: Some(err.to_string()),
        }
    }
}

fn exact_estimate(
    method: Method,
    exact: Rational,
    interval: Option<RationalInterval>,
    s: &EmpiricalLattice,
) -> Estimate {
    let compatible = exact.is_positive() && is_compatible(&exact, s).unwrap_or(false);
    Estimate {
        method,
        value: Some(exact.to_f64()),
        exact: Some(exact),
        interval,
        compatible,
        error: None,
    }
}

fn float_estimate(method: Method, value: f64, s: &EmpiricalLattice) -> Estimate {
    match Rational::from_f64(value) {
        Some(exact) => Estimate {
            value: Some(value),
            ..exact_estimate(method, exact, None, s)
        },
        None => Estimate::failed(
            method,
            Error::InvalidArgument(format!("non-finite estimate {value}")),
        ),
    }
}

/// Runs one estimator on a dataset whose latent counts are `counts`.
pub fn estimate_with(method: Method, tau: &Rational, counts: &[u64], data: &Dataset) -> Estimate {
    let s = match build_empirical_lattice(data) {
        Ok(s) => s,
        Err(e) => return Estimate::failed(method, e),
    };
    let outcome = match method {
        Method::Compat => largest_compatible_interval(&s)
            .map(|est| exact_estimate(method, est.point, Some(est.interval), &s)),
        Method::Fourier => {
            fourier_estimate(&s).map(|fit| exact_estimate(method, fit.tau_f_exact, None, &s))
        }
        Method::Regression => {
            regression_estimate(&s).map(|fit| float_estimate(method, fit.slope, &s))
        }
        Method::DoublePoisson => {
            let ys: Vec<f64> = data.samples.iter().map(|&x| x as f64).collect();
            double_poisson_mle(&ys).map(|fit| float_estimate(method, fit.tau_hat, &s))
        }
        Method::DoublePoissonRaw => {
            let t = tau.to_f64();
            let ys: Vec<f64> = counts.iter().map(|&k| t * k as f64).collect();
            double_poisson_mle(&ys).map(|fit| float_estimate(method, fit.tau_hat, &s))
        }
    };
    outcome.unwrap_or_else(|e| Estimate::failed(method, e))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepeatRecord {
    pub repeat_index: usize,
    pub missing_values: u64,
    pub observed: EmpiricalLattice,
    pub estimates: Vec<Estimate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    pub successes: usize,
    pub failures: usize,
    pub mean: f64,
    pub std: f64,
    /// `mean - τ`.
    pub bias: f64,
    /// Compatible estimates over all repeats; failures count as incompatible.
    pub compatibility_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: SimConfig,
    pub per_repeat: Vec<RepeatRecord>,
    pub summary: Vec<MethodSummary>,
}

impl ExperimentResult {
    /// Successful point estimates of one method, in repeat order.
    pub fn values(&self, method: Method) -> Vec<f64> {
        self.per_repeat
            .iter()
            .flat_map(|r| r.estimates.iter())
            .filter(|e| e.method == method)
            .filter_map(|e| e.value)
            .collect()
    }

    pub fn summary_for(&self, method: Method) -> Option<&MethodSummary> {
        self.summary.iter().find(|s| s.method == method)
    }
}

fn summarize(method: Method, tau: f64, records: &[RepeatRecord]) -> MethodSummary {
    let estimates: Vec<&Estimate> = records
        .iter()
        .flat_map(|r| r.estimates.iter())
        .filter(|e| e.method == method)
        .collect();
    let values: Vec<f64> = estimates.iter().filter_map(|e| e.value).collect();
    let n = values.len();
    let mean = if n > 0 {
        values.iter().sum::<f64>() / n as f64
    } else {
        f64::NAN
    };
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let compatible = estimates.iter().filter(|e| e.compatible).count();
    MethodSummary {
        method,
        successes: n,
        failures: estimates.len() - n,
        mean,
        std,
        bias: mean - tau,
        compatibility_rate: compatible as f64 / records.len().max(1) as f64,
    }
}

pub fn run_experiment(cfg: &SimConfig, methods: &[Method]) -> Result<ExperimentResult> {
    run_experiment_with(cfg, methods, Execution::default())
}

pub fn run_experiment_with(
    cfg: &SimConfig,
    methods: &[Method],
    exec: Execution,
) -> Result<ExperimentResult> {
    cfg.validate()?;
    if methods.is_empty() {
        return Err(Error::InvalidArgument("no estimator requested".into()));
    }
    let records = exec::map_range(exec, 0..cfg.repeats, |i| -> Result<RepeatRecord> {
        let counts = generate_counts(cfg, i)?;
        let data = Dataset::new(counts.iter().map(|&k| quantize(&cfg.tau, k)).collect());
        let observed = build_empirical_lattice(&data)?;
        Ok(RepeatRecord {
            repeat_index: i,
            missing_values: missing_values(&counts),
            estimates: methods
                .iter()
                .map(|&m| estimate_with(m, &cfg.tau, &counts, &data))
                .collect(),
            observed,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let tau = cfg.tau.to_f64();
    let summary = methods
        .iter()
        .map(|&m| summarize(m, tau, &records))
        .collect();
    Ok(ExperimentResult {
        config: cfg.clone(),
        per_repeat: records,
        summary,
    })
}

/// Largest compatible interval of `floor(τ k)`, `k` in `lo..=hi`, per gain.
pub fn precision_sweep(
    taus: &[Rational],
    lo: u64,
    hi: u64,
) -> Result<Vec<(Rational, RationalInterval)>> {
    precision_sweep_with(taus, lo, hi, Execution::default())
}

pub fn precision_sweep_with(
    taus: &[Rational],
    lo: u64,
    hi: u64,
    exec: Execution,
) -> Result<Vec<(Rational, RationalInterval)>> {
    if taus.iter().any(|t| *t <= Rational::one()) {
        return Err(Error::InvalidArgument("sweep gains must exceed 1".into()));
    }
    exec::map_slice(exec, taus, |tau| {
        let s = EmpiricalLattice::from_values((lo..=hi).map(|k| quantize(tau, k)))?;
        Ok((tau.clone(), largest_compatible_interval(&s)?.interval))
    })
    .into_iter()
    .collect()
}

fn opt<T: fmt::Display>(value: &Option<T>) -> String {
    value.as_ref().map_or_else(String::new, T::to_string)
}

/// One row per repeat and method:
/// `repeat_index,method,estimate,interval_lo,interval_hi,compatible`.
pub fn write_experiment_csv(result: &ExperimentResult, mut out: impl Write) -> io::Result<()> {
    writeln!(
        out,
        "repeat_index,method,estimate,interval_lo,interval_hi,compatible"
    )?;
    for record in &result.per_repeat {
        for e in &record.estimates {
            let (lo, hi) = match &e.interval {
                Some(iv) => (iv.lo.to_string(), iv.hi.to_string()),
                None => (String::new(), String::new()),
            };
            writeln!(
                out,
                "{},{},{},{},{},{}",
                record.repeat_index,
                e.method,
                opt(&e.value),
                lo,
                hi,
                u8::from(e.compatible)
            )?;
        }
    }
    Ok(())
}

pub fn write_kde_csv(curve: &KdeCurve, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "x,density")?;
    for (x, d) in curve.grid.iter().zip(&curve.density) {
        writeln!(out, "{x},{d}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::frac(p, q)
    }

    fn explicit(tau: Rational, values: Vec<u64>) -> SimConfig {
        SimConfig {
            tau,
            sample_size: values.len(),
            law: CountLaw::Explicit(values),
            repeats: 1,
            seed: 0,
        }
    }

    #[test]
    fn explicit_laws_reproduce_worked_examples() {
        let data = generate_dataset(&explicit(r(132, 100), (1..=10).collect()), 0).unwrap();
        assert_eq!(data.samples, vec![1, 2, 3, 5, 6, 7, 9, 10, 11, 13]);
        let data = generate_dataset(&explicit(r(68, 100), (1..=10).collect()), 0).unwrap();
        assert_eq!(data.samples, vec![0, 1, 2, 2, 3, 4, 4, 5, 6, 6]);
        let cfg = SimConfig {
            tau: r(1, 1),
            law: CountLaw::Poisson { lambda: 4.0 },
            sample_size: 50,
            repeats: 1,
            seed: 9,
        };
        assert_eq!(
            generate_dataset(&cfg, 0).unwrap().samples,
            generate_counts(&cfg, 0).unwrap()
        );
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let cfg = SimConfig {
            tau: r(33, 25),
            law: CountLaw::Poisson { lambda: 5.5 },
            sample_size: 15,
            repeats: 3,
            seed: 42,
        };
        assert_eq!(
            generate_dataset(&cfg, 1).unwrap(),
            generate_dataset(&cfg, 1).unwrap()
        );
        assert_ne!(
            generate_dataset(&cfg, 1).unwrap(),
            generate_dataset(&cfg, 2).unwrap()
        );
    }

    #[test]
    fn law_parsing() {
        assert_eq!(
            "poisson:5.5".parse::<CountLaw>().unwrap(),
            CountLaw::Poisson { lambda: 5.5 }
        );
        assert_eq!(
            "range:1:10".parse::<CountLaw>().unwrap(),
            CountLaw::FixedRange { lo: 1, hi: 10 }
        );
        assert_eq!(
            "explicit:1,2,3".parse::<CountLaw>().unwrap(),
            CountLaw::Explicit(vec![1, 2, 3])
        );
        for law in ["poisson:5.5", "range:1:10", "explicit:1,2,3"] {
            assert_eq!(law.parse::<CountLaw>().unwrap().to_string(), law);
        }
        assert!("gamma:2".parse::<CountLaw>().is_err());
        assert!("range:3".parse::<CountLaw>().is_err());
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = explicit(r(3, 2), vec![1, 2]);
        cfg.law = CountLaw::Poisson { lambda: -1.0 };
        assert!(generate_dataset(&cfg, 0).is_err());
        cfg.law = CountLaw::FixedRange { lo: 5, hi: 2 };
        assert!(generate_dataset(&cfg, 0).is_err());
        cfg.law = CountLaw::Explicit(vec![]);
        assert!(generate_dataset(&cfg, 0).is_err());
        let cfg = explicit(r(0, 1), vec![1, 2]);
        assert!(generate_dataset(&cfg, 0).is_err());
    }

    #[test]
    fn uniform_ints_cover_range() {
        let mut rng = RepeatRng::new(1, 0);
        let mut seen = [0u32; 10];
        for _ in 0..10_000 {
            seen[(rng.uniform_int(1, 10) - 1) as usize] += 1;
        }
        assert!(seen.iter().all(|&c| c > 800 && c < 1200), "{seen:?}");
    }

    #[test]
    fn poisson_small_mean_is_accurate() {
        let mut rng = RepeatRng::new(7, 0);
        let n = 200_000;
        let mean = (0..n).map(|_| rng.poisson(2.0)).sum::<u64>() as f64 / n as f64;
        assert!((mean - 2.0).abs() < 4.0 * (2.0f64 / n as f64).sqrt());
    }

    #[test]
    fn poisson_large_mean_split() {
        let mut rng = RepeatRng::new(3, 0);
        let n = 50_000;
        let draws: Vec<f64> = (0..n).map(|_| rng.poisson(100.0) as f64).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 100.0).abs() < 4.0 * (100.0 / n as f64).sqrt());
        assert!((var / 100.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn missing_value_count() {
        assert_eq!(missing_values(&[1, 2, 3, 3, 0]), 0);
        assert_eq!(missing_values(&[2, 5, 5]), 3);
        assert_eq!(missing_values(&[0, 0]), 0);
    }

    #[test]
    fn single_repeat_summary_matches_estimate() {
        let cfg = explicit(r(132, 100), (1..=10).collect());
        let result = run_experiment(&cfg, &[Method::Compat]).unwrap();
        assert_eq!(result.per_repeat.len(), 1);
        let est = &result.per_repeat[0].estimates[0];
        assert_eq!(est.exact, Some(r(79, 60)));
        assert!(est.compatible);
        let summary = result.summary_for(Method::Compat).unwrap();
        assert_eq!(summary.mean, r(79, 60).to_f64());
        assert_eq!(summary.std, 0.0);
        assert_eq!(summary.compatibility_rate, 1.0);
    }

    #[test]
    fn estimator_failures_are_recorded() {
        let cfg = explicit(r(3, 2), vec![4]);
        let result = run_experiment(&cfg, &[Method::Compat, Method::Fourier]).unwrap();
        for e in &result.per_repeat[0].estimates {
            assert!(e.error.is_some());
            assert!(!e.compatible);
        }
        assert_eq!(result.summary[0].failures, 1);
        assert!(run_experiment(&cfg, &[]).is_err());
    }

    #[test]
    fn method_tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
        }
        assert!("mle".parse::<Method>().is_err());
    }

    #[test]
    fn sweep_examples() {
        let sweep = precision_sweep(&[r(3, 2), r(2, 1)], 1, 10).unwrap();
        assert!(sweep[0].1.contains(&r(3, 2)));
        assert_eq!(sweep[1].1, RationalInterval::new(r(2, 1), r(21, 10)));
        assert!(precision_sweep(&[r(1, 1)], 1, 10).is_err());
    }

    #[test]
    fn csv_layout() {
        let cfg = explicit(r(132, 100), (1..=10).collect());
        let result = run_experiment(&cfg, &[Method::Compat, Method::Regression]).unwrap();
        let mut buf = Vec::new();
        write_experiment_csv(&result, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "repeat_index,method,estimate,interval_lo,interval_hi,compatible"
        );
        assert!(lines[1].starts_with("0,compat,1.31666"));
        assert!(lines[1].ends_with(",13/10,4/3,1"));
        assert!(lines[2].starts_with("0,regression,1.31298"));
        assert!(lines[2].ends_with(",,,1"));
    }

    #[test]
    fn parallel_and_sequential_runs_match() {
        let cfg = SimConfig {
            tau: r(33, 25),
            law: CountLaw::Poisson { lambda: 5.5 },
            sample_size: 15,
            repeats: 40,
            seed: 5,
        };
        let a = run_experiment_with(&cfg, &Method::ALL, Execution::Sequential).unwrap();
        let b = run_experiment_with(&cfg, &Method::ALL, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
