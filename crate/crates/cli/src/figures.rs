//! Data and SVG renderings behind the `figures` command.
//!
//! Every figure writes its CSV data first; summaries that do not fit a table
//! go to a small JSON file next to it.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use gainlattice::alt::{fourier_estimate, regression_estimate, regression_with_indices};
use gainlattice::kde::{kde, Bandwidth, KdeCurve};
use gainlattice::simulation::{
    precision_sweep_with, quantize, run_experiment_with, write_experiment_csv, CountLaw,
    ExperimentResult, Method, SimConfig,
};
use gainlattice::{
    build_empirical_lattice, density_bound, enumerate_compatible_set, largest_compatible_interval,
    lattice_prefix, CompatEstimate, Dataset, EmpiricalLattice, Execution, Rational,
    RationalInterval,
};
use serde_json::json;

use crate::svg::{self, Chart, Stroke, BLACK, BLUE, GREEN, GREY, ORANGE, RED};
use crate::{io_failure, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    All,
}

const EACH: [Figure; 10] = [
    Figure::Fig1,
    Figure::Fig2,
    Figure::Fig3,
    Figure::Fig4,
    Figure::Fig5,
    Figure::Fig6,
    Figure::Fig7,
    Figure::Fig8,
    Figure::Fig9,
    Figure::Fig10,
];

/// The simulated 15-sample dataset drawn with gain 1.32 and Poisson mean 5.5.
const FIG1_DATA: [u64; 15] = [6, 6, 11, 5, 3, 5, 2, 6, 5, 13, 2, 7, 7, 7, 6];
const FIG2_CANDIDATES: [(i64, i64); 6] = [(11, 10), (6, 5), (7, 5), (3, 2), (17, 10), (9, 5)];
const SMALL_SAMPLE: usize = 15;
const SMALL_REPEATS: usize = 200;
const LARGE_SAMPLE: usize = 500;
const LARGE_REPEATS: usize = 2000;
const LAMBDA: f64 = 5.5;

fn tau() -> Rational {
    Rational::frac(33, 25)
}

struct Out<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl Out<'_> {
    fn file(&mut self, name: &str, contents: &[u8]) -> Result<(), Failure> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(io_failure(&path))?;
        self.written.push(path);
        Ok(())
    }

    fn csv(
        &mut self,
        name: &str,
        header: &str,
        rows: impl IntoIterator<Item = String>,
    ) -> Result<(), Failure> {
        let mut text = String::from(header);
        text.push('\n');
        for row in rows {
            text.push_str(&row);
            text.push('\n');
        }
        self.file(name, text.as_bytes())
    }

    fn json(&mut self, name: &str, value: serde_json::Value) -> Result<(), Failure> {
        let mut text =
            serde_json::to_string_pretty(&value).map_err(|e| Failure::Io(e.to_string()))?;
        text.push('\n');
        self.file(name, text.as_bytes())
    }

    fn svg(&mut self, name: &str, panels: &[Chart], columns: usize) -> Result<(), Failure> {
        self.file(name, svg::render(panels, columns).as_bytes())
    }

    fn experiment(&mut self, name: &str, result: &ExperimentResult) -> Result<(), Failure> {
        let mut buf = Vec::new();
        write_experiment_csv(result, &mut buf).map_err(|e| Failure::Io(e.to_string()))?;
        self.file(name, &buf)
    }

    fn kde(&mut self, name: &str, series: &[(&str, &KdeCurve)]) -> Result<(), Failure> {
        let rows = series.iter().flat_map(|(label, curve)| {
            curve
                .grid
                .iter()
                .zip(&curve.density)
                .map(move |(x, d)| format!("{label},{x},{d}"))
        });
        self.csv(name, "series,x,density", rows)
    }
}

pub fn generate(
    which: Figure,
    outdir: &Path,
    seed: u64,
    exec: Execution,
) -> Result<Vec<PathBuf>, Failure> {
    fs::create_dir_all(outdir).map_err(io_failure(outdir))?;
    let mut out = Out {
        dir: outdir,
        written: Vec::new(),
    };
    let list: &[Figure] = if which == Figure::All {
        &EACH
    } else {
        std::slice::from_ref(&which)
    };
    for fig in list {
        match fig {
            Figure::Fig1 => fig1(&mut out)?,
            Figure::Fig2 => fig2(&mut out)?,
            Figure::Fig3 => fig3(&mut out, exec)?,
            Figure::Fig4 => fig4(&mut out, seed, exec)?,
            Figure::Fig5 => fig5(&mut out)?,
            Figure::Fig6 => fig6(&mut out, seed, exec)?,
            Figure::Fig7 => fig7(&mut out, seed, exec)?,
            Figure::Fig8 => fig8(&mut out)?,
            Figure::Fig9 => fig9(&mut out, seed, exec)?,
            Figure::Fig10 => fig10(&mut out)?,
            Figure::All => unreachable!(),
        }
    }
    Ok(out.written)
}

fn quantized(
    tau: &Rational,
    ks: impl IntoIterator<Item = u64>,
) -> Result<EmpiricalLattice, Failure> {
    Ok(EmpiricalLattice::from_values(
        ks.into_iter().map(|k| quantize(tau, k)),
    )?)
}

/// Certified interval of the complete dataset `floor(1.32 k)`, `k = 1..=13`.
fn complete_interval() -> Result<CompatEstimate, Failure> {
    Ok(largest_compatible_interval(&quantized(&tau(), 1..=13)?)?)
}

fn interval_json(iv: &RationalInterval) -> serde_json::Value {
    json!({ "lo": iv.lo.to_string(), "hi": iv.hi.to_string(), "lo_f64": iv.lo.to_f64(), "hi_f64": iv.hi.to_f64() })
}

fn curve_points(curve: &KdeCurve) -> Vec<(f64, f64)> {
    curve
        .grid
        .iter()
        .copied()
        .zip(curve.density.iter().copied())
        .collect()
}

fn peak(curves: &[&KdeCurve]) -> f64 {
    curves
        .iter()
        .flat_map(|c| c.density.iter().copied())
        .fold(0.0, f64::max)
}

/// Lattice rows for one gain: `(x, observed)` for every lattice point up to `max S`.
fn lattice_rows(t: &Rational, s: &EmpiricalLattice) -> Result<Vec<(u64, bool)>, Failure> {
    Ok(lattice_prefix(t, s.max_value())?
        .values()
        .iter()
        .map(|&x| (x, s.contains(x)))
        .collect())
}

fn fig1(out: &mut Out) -> Result<(), Failure> {
    let s = build_empirical_lattice(&Dataset::new(FIG1_DATA.to_vec()))?;
    let set = enumerate_compatible_set(&s)?;
    let bound = density_bound(&s)?;
    let max = s.max_value() as f64;
    let mut rows = Vec::new();
    let mut chart = Chart::new("Compatible lattices", "value", "gain")
        .x_range(-1.5, max + 1.0)
        .y_range(0.9, bound.to_f64() + 0.05);
    chart.dots(
        s.values().iter().map(|&x| (x as f64, 0.95)).collect(),
        BLACK,
        3.5,
    );
    for iv in &set.intervals {
        let t = iv.midpoint();
        let tf = t.to_f64();
        chart.segment(
            (-0.8, iv.lo.to_f64()),
            (-0.8, iv.hi.to_f64()),
            Stroke::solid(BLUE),
            4.0,
        );
        let lattice = lattice_rows(&t, &s)?;
        chart.dots(
            lattice
                .iter()
                .filter(|(_, o)| *o)
                .map(|&(x, _)| (x as f64, tf))
                .collect(),
            GREEN,
            2.5,
        );
        chart.dots(
            lattice
                .iter()
                .filter(|(_, o)| !*o)
                .map(|&(x, _)| (x as f64, tf))
                .collect(),
            GREY,
            2.0,
        );
        rows.extend(
            lattice
                .iter()
                .map(|(x, o)| format!("{},{},{t},{x},{}", iv.lo, iv.hi, u8::from(*o))),
        );
    }
    chart.hband(bound.to_f64(), bound.to_f64() + 0.05, RED);
    out.csv("fig1_data.csv", "x", FIG1_DATA.iter().map(u64::to_string))?;
    out.csv(
        "fig1_lattices.csv",
        "interval_lo,interval_hi,t,x,observed",
        rows,
    )?;
    out.json(
        "fig1_summary.json",
        json!({
            "observed": s.values(),
            "density_bound": bound.to_string(),
            "includes_unit": set.includes_unit,
            "intervals": set.intervals.iter().map(interval_json).collect::<Vec<_>>(),
        }),
    )?;
    out.svg("fig1.svg", &[chart], 1)
}

fn fig2(out: &mut Out) -> Result<(), Failure> {
    let s = build_empirical_lattice(&Dataset::new(FIG1_DATA.to_vec()))?;
    let set = enumerate_compatible_set(&s)?;
    let max = s.max_value() as f64;
    let mut rows = Vec::new();
    let mut missing_rows = Vec::new();
    let mut chart = Chart::new("Incompatible lattices", "value", "gain").x_range(-0.5, max + 1.0);
    chart.dots(
        s.values().iter().map(|&x| (x as f64, 1.0)).collect(),
        BLACK,
        3.5,
    );
    for (p, q) in FIG2_CANDIDATES {
        let t = Rational::frac(p, q);
        if set.contains(&t) {
            continue;
        }
        let tf = t.to_f64();
        let lattice = lattice_rows(&t, &s)?;
        chart.dots(
            lattice.iter().map(|&(x, _)| (x as f64, tf)).collect(),
            GREY,
            2.5,
        );
        let absent: Vec<u64> = s
            .nonzero()
            .filter(|x| lattice.iter().all(|(y, _)| y != x))
            .collect();
        chart.dots(absent.iter().map(|&x| (x as f64, tf)).collect(), RED, 4.0);
        rows.extend(
            lattice
                .iter()
                .map(|(x, o)| format!("{t},{x},{}", u8::from(*o))),
        );
        missing_rows.extend(absent.iter().map(|x| format!("{t},{x}")));
    }
    out.csv("fig2_lattices.csv", "t,x,observed", rows)?;
    out.csv("fig2_missing.csv", "t,observation", missing_rows)?;
    out.svg("fig2.svg", &[chart], 1)
}

fn fig3(out: &mut Out, exec: Execution) -> Result<(), Failure> {
    let taus: Vec<Rational> = (1..=200)
        .map(|i| Rational::one() + Rational::frac(i, 200))
        .collect();
    let sweep = precision_sweep_with(&taus, 1, 10, exec)?;
    let mut offsets = Chart::new("Certified intervals, N in 1..10", "gain", "interval - gain");
    let mut lengths = Chart::new("Interval length", "gain", "length");
    let mut length_pts = Vec::new();
    let mut rows = Vec::new();
    for (t, iv) in &sweep {
        let tf = t.to_f64();
        offsets.segment(
            (tf, iv.lo.to_f64() - tf),
            (tf, iv.hi.to_f64() - tf),
            Stroke::solid(BLUE),
            1.5,
        );
        length_pts.push((tf, iv.length().to_f64()));
        rows.push(format!(
            "{t},{},{},{},{},{}",
            iv.lo,
            iv.hi,
            iv.lo.to_f64(),
            iv.hi.to_f64(),
            iv.length().to_f64()
        ));
    }
    offsets.line(vec![(1.0, 0.0), (2.0, 0.0)], Stroke::dashed(GREY));
    lengths.line(length_pts, Stroke::solid(BLUE));
    out.csv(
        "fig3.csv",
        "tau,interval_lo,interval_hi,lo_f64,hi_f64,length",
        rows,
    )?;
    out.svg("fig3.svg", &[offsets, lengths], 2)
}

fn small_config(seed: u64) -> SimConfig {
    SimConfig {
        tau: tau(),
        law: CountLaw::Poisson { lambda: LAMBDA },
        sample_size: SMALL_SAMPLE,
        repeats: SMALL_REPEATS,
        seed,
    }
}

/// Density chart of one method's estimates with a rug, the true gain, and the
/// certified interval of the complete dataset.
fn sampling_chart(
    title: &str,
    curve: &KdeCurve,
    values: &[f64],
    complete: &RationalInterval,
) -> Chart {
    let top = peak(&[curve]);
    let mut chart = Chart::new(title, "estimate", "density");
    chart
        .vband(complete.lo.to_f64(), complete.hi.to_f64(), GREEN)
        .line(curve_points(curve), Stroke::solid(BLUE))
        .dots(
            values.iter().map(|&v| (v, -0.02 * top)).collect(),
            BLACK,
            1.5,
        )
        .vline(tau().to_f64(), Stroke::dashed(RED))
        .legend("estimate density", Stroke::solid(BLUE))
        .legend("true gain", Stroke::dashed(RED))
        .legend("complete-data interval", Stroke::solid(GREEN));
    chart
}

fn fig4(out: &mut Out, seed: u64, exec: Execution) -> Result<(), Failure> {
    let cfg = small_config(seed);
    let result = run_experiment_with(&cfg, &[Method::Compat], exec)?;
    let values = result.values(Method::Compat);
    let curve = kde(&values, Bandwidth::Silverman)?;
    let complete = complete_interval()?;
    out.experiment("fig4_estimates.csv", &result)?;
    out.kde("fig4_kde.csv", &[("compat", &curve)])?;
    out.json(
        "fig4_summary.json",
        json!({
            "config": &cfg,
            "summary": &result.summary,
            "kde_mode": curve.mode(),
            "bandwidth": curve.bandwidth,
            "complete_interval": interval_json(&complete.interval),
        }),
    )?;
    out.svg(
        "fig4.svg",
        &[sampling_chart(
            "Compatible-values estimates",
            &curve,
            &values,
            &complete.interval,
        )],
        1,
    )
}

fn fig5(out: &mut Out) -> Result<(), Failure> {
    let t = tau();
    let s = quantized(&t, 1..=10)?;
    let fit = regression_estimate(&s)?;
    let mut chart = Chart::new("Regression on ranks", "n", "x + 0.5");
    let mut rows = Vec::new();
    for ((&k, &x), r) in fit.indices_used.iter().zip(&fit.values).zip(&fit.residuals) {
        chart.segment(
            (k as f64, x as f64),
            (k as f64, x as f64 + 1.0),
            Stroke::solid(GREY),
            3.0,
        );
        rows.push(format!(
            "{k},{x},{x},{},{},{r}",
            x + 1,
            fit.slope * k as f64
        ));
    }
    let pts: Vec<(f64, f64)> = fit
        .indices_used
        .iter()
        .zip(&fit.values)
        .map(|(&k, &x)| (k as f64, x as f64 + 0.5))
        .collect();
    chart
        .dots(pts, BLACK, 2.5)
        .line(
            vec![(0.0, 0.0), (11.0, 11.0 * fit.slope)],
            Stroke::solid(BLUE),
        )
        .line(
            vec![(0.0, 0.0), (11.0, 11.0 * t.to_f64())],
            Stroke::dashed(RED),
        )
        .legend("fitted slope", Stroke::solid(BLUE))
        .legend("true gain", Stroke::dashed(RED));
    out.csv("fig5.csv", "n,x,cell_lo,cell_hi,fitted,residual", rows)?;
    out.json(
        "fig5_summary.json",
        json!({ "slope": fit.slope, "tau": t.to_string() }),
    )?;
    out.svg("fig5.svg", &[chart], 1)
}

/// Double Poisson fit with and without flooring, `LARGE_REPEATS` datasets of
/// `LARGE_SAMPLE` counts each.
fn double_poisson_figure(
    out: &mut Out,
    name: &str,
    cfg: SimConfig,
    exec: Execution,
    complete: Option<&RationalInterval>,
) -> Result<(), Failure> {
    let result = run_experiment_with(
        &cfg,
        &[Method::DoublePoisson, Method::DoublePoissonRaw],
        exec,
    )?;
    let floored = kde(&result.values(Method::DoublePoisson), Bandwidth::Silverman)?;
    let raw = kde(
        &result.values(Method::DoublePoissonRaw),
        Bandwidth::Silverman,
    )?;
    let t = cfg.tau.to_f64();
    let mut chart = Chart::new("Double Poisson estimates", "estimate", "density");
    if let Some(iv) = complete {
        chart.vband(iv.lo.to_f64(), iv.hi.to_f64(), GREEN);
    }
    chart
        .line(curve_points(&floored), Stroke::solid(BLUE))
        .line(curve_points(&raw), Stroke::dashed(ORANGE))
        .vline(t, Stroke::dashed(RED))
        .legend("floored", Stroke::solid(BLUE))
        .legend("unfloored", Stroke::dashed(ORANGE))
        .legend("true gain", Stroke::dashed(RED));
    out.experiment(&format!("{name}_estimates.csv"), &result)?;
    out.kde(
        &format!("{name}_kde.csv"),
        &[("floored", &floored), ("raw", &raw)],
    )?;
    out.json(
        &format!("{name}_summary.json"),
        json!({
            "config": &cfg,
            "summary": &result.summary,
            "predicted_sd": t * (2.0 / cfg.sample_size as f64).sqrt(),
            "complete_interval": complete.map(interval_json),
        }),
    )?;
    out.svg(&format!("{name}.svg"), &[chart], 1)
}

fn fig6(out: &mut Out, seed: u64, exec: Execution) -> Result<(), Failure> {
    let cfg = SimConfig {
        tau: Rational::from_integer(3),
        law: CountLaw::Poisson { lambda: 100.0 },
        sample_size: LARGE_SAMPLE,
        repeats: LARGE_REPEATS,
        seed,
    };
    double_poisson_figure(out, "fig6", cfg, exec, None)
}

fn fig7(out: &mut Out, seed: u64, exec: Execution) -> Result<(), Failure> {
    let cfg = SimConfig {
        tau: tau(),
        law: CountLaw::Poisson { lambda: LAMBDA },
        sample_size: LARGE_SAMPLE,
        repeats: LARGE_REPEATS,
        seed,
    };
    let complete = complete_interval()?;
    double_poisson_figure(out, "fig7", cfg, exec, Some(&complete.interval))
}

fn fig8(out: &mut Out) -> Result<(), Failure> {
    let s = quantized(&tau(), 1..=10)?;
    let fit = fourier_estimate(&s)?;
    let bound = fit.density_bound.to_f64();
    // Admissible periods sit above the Nyquist frequency, so all bins are shown.
    let shown = &fit.spectrum;
    let mut freq = Chart::new("Spectrum", "frequency", "magnitude");
    freq.line(
        shown.iter().map(|b| (b.frequency, b.magnitude)).collect(),
        Stroke::solid(BLUE),
    )
    .dots(
        shown.iter().map(|b| (b.frequency, b.magnitude)).collect(),
        BLUE,
        2.5,
    )
    .vline(1.0 / bound, Stroke::dashed(RED));
    let mut period = Chart::new("Spectrum in period space", "period", "magnitude");
    let by_period: Vec<(f64, f64)> = shown
        .iter()
        .skip(1)
        .map(|b| (b.period, b.magnitude))
        .collect();
    period
        .line(by_period.clone(), Stroke::solid(BLUE))
        .dots(by_period, BLUE, 2.5)
        .vline(bound, Stroke::dashed(RED))
        .vline(fit.tau_f, Stroke::dashed(GREEN))
        .legend("density bound", Stroke::dashed(RED))
        .legend("selected period", Stroke::dashed(GREEN));
    let rows = fit.spectrum.iter().map(|b| {
        format!(
            "{},{},{},{},{}",
            b.bin,
            b.frequency,
            b.period,
            b.magnitude,
            u8::from(b.admissible)
        )
    });
    out.csv(
        "fig8.csv",
        "bin,frequency,period,magnitude,admissible",
        rows,
    )?;
    out.json(
        "fig8_summary.json",
        json!({
            "signal_len": fit.signal_len,
            "peak_bin": fit.peak_bin,
            "tau_f": fit.tau_f,
            "tau_f_exact": fit.tau_f_exact.to_string(),
            "density_bound": fit.density_bound.to_string(),
            "density_bound_f64": bound,
        }),
    )?;
    out.svg("fig8.svg", &[freq, period], 2)
}

fn fig9(out: &mut Out, seed: u64, exec: Execution) -> Result<(), Failure> {
    let cfg = small_config(seed);
    let result = run_experiment_with(&cfg, &[Method::Fourier, Method::Compat], exec)?;
    let values = result.values(Method::Fourier);
    let curve = kde(&values, Bandwidth::Silverman)?;
    let complete = complete_interval()?;
    out.experiment("fig9_estimates.csv", &result)?;
    out.kde("fig9_kde.csv", &[("fourier", &curve)])?;
    out.json(
        "fig9_summary.json",
        json!({
            "config": &cfg,
            "summary": &result.summary,
            "complete_interval": interval_json(&complete.interval),
        }),
    )?;
    out.svg(
        "fig9.svg",
        &[sampling_chart(
            "Fourier estimates",
            &curve,
            &values,
            &complete.interval,
        )],
        1,
    )
}

fn fig10(out: &mut Out) -> Result<(), Failure> {
    let t = tau();
    let ks: Vec<u64> = (1..=10).filter(|&k| k != 4).collect();
    let s = quantized(&t, ks.iter().copied())?;
    let naive = regression_estimate(&s)?;
    let compat = largest_compatible_interval(&s)?;
    let refit = regression_with_indices(&compat.indices)?;
    let recovered: Vec<u64> = compat
        .indices
        .iter()
        .filter(|p| p.x > 0)
        .map(|p| p.k)
        .collect();
    let mut chart = Chart::new("Regression with a missing value", "n", "x + 0.5");
    let naive_pts: Vec<(f64, f64)> = naive
        .indices_used
        .iter()
        .zip(&naive.values)
        .map(|(&k, &x)| (k as f64, x as f64 + 0.5))
        .collect();
    let true_pts: Vec<(f64, f64)> = ks
        .iter()
        .zip(s.nonzero())
        .map(|(&k, x)| (k as f64, x as f64 + 0.5))
        .collect();
    chart
        .dots(naive_pts, BLUE, 3.0)
        .dots(true_pts, ORANGE, 2.5)
        .line(
            vec![(0.0, 0.0), (11.0, 11.0 * naive.slope)],
            Stroke::solid(BLUE),
        )
        .line(
            vec![(0.0, 0.0), (11.0, 11.0 * refit.slope)],
            Stroke::dashed(ORANGE),
        )
        .legend("ranks as regressors", Stroke::solid(BLUE))
        .legend("recovered regressors", Stroke::dashed(ORANGE));
    let rows = s
        .nonzero()
        .zip(&naive.indices_used)
        .zip(ks.iter().zip(&recovered))
        .map(|((x, rank), (k, r))| format!("{x},{rank},{k},{r}"));
    out.csv("fig10.csv", "x,rank,true_n,compat_n", rows)?;
    out.json(
        "fig10_summary.json",
        json!({
            "rank_slope": naive.slope,
            "recovered_slope": refit.slope,
            "compat_estimate": compat.point.to_string(),
            "compat_interval": interval_json(&compat.interval),
            "recovered_match_truth": recovered == ks,
        }),
    )?;
    out.svg("fig10.svg", &[chart], 1)
}
