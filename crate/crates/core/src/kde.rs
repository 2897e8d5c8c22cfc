//! Gaussian kernel density estimates for summarizing estimator draws.

use serde::Serialize;

use crate::error::{Error, Result};

pub const GRID_POINTS: usize = 512;

/// Grid half-width beyond the data, in bandwidths. Four keeps the truncated
/// Gaussian mass above 0.9999.
pub const GRID_MARGIN: f64 = 4.0;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Bandwidth {
    #[default]
    Silverman,
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KdeCurve {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
}

impl KdeCurve {
    /// Abscissa of the highest density value.
    pub fn mode(&self) -> f64 {
        let (i, _) = self
            .density
            .iter()
            .enumerate()
            .fold(
                (0, f64::MIN),
                |best, (i, &d)| if d > best.1 { (i, d) } else { best },
            );
        self.grid[i]
    }

    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / 2.0)
            .sum()
    }

    /// Count of strict local maxima of the density.
    pub fn local_maxima(&self) -> usize {
        let d = &self.density;
        (1..d.len().saturating_sub(1))
            .filter(|&i| d[i] > d[i - 1] && d[i] >= d[i + 1])
            .count()
    }
}

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Silverman's rule `0.9 min(sd, IQR/1.34) n^(-1/5)`, falling back to the
/// standard deviation when the IQR vanishes. Zero when all values agree.
pub fn silverman_bandwidth(values: &[f64]) -> f64 {
    let (_, sd) = mean_and_sd(values);
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    0.9 * spread * (values.len() as f64).powf(-0.2)
}

pub fn kde(values: &[f64], bandwidth: Bandwidth) -> Result<KdeCurve> {
    if values.len() < 2 {
        return Err(Error::InsufficientData(
            "kernel density needs at least two values",
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "non-finite value in kernel density input".into(),
        ));
    }
    let (mean, _) = mean_and_sd(values);
    let h = match bandwidth {
        Bandwidth::Fixed(h) if h > 0.0 && h.is_finite() => h,
        Bandwidth::Fixed(h) => {
            return Err(Error::InvalidArgument(format!(
                "bandwidth must be positive, got {h}"
            )))
        }
        Bandwidth::Silverman => {
            let h = silverman_bandwidth(values);
            if h > 0.0 {
                h
            } else {
                1e-3 * mean.abs() + 1e-9
            }
        }
    };
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (start, end) = (min - GRID_MARGIN * h, max + GRID_MARGIN * h);
    let step = (end - start) / (GRID_POINTS - 1) as f64;
    let norm = 1.0 / (values.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| start + step * i as f64).collect();
    let density = grid
        .iter()
        .map(|&x| {
            norm * values
                .iter()
                .map(|&v| {
                    let z = (x - v) / h;
                    (-0.5 * z * z).exp()
                })
                .sum::<f64>()
        })
        .collect();
    Ok(KdeCurve {
        grid,
        density,
        bandwidth: h,
    })
}
