use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Dataset;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoublePoissonFit {
    pub mu_hat: f64,
    pub theta_hat: f64,
    /// `1 / theta_hat`.
    pub tau_hat: f64,
    /// `mu_hat * theta_hat`.
    pub lambda_hat: f64,
    /// `tau_hat * sqrt(2 / n)`.
    pub stddev_tau: f64,
    pub sample_size: usize,
}

/// Poisson deviance term `μ1 (ln μ1 - ln μ2) - (μ1 - μ2)`, with the
/// `μ1 ln μ1 → 0` limit at `μ1 = 0`.
pub fn kl_divergence_term(mu1: f64, mu2: f64) -> Result<f64> {
    if mu2 <= 0.0 || !mu2.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "mu2 must be positive, got {mu2}"
        )));
    }
    if mu1 < 0.0 || !mu1.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "mu1 must be non-negative, got {mu1}"
        )));
    }
    if mu1 == 0.0 {
        return Ok(mu2);
    }
    Ok(mu1 * (mu1.ln() - mu2.ln()) - (mu1 - mu2))
}

/// Moment/likelihood estimates of the double Poisson family, mapped to the
/// gain by `τ = 1/θ` and `λ = μθ`.
pub fn double_poisson_mle(samples: &[f64]) -> Result<DoublePoissonFit> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InsufficientData("at least two samples required"));
    }
    if samples.iter().all(|&y| y == samples[0]) {
        return Err(Error::ZeroDispersion);
    }
    let mu_hat = samples.iter().sum::<f64>() / n as f64;
    let mut divergence = 0.0;
    for &y in samples {
        divergence += kl_divergence_term(y, mu_hat)?;
    }
    if divergence.is_nan() || divergence <= 0.0 {
        return Err(Error::ZeroDispersion);
    }
    let theta_hat = n as f64 / (2.0 * divergence);
    let tau_hat = 1.0 / theta_hat;
    Ok(DoublePoissonFit {
        mu_hat,
        theta_hat,
        tau_hat,
        lambda_hat: mu_hat * theta_hat,
        stddev_tau: tau_hat * (2.0 / n as f64).sqrt(),
        sample_size: n,
    })
}

pub fn double_poisson_mle_counts(data: &Dataset) -> Result<DoublePoissonFit> {
    let samples: Vec<f64> = data.samples.iter().map(|&x| x as f64).collect();
    double_poisson_mle(&samples)
}
