//! Comparison estimators: double Poisson maximum likelihood, DFT peak
//! picking, and fixed-intercept regression on ranks.
//!
//! These are statistical and run in floating point, unlike the exact
//! compatible-values machinery.

mod double_poisson;
mod fourier;
mod regression;

pub use double_poisson::{
    double_poisson_mle, double_poisson_mle_counts, kl_divergence_term, DoublePoissonFit,
};
pub use fourier::{fourier_estimate, fourier_estimate_padded, FourierFit, SpectrumBin};
pub use regression::{regression_estimate, regression_with_indices, RegressionFit};
