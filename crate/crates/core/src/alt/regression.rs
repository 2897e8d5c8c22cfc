use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{EmpiricalLattice, IndexPair};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegressionFit {
    /// Least-squares `a` in `x + 0.5 = a n`.
    pub slope: f64,
    /// `x + 0.5 - a n` for each fitted point.
    pub residuals: Vec<f64>,
    pub indices_used: Vec<u64>,
    pub values: Vec<u64>,
}

/// Fixed-intercept fit of `x_i + 0.5 = a n_i` with `n_i` the 1-based rank of
/// `x_i` among the nonzero observations.
pub fn regression_estimate(s: &EmpiricalLattice) -> Result<RegressionFit> {
    if s.len() < 2 {
        return Err(Error::InsufficientData(
            "at least two distinct observations required",
        ));
    }
    let pairs: Vec<IndexPair> = s
        .nonzero()
        .zip(1u64..)
        .map(|(x, k)| IndexPair { x, k })
        .collect();
    regression_with_indices(&pairs)
}

/// The same fit with caller-supplied regressors; pairs with `k = 0` carry no
/// weight and are dropped.
pub fn regression_with_indices(pairs: &[IndexPair]) -> Result<RegressionFit> {
    let used: Vec<IndexPair> = pairs.iter().copied().filter(|p| p.k > 0).collect();
    // a = Σ k (2x + 1) / (2 Σ k²), accumulated exactly.
    let numer: u128 = used
        .iter()
        .map(|p| p.k as u128 * (2 * p.x as u128 + 1))
        .sum();
    let denom: u128 = used.iter().map(|p| 2 * (p.k as u128) * (p.k as u128)).sum();
    if denom == 0 {
        return Err(Error::InsufficientData("no nonzero regressor"));
    }
    let slope = numer as f64 / denom as f64;
    Ok(RegressionFit {
        slope,
        residuals: used
            .iter()
            .map(|p| p.x as f64 + 0.5 - slope * p.k as f64)
            .collect(),
        indices_used: used.iter().map(|p| p.k).collect(),
        values: used.iter().map(|p| p.x).collect(),
    })
}
