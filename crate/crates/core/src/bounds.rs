//! Closed-form upper bounds on the gain, computed from the observed set alone.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::EmpiricalLattice;
use crate::rational::Rational;

/// Which observations produced each bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundWitnesses {
    /// Closest pair `(x, y)`.
    pub pairwise: Option<(u64, u64)>,
    /// Longest run of consecutive integers `[x, y]`.
    pub interval: Option<(u64, u64)>,
    /// `(max value, nonzero count)`.
    pub density: (u64, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub pairwise_bound: Option<Rational>,
    pub interval_bound: Option<Rational>,
    pub density_bound: Rational,
    pub witnesses: BoundWitnesses,
}

fn closest_pair(s: &EmpiricalLattice) -> Result<(u64, u64)> {
    s.values()
        .windows(2)
        .map(|w| (w[0], w[1]))
        .min_by_key(|(x, y)| y - x)
        .ok_or(Error::InsufficientData(
            "at least two distinct observations required",
        ))
}

/// `1 + min gap` over distinct observations.
pub fn pairwise_bound(s: &EmpiricalLattice) -> Result<Rational> {
    let (x, y) = closest_pair(s)?;
    Ok(Rational::from_integer(1 + y - x))
}

fn longest_run(s: &EmpiricalLattice) -> Option<(u64, u64)> {
    let values = s.values();
    let mut best: Option<(u64, u64)> = None;
    let mut start = 0;
    for i in 1..=values.len() {
        if i < values.len() && values[i] == values[i - 1] + 1 {
            continue;
        }
        let (lo, hi) = (values[start], values[i - 1]);
        if hi > lo && best.is_none_or(|(a, b)| hi - lo > b - a) {
            best = Some((lo, hi));
        }
        start = i;
    }
    best
}

/// `1 + 1/(y - x)` for the longest run `[x, y]` of consecutive observed
/// integers; `None` when no two observations are adjacent.
pub fn interval_bound(s: &EmpiricalLattice) -> Result<Option<Rational>> {
    if s.len() < 2 {
        return Err(Error::InsufficientData(
            "at least two distinct observations required",
        ));
    }
    Ok(longest_run(s).map(|(x, y)| Rational::one() + Rational::frac(1, (y - x) as i64)))
}

/// `(max + 1) / n` with `n` the number of nonzero observed integers.
pub fn density_bound(s: &EmpiricalLattice) -> Result<Rational> {
    let n = s.count_nonzero();
    if n == 0 {
        return Err(Error::NoNonzeroObservations);
    }
    Ok(Rational::new(s.max_value() + 1, n as u64).expect("n > 0"))
}

pub fn bound_report(s: &EmpiricalLattice) -> Result<BoundReport> {
    let density_bound = density_bound(s)?;
    let pair = closest_pair(s).ok();
    let run = longest_run(s);
    Ok(BoundReport {
        pairwise_bound: pair.map(|(x, y)| Rational::from_integer(1 + y - x)),
        interval_bound: run.map(|(x, y)| Rational::one() + Rational::frac(1, (y - x) as i64)),
        density_bound,
        witnesses: BoundWitnesses {
            pairwise: pair,
            interval: run,
            density: (s.max_value(), s.count_nonzero()),
        },
    })
}
