//! The compatible-values estimator.
//!
//! A gain `t > 1` is compatible with the observed set `S` when every `x` in
//! `S` can be written `floor(t*k)`. The compatible values above 1 form a
//! finite union of half-open intervals `[a_j, b_j)`, each at least `1/x̂²`
//! wide (`x̂ = max S`), all below the density bound `B`. The estimator scans
//! `B - k/x̂²` downward until it lands in the topmost interval, recovers the
//! indices there, and returns the exact intersection of the constraints
//! `x/k <= t < (x+1)/k` together with its midpoint.
//!
//! [`enumerate_compatible_set`] is the exhaustive reference: it evaluates
//! compatibility once per gap between consecutive breakpoints `x/k`,
//! `(x+1)/k`, which is exact because compatibility only changes there.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bounds::density_bound;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::lattice::{EmpiricalLattice, Gain, IndexPair};
use crate::rational::{Rational, RationalInterval};

/// Compatible values above 1, as disjoint intervals sorted ascending.
/// `(0, 1]` is always compatible as well and is flagged rather than stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibleSet {
    pub intervals: Vec<RationalInterval>,
    pub includes_unit: bool,
}

impl CompatibleSet {
    /// The interval holding the largest compatible value.
    pub fn top(&self) -> Option<&RationalInterval> {
        self.intervals.last()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        (self.includes_unit && t.is_positive() && *t <= Rational::one())
            || self.intervals.iter().any(|iv| iv.contains(t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatEstimate {
    /// Midpoint of `interval`.
    pub point: Rational,
    pub interval: RationalInterval,
    /// Half the interval length.
    pub precision: Rational,
    pub indices: Vec<IndexPair>,
    /// Number of `1/x̂²` steps taken below the density bound before the
    /// first compatible candidate.
    pub scan_steps: u64,
    pub density_bound: Rational,
}

impl CompatEstimate {
    /// Lattice points below `max S` that the recovered indices skip.
    pub fn missing_count(&self, s: &EmpiricalLattice) -> u64 {
        let top = self.indices.iter().map(|p| p.k).max().unwrap_or(0);
        top.saturating_sub(s.count_nonzero() as u64)
    }
}

/// Theoretical bound on the number of scan steps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepBudget {
    /// `x̂² (B - x̂/n̂)` with `n̂ = n + missing`.
    pub exact: Rational,
    /// `ceil(exact)`, floored at zero.
    pub steps: u64,
    /// The small-missing-count approximation `τ² x̂ (missing + 1/τ)` with
    /// `τ ≈ x̂/n̂`.
    pub approximation: f64,
}

/// `∩ [x/k, (x+1)/k)` over the pairs with `k >= 1`.
pub fn constraint_interval(indices: &[IndexPair]) -> Result<RationalInterval> {
    let mut result: Option<RationalInterval> = None;
    let mut previous: Option<IndexPair> = None;
    for &pair in indices {
        if pair.k == 0 {
            if pair.x > 0 {
                return Err(Error::InvalidIndices(format!(
                    "index 0 paired with observation {}",
                    pair.x
                )));
            }
            continue;
        }
        if let Some(prev) = previous {
            if (prev.x < pair.x) != (prev.k < pair.k) || prev.x == pair.x {
                return Err(Error::InvalidIndices(format!(
                    "indices must increase with observations: ({}, {}) then ({}, {})",
                    prev.x, prev.k, pair.x, pair.k
                )));
            }
        }
        previous = Some(pair);
        let k = pair.k as i64;
        let constraint = RationalInterval::new(
            Rational::new(pair.x, k).expect("k >= 1"),
            Rational::new(pair.x + 1, k).expect("k >= 1"),
        );
        result = Some(match result {
            None => constraint,
            Some(acc) => acc.intersect(&constraint),
        });
    }
    result.ok_or(Error::InsufficientData(
        "no constraint with a positive index",
    ))
}

fn require_two_nonzero(s: &EmpiricalLattice) -> Result<()> {
    if s.count_nonzero() < 2 {
        return Err(Error::InsufficientData(
            "at least two nonzero observations required",
        ));
    }
    Ok(())
}

pub fn largest_compatible_interval(s: &EmpiricalLattice) -> Result<CompatEstimate> {
    largest_compatible_interval_with(s, Execution::default())
}

pub fn largest_compatible_interval_with(
    s: &EmpiricalLattice,
    exec: Execution,
) -> Result<CompatEstimate> {
    require_two_nonzero(s)?;
    let bound = density_bound(s)?;
    let x_hat = s.max_value();
    let step_denom = Rational::from_integer(x_hat) * Rational::from_integer(x_hat);
    let step = step_denom.recip()?;

    // Candidates B - k/x̂² stay above 1 for k < (B - 1) x̂².
    let above_one = (&bound - &Rational::one()) * &step_denom;
    if !above_one.is_positive() {
        return Err(Error::NoDistinguishableSolution);
    }
    let candidates = above_one
        .ceil()
        .to_u64()
        .ok_or(Error::InvalidArgument("scan range overflow".into()))?;
    let candidate = |k: u64| &bound - &(Rational::from_integer(k) * &step);

    // B - k/x̂² = ((x̂+1) x̂² - k n) / (n x̂²), tested without normalizing.
    let n = s.count_nonzero() as i128;
    let x_sq = (x_hat as i128).checked_mul(x_hat as i128);
    let scale = x_sq.and_then(|x2| Some((x2.checked_mul(x_hat as i128 + 1)?, x2.checked_mul(n)?)));
    let hit = exec::find_first(exec, 0..candidates, |k| {
        let gain = match scale {
            Some((top, denom)) => Gain::from_parts(top - k as i128 * n, denom),
            None => Gain::new(&candidate(k)).expect("candidate above 1"),
        };
        gain.first_missing(s).is_none()
    })
    .ok_or(Error::NoDistinguishableSolution)?;

    let t = candidate(hit);
    let indices = crate::lattice::recover_indices(&t, s)?;
    let mut interval = constraint_interval(&indices)?;
    if interval.hi > bound {
        interval.hi = bound.clone();
    }
    debug_assert!(interval.contains(&t), "{t} outside {interval}");
    let precision = interval.length() / Rational::from_integer(2);
    Ok(CompatEstimate {
        point: interval.midpoint(),
        interval,
        precision,
        indices,
        scan_steps: hit,
        density_bound: bound,
    })
}

/// Breakpoints of the compatibility predicate inside `[1, bound)`, sorted
/// and deduplicated, starting with 1.
fn breakpoints(s: &EmpiricalLattice, bound: &Rational) -> Vec<Rational> {
    let one = Rational::one();
    let mut points = vec![one.clone()];
    for x in s.nonzero() {
        for k in 1..=x {
            for numer in [x, x + 1] {
                let p = Rational::new(numer, k).expect("k >= 1");
                if p > one && p < *bound {
                    points.push(p);
                }
            }
        }
    }
    points.sort_unstable();
    points.dedup();
    points
}

pub fn enumerate_compatible_set(s: &EmpiricalLattice) -> Result<CompatibleSet> {
    enumerate_compatible_set_with(s, Execution::default())
}

pub fn enumerate_compatible_set_with(
    s: &EmpiricalLattice,
    exec: Execution,
) -> Result<CompatibleSet> {
    let bound = density_bound(s)?;
    let mut points = breakpoints(s, &bound);
    let compatible = exec::map_slice(exec, &points, |p| {
        Gain::new(p)
            .expect("breakpoints are positive")
            .first_missing(s)
            .is_none()
    });
    points.push(bound);

    let mut intervals: Vec<RationalInterval> = Vec::new();
    for (i, ok) in compatible.into_iter().enumerate() {
        if !ok {
            continue;
        }
        let (lo, hi) = (&points[i], &points[i + 1]);
        match intervals.last_mut() {
            Some(last) if last.hi == *lo => last.hi = hi.clone(),
            _ => intervals.push(RationalInterval::new(lo.clone(), hi.clone())),
        }
    }
    Ok(CompatibleSet {
        intervals,
        includes_unit: true,
    })
}

pub fn scan_step_budget(s: &EmpiricalLattice, missing: u64) -> Result<StepBudget> {
    let bound = density_bound(s)?;
    let x_hat = s.max_value();
    let n_hat = s.count_nonzero() as u64 + missing;
    let x_sq = Rational::from_integer(x_hat) * Rational::from_integer(x_hat);
    let exact = &x_sq * &(bound - Rational::new(x_hat, n_hat).expect("n_hat > 0"));
    let steps = exact.ceil().to_u64().unwrap_or(0);
    let tau = x_hat as f64 / n_hat as f64;
    let approximation = tau * tau * x_hat as f64 * (missing as f64 + 1.0 / tau);
    Ok(StepBudget {
        exact,
        steps,
        approximation,
    })
}
