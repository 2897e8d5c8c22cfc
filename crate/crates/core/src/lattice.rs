//! Integer lattices `{ floor(t*k) : k = 0, 1, 2, ... }` and exact membership.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Raw observations of `X`, duplicates allowed, order meaningless.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub samples: Vec<u64>,
}

impl Dataset {
    pub fn new(samples: Vec<u64>) -> Self {
        Dataset { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

impl From<Vec<u64>> for Dataset {
    fn from(samples: Vec<u64>) -> Self {
        Dataset { samples }
    }
}

/// The set of distinct observed integers, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmpiricalLattice {
    values: Vec<u64>,
}

impl EmpiricalLattice {
    pub fn from_values(values: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut values: Vec<u64> = values.into_iter().collect();
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        values.sort_unstable();
        values.dedup();
        Ok(EmpiricalLattice { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_value(&self) -> u64 {
        *self.values.last().expect("non-empty by construction")
    }

    pub fn count_nonzero(&self) -> usize {
        self.values.iter().filter(|&&x| x > 0).count()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = u64> + '_ {
        self.values.iter().copied().filter(|&x| x > 0)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.values.binary_search(&x).is_ok()
    }
}

/// An observation and the count that produced it: `x = floor(t*k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexPair {
    pub x: u64,
    pub k: u64,
}

/// Recovered frequency table of the latent counts.
pub type CountDistribution = BTreeMap<u64, u64>;

pub fn build_empirical_lattice(data: &Dataset) -> Result<EmpiricalLattice> {
    EmpiricalLattice::from_values(data.samples.iter().copied())
}

/// A positive gain `t = p/q` prepared for repeated membership tests.
///
/// Machine-width arithmetic is used while every intermediate product fits in
/// `i128`; otherwise the test falls back to big integers. The fraction need
/// not be in lowest terms.
#[derive(Clone, Debug)]
pub(crate) enum Gain {
    Small { p: i128, q: i128 },
    Big { numer: BigInt, denom: BigInt },
}

impl Gain {
    pub(crate) fn new(t: &Rational) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::NonPositiveParameter(t.to_string()));
        }
        Ok(match t.as_i64_pair() {
            Some((p, q)) => Gain::Small {
                p: p as i128,
                q: q as i128,
            },
            None => Gain::Big {
                numer: t.numer().clone(),
                denom: t.denom().clone(),
            },
        })
    }

    /// `p/q` with `p, q > 0`, unreduced.
    pub(crate) fn from_parts(p: i128, q: i128) -> Self {
        debug_assert!(p > 0 && q > 0);
        Gain::Small { p, q }
    }

    /// The candidate index `ceil(x/t)`, the only `k` that can map onto `x`
    /// when `t > 1` and the smallest such `k` in general, and whether it hits.
    fn candidate_small(p: i128, q: i128, x: u64) -> Option<(i128, bool)> {
        let xq = (x as i128).checked_mul(q)?;
        let k = Integer::div_ceil(&xq, &p);
        let kp = k.checked_mul(p)?;
        let x1q = (x as i128).checked_add(1)?.checked_mul(q)?;
        Some((k, kp < x1q))
    }

    fn candidate_big(numer: &BigInt, denom: &BigInt, x: u64) -> (BigInt, bool) {
        let x = BigInt::from(x);
        let k = (&x * denom).div_ceil(numer);
        let hit = &k * numer < (x + 1u32) * denom;
        (k, hit)
    }

    fn candidate(&self, x: u64) -> (BigInt, bool) {
        match self {
            Gain::Small { p, q } => match Self::candidate_small(*p, *q, x) {
                Some((k, hit)) => (BigInt::from(k), hit),
                None => Self::candidate_big(&BigInt::from(*p), &BigInt::from(*q), x),
            },
            Gain::Big { numer, denom } => Self::candidate_big(numer, denom, x),
        }
    }

    /// `x` is in the lattice iff some integer `k` satisfies `x <= t*k < x + 1`,
    /// i.e. iff `ceil(x/t) < (x+1)/t`.
    pub(crate) fn contains(&self, x: u64) -> bool {
        if x == 0 {
            return true;
        }
        if let Gain::Small { p, q } = self {
            if let Some((_, hit)) = Self::candidate_small(*p, *q, x) {
                return hit;
            }
        }
        self.candidate(x).1
    }

    /// The index `k` with `floor(t*k) = x`, if `x` is in the lattice.
    pub(crate) fn index_of(&self, x: u64) -> Option<BigInt> {
        if x == 0 {
            return Some(BigInt::from(0));
        }
        let (k, hit) = self.candidate(x);
        hit.then_some(k)
    }

    pub(crate) fn first_missing(&self, s: &EmpiricalLattice) -> Option<u64> {
        s.values().iter().copied().find(|&x| !self.contains(x))
    }

    fn floor_times(&self, k: &BigInt) -> BigInt {
        match self {
            Gain::Small { p, q } => (k * BigInt::from(*p)).div_floor(&BigInt::from(*q)),
            Gain::Big { numer, denom } => (k * numer).div_floor(denom),
        }
    }
}

/// `{ floor(t*k) : k >= 0 } ∩ [0, x_max]`.
pub fn lattice_prefix(t: &Rational, x_max: u64) -> Result<EmpiricalLattice> {
    let gain = Gain::new(t)?;
    let limit = BigInt::from(x_max);
    let mut values = Vec::new();
    let mut k = BigInt::from(0);
    loop {
        let x = gain.floor_times(&k);
        if x > limit {
            break;
        }
        let x = x.to_u64().expect("bounded by x_max");
        if values.last() != Some(&x) {
            values.push(x);
        }
        k += 1u32;
    }
    EmpiricalLattice::from_values(values)
}

pub fn lattice_contains(t: &Rational, x: u64) -> Result<bool> {
    Ok(Gain::new(t)?.contains(x))
}

/// `t` is compatible with `s` when every observed integer lies in the
/// lattice of `t`.
pub fn is_compatible(t: &Rational, s: &EmpiricalLattice) -> Result<bool> {
    Ok(Gain::new(t)?.first_missing(s).is_none())
}

fn require_distinguishable(t: &Rational) -> Result<()> {
    if *t < Rational::one() {
        return Err(Error::NotDistinguishable(t.to_string()));
    }
    Ok(())
}

fn recover_with(gain: &Gain, t: &Rational, s: &EmpiricalLattice) -> Result<Vec<IndexPair>> {
    s.values()
        .iter()
        .map(|&x| {
            let k = gain.index_of(x).ok_or_else(|| Error::Incompatible {
                tau: t.to_string(),
                observation: x,
            })?;
            debug_assert!(!k.is_negative());
            // t >= 1 implies k <= x.
            let k = k.to_u64().expect("index bounded by observation");
            Ok(IndexPair { x, k })
        })
        .collect()
}

/// Inverts `x = floor(t*k)` for every observed value; needs `t >= 1`, where
/// the quantization is injective.
pub fn recover_indices(t: &Rational, s: &EmpiricalLattice) -> Result<Vec<IndexPair>> {
    require_distinguishable(t)?;
    let gain = Gain::new(t)?;
    recover_with(&gain, t, s)
}

/// Maps every sample back to its latent count and tallies the frequencies.
pub fn recover_count_distribution(t: &Rational, data: &Dataset) -> Result<CountDistribution> {
    let s = build_empirical_lattice(data)?;
    let pairs = recover_indices(t, &s)?;
    let index: BTreeMap<u64, u64> = pairs.into_iter().map(|p| (p.x, p.k)).collect();
    let mut table = CountDistribution::new();
    for x in &data.samples {
        *table.entry(index[x]).or_insert(0) += 1;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::frac(p, q)
    }

    fn lattice(v: &[u64]) -> EmpiricalLattice {
        EmpiricalLattice::from_values(v.iter().copied()).unwrap()
    }

    const POISSON_SAMPLE: [u64; 15] = [6, 6, 11, 5, 3, 5, 2, 6, 5, 13, 2, 7, 7, 7, 6];
    const EXAMPLE2: [u64; 10] = [1, 2, 3, 5, 6, 7, 9, 10, 11, 13];

    #[test]
    fn empirical_lattice_examples() {
        let s = build_empirical_lattice(&Dataset::new(POISSON_SAMPLE.to_vec())).unwrap();
        assert_eq!(s.values(), &[2, 3, 5, 6, 7, 11, 13]);
        let s = build_empirical_lattice(&Dataset::new(vec![0, 0, 0])).unwrap();
        assert_eq!(s.values(), &[0]);
        assert_eq!(s.count_nonzero(), 0);
        let s =
            build_empirical_lattice(&Dataset::new(vec![13, 1, 2, 3, 5, 6, 7, 9, 10, 11])).unwrap();
        assert_eq!(s.values(), &EXAMPLE2);
        assert_eq!(s.max_value(), 13);
        assert_eq!(s.count_nonzero(), 10);
        assert_eq!(
            build_empirical_lattice(&Dataset::default()),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn prefix_examples() {
        let mut expected = vec![0];
        expected.extend_from_slice(&EXAMPLE2);
        assert_eq!(
            lattice_prefix(&r(132, 100), 13).unwrap().values(),
            &expected[..]
        );
        assert_eq!(
            lattice_prefix(&r(1, 1), 4).unwrap().values(),
            &[0, 1, 2, 3, 4]
        );
        assert_eq!(
            lattice_prefix(&r(2, 1), 8).unwrap().values(),
            &[0, 2, 4, 6, 8]
        );
        assert_eq!(
            lattice_prefix(&r(68, 100), 6).unwrap().values(),
            &[0, 1, 2, 3, 4, 5, 6]
        );
        assert!(matches!(
            lattice_prefix(&r(0, 1), 4),
            Err(Error::NonPositiveParameter(_))
        ));
        assert!(lattice_prefix(&r(-1, 2), 4).is_err());
    }

    #[test]
    fn membership_examples() {
        assert!(lattice_contains(&r(4, 3), 6).unwrap());
        assert!(!lattice_contains(&r(6, 5), 5).unwrap());
        assert!(lattice_contains(&r(1, 1), 7).unwrap());
        assert!(lattice_contains(&r(1000, 1), 0).unwrap());
        assert!(lattice_contains(&r(0, 1), 3).is_err());
    }

    #[test]
    fn membership_beyond_machine_width() {
        // Huge numerator forces the big-integer path.
        let big: Rational = "340282366920938463463374607431768211457/2".parse().unwrap();
        let gain = Gain::new(&big).unwrap();
        assert!(matches!(gain, Gain::Big { .. }));
        assert!(gain.contains(0));
        assert!(!gain.contains(1));
        assert!(lattice_contains(&Rational::from_integer(u64::MAX), u64::MAX).unwrap());
        assert!(!lattice_contains(&Rational::from_integer(u64::MAX), u64::MAX - 1).unwrap());
    }

    #[test]
    fn unreduced_parts_agree_with_reduced() {
        let reduced = Gain::new(&r(4, 3)).unwrap();
        let unreduced = Gain::from_parts(400, 300);
        for x in 0..100 {
            assert_eq!(reduced.contains(x), unreduced.contains(x));
            assert_eq!(reduced.index_of(x), unreduced.index_of(x));
        }
    }

    #[test]
    fn compatibility_examples() {
        let s = lattice(&EXAMPLE2);
        assert!(is_compatible(&r(132, 100), &s).unwrap());
        assert!(!is_compatible(&r(12, 10), &s).unwrap());
        assert!(is_compatible(&r(4, 3), &lattice(&[0, 2, 4, 6, 8])).unwrap());
    }

    #[test]
    fn recover_examples() {
        let ks: Vec<u64> = recover_indices(&r(132, 100), &lattice(&EXAMPLE2))
            .unwrap()
            .iter()
            .map(|p| p.k)
            .collect();
        assert_eq!(ks, (1..=10).collect::<Vec<_>>());
        let ks: Vec<u64> = recover_indices(&r(2, 1), &lattice(&[0, 2, 4, 6, 8]))
            .unwrap()
            .iter()
            .map(|p| p.k)
            .collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4]);
        let ks: Vec<u64> = recover_indices(&r(1, 1), &lattice(&[0, 3, 9]))
            .unwrap()
            .iter()
            .map(|p| p.k)
            .collect();
        assert_eq!(ks, vec![0, 3, 9]);
        assert!(matches!(
            recover_indices(&r(99, 100), &lattice(&[0, 3, 9])),
            Err(Error::NotDistinguishable(_))
        ));
        assert_eq!(
            recover_indices(&r(6, 5), &lattice(&[2, 3, 5, 6, 7, 11, 13])),
            Err(Error::Incompatible {
                tau: "6/5".into(),
                observation: 5
            })
        );
    }

    #[test]
    fn count_distribution_examples() {
        let table =
            recover_count_distribution(&r(132, 100), &Dataset::new(POISSON_SAMPLE.to_vec()))
                .unwrap();
        let expected: CountDistribution = [(2, 2), (3, 1), (4, 3), (5, 4), (6, 3), (9, 1), (10, 1)]
            .into_iter()
            .collect();
        assert_eq!(table, expected);
        assert_eq!(table.values().sum::<u64>(), 15);

        let table = recover_count_distribution(&r(2, 1), &Dataset::new(vec![0, 0, 4])).unwrap();
        assert_eq!(table, [(0, 2), (2, 1)].into_iter().collect());

        let table =
            recover_count_distribution(&r(132, 100), &Dataset::new(EXAMPLE2.to_vec())).unwrap();
        assert_eq!(table, (1..=10).map(|k| (k, 1)).collect());
    }
}
