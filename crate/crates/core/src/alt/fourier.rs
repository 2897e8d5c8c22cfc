use num_bigint::BigInt;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::bounds::density_bound;
use crate::error::{Error, Result};
use crate::lattice::EmpiricalLattice;
use crate::rational::Rational;

/// Relative tolerance under which two magnitudes count as a tie; ties go to
/// the lowest frequency.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumBin {
    pub bin: usize,
    /// Cycles per unit, `bin / len`.
    pub frequency: f64,
    /// `len / bin`; infinite at bin 0.
    pub period: f64,
    pub magnitude: f64,
    /// Nonzero frequency whose period lies strictly below the density bound.
    pub admissible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierFit {
    pub spectrum: Vec<SpectrumBin>,
    pub signal_len: usize,
    pub peak_bin: usize,
    pub peak_frequency: f64,
    pub tau_f: f64,
    /// `signal_len / peak_bin`, exact.
    pub tau_f_exact: Rational,
    pub density_bound: Rational,
}

/// DFT peak over the indicator of `S` sampled on `0..=max S`.
pub fn fourier_estimate(s: &EmpiricalLattice) -> Result<FourierFit> {
    fourier_estimate_padded(s, s.max_value() as usize + 1)
}

/// As [`fourier_estimate`] with the indicator zero-padded to `len` samples.
pub fn fourier_estimate_padded(s: &EmpiricalLattice, len: usize) -> Result<FourierFit> {
    if s.len() < 3 {
        return Err(Error::InsufficientData(
            "at least three distinct observations required",
        ));
    }
    if len <= s.max_value() as usize {
        return Err(Error::InvalidArgument(format!(
            "signal length {len} does not cover {}",
            s.max_value()
        )));
    }
    let bound = density_bound(s)?;
    let mut signal = vec![Complex::new(0.0f64, 0.0); len];
    for &x in s.values() {
        signal[x as usize].re = 1.0;
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut signal);

    // period len/j < (x̂+1)/n  <=>  len * n < j * (x̂+1)
    let lhs = BigInt::from(len) * BigInt::from(s.count_nonzero());
    let admissible = |j: usize| j > 0 && lhs < BigInt::from(j) * BigInt::from(s.max_value() + 1);

    let spectrum: Vec<SpectrumBin> = signal
        .iter()
        .enumerate()
        .map(|(j, c)| SpectrumBin {
            bin: j,
            frequency: j as f64 / len as f64,
            period: len as f64 / j as f64,
            magnitude: c.norm(),
            admissible: admissible(j),
        })
        .collect();

    let mut best: Option<&SpectrumBin> = None;
    for bin in spectrum.iter().filter(|b| b.admissible) {
        if best.is_none_or(|b| bin.magnitude > b.magnitude * (1.0 + TIE_TOLERANCE)) {
            best = Some(bin);
        }
    }
    let peak = best.ok_or(Error::SpectrumTooCoarse)?;
    let (peak_bin, peak_frequency) = (peak.bin, peak.frequency);
    Ok(FourierFit {
        signal_len: len,
        peak_bin,
        peak_frequency,
        tau_f: len as f64 / peak_bin as f64,
        tau_f_exact: Rational::new(len as u64, peak_bin as u64).expect("peak bin is nonzero"),
        density_bound: bound,
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(v: &[u64]) -> EmpiricalLattice {
        EmpiricalLattice::from_values(v.iter().copied()).unwrap()
    }

    /// Direct O(L²) evaluation of |Σ v[i] e^{-2πi ij/L}|.
    fn naive_magnitudes(s: &EmpiricalLattice, len: usize) -> Vec<f64> {
        (0..len)
            .map(|j| {
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for &x in s.values() {
                    let phase = -2.0 * std::f64::consts::PI * (x as f64) * (j as f64) / len as f64;
                    re += phase.cos();
                    im += phase.sin();
                }
                (re * re + im * im).sqrt()
            })
            .collect()
    }

    #[test]
    fn spectrum_matches_direct_dft() {
        let s = lattice(&[1, 2, 3, 5, 6, 7, 9, 10, 11, 13]);
        let fit = fourier_estimate(&s).unwrap();
        let naive = naive_magnitudes(&s, 14);
        for (bin, m) in fit.spectrum.iter().zip(naive) {
            assert!((bin.magnitude - m).abs() < 1e-9);
        }
    }

    #[test]
    fn worked_example_peak() {
        let s = lattice(&[1, 2, 3, 5, 6, 7, 9, 10, 11, 13]);
        let fit = fourier_estimate(&s).unwrap();
        assert_eq!(fit.signal_len, 14);
        assert!(fit.tau_f_exact < fit.density_bound);
        assert!((fit.tau_f - 1.32).abs() < 1.0 / 13.0, "{}", fit.tau_f);
        assert!(fit.peak_frequency > 0.0 && fit.peak_frequency <= 1.0);
        let peak = &fit.spectrum[fit.peak_bin];
        assert!(fit
            .spectrum
            .iter()
            .filter(|b| b.admissible)
            .all(|b| b.magnitude <= peak.magnitude));
    }

    #[test]
    fn even_comb_at_natural_length() {
        // Length 9 has no bin at frequency 1/2; the admissible band starts
        // above 4/9, so the peak is the first bin beyond it.
        let fit = fourier_estimate(&lattice(&[0, 2, 4, 6, 8])).unwrap();
        assert_eq!(fit.tau_f_exact, Rational::frac(9, 5));
    }

    #[test]
    fn periodic_combs_recover_period() {
        for p in 2..=4u64 {
            let s = lattice(&(0..4).map(|i| i * p).collect::<Vec<_>>());
            for reps in [4usize, 5, 8] {
                let len = reps * p as usize;
                let fit = fourier_estimate_padded(&s, len).unwrap();
                assert_eq!(
                    fit.tau_f_exact,
                    Rational::from_integer(p),
                    "p={p} len={len}"
                );
            }
        }
    }

    #[test]
    fn identity_lattice_has_no_admissible_bin() {
        assert_eq!(
            fourier_estimate(&lattice(&[0, 1, 2, 3])),
            Err(Error::SpectrumTooCoarse)
        );
    }

    #[test]
    fn preconditions() {
        assert!(matches!(
            fourier_estimate(&lattice(&[1, 2])),
            Err(Error::InsufficientData(_))
        ));
        assert!(fourier_estimate_padded(&lattice(&[1, 2, 5]), 5).is_err());
    }
}
