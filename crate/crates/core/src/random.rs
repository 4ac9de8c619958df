//! Seeded randomness.
//!
//! All stochastic routines draw from ChaCha20 (`rand_chacha::ChaCha20Rng`)
//! seeded with `seed_from_u64`, so a given seed yields the same stream on
//! every platform. Each experiment owns its generator; nothing is shared.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, CMatrix};

pub type SeededRng = ChaCha20Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniform point on the unit circle, `exp(2 pi i u)` with `u` uniform on [0, 1).
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u: f64 = rng.random();
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * u)
}

/// Haar-distributed `n x n` unitary drawn from `rng`.
///
/// Columns of an i.i.d. complex Gaussian matrix are orthonormalized by
/// modified Gram-Schmidt (run twice for stability). This is the QR
/// factorization with a positive real diagonal in R, i.e. the phase-corrected
/// QR, whose Q factor is exactly Haar distributed.
pub fn haar_unitary_from<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    assert!(n >= 1, "haar_unitary needs n >= 1");
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| complex_gaussian(rng)).collect())
        .collect();
    for k in 0..n {
        for _pass in 0..2 {
            for j in 0..k {
                let (done, rest) = cols.split_at_mut(k);
                let proj = inner(&done[j], &rest[0]);
                for (x, q) in rest[0].iter_mut().zip(&done[j]) {
                    *x -= proj * q;
                }
            }
        }
        let nrm = crate::linalg::norm(&cols[k]);
        for x in cols[k].iter_mut() {
            *x /= nrm;
        }
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Haar unitary determined by `seed` alone.
pub fn haar_unitary(n: usize, seed: u64) -> CMatrix {
    haar_unitary_from(n, &mut rng(seed))
}

/// `count` consecutive Haar unitaries from one seeded stream.
pub fn haar_samples(n: usize, count: usize, seed: u64) -> Vec<CMatrix> {
    let mut r = rng(seed);
    (0..count).map(|_| haar_unitary_from(n, &mut r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_case_is_unimodular() {
        let u = haar_unitary(1, 3);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn outputs_are_unitary() {
        for seed in 0..20 {
            for n in [2, 3, 5, 8] {
                let u = haar_unitary(n, seed);
                assert!(u.unitarity_defect() <= 1e-10, "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        assert_eq!(haar_unitary(4, 99), haar_unitary(4, 99));
        assert_ne!(haar_unitary(4, 99), haar_unitary(4, 100));
        assert_eq!(haar_samples(2, 5, 1), haar_samples(2, 5, 1));
    }

    #[test]
    fn mean_abs_trace_squared_is_one() {
        // E|Tr U|^2 = 1 under Haar measure on U_n.
        let m = 100_000;
        let vals: Vec<f64> = haar_samples(2, m, 2024)
            .iter()
            .map(|u| u.trace().norm_sqr())
            .collect();
        let mean = vals.iter().sum::<f64>() / m as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        let se = (var / m as f64).sqrt();
        assert!((mean - 1.0).abs() <= 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn fourth_moment_matches_haar_not_ginibre() {
        // E|Tr U|^4 = 2 for n >= 2; a non-phase-corrected QR would bias this.
        let m = 100_000;
        let vals: Vec<f64> = haar_samples(3, m, 77)
            .iter()
            .map(|u| u.trace().norm_sqr().powi(2))
            .collect();
        let mean = vals.iter().sum::<f64>() / m as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        let se = (var / m as f64).sqrt();
        assert!((mean - 2.0).abs() <= 4.0 * se, "mean {mean} se {se}");
    }
}
