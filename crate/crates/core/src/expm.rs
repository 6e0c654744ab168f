//! Dense matrix exponential for the 9x9 segment generators.
//!
//! Scaling-and-squaring with a degree-13 Pade approximant. One order is
//! enough here: generator norms per segment are at most a few tens, so after
//! scaling the approximant is well inside its accuracy radius, and the cost
//! is negligible next to the per-group segment chains.

use crate::error::{Result, SimError};
use crate::liouville::Liouvillian;

/// Numerator/denominator coefficients of the [13/13] Pade approximant.
const B: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// 1-norm radius within which the degree-13 approximant holds full accuracy.
const THETA_13: f64 = 5.371_920_351_148_152;

fn one_norm(m: &Liouvillian) -> f64 {
    (0..9)
        .map(|j| m.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Computes `exp(a)`.
pub fn expm(a: &Liouvillian) -> Result<Liouvillian> {
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(SimError::ExpmFailure {
            why: format!("generator has non-finite 1-norm {norm}"),
        });
    }

    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.map(|x| x / 2f64.powi(squarings as i32));

    let identity = Liouvillian::identity();
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6 * (a6.map(|x| x * B[13]) + a4.map(|x| x * B[11]) + a2.map(|x| x * B[9]))
        + a6.map(|x| x * B[7])
        + a4.map(|x| x * B[5])
        + a2.map(|x| x * B[3])
        + identity.map(|x| x * B[1]);
    let u = &scaled * u_inner;
    let v = &a6 * (a6.map(|x| x * B[12]) + a4.map(|x| x * B[10]) + a2.map(|x| x * B[8]))
        + a6.map(|x| x * B[6])
        + a4.map(|x| x * B[4])
        + a2.map(|x| x * B[2])
        + identity.map(|x| x * B[0]);

    let mut result = (v - u)
        .lu()
        .solve(&(v + u))
        .ok_or_else(|| SimError::ExpmFailure {
            why: "Pade denominator is singular".to_string(),
        })?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::SMatrix;
    use num_complex::Complex64;

    type M = SMatrix<Complex64, 9, 9>;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Taylor-series reference, valid for small-norm inputs.
    fn series_expm(a: &M, terms: usize) -> M {
        let mut sum = M::identity();
        let mut power = M::identity();
        for k in 1..=terms {
            power = (&power * a).map(|x| x / k as f64);
            sum += power;
        }
        sum
    }

    #[test]
    fn exponential_of_zero_is_identity() {
        let e = expm(&M::zeros()).unwrap();
        assert!((e - M::identity()).norm() < 1e-15);
    }

    #[test]
    fn diagonal_generator_exponentiates_entrywise() {
        let mut a = M::zeros();
        for k in 0..9 {
            a[(k, k)] = c(-0.3 * k as f64, 0.2 * k as f64);
        }
        let e = expm(&a).unwrap();
        for k in 0..9 {
            let expected = a[(k, k)].exp();
            assert_relative_eq!(e[(k, k)].re, expected.re, epsilon = 1e-13);
            assert_relative_eq!(e[(k, k)].im, expected.im, epsilon = 1e-13);
        }
    }

    #[test]
    fn matches_series_for_moderate_norm() {
        let mut a = M::zeros();
        for row in 0..9 {
            for col in 0..9 {
                let v = 0.08 * ((row * 9 + col) as f64).sin();
                a[(row, col)] = c(v, 0.05 * ((row + 2 * col) as f64).cos());
            }
        }
        let e = expm(&a).unwrap();
        let reference = series_expm(&a, 30);
        assert!((e - reference).norm() < 1e-12);
    }

    #[test]
    fn large_rotation_needs_squaring_and_stays_unitary() {
        // Anti-Hermitian generator with norm far above the Pade radius.
        let theta = 50.0;
        let mut a = M::zeros();
        a[(0, 1)] = c(-theta, 0.0);
        a[(1, 0)] = c(theta, 0.0);
        let e = expm(&a).unwrap();
        assert_relative_eq!(e[(0, 0)].re, theta.cos(), epsilon = 1e-11);
        assert_relative_eq!(e[(1, 0)].re, theta.sin(), epsilon = 1e-11);
        assert!((e.adjoint() * e - M::identity()).norm() < 1e-10);
    }

    #[test]
    fn inverse_matches_negated_generator() {
        let mut a = M::zeros();
        for row in 0..9 {
            for col in 0..9 {
                a[(row, col)] = c(
                    0.4 * ((row as f64) - (col as f64)) / 9.0,
                    0.3 * ((row + col) as f64) / 9.0,
                );
            }
        }
        let forward = expm(&a).unwrap();
        let backward = expm(&a.map(|x| -x)).unwrap();
        assert!((forward * backward - M::identity()).norm() < 1e-12);
    }
}
