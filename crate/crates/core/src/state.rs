//! Density-matrix wrapper with the physicality checks used throughout the
//! test suites.

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;

use crate::params::InitialState;

/// A 3x3 density matrix. Indices 0, 1, 2 correspond to levels |1>, |2>, |3>.
///
/// The wrapper does not force its invariants on construction — propagation is
/// trusted to preserve them and the checks below measure how well it does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(pub Matrix3<Complex64>);

impl DensityMatrix {
    pub fn new(m: Matrix3<Complex64>) -> Self {
        DensityMatrix(m)
    }

    pub fn from_initial(init: InitialState) -> Self {
        DensityMatrix(init.matrix())
    }

    /// Pure state |k><k| for k in 0..3.
    pub fn pure(level: usize) -> Self {
        let mut m = Matrix3::zeros();
        m[(level, level)] = Complex64::new(1.0, 0.0);
        DensityMatrix(m)
    }

    pub fn matrix(&self) -> &Matrix3<Complex64> {
        &self.0
    }

    /// Population of level k (real part of the diagonal entry).
    pub fn population(&self, level: usize) -> f64 {
        self.0[(level, level)].re
    }

    /// Coherence rho[a][b] for a != b.
    pub fn coherence(&self, a: usize, b: usize) -> Complex64 {
        self.0[(a, b)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// |tr(rho) - 1|.
    pub fn trace_defect(&self) -> f64 {
        (self.trace() - Complex64::new(1.0, 0.0)).norm()
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..3 {
            for b in 0..3 {
                let d = (self.0[(a, b)] - self.0[(b, a)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part; negative values measure the
    /// loss of positive semidefiniteness.
    pub fn min_eigenvalue(&self) -> f64 {
        // Symmetrize first so the eigensolver sees an exactly Hermitian input.
        let herm = (self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let eigen = SymmetricEigen::new(herm);
        eigen.eigenvalues.iter().fold(f64::INFINITY, |acc, &ev| acc.min(ev))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_state_is_physical() {
        let rho = DensityMatrix::pure(0);
        assert_eq!(rho.trace_defect(), 0.0);
        assert_eq!(rho.hermiticity_defect(), 0.0);
        assert!(rho.min_eigenvalue().abs() < 1e-14);
    }

    #[test]
    fn min_eigenvalue_sees_negativity() {
        // diag(1.5, -0.5, 0): trace 1 but not positive semidefinite.
        let mut m = Matrix3::zeros();
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        let rho = DensityMatrix::new(m);
        assert!((rho.min_eigenvalue() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn min_eigenvalue_handles_complex_coherences() {
        // Pure superposition (|1> + i|2>)/sqrt(2): eigenvalues {1, 0, 0}.
        let a = Complex64::new(0.5, 0.0);
        let c = Complex64::new(0.0, 0.5);
        let mut m = Matrix3::zeros();
        m[(0, 0)] = a;
        m[(1, 1)] = a;
        m[(0, 1)] = -c;
        m[(1, 0)] = c;
        let rho = DensityMatrix::new(m);
        assert!(rho.min_eigenvalue().abs() < 1e-12);
    }

    #[test]
    fn coherence_accessor_matches_matrix() {
        let mut m = Matrix3::zeros();
        m[(0, 1)] = Complex64::new(0.25, -0.125);
        m[(1, 0)] = Complex64::new(0.25, 0.125);
        let rho = DensityMatrix::new(m);
        assert_eq!(rho.coherence(0, 1), Complex64::new(0.25, -0.125));
    }
}
