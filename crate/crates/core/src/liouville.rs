//! Rotating-frame Hamiltonian, equations of motion, and their vectorized
//! (Liouvillian) form for one spin group.

use nalgebra::{Matrix3, SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::params::{PulseSegment, SystemParams};
use crate::units::{angular, coherence_decay, population_rate};

/// Dimension of the vectorized density matrix.
pub const VEC_DIM: usize = 9;

/// 9x9 generator acting on the column-major vectorization of rho.
pub type Liouvillian = SMatrix<Complex64, 9, 9>;

/// Vectorized density matrix, column-major: v[3*b + a] = rho[(a, b)].
pub type StateVector = SVector<Complex64, 9>;

/// Ground-state superposition basis defined by the instantaneous drive.
///
/// The dark state `c1|1> - c2|2>` is decoupled from the fields; the bright
/// state `c2|1> + c1|2>` carries all the coupling to |3>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionBasis {
    pub c1: f64,
    pub c2: f64,
}

impl SuperpositionBasis {
    /// Dark-state amplitudes on |1> and |2> (the second with a minus sign).
    pub fn dark(&self) -> (f64, f64) {
        (self.c1, -self.c2)
    }

    /// Bright-state amplitudes on |1> and |2>.
    pub fn bright(&self) -> (f64, f64) {
        (self.c2, self.c1)
    }

    /// Dark-state projector as a density matrix.
    pub fn dark_projector(&self) -> Matrix3<Complex64> {
        let (a, b) = self.dark();
        let mut m = Matrix3::zeros();
        m[(0, 0)] = Complex64::new(a * a, 0.0);
        m[(1, 1)] = Complex64::new(b * b, 0.0);
        m[(0, 1)] = Complex64::new(a * b, 0.0);
        m[(1, 0)] = Complex64::new(a * b, 0.0);
        m
    }
}

/// Superposition-basis coefficients for drive amplitudes `omega_p` (on
/// |1>-|3>) and `omega_c` (on |2>-|3>): `c1 = omega_c/W`, `c2 = omega_p/W`
/// with `W` the generalized Rabi frequency.
///
/// With only the C field on, the dark state is bare |1>.
pub fn dark_state_coefficients(omega_p_khz: f64, omega_c_khz: f64) -> Result<SuperpositionBasis> {
    let w = omega_p_khz.hypot(omega_c_khz);
    if w <= 0.0 {
        return Err(SimError::UndefinedBasis);
    }
    Ok(SuperpositionBasis {
        c1: omega_c_khz / w,
        c2: omega_p_khz / w,
    })
}

/// Rotating-wave, rotating-frame Hamiltonian divided by hbar, in rad/us:
///
/// ```text
/// H = -1/2 [ wP e^{i phiP} |3><1| + wC e^{i phiC} |3><2| + h.c. ]
///     - wDelta |3><3|  -  wDeltaTwoPhoton |2><2|
/// ```
///
/// with every `w` the angular form of the corresponding kHz input. The result
/// is exactly Hermitian by construction.
pub fn build_hamiltonian(
    params: &SystemParams,
    seg: &PulseSegment,
    two_photon_detuning_khz: f64,
) -> Matrix3<Complex64> {
    let half_p = Complex64::from_polar(0.5 * angular(seg.omega_p_khz), seg.phase_p_rad);
    let half_c = Complex64::from_polar(0.5 * angular(seg.omega_c_khz), seg.phase_c_rad);

    let mut h = Matrix3::zeros();
    h[(2, 0)] = -half_p;
    h[(0, 2)] = -half_p.conj();
    h[(2, 1)] = -half_c;
    h[(1, 2)] = -half_c.conj();
    h[(2, 2)] = Complex64::new(-angular(params.detuning_khz), 0.0);
    h[(1, 1)] = Complex64::new(-angular(two_photon_detuning_khz), 0.0);
    h
}

/// Right-hand side of the master equation: `-i[H, rho]` plus relaxation.
///
/// Populations relax |3> -> |1>, |3> -> |2>, and |2> -> |1>; each coherence
/// decays at its own linewidth-derived constant. The generator is traceless,
/// so propagation conserves total population.
pub fn eom_rhs(
    rho: &Matrix3<Complex64>,
    h: &Matrix3<Complex64>,
    params: &SystemParams,
) -> Matrix3<Complex64> {
    let minus_i = Complex64::new(0.0, -1.0);
    let mut d = (h * rho - rho * h) * minus_i;

    let k31 = population_rate(params.relax_31_khz);
    let k32 = population_rate(params.relax_32_khz);
    let k21 = population_rate(params.relax_21_khz);
    let g12 = coherence_decay(params.linewidth_21_khz);
    let g13 = coherence_decay(params.linewidth_31_khz);
    let g23 = coherence_decay(params.linewidth_32_khz);

    let p22 = rho[(1, 1)];
    let p33 = rho[(2, 2)];
    d[(0, 0)] += k31 * p33 + k21 * p22;
    d[(1, 1)] += k32 * p33 - k21 * p22;
    d[(2, 2)] -= (k31 + k32) * p33;

    d[(0, 1)] -= g12 * rho[(0, 1)];
    d[(1, 0)] -= g12 * rho[(1, 0)];
    d[(0, 2)] -= g13 * rho[(0, 2)];
    d[(2, 0)] -= g13 * rho[(2, 0)];
    d[(1, 2)] -= g23 * rho[(1, 2)];
    d[(2, 1)] -= g23 * rho[(2, 1)];
    d
}

/// Column-major vectorization of a 3x3 matrix.
pub fn vectorize(m: &Matrix3<Complex64>) -> StateVector {
    StateVector::from_iterator(m.iter().copied())
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &StateVector) -> Matrix3<Complex64> {
    Matrix3::from_iterator(v.iter().copied())
}

/// Builds the constant 9x9 Liouvillian for one segment by applying the
/// equations of motion to each basis matrix E_ab; column 3b+a of the result
/// is the vectorized image of E_ab.
pub fn liouvillian(
    params: &SystemParams,
    seg: &PulseSegment,
    two_photon_detuning_khz: f64,
) -> Liouvillian {
    let h = build_hamiltonian(params, seg, two_photon_detuning_khz);
    let mut l = Liouvillian::zeros();
    for col in 0..VEC_DIM {
        let mut basis = Matrix3::zeros();
        basis[(col % 3, col / 3)] = Complex64::new(1.0, 0.0);
        let image = eom_rhs(&basis, &h, params);
        l.set_column(col, &vectorize(&image));
    }
    l
}
