//! Unit conventions shared by every module.
//!
//! All public interfaces take linear frequencies in kilohertz and times in
//! microseconds. Internally the dynamics run in angular units (rad/us), so a
//! single set of conversion helpers keeps the factors of pi in one place:
//!
//! * Rabi frequencies and detunings enter the Hamiltonian as `2*pi*f` — a
//!   field quoted at `f` kHz drives one full Rabi cycle in `1/f` ms.
//! * Coherence linewidths are FWHM values; the corresponding amplitude decay
//!   constant is `pi*gamma`, which reproduces the dephasing time
//!   `T2 = 1/(pi*gamma)` (318 us for a 1 kHz spin linewidth).
//! * Population relaxation rates enter as `2*pi*Gamma`.

use std::f64::consts::PI;

/// One full turn; re-exported so call sites spell pulse areas as `TAU` rather
/// than `2.0 * PI`.
pub const TAU: f64 = std::f64::consts::TAU;

/// Angular frequency (rad/us) of a linear frequency given in kHz.
#[inline]
pub fn angular(khz: f64) -> f64 {
    TAU * khz * 1e-3
}

/// Amplitude decay constant (1/us) for a coherence with FWHM linewidth
/// `gamma` in kHz.
#[inline]
pub fn coherence_decay(gamma_khz: f64) -> f64 {
    PI * gamma_khz * 1e-3
}

/// Population relaxation constant (1/us) for a rate given in kHz.
#[inline]
pub fn population_rate(gamma_khz: f64) -> f64 {
    TAU * gamma_khz * 1e-3
}
