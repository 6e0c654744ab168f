//! Static medium parameters, drive segments, and initial states.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Result, SimError};

/// Decay and detuning parameters of the three-level medium.
///
/// Levels are |1> and |2> (ground doublet) and |3> (excited). `relax_ij` is
/// the population relaxation rate from |i> to |j> and `linewidth_ij` the FWHM
/// linewidth of the i-j coherence, both in kHz. `detuning_khz` is the common
/// one-photon offset of both optical fields from |3>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub relax_31_khz: f64,
    pub relax_32_khz: f64,
    pub relax_21_khz: f64,
    pub linewidth_31_khz: f64,
    pub linewidth_32_khz: f64,
    pub linewidth_21_khz: f64,
    pub detuning_khz: f64,
}

impl SystemParams {
    /// Parameter set used by the bundled scenarios: slow excited-state decay
    /// (1 kHz), optical linewidths of 25 kHz, a 1 kHz spin linewidth, and a
    /// 100 kHz one-photon detuning.
    pub fn reference() -> Self {
        SystemParams {
            relax_31_khz: 1.0,
            relax_32_khz: 1.0,
            relax_21_khz: 0.0,
            linewidth_31_khz: 25.0,
            linewidth_32_khz: 25.0,
            linewidth_21_khz: 1.0,
            detuning_khz: 100.0,
        }
    }

    /// All rates must be non-negative; detuning may have either sign.
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("relax_31_khz", self.relax_31_khz),
            ("relax_32_khz", self.relax_32_khz),
            ("relax_21_khz", self.relax_21_khz),
            ("linewidth_31_khz", self.linewidth_31_khz),
            ("linewidth_32_khz", self.linewidth_32_khz),
            ("linewidth_21_khz", self.linewidth_21_khz),
        ];
        for (name, value) in rates {
            if !value.is_finite() || value < 0.0 {
                return Err(SimError::invalid(name, format!("must be >= 0, got {value}")));
            }
        }
        if !self.detuning_khz.is_finite() {
            return Err(SimError::invalid("detuning_khz", "must be finite"));
        }
        Ok(())
    }
}

/// One piecewise-constant drive interval.
///
/// `omega_p_khz` drives the |1>-|3> transition and `omega_c_khz` the
/// |2>-|3> transition; the optional optical phases multiply the couplings by
/// `exp(i*phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment {
    pub start_us: f64,
    pub duration_us: f64,
    pub omega_p_khz: f64,
    pub omega_c_khz: f64,
    pub phase_p_rad: f64,
    pub phase_c_rad: f64,
}

impl PulseSegment {
    /// Zero-phase two-field pulse.
    pub fn new(start_us: f64, duration_us: f64, omega_p_khz: f64, omega_c_khz: f64) -> Self {
        PulseSegment {
            start_us,
            duration_us,
            omega_p_khz,
            omega_c_khz,
            phase_p_rad: 0.0,
            phase_c_rad: 0.0,
        }
    }

    /// A drive-free interval, used to represent gaps between pulses.
    pub fn free_evolution(start_us: f64, duration_us: f64) -> Self {
        PulseSegment::new(start_us, duration_us, 0.0, 0.0)
    }

    pub fn end_us(&self) -> f64 {
        self.start_us + self.duration_us
    }

    /// Returns the segment re-timed to start at `start_us`.
    pub fn with_start(mut self, start_us: f64) -> Self {
        self.start_us = start_us;
        self
    }

    /// Returns the segment re-timed so its midpoint sits at `center_us`.
    pub fn centered_at(self, center_us: f64) -> Self {
        let half = self.duration_us / 2.0;
        self.with_start(center_us - half)
    }

    /// True when both fields are off.
    pub fn is_dark(&self) -> bool {
        self.omega_p_khz == 0.0 && self.omega_c_khz == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration_us > 0.0) {
            return Err(SimError::invalid(
                "pulse duration",
                format!("must be > 0, got {}", self.duration_us),
            ));
        }
        if self.omega_p_khz < 0.0 || self.omega_c_khz < 0.0 {
            return Err(SimError::invalid(
                "pulse amplitude",
                "Rabi frequencies must be >= 0 (use the phase fields for sign)",
            ));
        }
        if !self.start_us.is_finite() {
            return Err(SimError::invalid("pulse start", "must be finite"));
        }
        Ok(())
    }
}

/// Validates that segments are time-ordered and non-overlapping, then fills
/// the gaps (and any leading/trailing span) with free-evolution segments so a
/// propagator can walk one contiguous chain.
///
/// A small tolerance absorbs floating-point seams between back-to-back
/// pulses.
pub fn gap_filled_sequence(segments: &[PulseSegment], span_us: f64) -> Result<Vec<PulseSegment>> {
    const SEAM: f64 = 1e-9;
    if !(span_us > 0.0) {
        return Err(SimError::invalid("span_us", "must be > 0"));
    }
    let mut sorted: Vec<PulseSegment> = segments.to_vec();
    for seg in &sorted {
        seg.validate()?;
    }
    sorted.sort_by(|a, b| a.start_us.total_cmp(&b.start_us));
    for pair in sorted.windows(2) {
        if pair[1].start_us < pair[0].end_us() - SEAM {
            return Err(SimError::invalid(
                "pulse sequence",
                format!(
                    "segments overlap: one ends at {} us, next starts at {} us",
                    pair[0].end_us(),
                    pair[1].start_us
                ),
            ));
        }
    }
    if let Some(last) = sorted.last() {
        if last.end_us() > span_us + SEAM {
            return Err(SimError::invalid(
                "pulse sequence",
                format!("last segment ends at {} us, beyond the {} us span", last.end_us(), span_us),
            ));
        }
    }

    let mut chain = Vec::with_capacity(2 * sorted.len() + 1);
    let mut cursor = 0.0;
    for seg in sorted {
        if seg.start_us > cursor + SEAM {
            chain.push(PulseSegment::free_evolution(cursor, seg.start_us - cursor));
        }
        cursor = seg.end_us();
        chain.push(seg);
    }
    if span_us > cursor + SEAM {
        chain.push(PulseSegment::free_evolution(cursor, span_us - cursor));
    }
    Ok(chain)
}

/// Initial density matrix selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// Equal incoherent mixture of the two ground states (rho11 = rho22 = 1/2).
    EqualGroundMixture,
    /// All population in |1>.
    Ground1,
}

impl InitialState {
    pub fn matrix(self) -> Matrix3<Complex64> {
        let mut m = Matrix3::zeros();
        match self {
            InitialState::EqualGroundMixture => {
                m[(0, 0)] = Complex64::new(0.5, 0.0);
                m[(1, 1)] = Complex64::new(0.5, 0.0);
            }
            InitialState::Ground1 => {
                m[(0, 0)] = Complex64::new(1.0, 0.0);
            }
        }
        m
    }
}
