//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building or running a simulation.
#[derive(Debug, Error)]
pub enum SimError {
    /// A parameter or scenario failed validation before any dynamics ran.
    #[error("invalid {what}: {why}")]
    Invalid { what: String, why: String },

    /// Both drive amplitudes are zero, so no dark/bright decomposition exists.
    #[error("undefined basis: both Rabi frequencies are zero")]
    UndefinedBasis,

    /// `echo_time` called with the write pulse at or after the rephasing pulse.
    #[error("pulse ordering violated: write time {write_us} us is not before rephasing time {rephase_us} us")]
    PulseOrdering { write_us: f64, rephase_us: f64 },

    /// Retrieval efficiency is undefined when nothing was stored.
    #[error("no stored coherence: |rho12| = {magnitude:.3e} at the write reference time")]
    NoStoredCoherence { magnitude: f64 },

    /// The channel estimate needs at least one full channel.
    #[error("sub-single-channel: optical width {delta_opt} is below the per-channel width {omega}")]
    SubSingleChannel { delta_opt: f64, omega: f64 },

    /// The matrix exponential failed to converge (pathological rate inputs).
    #[error("matrix exponential did not converge: {why}")]
    ExpmFailure { why: String },

    /// A step policy produced no integration steps.
    #[error("step policy produced zero steps for segment of {duration_us} us")]
    EmptyStepPolicy { duration_us: f64 },

    /// Propagation failed inside one ensemble group.
    #[error("group {index} (detuning {delta_khz} kHz): {source}")]
    GroupFailure {
        index: usize,
        delta_khz: f64,
        #[source]
        source: Box<SimError>,
    },

    /// A multichannel run failed inside one channel.
    #[error("channel {channel}: {source}")]
    ChannelFailure {
        channel: usize,
        #[source]
        source: Box<SimError>,
    },
}

impl SimError {
    /// Shorthand for validation failures.
    pub fn invalid(what: impl Into<String>, why: impl Into<String>) -> Self {
        SimError::Invalid {
            what: what.into(),
            why: why.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
