//! Parallel-channel capacity estimate over the optical inhomogeneous line,
//! and batch execution of many independent channels.
//!
//! Channels are spectrally disjoint slices of the optical line, spaced
//! widely enough that neighboring slices do not interact; each channel is
//! therefore an independent copy of the storage scenario.

use crate::error::{Result, SimError};
use crate::sequences::{
    analyze_scenario, pulse_area, rephasing_pulse_from_area, EfficiencyReport, PulseRole,
    ScenarioSpec,
};
use std::f64::consts::TAU;

/// How many independent spectral channels fit into the optical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPlan {
    /// Optical inhomogeneous width (any frequency unit).
    pub delta_opt: f64,
    /// Per-channel spectral width, in the same unit.
    pub omega: f64,
    /// `floor(delta_opt / omega)`, at least 1.
    pub n_channels: usize,
}

impl ChannelPlan {
    pub fn new(delta_opt: f64, omega: f64) -> Result<Self> {
        Ok(ChannelPlan {
            delta_opt,
            omega,
            n_channels: channel_count(delta_opt, omega)?,
        })
    }
}

/// `floor(delta_opt / omega)` independent channels. Both widths must use
/// the same unit; only their ratio matters.
pub fn channel_count(delta_opt: f64, omega: f64) -> Result<usize> {
    if omega <= 0.0 {
        return Err(SimError::invalid("omega", "must be positive"));
    }
    if delta_opt < omega {
        return Err(SimError::SubSingleChannel { delta_opt, omega });
    }
    Ok((delta_opt / omega).floor() as usize)
}

/// Per-channel deviations from the base scenario's rephasing pulse.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelOverride {
    /// Rephasing area as a multiple of 2 pi (None keeps the base area).
    pub area_multiplier: Option<f64>,
    /// Rephasing field ratio omega_p : omega_c (None keeps the base ratio).
    pub ratio: Option<(f64, f64)>,
}

impl ChannelOverride {
    fn apply(&self, base: &ScenarioSpec) -> Result<ScenarioSpec> {
        let mut spec = base.clone();
        for pulse in spec.pulses.iter_mut() {
            if pulse.role != PulseRole::Rephasing {
                continue;
            }
            let seg = pulse.segment;
            let area = self
                .area_multiplier
                .map_or_else(|| pulse_area(&seg), |m| m * TAU);
            let ratio = self
                .ratio
                .unwrap_or((seg.omega_p_khz, seg.omega_c_khz));
            let center = seg.start_us + seg.duration_us / 2.0;
            pulse.segment =
                rephasing_pulse_from_area(area, seg.duration_us, ratio)?.centered_at(center);
        }
        Ok(spec)
    }
}

/// Runs `plan.n_channels` independent copies of the scenario, applying the
/// k-th override to the k-th channel (missing overrides keep the base
/// scenario). Reports come back in channel order.
pub fn run_multichannel(
    plan: &ChannelPlan,
    base: &ScenarioSpec,
    overrides: &[ChannelOverride],
) -> Result<Vec<EfficiencyReport>> {
    if overrides.len() > plan.n_channels {
        return Err(SimError::invalid(
            "overrides",
            "more overrides than channels",
        ));
    }
    (0..plan.n_channels)
        .map(|channel| {
            let spec = match overrides.get(channel) {
                Some(ov) => ov.apply(base),
                None => Ok(base.clone()),
            };
            spec.and_then(|s| analyze_scenario(&s))
                .map_err(|source| SimError::ChannelFailure {
                    channel,
                    source: Box::new(source),
                })
        })
        .collect()
}
