//! Pulse-sequence scenarios: coherence storage, rephasing-driven echoes,
//! optical readout, and the rephasing-area / field-ratio studies.
//!
//! Timing convention: where a single time labels a pulse, it is the pulse
//! *center*. A write pulse centered at `t_w` rephased by a pulse centered at
//! `t_r` re-converges at `2 t_r - t_w`.

use std::f64::consts::{PI, TAU};

use crate::ensemble::{discretize_gaussian, simulate_ensemble, EnsembleSpec, TrajectoryRecord};
use crate::error::{Result, SimError};
use crate::params::{gap_filled_sequence, InitialState, PulseSegment, SystemParams};
use crate::state::DensityMatrix;

/// Default duration of area-specified rephasing pulses (us).
pub const REPHASING_DURATION_US: f64 = 0.4;

/// Amplitude (kHz) of each field in the standard write pulse.
pub const DATA_AMPLITUDE_KHZ: f64 = 50.0;

/// Duration (us) of the standard write pulse.
pub const DATA_DURATION_US: f64 = 10.0;

/// What a pulse does in a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseRole {
    /// Writes spin coherence (two-field drive).
    Data,
    /// Short strong pulse that conjugates the stored spin phase.
    Rephasing,
    /// Single-field pulse that converts spin coherence to optical emission.
    Readout,
}

impl PulseRole {
    pub fn label(&self) -> &'static str {
        match self {
            PulseRole::Data => "data",
            PulseRole::Rephasing => "rephasing",
            PulseRole::Readout => "readout",
        }
    }
}

/// One pulse of a scenario, with its role attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioPulse {
    pub role: PulseRole,
    pub segment: PulseSegment,
}

/// Analysis windows attached to a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisSpec {
    /// Time at which the stored ("write") coherence is referenced (us).
    pub write_end_us: f64,
    /// Window in which the retrieved echo is searched (us).
    pub echo_window_us: (f64, f64),
}

/// A fully resolved simulation scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub system: SystemParams,
    pub ensemble: EnsembleSpec,
    pub initial_state: InitialState,
    pub pulses: Vec<ScenarioPulse>,
    pub span_us: f64,
    pub sample_dt_us: f64,
    pub analysis: AnalysisSpec,
}

impl ScenarioSpec {
    /// The pulse segments without their roles, in declaration order.
    pub fn segments(&self) -> Vec<PulseSegment> {
        self.pulses.iter().map(|p| p.segment).collect()
    }
}

/// Echo-window analysis of one ensemble run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyReport {
    /// Aggregate |rho12| at the end of the (last) write pulse.
    pub write_peak: f64,
    /// Maximum aggregate |rho12| inside the echo window.
    pub echo_peak: f64,
    /// `echo_peak / write_peak`; may exceed 1 for rephased retrieval.
    pub efficiency: f64,
    /// Time of the echo-window maximum (us).
    pub echo_time_us: f64,
}

/// Pulse area in radians: `2 pi * sqrt(omegaP^2 + omegaC^2) * duration`,
/// with amplitudes in kHz and duration in us (1 kHz over 1 ms is one cycle).
pub fn pulse_area(seg: &PulseSegment) -> f64 {
    TAU * seg.omega_p_khz.hypot(seg.omega_c_khz) * seg.duration_us * 1e-3
}

/// Builds a pulse of the requested area and duration with the requested
/// amplitude ratio `omega_p : omega_c`, starting at t = 0. Re-time it with
/// [`PulseSegment::with_start`] or [`PulseSegment::centered_at`].
pub fn rephasing_pulse_from_area(
    target_area_rad: f64,
    duration_us: f64,
    ratio_p_to_c: (f64, f64),
) -> Result<PulseSegment> {
    if duration_us <= 0.0 {
        return Err(SimError::invalid("duration_us", "must be positive"));
    }
    if target_area_rad < 0.0 {
        return Err(SimError::invalid("target_area_rad", "must be nonnegative"));
    }
    let (rp, rc) = ratio_p_to_c;
    if rp < 0.0 || rc < 0.0 {
        return Err(SimError::invalid(
            "ratio_p_to_c",
            "ratio components must be nonnegative",
        ));
    }
    let norm = rp.hypot(rc);
    if norm <= 0.0 {
        return Err(SimError::invalid(
            "ratio_p_to_c",
            "ratio components must not both be zero",
        ));
    }
    let generalized_rabi_khz = target_area_rad / (TAU * duration_us * 1e-3);
    Ok(PulseSegment::new(
        0.0,
        duration_us,
        generalized_rabi_khz * rp / norm,
        generalized_rabi_khz * rc / norm,
    ))
}

/// Re-convergence time of coherence written at `t_write_us` and rephased at
/// `t_rephase_us` (both pulse centers): `2 t_rephase - t_write`.
pub fn echo_time(t_rephase_us: f64, t_write_us: f64) -> Result<f64> {
    if t_write_us >= t_rephase_us {
        return Err(SimError::PulseOrdering {
            write_us: t_write_us,
            rephase_us: t_rephase_us,
        });
    }
    Ok(2.0 * t_rephase_us - t_write_us)
}

/// Homogeneous spin coherence lifetime `1/(pi gamma21)` in us for a
/// linewidth in kHz.
pub fn spin_t2(gamma21_khz: f64) -> Result<f64> {
    if gamma21_khz <= 0.0 {
        return Err(SimError::invalid("gamma21_khz", "must be positive"));
    }
    Ok(1000.0 / (PI * gamma21_khz))
}

/// Echo-window peak of aggregate |rho12| relative to the stored value at
/// `write_end_us`.
pub fn retrieval_efficiency(
    record: &TrajectoryRecord,
    write_end_us: f64,
    echo_window_us: (f64, f64),
) -> Result<EfficiencyReport> {
    let (w_lo, w_hi) = echo_window_us;
    let span = *record
        .times_us
        .last()
        .ok_or_else(|| SimError::invalid("record", "trajectory is empty"))?;
    if !(w_lo < w_hi) {
        return Err(SimError::invalid(
            "echo_window_us",
            "window must have positive length",
        ));
    }
    if w_lo < -1e-9 || w_hi > span + 1e-9 {
        return Err(SimError::invalid(
            "echo_window_us",
            "window extends outside the simulated span",
        ));
    }

    let write_idx = record.index_at_time(write_end_us);
    let write_peak = record.aggregate.abs_rho12(write_idx);
    if write_peak < 1e-9 {
        return Err(SimError::NoStoredCoherence {
            magnitude: write_peak,
        });
    }

    let mut echo_peak = f64::NEG_INFINITY;
    let mut echo_time_us = w_lo;
    for (idx, &t) in record.times_us.iter().enumerate() {
        if t < w_lo - 1e-9 || t > w_hi + 1e-9 {
            continue;
        }
        let value = record.aggregate.abs_rho12(idx);
        if value > echo_peak {
            echo_peak = value;
            echo_time_us = t;
        }
    }
    if !echo_peak.is_finite() {
        return Err(SimError::invalid(
            "echo_window_us",
            "window contains no samples",
        ));
    }
    Ok(EfficiencyReport {
        write_peak,
        echo_peak,
        efficiency: echo_peak / write_peak,
        echo_time_us,
    })
}

fn data_pulse(start_us: f64) -> ScenarioPulse {
    ScenarioPulse {
        role: PulseRole::Data,
        segment: PulseSegment::new(
            start_us,
            DATA_DURATION_US,
            DATA_AMPLITUDE_KHZ,
            DATA_AMPLITUDE_KHZ,
        ),
    }
}

fn rephasing_pulse(center_us: f64, area_rad: f64, ratio: (f64, f64)) -> Result<ScenarioPulse> {
    Ok(ScenarioPulse {
        role: PulseRole::Rephasing,
        segment: rephasing_pulse_from_area(area_rad, REPHASING_DURATION_US, ratio)?
            .centered_at(center_us),
    })
}

fn readout_pulse(start_us: f64, duration_us: f64, omega_c_khz: f64) -> ScenarioPulse {
    ScenarioPulse {
        role: PulseRole::Readout,
        segment: PulseSegment::new(start_us, duration_us, 0.0, omega_c_khz),
    }
}

/// Single write pulse at t = 0-10 us, 2 pi rephasing centered at 50 us:
/// storage, free-induction dephasing, and the echo near 95 us.
pub fn scenario_fig1() -> ScenarioSpec {
    let rephasing = rephasing_pulse(50.0, TAU, (1.0, 1.0)).expect("valid constants");
    ScenarioSpec {
        name: "fig1".to_string(),
        system: SystemParams::reference(),
        ensemble: EnsembleSpec::reference(),
        initial_state: InitialState::EqualGroundMixture,
        pulses: vec![data_pulse(0.0), rephasing],
        span_us: 110.0,
        sample_dt_us: 0.1,
        analysis: AnalysisSpec {
            write_end_us: 10.0,
            echo_window_us: (90.0, 100.0),
        },
    }
}

/// Two write pulses (0-10 us and 20-30 us) with a rephasing pulse centered
/// at 50 us whose area is `area_multiplier * 2 pi` and whose field ratio is
/// `ratio`. The analysis window brackets the echo of the first write pulse.
pub fn scenario_fig3(area_multiplier: f64, ratio: (f64, f64)) -> Result<ScenarioSpec> {
    let rephasing = rephasing_pulse(50.0, area_multiplier * TAU, ratio)?;
    Ok(ScenarioSpec {
        name: "fig3".to_string(),
        system: SystemParams::reference(),
        ensemble: EnsembleSpec::reference(),
        initial_state: InitialState::EqualGroundMixture,
        pulses: vec![data_pulse(0.0), data_pulse(20.0), rephasing],
        span_us: 103.0,
        sample_dt_us: 0.1,
        analysis: AnalysisSpec {
            write_end_us: 30.0,
            echo_window_us: (90.0, 100.0),
        },
    })
}

/// Write pulse, rephasing centered at 40 us, then a weak single-field
/// readout (omega_c only) across the echo time at 75 us: the readout
/// converts the rephased spin coherence into optical emission and depletes
/// it instead of letting it survive the echo.
pub fn scenario_fig4_readout() -> ScenarioSpec {
    let rephasing = rephasing_pulse(40.0, TAU, (1.0, 1.0)).expect("valid constants");
    ScenarioSpec {
        name: "fig4".to_string(),
        system: SystemParams::reference(),
        ensemble: EnsembleSpec::reference(),
        initial_state: InitialState::EqualGroundMixture,
        pulses: vec![data_pulse(0.0), rephasing, readout_pulse(75.0, 15.0, 50.0)],
        span_us: 95.0,
        sample_dt_us: 0.1,
        analysis: AnalysisSpec {
            write_end_us: 10.0,
            echo_window_us: (70.0, 80.0),
        },
    }
}

/// Two write pulses and two readout pulses after a 2 pi rephasing pulse:
/// the echoes re-emerge in reverse write order (second write first), and
/// each readout converts one echo into optical emission.
pub fn scenario_fig6_two_data_two_readout() -> ScenarioSpec {
    let rephasing = rephasing_pulse(50.0, TAU, (1.0, 1.0)).expect("valid constants");
    ScenarioSpec {
        name: "fig6".to_string(),
        system: SystemParams::reference(),
        ensemble: EnsembleSpec::reference(),
        initial_state: InitialState::EqualGroundMixture,
        pulses: vec![
            data_pulse(0.0),
            data_pulse(20.0),
            rephasing,
            readout_pulse(75.0, 13.0, 50.0),
            readout_pulse(95.0, 13.0, 50.0),
        ],
        span_us: 112.0,
        sample_dt_us: 0.1,
        analysis: AnalysisSpec {
            write_end_us: 30.0,
            echo_window_us: (90.0, 100.0),
        },
    }
}

/// Runs one scenario over its discretized ensemble.
pub fn simulate_scenario(spec: &ScenarioSpec, keep_per_group: bool) -> Result<TrajectoryRecord> {
    let groups = discretize_gaussian(&spec.ensemble)?;
    let segments = gap_filled_sequence(&spec.segments(), spec.span_us)?;
    let rho0 = DensityMatrix::from_initial(spec.initial_state);
    simulate_ensemble(
        &spec.system,
        &segments,
        &groups,
        &rho0,
        spec.sample_dt_us,
        keep_per_group,
    )
}

/// Runs a scenario and evaluates its analysis window.
pub fn analyze_scenario(spec: &ScenarioSpec) -> Result<EfficiencyReport> {
    let record = simulate_scenario(spec, false)?;
    retrieval_efficiency(
        &record,
        spec.analysis.write_end_us,
        spec.analysis.echo_window_us,
    )
}

/// One point of an area or ratio study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyPoint {
    pub label: String,
    pub area_rad: f64,
    pub ratio: (f64, f64),
    pub report: EfficiencyReport,
}

/// Efficiency versus rephasing-pulse area at a fixed 1:1 field ratio, on
/// the two-write-pulse scenario.
pub fn run_area_study(areas_rad: &[f64]) -> Result<Vec<StudyPoint>> {
    areas_rad
        .iter()
        .map(|&area| {
            let spec = scenario_fig3(area / TAU, (1.0, 1.0))?;
            let report = analyze_scenario(&spec)?;
            Ok(StudyPoint {
                label: format!("{:.2}pi", area / PI),
                area_rad: area,
                ratio: (1.0, 1.0),
                report,
            })
        })
        .collect()
}

/// Efficiency versus rephasing-pulse field ratio at fixed 2 pi area, on the
/// two-write-pulse scenario.
pub fn run_ratio_study(ratios: &[(f64, f64)]) -> Result<Vec<StudyPoint>> {
    ratios
        .iter()
        .map(|&ratio| {
            let spec = scenario_fig3(1.0, ratio)?;
            let report = analyze_scenario(&spec)?;
            Ok(StudyPoint {
                label: format!("{}/{}", ratio.0, ratio.1),
                area_rad: TAU,
                ratio,
                report,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn area_of_silent_segment_is_zero() {
        let seg = PulseSegment::free_evolution(0.0, 3.0);
        assert_eq!(pulse_area(&seg), 0.0);
    }

    #[test]
    fn two_pi_over_400ns_means_2500_khz_generalized_rabi() {
        let seg = PulseSegment::new(0.0, 0.4, 2500.0 / 2f64.sqrt(), 2500.0 / 2f64.sqrt());
        assert_relative_eq!(pulse_area(&seg), TAU, epsilon = 1e-12);
    }

    #[test]
    fn pythagorean_ratios_share_an_area() {
        let a = PulseSegment::new(0.0, 2.0, 30.0, 40.0);
        let b = PulseSegment::new(0.0, 2.0, 50.0, 0.0);
        assert_relative_eq!(pulse_area(&a), pulse_area(&b), epsilon = 1e-12);
    }

    #[test]
    fn area_constructor_hits_requested_area_and_ratio() {
        let seg = rephasing_pulse_from_area(TAU, 0.4, (1.0, 1.0)).unwrap();
        assert_relative_eq!(seg.omega_p_khz, 2500.0 / 2f64.sqrt(), epsilon = 1e-9);
        assert_relative_eq!(seg.omega_c_khz, 2500.0 / 2f64.sqrt(), epsilon = 1e-9);
        assert_relative_eq!(pulse_area(&seg), TAU, epsilon = 1e-12);

        let skewed = rephasing_pulse_from_area(TAU, 0.8, (10.0, 49.0)).unwrap();
        assert_relative_eq!(
            skewed.omega_c_khz / skewed.omega_p_khz,
            4.9,
            epsilon = 1e-12
        );
        // Half the duration of the 0.4 us anchor case means half the
        // generalized Rabi frequency: 1250 kHz.
        assert_relative_eq!(
            skewed.omega_p_khz.hypot(skewed.omega_c_khz),
            1250.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn zero_area_yields_silent_segment() {
        let seg = rephasing_pulse_from_area(0.0, 0.4, (1.0, 1.0)).unwrap();
        assert_eq!((seg.omega_p_khz, seg.omega_c_khz), (0.0, 0.0));
    }

    #[test]
    fn degenerate_area_requests_are_rejected() {
        assert!(rephasing_pulse_from_area(TAU, 0.0, (1.0, 1.0)).is_err());
        assert!(rephasing_pulse_from_area(TAU, 0.4, (0.0, 0.0)).is_err());
        assert!(rephasing_pulse_from_area(-1.0, 0.4, (1.0, 1.0)).is_err());
    }

    #[test]
    fn echo_time_formula() {
        assert_relative_eq!(echo_time(50.0, 5.0).unwrap(), 95.0);
        assert_relative_eq!(echo_time(50.0, 10.0).unwrap(), 90.0);
        assert!(matches!(
            echo_time(50.0, 50.0),
            Err(SimError::PulseOrdering { .. })
        ));
    }

    #[test]
    fn spin_t2_anchor_values() {
        assert_relative_eq!(spin_t2(1.0).unwrap(), 318.3098861837907, epsilon = 1e-9);
        assert_relative_eq!(spin_t2(2.0).unwrap(), 159.15494309189535, epsilon = 1e-9);
        assert_relative_eq!(spin_t2(0.5).unwrap(), 636.6197723675814, epsilon = 1e-9);
        assert!(spin_t2(0.0).is_err());
    }

    #[test]
    fn standard_scenarios_have_expected_shape() {
        let fig1 = scenario_fig1();
        assert_eq!(fig1.pulses.len(), 2);
        assert_eq!(fig1.pulses[0].role, PulseRole::Data);
        assert_relative_eq!(fig1.pulses[1].segment.start_us, 49.8, epsilon = 1e-12);
        assert_relative_eq!(pulse_area(&fig1.pulses[1].segment), TAU, epsilon = 1e-9);

        let quad = scenario_fig3(2.0, (1.0, 1.0)).unwrap();
        assert_relative_eq!(
            pulse_area(&quad.pulses[2].segment),
            2.0 * TAU,
            epsilon = 1e-9
        );

        let readout = scenario_fig4_readout();
        let last = readout.pulses.last().unwrap();
        assert_eq!(last.role, PulseRole::Readout);
        assert_eq!(last.segment.omega_p_khz, 0.0);
        assert!(last.segment.omega_c_khz > 0.0);

        let two = scenario_fig6_two_data_two_readout();
        let readouts = two
            .pulses
            .iter()
            .filter(|p| p.role == PulseRole::Readout)
            .count();
        assert_eq!(readouts, 2);
    }

    #[test]
    fn efficiency_requires_stored_coherence_and_valid_window() {
        let mut spec = scenario_fig1();
        spec.ensemble = EnsembleSpec {
            fwhm_khz: 100.0,
            group_count: 5,
            step_khz: 60.0,
        };
        let record = simulate_scenario(&spec, false).unwrap();
        // Referencing a time before the write pulse finds no coherence.
        assert!(matches!(
            retrieval_efficiency(&record, 0.0, (90.0, 100.0)),
            Err(SimError::NoStoredCoherence { .. })
        ));
        // A window past the simulated span is rejected.
        assert!(retrieval_efficiency(&record, 10.0, (100.0, 200.0)).is_err());
        assert!(retrieval_efficiency(&record, 10.0, (100.0, 90.0)).is_err());
    }

    #[test]
    fn without_rephasing_the_dephased_line_stays_dark() {
        let mut spec = scenario_fig1();
        spec.pulses.truncate(1); // keep only the write pulse
        let record = simulate_scenario(&spec, false).unwrap();
        let report = retrieval_efficiency(&record, 10.0, (90.0, 100.0)).unwrap();
        assert!(
            report.efficiency < 0.05,
            "unrephased efficiency {:.4}",
            report.efficiency
        );
    }
}
