//! Strict TOML scenario files.
//!
//! Every key carries its unit in its name (`_khz`, `_us`, `_rad`); unknown
//! keys are rejected. A pulse is defined either by explicit amplitudes or
//! by an area (in units of pi) plus a field ratio — never both — and is
//! timed by exactly one of `start_us` / `center_us`.

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;

use ramanmem::{
    discretize_gaussian, gap_filled_sequence, rephasing_pulse_from_area, AnalysisSpec, ChannelPlan,
    EnsembleSpec, InitialState, PulseRole, PulseSegment, ScenarioPulse, ScenarioSpec, SystemParams,
};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    system: SystemTable,
    ensemble: EnsembleTable,
    run: RunTable,
    #[serde(default, rename = "pulse")]
    pulses: Vec<PulseTable>,
    analysis: AnalysisTable,
    channels: Option<ChannelsTable>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemTable {
    relax_31_khz: f64,
    relax_32_khz: f64,
    relax_21_khz: f64,
    linewidth_31_khz: f64,
    linewidth_32_khz: f64,
    linewidth_21_khz: f64,
    detuning_khz: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleTable {
    fwhm_khz: f64,
    group_count: usize,
    step_khz: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunTable {
    span_us: f64,
    sample_dt_us: f64,
    initial_state: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PulseTable {
    role: String,
    start_us: Option<f64>,
    center_us: Option<f64>,
    duration_us: f64,
    omega_p_khz: Option<f64>,
    omega_c_khz: Option<f64>,
    phase_p_rad: Option<f64>,
    phase_c_rad: Option<f64>,
    area_pi: Option<f64>,
    ratio_p: Option<f64>,
    ratio_c: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalysisTable {
    write_end_us: f64,
    echo_window_us: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelsTable {
    delta_opt: f64,
    omega: f64,
}

/// A parsed scenario plus its optional channel plan.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub spec: ScenarioSpec,
    pub channels: Option<ChannelPlan>,
}

fn parse_role(role: &str) -> Result<PulseRole, CliError> {
    match role {
        "data" => Ok(PulseRole::Data),
        "rephasing" => Ok(PulseRole::Rephasing),
        "readout" => Ok(PulseRole::Readout),
        other => Err(CliError::Validation(format!(
            "pulse role '{other}' is not one of data, rephasing, readout"
        ))),
    }
}

fn parse_initial_state(name: &str) -> Result<InitialState, CliError> {
    match name {
        "equal-ground-mixture" => Ok(InitialState::EqualGroundMixture),
        "ground-1" => Ok(InitialState::Ground1),
        other => Err(CliError::Validation(format!(
            "initial_state '{other}' is not one of equal-ground-mixture, ground-1"
        ))),
    }
}

fn resolve_pulse(index: usize, table: &PulseTable) -> Result<ScenarioPulse, CliError> {
    let role = parse_role(&table.role)?;
    let context = format!("pulse {} ({})", index + 1, table.role);

    let start_us = match (table.start_us, table.center_us) {
        (Some(start), None) => start,
        (None, Some(center)) => center - table.duration_us / 2.0,
        (Some(_), Some(_)) => {
            return Err(CliError::Validation(format!(
                "{context}: give start_us or center_us, not both"
            )))
        }
        (None, None) => {
            return Err(CliError::Validation(format!(
                "{context}: give start_us or center_us"
            )))
        }
    };

    let amplitude_keys = table.omega_p_khz.is_some()
        || table.omega_c_khz.is_some()
        || table.phase_p_rad.is_some()
        || table.phase_c_rad.is_some();
    let area_keys = table.area_pi.is_some() || table.ratio_p.is_some() || table.ratio_c.is_some();

    let segment = match (amplitude_keys, area_keys) {
        (true, true) => {
            return Err(CliError::Validation(format!(
                "{context}: amplitude keys (omega_*/phase_*) and area keys \
                 (area_pi/ratio_*) cannot be mixed"
            )))
        }
        (false, false) => {
            return Err(CliError::Validation(format!(
                "{context}: give either omega_p_khz/omega_c_khz or area_pi with ratio_p/ratio_c"
            )))
        }
        (true, false) => {
            let mut seg = PulseSegment::new(
                start_us,
                table.duration_us,
                table.omega_p_khz.unwrap_or(0.0),
                table.omega_c_khz.unwrap_or(0.0),
            );
            seg.phase_p_rad = table.phase_p_rad.unwrap_or(0.0);
            seg.phase_c_rad = table.phase_c_rad.unwrap_or(0.0);
            seg
        }
        (false, true) => {
            let area_pi = table.area_pi.ok_or_else(|| {
                CliError::Validation(format!("{context}: ratio_p/ratio_c need area_pi"))
            })?;
            let ratio = match (table.ratio_p, table.ratio_c) {
                (Some(p), Some(c)) => (p, c),
                _ => {
                    return Err(CliError::Validation(format!(
                        "{context}: area_pi needs both ratio_p and ratio_c"
                    )))
                }
            };
            rephasing_pulse_from_area(area_pi * PI, table.duration_us, ratio)
                .map_err(|e| CliError::Validation(format!("{context}: {e}")))?
                .with_start(start_us)
        }
    };
    segment
        .validate()
        .map_err(|e| CliError::Validation(format!("{context}: {e}")))?;
    Ok(ScenarioPulse { role, segment })
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<LoadedScenario, CliError> {
    let file: ScenarioFile =
        toml::from_str(text).map_err(|e| CliError::Validation(format!("scenario file: {e}")))?;

    let system = SystemParams {
        relax_31_khz: file.system.relax_31_khz,
        relax_32_khz: file.system.relax_32_khz,
        relax_21_khz: file.system.relax_21_khz,
        linewidth_31_khz: file.system.linewidth_31_khz,
        linewidth_32_khz: file.system.linewidth_32_khz,
        linewidth_21_khz: file.system.linewidth_21_khz,
        detuning_khz: file.system.detuning_khz,
    };
    system.validate().map_err(CliError::from)?;

    let ensemble = EnsembleSpec {
        fwhm_khz: file.ensemble.fwhm_khz,
        group_count: file.ensemble.group_count,
        step_khz: file.ensemble.step_khz,
    };
    discretize_gaussian(&ensemble).map_err(CliError::from)?;

    if file.pulses.is_empty() {
        return Err(CliError::Validation(
            "scenario has no [[pulse]] entries".to_string(),
        ));
    }
    let pulses = file
        .pulses
        .iter()
        .enumerate()
        .map(|(i, p)| resolve_pulse(i, p))
        .collect::<Result<Vec<_>, _>>()?;

    if file.run.sample_dt_us <= 0.0 {
        return Err(CliError::Validation(
            "run.sample_dt_us must be positive".to_string(),
        ));
    }
    let segments: Vec<PulseSegment> = pulses.iter().map(|p| p.segment).collect();
    gap_filled_sequence(&segments, file.run.span_us).map_err(CliError::from)?;

    let [w_lo, w_hi] = file.analysis.echo_window_us;
    if !(w_lo < w_hi) || w_lo < 0.0 || w_hi > file.run.span_us {
        return Err(CliError::Validation(format!(
            "analysis.echo_window_us [{w_lo}, {w_hi}] must be increasing and inside the span"
        )));
    }

    let spec = ScenarioSpec {
        name: file.name,
        system,
        ensemble,
        initial_state: parse_initial_state(&file.run.initial_state)?,
        pulses,
        span_us: file.run.span_us,
        sample_dt_us: file.run.sample_dt_us,
        analysis: AnalysisSpec {
            write_end_us: file.analysis.write_end_us,
            echo_window_us: (w_lo, w_hi),
        },
    };

    let channels = file
        .channels
        .map(|c| ChannelPlan::new(c.delta_opt, c.omega))
        .transpose()
        .map_err(CliError::from)?;

    Ok(LoadedScenario { spec, channels })
}

/// Reads and parses a scenario file from disk.
pub fn load_scenario(path: &Path) -> Result<LoadedScenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text)
}
