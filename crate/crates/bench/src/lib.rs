//! Shared fixtures for the benchmarks: a representative drive generator and
//! the reference storage/rephasing scenario at full and reduced ensemble
//! resolution.

use num_complex::Complex64;

use ramanmem::{
    liouvillian, scenario_fig1, DensityMatrix, EnsembleSpec, Liouvillian, PulseSegment,
    ScenarioSpec, SystemParams,
};

/// Generator of the reference system driven by the two-field write pulse,
/// for a group detuned 2 kHz from the two-photon resonance.
pub fn write_pulse_generator() -> Liouvillian {
    let params = SystemParams::reference();
    let seg = PulseSegment::new(0.0, 10.0, 50.0, 50.0);
    liouvillian(&params, &seg, 2.0)
}

/// The same generator pre-scaled by a 0.1 us sampling step, i.e. the matrix
/// whose exponential one propagation step needs.
pub fn write_pulse_step_matrix() -> Liouvillian {
    write_pulse_generator() * Complex64::from(0.1)
}

/// Storage / dephasing / rephasing / echo scenario at full resolution.
pub fn reference_scenario() -> ScenarioSpec {
    scenario_fig1()
}

/// The same scenario with a 31-group ensemble and coarser sampling, small
/// enough for tight benchmark loops.
pub fn coarse_scenario() -> ScenarioSpec {
    let mut spec = scenario_fig1();
    spec.ensemble = EnsembleSpec {
        fwhm_khz: 100.0,
        group_count: 31,
        step_khz: 8.0,
    };
    spec.sample_dt_us = 0.2;
    spec
}

/// Initial state matching the scenario constructors.
pub fn initial_state() -> DensityMatrix {
    DensityMatrix::from_initial(reference_scenario().initial_state)
}
