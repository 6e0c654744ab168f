//! Time evolution over piecewise-constant segments.
//!
//! The primary path vectorizes the density matrix and applies the matrix
//! exponential of the per-segment Liouvillian, which is exact for constant
//! drive. A fixed-step RK4 integrator over the same equations of motion is
//! kept as an independent cross-check; it never feeds results into the
//! exponential path.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::expm::expm;
use crate::liouville::{liouvillian, unvectorize, vectorize, Liouvillian};
use crate::params::{PulseSegment, SystemParams};
use crate::state::DensityMatrix;

/// Tolerance for matching sample times against segment boundaries (us).
const TIME_EPS: f64 = 1e-7;

/// Sampled states along one segment or one contiguous chain of segments.
#[derive(Debug, Clone)]
pub struct SegmentTrajectory {
    /// Strictly increasing sample times in us.
    pub times_us: Vec<f64>,
    /// State at each sample time.
    pub states: Vec<DensityMatrix>,
}

impl SegmentTrajectory {
    /// Final sampled state.
    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory is never empty")
    }
}

/// Fixed-step policy for the RK4 cross-check integrator.
///
/// The step is the smaller of `duration / min_steps` and one fastest cycle
/// divided by `steps_per_cycle`, where the fastest cycle is set by the
/// largest drive, detuning, or rate in the segment.
#[derive(Debug, Clone, Copy)]
pub struct StepPolicy {
    pub min_steps: usize,
    pub steps_per_cycle: f64,
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy {
            min_steps: 20,
            steps_per_cycle: 512.0,
        }
    }
}

impl StepPolicy {
    /// Number of RK4 steps for one segment.
    pub fn steps_for(
        &self,
        seg: &PulseSegment,
        params: &SystemParams,
        two_photon_detuning_khz: f64,
    ) -> Result<usize> {
        let f_max = [
            seg.omega_p_khz.abs(),
            seg.omega_c_khz.abs(),
            params.detuning_khz.abs(),
            two_photon_detuning_khz.abs(),
            params.relax_31_khz,
            params.relax_32_khz,
            params.relax_21_khz,
            params.linewidth_31_khz,
            params.linewidth_32_khz,
            params.linewidth_21_khz,
        ]
        .into_iter()
        .fold(0.0_f64, f64::max);

        let mut steps = self.min_steps as f64;
        if f_max > 0.0 && self.steps_per_cycle > 0.0 {
            // One cycle of f kHz lasts 1000/f us.
            let cycle_us = 1000.0 / f_max;
            let max_step_us = cycle_us / self.steps_per_cycle;
            steps = steps.max((seg.duration_us / max_step_us).ceil());
        }
        let steps = steps.ceil() as usize;
        if steps == 0 {
            return Err(SimError::EmptyStepPolicy {
                duration_us: seg.duration_us,
            });
        }
        Ok(steps)
    }
}

/// Small cache of step propagators for one segment generator. A segment
/// chain needs at most a handful of distinct time gaps (leading partial
/// step, the uniform sample step, trailing partial step).
struct StepCache {
    generator: Liouvillian,
    entries: Vec<(f64, Liouvillian)>,
}

impl StepCache {
    fn new(generator: Liouvillian) -> Self {
        StepCache {
            generator,
            entries: Vec::with_capacity(3),
        }
    }

    fn propagator(&mut self, gap_us: f64) -> Result<Liouvillian> {
        if let Some((_, p)) = self
            .entries
            .iter()
            .find(|(g, _)| (g - gap_us).abs() < 1e-12)
        {
            return Ok(*p);
        }
        let p = expm(&self.generator.map(|x| x * gap_us))?;
        self.entries.push((gap_us, p));
        Ok(p)
    }
}

/// Exact propagation of one segment, sampled uniformly at `sample_dt_us`
/// from the segment start; both endpoints are included.
pub fn propagate_segment_exact(
    rho0: &DensityMatrix,
    seg: &PulseSegment,
    params: &SystemParams,
    two_photon_detuning_khz: f64,
    sample_dt_us: f64,
) -> Result<SegmentTrajectory> {
    seg.validate()?;
    params.validate()?;
    if sample_dt_us <= 0.0 {
        return Err(SimError::invalid(
            "sample_dt_us",
            "sample spacing must be positive",
        ));
    }

    let mut cache = StepCache::new(liouvillian(params, seg, two_photon_detuning_khz));
    let mut v = vectorize(&rho0.0);
    let mut times = vec![seg.start_us];
    let mut states = vec![*rho0];

    let full_steps = (seg.duration_us / sample_dt_us + TIME_EPS).floor() as usize;
    let mut t = seg.start_us;
    for k in 1..=full_steps {
        let target = seg.start_us + k as f64 * sample_dt_us;
        v = cache.propagator(target - t)? * v;
        t = target;
        times.push(t);
        states.push(DensityMatrix(unvectorize(&v)));
    }
    if seg.end_us() - t > TIME_EPS {
        v = cache.propagator(seg.end_us() - t)? * v;
        times.push(seg.end_us());
        states.push(DensityMatrix(unvectorize(&v)));
    }
    Ok(SegmentTrajectory {
        times_us: times,
        states,
    })
}

/// RK4 integration of one segment under the same equations of motion,
/// recording the state after every step; the endpoint lands exactly on the
/// segment boundary.
pub fn propagate_segment_rk4(
    rho0: &DensityMatrix,
    seg: &PulseSegment,
    params: &SystemParams,
    two_photon_detuning_khz: f64,
    policy: &StepPolicy,
) -> Result<SegmentTrajectory> {
    seg.validate()?;
    params.validate()?;
    let steps = policy.steps_for(seg, params, two_photon_detuning_khz)?;
    let h = crate::liouville::build_hamiltonian(params, seg, two_photon_detuning_khz);
    let dt = seg.duration_us / steps as f64;

    let rhs = |rho: &Matrix3<Complex64>| crate::liouville::eom_rhs(rho, &h, params);
    let mut rho = rho0.0;
    let mut times = vec![seg.start_us];
    let mut states = vec![*rho0];
    for k in 1..=steps {
        let k1 = rhs(&rho);
        let k2 = rhs(&(rho + k1.map(|x| x * (0.5 * dt))));
        let k3 = rhs(&(rho + k2.map(|x| x * (0.5 * dt))));
        let k4 = rhs(&(rho + k3.map(|x| x * dt)));
        rho += (k1 + k2.map(|x| x * 2.0) + k3.map(|x| x * 2.0) + k4).map(|x| x * (dt / 6.0));
        times.push(seg.start_us + k as f64 * dt);
        states.push(DensityMatrix(rho));
    }
    // Pin the last time to the boundary so chained segments align exactly.
    *times.last_mut().expect("steps >= 1") = seg.end_us();
    Ok(SegmentTrajectory {
        times_us: times,
        states,
    })
}

/// Exact propagation of one spin group through a contiguous segment chain,
/// sampled on the global grid `0, dt, 2 dt, ...` over the full span. The
/// chain must already be gap-free and start at t = 0 (see
/// [`crate::params::gap_filled_sequence`]); the final span time is always
/// included as a sample.
pub fn run_group_chain(
    params: &SystemParams,
    segments: &[PulseSegment],
    two_photon_detuning_khz: f64,
    rho0: &DensityMatrix,
    sample_dt_us: f64,
) -> Result<SegmentTrajectory> {
    if segments.is_empty() {
        return Err(SimError::invalid("segments", "segment chain is empty"));
    }
    if sample_dt_us <= 0.0 {
        return Err(SimError::invalid(
            "sample_dt_us",
            "sample spacing must be positive",
        ));
    }
    if segments[0].start_us.abs() > TIME_EPS {
        return Err(SimError::invalid(
            "segments",
            "segment chain must start at t = 0",
        ));
    }
    params.validate()?;
    for (prev, next) in segments.iter().zip(segments.iter().skip(1)) {
        if (next.start_us - prev.end_us()).abs() > TIME_EPS {
            return Err(SimError::invalid(
                "segments",
                "segment chain has a gap or overlap",
            ));
        }
    }

    let span_us = segments.last().expect("nonempty").end_us();
    let full_steps = (span_us / sample_dt_us + TIME_EPS).floor() as usize;
    let mut grid: Vec<f64> = (0..=full_steps).map(|j| j as f64 * sample_dt_us).collect();
    if span_us - grid.last().copied().unwrap_or(0.0) > TIME_EPS {
        grid.push(span_us);
    }

    let mut v = vectorize(&rho0.0);
    let mut t = 0.0;
    let mut next_sample = 1; // grid[0] = 0 is recorded below before evolving
    let mut times = Vec::with_capacity(grid.len());
    let mut states = Vec::with_capacity(grid.len());
    times.push(0.0);
    states.push(*rho0);

    for seg in segments {
        seg.validate()?;
        let mut cache = StepCache::new(liouvillian(params, seg, two_photon_detuning_khz));
        while next_sample < grid.len() && grid[next_sample] <= seg.end_us() + TIME_EPS {
            let target = grid[next_sample];
            let gap = target - t;
            if gap > TIME_EPS {
                v = cache.propagator(gap)? * v;
            }
            t = target;
            times.push(t);
            states.push(DensityMatrix(unvectorize(&v)));
            next_sample += 1;
        }
        if seg.end_us() - t > TIME_EPS {
            v = cache.propagator(seg.end_us() - t)? * v;
            t = seg.end_us();
        }
    }
    Ok(SegmentTrajectory {
        times_us: times,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::InitialState;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn no_decay_resonant() -> SystemParams {
        SystemParams {
            relax_31_khz: 0.0,
            relax_32_khz: 0.0,
            relax_21_khz: 0.0,
            linewidth_31_khz: 0.0,
            linewidth_32_khz: 0.0,
            linewidth_21_khz: 0.0,
            detuning_khz: 0.0,
        }
    }

    /// Drive amplitude (kHz) for a single-field pulse of the given area over
    /// the given duration: area = 2*pi * omega * tau * 1e-3.
    fn amplitude_for_area(theta_rad: f64, tau_us: f64) -> f64 {
        theta_rad / (2.0 * PI * tau_us * 1e-3)
    }

    #[test]
    fn zero_generator_leaves_state_fixed() {
        let params = no_decay_resonant();
        let seg = PulseSegment::free_evolution(0.0, 7.0);
        let rho0 = DensityMatrix::from_initial(InitialState::EqualGroundMixture);
        let traj = propagate_segment_exact(&rho0, &seg, &params, 0.0, 1.0).unwrap();
        assert_eq!(traj.times_us.len(), 8);
        for s in &traj.states {
            assert!((s.0 - rho0.0).norm() < 1e-15);
        }
    }

    #[test]
    fn resonant_pi_pulse_inverts_two_level_population() {
        let params = no_decay_resonant();
        let seg = PulseSegment::new(0.0, 1.0, amplitude_for_area(PI, 1.0), 0.0);
        let rho0 = DensityMatrix::pure(0);
        let exact = propagate_segment_exact(&rho0, &seg, &params, 0.0, 0.25).unwrap();
        assert_relative_eq!(exact.last().population(2), 1.0, epsilon = 1e-9);

        let rk4 = propagate_segment_rk4(&rho0, &seg, &params, 0.0, &StepPolicy::default()).unwrap();
        assert_relative_eq!(rk4.last().population(2), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn rabi_formula_holds_across_areas() {
        let params = no_decay_resonant();
        let rho0 = DensityMatrix::pure(0);
        for theta in [0.3 * PI, 0.7 * PI, PI, 1.5 * PI, 2.0 * PI] {
            let seg = PulseSegment::new(0.0, 2.0, amplitude_for_area(theta, 2.0), 0.0);
            let traj = propagate_segment_exact(&rho0, &seg, &params, 0.0, 2.0).unwrap();
            let expected = (theta / 2.0).sin().powi(2);
            assert_relative_eq!(traj.last().population(2), expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn excited_state_decay_matches_closed_form() {
        let mut params = no_decay_resonant();
        params.relax_31_khz = 1.0;
        params.relax_32_khz = 1.0;
        let seg = PulseSegment::free_evolution(0.0, 200.0);
        let rho0 = DensityMatrix::pure(2);
        let traj = propagate_segment_exact(&rho0, &seg, &params, 0.0, 50.0).unwrap();
        let k_total = 2.0 * PI * 2.0e-3; // per us
        for (t, s) in traj.times_us.iter().zip(&traj.states) {
            let p33 = (-k_total * t).exp();
            assert_relative_eq!(s.population(2), p33, epsilon = 1e-10);
            // Equal branching into |1> and |2>.
            assert_relative_eq!(s.population(0), 0.5 * (1.0 - p33), epsilon = 1e-10);
        }
    }

    #[test]
    fn spin_coherence_rotates_at_two_photon_detuning() {
        let mut params = no_decay_resonant();
        params.linewidth_21_khz = 1.0;
        let delta = 4.0;
        let seg = PulseSegment::free_evolution(0.0, 30.0);
        let mut rho0 = DensityMatrix::from_initial(InitialState::EqualGroundMixture);
        rho0.0[(0, 1)] = Complex64::new(0.3, 0.0);
        rho0.0[(1, 0)] = Complex64::new(0.3, 0.0);
        let traj = propagate_segment_exact(&rho0, &seg, &params, delta, 10.0).unwrap();
        let w = crate::units::angular(delta);
        let g = crate::units::coherence_decay(1.0);
        for (t, s) in traj.times_us.iter().zip(&traj.states) {
            let expected = 0.3 * (Complex64::new(-g * t, -w * t)).exp();
            assert!((s.coherence(0, 1) - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn rk4_and_exact_agree_on_a_dissipative_driven_segment() {
        let params = SystemParams::reference();
        let seg = PulseSegment::new(0.0, 10.0, 50.0, 50.0);
        let rho0 = DensityMatrix::from_initial(InitialState::EqualGroundMixture);
        let exact = propagate_segment_exact(&rho0, &seg, &params, 4.0, 10.0).unwrap();
        let rk4 = propagate_segment_rk4(&rho0, &seg, &params, 4.0, &StepPolicy::default()).unwrap();
        let diff = (exact.last().0 - rk4.last().0)
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-8, "exact-vs-rk4 deviation {diff:.3e}");
    }

    #[test]
    fn chain_sampling_matches_unsplit_segment() {
        let params = SystemParams::reference();
        let rho0 = DensityMatrix::from_initial(InitialState::EqualGroundMixture);
        // Split at an off-grid time to exercise partial-step propagators.
        let whole = vec![PulseSegment::new(0.0, 1.0, 60.0, 40.0)];
        let split = vec![
            PulseSegment::new(0.0, 0.35, 60.0, 40.0),
            PulseSegment::new(0.35, 0.65, 60.0, 40.0),
        ];
        let a = run_group_chain(&params, &whole, 2.0, &rho0, 0.1).unwrap();
        let b = run_group_chain(&params, &split, 2.0, &rho0, 0.1).unwrap();
        assert_eq!(a.times_us.len(), b.times_us.len());
        for (x, y) in a.states.iter().zip(&b.states) {
            assert!((x.0 - y.0).norm() < 1e-12);
        }
        assert_relative_eq!(*a.times_us.last().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn chain_rejects_gaps_and_nonzero_start() {
        let params = SystemParams::reference();
        let rho0 = DensityMatrix::from_initial(InitialState::EqualGroundMixture);
        let gapped = vec![
            PulseSegment::free_evolution(0.0, 1.0),
            PulseSegment::free_evolution(1.5, 1.0),
        ];
        assert!(run_group_chain(&params, &gapped, 0.0, &rho0, 0.1).is_err());
        let late = vec![PulseSegment::free_evolution(1.0, 1.0)];
        assert!(run_group_chain(&params, &late, 0.0, &rho0, 0.1).is_err());
    }

    #[test]
    fn step_policy_resolves_fast_drives() {
        let policy = StepPolicy::default();
        let params = no_decay_resonant();
        // 2500 kHz generalized Rabi over 0.4 us: one cycle is 0.4 us, so the
        // default policy takes steps_per_cycle steps.
        let seg = PulseSegment::new(0.0, 0.4, 2500.0, 0.0);
        let steps = policy.steps_for(&seg, &params, 0.0).unwrap();
        assert_eq!(steps, 512);
        // A slow free segment still gets the minimum step count.
        let free = PulseSegment::free_evolution(0.0, 1.0);
        assert_eq!(policy.steps_for(&free, &params, 0.0).unwrap(), 20);
    }
}
