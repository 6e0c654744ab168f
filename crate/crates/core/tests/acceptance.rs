//! Acceptance suite: one test per numbered criterion, each printing a
//! single PASS/FAIL line with the measured values before asserting.
//!
//! Every run is built from library constructors; no input files are read.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use ramanmem::{
    channel_count, peak_abs_rho13, run_area_study, run_property_suite, run_ratio_study,
    scenario_fig1, scenario_fig3, scenario_fig4_readout, simulate_photon_echo, simulate_scenario,
    spin_t2, TrajectoryRecord, TwoLevelParams,
};

fn report(number: u32, name: &str, passed: bool, detail: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE-{number} {name}: {verdict} ({detail})");
}

/// Time and value of the aggregate |rho12| maximum over `window`.
fn peak_abs_rho12(record: &TrajectoryRecord, window: (f64, f64)) -> (f64, f64) {
    let mut best = (window.0, f64::NEG_INFINITY);
    for (idx, &t) in record.times_us.iter().enumerate() {
        if t < window.0 - 1e-9 || t > window.1 + 1e-9 {
            continue;
        }
        let v = record.aggregate.abs_rho12(idx);
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}

#[test]
fn a1_echo_timing_and_dephasing() {
    let spec = scenario_fig1();
    let started = Instant::now();
    let record = simulate_scenario(&spec, false).expect("reference scenario runs");
    let runtime_s = started.elapsed().as_secs_f64();
    let write = record.aggregate.abs_rho12(record.index_at_time(10.0));
    let dephased = record.aggregate.abs_rho12(record.index_at_time(45.0));
    let dephasing_ratio = dephased / write;
    // Global coherence maximum after the rephasing pulse has ended.
    let rephase_end = 50.2;
    let (echo_t, echo_v) = peak_abs_rho12(&record, (rephase_end, spec.span_us));

    let timing_ok = (echo_t - 95.0).abs() <= 1.0;
    let dephasing_ok = dephasing_ratio < 0.10;
    let runtime_ok = runtime_s < 10.0;
    let passed = timing_ok && dephasing_ok && runtime_ok;
    report(
        1,
        "echo-timing",
        passed,
        &format!(
            "echo peak |rho12| = {echo_v:.4} at t = {echo_t:.2} us (want 95 +/- 1), \
             |rho12|(45)/|rho12|(10) = {dephasing_ratio:.3} (want < 0.10), \
             runtime = {runtime_s:.2} s (want < 10)"
        ),
    );
    assert!(
        passed,
        "echo peak at {echo_t:.2} us, dephasing ratio {dephasing_ratio:.3}, runtime {runtime_s:.2} s"
    );
}

#[test]
fn a2_rephasing_area_selection_rule() {
    let points = run_area_study(&[TAU, 2.0 * TAU, 3.0 * TAU]).expect("area study runs");
    let e2 = points[0].report.efficiency;
    let e4 = points[1].report.efficiency;
    let e6 = points[2].report.efficiency;
    let same_ok = (e6 - e2).abs() <= 0.05 * e2;
    let gone_ok = e4 < 0.05 * e2;
    let passed = same_ok && gone_ok;
    report(
        2,
        "area-selection-rule",
        passed,
        &format!(
            "eff(2pi) = {e2:.4}, eff(6pi) = {e6:.4} (want within 5% relative), \
             eff(4pi) = {e4:.4} (want < 5% of eff(2pi))"
        ),
    );
    assert!(passed, "e2 = {e2:.4}, e4 = {e4:.4}, e6 = {e6:.4}");
}

#[test]
fn a3_area_reduction_curve() {
    let areas = [TAU, 1.8 * PI, 1.6 * PI, 1.2 * PI, 1.0 * PI];
    let expected = [0.91, 0.77, 0.41, 0.27];
    let points = run_area_study(&areas).expect("area study runs");
    let e2 = points[0].report.efficiency;
    let mut detail = String::new();
    let mut passed = true;
    for (point, want) in points[1..].iter().zip(expected) {
        let relative = point.report.efficiency / e2;
        let ok = (relative - want).abs() <= 0.10;
        passed &= ok;
        detail.push_str(&format!("{}: {relative:.3} (want {want} +/- 0.10); ", point.label));
    }
    report(3, "area-reduction-curve", passed, detail.trim_end_matches("; "));
    assert!(passed, "{detail}");
}

#[test]
fn a4_field_ratio_monotonicity() {
    let ratios = [(50.0, 50.0), (30.0, 40.0), (25.0, 43.3), (10.0, 49.0)];
    let points = run_ratio_study(&ratios).expect("ratio study runs");
    let effs: Vec<f64> = points.iter().map(|p| p.report.efficiency).collect();
    let passed = effs.windows(2).all(|w| w[0] > w[1]);
    let detail = points
        .iter()
        .map(|p| format!("{}: {:.4}", p.label, p.report.efficiency))
        .collect::<Vec<_>>()
        .join(", ");
    report(4, "field-ratio-monotonicity", passed, &detail);
    assert!(passed, "efficiencies not strictly decreasing: {detail}");
}

#[test]
fn a5_photon_echo_contrast() {
    let slow = TwoLevelParams::reference(); // gamma_opt = 2.5 kHz
    let mut fast = slow;
    fast.gamma_opt_khz = 25.0;
    let window = (89.5, 99.5);
    let expected_echo = slow.expected_echo_us();

    let pi_run = simulate_photon_echo(&slow, PI).expect("pi run");
    let (t_pi, p_pi) = peak_abs_rho13(&pi_run, window).expect("window sampled");
    let two_pi_run = simulate_photon_echo(&slow, TAU).expect("2pi run");
    let (_, p_2pi) = peak_abs_rho13(&two_pi_run, window).expect("window sampled");
    let fast_run = simulate_photon_echo(&fast, PI).expect("fast-decay run");
    let (_, p_fast) = peak_abs_rho13(&fast_run, window).expect("window sampled");

    let timing_ok = (t_pi - expected_echo).abs() <= 1.0;
    let contrast_ok = p_2pi < 0.05 * p_pi;
    let damping_ok = p_fast < 0.10 * p_pi;
    let passed = timing_ok && contrast_ok && damping_ok;
    report(
        5,
        "photon-echo-contrast",
        passed,
        &format!(
            "pi echo {p_pi:.4} at {t_pi:.2} us (want {expected_echo} +/- 1), \
             2pi peak {p_2pi:.2e} (want < 5% of pi), \
             gamma = 25 kHz peak {p_fast:.2e} (want < 10% of pi)"
        ),
    );
    assert!(passed, "t_pi = {t_pi:.2}, p_pi = {p_pi:.4}, p_2pi = {p_2pi:.2e}, p_fast = {p_fast:.2e}");
}

#[test]
fn a6_readout_conversion() {
    let spec = scenario_fig4_readout();
    let record = simulate_scenario(&spec, false).expect("readout scenario runs");
    let readout = spec.pulses.last().expect("has readout").segment;
    let pre = record.aggregate.re_rho12[record.index_at_time(readout.start_us)].abs();
    let after = record.aggregate.re_rho12[record.index_at_time(readout.end_us())].abs();
    let depletion = after / pre;

    let mut background = 0.0_f64;
    let mut transient = 0.0_f64;
    for (idx, &t) in record.times_us.iter().enumerate() {
        let im13 = record.aggregate.im_rho13[idx].abs();
        if t >= 60.0 && t < readout.start_us {
            background = background.max(im13);
        } else if t >= readout.start_us && t <= readout.end_us() {
            transient = transient.max(im13);
        }
    }

    let depleted_ok = depletion < 0.05;
    let emission_ok = transient > 10.0 * background;
    let passed = depleted_ok && emission_ok;
    report(
        6,
        "readout-conversion",
        passed,
        &format!(
            "|Re rho12| after/before readout = {depletion:.3} (want < 0.05), \
             |Im rho13| transient {transient:.2e} vs background {background:.2e} \
             (want > 10x)"
        ),
    );
    assert!(passed, "depletion {depletion:.3}, transient {transient:.2e}, background {background:.2e}");
}

#[test]
fn a7_time_reversed_retrieval_order() {
    let spec = scenario_fig3(1.0, (1.0, 1.0)).expect("two-write scenario");
    let record = simulate_scenario(&spec, false).expect("two-write scenario runs");
    // Writes centered at 5 and 25 us, rephasing at 50 us: echoes expected
    // near 75 us (second write) and 95 us (first write).
    let (t_second, p_second) = peak_abs_rho12(&record, (70.0, 80.0));
    let (t_first, p_first) = peak_abs_rho12(&record, (90.0, 100.0));
    let (_, valley) = peak_abs_rho12(&record, (83.0, 87.0));

    let distinct_ok = p_second > 1.3 * valley && p_first > 1.3 * valley;
    let order_ok = t_second < t_first;
    let passed = distinct_ok && order_ok;
    report(
        7,
        "time-reversed-order",
        passed,
        &format!(
            "second-write echo {p_second:.4} at {t_second:.2} us, \
             first-write echo {p_first:.4} at {t_first:.2} us, \
             inter-echo level {valley:.4}"
        ),
    );
    assert!(passed, "t_second = {t_second:.2}, t_first = {t_first:.2}, valley = {valley:.4}");
}

#[test]
fn a8_formula_checks() {
    let t2 = spin_t2(1.0).expect("positive linewidth");
    let channels = channel_count(1000.0, 1.0).expect("valid widths");
    let t2_ok = (t2 - 318.3).abs() <= 0.5;
    let channels_ok = channels == 1000;
    let passed = t2_ok && channels_ok;
    report(
        8,
        "formula-checks",
        passed,
        &format!("spin T2(1 kHz) = {t2:.1} us (want 318.3 +/- 0.5), channels(1000:1) = {channels}"),
    );
    assert!(passed, "t2 = {t2}, channels = {channels}");
}

#[test]
fn a9_property_suite() {
    let results = run_property_suite();
    let passed = results.iter().all(|r| r.passed);
    let detail = results
        .iter()
        .map(|r| format!("{} {}", r.name, if r.passed { "ok" } else { "FAILED" }))
        .collect::<Vec<_>>()
        .join(", ");
    report(9, "property-suite", passed, &detail);
    for r in &results {
        assert!(r.passed, "{}: {}", r.name, r.detail);
    }
}
