//! `ramanmem` — deterministic simulator of Raman-excited spin coherence,
//! rephasing, and echo retrieval in an inhomogeneously broadened ensemble.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::exit;

use clap::{Parser, Subcommand};

use ramanmem::{
    channel_count, peak_abs_rho13, retrieval_efficiency, run_area_study, run_multichannel,
    run_property_suite, run_ratio_study, scenario_fig1, scenario_fig3, scenario_fig4_readout,
    scenario_fig6_two_data_two_readout, simulate_photon_echo, simulate_scenario, ChannelPlan,
    EfficiencyReport, ScenarioSpec, StudyPoint, TrajectoryRecord, TwoLevelParams,
};
use ramanmem_cli::csv_out::{aggregate_csv, per_group_csv, write_text};
use ramanmem_cli::scenario_file::load_scenario;
use ramanmem_cli::svg_out::{line_plot, Series};
use ramanmem_cli::CliError;

#[derive(Parser)]
#[command(
    name = "ramanmem",
    version,
    about = "Simulates spin-coherence storage, rephasing, and echo retrieval\n\
             in a three-level medium with inhomogeneous spin broadening.",
    after_help = "Exit codes: 0 success, 1 usage error, 2 input validation error,\n\
                  3 numerical failure."
)]
struct Cli {
    /// Directory for CSV and SVG artifacts.
    #[arg(long, global = true, default_value = ".", value_name = "DIR")]
    out_dir: PathBuf,

    /// Write trajectory CSV files.
    #[arg(long, global = true)]
    csv: bool,

    /// Write SVG plots (trajectory-producing commands).
    #[arg(long, global = true)]
    svg: bool,

    /// Also export every spin group's rho12 as <name>_groups.csv.
    #[arg(long, global = true)]
    per_group: bool,

    /// Accepted for compatibility; the simulation uses no randomness, so
    /// output is identical with or without this flag.
    #[arg(long, global = true)]
    seedless: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario file (TOML).
    Run {
        /// Path to the scenario file.
        file: PathBuf,
    },
    /// Simulate a bundled scenario.
    Scenario {
        /// One of: fig1, fig3, fig4, fig6.
        name: String,
    },
    /// Retrieval-efficiency studies over rephasing area and field ratio.
    Sweep {
        /// Comma-separated areas in multiples of pi, e.g. 2pi,1.8pi,1pi.
        #[arg(long, value_name = "LIST")]
        areas: Option<String>,
        /// Comma-separated field ratios omega_p/omega_c, e.g. 50/50,30/40.
        #[arg(long, value_name = "LIST")]
        ratios: Option<String>,
    },
    /// Two-level photon-echo run for comparison with the spin echo.
    Echo2 {
        /// Optical homogeneous linewidth in kHz.
        #[arg(long, default_value_t = 2.5, value_name = "KHZ")]
        gamma_opt: f64,
        /// Rephasing pulse area, e.g. 1pi or 2pi.
        #[arg(long, default_value = "1pi", value_name = "AREA")]
        area: String,
    },
    /// Frequency-multiplexed channel estimate, optionally running every channel.
    Channels {
        /// Scenario file with a [channels] table.
        file: Option<PathBuf>,
        /// Usable optical-depth bandwidth in kHz (with --omega, instead of a file).
        #[arg(long, value_name = "KHZ", requires = "omega", conflicts_with = "file")]
        delta_opt: Option<f64>,
        /// Per-channel width in kHz.
        #[arg(long, value_name = "KHZ", requires = "delta_opt", conflicts_with = "file")]
        omega: Option<f64>,
        /// Simulate each channel sequentially (file input only).
        #[arg(long)]
        execute: bool,
    },
    /// Run the built-in physics property checks.
    Check,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            exit(code);
        }
    };
    match dispatch(&cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("{err}");
            exit(err.exit_code());
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run { file } => {
            let loaded = load_scenario(file)?;
            execute_scenario(cli, &loaded.spec, loaded.channels.as_ref())
        }
        Command::Scenario { name } => {
            let spec = builtin_scenario(name)?;
            execute_scenario(cli, &spec, None)
        }
        Command::Sweep { areas, ratios } => run_sweep(cli, areas.as_deref(), ratios.as_deref()),
        Command::Echo2 { gamma_opt, area } => run_echo2(cli, *gamma_opt, area),
        Command::Channels {
            file,
            delta_opt,
            omega,
            execute,
        } => run_channels(cli, file.as_deref(), *delta_opt, *omega, *execute),
        Command::Check => run_check(),
    }
}

fn builtin_scenario(name: &str) -> Result<ScenarioSpec, CliError> {
    match name {
        "fig1" => Ok(scenario_fig1()),
        "fig3" => scenario_fig3(1.0, (1.0, 1.0)).map_err(CliError::from),
        "fig4" => Ok(scenario_fig4_readout()),
        "fig6" => Ok(scenario_fig6_two_data_two_readout()),
        other => Err(CliError::Usage(format!(
            "unknown scenario '{other}' (expected fig1, fig3, fig4, or fig6)"
        ))),
    }
}

fn execute_scenario(
    cli: &Cli,
    spec: &ScenarioSpec,
    channels: Option<&ChannelPlan>,
) -> Result<(), CliError> {
    let record = simulate_scenario(spec, cli.per_group)?;
    let report = retrieval_efficiency(
        &record,
        spec.analysis.write_end_us,
        spec.analysis.echo_window_us,
    )?;

    let groups = spec.ensemble.group_count;
    println!(
        "scenario {}: {} spin groups, {} samples over {} us",
        spec.name,
        groups,
        record.times_us.len(),
        spec.span_us
    );
    print_report(&report, spec.analysis.echo_window_us);
    if let Some(plan) = channels {
        println!(
            "channel estimate: {:.3} kHz / {:.3} kHz -> {} channels",
            plan.delta_opt, plan.omega, plan.n_channels
        );
    }

    write_trajectory_artifacts(cli, &spec.name, &record)
}

fn print_report(report: &EfficiencyReport, window: (f64, f64)) {
    println!(
        "write |rho12| = {:.6}; echo peak |rho12| = {:.6} at {:.2} us \
         (window {:.1}..{:.1} us); efficiency {:.4}",
        report.write_peak, report.echo_peak, report.echo_time_us, window.0, window.1,
        report.efficiency
    );
}

fn write_trajectory_artifacts(
    cli: &Cli,
    name: &str,
    record: &TrajectoryRecord,
) -> Result<(), CliError> {
    if cli.csv {
        let path = cli.out_dir.join(format!("{name}.csv"));
        write_text(&path, &aggregate_csv(record))?;
        println!("wrote {}", path.display());
    }
    if cli.per_group {
        let path = cli.out_dir.join(format!("{name}_groups.csv"));
        write_text(&path, &per_group_csv(record)?)?;
        println!("wrote {}", path.display());
    }
    if cli.svg {
        let abs12: Vec<f64> = (0..record.times_us.len())
            .map(|i| record.aggregate.abs_rho12(i))
            .collect();
        let abs13: Vec<f64> = (0..record.times_us.len())
            .map(|i| record.aggregate.abs_rho13(i))
            .collect();
        let svg = line_plot(
            name,
            &record.times_us,
            &[
                Series { label: "|rho12|", values: &abs12 },
                Series { label: "|rho13|", values: &abs13 },
            ],
        )?;
        let path = cli.out_dir.join(format!("{name}.svg"));
        write_text(&path, &svg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Parses an area token like `2pi` or `1.8pi` into radians.
fn parse_area_token(token: &str) -> Result<f64, CliError> {
    let trimmed = token.trim();
    let number = trimmed.strip_suffix("pi").ok_or_else(|| {
        CliError::Usage(format!("area '{trimmed}' must end in 'pi', e.g. 2pi or 1.8pi"))
    })?;
    let multiple: f64 = number
        .parse()
        .map_err(|_| CliError::Usage(format!("area '{trimmed}' has a malformed number")))?;
    if !multiple.is_finite() || multiple < 0.0 {
        return Err(CliError::Usage(format!(
            "area '{trimmed}' must be a finite non-negative multiple of pi"
        )));
    }
    Ok(multiple * PI)
}

/// Parses a ratio token like `30/40` into its two components.
fn parse_ratio_token(token: &str) -> Result<(f64, f64), CliError> {
    let trimmed = token.trim();
    let (p, c) = trimmed.split_once('/').ok_or_else(|| {
        CliError::Usage(format!("ratio '{trimmed}' must look like omega_p/omega_c, e.g. 30/40"))
    })?;
    let parse = |s: &str| -> Result<f64, CliError> {
        s.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("ratio '{trimmed}' has a malformed number")))
    };
    Ok((parse(p)?, parse(c)?))
}

fn run_sweep(cli: &Cli, areas: Option<&str>, ratios: Option<&str>) -> Result<(), CliError> {
    let area_list: Vec<f64> = match areas {
        Some(list) => list
            .split(',')
            .map(parse_area_token)
            .collect::<Result<_, _>>()?,
        None if ratios.is_none() => [2.0, 1.8, 1.6, 1.2, 1.0].iter().map(|m| m * PI).collect(),
        None => Vec::new(),
    };
    let ratio_list: Vec<(f64, f64)> = match ratios {
        Some(list) => list
            .split(',')
            .map(parse_ratio_token)
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };

    if !area_list.is_empty() {
        let points = run_area_study(&area_list)?;
        println!("rephasing-area study (field ratio 1:1):");
        print_study(&points);
        if cli.csv {
            let path = cli.out_dir.join("sweep_areas.csv");
            write_text(&path, &study_csv(&points))?;
            println!("wrote {}", path.display());
        }
    }
    if !ratio_list.is_empty() {
        let points = run_ratio_study(&ratio_list)?;
        println!("field-ratio study (area 2pi):");
        print_study(&points);
        if cli.csv {
            let path = cli.out_dir.join("sweep_ratios.csv");
            write_text(&path, &study_csv(&points))?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn print_study(points: &[StudyPoint]) {
    for p in points {
        println!(
            "  {:>10}  write {:.6}  echo {:.6}  efficiency {:.4}  t_echo {:.2} us",
            p.label, p.report.write_peak, p.report.echo_peak, p.report.efficiency,
            p.report.echo_time_us
        );
    }
}

fn study_csv(points: &[StudyPoint]) -> String {
    let mut out = String::from(
        "label,area_rad,ratio_p,ratio_c,write_peak,echo_peak,efficiency,echo_time_us\n",
    );
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            p.label,
            p.area_rad,
            p.ratio.0,
            p.ratio.1,
            p.report.write_peak,
            p.report.echo_peak,
            p.report.efficiency,
            p.report.echo_time_us
        ));
    }
    out
}

fn run_echo2(cli: &Cli, gamma_opt: f64, area: &str) -> Result<(), CliError> {
    if !(gamma_opt > 0.0) {
        return Err(CliError::Usage(
            "--gamma-opt must be a positive linewidth in kHz".to_string(),
        ));
    }
    let area_rad = parse_area_token(area)?;
    let mut params = TwoLevelParams::reference();
    params.gamma_opt_khz = gamma_opt;

    let record = simulate_photon_echo(&params, area_rad)?;
    let expected = params.expected_echo_us();
    let window = (
        (expected - 5.0).max(0.0),
        (expected + 5.0).min(params.span_us),
    );
    let (t_peak, peak) = peak_abs_rho13(&record, window)?;
    println!(
        "two-level echo: gamma_opt {gamma_opt} kHz, rephasing area {area}; \
         peak |rho13| = {peak:.6} at {t_peak:.2} us (expected echo near {expected:.2} us)"
    );

    if cli.csv {
        let path = cli.out_dir.join("echo2.csv");
        write_text(&path, &aggregate_csv(&record))?;
        println!("wrote {}", path.display());
    }
    if cli.svg {
        let abs13: Vec<f64> = (0..record.times_us.len())
            .map(|i| record.aggregate.abs_rho13(i))
            .collect();
        let excited = record.aggregate.rho33.clone();
        let svg = line_plot(
            "two-level echo",
            &record.times_us,
            &[
                Series { label: "|rho13|", values: &abs13 },
                Series { label: "rho33", values: &excited },
            ],
        )?;
        let path = cli.out_dir.join("echo2.svg");
        write_text(&path, &svg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_channels(
    cli: &Cli,
    file: Option<&Path>,
    delta_opt: Option<f64>,
    omega: Option<f64>,
    execute: bool,
) -> Result<(), CliError> {
    match (file, delta_opt, omega) {
        (Some(path), None, None) => {
            let loaded = load_scenario(path)?;
            let plan = loaded.channels.ok_or_else(|| {
                CliError::Validation(format!(
                    "{} has no [channels] table",
                    path.display()
                ))
            })?;
            println!(
                "channel estimate: {:.3} kHz / {:.3} kHz -> {} channels",
                plan.delta_opt, plan.omega, plan.n_channels
            );
            if execute {
                let reports = run_multichannel(&plan, &loaded.spec, &[])?;
                for (idx, report) in reports.iter().enumerate() {
                    println!(
                        "channel {idx}: efficiency {:.4} (echo {:.6} at {:.2} us)",
                        report.efficiency, report.echo_peak, report.echo_time_us
                    );
                }
                if cli.csv {
                    let path = cli.out_dir.join("channels.csv");
                    write_text(&path, &channels_csv(&reports))?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        (None, Some(delta), Some(width)) => {
            if execute {
                return Err(CliError::Usage(
                    "--execute needs a scenario file, not --delta-opt/--omega".to_string(),
                ));
            }
            let n = channel_count(delta, width)?;
            println!("channel estimate: {delta:.3} kHz / {width:.3} kHz -> {n} channels");
            Ok(())
        }
        _ => Err(CliError::Usage(
            "channels needs either a scenario file or both --delta-opt and --omega".to_string(),
        )),
    }
}

fn channels_csv(reports: &[EfficiencyReport]) -> String {
    let mut out = String::from("channel,write_peak,echo_peak,efficiency,echo_time_us\n");
    for (idx, r) in reports.iter().enumerate() {
        out.push_str(&format!(
            "{idx},{},{},{},{}\n",
            r.write_peak, r.echo_peak, r.efficiency, r.echo_time_us
        ));
    }
    out
}

fn run_check() -> Result<(), CliError> {
    let results = run_property_suite();
    let mut failed = 0usize;
    for r in &results {
        let status = if r.passed { "ok" } else { "FAILED" };
        println!("check {}: {status} ({})", r.name, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        Err(CliError::Numerical(format!(
            "{failed} of {} property checks failed",
            results.len()
        )))
    } else {
        println!("all {} property checks passed", results.len());
        Ok(())
    }
}
