//! CSV export of ensemble trajectories.
//!
//! Numbers are printed with Rust's shortest round-trip formatting, so the
//! files are byte-identical across runs and parse back to the exact
//! in-memory values.

use std::fmt::Write as _;
use std::path::Path;

use ramanmem::TrajectoryRecord;

use crate::CliError;

/// Column contract for aggregate trajectories.
pub const AGGREGATE_HEADER: &str =
    "time_us,re_rho12,im_rho12,re_rho13,im_rho13,rho11,rho22,rho33";

/// Renders the aggregate trajectory as CSV text.
pub fn aggregate_csv(record: &TrajectoryRecord) -> String {
    let a = &record.aggregate;
    let mut out = String::with_capacity(record.times_us.len() * 64);
    out.push_str(AGGREGATE_HEADER);
    out.push('\n');
    for (idx, t) in record.times_us.iter().enumerate() {
        writeln!(
            out,
            "{t},{},{},{},{},{},{},{}",
            a.re_rho12[idx],
            a.im_rho12[idx],
            a.re_rho13[idx],
            a.im_rho13[idx],
            a.rho11[idx],
            a.rho22[idx],
            a.rho33[idx]
        )
        .expect("string writes cannot fail");
    }
    out
}

/// Renders every group's spin coherence as CSV text; columns are suffixed
/// with the group detuning, e.g. `re_rho12_-120khz`.
pub fn per_group_csv(record: &TrajectoryRecord) -> Result<String, CliError> {
    let groups = record.per_group.as_ref().ok_or_else(|| {
        CliError::Validation("per-group output requested but not retained in this run".to_string())
    })?;
    let mut out = String::new();
    out.push_str("time_us");
    for g in groups {
        write!(
            out,
            ",re_rho12_{0:+}khz,im_rho12_{0:+}khz",
            g.group.delta_khz
        )
        .expect("string writes cannot fail");
    }
    out.push('\n');
    for (idx, t) in record.times_us.iter().enumerate() {
        write!(out, "{t}").expect("string writes cannot fail");
        for g in groups {
            let c = g.states[idx].coherence(0, 1);
            write!(out, ",{},{}", c.re, c.im).expect("string writes cannot fail");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes text to a file, creating parent directories as needed.
pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Validation(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

/// Parses aggregate CSV text back into column vectors keyed by header name.
/// Used to verify round-trip exactness.
pub fn parse_columns(text: &str) -> Result<Vec<(String, Vec<f64>)>, CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Validation("empty CSV".to_string()))?;
    let names: Vec<&str> = header.split(',').collect();
    let mut columns: Vec<(String, Vec<f64>)> =
        names.iter().map(|n| (n.to_string(), Vec::new())).collect();
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(CliError::Validation(format!(
                "row {} has {} fields, expected {}",
                row + 2,
                fields.len(),
                names.len()
            )));
        }
        for (col, field) in fields.iter().enumerate() {
            let value = field.parse::<f64>().map_err(|e| {
                CliError::Validation(format!("row {} column {}: {e}", row + 2, col + 1))
            })?;
            columns[col].1.push(value);
        }
    }
    Ok(columns)
}
