//! Minimal SVG line plots for quick visual inspection of trajectories.
//!
//! The output is a self-contained polyline chart; coordinates are rounded to
//! two decimals so the file is compact and byte-stable.

use std::fmt::Write as _;

use crate::CliError;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// One named curve sharing the common time axis.
pub struct Series<'a> {
    pub label: &'a str,
    pub values: &'a [f64],
}

/// Renders labelled curves against a shared time axis as an SVG document.
pub fn line_plot(
    title: &str,
    times_us: &[f64],
    series: &[Series<'_>],
) -> Result<String, CliError> {
    if series.is_empty() {
        return Err(CliError::Validation("plot needs at least one series".to_string()));
    }
    if times_us.len() < 2 {
        return Err(CliError::Validation("plot needs at least two samples".to_string()));
    }
    for s in series {
        if s.values.len() != times_us.len() {
            return Err(CliError::Validation(format!(
                "series '{}' has {} values for {} time samples",
                s.label,
                s.values.len(),
                times_us.len()
            )));
        }
    }

    let t_min = times_us[0];
    let t_max = times_us[times_us.len() - 1];
    let mut v_min = f64::INFINITY;
    let mut v_max = f64::NEG_INFINITY;
    for s in series {
        for &v in s.values {
            v_min = v_min.min(v);
            v_max = v_max.max(v);
        }
    }
    if !(v_min.is_finite() && v_max.is_finite()) {
        return Err(CliError::Validation("plot values must be finite".to_string()));
    }
    if v_max - v_min < 1e-300 {
        // Flat line: open up a symmetric band so the curve sits mid-plot.
        let pad = if v_max.abs() > 0.0 { v_max.abs() * 0.5 } else { 0.5 };
        v_min -= pad;
        v_max += pad;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |t: f64| MARGIN_LEFT + (t - t_min) / (t_max - t_min) * plot_w;
    let y_of = |v: f64| MARGIN_TOP + (v_max - v) / (v_max - v_min) * plot_h;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    )
    .expect("string writes cannot fail");
    writeln!(out, "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>").unwrap();
    writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();

    // Frame and axis extremes.
    writeln!(
        out,
        "  <rect x=\"{MARGIN_LEFT:.2}\" y=\"{MARGIN_TOP:.2}\" width=\"{plot_w:.2}\" height=\"{plot_h:.2}\" fill=\"none\" stroke=\"#444\"/>"
    )
    .unwrap();
    let axis_font = "font-family=\"sans-serif\" font-size=\"12\" fill=\"#444\"";
    writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" {axis_font} text-anchor=\"middle\">{:.4}</text>",
        x_of(t_min),
        HEIGHT - MARGIN_BOTTOM + 18.0,
        t_min
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" {axis_font} text-anchor=\"middle\">{:.4}</text>",
        x_of(t_max),
        HEIGHT - MARGIN_BOTTOM + 18.0,
        t_max
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" {axis_font} text-anchor=\"end\">{:.4}</text>",
        MARGIN_LEFT - 6.0,
        y_of(v_max) + 4.0,
        v_max
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" {axis_font} text-anchor=\"end\">{:.4}</text>",
        MARGIN_LEFT - 6.0,
        y_of(v_min) + 4.0,
        v_min
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" {axis_font} text-anchor=\"middle\">time (us)</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    )
    .unwrap();

    for (idx, s) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let mut points = String::with_capacity(times_us.len() * 14);
        for (t, v) in times_us.iter().zip(s.values) {
            if !points.is_empty() {
                points.push(' ');
            }
            write!(points, "{:.2},{:.2}", x_of(*t), y_of(*v)).unwrap();
        }
        writeln!(
            out,
            "  <polyline points=\"{points}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>"
        )
        .unwrap();
        let ly = MARGIN_TOP + 16.0 + 18.0 * idx as f64;
        writeln!(
            out,
            "  <line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            MARGIN_LEFT + plot_w - 150.0,
            MARGIN_LEFT + plot_w - 126.0
        )
        .unwrap();
        writeln!(
            out,
            "  <text x=\"{:.2}\" y=\"{:.2}\" {axis_font}>{}</text>",
            MARGIN_LEFT + plot_w - 120.0,
            ly + 4.0,
            escape(s.label)
        )
        .unwrap();
    }

    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_polyline_per_series() {
        let times = [0.0, 1.0, 2.0, 3.0];
        let a = [0.0, 0.5, 0.25, 0.125];
        let b = [1.0, 0.9, 0.8, 0.7];
        let svg = line_plot(
            "demo",
            &times,
            &[
                Series { label: "|rho12|", values: &a },
                Series { label: "|rho13|", values: &b },
            ],
        )
        .unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("|rho12|"));
        assert!(svg.starts_with("<svg "));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn rejects_empty_and_mismatched_input() {
        let times = [0.0, 1.0];
        assert!(line_plot("x", &times, &[]).is_err());
        let short = [0.0];
        assert!(line_plot(
            "x",
            &times,
            &[Series { label: "s", values: &short }]
        )
        .is_err());
    }

    #[test]
    fn flat_series_is_padded_not_rejected() {
        let times = [0.0, 1.0, 2.0];
        let flat = [0.25, 0.25, 0.25];
        let svg = line_plot("flat", &times, &[Series { label: "c", values: &flat }]).unwrap();
        assert!(svg.contains("<polyline"));
    }

    #[test]
    fn output_is_deterministic() {
        let times = [0.0, 0.5, 1.0];
        let vals = [0.1, 0.3, 0.2];
        let s = [Series { label: "v", values: &vals }];
        assert_eq!(
            line_plot("t", &times, &s).unwrap(),
            line_plot("t", &times, &s).unwrap()
        );
    }
}
