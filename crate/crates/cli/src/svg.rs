//! Dependency-free SVG line charts for the plot-data kinds.
//!
//! CSV is the contract; the SVG output is a diagnostic rendering with plain
//! axes and nothing configurable.

use crate::table::{format_float, Table};

/// Recognized plot kinds and the columns they draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    ThetaCurve,
    EpsilonCurve,
    SuperaddGrowth,
    Invariance,
}

impl PlotKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "theta-curve" => Some(Self::ThetaCurve),
            "epsilon-curve" => Some(Self::EpsilonCurve),
            "superadd-growth" => Some(Self::SuperaddGrowth),
            "invariance" => Some(Self::Invariance),
            _ => None,
        }
    }

    fn axes(self) -> (&'static str, &'static [&'static str]) {
        match self {
            Self::ThetaCurve => ("lambda", &["theta"]),
            Self::EpsilonCurve => ("lambda", &["epsilon"]),
            Self::SuperaddGrowth => ("k", &["ratio"]),
            Self::Invariance => ("kappa", &["grad_rel_err", "qnorm_rel_err"]),
        }
    }
}

/// Renders the table as a minimal SVG line chart for the given kind.
pub fn emit_plotdata(table: &Table, kind: &str) -> Result<String, String> {
    let kind = PlotKind::parse(kind).ok_or_else(|| format!("unknown plot kind: {kind}"))?;
    let (x_name, y_names) = kind.axes();
    let x_col = table
        .column(x_name)
        .ok_or_else(|| format!("table lacks column {x_name}"))?;
    let mut y_cols = Vec::new();
    for name in y_names {
        y_cols.push(
            table
                .column(name)
                .ok_or_else(|| format!("table lacks column {name}"))?,
        );
    }

    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const MARGIN: f64 = 60.0;

    let finite_rows: Vec<&Vec<f64>> = table
        .rows
        .iter()
        .filter(|r| r[x_col].is_finite() && y_cols.iter().all(|&c| r[c].is_finite()))
        .collect();

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // axes
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    ));
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        t = MARGIN,
        b = H - MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-size=\"12\">{x_name}</text>\n",
        x = W / 2.0,
        y = H - MARGIN / 3.0
    ));

    if !finite_rows.is_empty() {
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for r in &finite_rows {
            x_min = x_min.min(r[x_col]);
            x_max = x_max.max(r[x_col]);
            for &c in &y_cols {
                y_min = y_min.min(r[c]);
                y_max = y_max.max(r[c]);
            }
        }
        if x_max == x_min {
            x_max = x_min + 1.0;
        }
        if y_max == y_min {
            y_max = y_min + 1.0;
        }
        let sx = |v: f64| MARGIN + (v - x_min) / (x_max - x_min) * (W - 2.0 * MARGIN);
        let sy = |v: f64| H - MARGIN - (v - y_min) / (y_max - y_min) * (H - 2.0 * MARGIN);
        // tick labels at the extremes
        for (v, x, y, anchor) in [
            (x_min, sx(x_min), H - MARGIN + 16.0, "middle"),
            (x_max, sx(x_max), H - MARGIN + 16.0, "middle"),
            (y_min, MARGIN - 6.0, sy(y_min), "end"),
            (y_max, MARGIN - 6.0, sy(y_max), "end"),
        ] {
            svg.push_str(&format!(
                "<text x=\"{x}\" y=\"{y}\" font-size=\"10\" text-anchor=\"{anchor}\">{}</text>\n",
                format_float(v)
            ));
        }
        let colors = ["#1f77b4", "#d62728", "#2ca02c"];
        for (i, &c) in y_cols.iter().enumerate() {
            let mut points = String::new();
            for r in &finite_rows {
                points.push_str(&format!("{:.2},{:.2} ", sx(r[x_col]), sy(r[c])));
            }
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                colors[i % colors.len()],
                points.trim_end()
            ));
            svg.push_str(&format!(
                "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" fill=\"{}\">{}</text>\n",
                colors[i % colors.len()],
                y_names[i],
                x = W - MARGIN + 4.0,
                y = MARGIN + 14.0 * i as f64,
            ));
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_kind_rejected() {
        let t = Table::new(&["lambda", "theta"]);
        assert!(emit_plotdata(&t, "mystery").is_err());
    }

    #[test]
    fn empty_table_still_renders() {
        let t = Table::new(&["lambda", "theta"]);
        let svg = emit_plotdata(&t, "theta-curve").unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn curve_renders_polyline_deterministically() {
        let mut t = Table::new(&["lambda", "theta"]);
        for k in 1..10 {
            let l = k as f64 / 10.0;
            t.push(vec![l, 1.0 / l]);
        }
        let a = emit_plotdata(&t, "theta-curve").unwrap();
        let b = emit_plotdata(&t, "theta-curve").unwrap();
        assert_eq!(a, b);
        assert!(a.contains("polyline"));
    }
}
