//! Deterministic SVG log-log plots of sweep records.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiment::{ExperimentRecord, GrowthFit, Model};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 64.0;

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let pad = if hi > lo { 0.08 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

/// Renders the records as a log-log scatter, with the fitted line and a
/// guide line of the reference slope through the centroid when `fit` is given.
pub fn render_plot(records: &[ExperimentRecord], fit: Option<&GrowthFit>) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidParameter("nothing to plot: no records".into()));
    }
    if let Some(r) = records.iter().find(|r| !(r.abscissa > 0.0 && r.s > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "log-log plot needs positive abscissa and S, got ({}, {})",
            r.abscissa, r.s
        )));
    }
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.abscissa.ln(), r.s.ln())).collect();
    let (x0, x1) = bounds(pts.iter().map(|p| p.0));
    let (y0, y1) = bounds(pts.iter().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let x_label = match records[0].model {
        Model::Dyadic => "m",
        Model::Continuous => "log(R/r)",
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    s.push_str("<style>text{font-family:sans-serif;font-size:12px}.marker{fill:#1f4e79}.fit{stroke:#c0392b;stroke-width:2}.reference{stroke:#7f8c8d;stroke-width:1.5;stroke-dasharray:6 4}</style>\n");
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{m:.2} {t:.2} V{b:.2} H{r:.2}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_label} (log scale)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle">S (log scale)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (v, anchor, x) in [(x0, "start", sx(x0)), (x1, "end", sx(x1))] {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="{anchor}">{:.4}</text>"#,
            HEIGHT - MARGIN + 16.0,
            v.exp()
        );
    }
    for v in [y0, y1] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{:.4}</text>"#,
            MARGIN - 6.0,
            sy(v) + 4.0,
            v.exp()
        );
    }
    for &(x, y) in &pts {
        let _ = writeln!(s, r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="4"/>"#, sx(x), sy(y));
    }
    if let Some(fit) = fit {
        let line = |class: &str, slope: f64, intercept: f64, s: &mut String| {
            let _ = writeln!(
                s,
                r#"<line class="{class}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                sx(x0),
                sy(intercept + slope * x0),
                sx(x1),
                sy(intercept + slope * x1)
            );
        };
        line("fit", fit.slope, fit.intercept, &mut s);
        let k = pts.len() as f64;
        let (cx, cy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / k, b + p.1 / k));
        line("reference", fit.reference_exponent, cy - fit.reference_exponent * cx, &mut s);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">slope {:.4} (reference {:.4}), n = {}</text>"#,
            MARGIN + 8.0,
            MARGIN - 12.0,
            fit.slope,
            fit.reference_exponent,
            fit.n
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_plot(records: &[ExperimentRecord], fit: Option<&GrowthFit>, path: impl AsRef<Path>) -> Result<()> {
    let svg = render_plot(records, fit)?;
    let path = path.as_ref();
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::fit_exponent;

    fn recs() -> Vec<ExperimentRecord> {
        [(1.0, 1.0), (2.0, 1.5), (4.0, 2.1)]
            .iter()
            .map(|&(x, s)| ExperimentRecord {
                model: Model::Dyadic,
                n: 2,
                abscissa: x,
                s,
                iters: 3,
                seed: 0,
                digest: "x".into(),
            })
            .collect()
    }

    #[test]
    fn structure_and_determinism() {
        let r = recs();
        let fit = fit_exponent(&r).unwrap();
        let a = render_plot(&r, Some(&fit)).unwrap();
        assert_eq!(a.matches("<circle").count(), 3);
        assert_eq!(a.matches("<line").count(), 2);
        assert_eq!(a, render_plot(&r, Some(&fit)).unwrap());
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        let single = render_plot(&r[..1], None).unwrap();
        assert_eq!(single.matches("<line").count(), 0);
    }

    #[test]
    fn errors() {
        assert!(render_plot(&[], None).is_err());
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_plot(&recs(), None, dir.path().join("missing/dir/p.svg")).is_err());
        let p = dir.path().join("p.svg");
        emit_plot(&recs(), None, &p).unwrap();
        assert!(p.exists());
    }
}
