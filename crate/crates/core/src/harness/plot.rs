use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::ProfileCurve;
use crate::space::GrowthCurve;

/// A labeled sequence of points drawn as a step function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotCurve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl PlotCurve {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        PlotCurve {
            label: label.into(),
            points,
        }
    }

    pub fn from_profile(label: impl Into<String>, p: &ProfileCurve) -> Self {
        Self::new(
            label,
            p.points.iter().map(|&(t, v)| (t as f64, v as f64)).collect(),
        )
    }

    /// Radii are converted to true length units.
    pub fn from_growth(label: impl Into<String>, g: &GrowthCurve) -> Self {
        let s = g.scale as f64;
        Self::new(
            label,
            g.points.iter().map(|&(r, v)| (r as f64 / s, v as f64)).collect(),
        )
    }

    /// Least-squares slope of `log y` against `log x` over positive points.
    pub fn loglog_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter(|p| p.0 > 0.0 && p.1 > 0.0)
            .map(|p| (p.0.ln(), p.1.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotOptions {
    pub title: String,
    pub log_log: bool,
    pub width: u32,
    pub height: u32,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            title: String::new(),
            log_log: true,
            width: 640,
            height: 420,
        }
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const MARGIN: f64 = 56.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the curves as a standalone SVG document.
///
/// On log-log axes points with a nonpositive coordinate are dropped and each
/// legend entry carries the fitted slope.
pub fn emit_plot(curves: &[PlotCurve], options: &PlotOptions) -> Result<String> {
    let tf = |v: f64| if options.log_log { v.log10() } else { v };
    let drawn: Vec<Vec<(f64, f64)>> = curves
        .iter()
        .map(|c| {
            c.points
                .iter()
                .filter(|p| !options.log_log || (p.0 > 0.0 && p.1 > 0.0))
                .map(|p| (tf(p.0), tf(p.1)))
                .collect()
        })
        .collect();
    if curves.is_empty() || drawn.iter().all(|d| d.is_empty()) {
        return Err(Error::EmptyCurve);
    }
    let all = drawn.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in all {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y0 = y0.min(p.1);
        y1 = y1.max(p.1);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let (w, h) = (options.width as f64, options.height as f64);
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (w - 2.0 * MARGIN);
    let py = |y: f64| h - MARGIN - (y - y0) / (y1 - y0) * (h - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="12">"#,
        options.width, options.height, options.width, options.height
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        w / 2.0,
        escape(&options.title)
    );
    let _ = writeln!(
        svg,
        r##"<path d="M{:.1} {:.1} L{:.1} {:.1} L{:.1} {:.1}" fill="none" stroke="#333"/>"##,
        MARGIN,
        MARGIN,
        MARGIN,
        h - MARGIN,
        w - MARGIN,
        h - MARGIN
    );
    let label = |v: f64| {
        let v = if options.log_log { 10f64.powf(v) } else { v };
        format!("{v:.3}")
    };
    for (x, anchor, y) in [(x0, "start", h - MARGIN + 16.0), (x1, "end", h - MARGIN + 16.0)] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="{}">{}</text>"#,
            px(x),
            y,
            anchor,
            label(x)
        );
    }
    for y in [y0, y1] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            MARGIN - 4.0,
            py(y) + 4.0,
            label(y)
        );
    }
    let scale_note = if options.log_log { "log-log axes" } else { "linear axes" };
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        w / 2.0,
        h - 12.0,
        scale_note
    );

    for (i, (curve, pts)) in curves.iter().zip(&drawn).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !pts.is_empty() {
            let mut d = format!("M{:.2} {:.2}", px(pts[0].0), py(pts[0].1));
            for win in pts.windows(2) {
                let _ = write!(d, " H{:.2} V{:.2}", px(win[1].0), py(win[1].1));
            }
            let _ = writeln!(
                svg,
                r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
            );
        }
        let mut text = escape(&curve.label);
        if options.log_log {
            if let Some(s) = curve.loglog_slope() {
                let _ = write!(text, " (slope {s:.2})");
            }
        }
        let ly = MARGIN + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            w - MARGIN - 180.0,
            ly - 9.0,
            w - MARGIN - 165.0,
            ly,
            text
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(emit_plot(&[], &PlotOptions::default()), Err(Error::EmptyCurve)));
        let nonpositive = PlotCurve::new("z", vec![(0.0, 1.0)]);
        assert!(matches!(
            emit_plot(&[nonpositive], &PlotOptions::default()),
            Err(Error::EmptyCurve)
        ));
    }

    #[test]
    fn constant_curve_is_flat() {
        let c = PlotCurve::new("one", (1..=5).map(|t| (t as f64, 1.0)).collect());
        let opts = PlotOptions {
            log_log: false,
            ..PlotOptions::default()
        };
        let svg = emit_plot(&[c], &opts).unwrap();
        let path = svg.lines().find(|l| l.contains("stroke-width")).unwrap();
        let vs: Vec<&str> = path.split(" V").skip(1).map(|s| s.split([' ', '"']).next().unwrap()).collect();
        assert!(vs.windows(2).all(|w| w[0] == w[1]));
        assert!(svg.contains(">one<"));
    }

    #[test]
    fn quadratic_slope() {
        let c = PlotCurve::new("area", (1..=40).map(|r| (r as f64, (2 * r * r + 2 * r + 1) as f64)).collect());
        let s = c.loglog_slope().unwrap();
        assert!((s - 2.0).abs() < 0.2, "{s}");
        let svg = emit_plot(&[c], &PlotOptions::default()).unwrap();
        assert!(svg.contains("slope"));
    }
}
