//! Log-log κ-plot emission as standalone SVG files.
//!
//! Two panels per matrix class: loss of orthogonality against the measured
//! condition number, and relative Cholesky residual against it. One series
//! per (algorithm, io) pair plus dashed reference curves `ε`, `ε·κ`, `ε·κ²`
//! for the double-precision unit roundoff. NaN points are omitted from
//! their series, which reproduces the "missing points" look of breakdown
//! regions.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use blockgs::MatrixClass;

use crate::sweep::RunRecord;

const EPS: f64 = 1.110_223_024_625_156_5e-16; // 2^-53

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 560.0;
const TOP: f64 = 48.0;
const BOTTOM: f64 = 460.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

struct Frame {
    lx0: f64,
    lx1: f64,
    ly0: f64,
    ly1: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        LEFT + (v.log10() - self.lx0) / (self.lx1 - self.lx0) * (RIGHT - LEFT)
    }

    fn y(&self, v: f64) -> f64 {
        BOTTOM - (v.log10() - self.ly0) / (self.ly1 - self.ly0) * (BOTTOM - TOP)
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        x.log10() >= self.lx0 - 1e-9
            && x.log10() <= self.lx1 + 1e-9
            && y.log10() >= self.ly0 - 1e-9
            && y.log10() <= self.ly1 + 1e-9
    }
}

fn decade_floor(v: f64) -> f64 {
    v.log10().floor()
}

fn decade_ceil(v: f64) -> f64 {
    v.log10().ceil()
}

/// A named series of (kappa, value) points.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Render one log-log panel to SVG text.
pub fn svg_panel(title: &str, ylabel: &str, series: &[Series]) -> String {
    let finite: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite() && *x > 0.0 && *y > 0.0)
        .collect();

    let frame = if finite.is_empty() {
        Frame {
            lx0: 0.0,
            lx1: 8.0,
            ly0: -17.0,
            ly1: 0.0,
        }
    } else {
        let (mut lx0, mut lx1) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut ly0, mut ly1) = (f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in &finite {
            lx0 = lx0.min(decade_floor(*x));
            lx1 = lx1.max(decade_ceil(*x));
            ly0 = ly0.min(decade_floor(*y));
            ly1 = ly1.max(decade_ceil(*y));
        }
        if lx1 - lx0 < 1.0 {
            lx1 = lx0 + 1.0;
        }
        if ly1 - ly0 < 1.0 {
            ly1 = ly0 + 1.0;
        }
        Frame { lx0, lx1, ly0, ly1 }
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        (LEFT + RIGHT) / 2.0,
        title
    ));

    // Axes and decade grid.
    svg.push_str(&format!(
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        RIGHT - LEFT,
        BOTTOM - TOP
    ));
    let mut d = frame.lx0.ceil();
    while d <= frame.lx1 + 1e-9 {
        let px = frame.x(10f64.powf(d));
        svg.push_str(&format!(
            "<line x1=\"{px:.1}\" y1=\"{TOP}\" x2=\"{px:.1}\" y2=\"{BOTTOM}\" stroke=\"#dddddd\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.1}\" y=\"{}\" text-anchor=\"middle\">1e{}</text>\n",
            BOTTOM + 18.0,
            d as i64
        ));
        d += 1.0;
    }
    let mut d = frame.ly0.ceil();
    while d <= frame.ly1 + 1e-9 {
        let py = frame.y(10f64.powf(d));
        svg.push_str(&format!(
            "<line x1=\"{LEFT}\" y1=\"{py:.1}\" x2=\"{RIGHT}\" y2=\"{py:.1}\" stroke=\"#dddddd\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">1e{}</text>\n",
            LEFT - 6.0,
            py + 4.0,
            d as i64
        ));
        d += 2.0;
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">kappa</text>\n",
        (LEFT + RIGHT) / 2.0,
        BOTTOM + 38.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">{}</text>\n",
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0,
        ylabel
    ));

    // Reference curves eps, eps*k, eps*k^2 sampled along the x range.
    for (power, label) in [(0, "eps"), (1, "eps*k"), (2, "eps*k^2")] {
        let mut path = String::new();
        let steps = 64;
        for i in 0..=steps {
            let lx = frame.lx0 + (frame.lx1 - frame.lx0) * i as f64 / steps as f64;
            let k = 10f64.powf(lx);
            let y = EPS * k.powi(power);
            if frame.contains(k, y) {
                let cmd = if path.is_empty() { 'M' } else { 'L' };
                path.push_str(&format!("{cmd}{:.1} {:.1} ", frame.x(k), frame.y(y)));
            }
        }
        if !path.is_empty() {
            svg.push_str(&format!(
                "<path d=\"{path}\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"5 4\"/>\n"
            ));
            let k_end = 10f64.powf(frame.lx1);
            let y_end = EPS * k_end.powi(power);
            if frame.contains(k_end, y_end) {
                svg.push_str(&format!(
                    "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#999999\">{label}</text>\n",
                    RIGHT + 4.0,
                    frame.y(y_end) + 4.0
                ));
            }
        }
    }

    // Data series.
    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .copied()
            .filter(|(x, y)| x.is_finite() && y.is_finite() && *x > 0.0 && *y > 0.0)
            .collect();
        if pts.len() >= 2 {
            let path: String = pts
                .iter()
                .enumerate()
                .map(|(i, (x, y))| {
                    format!(
                        "{}{:.1} {:.1} ",
                        if i == 0 { 'M' } else { 'L' },
                        frame.x(*x),
                        frame.y(*y)
                    )
                })
                .collect();
            svg.push_str(&format!(
                "<path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
            ));
        }
        for (x, y) in &pts {
            svg.push_str(&format!(
                "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"{color}\"/>\n",
                frame.x(*x),
                frame.y(*y)
            ));
        }
        // Legend entry.
        let ly = TOP + 16.0 * si as f64 + 8.0;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly:.1}\" x2=\"{}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            RIGHT + 28.0,
            RIGHT + 52.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" font-size=\"11\">{}</text>\n",
            RIGHT + 56.0,
            ly + 4.0,
            s.label
        ));
    }

    if finite.is_empty() {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"#888888\">no data</text>\n",
            (LEFT + RIGHT) / 2.0,
            (TOP + BOTTOM) / 2.0
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn series_for<F: Fn(&RunRecord) -> f64>(
    records: &[RunRecord],
    class: MatrixClass,
    value: F,
) -> Vec<Series> {
    let mut series: Vec<Series> = Vec::new();
    for r in records.iter().filter(|r| r.class == class) {
        let label = format!("{} / {}", r.algorithm.name(), r.io.name());
        let point = (r.kappa, value(r));
        match series.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push(point),
            None => series.push(Series {
                label,
                points: vec![point],
            }),
        }
    }
    for s in &mut series {
        s.points
            .sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    series
}

/// Write `<class>_loo.svg` and `<class>_cholres.svg` per matrix class
/// present in the records (both files for `classes`, even when empty).
pub fn emit_plots(
    records: &[RunRecord],
    classes: &[MatrixClass],
    dir: &Path,
) -> io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for &class in classes {
        let loo = svg_panel(
            &format!("loss of orthogonality vs kappa ({class})"),
            "loo",
            &series_for(records, class, |r| r.loo),
        );
        let path = dir.join(format!("{}_loo.svg", class.name()));
        fs::write(&path, loo)?;
        written.push(path);

        let chol = svg_panel(
            &format!("relative Cholesky residual vs kappa ({class})"),
            "rel chol residual",
            &series_for(records, class, |r| r.rel_chol_residual),
        );
        let path = dir.join(format!("{}_cholres.svg", class.name()));
        fs::write(&path, chol)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_renders_axes() {
        let svg = svg_panel("t", "y", &[]);
        assert!(svg.contains("<svg"));
        assert!(svg.contains("no data"));
        assert!(svg.contains("kappa"));
    }

    #[test]
    fn single_point_renders_marker() {
        let svg = svg_panel(
            "t",
            "y",
            &[Series {
                label: "one".into(),
                points: vec![(1e4, 1e-12)],
            }],
        );
        assert!(svg.contains("<circle"));
        assert!(svg.contains("one"));
    }

    #[test]
    fn nan_points_are_omitted() {
        let svg = svg_panel(
            "t",
            "y",
            &[Series {
                label: "s".into(),
                points: vec![(1e2, 1e-15), (1e4, f64::NAN), (1e6, 1e-13)],
            }],
        );
        // Two finite markers only.
        assert_eq!(svg.matches("<circle").count(), 2);
    }
}
