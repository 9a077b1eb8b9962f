//! Plain-text outputs: CSV tables and SVG figures.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so equal
//! inputs give byte-identical files.

use std::fmt::Write;

use crate::criterion::{CriterionReport, SectorRegion};
use crate::levelset::LevelArc;
use crate::obstruction::ParityRow;
use crate::symbol::Holomorphic;
use crate::witness::WitnessTrace;
use crate::C64;

/// `x,y,abs_phi,curvature`, one row per sample.
pub fn arc_csv(arc: &LevelArc, phi: &impl Holomorphic) -> String {
    let mut out = String::from("x,y,abs_phi,curvature\n");
    for (z, k) in arc.points.iter().zip(&arc.curvatures) {
        let _ = writeln!(out, "{},{},{},{}", z.re, z.im, phi.value(*z).norm(), k);
    }
    out
}

/// `arc,x,y,abs_phi,curvature` for several arcs, `arc` counting from 0.
pub fn arcs_csv(arcs: &[LevelArc], phi: &impl Holomorphic) -> String {
    let mut out = String::from("arc,x,y,abs_phi,curvature\n");
    for (i, arc) in arcs.iter().enumerate() {
        for (z, k) in arc.points.iter().zip(&arc.curvatures) {
            let _ = writeln!(out, "{i},{},{},{},{}", z.re, z.im, phi.value(*z).norm(), k);
        }
    }
    out
}

/// `q,r_sampled,r_crude,power_1_sampled,power_1_crude,…,residual_sampled,residual_crude`.
pub fn witness_csv(trace: &WitnessTrace) -> String {
    let powers = trace.steps.first().map_or(0, |s| s.powers.len());
    let mut out = String::from("q,r_sampled,r_crude");
    for j in 1..=powers {
        let _ = write!(out, ",power_{j}_sampled,power_{j}_crude");
    }
    out.push_str(",residual_sampled,residual_crude\n");
    for step in &trace.steps {
        let _ = write!(out, "{},{},{}", step.q, step.r_norm.sampled, step.r_norm.crude);
        for p in &step.powers {
            let _ = write!(out, ",{},{}", p.sampled, p.crude);
        }
        let _ = writeln!(out, ",{},{}", step.residual.sampled, step.residual.crude);
    }
    out
}

/// `center_re,center_im,radius,count,divisible`.
pub fn parity_csv(rows: &[ParityRow]) -> String {
    let mut out = String::from("center_re,center_im,radius,count,divisible\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.center.re, r.center.im, r.radius, r.count, r.divisible);
    }
    out
}

/// Figure settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Pixel size of the square canvas.
    pub size: f64,
    /// Draw `|z| = 1` for scale.
    pub unit_circle: bool,
    /// Fractional padding around the data.
    pub padding: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { size: 600.0, unit_circle: true, padding: 0.08 }
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Maps the complex plane onto the canvas, `y` pointing up.
struct Frame {
    center: C64,
    half: f64,
    size: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = C64>, opts: &SvgOptions) -> Frame {
        let (mut lo, mut hi) =
            (C64::new(f64::INFINITY, f64::INFINITY), C64::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for z in points.filter(|z| z.is_finite()) {
            lo = C64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = C64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        if !lo.re.is_finite() {
            lo = C64::new(-1.0, -1.0);
            hi = C64::new(1.0, 1.0);
        }
        let half = 0.5 * (hi.re - lo.re).max(hi.im - lo.im).max(1e-9) * (1.0 + 2.0 * opts.padding);
        Frame { center: 0.5 * (lo + hi), half, size: opts.size }
    }

    fn px(&self, z: C64) -> (f64, f64) {
        let s = self.size / (2.0 * self.half);
        ((z.re - self.center.re + self.half) * s, (self.center.im - z.im + self.half) * s)
    }

    fn polyline(&self, points: &[C64], stroke: &str, closed: bool) -> String {
        let mut d = String::new();
        for (i, z) in points.iter().enumerate() {
            let (x, y) = self.px(*z);
            let _ = write!(d, "{}{:.3},{:.3}", if i == 0 { "M" } else { " L" }, x, y);
        }
        if closed {
            d.push_str(" Z");
        }
        format!("<path d=\"{d}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>\n")
    }

    fn axes(&self) -> String {
        let mut out = String::new();
        let (x0, y0) = self.px(C64::new(0.0, 0.0));
        let _ = writeln!(
            out,
            "<line x1=\"0\" y1=\"{y0:.3}\" x2=\"{s}\" y2=\"{y0:.3}\" stroke=\"#bbbbbb\"/>\n<line x1=\"{x0:.3}\" y1=\"0\" x2=\"{x0:.3}\" y2=\"{s}\" stroke=\"#bbbbbb\"/>",
            s = self.size
        );
        out
    }

    fn circle(&self, center: C64, radius: f64, stroke: &str) -> String {
        let (x, y) = self.px(center);
        let r = radius * self.size / (2.0 * self.half);
        format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r:.3}\" fill=\"none\" stroke=\"{stroke}\" stroke-dasharray=\"4 3\"/>\n")
    }

    fn dot(&self, z: C64, fill: &str) -> String {
        let (x, y) = self.px(z);
        format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"{fill}\"/>\n")
    }
}

fn document(size: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

/// One polyline per arc, cycling through a fixed palette.
pub fn arcs_svg(arcs: &[LevelArc], opts: &SvgOptions) -> String {
    let mut extent: Vec<C64> = arcs.iter().flat_map(|a| a.points.iter().copied()).collect();
    if opts.unit_circle {
        extent.extend([C64::new(1.0, 1.0), C64::new(-1.0, -1.0)]);
    }
    let frame = Frame::fit(extent.into_iter(), opts);
    let mut body = frame.axes();
    if opts.unit_circle {
        body.push_str(&frame.circle(C64::new(0.0, 0.0), 1.0, "#888888"));
    }
    for (i, arc) in arcs.iter().enumerate() {
        body.push_str(&frame.polyline(&arc.points, PALETTE[i % PALETTE.len()], false));
    }
    document(opts.size, &body)
}

/// The arc, the hull of `Γ ∪ {0}` that the check samples, and the
/// violation point when there is one.
pub fn criterion_svg(region: &SectorRegion, report: &CriterionReport, opts: &SvgOptions) -> String {
    let mut extent: Vec<C64> = region.hull().to_vec();
    extent.extend(report.violation_point);
    let frame = Frame::fit(extent.into_iter(), opts);
    let mut body = frame.axes();
    body.push_str(&frame.polyline(region.hull(), "#999999", true));
    body.push_str(&frame.polyline(&region.arc().points, PALETTE[0], false));
    if let Some(w) = report.violation_point {
        body.push_str(&frame.dot(w, PALETTE[1]));
    }
    let _ = writeln!(
        body,
        "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"14\">{} margin {:.3e}</text>",
        report.verdict, report.min_margin
    );
    document(opts.size, &body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::{check_hypothesis, validate_arc, DEFAULT_MARGIN_FLOOR};
    use crate::symbol::Symbol;

    fn quarter() -> LevelArc {
        let pts = (0..=20).map(|k| C64::from_polar(1.0, 0.3 + 2.0 * k as f64 / 20.0)).collect();
        LevelArc::from_points(1.0, pts)
    }

    #[test]
    fn arc_csv_rows() {
        let id: Symbol = "poly:[0,1]".parse().unwrap();
        let csv = arc_csv(&quarter(), &id);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,abs_phi,curvature");
        assert_eq!(lines.len(), 22);
        let cols: Vec<f64> = lines[5].split(',').map(|t| t.parse().unwrap()).collect();
        assert!((cols[2] - 1.0).abs() < 1e-12);
        assert!((cols[3] - 1.0).abs() < 1e-2);
    }

    #[test]
    fn svg_is_deterministic_and_well_formed() {
        let a = arcs_svg(&[quarter()], &SvgOptions::default());
        assert_eq!(a, arcs_svg(&[quarter()], &SvgOptions::default()));
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<path").count(), 1);
    }

    #[test]
    fn criterion_overlay_marks_violation() {
        let id: Symbol = "poly:[0,1]".parse().unwrap();
        let region = validate_arc(&quarter()).unwrap();
        let fail = check_hypothesis(&id, &region, 0.5, (20, 20), DEFAULT_MARGIN_FLOOR);
        let svg = criterion_svg(&region, &fail, &SvgOptions::default());
        assert!(svg.contains("fail"));
        assert!(svg.contains("r=\"4\""));
    }
}
