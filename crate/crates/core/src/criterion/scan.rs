use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::levelset::{find_seed_scan, trace_both, LevelArc, TraceOptions, CONVEXITY_FLOOR};
use crate::symbol::Holomorphic;
use crate::C64;

use super::{check_hypothesis, validate_arc, CriterionReport, DEFAULT_MARGIN_FLOOR};

/// Settings for [`scan_for_arcs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Approximate arclength traced around each seed.
    pub arc_len: f64,
    /// Seeds are searched on `0 < t ≤ t_max` along each ray.
    pub t_max: f64,
    pub ray_samples: usize,
    pub step: f64,
    /// Hypothesis-check grid `(n_θ, n_t)`.
    pub grid: (usize, usize),
    pub margin_floor: f64,
    /// Pieces shorter than this many samples are dropped.
    pub min_points: usize,
    /// Pieces shorter than this arclength are dropped. Traces that pass
    /// close to a critical point on the level set leave tiny, sharply
    /// turning pieces there.
    pub min_arclength: f64,
    /// Fraction of each piece trimmed from both ends.
    pub trim: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            arc_len: 0.6,
            t_max: 8.0,
            ray_samples: 4000,
            step: 0.002,
            grid: (200, 200),
            margin_floor: DEFAULT_MARGIN_FLOOR,
            min_points: 8,
            min_arclength: 0.05,
            trim: 0.05,
        }
    }
}

/// A sign-constant piece of a traced level curve and its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// The seed ray the piece was traced from.
    pub ray: f64,
    pub arc: LevelArc,
    /// The piece was validated as `arc / rotation` against `Φ(rotation · z)`.
    pub rotation: C64,
    pub report: CriterionReport,
}

/// `z ↦ Φ(a z)` without building a new symbol.
struct Rotated<'a, H> {
    inner: &'a H,
    a: C64,
}

impl<H: Holomorphic> Holomorphic for Rotated<'_, H> {
    fn value(&self, z: C64) -> C64 {
        self.inner.value(self.a * z)
    }
    fn derivative(&self, z: C64) -> C64 {
        self.a * self.inner.derivative(self.a * z)
    }
}

/// Seeds a trace on every ray where the level set is crossed, splits each
/// trace into maximal pieces of constant curvature sign (breaking at
/// critical points and flat stretches), and checks every piece.
///
/// A piece that does not validate as it stands (typically one outside the
/// upper half-plane) is rotated by `a = e^{iβ}` so that
/// its middle sample points straight up, then checked against `Φ_a`; the
/// verdict is the same as for the unrotated arc, and any violation point is
/// mapped back. Candidates are returned in ray order.
pub fn scan_for_arcs(phi: &impl Holomorphic, level: f64, rays: &[f64], opts: &ScanOptions) -> Vec<Candidate> {
    rays.par_iter().flat_map_iter(|&theta| scan_ray(phi, level, theta, opts)).collect()
}

fn scan_ray(phi: &impl Holomorphic, level: f64, theta: f64, opts: &ScanOptions) -> Vec<Candidate> {
    let Ok(seed) = find_seed_scan(phi, level, theta, opts.t_max, opts.ray_samples) else {
        return Vec::new();
    };
    let trace_opts = TraceOptions {
        max_points: ((0.5 * opts.arc_len / opts.step).ceil() as usize).max(2),
        ..TraceOptions::with_step(opts.step)
    };
    let Ok(traced) = trace_both(phi, seed, level, &trace_opts, &|_| false) else {
        return Vec::new();
    };
    sign_constant_pieces(&traced, opts.min_points, opts.trim)
        .into_iter()
        .filter(|piece| piece.arclength() >= opts.min_arclength)
        .map(|piece| check_piece(phi, level, theta, piece, opts))
        .collect()
}

fn check_piece(phi: &impl Holomorphic, level: f64, ray: f64, arc: LevelArc, opts: &ScanOptions) -> Candidate {
    if let Ok(region) = validate_arc(&arc) {
        let report = check_hypothesis(phi, &region, level, opts.grid, opts.margin_floor);
        return Candidate { ray, arc, rotation: C64::new(1.0, 0.0), report };
    }
    let middle = arc.points[arc.len() / 2];
    let beta = middle.arg() - FRAC_PI_2;
    let rotation = C64::from_polar(1.0, beta);
    let rotated = Rotated { inner: phi, a: rotation };
    let report = match validate_arc(&arc.scaled(rotation.conj())) {
        Ok(region) => {
            let mut report = check_hypothesis(&rotated, &region, level, opts.grid, opts.margin_floor);
            report.violation_point = report.violation_point.map(|w| w * rotation);
            if beta.abs() > 1e-12 {
                report.note = Some(format!("validated after rotation by {beta:.6} rad"));
            }
            report
        }
        Err(err) => CriterionReport::rejected(level, err.to_string()),
    };
    Candidate { ray, arc, rotation, report }
}

/// Maximal runs of interior samples with `|κ| ≥ floor` and one sign,
/// trimmed at both ends.
fn sign_constant_pieces(arc: &LevelArc, min_points: usize, trim: f64) -> Vec<LevelArc> {
    let n = arc.len();
    if n < 3 {
        return Vec::new();
    }
    let sign = |i: usize| {
        let k = arc.curvatures[i];
        if k >= CONVEXITY_FLOOR {
            1
        } else if k <= -CONVEXITY_FLOOR {
            -1
        } else {
            0
        }
    };
    let mut pieces = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        let s = sign(i);
        if s == 0 {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < n && sign(i) == s {
            i += 1;
        }
        // Interior indices start..i share the sign; their stencils span start−1..=i.
        let (lo, hi) = (start - 1, i);
        let count = hi - lo + 1;
        let cut = ((count as f64) * trim).floor() as usize;
        let (lo, hi) = (lo + cut, hi - cut);
        if hi + 1 >= lo + min_points {
            pieces.push(arc.slice(lo..hi + 1));
        }
    }
    pieces
}
