//! Level curves `|Φ(z)| = r`: tracing, curvature and convexity.
//!
//! Arcs are polylines of points corrected onto the level set. Traced arcs are
//! oriented with the sublevel set `{|Φ| < r}` on the left, which for the star
//! regions of the criterion means the argument increases along the arc.

mod inverse;
mod trace;

pub use inverse::{local_inverse, LocalInverse, PolarRect};
pub use trace::{
    correct_onto_level, find_seed, find_seed_scan, find_seed_vertical, find_seeds_scan, trace, trace_both,
    TraceOptions,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{cross, segments_cross};
use crate::symbol::Holomorphic;
use crate::C64;

/// Minimum `|κ|` for a strict-convexity verdict.
pub const CONVEXITY_FLOOR: f64 = 1e-6;

/// Residual bound `||Φ(zᵢ)| − r|` for accepted trace samples.
pub const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LevelSetError {
    #[error("no sign change of |Φ| − r on the ray at angle {theta}")]
    NoRootOnRay { theta: f64 },
    #[error("no sign change of |Φ| − r on the vertical line Re z = {x}")]
    NoRootOnLine { x: f64 },
    #[error("critical point of Φ at {at}")]
    CriticalPoint { at: C64 },
    #[error("seed could not be corrected onto the level set (residual {residual:e})")]
    SeedNotConverged { residual: f64 },
    #[error("contour passes within {min:e} of a preimage (min |Φ − w| too small)")]
    ContourTooClose { min: f64 },
    #[error("Φ − w has {count} zeros inside the contour, expected exactly one")]
    NotUnivalent { count: f64 },
}

/// Why a trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Closed,
    Stopped,
    MaxPoints,
    CriticalPoint,
    CorrectorFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convexity {
    StrictlyConvex,
    NotConvex,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityCertificate {
    pub status: Convexity,
    pub strictly_convex: bool,
    pub min_abs_curvature: f64,
    /// `+1` when the arc turns left (counterclockwise), `−1` when it turns right.
    pub orientation_sign: i8,
}

/// An ordered polyline on `|Φ| = r` with tangents, curvature and a
/// convexity certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelArc {
    pub level: f64,
    pub points: Vec<C64>,
    pub tangents: Vec<C64>,
    pub curvatures: Vec<f64>,
    pub certificate: ConvexityCertificate,
    pub termination: Option<Termination>,
}

impl LevelArc {
    /// Builds an arc from raw samples, estimating tangents by differences.
    pub fn from_points(level: f64, points: Vec<C64>) -> Self {
        let tangents = difference_tangents(&points);
        Self::with_tangents(level, points, tangents, None)
    }

    pub(crate) fn with_tangents(
        level: f64,
        points: Vec<C64>,
        tangents: Vec<C64>,
        termination: Option<Termination>,
    ) -> Self {
        let curvatures = discrete_curvatures(&points);
        let certificate = certify_points(&points, &curvatures);
        LevelArc { level, points, tangents, curvatures, certificate, termination }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> C64 {
        self.points[0]
    }

    pub fn last(&self) -> C64 {
        self.points[self.points.len() - 1]
    }

    /// Same samples traversed the other way.
    pub fn reversed(&self) -> LevelArc {
        let points: Vec<C64> = self.points.iter().rev().copied().collect();
        let tangents: Vec<C64> = self.tangents.iter().rev().map(|t| -t).collect();
        Self::with_tangents(self.level, points, tangents, self.termination)
    }

    /// Sub-arc over the index range.
    pub fn slice(&self, range: std::ops::Range<usize>) -> LevelArc {
        Self::with_tangents(
            self.level,
            self.points[range.clone()].to_vec(),
            self.tangents[range].to_vec(),
            None,
        )
    }

    /// Image of the arc under `z ↦ s·z`.
    pub fn scaled(&self, s: C64) -> LevelArc {
        let unit = s / s.norm();
        Self::with_tangents(
            self.level,
            self.points.iter().map(|z| z * s).collect(),
            self.tangents.iter().map(|t| t * unit).collect(),
            self.termination,
        )
    }

    /// Signed curvature at an interior sample.
    pub fn curvature(&self, i: usize) -> f64 {
        assert!(i >= 1 && i + 1 < self.points.len(), "curvature needs an interior index");
        three_point_curvature(self.points[i - 1], self.points[i], self.points[i + 1])
    }

    pub fn arclength(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    /// Cumulative arclength at each sample.
    pub fn arclength_profile(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.points.len());
        let mut s = 0.0;
        for (i, z) in self.points.iter().enumerate() {
            if i > 0 {
                s += (z - self.points[i - 1]).norm();
            }
            out.push(s);
        }
        out
    }

    /// `max ||Φ(zᵢ)| − r|` over the samples.
    pub fn max_residual(&self, phi: &impl Holomorphic) -> f64 {
        self.points.iter().map(|&z| (phi.value(z).norm() - self.level).abs()).fold(0.0, f64::max)
    }

    /// Largest distance between consecutive samples.
    pub fn max_step(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max)
    }
}

/// Signed curvature of the circle through three samples.
///
/// This is `(x′y″ − y′x″)/|γ′|³` for the interpolating circle: exact on
/// circles and lines, second order for smooth curves sampled near-uniformly.
pub fn three_point_curvature(a: C64, b: C64, c: C64) -> f64 {
    let (ab, bc, ac) = ((b - a).norm(), (c - b).norm(), (c - a).norm());
    let denom = ab * bc * ac;
    if denom == 0.0 {
        return 0.0;
    }
    2.0 * cross(b - a, c - b) / denom
}

fn discrete_curvatures(points: &[C64]) -> Vec<f64> {
    let n = points.len();
    if n < 3 {
        return vec![0.0; n];
    }
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = three_point_curvature(points[i - 1], points[i], points[i + 1]);
    }
    out[0] = out[1];
    out[n - 1] = out[n - 2];
    out
}

fn difference_tangents(points: &[C64]) -> Vec<C64> {
    let n = points.len();
    (0..n)
        .map(|i| {
            let d = match (i, n) {
                (_, 0 | 1) => C64::new(1.0, 0.0),
                (0, _) => points[1] - points[0],
                (i, n) if i == n - 1 => points[n - 1] - points[n - 2],
                (i, _) => points[i + 1] - points[i - 1],
            };
            if d.norm() == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                d / d.norm()
            }
        })
        .collect()
}

/// Strict-convexity certificate for a polyline.
pub fn certify_strict_convexity(arc: &LevelArc) -> ConvexityCertificate {
    certify_points(&arc.points, &arc.curvatures)
}

fn certify_points(points: &[C64], curvatures: &[f64]) -> ConvexityCertificate {
    let n = points.len();
    if n < 4 {
        return ConvexityCertificate {
            status: Convexity::Inconclusive,
            strictly_convex: false,
            min_abs_curvature: 0.0,
            orientation_sign: 0,
        };
    }
    let interior = &curvatures[1..n - 1];
    let min_abs = interior.iter().map(|k| k.abs()).fold(f64::INFINITY, f64::min);
    let positive = interior.iter().filter(|&&k| k >= CONVEXITY_FLOOR).count();
    let negative = interior.iter().filter(|&&k| k <= -CONVEXITY_FLOOR).count();
    let orientation_sign = match positive.cmp(&negative) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
    };
    let status = if positive > 0 && negative > 0 {
        Convexity::NotConvex
    } else if min_abs < CONVEXITY_FLOOR {
        Convexity::Inconclusive
    } else if chords_cross_polyline(points) {
        Convexity::NotConvex
    } else {
        Convexity::StrictlyConvex
    };
    ConvexityCertificate {
        status,
        strictly_convex: status == Convexity::StrictlyConvex,
        min_abs_curvature: min_abs,
        orientation_sign,
    }
}

/// Whether a sampled chord crosses the polyline away from its endpoints.
fn chords_cross_polyline(points: &[C64]) -> bool {
    let n = points.len();
    let anchors: Vec<usize> = {
        let count = n.min(24);
        let mut v: Vec<usize> = (0..count).map(|k| k * (n - 1) / (count - 1)).collect();
        v.dedup();
        v
    };
    for (a, &i) in anchors.iter().enumerate() {
        for &k in &anchors[a + 1..] {
            if k < i + 2 {
                continue;
            }
            let (p, q) = (points[i], points[k]);
            for j in 0..n - 1 {
                if j + 1 == i || j == i || j + 1 == k || j == k {
                    continue;
                }
                if segments_cross(p, q, points[j], points[j + 1]) {
                    return true;
                }
            }
        }
    }
    false
}
