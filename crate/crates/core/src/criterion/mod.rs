//! The level-set criterion for hypercyclic algebras.
//!
//! A strictly convex arc `Γ ⊂ {|Φ| = r}` with `0 < arg z₁ < arg z₂ < π`
//! bounds the star-shaped region `Ω = conv(Γ ∪ {0}) \ (Γ ∪ {0})`. The
//! hypothesis is `|Φ| < r` on `Ω`. [`validate_arc`] builds the region,
//! [`check_hypothesis`] samples it, [`inflate_arc`] looks for a level `r > 1`
//! arc with the Minkowski-sum conditions the witness construction needs, and
//! [`scan_for_arcs`] searches for candidate arcs from seed rays.

mod inflate;
mod pipeline;
mod scan;

pub use inflate::{inflate_arc, InflateSearch, Inflation, LambdaSector};
pub use pipeline::{check_symbol, even_rays, PipelineOptions, PipelineOutcome};
pub use scan::{scan_for_arcs, Candidate, ScanOptions};

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{convex_hull, cross, hull_contains};
use crate::levelset::{Convexity, LevelArc};
use crate::symbol::Holomorphic;
use crate::C64;

/// Fraction of each sample ray kept away from `Γ`.
pub const EDGE_CLEARANCE: f64 = 1e-3;

/// Default margin below the level required for a pass.
pub const DEFAULT_MARGIN_FLOOR: f64 = 1e-12;

/// Number of rays tabulated in a radial profile.
const PROFILE_RAYS: usize = 512;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriterionError {
    #[error("arc is not certified strictly convex ({0:?})")]
    NotStrictlyConvex(Convexity),
    #[error("the origin lies in the convex hull of the arc")]
    OriginInHull,
    #[error("endpoint arguments {arg1} and {arg2} do not satisfy 0 < arg z1 < arg z2 < pi")]
    ArgRange { arg1: f64, arg2: f64 },
    #[error("arc endpoints have equal real parts")]
    EqualRealParts,
    #[error("the ray at angle {theta} meets the arc more than once")]
    RayMultiHit { theta: f64 },
    #[error("no admissible (r, eps) found: {}", .attempts.join("; "))]
    NotFound { attempts: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// The region cut out by a validated arc.
///
/// `Ω` is described in polar form: `w ∈ Ω` iff `arg w` lies in the arc's
/// argument range and `0 < |w| < ρ(arg w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorRegion {
    arc: LevelArc,
    arg_range: (f64, f64),
    radial_profile: Vec<(f64, f64)>,
    hull: Vec<C64>,
}

impl SectorRegion {
    pub fn arc(&self) -> &LevelArc {
        &self.arc
    }

    /// `(arg z₁, arg z₂)`.
    pub fn arg_range(&self) -> (f64, f64) {
        self.arg_range
    }

    /// Table of `(θ, ρ(θ))` with `ρ(θ) e^{iθ} ∈ Γ`.
    pub fn radial_profile(&self) -> &[(f64, f64)] {
        &self.radial_profile
    }

    /// Vertices of `conv(Γ ∪ {0})`, counterclockwise.
    pub fn hull(&self) -> &[C64] {
        &self.hull
    }

    fn relative_angle(&self, theta: f64) -> Option<f64> {
        let width = self.arg_range.1 - self.arg_range.0;
        let rel = (theta - self.arg_range.0).rem_euclid(TAU);
        if rel <= width + 1e-15 {
            Some(rel.min(width))
        } else {
            None
        }
    }

    /// `ρ(θ)` interpolated linearly in `θ`; `None` outside the argument range.
    pub fn rho_at(&self, theta: f64) -> Option<f64> {
        let rel = self.relative_angle(theta)?;
        let table = &self.radial_profile;
        let theta = self.arg_range.0 + rel;
        let idx = table.partition_point(|&(t, _)| t <= theta);
        if idx == 0 {
            return Some(table[0].1);
        }
        if idx == table.len() {
            return Some(table[table.len() - 1].1);
        }
        let (t0, r0) = table[idx - 1];
        let (t1, r1) = table[idx];
        let s = if t1 > t0 { (theta - t0) / (t1 - t0) } else { 0.0 };
        Some(r0 + s * (r1 - r0))
    }

    /// Membership in `Ω` through the radial profile.
    pub fn contains(&self, w: C64) -> bool {
        if w.norm() == 0.0 {
            return false;
        }
        match self.rho_at(w.arg()) {
            Some(rho) => w.norm() < rho,
            None => false,
        }
    }

    /// Distance from the origin to the boundary of `conv(Γ ∪ {0})` along
    /// the ray at angle `θ`.
    pub fn hull_radius(&self, theta: f64) -> Option<f64> {
        self.relative_angle(theta)?;
        farthest_ray_hit(&self.hull, C64::from_polar(1.0, theta), true)
    }

    /// The region of the image arc under `z ↦ s z`.
    ///
    /// Used for homothety conjugation: the region of `Φ_a` is this region
    /// scaled by `1/a`. The argument range is rotated and may leave `(0, π)`.
    pub fn scaled(&self, s: C64) -> SectorRegion {
        let turn = s.arg();
        let stretch = s.norm();
        SectorRegion {
            arc: self.arc.scaled(s),
            arg_range: (self.arg_range.0 + turn, self.arg_range.1 + turn),
            radial_profile: self.radial_profile.iter().map(|&(t, r)| (t + turn, r * stretch)).collect(),
            hull: self.hull.iter().map(|z| z * s).collect(),
        }
    }

    /// Smallest `|z|` over the arc samples.
    pub fn min_radius(&self) -> f64 {
        self.arc.points.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Largest `t ≥ 0` with `t·dir` on the closed polygon or polyline.
fn farthest_ray_hit(vertices: &[C64], dir: C64, closed: bool) -> Option<f64> {
    ray_hits(vertices, dir, closed).into_iter().reduce(f64::max)
}

/// All `t > 0` where the ray `t·dir` meets a segment of the polyline.
fn ray_hits(vertices: &[C64], dir: C64, closed: bool) -> Vec<f64> {
    let n = vertices.len();
    let edges = if closed { n } else { n.saturating_sub(1) };
    let mut hits = Vec::new();
    for i in 0..edges {
        let p = vertices[i];
        let d = vertices[(i + 1) % n] - p;
        let denom = cross(dir, d);
        if denom == 0.0 {
            continue;
        }
        let t = cross(p, d) / denom;
        let tau = cross(p, dir) / denom;
        if t > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&tau) {
            hits.push(t);
        }
    }
    hits
}

/// Builds the sector region of a strictly convex arc.
///
/// The arc is reoriented so that its argument increases. Rejects arcs whose
/// hull contains the origin, whose endpoints violate `0 < arg z₁ < arg z₂ < π`
/// or share a real part, and arcs that some ray meets twice.
pub fn validate_arc(arc: &LevelArc) -> Result<SectorRegion, CriterionError> {
    if !arc.certificate.strictly_convex {
        return Err(CriterionError::NotStrictlyConvex(arc.certificate.status));
    }
    if hull_contains(&convex_hull(&arc.points), C64::new(0.0, 0.0)) {
        return Err(CriterionError::OriginInHull);
    }
    let arc = if arc.last().arg() < arc.first().arg() { arc.reversed() } else { arc.clone() };
    let (arg1, arg2) = (arc.first().arg(), arc.last().arg());
    if !(0.0 < arg1 && arg1 < arg2 && arg2 < PI) {
        return Err(CriterionError::ArgRange { arg1, arg2 });
    }
    if arc.first().re == arc.last().re {
        return Err(CriterionError::EqualRealParts);
    }
    for w in arc.points.windows(2) {
        if w[1].arg() <= w[0].arg() {
            return Err(CriterionError::RayMultiHit { theta: w[1].arg() });
        }
    }
    let profile: Vec<(f64, f64)> = (0..PROFILE_RAYS)
        .into_par_iter()
        .map(|k| {
            let theta = arg1 + (arg2 - arg1) * k as f64 / (PROFILE_RAYS - 1) as f64;
            let dir = C64::from_polar(1.0, theta);
            let mut hits = ray_hits(&arc.points, dir, false);
            hits.sort_by(f64::total_cmp);
            hits.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1.0));
            (theta, hits)
        })
        .map(|(theta, hits)| match hits.as_slice() {
            [rho] => Ok((theta, *rho)),
            [] if theta == arg1 => Ok((theta, arc.first().norm())),
            [] if theta == arg2 => Ok((theta, arc.last().norm())),
            _ => Err(CriterionError::RayMultiHit { theta }),
        })
        .collect::<Result<_, _>>()?;
    let mut with_origin = arc.points.clone();
    with_origin.push(C64::new(0.0, 0.0));
    let hull = convex_hull(&with_origin);
    Ok(SectorRegion { arc, arg_range: (arg1, arg2), radial_profile: profile, hull })
}

/// `(r, ε)` selected by arc inflation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chosen {
    pub r: f64,
    pub eps: f64,
}

/// Outcome of a sampled hypothesis check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub verdict: Verdict,
    pub level: f64,
    /// `level − max |Φ|` over the samples.
    pub min_margin: f64,
    pub max_abs_phi: f64,
    #[serde(with = "optional_complex")]
    pub violation_point: Option<C64>,
    /// `(n_θ, n_t)`.
    pub grid: (usize, usize),
    pub edge_clearance: f64,
    pub margin_floor: f64,
    /// Per `j = 1..m−1`, whether the Minkowski-sum conditions held.
    pub minkowski_ok: Option<Vec<bool>>,
    pub chosen: Option<Chosen>,
    pub note: Option<String>,
}

mod optional_complex {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::literal::{format_complex, parse_complex};
    use crate::C64;

    pub fn serialize<S: Serializer>(z: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
        match z {
            Some(z) => s.serialize_some(&format_complex(*z)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<C64>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_complex(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl CriterionReport {
    /// A report for a candidate that never reached sampling.
    pub fn rejected(level: f64, note: String) -> Self {
        CriterionReport {
            verdict: Verdict::Inconclusive,
            level,
            min_margin: f64::NAN,
            max_abs_phi: f64::NAN,
            violation_point: None,
            grid: (0, 0),
            edge_clearance: EDGE_CLEARANCE,
            margin_floor: DEFAULT_MARGIN_FLOOR,
            minkowski_ok: None,
            chosen: None,
            note: Some(note),
        }
    }
}

/// Sample points of `conv(Γ ∪ {0}) \ (Γ ∪ {0})` in grid order.
///
/// On ray `θᵢ` the points are `tₖ h(θᵢ) e^{iθᵢ}` with `h` the hull radius
/// and `tₖ = (1 − ε_edge) k / n_t`. When `Γ` bulges outward `h = ρ`; when it
/// bends toward the origin the samples also cover the part of the hull
/// beyond `Γ`.
pub fn sample_region(region: &SectorRegion, grid: (usize, usize)) -> Vec<C64> {
    let (n_theta, n_t) = grid;
    let (arg1, arg2) = region.arg_range;
    (0..n_theta)
        .into_par_iter()
        .flat_map_iter(|i| {
            let theta = if n_theta == 1 {
                0.5 * (arg1 + arg2)
            } else {
                arg1 + (arg2 - arg1) * i as f64 / (n_theta - 1) as f64
            };
            let h = region.hull_radius(theta).or_else(|| region.rho_at(theta)).unwrap_or(0.0);
            let dir = C64::from_polar(h, theta);
            (1..=n_t).map(move |k| dir * ((1.0 - EDGE_CLEARANCE) * k as f64 / n_t as f64))
        })
        .collect()
}

/// Samples `|Φ|` over the region and compares with `level`.
///
/// Fails on any sample with `|Φ| ≥ level` (the largest one is reported),
/// passes when every sample is at least `margin_floor` below the level, and
/// is inconclusive in between.
pub fn check_hypothesis(
    phi: &impl Holomorphic,
    region: &SectorRegion,
    level: f64,
    grid: (usize, usize),
    margin_floor: f64,
) -> CriterionReport {
    let samples = sample_region(region, grid);
    let values: Vec<f64> = samples.par_iter().map(|&z| phi.value(z).norm()).collect();
    // First index of the maximum, so ties resolve deterministically.
    let (arg_max, max_abs) =
        values.iter().enumerate().fold((usize::MAX, f64::NEG_INFINITY), |acc, (i, &v)| {
            if v > acc.1 || v.is_nan() && !acc.1.is_nan() {
                (i, v)
            } else {
                acc
            }
        });
    let margin = level - max_abs;
    let (verdict, violation_point) = if max_abs.is_nan() || max_abs >= level {
        (Verdict::Fail, samples.get(arg_max).copied())
    } else if margin >= margin_floor {
        (Verdict::Pass, None)
    } else {
        (Verdict::Inconclusive, None)
    };
    CriterionReport {
        verdict,
        level,
        min_margin: margin,
        max_abs_phi: max_abs,
        violation_point,
        grid,
        edge_clearance: EDGE_CLEARANCE,
        margin_floor,
        minkowski_ok: None,
        chosen: None,
        note: None,
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};

    use super::*;
    use crate::levelset::{trace_both, TraceOptions};
    use crate::symbol::Symbol;

    pub(crate) fn unit_arc(from: f64, to: f64, n: usize) -> LevelArc {
        LevelArc::from_points(
            1.0,
            (0..n).map(|k| C64::from_polar(1.0, from + (to - from) * k as f64 / (n - 1) as f64)).collect(),
        )
    }

    fn identity() -> Symbol {
        Symbol::polynomial(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap()
    }

    pub(crate) fn cos_arc(x0: f64, x1: f64) -> LevelArc {
        let seed = C64::new(FRAC_PI_2, 1f64.asinh());
        let stop = move |z: C64| z.re < x0 || z.re > x1;
        let arc = trace_both(&Symbol::cos(), seed, 1.0, &TraceOptions::with_step(0.005), &stop).unwrap();
        let keep: Vec<C64> = arc.points.into_iter().filter(|z| z.re >= x0 && z.re <= x1).collect();
        LevelArc::from_points(1.0, keep)
    }

    #[test]
    fn unit_arc_region() {
        let region = validate_arc(&unit_arc(FRAC_PI_6, FRAC_PI_3, 200)).unwrap();
        for &(_, rho) in region.radial_profile() {
            assert!((rho - 1.0).abs() < 1e-4);
        }
        assert!(region.contains(C64::from_polar(0.9, 0.8)));
        assert!(!region.contains(C64::from_polar(1.1, 0.8)));
        assert!(!region.contains(C64::from_polar(0.5, 0.1)));
        assert!(!region.contains(C64::new(0.0, 0.0)));
    }

    #[test]
    fn reversed_arc_is_normalized() {
        let region = validate_arc(&unit_arc(FRAC_PI_3, FRAC_PI_6, 200)).unwrap();
        assert!(region.arg_range().0 < region.arg_range().1);
    }

    #[test]
    fn full_circle_contains_origin() {
        let arc = unit_arc(0.0, TAU * 0.999, 500);
        assert_eq!(validate_arc(&arc).unwrap_err(), CriterionError::OriginInHull);
    }

    #[test]
    fn lower_half_plane_is_rejected() {
        let arc = unit_arc(-1.2, -0.8, 100);
        assert!(matches!(validate_arc(&arc), Err(CriterionError::ArgRange { .. })));
    }

    #[test]
    fn cos_region_profile_decreases() {
        let region = validate_arc(&cos_arc(0.3, FRAC_PI_2)).unwrap();
        for w in region.radial_profile().windows(2) {
            assert!(w[1].1 < w[0].1);
        }
    }

    #[test]
    fn identity_passes() {
        let region = validate_arc(&unit_arc(FRAC_PI_6, FRAC_PI_3, 200)).unwrap();
        // The margin is the edge clearance itself, so the floor sits below it.
        let report = check_hypothesis(&identity(), &region, 1.0, (50, 50), 1e-4);
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.min_margin > 0.0);
        assert!((report.max_abs_phi - (1.0 - EDGE_CLEARANCE)).abs() < 1e-4);
    }

    #[test]
    fn cos_passes() {
        let region = validate_arc(&cos_arc(0.1, PI - 0.1)).unwrap();
        let report = check_hypothesis(&Symbol::cos(), &region, 1.0, (200, 200), DEFAULT_MARGIN_FLOOR);
        assert_eq!(report.verdict, Verdict::Pass, "{report:?}");
        assert!(report.min_margin > 0.0);
    }

    #[test]
    fn wrong_level_fails_with_witness() {
        let region = validate_arc(&unit_arc(FRAC_PI_6, FRAC_PI_3, 200)).unwrap();
        let report = check_hypothesis(&identity(), &region, 0.5, (50, 50), 1e-3);
        assert_eq!(report.verdict, Verdict::Fail);
        let w = report.violation_point.unwrap();
        assert!(identity().eval(w).norm() >= 0.5);
    }

    #[test]
    fn inward_bulge_is_caught_beyond_the_arc() {
        // A side of the rose's central component bends toward the origin
        // between two corners, so conv(Γ ∪ {0}) reaches past Γ.
        use crate::levelset::find_seed_scan;
        use std::f64::consts::FRAC_PI_8;
        let rose = Symbol::rose();
        let seed = find_seed_scan(&rose, 1.0, FRAC_PI_8, 2.0, 400).unwrap();
        let stop = |z: C64| z.arg() < 0.1 || z.arg() > 2.0 * FRAC_PI_8 - 0.1;
        let arc = trace_both(&rose, seed, 1.0, &TraceOptions::with_step(0.002), &stop).unwrap();
        let region = validate_arc(&arc).unwrap();
        let report = check_hypothesis(&rose, &region, 1.0, (200, 200), DEFAULT_MARGIN_FLOOR);
        assert_eq!(report.verdict, Verdict::Fail);
        let w = report.violation_point.unwrap();
        assert!(rose.eval(w).norm() >= 1.0);
        assert!(w.norm() > region.rho_at(w.arg()).unwrap());
    }

    #[test]
    fn scaled_region_reproduces_samples() {
        let region = validate_arc(&cos_arc(0.2, 2.9)).unwrap();
        let a = C64::from_polar(1.7, 0.4);
        let conj = Symbol::cos().homothety_conjugate(a).unwrap();
        let moved = region.scaled(a.inv());
        let orig = sample_region(&region, (40, 40));
        let back = sample_region(&moved, (40, 40));
        for (z, w) in orig.iter().zip(&back) {
            let lhs = Symbol::cos().eval(*z).norm();
            let rhs = conj.eval(*w).norm();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
