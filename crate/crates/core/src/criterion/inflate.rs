use rayon::prelude::*;

use crate::levelset::{find_seed, trace_both, LevelArc, TraceOptions};
use crate::symbol::Holomorphic;
use crate::C64;

use super::{
    check_hypothesis, validate_arc, Chosen, CriterionError, CriterionReport, SectorRegion, Verdict,
    DEFAULT_MARGIN_FLOOR,
};

/// Upper limit on sampled Minkowski sums per `j`.
const MAX_SUMS: usize = 50_000;

/// Search grid and sampling for [`inflate_arc`].
#[derive(Debug, Clone, PartialEq)]
pub struct InflateSearch {
    /// Levels tried in order; the default is `1 + 2⁻ᵏ`, `k = 4..=12`.
    pub r_grid: Vec<f64>,
    /// `ε = min|Γ|·2⁻ᵏ` for `k` in this range, tried in order.
    pub eps_halvings: std::ops::RangeInclusive<u32>,
    /// Fraction of the base argument range trimmed from each side of `Γ`.
    pub trim: f64,
    pub step: f64,
    /// Points of `Γ` entering the Minkowski sums.
    pub arc_samples: usize,
    /// Polar grid `(n_radius, n_angle)` sampling `Λ`.
    pub lambda_grid: (usize, usize),
    /// Grid for the level-`r` hypothesis check.
    pub grid: (usize, usize),
    pub margin_floor: f64,
}

impl Default for InflateSearch {
    fn default() -> Self {
        InflateSearch {
            r_grid: (4..=12).map(|k| 1.0 + 0.5f64.powi(k)).collect(),
            eps_halvings: 1..=10,
            trim: 0.1,
            step: 0.002,
            arc_samples: 24,
            lambda_grid: (6, 6),
            grid: (200, 200),
            margin_floor: DEFAULT_MARGIN_FLOOR,
        }
    }
}

/// `Λ = {w : 0 < |w| < ε, arg w ∈ arg_range}`, the part of `Ω` near the
/// origin inside the cone of `Γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSector {
    pub eps: f64,
    pub arg_range: (f64, f64),
}

impl LambdaSector {
    pub fn contains(&self, w: C64) -> bool {
        let theta = w.arg();
        w.norm() > 0.0 && w.norm() < self.eps && theta >= self.arg_range.0 && theta <= self.arg_range.1
    }

    /// Polar grid over the closure of the sector, origin excluded.
    pub fn samples(&self, (n_radius, n_angle): (usize, usize)) -> Vec<C64> {
        let (a, b) = self.arg_range;
        let mut out = Vec::with_capacity(n_radius * n_angle);
        for i in 1..=n_radius {
            let radius = self.eps * i as f64 / n_radius as f64;
            for k in 0..n_angle {
                let theta = a + (b - a) * k as f64 / (n_angle.max(2) - 1) as f64;
                out.push(C64::from_polar(radius, theta));
            }
        }
        out
    }
}

/// A level-`r` arc `Γ` and radius `ε` meeting the Minkowski-sum conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct Inflation {
    pub r: f64,
    pub eps: f64,
    pub arc: LevelArc,
    /// Region of `Γ` at level `r`.
    pub region: SectorRegion,
    pub lambda: LambdaSector,
    /// Level-`r` hypothesis check on `conv(Γ ∪ {0})`, with the Minkowski
    /// results and the chosen `(r, ε)` filled in.
    pub report: CriterionReport,
    /// The sampled points of `Σ_{k≤j} Γ/m`, all `j < m`.
    pub minkowski_samples: Vec<C64>,
}

impl Inflation {
    /// `p` interior frequencies in `Λ` and `p` distinct frequencies on `Γ`,
    /// spread evenly.
    pub fn frequencies(&self, p: usize) -> (Vec<C64>, Vec<C64>) {
        let (a, b) = self.lambda.arg_range;
        let n = self.arc.len();
        let lambdas = (1..=p)
            .map(|k| {
                let s = k as f64 / (p + 1) as f64;
                C64::from_polar(0.5 * self.eps, a + (b - a) * s)
            })
            .collect();
        let gammas = (1..=p).map(|k| self.arc.points[k * (n - 1) / (p + 1)]).collect();
        (lambdas, gammas)
    }
}

/// Searches `r` slightly above 1 for a strictly convex arc `Γ` of
/// `|Φ| = r` inside the cone of the base arc, together with `ε`, such that
///
/// - `|Φ| < r` on `conv(Γ ∪ {0}) \ Γ` (sampled);
/// - `Σ_{k=1}^{j} Γ/m ⊂ Ω` for `1 ≤ j < m`;
/// - `Λ + Σ_{k=1}^{j} Γ/m ⊂ Ω` for `1 ≤ j < m`, and `Λ ⊂ Ω`,
///
/// with `Ω` the base region. The base region is assumed to pass the
/// hypothesis at level 1. Returns the first success in grid order.
pub fn inflate_arc(
    phi: &impl Holomorphic,
    base: &SectorRegion,
    m: u32,
    search: &InflateSearch,
) -> Result<Inflation, CriterionError> {
    let mut attempts = Vec::new();
    for &r in &search.r_grid {
        match attempt(phi, base, m, r, search) {
            Ok(found) => return Ok(found),
            Err(reason) => attempts.push(format!("r = {r}: {reason}")),
        }
    }
    Err(CriterionError::NotFound { attempts })
}

fn attempt(
    phi: &impl Holomorphic,
    base: &SectorRegion,
    m: u32,
    r: f64,
    search: &InflateSearch,
) -> Result<Inflation, String> {
    let (theta1, theta2) = base.arg_range();
    let margin = search.trim * (theta2 - theta1);
    let (lo, hi) = (theta1 + margin, theta2 - margin);
    let mid = 0.5 * (theta1 + theta2);
    let seed = seed_outside(phi, base, mid, r)?;
    let in_cone = |z: C64| {
        let t = z.arg();
        t >= lo && t <= hi
    };
    let opts = TraceOptions::with_step(search.step);
    let traced = trace_both(phi, seed, r, &opts, &|z| !in_cone(z)).map_err(|e| e.to_string())?;
    let kept: Vec<C64> = traced.points.into_iter().filter(|&z| in_cone(z)).collect();
    let arc = LevelArc::from_points(r, kept);
    let region = validate_arc(&arc).map_err(|e| format!("arc at level r rejected: {e}"))?;
    let mut report = check_hypothesis(phi, &region, r, search.grid, search.margin_floor);
    if report.verdict != Verdict::Pass {
        return Err(format!("hypothesis at level r is {}", report.verdict));
    }

    let points = arc_samples(region.arc(), search.arc_samples);
    let mut sums_by_j: Vec<Vec<C64>> = Vec::new();
    for j in 1..m {
        let sums = minkowski_sums(&points, j, m);
        if let Some(bad) = sums.iter().find(|&&w| !base.contains(w)) {
            return Err(format!("sum condition fails for j = {j} at {bad}"));
        }
        sums_by_j.push(sums);
    }

    let (g1, g2) = region.arg_range();
    let mut last_failure = String::from("empty eps grid");
    for k in search.eps_halvings.clone() {
        let eps = region.min_radius() * 0.5f64.powi(k as i32);
        let lambda = LambdaSector { eps, arg_range: (g1, g2) };
        let lambda_pts = lambda.samples(search.lambda_grid);
        if let Some(bad) = lambda_pts.iter().find(|&&w| !base.contains(w)) {
            last_failure = format!("Λ ⊄ Ω at eps = {eps} ({bad})");
            continue;
        }
        let failing_j = sums_by_j
            .iter()
            .position(|sums| sums.par_iter().any(|&s| lambda_pts.iter().any(|&l| !base.contains(l + s))));
        if let Some(idx) = failing_j {
            last_failure = format!("Λ + sums fails for j = {} at eps = {eps}", idx + 1);
            continue;
        }
        report.minkowski_ok = Some(vec![true; sums_by_j.len()]);
        report.chosen = Some(Chosen { r, eps });
        return Ok(Inflation {
            r,
            eps,
            arc: region.arc().clone(),
            region,
            lambda,
            report,
            minkowski_samples: sums_by_j.into_iter().flatten().collect(),
        });
    }
    Err(last_failure)
}

/// The first point beyond the base arc on the ray at `θ` where `|Φ| = r`.
fn seed_outside(phi: &impl Holomorphic, base: &SectorRegion, theta: f64, r: f64) -> Result<C64, String> {
    let rho = base.rho_at(theta).ok_or("mid ray outside the base region")?;
    let dir = C64::from_polar(1.0, theta);
    let mut lo = rho;
    for k in 1..=4000 {
        let hi = rho * (1.0 + 1e-3 * k as f64);
        if phi.value(dir * hi).norm() >= r {
            return find_seed(phi, r, theta, (lo, hi)).map_err(|e| e.to_string());
        }
        lo = hi;
    }
    Err(format!("no crossing of level {r} beyond the base arc"))
}

/// `n` points of the arc evenly spread by index, endpoints included.
fn arc_samples(arc: &LevelArc, n: usize) -> Vec<C64> {
    let len = arc.len();
    let n = n.clamp(2, len);
    (0..n).map(|k| arc.points[k * (len - 1) / (n - 1)]).collect()
}

/// All sums `(w₁ + … + w_j)/m` over multisets of the sample points.
fn minkowski_sums(points: &[C64], j: u32, m: u32) -> Vec<C64> {
    let mut n = points.len();
    while n > 2 && multiset_count(n, j as usize) > MAX_SUMS {
        n -= 1;
    }
    let pts: Vec<C64> = (0..n).map(|k| points[k * (points.len() - 1) / (n - 1).max(1)]).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; j as usize];
    loop {
        let s: C64 = idx.iter().map(|&i| pts[i]).sum();
        out.push(s / m as f64);
        // Next non-decreasing index tuple.
        let Some(pos) = idx.iter().rposition(|&i| i + 1 < n) else { break };
        let next = idx[pos] + 1;
        for slot in &mut idx[pos..] {
            *slot = next;
        }
    }
    out
}

fn multiset_count(n: usize, j: usize) -> usize {
    let mut acc: usize = 1;
    for i in 0..j {
        acc = acc.saturating_mul(n + i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

    use super::super::tests::{cos_arc, unit_arc};
    use super::*;
    use crate::symbol::Symbol;

    #[test]
    fn multisets() {
        let pts = [C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(4.0, 0.0)];
        let sums = minkowski_sums(&pts, 2, 1);
        assert_eq!(sums.len(), 6);
        assert_eq!(multiset_count(3, 2), 6);
        let mut re: Vec<f64> = sums.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert_eq!(re, vec![2.0, 3.0, 4.0, 5.0, 6.0, 8.0]);
    }

    #[test]
    fn identity_inflates_at_first_level() {
        let id = Symbol::polynomial(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let base = validate_arc(&unit_arc(FRAC_PI_6, FRAC_PI_3, 400)).unwrap();
        let found = inflate_arc(&id, &base, 2, &InflateSearch::default()).unwrap();
        assert_eq!(found.r, 1.0625);
        assert!(found.arc.points.iter().all(|z| (z.norm() - 1.0625).abs() < 1e-10));
        for s in &found.minkowski_samples {
            assert!((s.norm() - 1.0625 / 2.0).abs() < 1e-9);
        }
        assert_eq!(found.report.minkowski_ok, Some(vec![true]));
        let chosen = found.report.chosen.unwrap();
        assert!(chosen.eps > 0.0 && chosen.r > 1.0);
    }

    #[test]
    fn m_one_has_no_sum_conditions() {
        let id = Symbol::polynomial(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let base = validate_arc(&unit_arc(FRAC_PI_6, FRAC_PI_3, 400)).unwrap();
        let found = inflate_arc(&id, &base, 1, &InflateSearch::default()).unwrap();
        assert!(found.minkowski_samples.is_empty());
        assert_eq!(found.report.minkowski_ok, Some(vec![]));
    }

    #[test]
    fn cos_inflates_for_m_three() {
        let base = validate_arc(&cos_arc(0.1, PI - 0.1)).unwrap();
        let found = inflate_arc(&Symbol::cos(), &base, 3, &InflateSearch::default()).unwrap();
        assert!(found.r > 1.0);
        assert_eq!(found.report.verdict, Verdict::Pass);
        for w in &found.minkowski_samples {
            assert!(base.contains(*w));
        }
        let (lambdas, gammas) = found.frequencies(2);
        for l in &lambdas {
            assert!(found.lambda.contains(*l) && base.contains(*l));
        }
        for g in &gammas {
            assert!((Symbol::cos().eval(*g).norm() - found.r).abs() < 1e-10);
        }
    }

    #[test]
    fn impossible_grid_reports_every_attempt() {
        let id = Symbol::polynomial(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let base = validate_arc(&unit_arc(FRAC_PI_6, FRAC_PI_3, 400)).unwrap();
        // At r = 2.5 the sums Γ/2 leave the unit sector.
        let search = InflateSearch { r_grid: vec![2.5, 3.0], ..InflateSearch::default() };
        match inflate_arc(&id, &base, 2, &search) {
            Err(CriterionError::NotFound { attempts }) => {
                assert_eq!(attempts.len(), 2);
                assert!(attempts[0].contains("j = 1"));
            }
            other => panic!("{other:?}"),
        }
    }
}
