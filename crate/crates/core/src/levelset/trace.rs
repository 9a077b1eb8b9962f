use crate::symbol::Holomorphic;
use crate::C64;

use super::{LevelArc, LevelSetError, Termination, TRACE_TOL};

/// `|∇(|Φ|²)|` below this is treated as a critical point.
const CRITICAL_GRAD: f64 = 1e-8;

/// Predictor–corrector settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Nominal arclength step of the predictor.
    pub step: f64,
    pub max_points: usize,
    /// Halving the step below this ends the trace.
    pub min_step: f64,
    /// Newton stopping tolerance on `||Φ| − r|`, relative to `max(1, r)`.
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Largest tangent rotation accepted between consecutive samples (radians).
    pub max_turn: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: 0.01,
            max_points: 20_000,
            min_step: 1e-7,
            newton_tol: 1e-12,
            max_newton: 20,
            max_turn: 0.3,
        }
    }
}

impl TraceOptions {
    pub fn with_step(step: f64) -> Self {
        TraceOptions { step, ..Self::default() }
    }
}

#[derive(Debug)]
enum CorrectorFailure {
    Critical(C64),
    NoConvergence,
}

/// Unit tangent with the sublevel set on the left.
fn unit_tangent(phi: &impl Holomorphic, z: C64) -> Option<C64> {
    let grad = phi.value(z) * phi.derivative(z).conj();
    let norm = grad.norm();
    if 2.0 * norm < CRITICAL_GRAD {
        None
    } else {
        Some(C64::new(0.0, 1.0) * grad / norm)
    }
}

/// Newton iteration on `|Φ| − r` along `∇|Φ|`.
fn correct(
    phi: &impl Holomorphic,
    mut z: C64,
    level: f64,
    opts: &TraceOptions,
) -> Result<C64, CorrectorFailure> {
    let tol = opts.newton_tol * level.max(1.0);
    for _ in 0..=opts.max_newton {
        let value = phi.value(z);
        let deriv = phi.derivative(z);
        let modulus = value.norm();
        let residual = modulus - level;
        if residual.abs() <= tol {
            return Ok(z);
        }
        if 2.0 * modulus * deriv.norm() < CRITICAL_GRAD {
            return Err(CorrectorFailure::Critical(z));
        }
        // ∇|Φ| as a complex number is Φ·conj(Φ′)/|Φ|, of length |Φ′|.
        let grad = value * deriv.conj() / modulus;
        z -= grad * (residual / deriv.norm_sqr());
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(CorrectorFailure::NoConvergence);
        }
    }
    let residual = (phi.value(z).norm() - level).abs();
    if residual <= TRACE_TOL {
        Ok(z)
    } else {
        Err(CorrectorFailure::NoConvergence)
    }
}

/// Projects a nearby point onto `|Φ| = r`.
pub fn correct_onto_level(
    phi: &impl Holomorphic,
    z: C64,
    level: f64,
    opts: &TraceOptions,
) -> Result<C64, LevelSetError> {
    match correct(phi, z, level, opts) {
        Ok(z) => Ok(z),
        Err(CorrectorFailure::Critical(at)) => Err(LevelSetError::CriticalPoint { at }),
        Err(CorrectorFailure::NoConvergence) => {
            Err(LevelSetError::SeedNotConverged { residual: (phi.value(z).norm() - level).abs() })
        }
    }
}

/// Locates `t* e^{iθ}` with `|Φ| = r` on a ray segment by bisection and a
/// Newton polish.
pub fn find_seed(
    phi: &impl Holomorphic,
    level: f64,
    theta: f64,
    t_range: (f64, f64),
) -> Result<C64, LevelSetError> {
    let dir = C64::from_polar(1.0, theta);
    seed_on_line(phi, level, C64::new(0.0, 0.0), dir, t_range)
        .map_err(|e| e.unwrap_or(LevelSetError::NoRootOnRay { theta }))
}

/// First crossing of the level set on the ray `t e^{iθ}`, `0 < t ≤ t_max`,
/// located on an `n`-point scan and refined with [`find_seed`].
pub fn find_seed_scan(
    phi: &impl Holomorphic,
    level: f64,
    theta: f64,
    t_max: f64,
    n: usize,
) -> Result<C64, LevelSetError> {
    let dir = C64::from_polar(1.0, theta);
    scan_line(phi, level, C64::new(0.0, 0.0), dir, t_max, n)
        .map_err(|e| e.unwrap_or(LevelSetError::NoRootOnRay { theta }))
}

/// Every crossing of the level set on the ray `t e^{iθ}`, `0 < t ≤ t_max`,
/// in order of increasing `t`. Crossings that fail to refine (for example at
/// a critical point) are returned as errors in place.
pub fn find_seeds_scan(
    phi: &impl Holomorphic,
    level: f64,
    theta: f64,
    t_max: f64,
    n: usize,
) -> Vec<Result<C64, LevelSetError>> {
    let dir = C64::from_polar(1.0, theta);
    let h = |t: f64| phi.value(dir * t).norm() - level;
    let n = n.max(2);
    let mut out = Vec::new();
    let mut prev = (t_max / n as f64, h(t_max / n as f64));
    for k in 2..=n {
        let t = t_max * k as f64 / n as f64;
        let cur = (t, h(t));
        if prev.1 * cur.1 <= 0.0 && prev.1 != cur.1 {
            out.push(
                seed_on_line(phi, level, C64::new(0.0, 0.0), dir, (prev.0, cur.0))
                    .map_err(|e| e.unwrap_or(LevelSetError::NoRootOnRay { theta })),
            );
        }
        prev = cur;
    }
    out
}

/// First crossing of the level set on the vertical segment
/// `x + iy`, `0 < y ≤ y_max`, for arcs given as graphs over the real axis.
pub fn find_seed_vertical(
    phi: &impl Holomorphic,
    level: f64,
    x: f64,
    y_max: f64,
    n: usize,
) -> Result<C64, LevelSetError> {
    scan_line(phi, level, C64::new(x, 0.0), C64::new(0.0, 1.0), y_max, n)
        .map_err(|e| e.unwrap_or(LevelSetError::NoRootOnLine { x }))
}

/// `Err(None)` means no sign change on the segment.
fn scan_line(
    phi: &impl Holomorphic,
    level: f64,
    origin: C64,
    dir: C64,
    t_max: f64,
    n: usize,
) -> Result<C64, Option<LevelSetError>> {
    let h = |t: f64| phi.value(origin + dir * t).norm() - level;
    let ts: Vec<f64> = (1..=n.max(2)).map(|k| t_max * k as f64 / n.max(2) as f64).collect();
    let mut prev = (ts[0], h(ts[0]));
    for &t in &ts[1..] {
        let cur = (t, h(t));
        if prev.1 * cur.1 <= 0.0 && prev.1 != cur.1 {
            return seed_on_line(phi, level, origin, dir, (prev.0, cur.0));
        }
        prev = cur;
    }
    Err(None)
}

/// Bisection and Newton polish for `|Φ(origin + t·dir)| = r` on `t_range`.
/// `Err(None)` means the bracket has no sign change.
fn seed_on_line(
    phi: &impl Holomorphic,
    level: f64,
    origin: C64,
    dir: C64,
    t_range: (f64, f64),
) -> Result<C64, Option<LevelSetError>> {
    let at = |t: f64| origin + dir * t;
    let h = |t: f64| phi.value(at(t)).norm() - level;
    let (mut lo, mut hi) = t_range;
    let (mut h_lo, h_hi) = (h(lo), h(hi));
    let exact = 1e-14 * level.max(1.0);
    let t_star = if h_lo.abs() <= exact {
        lo
    } else if h_hi.abs() <= exact {
        hi
    } else if h_lo * h_hi > 0.0 || !h_lo.is_finite() || !h_hi.is_finite() {
        return Err(None);
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let h_mid = h(mid);
            if h_mid == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (h_mid < 0.0) == (h_lo < 0.0) {
                lo = mid;
                h_lo = h_mid;
            } else {
                hi = mid;
            }
        }
        let mut t = 0.5 * (lo + hi);
        // Newton along the ray, kept inside the bracket.
        for _ in 0..3 {
            let z = at(t);
            let value = phi.value(z);
            let slope = (value.conj() * phi.derivative(z) * dir).re / value.norm();
            if slope == 0.0 || !slope.is_finite() {
                break;
            }
            let next = t - h(t) / slope;
            if next < lo.min(hi) - 1e-12 || next > lo.max(hi) + 1e-12 {
                break;
            }
            if h(next).abs() < h(t).abs() {
                t = next;
            } else {
                break;
            }
        }
        t
    };
    let z = at(t_star);
    if phi.derivative(z).norm() < CRITICAL_GRAD {
        return Err(Some(LevelSetError::CriticalPoint { at: z }));
    }
    let residual = (phi.value(z).norm() - level).abs();
    if residual > 1e-12 * level.max(1.0) {
        return Err(Some(LevelSetError::SeedNotConverged { residual }));
    }
    Ok(z)
}

/// Traces one branch of `|Φ| = r` from `seed`, sublevel set on the left.
///
/// Ends on `stop` (the triggering sample is kept), at `max_points`, on
/// return to the seed, or when the corrector hits a critical point or
/// cannot converge with the smallest step.
pub fn trace(
    phi: &impl Holomorphic,
    seed: C64,
    level: f64,
    opts: &TraceOptions,
    stop: &dyn Fn(C64) -> bool,
) -> Result<LevelArc, LevelSetError> {
    let (points, tangents, termination) = trace_direction(phi, seed, level, opts, stop, 1.0)?;
    Ok(LevelArc::with_tangents(level, points, tangents, Some(termination)))
}

/// Traces both ways from `seed` and joins the halves into one arc in the
/// forward orientation. `max_points` applies to each direction.
pub fn trace_both(
    phi: &impl Holomorphic,
    seed: C64,
    level: f64,
    opts: &TraceOptions,
    stop: &dyn Fn(C64) -> bool,
) -> Result<LevelArc, LevelSetError> {
    let (fwd, fwd_tan, fwd_end) = trace_direction(phi, seed, level, opts, stop, 1.0)?;
    if fwd_end == Termination::Closed {
        return Ok(LevelArc::with_tangents(level, fwd, fwd_tan, Some(fwd_end)));
    }
    let (bwd, bwd_tan, _) = trace_direction(phi, seed, level, opts, stop, -1.0)?;
    let mut points: Vec<C64> = bwd.iter().rev().copied().collect();
    let mut tangents: Vec<C64> = bwd_tan.iter().rev().map(|t| -t).collect();
    points.extend_from_slice(&fwd[1..]);
    tangents.extend_from_slice(&fwd_tan[1..]);
    Ok(LevelArc::with_tangents(level, points, tangents, Some(fwd_end)))
}

type Branch = (Vec<C64>, Vec<C64>, Termination);

fn trace_direction(
    phi: &impl Holomorphic,
    seed: C64,
    level: f64,
    opts: &TraceOptions,
    stop: &dyn Fn(C64) -> bool,
    direction: f64,
) -> Result<Branch, LevelSetError> {
    let seed = correct_onto_level(phi, seed, level, opts)?;
    let tangent_at = |z: C64| unit_tangent(phi, z).map(|t| t * direction);
    let first_tangent = tangent_at(seed).ok_or(LevelSetError::CriticalPoint { at: seed })?;
    let mut points = vec![seed];
    let mut tangents = vec![first_tangent];
    let mut h = opts.step;
    let mut travelled = 0.0;
    let cos_turn = opts.max_turn.cos();
    let termination = loop {
        if points.len() >= opts.max_points {
            break Termination::MaxPoints;
        }
        let z = points[points.len() - 1];
        let t = tangents[tangents.len() - 1];
        let accepted = match correct(phi, z + t * h, level, opts) {
            Ok(next) => match tangent_at(next) {
                Some(t_next) if (next - z).norm() <= 1.5 * h && (t_next * t.conj()).re >= cos_turn => {
                    Some((next, t_next))
                }
                Some(_) => None,
                None => break Termination::CriticalPoint,
            },
            Err(CorrectorFailure::Critical(_)) => break Termination::CriticalPoint,
            Err(CorrectorFailure::NoConvergence) => None,
        };
        let Some((next, t_next)) = accepted else {
            h *= 0.5;
            if h < opts.min_step {
                break Termination::CorrectorFailed;
            }
            continue;
        };
        travelled += (next - z).norm();
        if travelled > 3.0 * opts.step && (next - seed).norm() < opts.step {
            break Termination::Closed;
        }
        points.push(next);
        tangents.push(t_next);
        h = (2.0 * h).min(opts.step);
        if stop(next) {
            break Termination::Stopped;
        }
    };
    Ok((points, tangents, termination))
}
