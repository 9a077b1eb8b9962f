use crate::quadrature::{circle_integral, min_modulus_on_circle};
use crate::symbol::Holomorphic;
use crate::C64;

use super::LevelSetError;

/// Smallest admissible `min |Φ − w|` on the contour.
const CONTOUR_CLEARANCE: f64 = 1e-6;

/// `g(w)` together with the round-trip residual `|Φ(g(w)) − w|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalInverse {
    pub value: C64,
    pub residual: f64,
}

/// The polar rectangle `{(r₀ + s δ) e^{i(θ₀ + t δ)} : s, t ∈ [−1, 1]}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarRect {
    pub r0: f64,
    pub theta0: f64,
    pub delta: f64,
}

impl PolarRect {
    /// Rectangle centred at `w0 ≠ 0`.
    pub fn around(w0: C64, delta: f64) -> Self {
        PolarRect { r0: w0.norm(), theta0: w0.arg(), delta }
    }

    /// Point at local coordinates `(s, t) ∈ [−1, 1]²`.
    pub fn point(&self, s: f64, t: f64) -> C64 {
        C64::from_polar(self.r0 + s * self.delta, self.theta0 + t * self.delta)
    }

    /// Whether the rectangle stays away from the origin.
    pub fn is_valid(&self) -> bool {
        self.delta > 0.0 && self.r0 > self.delta
    }
}

/// Inverse of `Φ` near `z₀`, `g(w) = (1/2πi) ∮_{|z−z₀|=ρ} z Φ′(z) / (Φ(z) − w) dz`,
/// by the trapezoidal rule on `n_quad` nodes.
///
/// The same quadrature of `Φ′/(Φ − w)` must count exactly one preimage of
/// `w` inside the circle, otherwise the formula does not define an inverse.
pub fn local_inverse(
    phi: &impl Holomorphic,
    z0: C64,
    rho: f64,
    w: C64,
    n_quad: usize,
) -> Result<LocalInverse, LevelSetError> {
    let min = min_modulus_on_circle(z0, rho, n_quad, |z| phi.value(z) - w);
    if min < CONTOUR_CLEARANCE {
        return Err(LevelSetError::ContourTooClose { min });
    }
    let count = circle_integral(z0, rho, n_quad, |z| phi.derivative(z) / (phi.value(z) - w));
    if (count.re - 1.0).abs() > 0.1 || count.im.abs() > 0.1 {
        return Err(LevelSetError::NotUnivalent { count: count.re });
    }
    let value = circle_integral(z0, rho, n_quad, |z| z * phi.derivative(z) / (phi.value(z) - w));
    Ok(LocalInverse { value, residual: (phi.value(value) - w).norm() })
}
