//! Trapezoidal rule on circles.
//!
//! For integrands analytic in an annulus around the contour the periodic
//! trapezoidal rule converges geometrically in the number of nodes.

use crate::C64;

/// `(1 / 2πi) ∮_{|z − center| = radius} f(z) dz` with `n` equispaced nodes.
pub fn circle_integral(center: C64, radius: f64, n: usize, f: impl Fn(C64) -> C64) -> C64 {
    assert!(n > 0, "need at least one node");
    // dz = i (z − center) dθ, and the 1/(2πi) cancels against i·2π/n.
    let sum: C64 = circle_nodes(center, radius, n).map(|(z, offset)| f(z) * offset).sum();
    sum / n as f64
}

/// Nodes `center + radius·e^{2πik/n}` paired with their offsets from the center.
pub fn circle_nodes(center: C64, radius: f64, n: usize) -> impl Iterator<Item = (C64, C64)> {
    (0..n).map(move |k| {
        let offset = C64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64);
        (center + offset, offset)
    })
}

/// Smallest `|f|` over the nodes.
pub fn min_modulus_on_circle(center: C64, radius: f64, n: usize, f: impl Fn(C64) -> C64) -> f64 {
    circle_nodes(center, radius, n).map(|(z, _)| f(z).norm()).fold(f64::INFINITY, f64::min)
}
