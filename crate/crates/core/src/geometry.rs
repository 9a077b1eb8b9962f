//! Planar predicates on complex numbers viewed as points.

use crate::C64;

pub fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Twice the signed area of the triangle `(a, b, c)`; positive when
/// counterclockwise.
pub fn orient(a: C64, b: C64, c: C64) -> f64 {
    cross(b - a, c - a)
}

/// Whether the open segments `(p1, p2)` and `(q1, q2)` cross at a single
/// interior point of both.
pub fn segments_cross(p1: C64, p2: C64, q1: C64, q2: C64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Convex hull by Andrew's monotone chain, counterclockwise, without
/// collinear points.
pub fn convex_hull(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<C64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &C64>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Whether `p` lies in the closed convex hull of `points`.
pub fn hull_contains(points: &[C64], p: C64) -> bool {
    let hull = convex_hull(points);
    match hull.len() {
        0 => false,
        1 => hull[0] == p,
        2 => {
            orient(hull[0], hull[1], p) == 0.0 && {
                let t = (p - hull[0]).re * (hull[1] - hull[0]).re + (p - hull[0]).im * (hull[1] - hull[0]).im;
                t >= 0.0 && t <= (hull[1] - hull[0]).norm_sqr()
            }
        }
        n => (0..n).all(|i| orient(hull[i], hull[(i + 1) % n], p) >= 0.0),
    }
}

/// Argument in `[0, 2π)`.
pub fn arg0(z: C64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hull_of_square_with_interior() {
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.5, 0.5), c(0.5, 0.0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(hull_contains(&pts, c(0.2, 0.9)));
        assert!(hull_contains(&pts, c(1.0, 0.5)));
        assert!(!hull_contains(&pts, c(1.1, 0.5)));
    }

    #[test]
    fn crossing() {
        assert!(segments_cross(c(0.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)));
        assert!(!segments_cross(c(0.0, 0.0), c(1.0, 1.0), c(1.0, 1.0), c(2.0, 0.0)));
        assert!(!segments_cross(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)));
    }

    #[test]
    fn arguments() {
        assert_eq!(arg0(c(1.0, 0.0)), 0.0);
        assert!((arg0(c(0.0, -1.0)) - 1.5 * std::f64::consts::PI).abs() < 1e-15);
    }
}
