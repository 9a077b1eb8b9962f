//! Zero counting and the multiplicity obstruction.
//!
//! For a weighted composition operator `C_{ω,φ} f = ω · (f ∘ φ)` with a
//! zero-free weight, the `n`-th iterate of a `p`-th power is
//!
//! ```text
//! C_{ω,φ}ⁿ (f^p) = (∏_{j<n} ω ∘ φʲ) · (f ∘ φⁿ)^p,
//! ```
//!
//! whose zeros all have multiplicity divisible by `p`. Zero counts on disks
//! come from the argument principle, evaluated by the trapezoidal rule.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::{circle_integral, min_modulus_on_circle};
use crate::symbol::{Holomorphic, Polynomial};
use crate::C64;

/// Default number of quadrature nodes.
pub const DEFAULT_NODES: usize = 1024;

/// `|f|` on the contour must stay at least this large.
pub const CONTOUR_FLOOR: f64 = 1e-8;

/// Allowed distance of the winding integral from an integer.
pub const INTEGER_TOL: f64 = 0.1;

/// Node count is doubled at most this many times.
const MAX_DOUBLINGS: u32 = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObstructionError {
    #[error("|f| = {min:e} on the contour |z - {center}| = {radius}")]
    ContourHitsZero { center: C64, radius: f64, min: f64 },
    #[error("winding integral {value} is not near an integer with {nodes} nodes")]
    QuadratureInconclusive { value: C64, nodes: usize },
    #[error("the affine map needs a nonzero scale")]
    ZeroScale,
    #[error("radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("power must be at least 1")]
    ZeroPower,
}

/// Number of zeros of `f` in the open disk `D(center, radius)`, counted with
/// multiplicity. Starts from `n_quad` nodes and doubles until the winding
/// integral rounds, within [`INTEGER_TOL`], to the same integer at two
/// consecutive node counts.
pub fn count_zeros(
    f: &impl Holomorphic,
    center: C64,
    radius: f64,
    n_quad: usize,
) -> Result<u32, ObstructionError> {
    if !(radius > 0.0) {
        return Err(ObstructionError::BadRadius(radius));
    }
    let mut nodes = n_quad.max(8);
    let mut value = C64::new(0.0, 0.0);
    let mut previous: Option<f64> = None;
    for _ in 0..=MAX_DOUBLINGS {
        let min = min_modulus_on_circle(center, radius, nodes, |z| f.value(z));
        if !(min >= CONTOUR_FLOOR) {
            return Err(ObstructionError::ContourHitsZero { center, radius, min });
        }
        value = circle_integral(center, radius, nodes, |z| f.derivative(z) / f.value(z));
        let nearest = value.re.round();
        let close = (value - C64::new(nearest, 0.0)).norm() <= INTEGER_TOL && nearest >= 0.0;
        // Under-resolved rules can alias onto a wrong integer; accept only a
        // count that survives one doubling.
        if close && previous == Some(nearest) {
            return Ok(nearest as u32);
        }
        previous = close.then_some(nearest);
        nodes *= 2;
    }
    Err(ObstructionError::QuadratureInconclusive { value, nodes: nodes / 2 })
}

/// `φ(z) = a z + b` with `a ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(with = "crate::literal::serde_complex")]
    scale: C64,
    #[serde(with = "crate::literal::serde_complex")]
    shift: C64,
}

impl AffineMap {
    pub fn new(scale: C64, shift: C64) -> Result<Self, ObstructionError> {
        if scale.norm() == 0.0 || !scale.is_finite() || !shift.is_finite() {
            return Err(ObstructionError::ZeroScale);
        }
        Ok(AffineMap { scale, shift })
    }

    /// `z ↦ z + b`.
    pub fn translation(b: C64) -> Self {
        AffineMap { scale: C64::new(1.0, 0.0), shift: b }
    }

    pub fn scale(&self) -> C64 {
        self.scale
    }

    pub fn shift(&self) -> C64 {
        self.shift
    }

    pub fn apply(&self, z: C64) -> C64 {
        self.scale * z + self.shift
    }

    /// `φⁿ(z) = aⁿ z + b (1 + a + … + a^{n−1})`.
    pub fn iterate(&self, n: u32) -> AffineMap {
        let one = C64::new(1.0, 0.0);
        let an = self.scale.powu(n);
        let geometric = if (self.scale - one).norm() < 1e-8 {
            // Near a = 1 the closed form loses accuracy; the sum is at most n terms.
            (0..n).map(|j| self.scale.powu(j)).sum()
        } else {
            (an - one) / (self.scale - one)
        };
        AffineMap { scale: an, shift: self.shift * geometric }
    }

    /// `φ⁻¹(w) = (w − b)/a`.
    pub fn preimage(&self, w: C64) -> C64 {
        (w - self.shift) / self.scale
    }
}

/// Zero-free weight `ω = e^{Q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpWeight {
    q: Polynomial,
}

impl ExpWeight {
    pub fn new(q: Polynomial) -> Self {
        ExpWeight { q }
    }

    /// `ω ≡ 1`.
    pub fn one() -> Self {
        ExpWeight { q: Polynomial::new(Vec::new()) }
    }

    pub fn exponent(&self) -> &Polynomial {
        &self.q
    }
}

impl Holomorphic for ExpWeight {
    fn value(&self, z: C64) -> C64 {
        self.q.eval(z).exp()
    }
    fn derivative(&self, z: C64) -> C64 {
        self.q.eval_derivative(z) * self.q.eval(z).exp()
    }
}

/// `(∏_{j<n} ω ∘ φʲ) · (f ∘ φⁿ)^power`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitElement {
    pub f: Polynomial,
    pub weight: ExpWeight,
    pub phi: AffineMap,
    pub power: u32,
    pub n: u32,
}

impl OrbitElement {
    /// The weight product `e^{S}` with `S = Σ_{j<n} Q ∘ φʲ`, and `S'`.
    fn weight_log(&self, z: C64) -> (C64, C64) {
        let mut s = C64::new(0.0, 0.0);
        let mut ds = C64::new(0.0, 0.0);
        for j in 0..self.n {
            let pj = self.phi.iterate(j);
            let w = pj.apply(z);
            s += self.weight.q.eval(w);
            ds += self.weight.q.eval_derivative(w) * pj.scale();
        }
        (s, ds)
    }

    /// Preimages under `φⁿ` of the zeros `roots` of `f`.
    pub fn pulled_back(&self, roots: &[C64]) -> Vec<C64> {
        let pn = self.phi.iterate(self.n);
        roots.iter().map(|&r| pn.preimage(r)).collect()
    }
}

impl Holomorphic for OrbitElement {
    fn value(&self, z: C64) -> C64 {
        let (s, _) = self.weight_log(z);
        s.exp() * self.f.eval(self.phi.iterate(self.n).apply(z)).powu(self.power)
    }
    fn derivative(&self, z: C64) -> C64 {
        let (s, ds) = self.weight_log(z);
        let pn = self.phi.iterate(self.n);
        let w = pn.apply(z);
        let fw = self.f.eval(w);
        let p = self.power;
        let fp = fw.powu(p);
        let dfp = if p == 0 {
            C64::new(0.0, 0.0)
        } else {
            fw.powu(p - 1) * self.f.eval_derivative(w) * pn.scale() * p as f64
        };
        s.exp() * (ds * fp + dfp)
    }
}

/// One row of the parity table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityRow {
    #[serde(with = "crate::literal::serde_complex")]
    pub center: C64,
    pub radius: f64,
    pub count: u32,
    pub divisible: bool,
}

/// Zero counts of `C_{ω,φ}ⁿ (f^power)` on each disk `(center, radius)`.
pub fn orbit_power_zero_parity(
    f: &Polynomial,
    weight: &ExpWeight,
    phi: AffineMap,
    power: u32,
    n: u32,
    disks: &[(C64, f64)],
    n_quad: usize,
) -> Result<Vec<ParityRow>, ObstructionError> {
    if power == 0 {
        return Err(ObstructionError::ZeroPower);
    }
    let element = OrbitElement { f: f.clone(), weight: weight.clone(), phi, power, n };
    disks
        .par_iter()
        .map(|&(center, radius)| {
            let count = count_zeros(&element, center, radius, n_quad)?;
            Ok(ParityRow { center, radius, count, divisible: count % power == 0 })
        })
        .collect()
}

/// Lower bound for `inf_g sup_I |g² − c|` over real-valued `g` when `c < 0`:
/// since `g² ≥ 0` pointwise, every `g` misses `c` by at least `|c|` on any
/// nonempty interval. For `c ≥ 0` the bound is the trivial `0`.
pub fn square_range_gap(c: f64, interval: (f64, f64)) -> f64 {
    let _ = interval;
    if c < 0.0 {
        -c
    } else {
        0.0
    }
}
