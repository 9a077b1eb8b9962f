//! Computational companion for hypercyclic algebras of convolution operators.
//!
//! A convolution operator `Φ(D)` on entire functions acts diagonally on
//! exponentials, `Φ(D) e^{λz} = Φ(λ) e^{λz}`. This crate turns the geometric
//! sufficient condition for `Φ(D)` to support a hypercyclic algebra into a
//! numerical check, runs the explicit witness construction behind it, and
//! demonstrates the zero-multiplicity obstruction for weighted composition
//! operators.
//!
//! The pieces, bottom up:
//!
//! - [`exppoly`]: exact algebra of finite exponential sums `Σ cₖ e^{μₖ z}`.
//! - [`symbol`]: the operator symbols `Φ` (polynomials and a closed catalog of
//!   entire functions of exponential type), with homothety conjugation.
//! - [`levelset`]: tracing of `|Φ| = r`, discrete curvature, convexity
//!   certificates and the contour-integral local inverse.
//! - [`criterion`]: sector regions, the sampled hypothesis check, arc
//!   inflation with Minkowski-sum conditions, and arc scanning.
//! - [`witness`]: the `A + R_q` construction and its convergence trace.
//! - [`obstruction`]: argument-principle zero counts and the parity law.
//! - [`render`]: CSV and SVG output.
//!
//! ```
//! use hcalg::symbol::Symbol;
//! use hcalg::C64;
//!
//! let cos: Symbol = "cos".parse().unwrap();
//! let z = C64::new(0.0, std::f64::consts::PI);
//! assert!((cos.eval(z).norm() - std::f64::consts::PI.cosh()).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criterion;
pub mod exppoly;
pub mod geometry;
pub mod levelset;
pub mod literal;
pub mod obstruction;
pub mod quadrature;
pub mod render;
pub mod symbol;
pub mod witness;

pub use num_complex::Complex64 as C64;

pub use crate::criterion::{CriterionReport, SectorRegion, Verdict};
pub use crate::exppoly::{ExpPoly, Multiindex};
pub use crate::levelset::LevelArc;
pub use crate::symbol::Symbol;
pub use crate::witness::{WitnessProblem, WitnessTrace};

// Book chapters are compiled as doctests so the snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exppoly.md")]
    mod exppoly {}
    #[doc = include_str!("../../../book/src/symbols.md")]
    mod symbols {}
    #[doc = include_str!("../../../book/src/levelsets.md")]
    mod levelsets {}
    #[doc = include_str!("../../../book/src/criterion.md")]
    mod criterion {}
    #[doc = include_str!("../../../book/src/witness.md")]
    mod witness {}
    #[doc = include_str!("../../../book/src/obstruction.md")]
    mod obstruction {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
