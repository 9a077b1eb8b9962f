//! The explicit witness construction.
//!
//! Given `A = Σ aₖ e^{λₖ z/m}` and a target `B = Σ bₖ e^{γₖ z}` with
//! `|Φ(γₖ)| = r > 1`, set `R_q = Σ cₖ e^{γₖ z/m}` with `cₖ^m Φ(γₖ)^q = bₖ`.
//! Expanding `(A + R_q)^j` over multiindices `ℓ = (u, v)` gives terms
//!
//! ```text
//! U_{j,ℓ} = (j choose ℓ) aᵘ cᵛ Φ((u·λ + v·γ)/m)^q e^{(u·λ + v·γ) z/m}
//! ```
//!
//! and at `j = m` the pure powers `u = 0, v = m eₖ` reproduce `B` exactly.
//! Everything else decays geometrically in `q` when the frequencies sit in
//! the region supplied by the criterion, so `R_q → 0`,
//! `Φ(D)^q (A + R_q)^j → 0` for `j < m` and `Φ(D)^q (A + R_q)^m → B`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criterion::{PipelineOutcome, SectorRegion};
use crate::exppoly::{
    compositions, power_multinomial_split, DiskNorm, ExpPoly, ExpPolyError, Multiindex, Term, MERGE_TOL,
};
use crate::levelset::LevelArc;
use crate::literal::{format_complex, parse_complex, serde_complex, serde_complex_vec};
use crate::symbol::Symbol;
use crate::C64;

/// Allowed `||Φ(γₖ)| − r|`.
const LEVEL_TOL: f64 = 1e-8;

/// Sample grid per axis for sampled sup norms.
const NORM_SAMPLES: usize = 48;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error("m and p must be at least 1")]
    EmptyProblem,
    #[error("lambda, gamma, a and b must all have length p")]
    LengthMismatch,
    #[error("level r = {r} must exceed 1")]
    LevelNotAboveOne { r: f64 },
    #[error("|Phi(gamma_{k})| differs from r by {residual:e}")]
    NotOnLevel { k: usize, residual: f64 },
    #[error("gamma_{i} and gamma_{k} coincide")]
    FrequenciesNotDistinct { i: usize, k: usize },
    #[error("mixed frequency {frequency} of multiindex {index:?} is outside the region")]
    OutsideRegion { index: Multiindex, frequency: C64 },
    #[error("decay factor {factor} >= 1 for multiindex {index:?} at j = {j}")]
    DecayNotBelowOne { j: u32, index: Multiindex, factor: f64 },
    #[error("Phi(gamma_{k}) = 0")]
    EigenvalueZero { k: usize },
    #[error("eps must be positive")]
    InvalidTolerance,
    #[error("no q <= {q_max} met the tolerance; slowest multiindex {slowest:?} at j = {j} decays by {factor} per step")]
    NotReached { q_max: u32, j: u32, slowest: Multiindex, factor: f64 },
    #[error(transparent)]
    ExpPoly(#[from] ExpPolyError),
    #[error("invalid problem: {0}")]
    Invalid(String),
}

/// Choice of `m`-th root per coefficient: `cₖ` is the principal root times
/// `e^{2πi sₖ/m}`. Missing entries mean `sₖ = 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RootBranch {
    pub shifts: Vec<u32>,
}

/// Data of the construction. See the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessProblem {
    phi: Symbol,
    m: u32,
    r: f64,
    lambda: Vec<C64>,
    gamma: Vec<C64>,
    a: Vec<C64>,
    b: Vec<C64>,
    region: Option<SectorRegion>,
}

/// Geometric factor of one multiindex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRate {
    pub j: u32,
    pub index: Multiindex,
    pub factor: f64,
}

/// One term `U_{j,ℓ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UTerm {
    pub j: u32,
    pub index: Multiindex,
    #[serde(with = "serde_complex")]
    pub exponent: C64,
    #[serde(with = "serde_complex")]
    pub value: C64,
}

/// The norms of one `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub q: u32,
    /// `‖R_q‖` on `D(0, ρ)`.
    pub r_norm: DiskNorm,
    /// `‖Φ(D)^q (A + R_q)^j‖` for `j = 1..m−1`.
    pub powers: Vec<DiskNorm>,
    /// `‖Φ(D)^q (A + R_q)^m − B‖`.
    pub residual: DiskNorm,
    /// Every `U_{j,ℓ}`, `j = 1..m`, pure powers at `j = m` included.
    pub terms: Vec<UTerm>,
}

impl WitnessStep {
    /// Whether every crude bound is at most `eps`.
    pub fn certified(&self, eps: f64) -> bool {
        self.r_norm.crude <= eps && self.powers.iter().all(|n| n.crude <= eps) && self.residual.crude <= eps
    }
}

/// Steps `q = 1, 2, …` on the disk `D(0, ρ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessTrace {
    pub rho: f64,
    pub steps: Vec<WitnessStep>,
}

/// On-disk form of a problem; complex numbers are text literals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub symbol: String,
    pub m: u32,
    pub r: f64,
    #[serde(with = "serde_complex_vec")]
    pub lambda: Vec<C64>,
    #[serde(with = "serde_complex_vec")]
    pub gamma: Vec<C64>,
    #[serde(with = "serde_complex_vec")]
    pub a: Vec<C64>,
    #[serde(with = "serde_complex_vec")]
    pub b: Vec<C64>,
    /// Samples of the level-1 base arc; when present, membership is checked
    /// against its region.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_arc: Option<Vec<String>>,
}

impl ProblemFile {
    /// A problem for the symbol and arc found by the criterion pipeline:
    /// `p` frequencies `λₖ` in `Λ` and `γₖ` on the inflated arc, with
    /// `aₖ = bₖ = 1`. `None` when the outcome has no inflation.
    pub fn from_outcome(outcome: &PipelineOutcome, m: u32, p: usize) -> Option<ProblemFile> {
        let inflation = outcome.inflation.as_ref()?;
        let chosen = outcome.chosen.as_ref()?;
        let (lambda, gamma) = inflation.frequencies(p);
        let one = vec![C64::new(1.0, 0.0); p];
        let base = chosen.arc.scaled(chosen.rotation.conj());
        Some(ProblemFile {
            symbol: outcome.symbol.to_string(),
            m,
            r: inflation.r,
            lambda,
            gamma,
            a: one.clone(),
            b: one,
            base_arc: Some(base.points.iter().map(|z| format_complex(*z)).collect()),
        })
    }
}

impl WitnessProblem {
    /// Validates and builds a problem.
    ///
    /// With a region, every mixed frequency `(u·λ + v·γ)/m` with `j < m`,
    /// and with `|u| ≠ 0` at `j = m`, must lie in it. Without one, the same
    /// frequencies must satisfy `|Φ| < 1`, which is what membership is used
    /// for. In both cases every decay factor must be below 1.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        phi: Symbol,
        m: u32,
        r: f64,
        lambda: Vec<C64>,
        gamma: Vec<C64>,
        a: Vec<C64>,
        b: Vec<C64>,
        region: Option<SectorRegion>,
    ) -> Result<Self, WitnessError> {
        let p = gamma.len();
        if m == 0 || p == 0 {
            return Err(WitnessError::EmptyProblem);
        }
        if lambda.len() != p || a.len() != p || b.len() != p {
            return Err(WitnessError::LengthMismatch);
        }
        if !(r > 1.0) {
            return Err(WitnessError::LevelNotAboveOne { r });
        }
        for (k, g) in gamma.iter().enumerate() {
            let residual = (phi.eval(*g).norm() - r).abs();
            if residual > LEVEL_TOL {
                return Err(WitnessError::NotOnLevel { k, residual });
            }
        }
        for i in 0..p {
            for k in i + 1..p {
                if (gamma[i] - gamma[k]).norm() <= MERGE_TOL {
                    return Err(WitnessError::FrequenciesNotDistinct { i, k });
                }
            }
        }
        let problem = WitnessProblem { phi, m, r, lambda, gamma, a, b, region };
        for j in 1..=m {
            for index in problem.multiindices(j) {
                if j == m && index.u_order() == 0 {
                    continue;
                }
                let frequency = problem.mixed_frequency(&index);
                let inside = match &problem.region {
                    Some(region) => region.contains(frequency),
                    None => problem.phi.eval(frequency).norm() < 1.0,
                };
                if !inside {
                    return Err(WitnessError::OutsideRegion { index, frequency });
                }
            }
        }
        if let Some(bad) = problem.decay_rates().into_iter().find(|d| !(d.factor < 1.0)) {
            return Err(WitnessError::DecayNotBelowOne { j: bad.j, index: bad.index, factor: bad.factor });
        }
        Ok(problem)
    }

    /// Reads a [`ProblemFile`].
    pub fn from_file(file: &ProblemFile) -> Result<Self, WitnessError> {
        let phi: Symbol = file.symbol.parse().map_err(|e| WitnessError::Invalid(format!("{e}")))?;
        let region = match &file.base_arc {
            None => None,
            Some(texts) => {
                let points = texts
                    .iter()
                    .map(|t| parse_complex(t))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| WitnessError::Invalid(e.to_string()))?;
                let arc = LevelArc::from_points(1.0, points);
                Some(
                    crate::criterion::validate_arc(&arc)
                        .map_err(|e| WitnessError::Invalid(format!("base arc: {e}")))?,
                )
            }
        };
        Self::new(
            phi,
            file.m,
            file.r,
            file.lambda.clone(),
            file.gamma.clone(),
            file.a.clone(),
            file.b.clone(),
            region,
        )
    }

    pub fn symbol(&self) -> &Symbol {
        &self.phi
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn p(&self) -> usize {
        self.gamma.len()
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn region(&self) -> Option<&SectorRegion> {
        self.region.as_ref()
    }

    /// `A = Σ aₖ e^{λₖ z/m}`.
    pub fn a_poly(&self) -> ExpPoly {
        let m = self.m as f64;
        ExpPoly::from_terms(self.lambda.iter().zip(&self.a).map(|(l, a)| (l / m, *a)))
    }

    /// `B = Σ bₖ e^{γₖ z}`.
    pub fn b_poly(&self) -> ExpPoly {
        ExpPoly::from_terms(self.gamma.iter().zip(&self.b).map(|(g, b)| (*g, *b)))
    }

    /// All `ℓ = (u, v)` with `|ℓ| = j`.
    pub fn multiindices(&self, j: u32) -> Vec<Multiindex> {
        let p = self.p();
        compositions(j, 2 * p)
            .into_iter()
            .map(|c| Multiindex { u: c[..p].to_vec(), v: c[p..].to_vec() })
            .collect()
    }

    /// `(u·λ + v·γ)/m`.
    pub fn mixed_frequency(&self, index: &Multiindex) -> C64 {
        let dot = |w: &[u32], z: &[C64]| -> C64 { w.iter().zip(z).map(|(&k, z)| z * k as f64).sum() };
        (dot(&index.u, &self.lambda) + dot(&index.v, &self.gamma)) / self.m as f64
    }

    /// `|Φ((u·λ + v·γ)/m)| / r^{|v|/m}` for every `ℓ ∈ 𝓛_j`, `j < m`, and
    /// every `ℓ ∈ 𝓛*_m`.
    pub fn decay_rates(&self) -> Vec<DecayRate> {
        let mut out = Vec::new();
        for j in 1..=self.m {
            for index in self.multiindices(j) {
                if j == self.m && !index.is_starred(self.m) {
                    continue;
                }
                let value = self.phi.eval(self.mixed_frequency(&index)).norm();
                let factor = value / self.r.powf(index.v_order() as f64 / self.m as f64);
                out.push(DecayRate { j, index, factor });
            }
        }
        out
    }

    /// `cₖ` with `cₖ^m Φ(γₖ)^q = bₖ`.
    pub fn root_coefficients(&self, q: u32, branch: &RootBranch) -> Result<Vec<C64>, WitnessError> {
        let m = self.m as f64;
        self.gamma
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(k, (g, b))| {
                let eig = self.phi.eval(*g);
                if eig.norm() == 0.0 {
                    return Err(WitnessError::EigenvalueZero { k });
                }
                if b.norm() == 0.0 {
                    return Ok(C64::new(0.0, 0.0));
                }
                // Principal root of b/Φ(γ)^q, kept in log form against overflow.
                let log_modulus = b.norm().ln() - q as f64 * eig.norm().ln();
                let arg = (b.arg() - q as f64 * eig.arg() + PI).rem_euclid(2.0 * PI) - PI;
                let shift = branch.shifts.get(k).copied().unwrap_or(0) as f64;
                Ok(C64::from_polar((log_modulus / m).exp(), (arg + 2.0 * PI * shift) / m))
            })
            .collect()
    }

    /// `R_q = Σ cₖ e^{γₖ z/m}`.
    pub fn build_r(&self, q: u32, branch: &RootBranch) -> Result<ExpPoly, WitnessError> {
        let c = self.root_coefficients(q, branch)?;
        let m = self.m as f64;
        Ok(ExpPoly::from_terms(self.gamma.iter().zip(c).map(|(g, c)| (g / m, c))))
    }

    /// All `U_{j,ℓ}` at power `q`.
    pub fn u_terms(&self, j: u32, q: u32, branch: &RootBranch) -> Result<Vec<UTerm>, WitnessError> {
        let m = self.m as f64;
        let c = self.root_coefficients(q, branch)?;
        let u_terms: Vec<Term> = self.lambda.iter().zip(&self.a).map(|(l, a)| Term::new(l / m, *a)).collect();
        let v_terms: Vec<Term> = self.gamma.iter().zip(&c).map(|(g, c)| Term::new(g / m, *c)).collect();
        let ledger = power_multinomial_split(&u_terms, &v_terms, j, |idx| self.mixed_frequency(idx))?;
        Ok(ledger
            .into_iter()
            .map(|e| UTerm {
                j,
                value: e.value * self.phi.eval(e.exponent).powu(q),
                exponent: e.exponent,
                index: e.index,
            })
            .collect())
    }

    /// Norms of `R_q`, of `Φ(D)^q (A + R_q)^j` for `j < m`, and of the
    /// `j = m` residual `Σ_{ℓ ∈ 𝓛*_m} U_{m,ℓ}` on `D(0, ρ)`.
    ///
    /// The pure powers cancel `B` identically, so the residual is formed from
    /// the starred terms alone rather than by floating-point subtraction.
    pub fn push_forward(&self, q: u32, rho: f64, branch: &RootBranch) -> Result<WitnessStep, WitnessError> {
        let r_norm = self.build_r(q, branch)?.sup_norm_on_disk(rho, NORM_SAMPLES);
        let mut powers = Vec::new();
        let mut terms = Vec::new();
        for j in 1..=self.m {
            let us = self.u_terms(j, q, branch)?;
            let kept =
                us.iter().filter(|u| j < self.m || u.index.is_starred(self.m)).map(|u| (u.exponent, u.value));
            let norm = ExpPoly::from_terms(kept).sup_norm_on_disk(rho, NORM_SAMPLES);
            if j < self.m {
                powers.push(norm);
            } else {
                terms.extend(us);
                return Ok(WitnessStep { q, r_norm, powers, residual: norm, terms });
            }
            terms.extend(us);
        }
        unreachable!("the loop returns at j = m")
    }

    /// Smallest `q ≤ q_max` whose crude bounds are all at most `eps`, with
    /// the trace of every step up to it.
    pub fn find_q(&self, eps: f64, rho: f64, q_max: u32) -> Result<(u32, WitnessTrace), WitnessError> {
        if !(eps > 0.0) {
            return Err(WitnessError::InvalidTolerance);
        }
        let branch = RootBranch::default();
        let mut steps = Vec::new();
        let chunk = rayon::current_num_threads().max(1) as u32 * 2;
        let mut start = 1;
        while start <= q_max {
            let end = (start + chunk - 1).min(q_max);
            let batch: Vec<WitnessStep> = (start..=end)
                .into_par_iter()
                .map(|q| self.push_forward(q, rho, &branch))
                .collect::<Result<_, _>>()?;
            for step in batch {
                let done = step.certified(eps);
                let q = step.q;
                steps.push(step);
                if done {
                    return Ok((q, WitnessTrace { rho, steps }));
                }
            }
            start = end + 1;
        }
        let slowest =
            self.decay_rates().into_iter().max_by(|x, y| x.factor.total_cmp(&y.factor)).expect("m, p >= 1");
        Err(WitnessError::NotReached { q_max, j: slowest.j, slowest: slowest.index, factor: slowest.factor })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn identity() -> Symbol {
        Symbol::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    fn id_problem() -> WitnessProblem {
        WitnessProblem::new(
            identity(),
            2,
            1.5,
            vec![c(0.1, 0.0)],
            vec![c(0.0, 1.5)],
            vec![c(1.0, 0.0)],
            vec![c(1.0, 0.0)],
            None,
        )
        .unwrap()
    }

    #[test]
    fn root_modulus() {
        let p = id_problem();
        let cs = p.root_coefficients(10, &RootBranch::default()).unwrap();
        assert!((cs[0].norm() - 1.5f64.powi(-5)).abs() < 1e-12);
        let eig = identity().eval(c(0.0, 1.5));
        let back = cs[0].powu(2) * eig.powu(10);
        assert!((back - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn m_one_is_a_direct_solve() {
        let gamma = c(0.0, 1.5);
        let p = WitnessProblem::new(
            identity(),
            1,
            1.5,
            vec![c(0.1, 0.0)],
            vec![gamma],
            vec![c(1.0, 0.0)],
            vec![c(2.0, 1.0)],
            None,
        )
        .unwrap();
        let r = p.build_r(3, &RootBranch::default()).unwrap();
        let expect = c(2.0, 1.0) / gamma.powu(3);
        assert!((r.terms()[0].coeff - expect).norm() < 1e-14);
        let step = p.push_forward(3, 1.0, &RootBranch::default()).unwrap();
        assert!(step.powers.is_empty());
        // Only the A term survives: a Φ(λ)^3 = 0.1^3.
        assert!((step.residual.crude - 0.1f64.powi(3) * 0.1f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn r_norm_decreases() {
        let p = id_problem();
        let norms: Vec<f64> = (1..=30)
            .map(|q| p.build_r(q, &RootBranch::default()).unwrap().sup_norm_on_disk(1.0, 16).sampled)
            .collect();
        for w in norms.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert!(norms[29] < 1e-2);
    }

    #[test]
    fn cross_term_matches_hand_formula() {
        let p = id_problem();
        let us = p.u_terms(2, 10, &RootBranch::default()).unwrap();
        let cross = us.iter().find(|u| u.index.u == vec![1] && u.index.v == vec![1]).unwrap();
        let hand = 2.0 * 1.5f64.powi(-5) * c(0.05, 0.75).norm().powi(10);
        assert!((cross.value.norm() - hand).abs() < 1e-12);
        let j1 = p.u_terms(1, 10, &RootBranch::default()).unwrap();
        let a_term = j1.iter().find(|u| u.index.u == vec![1]).unwrap();
        let r_term = j1.iter().find(|u| u.index.v == vec![1]).unwrap();
        assert!((a_term.value.norm() - 0.05f64.powi(10)).abs() < 1e-20);
        assert!((r_term.value.norm() - 1.5f64.powi(-5) * 0.75f64.powi(10)).abs() < 1e-12);
    }

    #[test]
    fn decay_factors() {
        let p = id_problem();
        let rates = p.decay_rates();
        let find = |j: u32, u: u32, v: u32| {
            rates.iter().find(|d| d.j == j && d.index.u == vec![u] && d.index.v == vec![v]).map(|d| d.factor)
        };
        assert!((find(1, 0, 1).unwrap() - 0.75 / 1.5f64.sqrt()).abs() < 1e-12);
        assert!((find(2, 1, 1).unwrap() - c(0.05, 0.75).norm() / 1.5f64.sqrt()).abs() < 1e-12);
        assert!(find(2, 0, 2).is_none());
        assert!(rates.iter().all(|d| d.factor < 1.0));
    }

    #[test]
    fn pure_powers_cancel_b() {
        let p = id_problem();
        for q in [1, 7, 40] {
            let us = p.u_terms(2, q, &RootBranch::default()).unwrap();
            let full = ExpPoly::from_terms(us.iter().map(|u| (u.exponent, u.value)));
            let diff = &full - &p.b_poly();
            assert!(diff.coefficient_of(c(0.0, 1.5), 1e-12).norm() <= 1e-10);
        }
    }

    #[test]
    fn find_q_certifies() {
        let (q, trace) = id_problem().find_q(1e-6, 1.0, 200).unwrap();
        assert_eq!(trace.steps.len() as u32, q);
        let last = trace.steps.last().unwrap();
        assert!(last.certified(1e-6));
        assert!(!trace.steps[trace.steps.len() - 2].certified(1e-6));
        // ‖R_q‖ ≤ 1.5^{−q/2} e^{0.75} dominates.
        assert_eq!(q, 72);
        assert_eq!(id_problem().find_q(100.0, 1.0, 200).unwrap().0, 1);
    }

    #[test]
    fn not_reached_names_slowest() {
        match id_problem().find_q(1e-6, 1.0, 10) {
            Err(WitnessError::NotReached { slowest, j, .. }) => {
                assert_eq!(j, 2);
                assert_eq!(slowest, Multiindex { u: vec![1], v: vec![1] });
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn outside_region_rejected() {
        // λ = 3 gives |Φ(λ/2)| = 1.5 ≥ 1.
        let err = WitnessProblem::new(
            identity(),
            2,
            1.5,
            vec![c(3.0, 0.0)],
            vec![c(0.0, 1.5)],
            vec![c(1.0, 0.0)],
            vec![c(1.0, 0.0)],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, WitnessError::OutsideRegion { .. }));
    }

    #[test]
    fn gamma_off_level_rejected() {
        let err = WitnessProblem::new(
            identity(),
            2,
            1.5,
            vec![c(0.1, 0.0)],
            vec![c(0.0, 1.4)],
            vec![c(1.0, 0.0)],
            vec![c(1.0, 0.0)],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, WitnessError::NotOnLevel { .. }));
    }

    #[test]
    fn branch_changes_phase_only() {
        let p = id_problem();
        let principal = p.root_coefficients(5, &RootBranch::default()).unwrap();
        let other = p.root_coefficients(5, &RootBranch { shifts: vec![1] }).unwrap();
        assert!((principal[0] + other[0]).norm() < 1e-14);
        let a = p.u_terms(2, 5, &RootBranch::default()).unwrap();
        let b = p.u_terms(2, 5, &RootBranch { shifts: vec![1] }).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.value.norm() - y.value.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn cos_problem_from_the_criterion() {
        use crate::criterion::{check_symbol, PipelineOptions};
        let outcome = check_symbol(&Symbol::cos(), &PipelineOptions::default());
        let file = ProblemFile::from_outcome(&outcome, 2, 1).unwrap();
        let problem = WitnessProblem::from_file(&file).unwrap();
        assert!(problem.region().is_some());
        let slowest = problem.decay_rates().iter().map(|d| d.factor).fold(0.0, f64::max);
        assert!(slowest < 1.0);
        let (q, trace) = problem.find_q(1e-3, 0.5, 4000).unwrap();
        assert!(trace.steps[q as usize - 1].certified(1e-3));
    }

    #[test]
    fn problem_file_round_trip() {
        let text =
            r#"{"symbol":"poly:[0,1]","m":2,"r":1.5,"lambda":["0.1"],"gamma":["1.5i"],"a":["1"],"b":["1"]}"#;
        let file: ProblemFile = serde_json::from_str(text).unwrap();
        let p = WitnessProblem::from_file(&file).unwrap();
        assert_eq!(p, id_problem());
        let again: ProblemFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(again, file);
    }
}
