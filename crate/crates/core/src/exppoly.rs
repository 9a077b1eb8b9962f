//! Finite exponential sums `Σ cₖ e^{μₖ z}`.
//!
//! Exponentials are eigenfunctions of every convolution operator, so this is
//! the arithmetic substrate of the witness construction: products add
//! exponents, powers expand by multinomials, and `Φ(D)^q` rescales each
//! coefficient by `Φ(μₖ)^q`.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symbol::Symbol;
use crate::C64;

/// Default exponent merge tolerance (absolute complex distance).
pub const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpPolyError {
    #[error("multinomial coefficient for power {power} exceeds the exact integer range")]
    MultinomialOverflow { power: u32 },
    #[error("power must be at least 1")]
    ZeroPower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub exponent: C64,
    pub coeff: C64,
}

impl Term {
    pub fn new(exponent: C64, coeff: C64) -> Self {
        Term { exponent, coeff }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeff * (self.exponent * z).exp()
    }
}

/// A canonical exponential sum.
///
/// Canonical means: no two exponents within the merge tolerance, no zero
/// coefficient, and terms sorted by exponent (real part, then imaginary part).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpPoly {
    terms: Vec<Term>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::exponential(C64::new(0.0, 0.0), c)
    }

    /// `c · e^{μz}`.
    pub fn exponential(exponent: C64, coeff: C64) -> Self {
        Self::canonicalize([(exponent, coeff)], MERGE_TOL)
    }

    /// Merges exponents within `tol`, drops zero coefficients and sorts.
    pub fn canonicalize(raw: impl IntoIterator<Item = (C64, C64)>, tol: f64) -> Self {
        let mut raw: Vec<Term> = raw.into_iter().map(|(e, c)| Term::new(e, c)).collect();
        raw.sort_by(|a, b| exponent_order(a.exponent, b.exponent));
        let mut merged: Vec<Term> = Vec::with_capacity(raw.len());
        for term in raw {
            let mut slot = None;
            for (idx, existing) in merged.iter().enumerate().rev() {
                if existing.exponent.re < term.exponent.re - tol {
                    break;
                }
                if (existing.exponent - term.exponent).norm() <= tol {
                    slot = Some(idx);
                }
            }
            match slot {
                Some(idx) => merged[idx].coeff += term.coeff,
                None => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff != C64::new(0.0, 0.0));
        ExpPoly { terms: merged }
    }

    pub fn from_terms(raw: impl IntoIterator<Item = (C64, C64)>) -> Self {
        Self::canonicalize(raw, MERGE_TOL)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Coefficient of `e^{μz}` (zero when absent).
    pub fn coefficient_of(&self, exponent: C64, tol: f64) -> C64 {
        self.terms.iter().filter(|t| (t.exponent - exponent).norm() <= tol).map(|t| t.coeff).sum()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.terms.iter().map(|t| t.eval(z)).sum()
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).map(|t| (t.exponent, t.coeff)))
    }

    pub fn scale(&self, c: C64) -> ExpPoly {
        Self::from_terms(self.terms.iter().map(|t| (t.exponent, t.coeff * c)))
    }

    pub fn multiply(&self, other: &ExpPoly) -> ExpPoly {
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                raw.push((a.exponent + b.exponent, a.coeff * b.coeff));
            }
        }
        Self::from_terms(raw)
    }

    /// `f^j` together with the per-multiindex ledger `(j choose ℓ) cˡ`.
    ///
    /// The multiindex of each ledger entry counts how often each term of
    /// `self` (in canonical order) is used; it is stored in the `u` slot.
    pub fn power_multinomial(&self, j: u32) -> Result<(ExpPoly, Vec<LedgerEntry>), ExpPolyError> {
        let ledger = power_multinomial_split(&self.terms, &[], j, |idx| {
            idx.u.iter().zip(&self.terms).map(|(&k, t)| t.exponent * k as f64).sum()
        })?;
        let sum = ledger_sum(&ledger);
        Ok((sum, ledger))
    }

    /// `Φ(D)^q f`: each coefficient picks up `Φ(μₖ)^q`.
    pub fn apply_symbol_power(&self, phi: &Symbol, q: u32) -> ExpPoly {
        Self::from_terms(self.terms.iter().map(|t| (t.exponent, t.coeff * phi.eval(t.exponent).powu(q))))
    }

    /// `Σ |cₖ| e^{|μₖ| ρ}`, an upper bound for the sup norm on `D(0, ρ)`.
    pub fn crude_bound(&self, rho: f64) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm() * (t.exponent.norm() * rho).exp()).sum()
    }

    /// Sampled sup norm on the closed disk `D(0, ρ)` over an
    /// `n_samples × n_samples` polar grid, paired with [`Self::crude_bound`].
    pub fn sup_norm_on_disk(&self, rho: f64, n_samples: usize) -> DiskNorm {
        assert!(rho > 0.0, "disk radius must be positive");
        assert!(n_samples >= 8, "at least 8 samples per axis");
        let sampled = (0..n_samples)
            .into_par_iter()
            .map(|i| {
                let radius = rho * i as f64 / (n_samples - 1) as f64;
                (0..n_samples)
                    .map(|k| {
                        let angle = std::f64::consts::TAU * k as f64 / n_samples as f64;
                        self.eval(C64::from_polar(radius, angle)).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        DiskNorm { sampled, crude: self.crude_bound(rho) }
    }
}

fn exponent_order(a: C64, b: C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::add(self, rhs)
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::add(self, &-rhs)
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        self.multiply(rhs)
    }
}

/// Sup norm on a disk: sampled value and certified upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskNorm {
    pub sampled: f64,
    pub crude: f64,
}

/// Split multiindex `ℓ = (u, v)`; `|ℓ| = Σuₖ + Σvₖ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multiindex {
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

impl Multiindex {
    pub fn order(&self) -> u32 {
        self.u.iter().sum::<u32>() + self.v.iter().sum::<u32>()
    }

    pub fn u_order(&self) -> u32 {
        self.u.iter().sum()
    }

    pub fn v_order(&self) -> u32 {
        self.v.iter().sum()
    }

    /// `Some(k)` when `u = 0` and `v = m eₖ`.
    pub fn pure_power(&self, m: u32) -> Option<usize> {
        if self.u_order() != 0 {
            return None;
        }
        let mut hit = None;
        for (k, &vk) in self.v.iter().enumerate() {
            match vk {
                0 => {}
                x if x == m && hit.is_none() => hit = Some(k),
                _ => return None,
            }
        }
        hit
    }

    /// Membership in `𝓛*_m`: `|u| ≠ 0` or `v ∉ {m e₁, …, m e_p}`.
    pub fn is_starred(&self, m: u32) -> bool {
        self.pure_power(m).is_none()
    }

    /// `j! / (u₁!⋯u_p! v₁!⋯v_p!)` in exact integer arithmetic.
    pub fn multinomial(&self) -> Option<u128> {
        let mut total: u128 = 1;
        let mut running: u64 = 0;
        for &k in self.u.iter().chain(self.v.iter()) {
            running += k as u64;
            total = total.checked_mul(binomial(running, k as u64)?)?;
        }
        Some(total)
    }
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc · (n − i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// One term of a multinomial expansion, keyed by its multiindex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub index: Multiindex,
    pub multinomial: u128,
    #[serde(with = "crate::literal::serde_complex")]
    pub exponent: C64,
    #[serde(with = "crate::literal::serde_complex")]
    pub value: C64,
}

/// Expands `(Σ u_terms + Σ v_terms)^j` term by term.
///
/// Exponents come from `exponent_of`, so callers can key each exponent by a
/// single arithmetic expression of the multiindex.
pub fn power_multinomial_split(
    u_terms: &[Term],
    v_terms: &[Term],
    j: u32,
    exponent_of: impl Fn(&Multiindex) -> C64,
) -> Result<Vec<LedgerEntry>, ExpPolyError> {
    if j == 0 {
        return Err(ExpPolyError::ZeroPower);
    }
    let p_u = u_terms.len();
    let parts = p_u + v_terms.len();
    // The balanced multiindex carries the largest coefficient.
    if parts > 0 {
        let base = j / parts as u32;
        let extra = (j % parts as u32) as usize;
        let balanced: Vec<u32> = (0..parts).map(|k| base + u32::from(k < extra)).collect();
        if (Multiindex { u: balanced, v: Vec::new() }).multinomial().is_none() {
            return Err(ExpPolyError::MultinomialOverflow { power: j });
        }
    }
    let mut ledger = Vec::new();
    for counts in compositions(j, p_u + v_terms.len()) {
        let index = Multiindex { u: counts[..p_u].to_vec(), v: counts[p_u..].to_vec() };
        let multinomial = index.multinomial().ok_or(ExpPolyError::MultinomialOverflow { power: j })?;
        let mut value = C64::new(multinomial as f64, 0.0);
        for (term, &k) in u_terms.iter().chain(v_terms.iter()).zip(&counts) {
            if k > 0 {
                value *= term.coeff.powu(k);
            }
        }
        let exponent = exponent_of(&index);
        ledger.push(LedgerEntry { index, multinomial, exponent, value });
    }
    Ok(ledger)
}

/// Groups a ledger by exponent into a canonical sum.
pub fn ledger_sum(ledger: &[LedgerEntry]) -> ExpPoly {
    ExpPoly::from_terms(ledger.iter().map(|e| (e.exponent, e.value)))
}

/// All vectors of `parts` non-negative integers summing to `total`, in
/// lexicographically decreasing order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(rest: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=rest).rev() {
            prefix.push(k);
            go(rest - k, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    re_exp: f64,
    im_exp: f64,
    re_coef: f64,
    im_coef: f64,
}

impl Serialize for ExpPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|t| TermRecord {
                re_exp: t.exponent.re,
                im_exp: t.exponent.im,
                re_coef: t.coeff.re,
                im_coef: t.coeff.im,
            })
            .collect();
        records.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExpPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        Ok(ExpPoly::from_terms(
            records.into_iter().map(|r| (C64::new(r.re_exp, r.im_exp), C64::new(r.re_coef, r.im_coef))),
        ))
    }
}
