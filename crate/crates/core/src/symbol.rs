//! Operator symbols: entire functions `Φ` of exponential type.
//!
//! A symbol is either a polynomial or one of a small closed catalog (`cos`,
//! `sin`, `z·e^z`, `e^z`, `e^z − a`), possibly precomposed with a homothety
//! `z ↦ a z`. Each symbol carries a type bound `(M, R)` with
//! `|aₙ| ≤ M Rⁿ / n!` for its Taylor coefficients.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::literal::{format_complex, parse_complex, parse_list};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("the zero polynomial is not an operator symbol")]
    ZeroSymbol,
    #[error("homothety factor must be non-zero")]
    ZeroHomothety,
    #[error("truncation order {n_trunc} is below the polynomial degree {degree}")]
    TruncationTooShort { n_trunc: usize, degree: usize },
    #[error("power is only available for polynomial symbols")]
    NotPolynomial,
    #[error("invalid symbol literal `{0}`")]
    Parse(String),
}

/// Something that can be evaluated together with its complex derivative.
pub trait Holomorphic: Sync {
    fn value(&self, z: C64) -> C64;
    fn derivative(&self, z: C64) -> C64;
}

impl<T: Holomorphic + ?Sized> Holomorphic for &T {
    fn value(&self, z: C64) -> C64 {
        (**self).value(z)
    }
    fn derivative(&self, z: C64) -> C64 {
        (**self).derivative(z)
    }
}

/// Dense complex polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    /// `∏ (z − rootₖ)`, scaled by `lead`.
    pub fn from_roots(roots: &[C64], lead: C64) -> Self {
        let mut p = Polynomial::new(vec![lead]);
        for &root in roots {
            p = p.mul(&Polynomial::new(vec![-root, C64::new(1.0, 0.0)]));
        }
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_derivative(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (n, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * n as f64;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(n, &c)| c * n as f64).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::new(Vec::new());
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn powi(&self, n: u32) -> Polynomial {
        (0..n).fold(Polynomial::new(vec![C64::new(1.0, 0.0)]), |acc, _| acc.mul(self))
    }
}

impl Holomorphic for Polynomial {
    fn value(&self, z: C64) -> C64 {
        self.eval(z)
    }
    fn derivative(&self, z: C64) -> C64 {
        self.eval_derivative(z)
    }
}

/// Growth bound `|aₙ| ≤ m · rⁿ / n!`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeBound {
    pub m: f64,
    pub r: f64,
}

impl TypeBound {
    pub fn admits(&self, n: usize, coeff: C64) -> bool {
        let bound = self.m * self.r.powi(n as i32) * inv_factorial(n);
        coeff.norm() <= bound * (1.0 + 1e-12)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolKind {
    Polynomial(Polynomial),
    Cos,
    Sin,
    /// `z e^z`
    ZExp,
    Exp,
    /// `e^z − a`
    ExpMinus(C64),
    /// `base(a z)`
    Scaled(Box<Symbol>, C64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    kind: SymbolKind,
    bound: TypeBound,
}

impl Symbol {
    pub fn polynomial(coeffs: Vec<C64>) -> Result<Self, SymbolError> {
        Self::from_polynomial(Polynomial::new(coeffs))
    }

    pub fn from_polynomial(p: Polynomial) -> Result<Self, SymbolError> {
        if p.is_zero() {
            return Err(SymbolError::ZeroSymbol);
        }
        // With R = 1 the tightest M is max |aₙ| n!.
        let m = p.coeffs().iter().enumerate().map(|(n, c)| c.norm() / inv_factorial(n)).fold(0.0, f64::max);
        Ok(Symbol { kind: SymbolKind::Polynomial(p), bound: TypeBound { m, r: 1.0 } })
    }

    pub fn cos() -> Self {
        Symbol { kind: SymbolKind::Cos, bound: TypeBound { m: 1.0, r: 1.0 } }
    }

    pub fn sin() -> Self {
        Symbol { kind: SymbolKind::Sin, bound: TypeBound { m: 1.0, r: 1.0 } }
    }

    pub fn zexp() -> Self {
        Symbol { kind: SymbolKind::ZExp, bound: TypeBound { m: 1.0, r: 2.0 } }
    }

    pub fn exp() -> Self {
        Symbol { kind: SymbolKind::Exp, bound: TypeBound { m: 1.0, r: 1.0 } }
    }

    pub fn exp_minus(a: C64) -> Self {
        let m = (C64::new(1.0, 0.0) - a).norm().max(1.0);
        Symbol { kind: SymbolKind::ExpMinus(a), bound: TypeBound { m, r: 1.0 } }
    }

    /// `(9^{9/8} / 8) · z (z⁸ − 1)`, whose unit level set is a rose.
    pub fn rose() -> Self {
        let c = 9f64.powf(9.0 / 8.0) / 8.0;
        let mut coeffs = vec![C64::new(0.0, 0.0); 10];
        coeffs[1] = C64::new(-c, 0.0);
        coeffs[9] = C64::new(c, 0.0);
        Self::polynomial(coeffs).expect("non-zero")
    }

    /// `(a₀ + a₁ zᵏ)ⁿ`.
    pub fn binomial_power(a0: C64, a1: C64, k: usize, n: u32) -> Result<Self, SymbolError> {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[0] += a0;
        coeffs[k] += a1;
        Self::from_polynomial(Polynomial::new(coeffs).powi(n))
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn type_bound(&self) -> TypeBound {
        self.bound
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &self.kind {
            SymbolKind::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        match &self.kind {
            SymbolKind::Polynomial(p) => p.eval(z),
            SymbolKind::Cos => z.cos(),
            SymbolKind::Sin => z.sin(),
            SymbolKind::ZExp => z * z.exp(),
            SymbolKind::Exp => z.exp(),
            SymbolKind::ExpMinus(a) => z.exp() - a,
            SymbolKind::Scaled(base, a) => base.eval(a * z),
        }
    }

    pub fn eval_derivative(&self, z: C64) -> C64 {
        match &self.kind {
            SymbolKind::Polynomial(p) => p.eval_derivative(z),
            SymbolKind::Cos => -z.sin(),
            SymbolKind::Sin => z.cos(),
            SymbolKind::ZExp => (z + 1.0) * z.exp(),
            SymbolKind::Exp | SymbolKind::ExpMinus(_) => z.exp(),
            SymbolKind::Scaled(base, a) => a * base.eval_derivative(a * z),
        }
    }

    /// Exact `n`-th Taylor coefficient at the origin.
    pub fn taylor_coeff(&self, n: usize) -> C64 {
        let real = |x: f64| C64::new(x, 0.0);
        match &self.kind {
            SymbolKind::Polynomial(p) => p.coeffs().get(n).copied().unwrap_or_default(),
            SymbolKind::Cos => {
                if n.is_multiple_of(2) {
                    real(sign(n / 2) * inv_factorial(n))
                } else {
                    real(0.0)
                }
            }
            SymbolKind::Sin => {
                if n % 2 == 1 {
                    real(sign((n - 1) / 2) * inv_factorial(n))
                } else {
                    real(0.0)
                }
            }
            SymbolKind::ZExp => {
                if n == 0 {
                    real(0.0)
                } else {
                    real(inv_factorial(n - 1))
                }
            }
            SymbolKind::Exp => real(inv_factorial(n)),
            SymbolKind::ExpMinus(a) => {
                if n == 0 {
                    C64::new(1.0, 0.0) - a
                } else {
                    real(inv_factorial(n))
                }
            }
            SymbolKind::Scaled(base, a) => base.taylor_coeff(n) * a.powi(n as i32),
        }
    }

    /// `Φ_a(z) = Φ(a z)`.
    pub fn homothety_conjugate(&self, a: C64) -> Result<Symbol, SymbolError> {
        if a == C64::new(0.0, 0.0) {
            return Err(SymbolError::ZeroHomothety);
        }
        let bound = TypeBound { m: self.bound.m, r: self.bound.r * a.norm() };
        Ok(Symbol { kind: SymbolKind::Scaled(Box::new(self.clone()), a), bound })
    }

    /// `Σₙ aₙ p⁽ⁿ⁾` for a polynomial `p` given lowest degree first.
    ///
    /// The sum is finite because `p⁽ⁿ⁾ = 0` past its degree; `n_trunc` must
    /// cover that degree.
    pub fn apply_to_taylor(&self, p: &[C64], n_trunc: usize) -> Result<Vec<C64>, SymbolError> {
        let degree = p.len().saturating_sub(1);
        if n_trunc < degree {
            return Err(SymbolError::TruncationTooShort { n_trunc, degree });
        }
        let symbol_coeffs: Vec<C64> = (0..=degree).map(|n| self.taylor_coeff(n)).collect();
        let mut out = vec![C64::new(0.0, 0.0); p.len()];
        for (k, slot) in out.iter_mut().enumerate() {
            // Coefficient of z^k in p⁽ⁿ⁾ is p_{k+n} (k+n)!/k!.
            let mut falling = 1.0;
            for n in 0..p.len() - k {
                if n > 0 {
                    falling *= (k + n) as f64;
                }
                *slot += symbol_coeffs[n] * p[k + n] * falling;
            }
        }
        Ok(out)
    }

    /// Polynomial power `Φⁿ`.
    pub fn powi(&self, n: u32) -> Result<Symbol, SymbolError> {
        match &self.kind {
            SymbolKind::Polynomial(p) => Self::from_polynomial(p.powi(n)),
            _ => Err(SymbolError::NotPolynomial),
        }
    }
}

impl Holomorphic for Symbol {
    fn value(&self, z: C64) -> C64 {
        self.eval(z)
    }
    fn derivative(&self, z: C64) -> C64 {
        self.eval_derivative(z)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SymbolKind::Polynomial(p) => {
                let items: Vec<String> = p.coeffs().iter().map(|c| format_complex(*c)).collect();
                write!(f, "poly:[{}]", items.join(","))
            }
            SymbolKind::Cos => f.write_str("cos"),
            SymbolKind::Sin => f.write_str("sin"),
            SymbolKind::ZExp => f.write_str("zexp"),
            SymbolKind::Exp => f.write_str("exp"),
            SymbolKind::ExpMinus(a) => write!(f, "exp-a:{}", format_complex(*a)),
            SymbolKind::Scaled(base, a) => write!(f, "scaled:{}:{}", base, format_complex(*a)),
        }
    }
}

impl FromStr for Symbol {
    type Err = SymbolError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        let bad = || SymbolError::Parse(text.to_string());
        match text {
            "cos" => return Ok(Symbol::cos()),
            "sin" => return Ok(Symbol::sin()),
            "zexp" => return Ok(Symbol::zexp()),
            "exp" => return Ok(Symbol::exp()),
            "rose" => return Ok(Symbol::rose()),
            _ => {}
        }
        if let Some(rest) = text.strip_prefix("exp-a:") {
            return parse_complex(rest).map(Symbol::exp_minus).map_err(|_| bad());
        }
        if let Some(rest) = text.strip_prefix("poly:") {
            let items = parse_list(rest).ok_or_else(bad)?;
            let coeffs =
                items.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
            return Symbol::polynomial(coeffs);
        }
        if let Some(rest) = text.strip_prefix("scaled:") {
            let (base, a) = rest.rsplit_once(':').ok_or_else(bad)?;
            let a = parse_complex(a).map_err(|_| bad())?;
            return base.parse::<Symbol>()?.homothety_conjugate(a);
        }
        Err(bad())
    }
}

pub(crate) fn inv_factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc / k as f64)
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}
