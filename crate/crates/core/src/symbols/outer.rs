use serde::{Deserialize, Serialize};

use super::Analytic;
use crate::poly::{Polynomial, DEFAULT_BOUNDARY_TOL};
use crate::{Error, Result, C64};

/// Rational outer function `a ∏(1 − ᾱz) ∏(z − β)` with `α ∈ 𝔻` and
/// `|β| ≥ 1`. Despite the name it is a polynomial: the rational outer factors
/// arising from polynomial symbols have no poles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalOuter {
    constant: C64,
    conjugate_factors: Vec<C64>,
    exterior_zeros: Vec<C64>,
}

impl Default for RationalOuter {
    fn default() -> Self {
        Self::trivial()
    }
}

impl RationalOuter {
    pub fn trivial() -> Self {
        Self {
            constant: C64::new(1.0, 0.0),
            conjugate_factors: Vec::new(),
            exterior_zeros: Vec::new(),
        }
    }

    pub fn constant(a: C64) -> Result<Self> {
        Self::new(a, Vec::new(), Vec::new())
    }

    /// Exterior zeros within the boundary band `|β| ≥ 1 − 1e−9` are accepted
    /// (they are where boundary roots of polynomial symbols end up).
    pub fn new(constant: C64, conjugate_factors: Vec<C64>, exterior_zeros: Vec<C64>) -> Result<Self> {
        if constant.norm() == 0.0 || !constant.is_finite() {
            return Err(Error::InvalidSymbol("outer.constant must be nonzero".into()));
        }
        for (i, a) in conjugate_factors.iter().enumerate() {
            if a.norm() >= 1.0 {
                return Err(Error::InvalidSymbol(format!(
                    "outer.conjugate_factors[{i}]: need |alpha| < 1, got {}",
                    a.norm()
                )));
            }
        }
        for (i, b) in exterior_zeros.iter().enumerate() {
            if b.norm() < 1.0 - DEFAULT_BOUNDARY_TOL || !b.is_finite() {
                return Err(Error::InvalidSymbol(format!(
                    "outer.exterior_zeros[{i}]: need |beta| >= 1, got {}",
                    b.norm()
                )));
            }
        }
        Ok(Self {
            constant,
            conjugate_factors,
            exterior_zeros,
        })
    }

    pub fn constant_factor(&self) -> C64 {
        self.constant
    }

    pub fn conjugate_factors(&self) -> &[C64] {
        &self.conjugate_factors
    }

    pub fn exterior_zeros(&self) -> &[C64] {
        &self.exterior_zeros
    }

    pub fn has_factors(&self) -> bool {
        !self.conjugate_factors.is_empty() || !self.exterior_zeros.is_empty()
    }

    /// Identically 1.
    pub fn is_trivial(&self) -> bool {
        !self.has_factors() && self.constant == C64::new(1.0, 0.0)
    }

    /// A constant of modulus one, i.e. the symbol's outer part is trivial up
    /// to rotation.
    pub fn is_unimodular_constant(&self, tol: f64) -> bool {
        !self.has_factors() && (self.constant.norm() - 1.0).abs() <= tol
    }

    pub fn as_polynomial(&self) -> Polynomial {
        let mut p = Polynomial::constant(self.constant);
        for &a in &self.conjugate_factors {
            p = &p * &Polynomial::new(vec![C64::new(1.0, 0.0), -a.conj()]);
        }
        for &b in &self.exterior_zeros {
            p = &p * &Polynomial::new(vec![-b, C64::new(1.0, 0.0)]);
        }
        p
    }

    /// Multiply the constant by `s`.
    pub fn scaled(&self, s: C64) -> Result<Self> {
        Self::new(
            self.constant * s,
            self.conjugate_factors.clone(),
            self.exterior_zeros.clone(),
        )
    }

    /// Principal-branch logarithm of `F` normalised at `z = 0`:
    /// `Log F(0) + Σ log(1 − ᾱz) + Σ log(1 − z/β)`, each term on its
    /// principal branch (analytic for `|z| < 1`).
    pub fn log_branch(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        let mut g = self.eval(C64::new(0.0, 0.0)).ln();
        for &a in &self.conjugate_factors {
            g += (one - a.conj() * z).ln();
        }
        for &b in &self.exterior_zeros {
            g += (one - z / b).ln();
        }
        g
    }
}

impl Analytic for RationalOuter {
    fn eval(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        let mut v = self.constant;
        for &a in &self.conjugate_factors {
            v *= one - a.conj() * z;
        }
        for &b in &self.exterior_zeros {
            v *= z - b;
        }
        v
    }

    fn derivative(&self, z: C64) -> C64 {
        self.as_polynomial().eval_with_derivative(z).1
    }

    fn describe(&self) -> String {
        format!(
            "rational outer function ({} conjugate factors, {} exterior zeros)",
            self.conjugate_factors.len(),
            self.exterior_zeros.len()
        )
    }
}
