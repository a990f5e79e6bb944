use serde::{Deserialize, Serialize};

use super::Analytic;
use crate::poly::Polynomial;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeZero {
    pub alpha: C64,
    pub multiplicity: usize,
}

/// Finite Blaschke product, stored as
///
/// ```text
/// B(z) = e^{iρ} z^k ∏ ((α − z) / (1 − ᾱz))^m
/// ```
///
/// with `0 < |α| < 1`. The unimodular phases `|α|/α` of the canonical form
/// are folded into `ρ` by [`BlaschkeProduct::canonical`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    rotation: f64,
    origin_order: usize,
    zeros: Vec<BlaschkeZero>,
}

impl Default for BlaschkeProduct {
    fn default() -> Self {
        Self::trivial()
    }
}

impl BlaschkeProduct {
    /// The constant 1.
    pub fn trivial() -> Self {
        Self {
            rotation: 0.0,
            origin_order: 0,
            zeros: Vec::new(),
        }
    }

    /// `zᵏ`.
    pub fn monomial(k: usize) -> Self {
        Self {
            rotation: 0.0,
            origin_order: k,
            zeros: Vec::new(),
        }
    }

    /// Stored form, no phase normalisation.
    pub fn new(rotation: f64, origin_order: usize, zeros: Vec<BlaschkeZero>) -> Result<Self> {
        for (i, z) in zeros.iter().enumerate() {
            let m = z.alpha.norm();
            if !(m > 0.0 && m < 1.0) || !z.alpha.is_finite() {
                return Err(Error::InvalidSymbol(format!(
                    "blaschke.zeros[{i}]: need 0 < |alpha| < 1, got |alpha| = {m}"
                )));
            }
            if z.multiplicity == 0 {
                return Err(Error::InvalidSymbol(format!(
                    "blaschke.zeros[{i}].mult: multiplicity must be positive"
                )));
            }
        }
        if !rotation.is_finite() {
            return Err(Error::InvalidSymbol("blaschke.rotation is not finite".into()));
        }
        Ok(Self {
            rotation,
            origin_order,
            zeros,
        })
    }

    /// Canonical form `e^{iβ} zᵏ ∏ (|α|/α)(α − z)/(1 − ᾱz)`.
    pub fn canonical(beta: f64, origin_order: usize, zeros: Vec<BlaschkeZero>) -> Result<Self> {
        let phase: f64 = zeros
            .iter()
            .map(|z| z.multiplicity as f64 * z.alpha.arg())
            .sum();
        Self::new(beta - phase, origin_order, zeros)
    }

    /// The symbol-file rule: phases are applied only when a rotation or an
    /// origin zero is given explicitly; otherwise the product is the plain
    /// `∏ (α − z)/(1 − ᾱz)`.
    pub fn from_parts(rotation: f64, origin_order: usize, zeros: Vec<BlaschkeZero>) -> Result<Self> {
        if rotation != 0.0 || origin_order > 0 {
            Self::canonical(rotation, origin_order, zeros)
        } else {
            Self::new(0.0, 0, zeros)
        }
    }

    /// `∏ (αᵢ − z)/(1 − ᾱᵢz)` over the given list, repeats allowed. Exact
    /// zeros at the origin become `−z` factors (origin order plus a π turn).
    pub fn from_zeros(alphas: &[C64]) -> Result<Self> {
        let mut origin = 0usize;
        let mut zeros: Vec<BlaschkeZero> = Vec::new();
        for &a in alphas {
            if a == C64::new(0.0, 0.0) {
                origin += 1;
            } else if let Some(z) = zeros.iter_mut().find(|z| z.alpha == a) {
                z.multiplicity += 1;
            } else {
                zeros.push(BlaschkeZero {
                    alpha: a,
                    multiplicity: 1,
                });
            }
        }
        Self::new(std::f64::consts::PI * origin as f64, origin, zeros)
    }

    /// Blaschke product with the given zeros (values `|w| < 1`, zero allowed)
    /// whose unimodular constant is chosen so it agrees with `target` at a
    /// reference point: `z = 0` when both sides are safely nonzero there,
    /// otherwise `z = 1`, where both are unimodular.
    pub fn fitted(zeros: &[(C64, usize)], target: impl Fn(C64) -> C64) -> Result<Self> {
        let mut origin = 0usize;
        let mut list = Vec::new();
        for &(w, m) in zeros {
            if w.norm() <= 1e-15 {
                origin += m;
            } else {
                list.push(BlaschkeZero {
                    alpha: w,
                    multiplicity: m,
                });
            }
        }
        let base = Self::new(0.0, origin, list)?;
        let zero = C64::new(0.0, 0.0);
        let at0 = base.eval(zero);
        let reference = if at0.norm() > 1e-3 {
            zero
        } else {
            C64::new(1.0, 0.0)
        };
        let ratio = target(reference) / base.eval(reference);
        Ok(Self {
            rotation: ratio.arg(),
            ..base
        })
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn origin_order(&self) -> usize {
        self.origin_order
    }

    pub fn zeros(&self) -> &[BlaschkeZero] {
        &self.zeros
    }

    /// Every zero repeated by multiplicity, origin zeros included.
    pub fn all_zeros(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.origin_order];
        for z in &self.zeros {
            out.extend(std::iter::repeat_n(z.alpha, z.multiplicity));
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.origin_order + self.zeros.iter().map(|z| z.multiplicity).sum::<usize>()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Multiply by `e^{iθ}`.
    pub fn rotated(&self, theta: f64) -> Self {
        Self {
            rotation: self.rotation + theta,
            ..self.clone()
        }
    }

    /// `e^{iρ} zᵏ ∏ (α − z)^m`.
    pub fn numerator(&self) -> Polynomial {
        let mut p = Polynomial::monomial(self.origin_order).scale(C64::from_polar(1.0, self.rotation));
        for z in &self.zeros {
            let f = Polynomial::new(vec![z.alpha, C64::new(-1.0, 0.0)]);
            for _ in 0..z.multiplicity {
                p = &p * &f;
            }
        }
        p
    }

    /// `∏ (1 − ᾱz)^m`.
    pub fn denominator(&self) -> Polynomial {
        let mut q = Polynomial::constant(C64::new(1.0, 0.0));
        for z in &self.zeros {
            let f = Polynomial::new(vec![C64::new(1.0, 0.0), -z.alpha.conj()]);
            for _ in 0..z.multiplicity {
                q = &q * &f;
            }
        }
        q
    }

    /// Evaluation with the `|z| ≤ 1` precondition and a pole guard.
    pub fn try_eval(&self, z: C64) -> Result<C64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::DomainError(format!("|z| = {} > 1", z.norm())));
        }
        for a in &self.zeros {
            if (C64::new(1.0, 0.0) - a.alpha.conj() * z).norm() < 1e-300 {
                return Err(Error::PoleHit(format!("{z}")));
            }
        }
        Ok(self.eval(z))
    }
}

impl Analytic for BlaschkeProduct {
    fn eval(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        let mut v = C64::from_polar(1.0, self.rotation) * z.powu(self.origin_order as u32);
        for a in &self.zeros {
            let f = (a.alpha - z) / (one - a.alpha.conj() * z);
            v *= f.powu(a.multiplicity as u32);
        }
        v
    }

    fn derivative(&self, z: C64) -> C64 {
        let (n, dn) = self.numerator().eval_with_derivative(z);
        let (d, dd) = self.denominator().eval_with_derivative(z);
        (dn * d - n * dd) / (d * d)
    }

    fn describe(&self) -> String {
        format!(
            "finite Blaschke product of degree {} (origin order {}, {} nonzero zeros)",
            self.degree(),
            self.origin_order,
            self.zeros.len()
        )
    }
}
