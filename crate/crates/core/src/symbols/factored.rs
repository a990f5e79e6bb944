use serde::{Deserialize, Serialize};

use super::{interior_grid, Analytic, BlaschkeProduct, BlaschkeZero, RationalOuter, SingularInner};
use crate::poly::{roots_in_disk, Polynomial};
use crate::{Error, Result, C64};

/// `B · S_μ · F`, any part possibly trivial.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FactoredSymbol {
    pub blaschke: BlaschkeProduct,
    pub singular: SingularInner,
    pub outer: RationalOuter,
}

impl FactoredSymbol {
    pub fn new(blaschke: BlaschkeProduct, singular: SingularInner, outer: RationalOuter) -> Self {
        Self {
            blaschke,
            singular,
            outer,
        }
    }

    pub fn from_blaschke(b: BlaschkeProduct) -> Self {
        Self {
            blaschke: b,
            ..Self::default()
        }
    }

    pub fn from_singular(s: SingularInner) -> Self {
        Self {
            singular: s,
            ..Self::default()
        }
    }

    pub fn from_outer(f: RationalOuter) -> Self {
        Self {
            outer: f,
            ..Self::default()
        }
    }

    /// Inner up to a unimodular constant: the outer part has no factors and
    /// a constant of modulus one.
    pub fn is_inner(&self, tol: f64) -> bool {
        self.outer.is_unimodular_constant(tol)
    }

    pub fn is_constant(&self) -> bool {
        self.blaschke.is_constant() && self.singular.is_trivial() && !self.outer.has_factors()
    }

    /// Multiply by `e^{iθ}` (applied to the Blaschke rotation).
    pub fn rotated(&self, theta: f64) -> Self {
        Self {
            blaschke: self.blaschke.rotated(theta),
            ..self.clone()
        }
    }

    /// `B · S_μ` alone.
    pub fn inner_part(&self, z: C64) -> C64 {
        self.blaschke.eval(z) * self.singular.eval(z)
    }
}

impl Analytic for FactoredSymbol {
    fn eval(&self, z: C64) -> C64 {
        let mut v = self.outer.eval(z);
        if !self.blaschke.is_constant() || self.blaschke.rotation() != 0.0 {
            v *= self.blaschke.eval(z);
        }
        if !self.singular.is_trivial() {
            v *= self.singular.eval(z);
        }
        v
    }

    fn derivative(&self, z: C64) -> C64 {
        let (b, s, f) = (self.blaschke.eval(z), self.singular.eval(z), self.outer.eval(z));
        self.blaschke.derivative(z) * s * f
            + b * self.singular.derivative(z) * f
            + b * s * self.outer.derivative(z)
    }

    fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.blaschke.is_constant() {
            parts.push(self.blaschke.describe());
        }
        if !self.singular.is_trivial() {
            parts.push(self.singular.describe());
        }
        if !self.outer.is_trivial() {
            parts.push(self.outer.describe());
        }
        if parts.is_empty() {
            return "constant 1".into();
        }
        parts.join(" × ")
    }
}

/// A polynomial zero that fell within the boundary band and was kept in the
/// outer part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryZeroWarning {
    pub zero: C64,
    pub multiplicity: usize,
    pub modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub blaschke: BlaschkeProduct,
    pub outer: RationalOuter,
    pub warnings: Vec<BoundaryZeroWarning>,
}

impl Factorization {
    pub fn symbol(&self) -> FactoredSymbol {
        FactoredSymbol::new(self.blaschke.clone(), SingularInner::default(), self.outer.clone())
    }
}

/// Split `P` into `B · F`. Interior zeros `α` go to `B` as
/// `(α − z)/(1 − ᾱz)` factors with `(1 − ᾱz)` moved to `F`; each such factor
/// contributes a sign `−1` to the outer constant. Zeros with `||z| − 1| ≤ tol`
/// stay in `F` and are reported.
pub fn factor_polynomial(p: &Polynomial, tol: f64) -> Result<Factorization> {
    let lead = p.leading().ok_or(Error::ZeroPolynomial)?;
    let rs = p.roots()?;
    let part = roots_in_disk(&rs, tol);

    let mut origin = 0usize;
    let mut zeros = Vec::new();
    let mut conj = Vec::new();
    let mut sign = 1.0;
    for r in &part.inside {
        if r.value.norm() <= 1e-14 {
            origin += r.multiplicity;
            continue;
        }
        zeros.push(BlaschkeZero {
            alpha: r.value,
            multiplicity: r.multiplicity,
        });
        conj.extend(std::iter::repeat_n(r.value, r.multiplicity));
        if r.multiplicity % 2 == 1 {
            sign = -sign;
        }
    }
    let mut exterior = Vec::new();
    let mut warnings = Vec::new();
    for r in &part.boundary {
        warnings.push(BoundaryZeroWarning {
            zero: r.value,
            multiplicity: r.multiplicity,
            modulus: r.value.norm(),
        });
        exterior.extend(std::iter::repeat_n(r.value, r.multiplicity));
    }
    for r in &part.outside {
        exterior.extend(std::iter::repeat_n(r.value, r.multiplicity));
    }

    let blaschke = BlaschkeProduct::new(0.0, origin, zeros)?;
    let outer = RationalOuter::new(lead * sign, conj, exterior)?;
    let out = Factorization {
        blaschke,
        outer,
        warnings,
    };

    let sym = out.symbol();
    let grid = interior_grid();
    let scale = grid.iter().map(|&z| p.eval(z).norm()).fold(1.0, f64::max);
    let defect = grid
        .iter()
        .map(|&z| (p.eval(z) - sym.eval(z)).norm())
        .fold(0.0, f64::max);
    if defect > 1e-6 * scale {
        return Err(Error::ResidualFailure(format!(
            "factorization round-trip defect {defect:e}"
        )));
    }
    Ok(out)
}
