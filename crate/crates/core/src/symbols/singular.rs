use serde::{Deserialize, Serialize};

use super::Analytic;
use crate::{Error, Result, C64};

/// Point mass on the unit circle at `e^{i·angle}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub angle: f64,
    pub mass: f64,
}

impl Atom {
    pub fn location(&self) -> C64 {
        C64::from_polar(1.0, self.angle)
    }
}

/// Finite discrete positive measure on 𝕋. Empty means the zero measure.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SingularMeasure {
    atoms: Vec<Atom>,
}

impl SingularMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(Error::InvalidSymbol(format!(
                    "singular.atoms[{i}].mass: must be a positive finite real, got {}",
                    a.mass
                )));
            }
            if !a.angle.is_finite() {
                return Err(Error::InvalidSymbol(format!("singular.atoms[{i}].angle is not finite")));
            }
            for (j, b) in atoms.iter().enumerate().take(i) {
                if (a.location() - b.location()).norm() < 1e-12 {
                    return Err(Error::InvalidSymbol(format!(
                        "singular.atoms[{i}]: same location as atoms[{j}]"
                    )));
                }
            }
        }
        Ok(Self { atoms })
    }

    pub fn single(angle: f64, mass: f64) -> Result<Self> {
        Self::new(vec![Atom { angle, mass }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// `t·μ`; `t = 0` gives the zero measure.
    pub fn scaled(&self, t: f64) -> Self {
        if t == 0.0 {
            return Self::default();
        }
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    angle: a.angle,
                    mass: a.mass * t,
                })
                .collect(),
        }
    }

    /// `Σ mass · (ζ + z)/(ζ − z)`, the Herglotz integral of the measure.
    pub fn herglotz(&self, z: C64) -> C64 {
        self.atoms
            .iter()
            .map(|a| {
                let zeta = a.location();
                (zeta + z) / (zeta - z) * a.mass
            })
            .sum()
    }
}

/// `S_μ(z) = exp(−∫ (ζ + z)/(ζ − z) dμ(ζ))` for a discrete `μ`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SingularInner {
    pub measure: SingularMeasure,
}

impl SingularInner {
    pub fn new(measure: SingularMeasure) -> Self {
        Self { measure }
    }

    pub fn is_trivial(&self) -> bool {
        self.measure.is_zero()
    }

    pub fn try_eval(&self, z: C64) -> Result<C64> {
        if z.norm() >= 1.0 {
            return Err(Error::DomainError(format!(
                "singular inner function evaluated at |z| = {} >= 1",
                z.norm()
            )));
        }
        Ok(self.eval(z))
    }
}

impl Analytic for SingularInner {
    fn eval(&self, z: C64) -> C64 {
        (-self.measure.herglotz(z)).exp()
    }

    fn derivative(&self, z: C64) -> C64 {
        let d: C64 = self
            .measure
            .atoms()
            .iter()
            .map(|a| {
                let zeta = a.location();
                zeta * 2.0 * a.mass / ((zeta - z) * (zeta - z))
            })
            .sum();
        -d * self.eval(z)
    }

    fn describe(&self) -> String {
        format!(
            "singular inner function with {} atoms (total mass {})",
            self.measure.atoms().len(),
            self.measure.total_mass()
        )
    }
}
