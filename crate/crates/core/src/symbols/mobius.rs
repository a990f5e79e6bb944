use serde::{Deserialize, Serialize};

use super::{boundary_nodes, Analytic};
use crate::{Error, Result, C64};

/// `z ↦ (az + b)/(cz + d)` with `ad − bc ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl MobiusMap {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > 1e-14 * scale * scale) {
            return Err(Error::DegenerateMap);
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self { a: one, b: zero, c: zero, d: one }
    }

    /// The involutive disc automorphism `τ_α(z) = (α − z)/(1 − ᾱz)`.
    pub fn tau(alpha: C64) -> Self {
        let one = C64::new(1.0, 0.0);
        Self { a: -one, b: alpha, c: -alpha.conj(), d: one }
    }

    /// `z ↦ e^{iθ} z`.
    pub fn rotation(theta: f64) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self {
            a: C64::from_polar(1.0, theta),
            b: zero,
            c: zero,
            d: C64::new(1.0, 0.0),
        }
    }

    /// `z ↦ λz`.
    pub fn scaling(lambda: C64) -> Result<Self> {
        let zero = C64::new(0.0, 0.0);
        Self::new(lambda, zero, zero, C64::new(1.0, 0.0))
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    /// Image of `z`; the pole maps to complex infinity.
    pub fn apply(&self, z: C64) -> C64 {
        let den = self.c * z + self.d;
        if den == C64::new(0.0, 0.0) {
            return C64::new(f64::INFINITY, f64::INFINITY);
        }
        (self.a * z + self.b) / den
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Scaled so that `ad − bc = 1`; unique up to sign.
    pub fn normalized(&self) -> MobiusMap {
        let s = self.det().sqrt();
        MobiusMap { a: self.a / s, b: self.b / s, c: self.c / s, d: self.d / s }
    }

    /// Whether the map fixes three reference points to within `tol`.
    pub fn is_identity(&self, tol: f64) -> bool {
        [C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(0.0, 0.5)]
            .iter()
            .all(|&z| (self.apply(z) - z).norm() <= tol)
    }

    /// Fixed points of the map. `None` stands for ∞. The identity returns an
    /// empty list (every point is fixed).
    pub fn fixed_points(&self) -> Vec<Option<C64>> {
        if self.is_identity(1e-14) {
            return Vec::new();
        }
        let m = self.normalized();
        // c z² + (d − a) z − b = 0
        let (qa, qb, qc) = (m.c, m.d - m.a, -m.b);
        let scale = qa.norm().max(qb.norm()).max(qc.norm());
        if qa.norm() <= 1e-14 * scale {
            // Affine map: ∞ is fixed, plus one finite point unless a = d.
            if qb.norm() <= 1e-14 * scale {
                return vec![None];
            }
            return vec![Some(-qc / qb), None];
        }
        let disc = (qb * qb - qa * qc * 4.0).sqrt();
        // Stable quadratic formula.
        let q = if (qb.conj() * disc).re >= 0.0 {
            -(qb + disc) * 0.5
        } else {
            -(qb - disc) * 0.5
        };
        let r1 = q / qa;
        let r2 = if q.norm() == 0.0 { r1 } else { qc / q };
        vec![Some(r1), Some(r2)]
    }

    /// Pole outside the closed disc and the unit circle mapped into the closed
    /// disc (checked on `samples` boundary points).
    pub fn is_self_map(&self, tol: f64) -> bool {
        if self.apply(C64::new(0.0, 0.0)).norm() >= 1.0 {
            return false;
        }
        if self.c.norm() > 0.0 && (-self.d / self.c).norm() <= 1.0 + tol {
            return false;
        }
        boundary_nodes(256)
            .into_iter()
            .all(|z| self.apply(z).norm() <= 1.0 + tol)
    }

    /// Self-map that sends the unit circle onto itself.
    pub fn is_disk_automorphism(&self, tol: f64) -> bool {
        self.is_self_map(tol)
            && boundary_nodes(256)
                .into_iter()
                .all(|z| (self.apply(z).norm() - 1.0).abs() <= tol)
    }
}

impl Analytic for MobiusMap {
    fn eval(&self, z: C64) -> C64 {
        self.apply(z)
    }
    fn derivative(&self, z: C64) -> C64 {
        let den = self.c * z + self.d;
        self.det() / (den * den)
    }
    fn describe(&self) -> String {
        format!(
            "Möbius map ({})z+({}) / ({})z+({})",
            self.a, self.b, self.c, self.d
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use proptest::prelude::*;

    #[test]
    fn tau_is_an_involution() {
        let t = MobiusMap::tau(c(0.5, 0.0));
        assert!((t.apply(c(0.0, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((t.apply(t.apply(c(0.3, 0.0))) - c(0.3, 0.0)).norm() < 1e-12);
        assert!(t.compose(&t).is_identity(1e-12));
    }

    #[test]
    fn degenerate_rejected() {
        let one = c(1.0, 0.0);
        assert_eq!(MobiusMap::new(one, one, one, one), Err(Error::DegenerateMap));
    }

    #[test]
    fn fixed_points_of_attractive_example() {
        let phi = MobiusMap::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)).unwrap();
        let mut fp: Vec<C64> = phi.fixed_points().into_iter().flatten().collect();
        fp.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        assert!(fp[0].norm() < 1e-15);
        assert!((fp[1] - c(3.0, 0.0)).norm() < 1e-12);
        assert!((phi.derivative(c(0.0, 0.0)) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!(phi.is_self_map(1e-12));
        assert!(!phi.is_disk_automorphism(1e-9));
    }

    #[test]
    fn affine_fixed_points() {
        let phi = MobiusMap::scaling(c(0.5, 0.0)).unwrap();
        assert_eq!(phi.fixed_points(), vec![Some(c(0.0, 0.0)), None]);
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(
            a in (-2.0f64..2.0, -2.0f64..2.0), b in (-2.0f64..2.0, -2.0f64..2.0),
            cc in (-2.0f64..2.0, -2.0f64..2.0), d in (-2.0f64..2.0, -2.0f64..2.0),
        ) {
            let m = MobiusMap::new(c(a.0, a.1), c(b.0, b.1), c(cc.0, cc.1), c(d.0, d.1));
            prop_assume!(m.is_ok());
            let m = m.unwrap();
            prop_assume!(m.det().norm() > 1e-2);
            // Cross-ratio style test: three points must be fixed.
            let id = m.inverse().compose(&m).normalized();
            let pts = [c(0.1, 0.2), c(-0.4, 0.3), c(0.25, -0.6)];
            for z in pts {
                let w = m.apply(z);
                prop_assume!(w.is_finite() && w.norm() < 1e6);
                prop_assert!((id.apply(z) - z).norm() < 1e-12 * (1.0 + w.norm()));
            }
        }
    }
}
