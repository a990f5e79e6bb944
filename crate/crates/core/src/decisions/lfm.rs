use serde::{Deserialize, Serialize};

use super::citations::*;
use super::{Construction, EmbeddabilityReport, Verdict};
use crate::semigroups::Semiflow;
use crate::symbols::{Analytic, MobiusMap};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralData {
    pub multiplier: C64,
    pub log_value: C64,
    /// `|Log λ| / (−Re Log λ)`.
    pub length: f64,
    /// Arc length of `t ↦ e^{t Log λ}` by composite Simpson quadrature.
    pub quadrature_length: f64,
}

/// Length of the canonical spiral `t ↦ e^{t Log λ}`, `t ∈ [0, ∞)`.
pub fn spiral_length(lambda: C64) -> Result<SpiralData> {
    let r = lambda.norm();
    if r == 0.0 || r >= 1.0 {
        return Err(Error::DomainError(format!("|lambda| = {r} must lie in (0, 1)")));
    }
    let log = lambda.ln();
    let decay = -log.re;
    let length = log.norm() / decay;

    let horizon = 40.0 / decay;
    let steps = 20_000usize;
    let h = horizon / steps as f64;
    let speed = |t: f64| (log * (log * t).exp()).norm();
    let mut acc = speed(0.0) + speed(horizon);
    for k in 1..steps {
        acc += speed(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    Ok(SpiralData {
        multiplier: lambda,
        log_value: log,
        length,
        quadrature_length: acc * h / 3.0,
    })
}

/// Data of the attractive-elliptic test `|ᾱ − 1/β| l ≤ |φ′(α)| |1 − α/β|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LfmCondition {
    pub alpha: C64,
    /// `None` for the point at infinity.
    pub beta: Option<C64>,
    pub spiral: SpiralData,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

fn classify_lfm_condition(alpha: C64, beta: Option<C64>, lambda: C64) -> Result<LfmCondition> {
    let spiral = spiral_length(lambda)?;
    let (a, b) = match beta {
        Some(b) => ((alpha.conj() - 1.0 / b).norm(), (C64::new(1.0, 0.0) - alpha / b).norm()),
        None => (alpha.norm(), 1.0),
    };
    let lhs = a * spiral.length;
    let rhs = lambda.norm() * b;
    Ok(LfmCondition {
        alpha,
        beta,
        spiral,
        lhs,
        rhs,
        satisfied: lhs <= rhs,
    })
}

/// Verdict on embedding a linear-fractional self-map into a semiflow.
pub fn decide_lfm(phi: &MobiusMap, tol: f64) -> Result<EmbeddabilityReport> {
    if !phi.is_self_map(tol) {
        return Err(Error::DomainError("the map does not send the disc into itself".into()));
    }
    if phi.is_identity(tol) {
        return Ok(EmbeddabilityReport::new(Verdict::Embeddable, ELLIPTIC_FLOW)
            .with_construction(Construction::CompositionFlow {
                flow: Semiflow::EllipticAutomorphism {
                    alpha: C64::new(0.0, 0.0),
                    theta: 0.0,
                },
            })
            .note("identity map"));
    }
    let fixed = phi.fixed_points();
    let interior = fixed
        .iter()
        .flatten()
        .copied()
        .find(|z| z.norm() < 1.0 - tol);

    if phi.is_disk_automorphism(tol) {
        return Ok(match interior {
            Some(alpha) => {
                let theta = phi.derivative(alpha).arg();
                EmbeddabilityReport::new(Verdict::Embeddable, ELLIPTIC_FLOW)
                    .with_construction(Construction::CompositionFlow {
                        flow: Semiflow::EllipticAutomorphism { alpha, theta },
                    })
                    .note("elliptic automorphism")
            }
            None => EmbeddabilityReport::new(Verdict::Embeddable, AUTOMORPHISM_FLOWS)
                .existence()
                .note("non-elliptic automorphism: semiflow referenced to the literature, not constructed"),
        });
    }

    let Some(alpha) = interior else {
        return Ok(EmbeddabilityReport::new(Verdict::OutOfScope, LFM_LITERATURE)
            .note("Denjoy–Wolff point on the boundary"));
    };
    let lambda = phi.derivative(alpha);
    let beta = fixed
        .iter()
        .copied()
        .find(|p| p.is_none_or(|z| (z - alpha).norm() > tol))
        .unwrap_or(None);
    let cond = classify_lfm_condition(alpha, beta, lambda)?;
    let mut report = if cond.satisfied {
        EmbeddabilityReport::new(Verdict::Embeddable, CONDITION_3_2)
            .with_construction(Construction::CompositionFlow {
                flow: Semiflow::LinearFractional {
                    alpha,
                    beta,
                    log_lambda: cond.spiral.log_value,
                },
            })
            .note("attractive elliptic: condition holds")
    } else {
        EmbeddabilityReport::new(Verdict::NotEmbeddable, CONDITION_3_2)
            .note("attractive elliptic: condition fails, φ is not embeddable into a semiflow")
    };
    report.condition = Some(cond);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use proptest::prelude::*;

    fn spiral_oracle(lambda: C64) -> f64 {
        // Polyline through e^{k h Log λ}; chords form a geometric series.
        let log = lambda.ln();
        let h = 1e-5;
        let step = (log * h).exp();
        (step - 1.0).norm() / (1.0 - step.norm())
    }

    #[test]
    fn real_multiplier_is_segment() {
        let s = spiral_length(c(0.3, 0.0)).unwrap();
        assert!((s.length - 1.0).abs() < 1e-15);
        assert!((s.quadrature_length - 1.0).abs() < 1e-8);
    }

    #[test]
    fn minus_half() {
        let s = spiral_length(c(-0.5, 0.0)).unwrap();
        let ln2 = 2f64.ln();
        let closed = (ln2 * ln2 + std::f64::consts::PI.powi(2)).sqrt() / ln2;
        assert!((s.length - closed).abs() < 1e-14);
        assert!((s.length - 4.641367).abs() < 1e-6);
        assert!((s.quadrature_length - s.length).abs() < 1e-8);
        assert!((spiral_oracle(c(-0.5, 0.0)) - s.length).abs() < 1e-4);
    }

    #[test]
    fn domain_errors() {
        assert!(spiral_length(c(0.0, 0.0)).is_err());
        assert!(spiral_length(c(1.0, 0.0)).is_err());
    }

    proptest! {
        #[test]
        fn arc_at_least_chord(r in 0.05f64..0.95, th in -3.0f64..3.0) {
            let l = C64::from_polar(r, th);
            let s = spiral_length(l).unwrap();
            prop_assert!(s.length >= (l - 1.0).norm() - 1e-12);
        }

        #[test]
        fn square_invariance(r in 0.3f64..0.95, th in -1.5f64..1.5) {
            let l = C64::from_polar(r, th);
            let a = spiral_length(l).unwrap().length;
            let b = spiral_length(l * l).unwrap().length;
            prop_assert!((a - b).abs() < 1e-10 * a);
        }
    }

    #[test]
    fn z_over_z_minus_two() {
        let phi = MobiusMap::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)).unwrap();
        let r = decide_lfm(&phi, 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::NotEmbeddable);
        let cond = r.condition.unwrap();
        assert!(cond.alpha.norm() < 1e-12);
        assert!((cond.beta.unwrap() - c(3.0, 0.0)).norm() < 1e-12);
        assert!((cond.spiral.multiplier - c(-0.5, 0.0)).norm() < 1e-12);
        assert!((cond.lhs - cond.spiral.length / 3.0).abs() < 1e-12);
        assert!((cond.rhs - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dilation_and_automorphism() {
        let phi = MobiusMap::scaling(c(0.5, 0.0)).unwrap();
        let r = decide_lfm(&phi, 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::Embeddable);
        let cond = r.condition.unwrap();
        assert_eq!(cond.beta, None);
        assert_eq!(cond.lhs, 0.0);
        let tau = MobiusMap::tau(c(0.5, 0.0));
        let ell = tau.compose(&MobiusMap::rotation(1.0)).compose(&tau);
        let r = decide_lfm(&ell, 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::Embeddable);
        match r.construction.unwrap() {
            Construction::CompositionFlow { flow: Semiflow::EllipticAutomorphism { alpha, theta } } => {
                assert!((alpha - c(0.5, 0.0)).norm() < 1e-12);
                assert!((theta - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boundary_denjoy_wolff_is_out_of_scope() {
        // (1 + z)/2 fixes 1 with no interior fixed point.
        let phi = MobiusMap::new(c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(decide_lfm(&phi, 1e-12).unwrap().verdict, Verdict::OutOfScope);
    }
}
