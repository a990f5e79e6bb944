//! Explicit semiflows and operator semigroups, and their truncated samples.

mod embed;
mod outer;
mod sample;
mod shift;

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::symbols::{
    convolve_truncated, taylor_coefficients, Analytic, MobiusMap, RationalOuter, SingularInner,
    SingularMeasure, SymbolRef, TaylorOptions,
};
use crate::{Error, Result, C64};

pub use embed::{conjugate_semigroup, embed_isometric_composition, ShiftEmbedding};
pub use outer::{outer_flow, OuterFlowValue, OuterPower};
pub use sample::{sample_flow, OperatorSemigroupSample, BOUNDARY_SAMPLES};
pub use shift::{shift_semigroup_apply, HalfLineVector, ShiftResult, TimeMode};

/// `τ_α ∘ R_{θt} ∘ τ_α`.
pub fn elliptic_flow(alpha: C64, theta: f64, t: f64) -> Result<MobiusMap> {
    if !(alpha.norm() < 1.0) {
        return Err(Error::DomainError(format!("|alpha| = {} >= 1", alpha.norm())));
    }
    let tau = MobiusMap::tau(alpha);
    Ok(tau.compose(&MobiusMap::rotation(theta * t)).compose(&tau))
}

/// `S_{tμ}`; `t = 0` is the constant 1.
pub fn singular_inner_flow(mu: &SingularMeasure, t: f64) -> Result<SingularInner> {
    check_time(t)?;
    Ok(SingularInner::new(mu.scaled(t)))
}

/// `T⁻¹(λᵗ T(z))` with `T(z) = (z − α)/(z − β)` (or `z − α` when `β = ∞`)
/// and `λᵗ = exp(t Log λ)`.
pub fn linear_fractional_flow(alpha: C64, beta: Option<C64>, log_lambda: C64, t: f64) -> Result<MobiusMap> {
    check_time(t)?;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let conj = match beta {
        Some(b) => MobiusMap::new(one, -alpha, one, -b)?,
        None => MobiusMap::new(one, -alpha, zero, one)?,
    };
    let scale = MobiusMap::scaling((log_lambda * t).exp())?;
    Ok(conj.inverse().compose(&scale).compose(&conj))
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::DomainError(format!("time {t} must be a nonnegative real")));
    }
    Ok(())
}

/// A semiflow `t ↦ φ_t`: either of self-maps (acting by composition) or of
/// symbols (acting by multiplication).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Semiflow {
    EllipticAutomorphism {
        alpha: C64,
        theta: f64,
    },
    LinearFractional {
        alpha: C64,
        beta: Option<C64>,
        log_lambda: C64,
    },
    SingularInner {
        measure: SingularMeasure,
    },
    Outer {
        outer: RationalOuter,
    },
    Product {
        parts: Vec<Semiflow>,
    },
}

/// Pointwise product of multiplication flows.
pub fn product_flow(parts: Vec<Semiflow>) -> Result<Semiflow> {
    if let Some(p) = parts.iter().find(|p| !p.is_multiplicative()) {
        return Err(Error::NonCommuting(format!(
            "{} acts by composition and cannot be multiplied",
            p.describe()
        )));
    }
    Ok(Semiflow::Product { parts })
}

impl Semiflow {
    pub fn is_multiplicative(&self) -> bool {
        match self {
            Semiflow::EllipticAutomorphism { .. } | Semiflow::LinearFractional { .. } => false,
            Semiflow::SingularInner { .. } | Semiflow::Outer { .. } => true,
            Semiflow::Product { parts } => parts.iter().all(Semiflow::is_multiplicative),
        }
    }

    /// Whether every `φ_t` gives an isometry: inner multiplication symbols, or
    /// rotations about the origin.
    pub fn is_isometric(&self) -> bool {
        match self {
            Semiflow::EllipticAutomorphism { alpha, .. } => alpha.norm() == 0.0,
            Semiflow::LinearFractional { .. } | Semiflow::Outer { .. } => false,
            Semiflow::SingularInner { .. } => true,
            Semiflow::Product { parts } => parts.iter().all(Semiflow::is_isometric),
        }
    }

    /// `φ_t` as an evaluable symbol.
    pub fn at(&self, t: f64) -> Result<SymbolRef> {
        check_time(t)?;
        Ok(match self {
            Semiflow::EllipticAutomorphism { alpha, theta } => Arc::new(elliptic_flow(*alpha, *theta, t)?),
            Semiflow::LinearFractional {
                alpha,
                beta,
                log_lambda,
            } => Arc::new(linear_fractional_flow(*alpha, *beta, *log_lambda, t)?),
            Semiflow::SingularInner { measure } => Arc::new(singular_inner_flow(measure, t)?),
            Semiflow::Outer { outer } => Arc::new(OuterPower::new(outer.clone(), t)?),
            Semiflow::Product { parts } => Arc::new(crate::symbols::Product(
                parts.iter().map(|p| p.at(t)).collect::<Result<_>>()?,
            )),
        })
    }

    /// First `n` Taylor coefficients of a multiplication flow at time `t`.
    pub fn taylor_at(&self, t: f64, n: usize, opts: &TaylorOptions) -> Result<Vec<C64>> {
        check_time(t)?;
        match self {
            Semiflow::SingularInner { measure } => {
                Ok(taylor_coefficients(&singular_inner_flow(measure, t)?, n, opts)?.coeffs)
            }
            Semiflow::Outer { outer } => Ok(outer_flow(outer, t, n)?.coeffs),
            Semiflow::Product { parts } => {
                let mut acc = vec![C64::new(0.0, 0.0); n];
                acc[0] = C64::new(1.0, 0.0);
                for p in parts {
                    acc = convolve_truncated(&acc, &p.taylor_at(t, n, opts)?, n);
                }
                Ok(acc)
            }
            _ => Err(Error::UnsupportedCase(
                "Taylor vectors are defined for multiplication flows only".into(),
            )),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Semiflow::EllipticAutomorphism { alpha, theta } => {
                format!("elliptic automorphism flow tau_a R_(theta t) tau_a, a = {alpha}, theta = {theta}")
            }
            Semiflow::LinearFractional { alpha, beta, log_lambda } => match beta {
                Some(b) => format!("linear-fractional flow fixing {alpha} and {b}, Log lambda = {log_lambda}"),
                None => format!("linear-fractional flow fixing {alpha} and infinity, Log lambda = {log_lambda}"),
            },
            Semiflow::SingularInner { measure } => {
                format!("singular inner flow exp(-t H_mu), {} atoms", measure.atoms().len())
            }
            Semiflow::Outer { outer } => format!("outer flow exp(t Log F), {}", outer.describe()),
            Semiflow::Product { parts } => format!(
                "product flow [{}]",
                parts.iter().map(Semiflow::describe).collect::<Vec<_>>().join("; ")
            ),
        }
    }
}

/// `sup |φ_{t+s}(z) − (φ_t ∘ φ_s)(z)|` (composition flows) or
/// `sup |φ_{t+s}(z) − φ_t(z)φ_s(z)|` (multiplication flows) over `grid`.
pub fn semiflow_law_defect(flow: &Semiflow, t: f64, s: f64, grid: &[C64]) -> Result<f64> {
    let (a, b, ab) = (flow.at(t)?, flow.at(s)?, flow.at(t + s)?);
    Ok(grid
        .iter()
        .map(|&z| {
            let combined = if flow.is_multiplicative() {
                a.eval(z) * b.eval(z)
            } else {
                a.eval(b.eval(z))
            };
            (ab.eval(z) - combined).norm()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::symbols::{interior_grid, Atom};
    use std::f64::consts::PI;

    #[test]
    fn elliptic_examples() {
        let z = c(0.3, 0.2);
        assert!((elliptic_flow(c(0.0, 0.0), PI, 1.0).unwrap().apply(z) + z).norm() < 1e-15);
        assert!((elliptic_flow(c(0.0, 0.0), PI, 0.5).unwrap().apply(z) - z * c(0.0, 1.0)).norm() < 1e-15);
        let f = |t| elliptic_flow(c(0.5, 0.0), PI / 3.0, t).unwrap();
        let comp = f(0.4).compose(&f(0.6));
        for k in 0..16 {
            let z = C64::from_polar(0.8, k as f64);
            assert!((comp.apply(z) - f(1.0).apply(z)).norm() < 1e-12);
        }
        assert!((f(0.7).apply(c(0.5, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_examples() {
        let mu = SingularMeasure::single(0.0, 1.0).unwrap();
        let s = singular_inner_flow(&mu, 1.0).unwrap();
        assert!((s.eval(c(0.0, 0.0)) - c((-1.0f64).exp(), 0.0)).norm() < 1e-15);
        let s0 = singular_inner_flow(&mu, 0.0).unwrap();
        assert!(s0.is_trivial() && (s0.eval(c(0.4, 0.4)) - c(1.0, 0.0)).norm() == 0.0);
        let a = singular_inner_flow(&mu, 0.3).unwrap();
        let b = singular_inner_flow(&mu, 0.7).unwrap();
        for z in interior_grid().into_iter().step_by(4) {
            assert!((a.eval(z) * b.eval(z) - s.eval(z)).norm() < 1e-12);
        }
    }

    #[test]
    fn semiflow_law_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let flows = vec![
            Semiflow::EllipticAutomorphism { alpha: c(0.5, 0.1), theta: PI / 3.0 },
            Semiflow::SingularInner {
                measure: SingularMeasure::new(vec![Atom { angle: 0.0, mass: 1.0 }, Atom { angle: 2.0, mass: 0.5 }]).unwrap(),
            },
            Semiflow::Outer { outer: RationalOuter::new(c(1.0, 0.0), vec![c(0.3, 0.0)], vec![c(2.0, 0.0)]).unwrap() },
            product_flow(vec![
                Semiflow::SingularInner { measure: SingularMeasure::single(0.0, 1.0).unwrap() },
                Semiflow::Outer { outer: RationalOuter::new(c(1.0, 0.0), vec![], vec![c(2.0, 0.0)]).unwrap() },
            ])
            .unwrap(),
            Semiflow::LinearFractional { alpha: c(0.0, 0.0), beta: None, log_lambda: c(0.5f64.ln(), 0.0) },
        ];
        let grid: Vec<C64> = (0..32).map(|k| C64::from_polar(0.9 * ((k % 4) as f64 + 1.0) / 4.0, k as f64 * 0.7)).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for f in &flows {
            for _ in 0..20 {
                let (t, s) = (rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
                assert!(semiflow_law_defect(f, t, s, &grid).unwrap() < 1e-9, "{}", f.describe());
            }
        }
    }

    #[test]
    fn product_flow_rules() {
        let sing = Semiflow::SingularInner { measure: SingularMeasure::single(0.0, 1.0).unwrap() };
        let outer = Semiflow::Outer { outer: RationalOuter::new(c(1.0, 0.0), vec![], vec![c(2.0, 0.0)]).unwrap() };
        let p = product_flow(vec![sing.clone(), outer]).unwrap();
        let z = c(0.2, -0.3);
        let expect = (z - 2.0) * (-(c(1.0, 0.0) + z) / (c(1.0, 0.0) - z)).exp();
        assert!((p.at(1.0).unwrap().eval(z) - expect).norm() < 1e-13);
        let one = product_flow(vec![sing.clone()]).unwrap();
        assert!((one.at(1.0).unwrap().eval(z) - sing.at(1.0).unwrap().eval(z)).norm() < 1e-15);
        let empty = product_flow(vec![]).unwrap();
        assert_eq!(empty.at(0.7).unwrap().eval(z), c(1.0, 0.0));
        let ell = Semiflow::EllipticAutomorphism { alpha: c(0.0, 0.0), theta: 1.0 };
        assert!(matches!(product_flow(vec![sing, ell]), Err(Error::NonCommuting(_))));
    }

    #[test]
    fn linear_fractional_flow_recovers_map() {
        // z/(z − 2): fixed points 0 and 3, multiplier −1/2.
        let phi = MobiusMap::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)).unwrap();
        let f1 = linear_fractional_flow(c(0.0, 0.0), Some(c(3.0, 0.0)), c(-0.5, 0.0).ln(), 1.0).unwrap();
        for z in interior_grid() {
            assert!((f1.apply(z) - phi.apply(z)).norm() < 1e-12);
        }
    }
}
