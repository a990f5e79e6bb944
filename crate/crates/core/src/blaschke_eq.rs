//! Solving `B(z) = β`, critical values, Frostman transforms, fixed points and
//! Denjoy–Wolff orbits for finite Blaschke products and Möbius maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::exec;
use crate::poly::{Polynomial, RootSet, DEFAULT_CLUSTER_RADIUS};
use crate::symbols::{Analytic, BlaschkeProduct, BlaschkeZero, MobiusMap};
use crate::{Error, Result, C64};

/// Default residual tolerance for `|B(z) − β|`.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;
/// Distance kept from critical values and from the unit circle when sampling.
pub const REGULAR_VALUE_MARGIN: f64 = 1e-4;
const REGULAR_VALUE_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageSet {
    pub target: C64,
    pub solutions: RootSet,
    pub all_distinct: bool,
    pub max_residual: f64,
}

/// All `z ∈ 𝔻` with `B(z) = β`, as roots of `N(z) − βD(z)`.
pub fn solve_blaschke_equation(b: &BlaschkeProduct, beta: C64, tol: f64) -> Result<PreimageSet> {
    if !(beta.norm() < 1.0) {
        return Err(Error::DomainError(format!("|beta| = {} >= 1", beta.norm())));
    }
    if b.is_constant() {
        return Err(Error::DegenerateSymbol("constant Blaschke product".into()));
    }
    let n = b.degree();
    let p = &b.numerator() - &b.denominator().scale(beta);
    let rs = p.roots()?;
    let inside: Vec<_> = rs.roots.iter().copied().filter(|r| r.value.norm() < 1.0).collect();
    let count: usize = inside.iter().map(|r| r.multiplicity).sum();
    if count != n {
        return Err(Error::ResidualFailure(format!(
            "found {count} preimages in the disc, expected {n}"
        )));
    }
    let max_residual = inside
        .iter()
        .map(|r| (b.eval(r.value) - beta).norm())
        .fold(0.0, f64::max);
    if !(max_residual <= tol) {
        return Err(Error::ResidualFailure(format!(
            "|B(z) - beta| = {max_residual:e} exceeds {tol:e}"
        )));
    }
    let separated = inside.iter().enumerate().all(|(i, a)| {
        inside[..i]
            .iter()
            .all(|b| (a.value - b.value).norm() > DEFAULT_CLUSTER_RADIUS)
    });
    let all_distinct = separated && inside.iter().all(|r| r.multiplicity == 1);
    Ok(PreimageSet {
        target: beta,
        solutions: RootSet {
            roots: inside,
            residual_bound: rs.residual_bound,
        },
        all_distinct,
        max_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub point: C64,
    pub multiplicity: usize,
    pub value: C64,
}

/// Zeros of `B′` in 𝔻 (roots of `N′D − ND′`) and the values of `B` there.
pub fn critical_values(b: &BlaschkeProduct, _tol: f64) -> Result<Vec<CriticalPoint>> {
    let (n, d) = (b.numerator(), b.denominator());
    let w = (&(&n.derivative() * &d) - &(&n * &d.derivative())).trimmed(1e-14);
    if w.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    Ok(w.roots()?
        .roots
        .into_iter()
        .filter(|r| r.value.norm() < 1.0)
        .map(|r| CriticalPoint {
            point: r.value,
            multiplicity: r.multiplicity,
            value: b.eval(r.value),
        })
        .collect())
}

/// A point of 𝔻 farther than the margin from every critical value and from
/// the unit circle, drawn uniformly from the disc with a seeded ChaCha8.
pub fn sample_regular_value(b: &BlaschkeProduct, seed: u64) -> Result<C64> {
    let crit = if b.is_constant() {
        Vec::new()
    } else {
        critical_values(b, DEFAULT_RESIDUAL_TOL)?
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rmax = 1.0 - REGULAR_VALUE_MARGIN;
    for _ in 0..REGULAR_VALUE_RETRIES {
        let r = rmax * rng.random::<f64>().sqrt();
        let beta = C64::from_polar(r, TAU * rng.random::<f64>());
        if crit.iter().all(|c| (c.value - beta).norm() > REGULAR_VALUE_MARGIN) {
            return Ok(beta);
        }
    }
    Err(Error::ExhaustedRetries(format!(
        "no regular value after {REGULAR_VALUE_RETRIES} draws"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrostmanResult {
    pub product: BlaschkeProduct,
    pub simple_zeros: bool,
}

/// `τ_λ ∘ B` as a Blaschke product.
pub fn frostman_transform(b: &BlaschkeProduct, lambda: C64, tol: f64) -> Result<FrostmanResult> {
    let pre = solve_blaschke_equation(b, lambda, tol)?;
    let simple_zeros = pre
        .solutions
        .roots
        .iter()
        .all(|r| r.multiplicity == 1 && b.derivative(r.value).norm() > tol);
    let zeros: Vec<(C64, usize)> = pre
        .solutions
        .roots
        .iter()
        .map(|r| (r.value, r.multiplicity))
        .collect();
    let tau = MobiusMap::tau(lambda);
    let product = BlaschkeProduct::fitted(&zeros, |z| tau.apply(b.eval(z)))?;
    Ok(FrostmanResult {
        product,
        simple_zeros,
    })
}

/// `B ∘ τ_α`.
pub fn precompose_tau(b: &BlaschkeProduct, alpha: C64) -> Result<BlaschkeProduct> {
    let tau = MobiusMap::tau(alpha);
    let zeros: Vec<(C64, usize)> = std::iter::once((alpha, b.origin_order()))
        .filter(|z| z.1 > 0)
        .chain(b.zeros().iter().map(|z| (tau.apply(z.alpha), z.multiplicity)))
        .collect();
    BlaschkeProduct::fitted(&zeros, |z| b.eval(tau.apply(z)))
}

/// `τ_α ∘ B ∘ τ_α`, which moves a fixed point at 0 to `α`.
pub fn conjugate_by_tau(b: &BlaschkeProduct, alpha: C64) -> Result<BlaschkeProduct> {
    let pre = precompose_tau(b, alpha)?;
    if alpha == C64::new(0.0, 0.0) {
        return Ok(pre.rotated(std::f64::consts::PI));
    }
    Ok(frostman_transform(&pre, alpha, 1e-9)?.product)
}

/// A self-map of the disc whose fixed points can be computed algebraically.
#[derive(Debug, Clone, Copy)]
pub enum SelfMap<'a> {
    Blaschke(&'a BlaschkeProduct),
    Mobius(&'a MobiusMap),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: C64,
    pub derivative: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPoints {
    pub points: Vec<FixedPoint>,
    /// Set when more than one interior fixed point was found, or the map is
    /// the identity.
    pub anomaly: Option<String>,
}

/// Fixed points strictly inside the disc (`|z| < 1 − tol`) with `φ′` there.
pub fn fixed_points_in_disk(phi: SelfMap<'_>, tol: f64) -> Result<FixedPoints> {
    let (candidates, f): (Vec<C64>, &dyn Analytic) = match phi {
        SelfMap::Blaschke(b) => {
            let p: Polynomial = &b.numerator() - &(&Polynomial::monomial(1) * &b.denominator());
            let p = p.trimmed(1e-15);
            if p.is_zero() {
                return Ok(FixedPoints {
                    points: Vec::new(),
                    anomaly: Some("identity map: every point is fixed".into()),
                });
            }
            let pts = if p.degree() == Some(0) {
                Vec::new()
            } else {
                p.roots()?.roots.iter().map(|r| r.value).collect()
            };
            (pts, b)
        }
        SelfMap::Mobius(m) => {
            if m.is_identity(1e-14) {
                return Ok(FixedPoints {
                    points: Vec::new(),
                    anomaly: Some("identity map: every point is fixed".into()),
                });
            }
            (m.fixed_points().into_iter().flatten().collect(), m)
        }
    };
    let points: Vec<FixedPoint> = candidates
        .into_iter()
        .filter(|z| z.norm() < 1.0 - tol)
        .map(|z| FixedPoint {
            point: z,
            derivative: f.derivative(z),
        })
        .collect();
    let anomaly = (points.len() > 1)
        .then(|| format!("{} interior fixed points for a self-map", points.len()));
    Ok(FixedPoints { points, anomaly })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub start: C64,
    pub iterates: Vec<C64>,
    pub moduli: Vec<f64>,
}

/// `ψ^{[n]}(z₀)` for `n = 1..=n_max`, for `ψ(0) = 0` not a rotation.
pub fn dw_orbit<F: Analytic + ?Sized>(psi: &F, z0: C64, n_max: usize) -> Result<OrbitRecord> {
    let zero = C64::new(0.0, 0.0);
    if psi.eval(zero).norm() >= 1e-12 {
        return Err(Error::DomainError(format!(
            "psi(0) = {} is not 0",
            psi.eval(zero)
        )));
    }
    let d = psi.derivative(zero).norm();
    if d >= 1.0 - 1e-12 {
        return Err(Error::NotContractive(d));
    }
    if !(z0.norm() < 1.0) {
        return Err(Error::DomainError(format!("|z0| = {} >= 1", z0.norm())));
    }
    let mut iterates = Vec::with_capacity(n_max);
    let mut z = z0;
    for _ in 0..n_max {
        z = psi.eval(z);
        iterates.push(z);
    }
    let moduli = iterates.iter().map(|z| z.norm()).collect();
    Ok(OrbitRecord {
        start: z0,
        iterates,
        moduli,
    })
}

/// Random Blaschke product of the given degree with simple nonzero zeros of
/// modulus in [0.05, 0.95] and a random rotation.
pub fn random_blaschke(rng: &mut impl Rng, degree: usize) -> BlaschkeProduct {
    let zeros = (0..degree)
        .map(|_| BlaschkeZero {
            alpha: C64::from_polar(rng.random_range(0.05..0.95), TAU * rng.random::<f64>()),
            multiplicity: 1,
        })
        .collect();
    BlaschkeProduct::new(TAU * rng.random::<f64>(), 0, zeros).expect("zeros lie in the disc")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyEntry {
    pub product: BlaschkeProduct,
    pub beta: C64,
    pub preimages: Option<PreimageSet>,
    pub error: Option<String>,
}

impl SurveyEntry {
    /// `deg B` distinct preimages within the residual tolerance.
    pub fn ok(&self) -> bool {
        self.preimages.as_ref().is_some_and(|p| {
            p.all_distinct && p.solutions.total_multiplicity() == self.product.degree()
        })
    }
}

/// `count` independent trials of the preimage count, degrees uniform in
/// `degrees`, each trial seeded from `seed + i`. Runs data-parallel.
pub fn preimage_survey(
    count: usize,
    degrees: std::ops::RangeInclusive<usize>,
    seed: u64,
    tol: f64,
) -> Vec<SurveyEntry> {
    exec::map_range(count, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let degree = rng.random_range(degrees.clone());
        let product = random_blaschke(&mut rng, degree);
        let beta = match sample_regular_value(&product, rng.random()) {
            Ok(b) => b,
            Err(e) => {
                return SurveyEntry {
                    product,
                    beta: C64::new(0.0, 0.0),
                    preimages: None,
                    error: Some(e.to_string()),
                }
            }
        };
        let (preimages, error) = match solve_blaschke_equation(&product, beta, tol) {
            Ok(p) => (Some(p), None),
            Err(e) => (None, Some(e.to_string())),
        };
        SurveyEntry {
            product,
            beta,
            preimages,
            error,
        }
    })
}
