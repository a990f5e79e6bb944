//! Exact and deliberately corrupted inputs for each check.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::*;
use crate::decisions::{build_weight, verify_weighted_isometry};
use crate::semigroups::{sample_flow, Semiflow};
use crate::symbols::{BlaschkeProduct, BlaschkeZero, FnSymbol, SingularMeasure, TaylorOptions};

pub const LAW_TOL: f64 = 1e-9;
pub const ISOMETRY_TOL: f64 = 1e-6;
pub const NONCOMPACT_TOL: f64 = 1e-7;
pub const CONTINUITY_TOL: f64 = 0.2;
pub const WOLD_TOL: f64 = 1e-8;
pub const WEIGHTED_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixturePair {
    pub check: String,
    pub exact: VerificationRecord,
    pub corrupted: VerificationRecord,
}

impl FixturePair {
    /// Exact fixture passes and corrupted fixture fails.
    pub fn sound(&self) -> bool {
        self.exact.applicable && self.exact.pass && self.corrupted.applicable && !self.corrupted.pass
    }
}

fn unit(n: usize, k: usize) -> DVector<C64> {
    DVector::from_fn(n, |i, _| C64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
}

fn scale_entry(sample: &mut OperatorSemigroupSample, t: f64, i: usize, j: usize, f: f64) {
    let k = sample.index_of(t).expect("fixture time present");
    sample.operators[k].matrix_mut()[(i, j)] *= f;
}

fn atom_flow() -> Semiflow {
    Semiflow::SingularInner {
        measure: SingularMeasure::single(0.0, 1.0).expect("valid atom"),
    }
}

/// Rotation flow at `{0.4, 0.6, 1}`, `N = 16`; corrupted by scaling one entry
/// of `V_1` by 1.01.
pub fn law_samples() -> Result<(OperatorSemigroupSample, OperatorSemigroupSample)> {
    let flow = Semiflow::EllipticAutomorphism {
        alpha: C64::new(0.0, 0.0),
        theta: 1.3,
    };
    let exact = sample_flow(&flow, &[0.4, 0.6, 1.0], 16, &TaylorOptions::default())?;
    let mut bad = exact.clone();
    scale_entry(&mut bad, 1.0, 1, 1, 1.01);
    Ok((exact, bad))
}

/// Singular-inner Toeplitz sample at `{0.5, 1}`, `N = 64`; corrupted by
/// scaling one entry of `V_1` by 1.01.
pub fn isometry_samples() -> Result<(OperatorSemigroupSample, OperatorSemigroupSample)> {
    let exact = sample_flow(&atom_flow(), &[0.5, 1.0], 64, &TaylorOptions::default())?;
    let mut bad = exact.clone();
    scale_entry(&mut bad, 1.0, 4, 1, 1.01);
    Ok((exact, bad))
}

/// Shift-embedding sample of `ψ = z²` at `t = 1/2`, `N = 8`; corrupted by
/// zeroing the column of `e₁`.
pub fn noncompactness_samples() -> Result<(OperatorSemigroupSample, OperatorSemigroupSample)> {
    let exact = embed_isometric_composition(&BlaschkeProduct::monomial(2), &[0.5], 8, 0.5, &WoldOptions::default())?
        .sample;
    let mut bad = exact.clone();
    bad.operators[0].matrix_mut().column_mut(1).fill(C64::new(0.0, 0.0));
    Ok((exact, bad))
}

/// Singular-inner flow at `t = 2^{-k}`, `k = 0..6`, `N = 32`; corrupted by
/// replacing `V_{1/64}` with `½·I`.
pub fn continuity_samples() -> Result<(OperatorSemigroupSample, OperatorSemigroupSample)> {
    let times: Vec<f64> = (0..=6).map(|k| 0.5f64.powi(k)).collect();
    let exact = sample_flow(&atom_flow(), &times, 32, &TaylorOptions::default())?;
    let mut bad = exact.clone();
    let k = bad.index_of(1.0 / 64.0).expect("fixture time present");
    bad.operators[k] = crate::hardy::TruncatedOperator::new(
        nalgebra::DMatrix::identity(32, 32) * C64::new(0.5, 0.0),
    )?;
    Ok((exact, bad))
}

/// Wold decomposition of `ψ = z²`, `N = 8`; corrupted by scaling the level-1
/// vector by 1.01.
pub fn wold_fixtures() -> Result<(WoldDecomposition, WoldDecomposition)> {
    let exact = wold_decompose(&BlaschkeProduct::monomial(2), 8, &WoldOptions::default())?;
    let mut bad = exact.clone();
    for v in bad.levels[1][0].vector.iter_mut() {
        *v *= 1.01;
    }
    Ok((exact, bad))
}

/// `w = (z − ½)/(1 − z/2)` against `w = (1 + z²)/√2`, both with `φ = z²`.
pub fn weighted_reports() -> Result<(WeightedIsometryReport, WeightedIsometryReport)> {
    let psi = BlaschkeProduct::monomial(2);
    let b = BlaschkeProduct::new(
        0.0,
        0,
        vec![BlaschkeZero {
            alpha: C64::new(0.5, 0.0),
            multiplicity: 1,
        }],
    )?;
    let w = build_weight(&b, &psi)?;
    let exact = verify_weighted_isometry(&w, &psi, 16, 4096);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bad_w = FnSymbol::new("(1+z^2)/sqrt2", move |z: C64| (z * z + 1.0) * s);
    let bad = verify_weighted_isometry(&bad_w, &psi, 16, 4096);
    Ok((exact, bad))
}

/// Runs every check on its exact and corrupted fixture.
pub fn fixture_pairs() -> Result<Vec<FixturePair>> {
    let pair = |check: &str, exact, corrupted| FixturePair {
        check: check.to_string(),
        exact,
        corrupted,
    };
    let mut out = Vec::with_capacity(6);

    let (a, b) = law_samples()?;
    let pairs = [(0.4, 0.6)];
    out.push(pair(
        "semigroup_law",
        check_semigroup_law(&a, &pairs, LAW_TOL)?,
        check_semigroup_law(&b, &pairs, LAW_TOL)?,
    ));

    let (a, b) = isometry_samples()?;
    out.push(pair("isometry", check_isometry(&a, ISOMETRY_TOL), check_isometry(&b, ISOMETRY_TOL)));

    let (a, b) = noncompactness_samples()?;
    out.push(pair(
        "noncompactness_proxy",
        check_noncompactness_proxy(&a, 4, NONCOMPACT_TOL),
        check_noncompactness_proxy(&b, 4, NONCOMPACT_TOL),
    ));

    let (a, b) = continuity_samples()?;
    let x = [unit(32, 0)];
    out.push(pair(
        "strong_continuity",
        check_strong_continuity(&a, &x, CONTINUITY_TOL),
        check_strong_continuity(&b, &x, CONTINUITY_TOL),
    ));

    let (a, b) = wold_fixtures()?;
    out.push(pair(
        "wold_reconstruction",
        check_wold_decomposition(&a, WOLD_TOL),
        check_wold_decomposition(&b, WOLD_TOL),
    ));

    let (a, b) = weighted_reports()?;
    out.push(pair(
        "weighted_isometry",
        check_weighted_isometry(&a, WEIGHTED_TOL),
        check_weighted_isometry(&b, WEIGHTED_TOL),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pairs_sound() {
        let pairs = fixture_pairs().unwrap();
        assert_eq!(pairs.len(), 6);
        for p in &pairs {
            assert!(p.sound(), "{}: exact {:e}, corrupted {:e}", p.check, p.exact.max_defect, p.corrupted.max_defect);
        }
    }
}
