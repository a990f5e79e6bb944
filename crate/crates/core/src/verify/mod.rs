//! Numerical checks over sampled semigroups. Each check returns a
//! [`VerificationRecord`] carrying the threshold it was judged against.

pub mod fixtures;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::decisions::WeightedIsometryReport;
use crate::hardy::{operator_norm, wold_decompose, WoldDecomposition, WoldOptions};
use crate::semigroups::{embed_isometric_composition, OperatorSemigroupSample};
use crate::symbols::Analytic;
use crate::{Error, Result, C64};

/// Tolerance for deciding that a monomial lies in the resolved subspace.
const RESOLVED_MEMBERSHIP_TOL: f64 = 1e-9;
/// Slack allowed in the monotone decrease of strong-continuity defects.
const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: String,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub check: String,
    pub applicable: bool,
    pub max_defect: f64,
    pub threshold: f64,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationRecord {
    fn from_witnesses(check: &str, threshold: f64, witnesses: Vec<Witness>) -> Self {
        let max_defect = witnesses.iter().map(|w| w.defect).fold(0.0, f64::max);
        Self {
            check: check.to_string(),
            applicable: true,
            max_defect,
            threshold,
            pass: max_defect <= threshold,
            witnesses,
            note: None,
        }
    }

    fn inapplicable(check: &str, threshold: f64, reason: impl Into<String>) -> Self {
        Self {
            check: check.to_string(),
            applicable: false,
            max_defect: 0.0,
            threshold,
            pass: true,
            witnesses: Vec::new(),
            note: Some(reason.into()),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// True when the check applies and fails.
    pub fn failed(&self) -> bool {
        self.applicable && !self.pass
    }
}

fn time_index(sample: &OperatorSemigroupSample, t: f64) -> Result<usize> {
    sample.index_of(t).ok_or(Error::MissingTime(t))
}

/// `max ‖(V_{t+s} − V_t V_s) R‖` over `pairs`, with `R` the resolved basis.
pub fn check_semigroup_law(
    sample: &OperatorSemigroupSample,
    pairs: &[(f64, f64)],
    tol: f64,
) -> Result<VerificationRecord> {
    let r = sample.resolved_basis();
    let witnesses = pairs
        .iter()
        .map(|&(t, s)| {
            let vt = sample.operators[time_index(sample, t)?].matrix();
            let vs = sample.operators[time_index(sample, s)?].matrix();
            let vts = sample.operators[time_index(sample, t + s)?].matrix();
            Ok(Witness {
                inputs: format!("t = {t}, s = {s}"),
                defect: operator_norm(&((vts - vt * vs) * &r)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationRecord::from_witnesses("semigroup_law", tol, witnesses))
}

/// Deviation of a Toeplitz sample matrix from the symbol it was built from:
/// loss of Toeplitz structure, or column-0 energy exceeding `‖φ_t‖₂²`.
fn toeplitz_consistency(op: &DMatrix<C64>, boundary: &[C64]) -> f64 {
    let n = op.nrows();
    let structure = crate::hardy::TruncatedOperator::new(op.clone())
        .map(|t| t.toeplitz_defect())
        .unwrap_or(f64::INFINITY);
    let energy: f64 = (0..n).map(|i| op[(i, 0)].norm_sqr()).sum();
    let bessel = (energy - boundary_norm(boundary).powi(2)).max(0.0);
    structure.max(bessel)
}

fn boundary_norm(values: &[C64]) -> f64 {
    (values.iter().map(|v| v.norm_sqr()).sum::<f64>() / values.len() as f64).sqrt()
}

/// Monomials `e_k`, `k ≤ n_max`, lying in the resolved subspace.
fn resolved_monomials(sample: &OperatorSemigroupSample, n_max: usize) -> Vec<usize> {
    let r = sample.resolved_basis();
    (0..=n_max.min(sample.n().saturating_sub(1)))
        .filter(|&k| {
            let e = DVector::from_fn(sample.n(), |i, _| C64::new(if i == k { 1.0 } else { 0.0 }, 0.0));
            (&e - &r * (r.adjoint() * &e)).norm() <= RESOLVED_MEMBERSHIP_TOL
        })
        .collect()
}

/// `max |‖V_t x‖ − 1|` over the resolved orthonormal basis. Toeplitz samples
/// use `‖φ_t‖₂` by boundary quadrature plus a matrix consistency term.
pub fn check_isometry(sample: &OperatorSemigroupSample, tol: f64) -> VerificationRecord {
    const NAME: &str = "isometry";
    if !sample.isometric {
        return VerificationRecord::inapplicable(NAME, tol, "sample is not built from an isometric embedding");
    }
    let mut witnesses = Vec::new();
    match &sample.boundary_values {
        Some(bv) => {
            for ((t, op), vals) in sample.times.iter().zip(&sample.operators).zip(bv) {
                let d = (boundary_norm(vals) - 1.0).abs();
                witnesses.push(Witness {
                    inputs: format!("t = {t}"),
                    defect: d.max(toeplitz_consistency(op.matrix(), vals)),
                });
            }
        }
        None => {
            let r = sample.resolved_basis();
            for (t, op) in sample.times.iter().zip(&sample.operators) {
                let img = op.matrix() * &r;
                for (j, col) in img.column_iter().enumerate() {
                    witnesses.push(Witness {
                        inputs: format!("t = {t}, basis vector {j}"),
                        defect: (col.norm() - 1.0).abs(),
                    });
                }
            }
        }
    }
    VerificationRecord::from_witnesses(NAME, tol, witnesses)
}

/// Lower bound `‖V_t e_n‖ ≥ 1 − tol` for resolved monomials `e_n`, `n ≤ n_max`;
/// the defect is `max(0, 1 − ‖V_t e_n‖)`.
pub fn check_noncompactness_proxy(
    sample: &OperatorSemigroupSample,
    n_max: usize,
    tol: f64,
) -> VerificationRecord {
    const NAME: &str = "noncompactness_proxy";
    if !sample.isometric {
        return VerificationRecord::inapplicable(NAME, tol, "sample is not built from an isometric embedding");
    }
    let mut witnesses = Vec::new();
    match &sample.boundary_values {
        Some(bv) => {
            for ((t, op), vals) in sample.times.iter().zip(&sample.operators).zip(bv) {
                let lower = (1.0 - boundary_norm(vals)).max(0.0);
                let d = lower.max(toeplitz_consistency(op.matrix(), vals));
                for k in 0..=n_max.min(sample.n() - 1) {
                    witnesses.push(Witness {
                        inputs: format!("t = {t}, n = {k}"),
                        defect: d,
                    });
                }
            }
        }
        None => {
            let ks = resolved_monomials(sample, n_max);
            for (t, op) in sample.times.iter().zip(&sample.operators) {
                for &k in &ks {
                    witnesses.push(Witness {
                        inputs: format!("t = {t}, n = {k}"),
                        defect: (1.0 - op.matrix().column(k).norm()).max(0.0),
                    });
                }
            }
        }
    }
    VerificationRecord::from_witnesses(NAME, tol, witnesses)
}

/// Along the sample times in decreasing order, `‖V_t x − x‖` must decrease
/// and end below `tol`. A rise by `v` is reported as a defect `tol + v`.
pub fn check_strong_continuity(
    sample: &OperatorSemigroupSample,
    vectors: &[DVector<C64>],
    tol: f64,
) -> VerificationRecord {
    const NAME: &str = "strong_continuity";
    let mut order: Vec<usize> = (0..sample.times.len()).filter(|&i| sample.times[i] > 0.0).collect();
    if order.is_empty() {
        return VerificationRecord::inapplicable(NAME, tol, "no positive sample times");
    }
    order.sort_by(|&a, &b| sample.times[b].total_cmp(&sample.times[a]));
    let witnesses = vectors
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let ds: Vec<f64> = order
                .iter()
                .map(|&i| (sample.operators[i].apply(x) - x).norm())
                .collect();
            let rise = ds.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            let last = *ds.last().expect("nonempty");
            let defect = if rise > MONOTONE_SLACK { last.max(tol + rise) } else { last };
            Witness {
                inputs: format!("vector {j}, t ↓ {}", sample.times[*order.last().expect("nonempty")]),
                defect,
            }
        })
        .collect();
    VerificationRecord::from_witnesses(NAME, tol, witnesses)
}

/// Checks a Wold decomposition against its own compressed `C_ψ`: dimension
/// count, orthonormality, and `C_ψ x_{n,j} = x_{n+1,j}` along levels.
pub fn check_wold_decomposition(wold: &WoldDecomposition, tol: f64) -> VerificationRecord {
    let mut witnesses = Vec::new();
    let counted = wold.unitary_basis.len() + wold.resolved_count() + wold.residual_dim;
    witnesses.push(Witness {
        inputs: format!("dimension count {counted} vs N = {}", wold.n),
        defect: (counted as f64 - wold.n as f64).abs(),
    });
    witnesses.push(Witness {
        inputs: "orthonormality".into(),
        defect: wold.orthonormality_defect(),
    });
    let mut transition: f64 = 0.0;
    for (level, lv) in wold.levels.iter().enumerate() {
        for v in lv {
            if let Some(next) = wold.find(level + 1, v.wandering_index) {
                let y = wold.composition.apply(&DVector::from_column_slice(&v.vector));
                transition = transition.max((y - DVector::from_column_slice(next)).norm());
            }
        }
    }
    witnesses.push(Witness {
        inputs: "level transitions".into(),
        defect: transition,
    });
    VerificationRecord::from_witnesses("wold_reconstruction", tol, witnesses)
}

/// Wold decomposition of `C_ψ` in `H²_N` plus agreement of `V_1` from the
/// shift embedding with `C_ψ` on the resolved subspace.
pub fn check_wold_reconstruction<F: Analytic + ?Sized>(
    psi: &F,
    n: usize,
    tol: f64,
) -> Result<VerificationRecord> {
    let opts = WoldOptions::default();
    let wold = match wold_decompose(psi, n, &opts) {
        Ok(w) => w,
        Err(Error::UnsupportedCase(msg)) => {
            return Ok(VerificationRecord::inapplicable("wold_reconstruction", tol, msg))
        }
        Err(e) => return Err(e),
    };
    let mut rec = check_wold_decomposition(&wold, tol);
    let emb = embed_isometric_composition(psi, &[1.0], n, 1.0, &opts)?;
    let r = emb.sample.resolved_basis();
    let d = operator_norm(&((emb.sample.operators[0].matrix() - wold.composition.matrix()) * &r));
    rec.witnesses.push(Witness {
        inputs: "V_1 vs C_psi on the resolved subspace".into(),
        defect: d,
    });
    rec.max_defect = rec.max_defect.max(d);
    rec.pass = rec.max_defect <= tol;
    Ok(rec)
}

/// `‖w‖₂ = 1` and `⟨w, wφⁿ⟩₂ = 0` as a record.
pub fn check_weighted_isometry(report: &WeightedIsometryReport, tol: f64) -> VerificationRecord {
    let mut witnesses = vec![Witness {
        inputs: "norm".into(),
        defect: report.norm_defect,
    }];
    witnesses.extend(report.inner_products.iter().enumerate().map(|(k, v)| Witness {
        inputs: format!("<w, w phi^{}>", k + 1),
        defect: v.norm(),
    }));
    VerificationRecord::from_witnesses("weighted_isometry", tol, witnesses)
        .with_note(format!("norm = {}", report.norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::hardy::TruncatedOperator;
    use crate::semigroups::{sample_flow, Semiflow};
    use crate::symbols::{BlaschkeProduct, MobiusMap, SingularMeasure, TaylorOptions};

    fn identity_sample(times: &[f64], n: usize) -> OperatorSemigroupSample {
        OperatorSemigroupSample {
            times: times.to_vec(),
            operators: times.iter().map(|_| TruncatedOperator::identity(n)).collect(),
            construction: "identity".into(),
            resolved: None,
            isometric: true,
            boundary_values: None,
        }
    }

    #[test]
    fn identity_semigroup() {
        let s = identity_sample(&[0.0, 0.5, 1.0], 8);
        let r = check_semigroup_law(&s, &[(0.5, 0.5), (0.0, 1.0)], 0.0).unwrap();
        assert!(r.pass && r.max_defect == 0.0);
        assert!(check_isometry(&s, 0.0).pass);
        let e1 = DVector::from_fn(8, |i, _| c(if i == 1 { 1.0 } else { 0.0 }, 0.0));
        let rec = check_strong_continuity(&s, &[e1], 0.0);
        assert!(rec.pass && rec.max_defect == 0.0);
    }

    #[test]
    fn missing_time() {
        let s = identity_sample(&[0.0, 0.5], 4);
        assert_eq!(check_semigroup_law(&s, &[(0.5, 0.5)], 1e-9), Err(Error::MissingTime(1.0)));
    }

    #[test]
    fn elliptic_law() {
        let flow = Semiflow::EllipticAutomorphism { alpha: c(0.0, 0.0), theta: 1.3 };
        let s = sample_flow(&flow, &[0.4, 0.6, 1.0], 16, &TaylorOptions::default()).unwrap();
        let r = check_semigroup_law(&s, &[(0.4, 0.6)], 1e-9).unwrap();
        assert!(r.pass, "{}", r.max_defect);
    }

    #[test]
    fn outer_flow_is_inapplicable() {
        let outer = crate::symbols::RationalOuter::new(c(1.0, 0.0), vec![], vec![c(2.0, 0.0)]).unwrap();
        let s = sample_flow(&Semiflow::Outer { outer }, &[1.0], 8, &TaylorOptions::default()).unwrap();
        let r = check_isometry(&s, 1e-6);
        assert!(!r.applicable && !r.failed());
        assert!(!check_noncompactness_proxy(&s, 8, 1e-6).applicable);
    }

    #[test]
    fn singular_continuity_decreases() {
        let flow = Semiflow::SingularInner { measure: SingularMeasure::single(0.0, 1.0).unwrap() };
        let times: Vec<f64> = (0..=6).map(|k| 0.5f64.powi(k)).collect();
        let s = sample_flow(&flow, &times, 32, &TaylorOptions::default()).unwrap();
        let e0 = DVector::from_fn(32, |i, _| c(if i == 0 { 1.0 } else { 0.0 }, 0.0));
        let r = check_strong_continuity(&s, &[e0], 0.2);
        assert!(r.pass, "{}", r.max_defect);
    }

    #[test]
    fn elliptic_continuity_decreases() {
        let flow = Semiflow::EllipticAutomorphism { alpha: c(0.5, 0.0), theta: std::f64::consts::FRAC_PI_3 };
        let times: Vec<f64> = (0..=6).map(|k| 0.5f64.powi(k)).collect();
        let s = sample_flow(&flow, &times, 32, &TaylorOptions::default()).unwrap();
        let e1 = DVector::from_fn(32, |i, _| c(if i == 1 { 1.0 } else { 0.0 }, 0.0));
        let r = check_strong_continuity(&s, &[e1], 0.2);
        assert!(r.pass, "{}", r.max_defect);
    }

    #[test]
    fn wold_examples() {
        let r = check_wold_reconstruction(&BlaschkeProduct::monomial(2), 8, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        let r = check_wold_reconstruction(&BlaschkeProduct::monomial(3), 9, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        let rot = MobiusMap::rotation(std::f64::consts::FRAC_PI_2);
        let r = check_wold_reconstruction(&rot, 8, 1e-8).unwrap();
        assert!(!r.applicable);
    }

    #[test]
    fn shift_sample_noncompactness() {
        let emb = embed_isometric_composition(&BlaschkeProduct::monomial(2), &[0.5], 8, 0.5, &WoldOptions::default())
            .unwrap();
        let r = check_noncompactness_proxy(&emb.sample, 4, 1e-7);
        assert!(r.pass && !r.witnesses.is_empty(), "{r:?}");
        assert!(check_isometry(&emb.sample, 1e-7).pass);
    }
}
