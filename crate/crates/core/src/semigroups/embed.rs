use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::sample::{normalized_times, OperatorSemigroupSample};
use super::shift::{shift_semigroup_apply, HalfLineVector, TimeMode};
use crate::hardy::{wold_decompose, TruncatedOperator, WoldDecomposition, WoldOptions};
use crate::symbols::Analytic;
use crate::{Error, Result, C64};

/// An isometric composition operator `C_ψ` realised as `V_1` of an isometric
/// semigroup `V_t = U*(𝟙 ⊕ S_t)U`, with `S_t` the shift on
/// `L²(ℝ₊, ℂ^fiber_dim)` and `U` sending `C_ψⁿ w_j` to the indicator of cell
/// `n·m + (j mod m)` in fiber `⌊j/m⌋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftEmbedding {
    pub sample: OperatorSemigroupSample,
    pub wold: WoldDecomposition,
    pub cells_per_unit: usize,
    pub fiber_dim: usize,
}

fn cells_per_unit(h: f64) -> Result<usize> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::DomainError(format!("grid step {h} must lie in (0, 1]")));
    }
    let m = (1.0 / h).round();
    if (m * h - 1.0).abs() > 1e-9 {
        return Err(Error::DomainError(format!("grid step {h} is not 1/m for an integer m")));
    }
    Ok(m as usize)
}

fn steps(t: f64, m: usize) -> Result<usize> {
    let k = t * m as f64;
    if (k - k.round()).abs() > 1e-9 * k.max(1.0) {
        return Err(Error::FractionalTime(t));
    }
    Ok(k.round() as usize)
}

/// Construction of `(V_t)` sampled at `times`, each a multiple of `h`.
pub fn embed_isometric_composition<F: Analytic + ?Sized>(
    psi: &F,
    times: &[f64],
    n: usize,
    h: f64,
    opts: &WoldOptions,
) -> Result<ShiftEmbedding> {
    let m = cells_per_unit(h)?;
    let times = normalized_times(times)?;
    let ks = times.iter().map(|&t| steps(t, m)).collect::<Result<Vec<_>>>()?;
    let k_max = ks.iter().copied().max().unwrap_or(0);
    let wold = wold_decompose(psi, n, opts)?;

    let dim_w = wold.wandering_basis.len().max(1);
    let fiber_dim = dim_w.div_ceil(m);
    let horizon = (wold.levels.len() + 1) * m + k_max + 1;
    let amp = C64::new(1.0 / h.sqrt(), 0.0);

    // (level, j, vector, image index per time step 0..=k_max)
    let mut entries: Vec<(DVector<C64>, Vec<Option<DVector<C64>>>)> = Vec::new();
    for (level, lv) in wold.levels.iter().enumerate() {
        for v in lv {
            let j = v.wandering_index;
            let mut f = HalfLineVector::zeros(m, fiber_dim, horizon);
            f.cells[level * m + j % m][j / m] = amp;
            let mut images = Vec::with_capacity(k_max + 1);
            for k in 0..=k_max {
                let g = shift_semigroup_apply(&f, k as f64 / m as f64, TimeMode::Exact)?.vector;
                let (cell, fiber) = g
                    .cells
                    .iter()
                    .enumerate()
                    .find_map(|(c, vals)| vals.iter().position(|x| x.norm() != 0.0).map(|p| (c, p)))
                    .expect("shift of an indicator is nonzero");
                let (lvl, jj) = (cell / m, fiber * m + cell % m);
                images.push(wold.find(lvl, jj).map(DVector::from_column_slice));
            }
            entries.push((DVector::from_column_slice(&v.vector), images));
        }
    }

    let e0 = DVector::from_column_slice(&wold.unitary_basis[0]);
    let operators = ks
        .iter()
        .map(|&k| {
            if k == 0 {
                return TruncatedOperator::identity(n);
            }
            let mut mat: DMatrix<C64> = &e0 * e0.adjoint();
            for (x, images) in &entries {
                if let Some(y) = &images[k] {
                    mat += y * x.adjoint();
                }
            }
            TruncatedOperator::new(mat).expect("square by construction")
        })
        .collect();

    let mut resolved = vec![wold.unitary_basis[0].clone()];
    resolved.extend(
        entries
            .iter()
            .filter(|(_, images)| images.iter().all(Option::is_some))
            .map(|(x, _)| x.as_slice().to_vec()),
    );

    Ok(ShiftEmbedding {
        sample: OperatorSemigroupSample {
            times,
            operators,
            construction: format!(
                "shift embedding of C_psi on the Wold decomposition, psi = {}, h = 1/{m}",
                psi.describe()
            ),
            resolved: Some(resolved),
            isometric: true,
            boundary_values: None,
        },
        wold,
        cells_per_unit: m,
        fiber_dim,
    })
}

/// `A V_t A⁻¹`, trusted on the span of `A r` over resolved vectors `r` for
/// which `A⁻¹A r ≈ r` and `A⁻¹A V_t r ≈ V_t r` within `tol`.
pub fn conjugate_semigroup(
    a: &TruncatedOperator,
    a_inv: &TruncatedOperator,
    sample: &OperatorSemigroupSample,
    tol: f64,
) -> Result<OperatorSemigroupSample> {
    let n = sample.n();
    if a.n() != n || a_inv.n() != n {
        return Err(Error::BadInverse(format!(
            "dimension mismatch: A is {}, A^-1 is {}, sample is {n}",
            a.n(),
            a_inv.n()
        )));
    }
    let round_trip = |x: &DVector<C64>| (a_inv.apply(&a.apply(x)) - x).norm();
    let r = sample.resolved_basis();
    let mut basis: Vec<DVector<C64>> = Vec::new();
    for col in r.column_iter() {
        let x: DVector<C64> = col.into_owned();
        if round_trip(&x) > tol || sample.operators.iter().any(|v| round_trip(&v.apply(&x)) > tol) {
            continue;
        }
        let mut y = a.apply(&x);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&y);
                y -= b * c;
            }
        }
        let ny = y.norm();
        if ny > 1e-8 {
            basis.push(y / C64::new(ny, 0.0));
        }
    }
    if basis.is_empty() {
        return Err(Error::BadInverse(format!(
            "no resolved vector survives the round trip A^-1 A at tolerance {tol:e}"
        )));
    }
    let operators = sample
        .operators
        .iter()
        .map(|v| a.compose(v).compose(a_inv))
        .collect();
    Ok(OperatorSemigroupSample {
        times: sample.times.clone(),
        operators,
        construction: format!("conjugate A V_t A^-1 of [{}]", sample.construction),
        resolved: Some(basis.iter().map(|b| b.as_slice().to_vec()).collect()),
        isometric: false,
        boundary_values: None,
    })
}
