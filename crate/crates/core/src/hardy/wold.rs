use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{boundary_gram, composition_matrix, identity_defect, TruncatedOperator};
use crate::symbols::{Analytic, TaylorOptions};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WoldOptions {
    /// Relative singular-value cutoff for the image of `C_ψ`.
    pub rank_tol: f64,
    /// A level vector is kept when `1 − ‖C_ψ x‖ ≤ level_loss_tol`.
    pub level_loss_tol: f64,
    /// Largest tolerated `|⟨x, y⟩|` between kept vectors.
    pub orthogonality_tol: f64,
    /// Largest tolerated deviation of the boundary Gram matrix from `I`.
    pub gram_tol: f64,
    pub gram_degree: usize,
    pub quadrature_nodes: usize,
    pub taylor: TaylorOptions,
}

impl Default for WoldOptions {
    fn default() -> Self {
        Self {
            rank_tol: 1e-8,
            level_loss_tol: 1e-8,
            orthogonality_tol: 1e-8,
            gram_tol: 1e-8,
            gram_degree: 8,
            quadrature_nodes: 4096,
            taylor: TaylorOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelVector {
    /// Index into the wandering basis this vector descends from.
    pub wandering_index: usize,
    pub vector: Vec<C64>,
}

/// `H²_N ≈ ℂ𝟙 ⊕ W ⊕ C_ψW ⊕ C_ψ²W ⊕ … ⊕ residual`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WoldDecomposition {
    pub n: usize,
    pub unitary_basis: Vec<Vec<C64>>,
    pub wandering_basis: Vec<Vec<C64>>,
    /// `levels[0]` is the wandering basis itself.
    pub levels: Vec<Vec<LevelVector>>,
    pub residual_dim: usize,
    pub composition: TruncatedOperator,
}

impl WoldDecomposition {
    /// Level vector `C_ψ^level w_j`, if resolved.
    pub fn find(&self, level: usize, wandering_index: usize) -> Option<&[C64]> {
        self.levels
            .get(level)?
            .iter()
            .find(|v| v.wandering_index == wandering_index)
            .map(|v| v.vector.as_slice())
    }

    pub fn resolved_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Largest `|⟨x, y⟩ − δ_{xy}|` over the constants and all level vectors.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut all: Vec<DVector<C64>> = self
            .unitary_basis
            .iter()
            .map(|v| DVector::from_column_slice(v))
            .collect();
        for l in &self.levels {
            all.extend(l.iter().map(|v| DVector::from_column_slice(&v.vector)));
        }
        let mut d: f64 = 0.0;
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate().take(i + 1) {
                let expect = if i == j { 1.0 } else { 0.0 };
                d = d.max((a.dotc(b) - C64::new(expect, 0.0)).norm());
            }
        }
        d
    }
}

fn unit(n: usize, k: usize) -> DVector<C64> {
    let mut v = DVector::zeros(n);
    v[k] = C64::new(1.0, 0.0);
    v
}

/// Wold decomposition of the compressed isometry `C_ψ` for inner `ψ` with
/// `ψ(0) = 0` that is not a rotation.
pub fn wold_decompose<F: Analytic + ?Sized>(
    psi: &F,
    n: usize,
    opts: &WoldOptions,
) -> Result<WoldDecomposition> {
    let zero = C64::new(0.0, 0.0);
    if psi.eval(zero).norm() > 1e-12 {
        return Err(Error::DomainError(format!("psi(0) = {} is not 0", psi.eval(zero))));
    }
    if psi.derivative(zero).norm() >= 1.0 - 1e-12 {
        return Err(Error::UnsupportedCase(
            "psi is a rotation: C_psi is unitary and has no wandering subspace".into(),
        ));
    }
    let g = boundary_gram(psi, opts.gram_degree, opts.quadrature_nodes)?;
    let gd = identity_defect(&g);
    if gd > opts.gram_tol {
        return Err(Error::IsometryDefect(format!(
            "boundary Gram deviates from the identity by {gd:e}"
        )));
    }

    let m = composition_matrix(psi, n, &opts.taylor)?;
    let svd = m.matrix().clone().svd(true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let null_cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= opts.rank_tol * smax)
        .collect();
    let q = DMatrix::from_fn(n, null_cols.len(), |i, j| u[(i, null_cols[j])]);

    // Wandering basis: Gram–Schmidt on the projections of e_1, e_2, …
    let mut wandering: Vec<DVector<C64>> = Vec::new();
    for k in 1..n {
        if wandering.len() == null_cols.len() {
            break;
        }
        let mut v = &q * (q.adjoint() * unit(n, k));
        for w in &wandering {
            let c = w.dotc(&v);
            v -= w * c;
        }
        let nv = v.norm();
        if nv > 1e-6 {
            wandering.push(v / C64::new(nv, 0.0));
        }
    }

    let mut kept: Vec<DVector<C64>> = vec![unit(n, 0)];
    kept.extend(wandering.iter().cloned());
    let mut levels = vec![wandering
        .iter()
        .enumerate()
        .map(|(j, w)| LevelVector {
            wandering_index: j,
            vector: w.as_slice().to_vec(),
        })
        .collect::<Vec<_>>()];

    loop {
        let prev = levels.last().expect("level 0 exists");
        if prev.is_empty() {
            break;
        }
        let mut next = Vec::new();
        let mut any_half = false;
        for lv in prev {
            let y = m.apply(&DVector::from_column_slice(&lv.vector));
            let norm = y.norm();
            if norm * norm > 0.5 {
                any_half = true;
            }
            if 1.0 - norm > opts.level_loss_tol {
                continue;
            }
            let y = y / C64::new(norm, 0.0);
            let ortho = kept.iter().map(|k| k.dotc(&y).norm()).fold(0.0, f64::max);
            if ortho > opts.orthogonality_tol {
                continue;
            }
            kept.push(y.clone());
            next.push(LevelVector {
                wandering_index: lv.wandering_index,
                vector: y.as_slice().to_vec(),
            });
        }
        if !any_half || next.is_empty() {
            break;
        }
        levels.push(next);
    }

    let resolved: usize = levels.iter().map(Vec::len).sum();
    Ok(WoldDecomposition {
        n,
        unitary_basis: vec![unit(n, 0).as_slice().to_vec()],
        wandering_basis: wandering.iter().map(|w| w.as_slice().to_vec()).collect(),
        levels,
        residual_dim: n - 1 - resolved,
        composition: m,
    })
}
