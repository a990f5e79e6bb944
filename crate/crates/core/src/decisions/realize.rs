use std::sync::Arc;

use super::Construction;
use crate::hardy::{composition_matrix, WoldOptions};
use crate::semigroups::{conjugate_semigroup, embed_isometric_composition, sample_flow, OperatorSemigroupSample};
use crate::symbols::{Composed, MobiusMap, SymbolRef, TaylorOptions};
use crate::{Error, Result};

const MAX_CELLS_PER_UNIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizeOptions {
    pub n: usize,
    /// Shift-embedding grid step `1/m`; `None` picks the coarsest grid
    /// containing every requested time.
    pub grid_step: Option<f64>,
    /// Round-trip tolerance for `C_τ` conjugation.
    pub tol: f64,
    pub taylor: TaylorOptions,
    pub wold: WoldOptions,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        Self {
            n: 32,
            grid_step: None,
            tol: 1e-6,
            taylor: TaylorOptions::default(),
            wold: WoldOptions::default(),
        }
    }
}

fn auto_grid(times: &[f64]) -> Result<f64> {
    (1..=MAX_CELLS_PER_UNIT)
        .find(|&m| {
            times.iter().all(|&t| {
                let k = t * m as f64;
                (k - k.round()).abs() <= 1e-9 * k.max(1.0)
            })
        })
        .map(|m| 1.0 / m as f64)
        .ok_or_else(|| {
            let t = times
                .iter()
                .copied()
                .find(|&t| (t * MAX_CELLS_PER_UNIT as f64).fract().abs() > 1e-9)
                .unwrap_or(f64::NAN);
            Error::FractionalTime(t)
        })
}

/// Samples the semigroup described by `construction` at `times` in `H²_N`.
/// `phi` is the composition symbol, needed for shift embeddings.
pub fn realize(
    construction: &Construction,
    phi: Option<&SymbolRef>,
    times: &[f64],
    opts: &RealizeOptions,
) -> Result<OperatorSemigroupSample> {
    match construction {
        Construction::ToeplitzFlow { flow } | Construction::CompositionFlow { flow } => {
            sample_flow(flow, times, opts.n, &opts.taylor)
        }
        Construction::ShiftEmbedding { fixed_point } => {
            let phi = phi.ok_or_else(|| {
                Error::UnsupportedCase("shift embedding requires the composition symbol".into())
            })?;
            let h = match opts.grid_step {
                Some(h) => h,
                None => auto_grid(times)?,
            };
            let alpha = *fixed_point;
            if alpha.norm() == 0.0 {
                return Ok(embed_isometric_composition(phi.as_ref(), times, opts.n, h, &opts.wold)?.sample);
            }
            let tau: SymbolRef = Arc::new(MobiusMap::tau(alpha));
            let psi = Composed {
                outer: tau.clone(),
                inner: Arc::new(Composed {
                    outer: phi.clone(),
                    inner: tau.clone(),
                }),
            };
            let inner = embed_isometric_composition(&psi, times, opts.n, h, &opts.wold)?;
            let a = composition_matrix(tau.as_ref(), opts.n, &opts.taylor)?;
            conjugate_semigroup(&a, &a, &inner.sample, opts.tol)
        }
    }
}
