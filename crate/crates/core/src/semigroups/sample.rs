use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::Semiflow;
use crate::exec;
use crate::hardy::{composition_matrix, toeplitz_from_coeffs, TruncatedOperator};
use crate::symbols::{boundary_nodes, TaylorOptions};
use crate::{Error, Result, C64};

/// Boundary nodes at which inner multiplication flows are tabulated.
pub const BOUNDARY_SAMPLES: usize = 1024;

/// `T_t` compressed to `H²_N` at a finite set of times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSemigroupSample {
    pub times: Vec<f64>,
    pub operators: Vec<TruncatedOperator>,
    pub construction: String,
    /// Orthonormal basis of the subspace on which the sample is trusted;
    /// `None` means all of `H²_N`.
    pub resolved: Option<Vec<Vec<C64>>>,
    pub isometric: bool,
    /// `φ_t` on `BOUNDARY_SAMPLES` boundary nodes, for Toeplitz samples.
    pub boundary_values: Option<Vec<Vec<C64>>>,
}

impl OperatorSemigroupSample {
    pub fn n(&self) -> usize {
        self.operators.first().map_or(0, TruncatedOperator::n)
    }

    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0))
    }

    pub fn operator_at(&self, t: f64) -> Option<&TruncatedOperator> {
        self.index_of(t).map(|i| &self.operators[i])
    }

    /// Columns form an orthonormal basis of the resolved subspace.
    pub fn resolved_basis(&self) -> DMatrix<C64> {
        let n = self.n();
        match &self.resolved {
            None => DMatrix::identity(n, n),
            Some(vs) => DMatrix::from_fn(n, vs.len(), |i, j| vs[j][i]),
        }
    }
}

pub(crate) fn normalized_times(times: &[f64]) -> Result<Vec<f64>> {
    let mut ts = times.to_vec();
    if let Some(t) = ts.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::DomainError(format!("time {t} must be a nonnegative real")));
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    Ok(ts)
}

/// Truncated operators `T_t` for an explicit semiflow: Toeplitz operators for
/// multiplication flows, composition operators otherwise.
pub fn sample_flow(
    flow: &Semiflow,
    times: &[f64],
    n: usize,
    opts: &TaylorOptions,
) -> Result<OperatorSemigroupSample> {
    let times = normalized_times(times)?;
    let isometric = flow.is_isometric();
    if flow.is_multiplicative() {
        let ops = exec::map_slice(&times, |&t| {
            flow.taylor_at(t, n, opts).map(|c| toeplitz_from_coeffs(&c, n))
        });
        let operators = ops.into_iter().collect::<Result<Vec<_>>>()?;
        let boundary_values = if isometric {
            let nodes = boundary_nodes(BOUNDARY_SAMPLES);
            let vals = times
                .iter()
                .map(|&t| {
                    let f = flow.at(t)?;
                    Ok(nodes.iter().map(|&z| f.eval(z)).collect())
                })
                .collect::<Result<Vec<Vec<C64>>>>()?;
            Some(vals)
        } else {
            None
        };
        Ok(OperatorSemigroupSample {
            times,
            operators,
            construction: format!("Toeplitz semigroup T_(phi_t), {}", flow.describe()),
            resolved: None,
            isometric,
            boundary_values,
        })
    } else {
        let ops = times
            .iter()
            .map(|&t| composition_matrix(flow.at(t)?.as_ref(), n, opts))
            .collect::<Result<Vec<_>>>()?;
        Ok(OperatorSemigroupSample {
            times,
            operators: ops,
            construction: format!("composition semigroup C_(phi_t), {}", flow.describe()),
            resolved: None,
            isometric,
            boundary_values: None,
        })
    }
}
