use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Step function on `ℝ₊` with values in `ℂ^fiber_dim`, constant on cells
/// `[kh, (k+1)h)` with `h = 1/cells_per_unit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfLineVector {
    pub cells_per_unit: usize,
    pub fiber_dim: usize,
    pub cells: Vec<Vec<C64>>,
}

impl HalfLineVector {
    pub fn zeros(cells_per_unit: usize, fiber_dim: usize, horizon: usize) -> Self {
        Self {
            cells_per_unit,
            fiber_dim,
            cells: vec![vec![C64::new(0.0, 0.0); fiber_dim]; horizon],
        }
    }

    pub fn grid_step(&self) -> f64 {
        1.0 / self.cells_per_unit as f64
    }

    pub fn horizon(&self) -> usize {
        self.cells.len()
    }

    /// `h · Σ ‖cell‖²`.
    pub fn norm_sq(&self) -> f64 {
        self.grid_step()
            * self
                .cells
                .iter()
                .flat_map(|c| c.iter())
                .map(|v| v.norm_sqr())
                .sum::<f64>()
    }

    fn last_nonzero(&self) -> Option<usize> {
        self.cells
            .iter()
            .rposition(|c| c.iter().any(|v| v.norm() != 0.0))
    }

    fn shifted(&self, k: usize) -> Result<Self> {
        if let Some(last) = self.last_nonzero() {
            if last + k >= self.horizon() {
                return Err(Error::HorizonOverflow(format!(
                    "shift by {k} cells moves mass at cell {last} past the horizon {}",
                    self.horizon()
                )));
            }
        }
        let mut out = Self::zeros(self.cells_per_unit, self.fiber_dim, self.horizon());
        for (i, c) in self.cells.iter().enumerate() {
            if i + k < self.horizon() {
                out.cells[i + k] = c.clone();
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeMode {
    /// Only multiples of the grid step.
    Exact,
    /// Off-grid times by linear interpolation between neighbouring shifts.
    Interpolate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftResult {
    pub vector: HalfLineVector,
    pub approximate: bool,
}

/// `(S_t f)(s) = f(s − t)` for `s ≥ t`, zero before.
pub fn shift_semigroup_apply(v: &HalfLineVector, t: f64, mode: TimeMode) -> Result<ShiftResult> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::DomainError(format!("time {t} must be a nonnegative real")));
    }
    let k = t * v.cells_per_unit as f64;
    let kr = k.round();
    if (k - kr).abs() <= 1e-9 * k.max(1.0) {
        return Ok(ShiftResult {
            vector: v.shifted(kr as usize)?,
            approximate: false,
        });
    }
    if mode == TimeMode::Exact {
        return Err(Error::FractionalTime(t));
    }
    let lo = k.floor();
    let frac = k - lo;
    let a = v.shifted(lo as usize)?;
    let b = v.shifted(lo as usize + 1)?;
    let mut out = a.clone();
    for (oc, (ac, bc)) in out.cells.iter_mut().zip(a.cells.iter().zip(&b.cells)) {
        for (o, (x, y)) in oc.iter_mut().zip(ac.iter().zip(bc)) {
            *o = x * (1.0 - frac) + y * frac;
        }
    }
    Ok(ShiftResult {
        vector: out,
        approximate: true,
    })
}
