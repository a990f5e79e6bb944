use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::Analytic;
use crate::{exec, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorOptions {
    /// Sampling radius in (0, 1).
    pub radius: f64,
    /// Sample count override; must be a power of two ≥ N when given.
    pub samples: Option<usize>,
    /// Largest tolerated rounding amplification `ε · r^{−(N−1)}`.
    pub error_budget: f64,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        Self {
            radius: 0.9,
            samples: None,
            error_budget: 1e-8,
        }
    }
}

impl TaylorOptions {
    pub fn with_radius(radius: f64) -> Self {
        Self {
            radius,
            ..Self::default()
        }
    }

    /// Next power of two ≥ max(4N, ln ε / ln r), so that the aliasing term
    /// `r^M` is below machine precision.
    pub fn sample_count(&self, n: usize) -> usize {
        if let Some(m) = self.samples {
            return m;
        }
        let alias = (f64::EPSILON.ln() / self.radius.ln()).ceil() as usize;
        (4 * n).max(alias).max(8).next_power_of_two()
    }

    /// Sample count for `n` coefficients after checking the radius and the
    /// error budget.
    pub fn checked_sample_count(&self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::DomainError("Taylor extraction needs N >= 1".into()));
        }
        if !(self.radius > 0.0 && self.radius < 1.0) {
            return Err(Error::DomainError(format!(
                "sampling radius {} not in (0, 1)",
                self.radius
            )));
        }
        let m = self.sample_count(n);
        if !m.is_power_of_two() || m < n {
            return Err(Error::DomainError(format!(
                "sample count {m} must be a power of two >= N = {n}"
            )));
        }
        let amp = self.radius.powi(-(n as i32 - 1));
        if !(f64::EPSILON * amp <= self.error_budget) {
            return Err(Error::IllConditioned(format!(
                "r^-(N-1) = {amp:e} at r = {}, N = {n} exceeds the error budget {:e}",
                self.radius, self.error_budget
            )));
        }
        Ok(m)
    }
}

/// Coefficients `c_0..c_{N−1}` with per-coefficient error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorExpansion {
    pub coeffs: Vec<C64>,
    pub error: Vec<f64>,
    pub radius: f64,
    pub samples: usize,
    pub max_modulus: f64,
}

impl TaylorExpansion {
    pub fn max_error(&self) -> f64 {
        self.error.iter().copied().fold(0.0, f64::max)
    }
}

/// Circle points `r·e^{2πik/M}`.
pub(crate) fn circle(m: usize, r: f64) -> Vec<C64> {
    (0..m)
        .map(|k| C64::from_polar(r, std::f64::consts::TAU * k as f64 / m as f64))
        .collect()
}

/// `f` at `r·e^{2πik/M}`, `k = 0..M`.
pub fn sample_circle<F: Analytic + ?Sized>(f: &F, m: usize, r: f64) -> Vec<C64> {
    let pts = circle(m, r);
    exec::map_slice(&pts, |&z| f.eval(z))
}

/// Taylor coefficients of `f` by FFT of samples on the circle `|z| = r`.
pub fn taylor_coefficients<F: Analytic + ?Sized>(
    f: &F,
    n: usize,
    opts: &TaylorOptions,
) -> Result<TaylorExpansion> {
    let m = opts.checked_sample_count(n)?;
    let values = sample_circle(f, m, opts.radius);
    taylor_from_samples(values, n, opts.radius)
}

/// Same as [`taylor_coefficients`] for values already sampled at
/// `r·e^{2πik/M}`, `k = 0..M`.
pub fn taylor_from_samples(mut values: Vec<C64>, n: usize, radius: f64) -> Result<TaylorExpansion> {
    let m = values.len();
    if m < n || !m.is_power_of_two() {
        return Err(Error::DomainError(format!(
            "sample count {m} must be a power of two >= N = {n}"
        )));
    }
    let max_modulus = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !max_modulus.is_finite() {
        return Err(Error::IllConditioned("non-finite symbol value on the sampling circle".into()));
    }
    let fft = FftPlanner::new().plan_fft_forward(m);
    fft.process(&mut values);
    let inv_m = 1.0 / m as f64;
    let tail = values[m / 2..]
        .iter()
        .map(|d| d.norm() * inv_m)
        .fold(0.0, f64::max);
    let rounding = 16.0 * f64::EPSILON * (m as f64).log2() * max_modulus;
    let mut coeffs = Vec::with_capacity(n);
    let mut error = Vec::with_capacity(n);
    let mut rn = 1.0;
    for (k, d) in values.iter().take(n).enumerate() {
        if k > 0 {
            rn *= radius;
        }
        coeffs.push(d * (inv_m / rn));
        error.push((rounding + tail) / rn);
    }
    Ok(TaylorExpansion {
        coeffs,
        error,
        radius,
        samples: m,
        max_modulus,
    })
}

/// First `n` coefficients of the product of two power series.
pub fn convolve_truncated(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}
