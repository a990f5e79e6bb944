//! Complex polynomials in ascending-coefficient form and their roots.
//!
//! Roots come from Aberth–Ehrlich simultaneous iteration followed by a
//! clustering pass that turns numerically split multiple roots back into a
//! single root with multiplicity. A group of approximations is merged when its
//! centroid passes a backward-error test on `p, p', …, p^(m−1)`, or
//! unconditionally when the group is tighter than the configured cluster
//! radius.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Default radius under which root approximations are merged.
pub const DEFAULT_CLUSTER_RADIUS: f64 = 1e-6;
/// Default half-width of the band around |z| = 1 treated as "boundary".
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

const MAX_ABERTH_ITERS: usize = 800;

/// Polynomial `Σ coeffs[i] zⁱ`. The leading coefficient is nonzero; the zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `zᵏ`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = C64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// `lead · ∏ (z − r)`.
    pub fn from_roots(lead: C64, roots: &[C64]) -> Self {
        let mut p = Self::constant(lead);
        for &r in roots {
            p = &p * &Self::new(vec![-r, C64::new(1.0, 0.0)]);
        }
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<C64> {
        self.coeffs.last().copied()
    }

    /// Drops leading coefficients whose modulus is below `rel_tol` times the
    /// largest coefficient modulus. Used after cancellation-prone products.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= rel_tol * scale) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `(p(z), p'(z))` in one Horner pass.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for &a in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| a * i as f64)
                .collect(),
        )
    }

    /// `Σ |aᵢ| |z|ⁱ`, the natural scale of rounding error in `p(z)`.
    fn abs_eval(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * r + a.norm())
    }

    pub fn roots(&self) -> Result<RootSet> {
        self.roots_with(&RootOptions::default())
    }

    /// All roots with multiplicity. A degree-0 polynomial has no roots.
    pub fn roots_with(&self, opts: &RootOptions) -> Result<RootSet> {
        let Some(deg) = self.degree() else {
            return Err(Error::ZeroPolynomial);
        };
        if deg == 0 {
            return Ok(RootSet {
                roots: Vec::new(),
                residual_bound: 0.0,
            });
        }

        // Exact zeros at the origin are peeled off before iterating.
        let origin_mult = self
            .coeffs
            .iter()
            .take_while(|c| **c == C64::new(0.0, 0.0))
            .count();
        let reduced = Self::new(self.coeffs[origin_mult..].to_vec());

        let approx = aberth(&reduced);
        let approx: Vec<C64> = approx.into_iter().map(|z| polish(&reduced, z)).collect();

        let mut roots = cluster(&reduced, &approx, opts.cluster_radius);
        if origin_mult > 0 {
            roots.push(Root {
                value: C64::new(0.0, 0.0),
                multiplicity: origin_mult,
            });
        }
        roots.sort_by(|a, b| {
            (a.value.norm(), a.value.arg())
                .partial_cmp(&(b.value.norm(), b.value.arg()))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let residual_bound = roots
            .iter()
            .map(|r| self.eval(r.value).norm())
            .fold(0.0, f64::max);
        Ok(RootSet {
            roots,
            residual_bound,
        })
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = C64::new(0.0, 0.0);
        Polynomial::new(
            (0..n)
                .map(|i| {
                    *self.coeffs.get(i).unwrap_or(&zero) + *rhs.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&a| -a).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    pub cluster_radius: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            cluster_radius: DEFAULT_CLUSTER_RADIUS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

/// Roots of a polynomial with multiplicity, plus `max |p(root)|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub residual_bound: f64,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Every root repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<C64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }
}

/// Roots split by position relative to the unit circle.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiskPartition {
    pub inside: Vec<Root>,
    pub boundary: Vec<Root>,
    pub outside: Vec<Root>,
}

/// Inside iff `|z| < 1 − tol`, boundary iff `||z| − 1| ≤ tol`, else outside.
pub fn roots_in_disk(rs: &RootSet, tol: f64) -> DiskPartition {
    let mut part = DiskPartition::default();
    for r in &rs.roots {
        let m = r.value.norm();
        if (m - 1.0).abs() <= tol {
            part.boundary.push(*r);
        } else if m < 1.0 {
            part.inside.push(*r);
        } else {
            part.outside.push(*r);
        }
    }
    part
}

fn aberth(p: &Polynomial) -> Vec<C64> {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let a = p.coeffs();
    if n == 1 {
        return vec![-a[0] / a[1]];
    }

    // Initial guesses on a circle whose radius is the geometric mean of the
    // root moduli, rotated off the real axis to avoid symmetric stalls.
    let radius = (a[0].norm() / a[n].norm()).powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();

    for _ in 0..MAX_ABERTH_ITERS {
        let mut converged = true;
        for k in 0..n {
            let (pv, dpv) = p.eval_with_derivative(z[k]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = if dpv.norm() == 0.0 {
                // Nudge off a critical point.
                C64::new(1e-8 * (1.0 + z[k].norm()), 0.0)
            } else {
                pv / dpv
            };
            let repulsion: C64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        C64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() > 4.0 * f64::EPSILON * (1.0 + z[k].norm()) {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }
    z
}

/// Two Newton steps, each accepted only if it lowers the residual.
fn polish(p: &Polynomial, mut z: C64) -> C64 {
    for _ in 0..2 {
        let (pv, dpv) = p.eval_with_derivative(z);
        if dpv.norm() == 0.0 {
            break;
        }
        let cand = z - pv / dpv;
        if cand.is_finite() && p.eval(cand).norm() < pv.norm() {
            z = cand;
        } else {
            break;
        }
    }
    z
}

/// Connected components of `pts[idx]` under "distance < radius".
fn components(pts: &[C64], idx: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut seen = vec![false; idx.len()];
    let mut out = Vec::new();
    for s in 0..idx.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut head = 0;
        while head < comp.len() {
            let a = comp[head];
            head += 1;
            for b in 0..idx.len() {
                if !seen[b] && (pts[idx[a]] - pts[idx[b]]).norm() < radius {
                    seen[b] = true;
                    comp.push(b);
                }
            }
        }
        out.push(comp.into_iter().map(|i| idx[i]).collect());
    }
    out
}

/// Backward-error test: is `c` a root of multiplicity ≥ m up to rounding?
/// An m-fold root moves by `O(ε^{1/m})` under rounding, so the k-th
/// derivative may be as large as `ε^{(m−k)/m}` relative to its scale.
fn is_multiple_root(p: &Polynomial, c: C64, m: usize) -> bool {
    let deg = p.degree().unwrap_or(0) as f64;
    let slack = 64.0 * (deg + 1.0) * f64::EPSILON;
    let mut d = p.clone();
    for k in 0..m {
        let allowed = slack.powf((m - k) as f64 / m as f64);
        if d.eval(c).norm() > allowed * d.abs_eval(c).max(f64::MIN_POSITIVE) {
            return false;
        }
        d = d.derivative();
    }
    true
}

/// Newton on `p^{(m−1)}`, which has a simple root at an m-fold root of `p`.
fn refine_multiple(p: &Polynomial, c: C64, m: usize, max_move: f64) -> C64 {
    let mut d = p.clone();
    for _ in 0..m - 1 {
        d = d.derivative();
    }
    let mut z = c;
    for _ in 0..8 {
        let (v, dv) = d.eval_with_derivative(z);
        if dv.norm() == 0.0 {
            break;
        }
        let next = z - v / dv;
        if !next.is_finite() || (next - c).norm() > max_move {
            break;
        }
        let done = (next - z).norm() <= 2.0 * f64::EPSILON * (1.0 + z.norm());
        z = next;
        if done {
            break;
        }
    }
    z
}

fn cluster(p: &Polynomial, approx: &[C64], cluster_radius: f64) -> Vec<Root> {
    let scale = approx.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let idx: Vec<usize> = (0..approx.len()).collect();
    let mut out = Vec::new();
    cluster_rec(p, approx, &idx, 1e-2 * scale, cluster_radius, &mut out);
    out
}

fn cluster_rec(
    p: &Polynomial,
    pts: &[C64],
    idx: &[usize],
    radius: f64,
    cluster_radius: f64,
    out: &mut Vec<Root>,
) {
    let radius = radius.max(cluster_radius);
    for comp in components(pts, idx, radius) {
        let m = comp.len();
        if m == 1 {
            out.push(Root {
                value: pts[comp[0]],
                multiplicity: 1,
            });
            continue;
        }
        let centroid = comp.iter().map(|&i| pts[i]).sum::<C64>() / m as f64;
        if radius <= cluster_radius || is_multiple_root(p, centroid, m) {
            out.push(Root {
                value: refine_multiple(p, centroid, m, radius),
                multiplicity: m,
            });
        } else {
            cluster_rec(p, pts, &comp, radius / 10.0, cluster_radius, out);
        }
    }
}
