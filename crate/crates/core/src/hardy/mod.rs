//! Truncated operators on `H²_N = span{1, z, …, z^{N−1}}` in the monomial
//! basis. Matrices are compressions `P_N T|_{H²_N}`: column `j` holds the
//! first `N` Taylor coefficients of `T zʲ`.

mod wold;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::exec;
use crate::symbols::{boundary_nodes, sample_circle, taylor_from_samples, Analytic, TaylorOptions};
use crate::{Error, Result, C64};

pub use wold::{wold_decompose, LevelVector, WoldDecomposition, WoldOptions};

/// Default relative tolerance for numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "OperatorRepr", try_from = "OperatorRepr")]
pub struct TruncatedOperator {
    matrix: DMatrix<C64>,
}

/// Row-major serialised form.
#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<TruncatedOperator> for OperatorRepr {
    fn from(t: TruncatedOperator) -> Self {
        let n = t.n();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                re.push(t.matrix[(i, j)].re);
                im.push(t.matrix[(i, j)].im);
            }
        }
        OperatorRepr { n, re, im }
    }
}

impl TryFrom<OperatorRepr> for TruncatedOperator {
    type Error = String;
    fn try_from(r: OperatorRepr) -> std::result::Result<Self, String> {
        if r.re.len() != r.n * r.n || r.im.len() != r.n * r.n {
            return Err(format!("expected {} entries for n = {}", r.n * r.n, r.n));
        }
        let matrix = DMatrix::from_fn(r.n, r.n, |i, j| C64::new(r.re[i * r.n + j], r.im[i * r.n + j]));
        Ok(TruncatedOperator { matrix })
    }
}

impl TruncatedOperator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DomainError(format!(
                "operator matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(n, n),
        }
    }

    /// Column `j` taken from `columns[j]` (each of length `N`).
    pub fn from_columns(columns: &[Vec<C64>]) -> Self {
        let n = columns.len();
        Self {
            matrix: DMatrix::from_fn(n, n, |i, j| columns[j][i]),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn compose(&self, other: &TruncatedOperator) -> TruncatedOperator {
        TruncatedOperator {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn apply(&self, x: &DVector<C64>) -> DVector<C64> {
        &self.matrix * x
    }

    /// Largest deviation from lower-triangular Toeplitz structure.
    pub fn toeplitz_defect(&self) -> f64 {
        let n = self.n();
        let mut d: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let expect = if i >= j {
                    self.matrix[(i - j, 0)]
                } else {
                    C64::new(0.0, 0.0)
                };
                d = d.max((self.matrix[(i, j)] - expect).norm());
            }
        }
        d
    }

    /// CSV dump: header `re_ij,im_ij`, then one `re,im` line per entry in
    /// row-major order.
    pub fn to_csv(&self) -> String {
        let n = self.n();
        let mut s = String::with_capacity(n * n * 48 + 12);
        s.push_str("re_ij,im_ij\n");
        for i in 0..n {
            for j in 0..n {
                let v = self.matrix[(i, j)];
                s.push_str(&format!("{:e},{:e}\n", v.re, v.im));
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("re_ij,im_ij") {
            return Err(Error::InvalidSymbol("matrix csv: missing header re_ij,im_ij".into()));
        }
        let mut vals = Vec::new();
        for (k, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|x| x.trim().parse().ok()).ok_or_else(|| {
                    Error::InvalidSymbol(format!("matrix csv line {}: expected re,im", k + 2))
                })
            };
            let mut it = line.split(',');
            vals.push(C64::new(parse(it.next())?, parse(it.next())?));
        }
        let n = (vals.len() as f64).sqrt().round() as usize;
        if n * n != vals.len() {
            return Err(Error::InvalidSymbol(format!(
                "matrix csv: {} entries is not a square count",
                vals.len()
            )));
        }
        Ok(Self {
            matrix: DMatrix::from_fn(n, n, |i, j| vals[i * n + j]),
        })
    }
}

/// Sidecar metadata for a matrix dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixMeta {
    #[serde(rename = "N")]
    pub n: usize,
    pub symbol_hash: String,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
}

fn column_matrix(
    n: usize,
    opts: &TaylorOptions,
    column_samples: impl Fn(usize) -> Vec<C64> + Sync + Send,
) -> Result<TruncatedOperator> {
    let cols = exec::map_range(n, |j| {
        taylor_from_samples(column_samples(j), n, opts.radius).map(|t| t.coeffs)
    });
    let cols: Vec<Vec<C64>> = cols.into_iter().collect::<Result<_>>()?;
    Ok(TruncatedOperator::from_columns(&cols))
}

fn checked_samples<F: Analytic + ?Sized>(f: &F, n: usize, opts: &TaylorOptions) -> Result<Vec<C64>> {
    let m = opts.checked_sample_count(n)?;
    Ok(sample_circle(f, m, opts.radius))
}

/// `C_φ` compressed to `H²_N`.
pub fn composition_matrix<F: Analytic + ?Sized>(
    phi: &F,
    n: usize,
    opts: &TaylorOptions,
) -> Result<TruncatedOperator> {
    let s = checked_samples(phi, n, opts)?;
    column_matrix(n, opts, |j| s.iter().map(|v| v.powu(j as u32)).collect())
}

/// `C_{w,φ} f = w·(f∘φ)` compressed to `H²_N`.
pub fn weighted_composition_matrix<W: Analytic + ?Sized, F: Analytic + ?Sized>(
    w: &W,
    phi: &F,
    n: usize,
    opts: &TaylorOptions,
) -> Result<TruncatedOperator> {
    let s = checked_samples(phi, n, opts)?;
    let ws = sample_circle(w, opts.sample_count(n), opts.radius);
    column_matrix(n, opts, |j| {
        s.iter()
            .zip(&ws)
            .map(|(v, wv)| wv * v.powu(j as u32))
            .collect()
    })
}

/// Lower-triangular Toeplitz matrix with the given first column.
pub fn toeplitz_from_coeffs(c: &[C64], n: usize) -> TruncatedOperator {
    let zero = C64::new(0.0, 0.0);
    TruncatedOperator {
        matrix: DMatrix::from_fn(n, n, |i, j| {
            if i >= j {
                c.get(i - j).copied().unwrap_or(zero)
            } else {
                zero
            }
        }),
    }
}

/// Analytic Toeplitz operator `T_φ` (multiplication by `φ`) compressed to
/// `H²_N`.
pub fn toeplitz_matrix<F: Analytic + ?Sized>(
    phi: &F,
    n: usize,
    opts: &TaylorOptions,
) -> Result<TruncatedOperator> {
    let t = crate::symbols::taylor_coefficients(phi, n, opts)?;
    Ok(toeplitz_from_coeffs(&t.coeffs, n))
}

/// `k_λ` truncated: `(1, λ̄, λ̄², …)`.
pub fn kernel_vector(lambda: C64, n: usize) -> Result<DVector<C64>> {
    if !(lambda.norm() < 1.0) {
        return Err(Error::DomainError(format!("|lambda| = {} >= 1", lambda.norm())));
    }
    let lc = lambda.conj();
    Ok(DVector::from_fn(n, |k, _| lc.powu(k as u32)))
}

/// `⟨φⁱ, φʲ⟩` for `0 ≤ i, j ≤ d` by `M`-point quadrature on the unit circle.
pub fn boundary_gram<F: Analytic + ?Sized>(phi: &F, d: usize, m: usize) -> Result<DMatrix<C64>> {
    if m < 1024 || !m.is_power_of_two() {
        return Err(Error::DomainError(format!(
            "quadrature size {m} must be a power of two >= 1024"
        )));
    }
    let nodes = boundary_nodes(m);
    let values = exec::map_slice(&nodes, |&z| phi.eval(z));
    let powers: Vec<Vec<C64>> = (0..=d)
        .map(|i| values.iter().map(|v| v.powu(i as u32)).collect())
        .collect();
    let mut g = DMatrix::zeros(d + 1, d + 1);
    for i in 0..=d {
        for j in i..=d {
            let s: C64 = powers[i]
                .iter()
                .zip(&powers[j])
                .map(|(a, b)| a * b.conj())
                .sum::<C64>()
                / m as f64;
            g[(i, j)] = s;
            g[(j, i)] = s.conj();
        }
    }
    Ok(g)
}

/// Largest entry of `G − I`.
pub fn identity_defect(g: &DMatrix<C64>) -> f64 {
    let n = g.nrows();
    (g - DMatrix::<C64>::identity(n, n))
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
}

pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.clone().singular_values().iter().copied().collect()
}

/// Spectral norm.
pub fn operator_norm(m: &DMatrix<C64>) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Singular values above `rel_tol · σ_max`.
pub fn numerical_rank(m: &DMatrix<C64>, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// `N − rank(T)`.
pub fn image_orthocomplement_dim(t: &TruncatedOperator, rel_tol: f64) -> usize {
    t.n() - numerical_rank(t.matrix(), rel_tol)
}
