//! Symbol classes: finite Blaschke products, singular inner functions with
//! discrete measures, rational outer functions, their products, and Möbius
//! maps. Everything that can be evaluated on the disc implements [`Analytic`].

mod blaschke;
mod factored;
mod mobius;
mod outer;
pub mod schema;
mod singular;
mod taylor;

use std::f64::consts::PI;
use std::sync::Arc;

pub use blaschke::{BlaschkeProduct, BlaschkeZero};
pub use factored::{factor_polynomial, BoundaryZeroWarning, FactoredSymbol, Factorization};
pub use mobius::MobiusMap;
pub use outer::RationalOuter;
pub use singular::{Atom, SingularInner, SingularMeasure};
pub use taylor::{
    convolve_truncated, sample_circle, taylor_coefficients, taylor_from_samples, TaylorExpansion,
    TaylorOptions,
};

use crate::poly::Polynomial;
use crate::C64;

/// A function holomorphic on (a neighbourhood of a closed subdisc of) 𝔻.
pub trait Analytic: Send + Sync {
    fn eval(&self, z: C64) -> C64;

    /// Derivative; the default is a 16-point Cauchy integral on a small
    /// circle around `z` that stays inside 𝔻.
    fn derivative(&self, z: C64) -> C64 {
        cauchy_derivative(|w| self.eval(w), z)
    }

    fn describe(&self) -> String {
        "analytic symbol".to_string()
    }
}

/// Shared, type-erased symbol.
pub type SymbolRef = Arc<dyn Analytic>;

pub(crate) fn cauchy_derivative(f: impl Fn(C64) -> C64, z: C64) -> C64 {
    const M: usize = 16;
    let rho = ((1.0 - z.norm()) / 2.0).clamp(1e-6, 1e-2);
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..M {
        let w = C64::from_polar(1.0, 2.0 * PI * k as f64 / M as f64);
        acc += f(z + w * rho) * w.conj();
    }
    acc / (M as f64 * rho)
}

impl Analytic for Polynomial {
    fn eval(&self, z: C64) -> C64 {
        Polynomial::eval(self, z)
    }
    fn derivative(&self, z: C64) -> C64 {
        self.eval_with_derivative(z).1
    }
    fn describe(&self) -> String {
        format!("polynomial of degree {:?}", self.degree())
    }
}

impl<T: Analytic + ?Sized> Analytic for Arc<T> {
    fn eval(&self, z: C64) -> C64 {
        (**self).eval(z)
    }
    fn derivative(&self, z: C64) -> C64 {
        (**self).derivative(z)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// Closure-backed symbol.
pub struct FnSymbol<F> {
    f: F,
    label: String,
}

impl<F: Fn(C64) -> C64 + Send + Sync> FnSymbol<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self {
            f,
            label: label.into(),
        }
    }
}

impl<F: Fn(C64) -> C64 + Send + Sync> Analytic for FnSymbol<F> {
    fn eval(&self, z: C64) -> C64 {
        (self.f)(z)
    }
    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// `outer ∘ inner`.
pub struct Composed {
    pub outer: SymbolRef,
    pub inner: SymbolRef,
}

impl Analytic for Composed {
    fn eval(&self, z: C64) -> C64 {
        self.outer.eval(self.inner.eval(z))
    }
    fn derivative(&self, z: C64) -> C64 {
        self.outer.derivative(self.inner.eval(z)) * self.inner.derivative(z)
    }
    fn describe(&self) -> String {
        format!("({}) ∘ ({})", self.outer.describe(), self.inner.describe())
    }
}

/// Pointwise product of symbols; the empty product is the constant 1.
pub struct Product(pub Vec<SymbolRef>);

impl Analytic for Product {
    fn eval(&self, z: C64) -> C64 {
        self.0.iter().map(|f| f.eval(z)).product()
    }
    fn describe(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|f| format!("({})", f.describe()))
            .collect::<Vec<_>>()
            .join(" · ")
    }
}

/// Truncated power series `Σ coeffs[n] zⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    pub coeffs: Vec<C64>,
}

impl Analytic for PowerSeries {
    fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }
    fn describe(&self) -> String {
        format!("power series with {} terms", self.coeffs.len())
    }
}

/// `M` points of the unit circle at half-integer angles `2π(k + ½)/M`. The
/// half offset keeps nodes away from atoms placed at angle 0.
pub fn boundary_nodes(m: usize) -> Vec<C64> {
    (0..m)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / m as f64))
        .collect()
}

/// A fixed 64-point grid inside 𝔻: eight radii in (0, 0.95] times eight
/// angles, staggered per ring.
pub fn interior_grid() -> Vec<C64> {
    let mut pts = Vec::with_capacity(64);
    for i in 0..8 {
        let r = 0.95 * (i as f64 + 1.0) / 8.0;
        for j in 0..8 {
            let t = 2.0 * PI * (j as f64 + 0.37 * i as f64) / 8.0;
            pts.push(C64::from_polar(r, t));
        }
    }
    pts
}
