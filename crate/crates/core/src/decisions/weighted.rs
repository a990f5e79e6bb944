use serde::{Deserialize, Serialize};

use crate::hardy::{kernel_vector, weighted_composition_matrix};
use crate::symbols::{boundary_nodes, Analytic, BlaschkeProduct, TaylorOptions};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedIsometryReport {
    pub norm: f64,
    pub norm_defect: f64,
    /// `⟨w, wφⁿ⟩₂` for `n = 1..=n_max`.
    pub inner_products: Vec<C64>,
    pub max_orthogonality_defect: f64,
}

/// Boundary-quadrature check of `‖w‖₂ = 1` and `⟨w, wφⁿ⟩₂ = 0`, `n ≥ 1`.
pub fn verify_weighted_isometry<W: Analytic + ?Sized, F: Analytic + ?Sized>(
    w: &W,
    phi: &F,
    n_max: usize,
    m: usize,
) -> WeightedIsometryReport {
    let nodes = boundary_nodes(m);
    let ws: Vec<C64> = nodes.iter().map(|&z| w.eval(z)).collect();
    let ps: Vec<C64> = nodes.iter().map(|&z| phi.eval(z)).collect();
    let norm = (ws.iter().map(|v| v.norm_sqr()).sum::<f64>() / m as f64).sqrt();
    let inner_products: Vec<C64> = (1..=n_max)
        .map(|n| {
            ws.iter()
                .zip(&ps)
                .map(|(wv, pv)| wv * (wv * pv.powu(n as u32)).conj())
                .sum::<C64>()
                / m as f64
        })
        .collect();
    WeightedIsometryReport {
        norm,
        norm_defect: (norm - 1.0).abs(),
        max_orthogonality_defect: inner_products.iter().map(|v| v.norm()).fold(0.0, f64::max),
        inner_products,
    }
}

/// The weight `w = B·1`, valid when `φ(0) = 0`.
pub fn build_weight<F: Analytic + ?Sized>(b: &BlaschkeProduct, phi: &F) -> Result<BlaschkeProduct> {
    let p0 = phi.eval(C64::new(0.0, 0.0));
    if p0.norm() > 1e-12 {
        return Err(Error::UnsupportedCase(format!(
            "phi(0) = {p0}: weights with m ≠ 1 are not constructed"
        )));
    }
    Ok(b.clone())
}

/// `max_j |⟨C_{w,φ} zʲ, k_λ⟩|` for each zero `λ` of `w`, in `H²_N`.
pub fn codimension_witness<F: Analytic + ?Sized>(
    w: &BlaschkeProduct,
    phi: &F,
    n: usize,
    opts: &TaylorOptions,
) -> Result<Vec<(C64, f64)>> {
    let m = weighted_composition_matrix(w, phi, n, opts)?;
    w.all_zeros()
        .into_iter()
        .map(|lambda| {
            let k = kernel_vector(lambda, n)?;
            let worst = (0..n)
                .map(|j| k.dotc(&m.matrix().column(j)).norm())
                .fold(0.0, f64::max);
            Ok((lambda, worst))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::hardy::{composition_matrix, image_orthocomplement_dim};
    use crate::symbols::{BlaschkeZero, FnSymbol};

    fn b_half() -> BlaschkeProduct {
        BlaschkeProduct::new(0.0, 0, vec![BlaschkeZero { alpha: c(0.5, 0.0), multiplicity: 1 }]).unwrap()
    }

    #[test]
    fn unit_weight() {
        let one = FnSymbol::new("1", |_| c(1.0, 0.0));
        let r = verify_weighted_isometry(&one, &BlaschkeProduct::monomial(2), 8, 1024);
        assert!(r.norm_defect < 1e-14 && r.max_orthogonality_defect < 1e-14);
    }

    #[test]
    fn blaschke_weight() {
        let psi = BlaschkeProduct::monomial(2);
        let w = build_weight(&b_half(), &psi).unwrap();
        let r = verify_weighted_isometry(&w, &psi, 16, 4096);
        assert!(r.norm_defect < 1e-8 && r.max_orthogonality_defect < 1e-8);
        for (lambda, d) in codimension_witness(&w, &psi, 32, &TaylorOptions::default()).unwrap() {
            assert!((lambda - c(0.5, 0.0)).norm() < 1e-15);
            assert!(d < 1e-8, "{d}");
        }
        let dims: Vec<usize> = [8, 16, 32]
            .iter()
            .map(|&n| {
                let m = weighted_composition_matrix(&w, &psi, n, &TaylorOptions::default()).unwrap();
                image_orthocomplement_dim(&m, 1e-8)
            })
            .collect();
        assert!(dims[0] < dims[1] && dims[1] < dims[2], "{dims:?}");
    }

    #[test]
    fn negative_fixture() {
        // w = (1 + z²)/√2: ⟨w, w z²⟩ = ½.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let w = FnSymbol::new("(1+z^2)/sqrt2", move |z: C64| (z * z + 1.0) * s);
        let r = verify_weighted_isometry(&w, &BlaschkeProduct::monomial(2), 4, 1024);
        assert!(r.norm_defect < 1e-14);
        assert!((r.inner_products[0] - c(0.5, 0.0)).norm() < 1e-14);
        assert!(r.max_orthogonality_defect > 0.4);
    }

    #[test]
    fn trivial_weight_and_guard() {
        let psi = BlaschkeProduct::monomial(2);
        let w = build_weight(&BlaschkeProduct::trivial(), &psi).unwrap();
        let opts = TaylorOptions::default();
        let a = weighted_composition_matrix(&w, &psi, 16, &opts).unwrap();
        let b = composition_matrix(&psi, 16, &opts).unwrap();
        assert!((a.matrix() - b.matrix()).norm() < 1e-12);
        let tau = crate::symbols::MobiusMap::tau(c(0.5, 0.0));
        assert!(matches!(build_weight(&b_half(), &tau), Err(Error::UnsupportedCase(_))));
    }
}
