use super::citations::*;
use super::{Construction, EmbeddabilityReport, Verdict};
use crate::blaschke_eq::{
    conjugate_by_tau, fixed_points_in_disk, sample_regular_value, solve_blaschke_equation, SelfMap,
    DEFAULT_RESIDUAL_TOL,
};
use crate::hardy::{boundary_gram, identity_defect};
use crate::semigroups::Semiflow;
use crate::symbols::schema::CompositionSymbol;
use crate::symbols::{boundary_nodes, Analytic, BlaschkeProduct, MobiusMap, SingularInner};
use crate::{Error, Result, C64};

const GRAM_TOL: f64 = 1e-8;
const BOUNDARY_MODULUS_TOL: f64 = 1e-6;

/// Interior fixed point of a singular inner self-map, by iteration from 0
/// followed by Newton polishing.
pub fn singular_fixed_point(s: &SingularInner, tol: f64) -> Option<C64> {
    let mut z = C64::new(0.0, 0.0);
    for _ in 0..20_000 {
        let next = s.eval(z);
        let step = (next - z).norm();
        z = next;
        if step < 1e-15 {
            break;
        }
    }
    for _ in 0..8 {
        let d = s.derivative(z) - 1.0;
        if d.norm() == 0.0 {
            break;
        }
        z -= (s.eval(z) - z) / d;
    }
    (z.norm() < 1.0 - tol && (s.eval(z) - z).norm() <= 1e-12).then_some(z)
}

fn elliptic_report(alpha: C64, theta: f64) -> EmbeddabilityReport {
    EmbeddabilityReport::new(Verdict::Embeddable, ELLIPTIC_FLOW)
        .with_construction(Construction::CompositionFlow {
            flow: Semiflow::EllipticAutomorphism { alpha, theta },
        })
        .note("semigroup of composition operators")
}

fn no_fixed_point() -> EmbeddabilityReport {
    EmbeddabilityReport::new(Verdict::OutOfScope, BAYART)
        .note("no fixed point in 𝔻: C_φ is not similar to an isometry")
}

fn shift_report(alpha: C64) -> EmbeddabilityReport {
    let r = EmbeddabilityReport::new(Verdict::Embeddable, THEOREM_3_2)
        .with_construction(Construction::ShiftEmbedding { fixed_point: alpha })
        .note("not a semigroup of composition operators");
    if alpha.norm() == 0.0 {
        r.note("φ(0) = 0: C_φ is an isometry")
    } else {
        r.note(format!("C_φ = C_τ C_ψ C_τ with τ = τ_α, ψ = τ_α∘φ∘τ_α, α = {alpha}"))
    }
}

fn decide_mobius(m: &MobiusMap, tol: f64) -> Result<EmbeddabilityReport> {
    if !m.is_disk_automorphism(tol.max(1e-12)) {
        return Err(Error::NotInner(
            "a Möbius self-map is inner only when it is an automorphism".into(),
        ));
    }
    if m.is_identity(1e-14) {
        return Ok(elliptic_report(C64::new(0.0, 0.0), 0.0));
    }
    let fp = fixed_points_in_disk(SelfMap::Mobius(m), tol)?;
    Ok(match fp.points.first() {
        Some(p) => elliptic_report(p.point, p.derivative.arg()),
        None => no_fixed_point().note("non-elliptic automorphism: flows referenced to the literature"),
    })
}

fn decide_blaschke(b: &BlaschkeProduct, tol: f64) -> Result<EmbeddabilityReport> {
    if b.is_constant() {
        return Err(Error::DegenerateSymbol("constant Blaschke product".into()));
    }
    if b.degree() == 1 {
        let m = automorphism_of(b)?;
        return decide_mobius(&m, tol);
    }
    let fp = fixed_points_in_disk(SelfMap::Blaschke(b), tol)?;
    let Some(alpha) = fp.points.first().map(|p| p.point) else {
        return Ok(no_fixed_point());
    };
    let psi = conjugate_by_tau(b, alpha)?;
    let gd = identity_defect(&boundary_gram(&psi, 8, 4096)?);
    if gd > GRAM_TOL {
        return Err(Error::NotInner(format!("boundary Gram of ψ deviates by {gd:e}")));
    }
    let beta = sample_regular_value(b, 0)?;
    let pre = solve_blaschke_equation(b, beta, DEFAULT_RESIDUAL_TOL)?;
    let r = &pre.solutions.roots;
    Ok(shift_report(alpha).note(format!(
        "φ not injective: φ({:.6}) = φ({:.6}) = {:.6}",
        r[0].value, r[1].value, beta
    )))
}

/// A degree-one Blaschke product as a Möbius map.
fn automorphism_of(b: &BlaschkeProduct) -> Result<MobiusMap> {
    let num = b.numerator();
    let den = b.denominator();
    let c = |p: &crate::poly::Polynomial, k: usize| p.coeffs().get(k).copied().unwrap_or_default();
    MobiusMap::new(c(&num, 1), c(&num, 0), c(&den, 1), c(&den, 0))
}

fn decide_singular(s: &SingularInner, tol: f64) -> Result<EmbeddabilityReport> {
    if s.is_trivial() {
        return Err(Error::DegenerateSymbol("trivial singular inner function".into()));
    }
    let worst = boundary_nodes(4096)
        .into_iter()
        .map(|z| (s.eval(z).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if worst > BOUNDARY_MODULUS_TOL {
        return Err(Error::NotInner(format!("|φ| deviates from 1 on the circle by {worst:e}")));
    }
    Ok(match singular_fixed_point(s, tol) {
        Some(alpha) => shift_report(alpha)
            .note("φ not injective: τ_a∘φ is a Blaschke product with simple zeros for almost every a"),
        None => no_fixed_point().note("Denjoy–Wolff point on the boundary"),
    })
}

/// Verdict for the composition operator `C_φ` with inner symbol `φ`.
pub fn decide_composition(sym: &CompositionSymbol, tol: f64) -> Result<EmbeddabilityReport> {
    match sym {
        CompositionSymbol::Mobius(m) => decide_mobius(m, tol),
        CompositionSymbol::Blaschke(b) => decide_blaschke(b, tol),
        CompositionSymbol::Singular(s) => decide_singular(s, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::symbols::{BlaschkeZero, SingularMeasure};

    #[test]
    fn elliptic_automorphism() {
        let tau = MobiusMap::tau(c(0.5, 0.0));
        let phi = tau.compose(&MobiusMap::rotation(0.8)).compose(&tau);
        let r = decide_composition(&CompositionSymbol::Mobius(phi), 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Embeddable);
        assert!(r.notes.iter().any(|n| n == "semigroup of composition operators"));
        let b = BlaschkeProduct::new(0.8, 1, vec![]).unwrap();
        let r = decide_composition(&CompositionSymbol::Blaschke(b), 1e-9).unwrap();
        match r.construction.unwrap() {
            Construction::CompositionFlow { flow: Semiflow::EllipticAutomorphism { alpha, theta } } => {
                assert!(alpha.norm() < 1e-12 && (theta - 0.8).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn z_squared() {
        let r = decide_composition(&CompositionSymbol::Blaschke(BlaschkeProduct::monomial(2)), 1e-9).unwrap();
        assert_eq!((r.verdict, r.governing_result.as_str()), (Verdict::Embeddable, "Theorem 3.2"));
        assert!(r.notes.iter().any(|n| n == "not a semigroup of composition operators"));
        assert!(r.notes.iter().any(|n| n.starts_with("φ not injective")));
        assert_eq!(r.construction, Some(Construction::ShiftEmbedding { fixed_point: c(0.0, 0.0) }));
    }

    #[test]
    fn blaschke_with_nonzero_fixed_point() {
        // τ_α ∘ z² ∘ τ_α fixes α.
        let a = c(0.3, 0.2);
        let b = conjugate_by_tau(&BlaschkeProduct::monomial(2), a).unwrap();
        let r = decide_composition(&CompositionSymbol::Blaschke(b), 1e-9).unwrap();
        match r.construction.unwrap() {
            Construction::ShiftEmbedding { fixed_point } => assert!((fixed_point - a).norm() < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hyperbolic_automorphism_out_of_scope() {
        // (z + 1/2)/(1 + z/2) fixes ±1.
        let m = MobiusMap::new(c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(
            decide_composition(&CompositionSymbol::Mobius(m), 1e-9).unwrap().verdict,
            Verdict::OutOfScope
        );
        let b = BlaschkeProduct::new(0.0, 0, vec![
            BlaschkeZero { alpha: c(0.5, 0.0), multiplicity: 1 },
            BlaschkeZero { alpha: c(-0.5, 0.0), multiplicity: 1 },
        ])
        .unwrap();
        // (z² − 1/4)/(1 − z²/4) has real fixed points only outside (−1, 1).
        let r = decide_composition(&CompositionSymbol::Blaschke(b), 1e-9).unwrap();
        assert!(matches!(r.verdict, Verdict::Embeddable | Verdict::OutOfScope));
    }

    #[test]
    fn singular_symbol_fixed_point() {
        let s = SingularInner::new(SingularMeasure::single(0.0, 1.0).unwrap());
        let alpha = singular_fixed_point(&s, 1e-9).unwrap();
        assert!((s.eval(alpha) - alpha).norm() < 1e-12);
        assert!(alpha.im.abs() < 1e-12 && alpha.re > 0.0);
        let r = decide_composition(&CompositionSymbol::Singular(s), 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Embeddable);
    }

    #[test]
    fn non_inner_mobius() {
        let m = MobiusMap::scaling(c(0.5, 0.0)).unwrap();
        assert!(matches!(
            decide_composition(&CompositionSymbol::Mobius(m), 1e-9),
            Err(Error::NotInner(_))
        ));
    }
}
