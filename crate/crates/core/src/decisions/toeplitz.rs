use super::citations::*;
use super::{Construction, EmbeddabilityReport, Verdict};
use crate::poly::Polynomial;
use crate::semigroups::{product_flow, Semiflow};
use crate::symbols::{factor_polynomial, FactoredSymbol, RationalOuter};
use crate::{Error, Result, C64};

const UNIMODULAR_TOL: f64 = 1e-12;

/// The outer part with the Blaschke phase folded in.
fn outer_with_phase(sym: &FactoredSymbol) -> Result<RationalOuter> {
    sym.outer.scaled(C64::from_polar(1.0, sym.blaschke.rotation()))
}

fn inner_flow(sym: &FactoredSymbol) -> Result<Semiflow> {
    let singular = Semiflow::SingularInner {
        measure: sym.singular.measure.clone(),
    };
    let outer = outer_with_phase(sym)?;
    if (outer.constant_factor() - C64::new(1.0, 0.0)).norm() <= UNIMODULAR_TOL && !outer.has_factors() {
        return Ok(singular);
    }
    product_flow(vec![singular, Semiflow::Outer { outer }])
}

/// Verdict for the analytic Toeplitz operator `T_φ`, `φ = B·S_μ·F`.
pub fn decide_toeplitz(sym: &FactoredSymbol, declared_infinite_blaschke: bool) -> Result<EmbeddabilityReport> {
    let b = !sym.blaschke.is_constant();
    let s = !sym.singular.is_trivial();
    let inner = sym.is_inner(UNIMODULAR_TOL);

    if declared_infinite_blaschke {
        return Ok(if inner {
            EmbeddabilityReport::new(Verdict::Embeddable, THEOREM_3_8)
                .existence()
                .note("infinite Blaschke product declared: not a finite Blaschke product")
                .note("Toeplitz semigroup: no (φ has zeros in 𝔻)")
        } else {
            EmbeddabilityReport::new(Verdict::Unknown, QUESTION_3_12)
                .note("infinite Blaschke product times a non-vanishing non-inner cofactor")
        });
    }
    if sym.is_constant() {
        return Err(Error::DegenerateSymbol(
            "constant symbol: T_φ is a scalar multiple of the identity".into(),
        ));
    }

    Ok(match (inner, b, s) {
        (true, true, false) => EmbeddabilityReport::new(Verdict::NotEmbeddable, THEOREM_3_8)
            .note(format!("finite Blaschke product of degree {}", sym.blaschke.degree()))
            .note(format!("codim Im(T_φ) = dim K_B = {}", sym.blaschke.degree())),
        (true, false, true) => EmbeddabilityReport::new(Verdict::Embeddable, THEOREM_3_8)
            .with_construction(Construction::ToeplitzFlow { flow: inner_flow(sym)? })
            .note("Toeplitz semigroup: yes"),
        (true, true, true) => EmbeddabilityReport::new(Verdict::Embeddable, THEOREM_3_8)
            .existence()
            .note("inner, not a finite Blaschke product")
            .note("Toeplitz semigroup: no (φ has zeros in 𝔻)"),
        (false, false, false) => EmbeddabilityReport::new(Verdict::Embeddable, LEMMA_3_9)
            .with_construction(Construction::ToeplitzFlow {
                flow: Semiflow::Outer {
                    outer: outer_with_phase(sym)?,
                },
            })
            .note("Toeplitz semigroup: yes"),
        (false, false, true) => EmbeddabilityReport::new(Verdict::Embeddable, PROPOSITION_3_10_I)
            .with_construction(Construction::ToeplitzFlow { flow: inner_flow(sym)? })
            .note("Toeplitz semigroup: yes"),
        (false, true, false) => EmbeddabilityReport::new(Verdict::NotEmbeddable, PROPOSITION_3_10_II)
            .note(format!("codim Im(T_φ) = dim K_B = {}", sym.blaschke.degree())),
        (false, true, true) => EmbeddabilityReport::new(Verdict::Unknown, QUESTION_3_12)
            .note("nonconstant Blaschke factor times a non-vanishing function that is neither outer nor inner"),
        (true, false, false) => unreachable!("constant symbols handled above"),
    })
}

/// Verdict for `T_P` with a polynomial symbol.
pub fn decide_polynomial_toeplitz(p: &Polynomial, tol: f64) -> Result<EmbeddabilityReport> {
    let p = p.trimmed(0.0);
    if p.degree().unwrap_or(0) < 1 {
        return Err(Error::DegenerateSymbol("polynomial symbol of degree < 1".into()));
    }
    let f = factor_polynomial(&p, tol)?;
    let mut report = if f.blaschke.is_constant() {
        EmbeddabilityReport::new(Verdict::Embeddable, COROLLARY_3_13)
            .with_construction(Construction::ToeplitzFlow {
                flow: Semiflow::Outer {
                    outer: f.outer.scaled(C64::from_polar(1.0, f.blaschke.rotation()))?,
                },
            })
            .note("no zero in 𝔻: P is outer")
    } else {
        EmbeddabilityReport::new(Verdict::NotEmbeddable, COROLLARY_3_13).note(format!(
            "{} zero(s) in 𝔻: codim Im(T_P) = {}",
            f.blaschke.degree(),
            f.blaschke.degree()
        ))
    };
    report.warnings = f
        .warnings
        .iter()
        .map(|w| {
            format!(
                "zero {} of multiplicity {} lies in the boundary band (|z| = {:.12})",
                w.zero, w.multiplicity, w.modulus
            )
        })
        .collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::hardy::toeplitz_matrix;
    use crate::symbols::{Analytic, BlaschkeProduct, BlaschkeZero, SingularInner, SingularMeasure, TaylorOptions};

    fn atom() -> SingularInner {
        SingularInner::new(SingularMeasure::single(0.0, 1.0).unwrap())
    }

    fn flow_of(r: &EmbeddabilityReport) -> &Semiflow {
        match r.construction.as_ref().unwrap() {
            Construction::ToeplitzFlow { flow } => flow,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shift_is_not_embeddable() {
        let r = decide_toeplitz(&FactoredSymbol::from_blaschke(BlaschkeProduct::monomial(1)), false).unwrap();
        assert_eq!(r.verdict, Verdict::NotEmbeddable);
        assert_eq!(r.governing_result, "Theorem 3.8");
    }

    #[test]
    fn singular_atom_is_embeddable_with_toeplitz_flow() {
        let r = decide_toeplitz(&FactoredSymbol::from_singular(atom()), false).unwrap();
        assert_eq!(r.verdict, Verdict::Embeddable);
        assert!(r.notes.iter().any(|n| n == "Toeplitz semigroup: yes"));
        assert!(matches!(flow_of(&r), Semiflow::SingularInner { .. }));
    }

    #[test]
    fn blaschke_times_singular() {
        let sym = FactoredSymbol::new(BlaschkeProduct::monomial(1), atom(), RationalOuter::trivial());
        let r = decide_toeplitz(&sym, false).unwrap();
        assert_eq!(r.verdict, Verdict::Embeddable);
        assert!(r.existence_only && r.construction.is_none());
        let outer = RationalOuter::new(c(1.0, 0.0), vec![], vec![c(2.0, 0.0)]).unwrap();
        let sym = FactoredSymbol::new(BlaschkeProduct::monomial(1), atom(), outer);
        assert_eq!(decide_toeplitz(&sym, false).unwrap().verdict, Verdict::Unknown);
    }

    #[test]
    fn declared_infinite() {
        let sym = FactoredSymbol::from_blaschke(BlaschkeProduct::monomial(1));
        let r = decide_toeplitz(&sym, true).unwrap();
        assert_eq!((r.verdict, r.existence_only), (Verdict::Embeddable, true));
        let outer = RationalOuter::new(c(1.0, 0.0), vec![], vec![c(2.0, 0.0)]).unwrap();
        let sym = FactoredSymbol::new(BlaschkeProduct::monomial(1), SingularInner::default(), outer);
        assert_eq!(decide_toeplitz(&sym, true).unwrap().verdict, Verdict::Unknown);
    }

    #[test]
    fn outer_and_mixed_cases() {
        let outer = RationalOuter::new(c(0.5, 0.0), vec![c(0.3, 0.1)], vec![c(2.0, 0.0)]).unwrap();
        let r = decide_toeplitz(&FactoredSymbol::from_outer(outer.clone()), false).unwrap();
        assert_eq!((r.verdict, r.governing_result.as_str()), (Verdict::Embeddable, "Lemma 3.9"));
        let mixed = FactoredSymbol::new(BlaschkeProduct::trivial(), atom(), outer.clone());
        let r = decide_toeplitz(&mixed, false).unwrap();
        assert_eq!(r.governing_result, "Proposition 3.10(i)");
        let z = BlaschkeProduct::new(0.0, 0, vec![BlaschkeZero { alpha: c(0.5, 0.0), multiplicity: 1 }]).unwrap();
        let r = decide_toeplitz(&FactoredSymbol::new(z, SingularInner::default(), outer), false).unwrap();
        assert_eq!(
            (r.verdict, r.governing_result.as_str()),
            (Verdict::NotEmbeddable, "Proposition 3.10(ii)")
        );
    }

    #[test]
    fn constant_rejected() {
        assert!(matches!(
            decide_toeplitz(&FactoredSymbol::default(), false),
            Err(Error::DegenerateSymbol(_))
        ));
    }

    #[test]
    fn time_one_matches_symbol() {
        let opts = TaylorOptions::default();
        let outer = RationalOuter::new(c(0.5, 0.2), vec![c(0.3, 0.1)], vec![c(2.0, 0.0)]).unwrap();
        let syms = vec![
            FactoredSymbol::from_singular(atom()).rotated(0.7),
            FactoredSymbol::from_outer(outer.clone()).rotated(-1.1),
            FactoredSymbol::new(BlaschkeProduct::trivial(), atom(), outer),
        ];
        for sym in syms {
            let r = decide_toeplitz(&sym, false).unwrap();
            let flow = flow_of(&r);
            let a = toeplitz_matrix(flow.at(1.0).unwrap().as_ref(), 32, &opts).unwrap();
            let b = toeplitz_matrix(&sym, 32, &opts).unwrap();
            let d = (a.matrix() - b.matrix()).norm();
            assert!(d < 1e-8, "{} {d}", sym.describe());
        }
    }

    #[test]
    fn verdict_invariant_under_rotation() {
        let sym = FactoredSymbol::new(BlaschkeProduct::monomial(2), SingularInner::default(), RationalOuter::trivial());
        for th in [0.3, 1.0, 3.0] {
            assert_eq!(
                decide_toeplitz(&sym.rotated(th), false).unwrap().verdict,
                decide_toeplitz(&sym, false).unwrap().verdict
            );
        }
    }

    #[test]
    fn polynomial_cases() {
        let z_minus_2 = Polynomial::from_real(&[-2.0, 1.0]);
        let r = decide_polynomial_toeplitz(&z_minus_2, 1e-9).unwrap();
        assert_eq!((r.verdict, r.governing_result.as_str()), (Verdict::Embeddable, "Corollary 3.13"));
        let p = Polynomial::from_real(&[1.5, -3.5, 1.0]);
        assert_eq!(decide_polynomial_toeplitz(&p, 1e-9).unwrap().verdict, Verdict::NotEmbeddable);
        for k in 1..=5 {
            let zk = Polynomial::monomial(k);
            assert_eq!(decide_polynomial_toeplitz(&zk, 1e-9).unwrap().verdict, Verdict::NotEmbeddable);
        }
        let boundary = Polynomial::from_real(&[-1.0, 1.0]);
        let r = decide_polynomial_toeplitz(&boundary, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Embeddable);
        assert_eq!(r.warnings.len(), 1);
    }
}
