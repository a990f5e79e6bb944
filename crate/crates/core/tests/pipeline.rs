use std::sync::Arc;

use proptest::prelude::*;

use hardy_embed::blaschke_eq::preimage_survey;
use hardy_embed::decisions::{decide_composition, realize, Construction, RealizeOptions, Verdict};
use hardy_embed::hardy::composition_matrix;
use hardy_embed::symbols::schema::{parse, CompositionSymbol, Problem};
use hardy_embed::symbols::{BlaschkeProduct, BlaschkeZero, SymbolRef, TaylorOptions};
use hardy_embed::verify::{check_isometry, check_semigroup_law};
use hardy_embed::C64;

fn composition(text: &str) -> CompositionSymbol {
    match parse(text).unwrap().0 {
        Problem::Composition(s) => s,
        other => panic!("not a composition symbol: {other:?}"),
    }
}

#[test]
fn symbol_file_to_checked_sample() {
    let sym = composition(r#"{"operator": "composition", "blaschke": {"origin_order": 3}}"#);
    let report = decide_composition(&sym, 1e-9).unwrap();
    assert_eq!(report.verdict, Verdict::Embeddable);
    let construction = report.construction.unwrap();
    assert!(matches!(construction, Construction::ShiftEmbedding { .. }));
    let CompositionSymbol::Blaschke(b) = sym else { unreachable!() };
    let phi: SymbolRef = Arc::new(b);
    let opts = RealizeOptions { n: 27, ..Default::default() };
    let times = [0.0, 0.5, 1.0];
    let s = realize(&construction, Some(&phi), &times, &opts).unwrap();
    assert!(check_semigroup_law(&s, &[(0.5, 0.5)], 1e-9).unwrap().pass);
    assert!(check_isometry(&s, 1e-6).pass);
}

#[test]
fn rotation_file_to_flow() {
    let sym = composition(
        r#"{"operator": "composition", "mobius": {"a": {"re": 0.5403023058681398, "im": 0.8414709848078965}, "b": {"re": 0.0}, "c": {"re": 0.0}, "d": {"re": 1.0}}}"#,
    );
    let report = decide_composition(&sym, 1e-9).unwrap();
    let s = realize(&report.construction.unwrap(), None, &[0.0, 0.5, 1.0], &RealizeOptions::default()).unwrap();
    assert!(check_semigroup_law(&s, &[(0.5, 0.5)], 1e-9).unwrap().pass);
}

#[test]
fn single_thread_pool_gives_identical_matrices() {
    let b = BlaschkeProduct::new(
        0.7,
        1,
        vec![BlaschkeZero { alpha: C64::new(0.3, -0.4), multiplicity: 2 }],
    )
    .unwrap();
    let opts = TaylorOptions::default();
    let many = composition_matrix(&b, 32, &opts).unwrap();
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| composition_matrix(&b, 32, &opts).unwrap());
    assert_eq!(many.matrix(), one.matrix());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn survey_is_reproducible_and_complete(seed in any::<u64>()) {
        let a = preimage_survey(8, 2..=6, seed, 1e-10);
        let b = preimage_survey(8, 2..=6, seed, 1e-10);
        prop_assert!(a.iter().all(|e| e.ok()));
        let betas: Vec<C64> = a.iter().map(|e| e.beta).collect();
        prop_assert_eq!(betas, b.iter().map(|e| e.beta).collect::<Vec<_>>());
    }
}
