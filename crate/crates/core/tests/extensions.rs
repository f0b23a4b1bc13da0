mod common;

use common::criteria::{criterion_11, criterion_3, criterion_5};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trackwork::cohomology::{
    class_of, class_vanishes, dual_section, exhaustive_pseudosection, extension_cocycle, random_section,
    reverse_cochain, CochainComplex,
};
use trackwork::trackcat::{crossed_module, letter_export, table_fixtures, LinearExtension};

#[test]
fn characteristic_class_lemma_at_small_rank() {
    criterion_3(2, 20, 3).unwrap();
}

#[test]
fn pseudosections_exist_exactly_for_trivial_classes() {
    criterion_5(2).unwrap();
}

#[test]
fn sign_crossed_module_is_certified_nontrivial() {
    let t = crossed_module(true);
    assert!(!class_vanishes(&t).unwrap());
    assert_eq!(class_of(&t).unwrap().0.coordinates, vec![1]);
    assert!(exhaustive_pseudosection(&t, 1 << 20).unwrap().is_none());
    assert!(exhaustive_pseudosection(&crossed_module(false), 1 << 20).unwrap().is_some());
}

#[test]
fn duality_is_involutive_and_keeps_the_class() {
    criterion_11().unwrap();
}

#[test]
fn dual_cocycle_is_the_negated_reverse() {
    // the dual section's cocycle is −R of the original, with R reversing chains
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in table_fixtures().into_iter().filter(|t| t.base().morphism_count() < 10) {
        let d = t.dualize();
        let cx = CochainComplex::new(t.base(), t.system(), 3);
        let cx_op = CochainComplex::new(d.base(), d.system(), 3);
        let s = random_section(&t, &mut rng).unwrap();
        let z = extension_cocycle(&t, &cx, &s).unwrap();
        let z_op = extension_cocycle(&d, &cx_op, &dual_section(&s)).unwrap();
        let want = cx_op.scale(&reverse_cochain(&cx, &cx_op, &z).unwrap(), -1).unwrap();
        assert_eq!(z_op, want, "{}", t.name());
    }
}

#[test]
fn letter_maps_split() {
    let t = letter_export("Z/4".parse().unwrap(), 1);
    assert!(class_vanishes(&t).unwrap());
    assert!(class_of(&t).unwrap().0.is_zero);
}
