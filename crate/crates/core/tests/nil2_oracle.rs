mod common;

use common::oracles::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trackwork::nilgroup::{FreeWord, Int, Nil2Element, Nil2Hom};

#[test]
fn swapped_pair_matches_rewriting() {
    // frozen from the rewriting oracle: x2 x1 = x1 x2 [x1,x2]^-1
    let w = FreeWord::new(2, vec![(1, 1), (0, 1)]).unwrap();
    assert_eq!(collect_by_rewriting(&w), (vec![1, 1], vec![-1]));
    assert_eq!(as_i64(&w.nil2_normalize()), (vec![1, 1], vec![-1]));
}

#[test]
fn inverse_of_product_matches_rewriting() {
    // (x1 x2)^-1 = x2^-1 x1^-1, frozen: x1^-1 x2^-1 [x1,x2]^-1
    let w = FreeWord::new(2, vec![(1, -1), (0, -1)]).unwrap();
    assert_eq!(collect_by_rewriting(&w), (vec![-1, -1], vec![-1]));
    let g = Nil2Element::parse(2, "x1 x2").unwrap();
    assert_eq!(as_i64(&g.inv()), (vec![-1, -1], vec![-1]));
}

#[test]
fn short_words_agree_with_rewriting() {
    for rank in 1..=3 {
        for len in 0..=5 {
            for w in all_words(rank, len) {
                assert_eq!(as_i64(&w.nil2_normalize()), collect_by_rewriting(&w), "{w}");
            }
        }
    }
}

#[test]
fn normal_forms_evaluate_correctly_in_ut3() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let rank = rng.gen_range(1..=3);
        let images: Vec<Ut3> = (0..rank)
            .map(|_| Ut3(rng.gen_range(-3..4), rng.gen_range(-3..4), rng.gen_range(-3..4)))
            .collect();
        let len = rng.gen_range(0..12);
        let letters = (0..len)
            .map(|_| (rng.gen_range(0..rank), rng.gen_range(-2i64..3)))
            .collect();
        let w = FreeWord::new(rank, letters).unwrap();
        assert_eq!(eval_normal_form(&w.nil2_normalize(), &images), eval_word(&w, &images));
    }
}

#[test]
fn commutators_are_central() {
    for rank in 2..=3 {
        for w in all_words(rank, 3) {
            let g = w.nil2_normalize();
            for i in 0..rank {
                for j in i + 1..rank {
                    let c = Nil2Element::basic_commutator(rank, i, j).unwrap();
                    assert!(g.commutator(&c).unwrap().is_identity());
                    assert_eq!(g.mul(&c).unwrap(), c.mul(&g).unwrap());
                }
            }
        }
    }
}

fn element(rank: usize) -> impl Strategy<Value = Nil2Element> {
    let pairs = rank * (rank - 1) / 2;
    (
        proptest::collection::vec(-20i64..21, rank),
        proptest::collection::vec(-20i64..21, pairs),
    )
        .prop_map(move |(g, c)| Nil2Element::from_i64(rank, &g, &c).unwrap())
}

fn hom(n: usize, m: usize) -> impl Strategy<Value = Nil2Hom> {
    proptest::collection::vec(element(m), n).prop_map(move |ims| Nil2Hom::new(n, m, ims).unwrap())
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in element(3), b in element(3), c in element(3)) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn inverse_and_powers(a in element(3), k in -6i64..7, l in -6i64..7) {
        prop_assert!(a.mul(&a.inv()).unwrap().is_identity());
        let lhs = a.pow(&Int::from(k)).mul(&a.pow(&Int::from(l))).unwrap();
        prop_assert_eq!(lhs, a.pow(&Int::from(k + l)));
    }

    #[test]
    fn concatenation_matches_product(u in proptest::collection::vec((0usize..3, -3i64..4), 0..7),
                                     v in proptest::collection::vec((0usize..3, -3i64..4), 0..7)) {
        let u = FreeWord::new(3, u).unwrap();
        let v = FreeWord::new(3, v).unwrap();
        let whole = u.concat(&v).unwrap().nil2_normalize();
        prop_assert_eq!(whole, u.nil2_normalize().mul(&v.nil2_normalize()).unwrap());
    }

    #[test]
    fn homs_respect_products(f in hom(3, 2), a in element(3), b in element(3)) {
        let lhs = f.apply(&a.mul(&b).unwrap()).unwrap();
        let rhs = f.apply(&a).unwrap().mul(&f.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_associative_and_abelianizes(f in hom(2, 3), g in hom(3, 2), h in hom(2, 3)) {
        let l = f.compose(&g).unwrap().compose(&h).unwrap();
        let r = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(&l, &r);
        let ab = f.abelianize().unwrap()
            .checked_mul(&g.abelianize().unwrap()).unwrap()
            .checked_mul(&h.abelianize().unwrap()).unwrap();
        prop_assert_eq!(l.abelianize().unwrap(), ab);
    }

    #[test]
    fn text_form_round_trips(a in element(3)) {
        prop_assert_eq!(Nil2Element::parse(3, &a.to_string()).unwrap(), a);
    }
}
