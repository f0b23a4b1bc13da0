mod common;

use common::criteria::{cochain_fixtures, criterion_4, periodic_oracle};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trackwork::catcore::{FinCategory, NaturalSystem};
use trackwork::cohomology::{CochainComplex, CohomologyGroup};

#[test]
fn cyclic_groups_match_the_periodic_resolution() {
    for k in 2..=4usize {
        let c = FinCategory::cyclic_group(k);
        for g in [0i64, 2, 3, 4] {
            let coeff = if g == 0 { "Z".to_string() } else { format!("Z/{g}") };
            let d = NaturalSystem::constant(&c, coeff.parse().unwrap());
            let cx = CochainComplex::new(&c, &d, 4);
            for n in 0..=3 {
                let got = CohomologyGroup::compute(&cx, n).unwrap_or_else(|e| panic!("H^{n}(Z/{k}; {coeff}): {e}")).presentation().to_string();
                assert_eq!(got, periodic_oracle(k as i64, g, n), "H^{n}(Z/{k}; {coeff})");
            }
        }
    }
}

#[test]
fn oracle_values() {
    assert_eq!(periodic_oracle(2, 2, 3), "Z/2");
    assert_eq!(periodic_oracle(3, 0, 2), "Z/3");
    assert_eq!(periodic_oracle(3, 0, 1), "0");
    assert_eq!(periodic_oracle(4, 2, 1), "Z/2");
    assert_eq!(periodic_oracle(3, 2, 2), "0");
    assert!(criterion_4().is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn coboundary_squares_to_zero(fixture in 0usize..5, degree in 0usize..=3, seed in any::<u64>()) {
        let (_, c, d) = cochain_fixtures().swap_remove(fixture);
        let cx = CochainComplex::new(&c, &d, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = cx.random(degree, &mut rng, 9).unwrap();
        let dd = cx.coboundary(&cx.coboundary(&s).unwrap()).unwrap();
        prop_assert!(cx.is_zero(&dd));
    }

    #[test]
    fn coboundary_is_additive(fixture in 0usize..5, degree in 0usize..=3, seed in any::<u64>()) {
        let (_, c, d) = cochain_fixtures().swap_remove(fixture);
        let cx = CochainComplex::new(&c, &d, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (cx.random(degree, &mut rng, 9).unwrap(), cx.random(degree, &mut rng, 9).unwrap());
        let lhs = cx.coboundary(&cx.add(&a, &b).unwrap()).unwrap();
        let rhs = cx.add(&cx.coboundary(&a).unwrap(), &cx.coboundary(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
