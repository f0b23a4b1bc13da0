mod common;

use common::criteria::{criterion_10, criterion_8, group, structure, uniqueness_alphas, xi_maps, GROUPS};
use trackwork::gamma::{
    nonzero_coefficients, verify_gamma_grid, verify_negative_track, verify_typed_boxbox, verify_uniqueness, Grid,
};
use trackwork::nilgroup::Nil2Hom;

#[test]
fn small_grid_property_gamma() {
    let grid = Grid::new(2, 3);
    for (i, m) in GROUPS.iter().enumerate() {
        for (j, f) in xi_maps().iter().enumerate() {
            let s = structure(m, f, (10 * i + j) as u64);
            let (r, stats) = verify_gamma_grid(&s, &grid, 1, 20).unwrap();
            assert!(r.passed(), "{}", r.to_text());
            assert_eq!(stats.block_pairs, grid.reduced_pairs());
        }
    }
}

#[test]
fn uniqueness_on_a_sample() {
    let m = "Z+Z/2";
    let s = structure(m, &Nil2Hom::power(3), 4);
    let alphas: Vec<Nil2Hom> = uniqueness_alphas(30, 2).into_iter().step_by(17).collect();
    let r = verify_uniqueness(&s, &alphas, &nonzero_coefficients(&group(m))).unwrap();
    assert!(r.passed(), "{}", r.to_text());
}

#[test]
fn multiplication_tracks_and_sums() {
    criterion_8(10).unwrap();
}

#[test]
fn negative_track_and_typed_pasting() {
    let s = structure("Z/4", &Nil2Hom::power(-1), 3);
    assert!(verify_negative_track(&s).unwrap().passed());
    let pairs = vec![
        (Nil2Hom::parse(1, 2, &["x1 x2"]).unwrap(), Nil2Hom::parse(2, 1, &["x1^2", "x1^-1"]).unwrap()),
        (Nil2Hom::power(3), Nil2Hom::power(-2)),
    ];
    assert!(verify_typed_boxbox(&s, &pairs).unwrap().passed());
}

#[test]
fn equivalence_at_small_scale() {
    criterion_10(8, 3).unwrap();
}
