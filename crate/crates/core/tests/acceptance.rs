//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::time::Instant;

use common::criteria::*;

#[test]
fn acceptance() {
    type Check = Box<dyn Fn() -> Outcome>;
    let criteria: Vec<(&str, Check)> = vec![
        ("nil2 collection agrees with the rewriting oracle", Box::new(|| criterion_1(1000))),
        ("δδ = 0 on random cochains", Box::new(|| criterion_2(200))),
        ("characteristic class lemma", Box::new(|| criterion_3(3, 100, 10))),
        ("H^3 of Z/2 with Z/2 coefficients", Box::new(criterion_4)),
        ("pseudosection dichotomy", Box::new(|| criterion_5(3))),
        ("canonical Γ-structures satisfy (Γ) on the grid", Box::new(|| criterion_6(200))),
        ("Γ-structures are unique on the grid", Box::new(|| criterion_7(1500))),
        ("μ-algebra, sum formula and ⊠ associativity", Box::new(|| criterion_8(100))),
        ("naturality in maps and tracks", Box::new(|| criterion_9(4))),
        ("equivalence of the functors T and G", Box::new(|| criterion_10(50, 10))),
        ("duality", Box::new(criterion_11)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match &outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1} s)", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name} ({secs:.1} s)\n{why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
