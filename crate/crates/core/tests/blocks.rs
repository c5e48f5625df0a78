mod common;

use bvtk::blocks::{
    basic_block, coding_by_vertices, decode_letter, deterministic_test, dotted_basic_block, factor_block,
    k_equivalent_vertices, prefix_function, primitive_root_len, uniform_order_test, Alphabet,
};
use bvtk::diagram::{paths_into, Diagram};
use bvtk::families::{fig1_family, gj, kite_deterministic, kite_nondet, odometer_single, odometer_suo};
use bvtk::PathSpec;
use common::{all_paths, period_oracle, random_diagram};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn basic_block_lists_truncations_in_order() {
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..30 {
        let d = random_diagram(&mut rng, 5);
        let n = d.depth();
        for v in 0..d.width(n) {
            for k in 0..n {
                let want: Vec<u64> = paths_into(&d, n, v).iter().map(|p| p.truncate(k).letter(&d, k)).collect();
                let b = basic_block(&d, n, v, k).unwrap();
                assert_eq!(b.alphabet, Alphabet::Paths(k));
                assert_eq!(b.letters, want);
                for i in 0..=k {
                    let f = factor_block(&d, &b, i).unwrap();
                    assert_eq!(f, basic_block(&d, n, v, i).unwrap());
                }
            }
        }
    }
}

#[test]
fn decode_inverts_letter() {
    let d = gj(4).unwrap();
    for k in 1..=4 {
        for p in all_paths(&d, k) {
            assert_eq!(decode_letter(&d, k, p.letter(&d, k)), p);
        }
    }
}

#[test]
fn fig1_codings_and_names() {
    let d = fig1_family(5).unwrap();
    let c = coding_by_vertices(&d, 3, 0, 1).unwrap();
    assert_eq!(c.names(&d).join(""), "uuuvvuuu");
    assert_eq!(c.display(&d).to_string(), "u u u v v u u u");
    assert_eq!(coding_by_vertices(&d, 3, 1, 1).unwrap().names(&d).join(""), "uuuvvuuu");
    assert!(coding_by_vertices(&d, 3, 0, 3).is_err());
    assert!(basic_block(&d, 9, 0, 1).is_err());
    let x: PathSpec = "prefix=1,1,1@a;suffix=min".parse().unwrap();
    let db = dotted_basic_block(&x, 3, 1, &d).unwrap();
    assert_eq!(db.dot, 0);
    assert_eq!(db.block.len(), 8);
}

#[test]
fn vertex_equivalence() {
    let d = fig1_family(5).unwrap();
    assert!(k_equivalent_vertices(&d, 3, 0, 1, 1).unwrap());
    assert!(!k_equivalent_vertices(&d, 3, 0, 1, 2).unwrap());
    assert!(k_equivalent_vertices(&d, 3, 0, 0, 2).unwrap());
    assert!(k_equivalent_vertices(&d, 3, 0, 1, 3).is_err());
}

#[test]
fn uniform_order() {
    let d = odometer_suo(&[2, 3, 2]).unwrap();
    for n in 2..=3 {
        let u = uniform_order_test(&d, n).unwrap().unwrap();
        assert!(u.powers.iter().all(|&p| p == 1));
    }
    let u = uniform_order_test(&odometer_single(&[2, 4]).unwrap(), 2).unwrap().unwrap();
    assert_eq!(u.period.letters, vec![0]);
    assert_eq!(u.powers, vec![4]);
    assert!(uniform_order_test(&gj(4).unwrap(), 3).unwrap().is_none());
    assert!(uniform_order_test(&d, 0).is_err());
}

#[test]
fn determinism() {
    assert!(deterministic_test(&kite_deterministic(&[3, 2, 2, 1], 6).unwrap()).deterministic);
    let t = deterministic_test(&kite_nondet().unwrap());
    assert!(!t.deterministic);
    assert!(t.first_violation.unwrap().starts_with("`a` at level 1 has two outgoing edges labeled 1"));
    let repeat = Diagram::from_names(&[
        vec![("a", vec!["root"])],
        vec![("x", vec!["a"]), ("y", vec!["a"])],
    ])
    .unwrap();
    assert!(!deterministic_test(&repeat).deterministic);
}

proptest! {
    #[test]
    fn primitive_root_matches_scan(w in prop::collection::vec(0u8..3, 0..40)) {
        let got = primitive_root_len(&w);
        let want = (1..=w.len()).find(|&p| w.len() % p == 0 && (0..w.len()).all(|i| w[i] == w[i % p])).unwrap_or(0);
        prop_assert_eq!(got, want);
        let pi = prefix_function(&w);
        for (i, &k) in pi.iter().enumerate() {
            // longest proper border of w[..=i]
            let b = (0..=i).rev().find(|&l| w[..l] == w[i + 1 - l..=i]).unwrap_or(0);
            prop_assert_eq!(k, b);
        }
        if !w.is_empty() && got < w.len() {
            prop_assert!(period_oracle(&w).is_some());
        }
    }
}
