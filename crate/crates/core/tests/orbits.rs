mod common;

use std::collections::BTreeMap;

use common::*;
use num_bigint::BigInt;
use wproj_core::{WPoint, WeightVector};

/// Canonical forms on `|x_i| ≤ 81` against the exact orbit test.
///
/// Every tuple must be equivalent to its canonical form, and canonical forms
/// sharing a Veronese class (a necessary condition for equivalence) must be
/// pairwise inequivalent.
fn check_box(q: &[u64]) {
    let w = WeightVector::classify(q).unwrap();
    let mut classes: BTreeMap<Vec<BigInt>, Vec<Vec<BigInt>>> = BTreeMap::new();
    for a in -81i64..=81 {
        for b in -81i64..=81 {
            if a == 0 && b == 0 {
                continue;
            }
            let x = WPoint::from_i64(&w, &[a, b]).unwrap();
            let c = x.canonicalize();
            assert!(orbit_equivalent(x.coords(), c.coords(), q), "{x} vs {c}");
            let class = classes.entry(x.veronese()).or_default();
            if !class.contains(&c.coords().to_vec()) {
                class.push(c.coords().to_vec());
            }
        }
    }
    for reps in classes.values() {
        for (i, x) in reps.iter().enumerate() {
            for y in &reps[i + 1..] {
                assert!(!orbit_equivalent(x, y, q), "{x:?} and {y:?} are equivalent");
            }
        }
    }
}

#[test]
fn canonical_forms_two_three() {
    check_box(&[2, 3]);
}

#[test]
fn canonical_forms_two_four() {
    check_box(&[2, 4]);
}

#[test]
fn oracle_sanity() {
    // [1:1] and [4:8] in P(2,3) via λ = 2; [1:1] and [-1:1] in P(2,4) via λ = i
    assert!(orbit_equivalent(&big(&[1, 1]), &big(&[4, 8]), &[2, 3]));
    assert!(orbit_equivalent(&big(&[1, 1]), &big(&[-1, 1]), &[2, 4]));
    assert!(!orbit_equivalent(&big(&[1, 1]), &big(&[1, -1]), &[2, 4]));
    assert!(orbit_equivalent(&big(&[2, 0]), &big(&[7, 0]), &[2, 3]));
    assert!(!orbit_equivalent(&big(&[2, 0]), &big(&[0, 7]), &[2, 3]));
    assert!(!orbit_equivalent(&big(&[2, 1]), &big(&[3, 1]), &[2, 3]));
}
