mod common;

use std::collections::BTreeMap;

use common::genus3::{even_triples, genus3_reference, OSTAR_TRIPLES};
use common::{computed, fixture, g2_order, lex, prefix_mismatches};
use levelone::arthur::{genus3_stable_term, siegel_genus3_dim, Group, SO7, SO8, SO9};
use levelone::basecounts::{orthogonal_parity_ok, CountError};
use levelone::pipeline::count_table;

fn width(t: &BTreeMap<Vec<i64>, u64>, n: usize) -> BTreeMap<Vec<i64>, u64> {
    t.iter().filter(|(k, _)| k.len() == n).map(|(k, v)| (k.clone(), *v)).collect()
}

#[test]
fn symplectic_triples() {
    let got = count_table(&computed().tables, SO7);
    let bad = prefix_mismatches(&got, &fixture("s_triples.txt"), lex, |w| w[0] <= 31);
    assert!(bad.is_empty(), "{:?}", bad);
}

#[test]
fn symplectic_quadruples() {
    let got = count_table(&computed().tables, SO9);
    let bad = prefix_mismatches(&got, &fixture("s_quadruples.txt"), lex, |w| w[0] <= 27);
    assert!(bad.is_empty(), "{:?}", bad);
}

#[test]
fn orthogonal_quadruples() {
    let got = computed().tables.o.clone();
    let bad = prefix_mismatches(&got, &fixture("o_quadruples.txt"), lex, |w| w[0] <= 30);
    assert!(bad.is_empty(), "{:?}", bad);
}

#[test]
fn orthogonal_combined() {
    let got = computed().tables.o_combined.clone();
    let bad = prefix_mismatches(&got, &fixture("o_combined.txt"), lex, |w| w[0] <= 36);
    assert!(bad.is_empty(), "{:?}", bad);
}

#[test]
fn g2_counts() {
    let got = computed().tables.g2.clone();
    let bad = prefix_mismatches(&got, &fixture("g2_counts.txt"), g2_order, |w| w[0] + w[1] <= 60);
    assert!(bad.is_empty(), "{:?}", bad);
}

#[test]
fn residuals_are_nonnegative_everywhere() {
    // extraction aborts on a negative residual; all four ran to completion
    let c = computed();
    for g in [SO7, SO9, SO8, Group::G2] {
        let ex = &c.extractions[&g];
        assert!(!ex.is_empty());
        assert!(ex.iter().all(|e| e.endoscopic + e.residual == e.m));
    }
}

#[test]
fn seven_triples_at_23() {
    let t = width(&computed().tables.s, 3);
    assert!(t.iter().all(|(w, v)| w[0] >= 23 || *v == 0));
    let at23: Vec<_> = t.iter().filter(|(w, v)| w[0] == 23 && **v > 0).collect();
    let want = [[23, 13, 5], [23, 15, 3], [23, 15, 7], [23, 17, 5], [23, 17, 9], [23, 19, 3], [23, 19, 11]];
    assert_eq!(at23.len(), 7);
    for w in want {
        assert_eq!(t[&w.to_vec()], 1);
    }
}

#[test]
fn thirty_three_quadruples_at_25() {
    let t = width(&computed().tables.s, 4);
    assert!(t.iter().all(|(w, v)| w[0] >= 25 || *v == 0));
    let at25: BTreeMap<_, _> = t.iter().filter(|(w, v)| w[0] == 25 && **v > 0).collect();
    assert_eq!(at25.len(), 33);
    let special = [(vec![25, 21, 15, 7], 2), (vec![25, 23, 11, 5], 2), (vec![25, 23, 15, 5], 3)];
    for (w, v) in at25 {
        let want = special.iter().find(|(s, _)| s == w).map_or(1, |s| s.1);
        assert_eq!(*v, want, "{:?}", w);
    }
}

#[test]
fn orthogonal_quadruples_up_to_26() {
    let o = &computed().tables.o;
    let nonzero: Vec<Vec<i64>> = o.iter().filter(|(w, v)| w[0] <= 26 && **v > 0).map(|(w, _)| w.clone()).collect();
    assert!(o.iter().all(|(w, v)| w[0] >= 24 || *v == 0));
    let mut want = vec![
        vec![24, 18, 10, 4],
        vec![24, 20, 14, 2],
        vec![26, 18, 10, 2],
        vec![26, 18, 14, 6],
        vec![26, 20, 10, 4],
        vec![26, 20, 14, 8],
        vec![26, 22, 10, 6],
        vec![26, 22, 14, 2],
        vec![26, 24, 14, 4],
        vec![26, 24, 16, 2],
        vec![26, 24, 18, 8],
        vec![26, 24, 20, 6],
    ];
    want.sort();
    assert_eq!(nonzero, want);
    assert!(want.iter().all(|w| o[w] == 1));
}

#[test]
fn odd_orthogonal_triples_up_to_26() {
    let t = &computed().tables;
    for w in even_triples(26) {
        let v = t.ostar3(&w).unwrap();
        assert_eq!(v, OSTAR_TRIPLES.contains(&w) as u64, "{:?}", w);
    }
}

#[test]
fn genus3_dimensions_up_to_26() {
    let t = &computed().tables;
    let mut cases = 0;
    for w in even_triples(26) {
        if (w[0] + w[1] + w[2]) % 4 != 0 {
            continue;
        }
        let scalar = w[0] - w[2] == 4;
        if !scalar {
            cases += 1;
        }
        let d = siegel_genus3_dim(w[0], w[1], w[2], t).unwrap();
        assert_eq!(d, genus3_reference(w), "{:?}", w);
        let stable = genus3_stable_term(w[0], w[1], w[2], t).unwrap();
        assert_eq!(stable, OSTAR_TRIPLES.contains(&w) as u64);
        if OSTAR_TRIPLES.contains(&w) {
            assert_eq!(d, 1);
        }
    }
    assert_eq!(cases, 140);
}

#[test]
fn genus3_known_small_weights() {
    // S_12(Sp6(Z)) is one-dimensional; it sits at (22, 20, 18)
    let t = &computed().tables;
    assert_eq!(siegel_genus3_dim(22, 20, 18, t).unwrap(), 1);
    assert_eq!(siegel_genus3_dim(18, 16, 14, t).unwrap(), 0);
    assert!(siegel_genus3_dim(22, 20, 19, t).is_err());
    assert!(matches!(t.ostar3(&[40, 38, 34]), Err(CountError::Missing(_))));
}

#[test]
fn orthogonal_parity_violations_vanish() {
    // with w4 = 0 the O and O* conditions coincide
    let t = &computed().tables;
    for (w, v) in t.o.iter().chain(t.o_combined.iter()) {
        if !orthogonal_parity_ok(w) {
            assert_eq!(*v, 0, "{:?}", w);
        }
    }
    assert!(t.o_combined.keys().any(|w| !orthogonal_parity_ok(w)));
}
