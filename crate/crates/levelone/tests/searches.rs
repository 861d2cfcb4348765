mod common;

use std::collections::BTreeMap;

use common::{appendix_c, computed};
use levelone::arthur::{label_name, multiplicity, SO25};
use levelone::searches::{
    borcherds_blocks, enumerate_so25_trivial, multiplicities_so25, normalize_notation, parse_notation, render_all,
    search_tempered, search_tempered_28,
};

fn superscript_weight(line: &str) -> usize {
    // each ^k on a label counts k distinct choices
    let mut n = 1;
    let mut rest = line;
    while let Some(i) = rest.find("}^") {
        let tail = &rest[i + 2..];
        let digits: String = tail.chars().take_while(|c| c.is_ascii_digit()).collect();
        n *= digits.parse::<usize>().unwrap_or(1);
        rest = tail;
    }
    n
}

#[test]
fn twenty_three_labels_up_to_weight_23() {
    let b = borcherds_blocks(&computed().tables).unwrap();
    assert_eq!(b.len(), 23);
    let names: Vec<String> = b.iter().map(label_name).collect();
    assert_eq!(names.iter().filter(|n| *n == "Δ_{23}").count(), 2);
    assert!(names.contains(&"Sym^2 Δ_{11}".to_string()));
    assert!(names.contains(&"[1]".to_string()));
}

#[test]
fn so25_parameters_match_reference_listing() {
    let t = &computed().tables;
    let params = enumerate_so25_trivial(&borcherds_blocks(t).unwrap());
    assert_eq!(params.len(), 121);
    let mut got: BTreeMap<String, usize> = BTreeMap::new();
    for name in render_all(&params, t) {
        *got.entry(normalize_notation(&name)).or_default() += 1;
    }
    let mut want: BTreeMap<String, usize> = BTreeMap::new();
    for line in appendix_c() {
        *want.entry(normalize_notation(&line)).or_default() += superscript_weight(&normalize_notation(&line));
    }
    assert_eq!(want.values().sum::<usize>(), 121);
    assert_eq!(got, want);
}

#[test]
fn so25_multiplicities_are_one() {
    let t = &computed().tables;
    let params = enumerate_so25_trivial(&borcherds_blocks(t).unwrap());
    assert!(multiplicities_so25(&params).iter().all(|&m| m == 1));
}

#[test]
fn reference_lines_parse_back() {
    let t = &computed().tables;
    let params = enumerate_so25_trivial(&borcherds_blocks(t).unwrap());
    for line in appendix_c() {
        let p = parse_notation(SO25, &line).unwrap();
        assert!(params.contains(&p), "{}", line);
        assert_eq!(multiplicity(&p), 1);
    }
}

#[test]
fn rank_28_has_exactly_one_tempered_parameter() {
    let t = &computed().tables;
    let found = search_tempered_28(t).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(
        normalize_notation(&found[0].render(Some(t))),
        normalize_notation("Δ_{27,23,9,1} ⊕ Δ_{25,13,3} ⊕ Δ_{21,5} ⊕ Δ_{19,7} ⊕ Δ_{17} ⊕ Δ_{15} ⊕ Δ_{11}")
    );
}

#[test]
fn no_tempered_parameter_below_rank_28() {
    let t = &computed().tables;
    for n in 2..28 {
        assert!(search_tempered(t, n).unwrap().is_empty(), "n = {}", n);
    }
}

#[test]
fn parse_rejects_garbage() {
    assert!(parse_notation(SO25, "Δ_{24}[2]").is_err());
    assert!(parse_notation(SO25, "X_{3}").is_err());
}
