#![allow(dead_code)]

pub mod closed_forms;
pub mod genus3;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::OnceLock;

use levelone::arthur::{endoscopic_partition, Group};
use levelone::groupdata::{factor_cyclotomic, ClassDataset};
use levelone::pipeline::{build_tables, data_dir, hodge_targets, Computed, Limits};
use levelone::searches::normalize_notation;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// `w1,w2,.. value` per line.
pub fn fixture(name: &str) -> BTreeMap<Vec<i64>, u64> {
    std::fs::read_to_string(fixture_path(name))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            let w = it.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
            (w, it.next().unwrap().parse().unwrap())
        })
        .collect()
}

/// `w1,.. | name ; name` per line, names normalized.
pub fn partition_fixture(name: &str) -> BTreeMap<Vec<i64>, BTreeSet<String>> {
    std::fs::read_to_string(fixture_path(name))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (w, names) = l.split_once('|').unwrap();
            let w = w.trim().split(',').map(|x| x.parse().unwrap()).collect();
            (w, names.split(';').map(normalize_notation).collect())
        })
        .collect()
}

pub fn appendix_c() -> Vec<String> {
    std::fs::read_to_string(fixture_path("appendix_c.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.to_string())
        .collect()
}

/// Count tables over the default ranges, built once per test binary.
pub fn computed() -> &'static Computed {
    static CELL: OnceLock<Computed> = OnceLock::new();
    CELL.get_or_init(|| build_tables(&data_dir(), Limits::default(), None, false).unwrap())
}

/// `n1 >= n2 >= .. >= n_k >= 0` with `n1 <= max`.
pub fn dominant_nonneg(len: usize, max: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for a in 0..=max {
        for mut rest in dominant_nonneg(len - 1, a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// Compares `got` with a fixture listing the nonzero entries of a table up
/// to its last key in the given order; returns the mismatches. Computed
/// entries must also pass `keep`.
pub fn prefix_mismatches(
    got: &BTreeMap<Vec<i64>, u64>,
    want: &BTreeMap<Vec<i64>, u64>,
    order: impl Fn(&[i64]) -> Vec<i64>,
    keep: impl Fn(&[i64]) -> bool,
) -> Vec<String> {
    let last = want.keys().map(|k| order(k)).max().unwrap();
    let mut bad = vec![];
    for (w, v) in want {
        match got.get(w) {
            Some(g) if g == v => {}
            g => bad.push(format!("{:?}: want {} got {:?}", w, v, g)),
        }
    }
    for (w, v) in got {
        if *v != 0 && order(w) <= last && keep(w) && !want.contains_key(w) {
            bad.push(format!("{:?}: want 0 got {}", w, v));
        }
    }
    bad
}

pub fn lex(w: &[i64]) -> Vec<i64> {
    w.to_vec()
}

/// Order of the `G2` table: by `w + v`, then by decreasing `w`.
pub fn g2_order(w: &[i64]) -> Vec<i64> {
    vec![w[0] + w[1], -w[0]]
}

/// Total class size per cyclotomic factorization of the charpoly, keyed
/// `d:e,d:e`.
pub fn census(ds: &ClassDataset) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for c in &ds.classes {
        let f = factor_cyclotomic(&c.charpoly, 64).unwrap();
        let key = f.iter().map(|(d, e)| format!("{}:{}", d, e)).collect::<Vec<_>>().join(",");
        *out.entry(key).or_insert(0) += c.size;
    }
    out
}

/// Endoscopic listings of all targets with `w1 <= max_w1`, names normalized.
pub fn listing(group: Group, max_w1: i64) -> BTreeMap<Vec<i64>, BTreeSet<String>> {
    let t = &computed().tables;
    let mut out = BTreeMap::new();
    for w in hodge_targets(group, max_w1) {
        let names: BTreeSet<String> =
            endoscopic_partition(group, &w, t).unwrap().into_iter().map(|p| normalize_notation(&p.name)).collect();
        if !names.is_empty() {
            out.insert(w, names);
        }
    }
    out
}

pub fn diff(got: &BTreeMap<Vec<i64>, BTreeSet<String>>, want: &BTreeMap<Vec<i64>, BTreeSet<String>>) -> Vec<String> {
    let keys: BTreeSet<_> = got.keys().chain(want.keys()).collect();
    keys.into_iter()
        .filter(|k| got.get(*k) != want.get(*k))
        .map(|k| format!("{:?}: got {:?} want {:?}", k, got.get(k), want.get(k)))
        .collect()
}

/// `e`-coordinates from fundamental coordinates `(a1, a2, a3, a4)` of `D4`,
/// with `a3 + a4` even.
pub fn from_fundamental(a: [i64; 4]) -> Vec<i64> {
    let n3 = (a[2] + a[3]) / 2;
    let n4 = (a[3] - a[2]) / 2;
    let n2 = a[1] + n3;
    vec![a[0] + n2, n2, n3, n4]
}
