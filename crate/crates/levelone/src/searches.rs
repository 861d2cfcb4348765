//! Two global searches over the count tables: the parameters of `SO25`
//! with the infinitesimal character of the trivial representation, and
//! tempered parameters of rank `n` with consecutive Hodge weights.

use std::collections::BTreeMap;

use crate::arthur::{multiplicity, ArthurError, ArthurParameter, Block, Group, SO25};
use crate::basecounts::{CountError, CountTables, CuspidalLabel};

fn decreasing(len: usize, max: i64, min: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    let mut w = max;
    while w >= min {
        for mut rest in decreasing(len - 1, w - 2, min) {
            rest.insert(0, w);
            out.push(rest);
        }
        w -= 2;
    }
    out
}

/// Every label of rank at most 8 and motivic weight at most `max_weight`,
/// repeated according to its count.
pub fn labels_up_to(tables: &CountTables, max_weight: i64) -> Result<Vec<CuspidalLabel>, CountError> {
    let mut out = vec![CuspidalLabel::trivial()];
    let top_odd = if max_weight % 2 == 0 { max_weight - 1 } else { max_weight };
    let top_even = max_weight - max_weight.rem_euclid(2);
    for k in 1..=4 {
        for h in decreasing(k, top_odd, 1) {
            let l = CuspidalLabel::symplectic(h);
            let c = tables.count(&l)?;
            out.extend(std::iter::repeat_n(l, c as usize));
        }
    }
    for n in [3usize, 4, 5, 7, 8] {
        let k = n / 2;
        let min = if n % 2 == 1 { 2 } else { 0 };
        for h in decreasing(k, top_even, min) {
            if h[0] == 0 {
                continue;
            }
            let l = CuspidalLabel::orthogonal(n, h);
            let c = tables.count(&l)?;
            out.extend(std::iter::repeat_n(l, c as usize));
        }
    }
    out.sort_by(|a, b| b.motivic_weight().cmp(&a.motivic_weight()).then(a.cmp(b)));
    Ok(out)
}

/// The cuspidal labels of motivic weight at most 23, with multiplicity.
pub fn borcherds_blocks(tables: &CountTables) -> Result<Vec<CuspidalLabel>, CountError> {
    labels_up_to(tables, 23)
}

fn search_blocks(
    labels: &[CuspidalLabel],
    used: &mut Vec<bool>,
    remaining: &mut BTreeMap<i64, usize>,
    blocks: &mut Vec<Block>,
    out: &mut Vec<ArthurParameter>,
) {
    let Some((&top, _)) = remaining.iter().next_back() else {
        out.push(ArthurParameter::new(SO25, blocks.clone()));
        return;
    };
    for i in 0..labels.len() {
        if used[i] {
            continue;
        }
        let pi = &labels[i];
        let d = top - pi.motivic_weight() + 1;
        if d < 1 {
            continue;
        }
        let parity = if d % 2 == 1 { 1 } else { -1 };
        if pi.duality.sign() * parity != SO25.sign() {
            continue;
        }
        let b = Block { pi: pi.clone(), d: d as usize };
        let eig = b.eigenvalues();
        if eig.windows(2).any(|p| p[0] == p[1]) || !eig.iter().all(|e| remaining.contains_key(e)) {
            continue;
        }
        for e in &eig {
            remaining.remove(e);
        }
        used[i] = true;
        blocks.push(b);
        search_blocks(labels, used, remaining, blocks, out);
        blocks.pop();
        used[i] = false;
        for &e in &eig {
            remaining.insert(e, 1);
        }
    }
}

/// Parameters of `SO25` built from the given labels whose infinitesimal
/// character has eigenvalues `+-1/2, ..., +-23/2`. Repeated labels stand for
/// distinct representations and give distinct parameters.
pub fn enumerate_so25_trivial(blocks: &[CuspidalLabel]) -> Vec<ArthurParameter> {
    let mut remaining = BTreeMap::new();
    for w in (1..=23).step_by(2) {
        remaining.insert(w, 1);
        remaining.insert(-w, 1);
    }
    let mut out = vec![];
    search_blocks(blocks, &mut vec![false; blocks.len()], &mut remaining, &mut vec![], &mut out);
    out.sort();
    out
}

pub fn multiplicities_so25(params: &[ArthurParameter]) -> Vec<u64> {
    params.iter().map(multiplicity).collect()
}

fn partitions(
    weights: &[i64],
    has_zero: bool,
    tables: &CountTables,
    current: &mut Vec<CuspidalLabel>,
    out: &mut Vec<Vec<CuspidalLabel>>,
) -> Result<(), CountError> {
    let Some((&top, rest)) = weights.split_first() else {
        if !has_zero {
            out.push(current.clone());
        }
        return Ok(());
    };
    let symplectic = top % 2 == 1;
    for k in 1..=4usize {
        if k - 1 > rest.len() {
            break;
        }
        for pick in choose(rest, k - 1) {
            let mut h = vec![top];
            h.extend(&pick);
            let mut candidates = vec![];
            if symplectic {
                candidates.push(CuspidalLabel::symplectic(h.clone()));
            } else {
                candidates.push(CuspidalLabel::orthogonal(2 * k, h.clone()));
                if has_zero {
                    candidates.push(CuspidalLabel::orthogonal(2 * k + 1, h.clone()));
                }
            }
            for l in candidates {
                if l.n > 8 || tables.count(&l)? == 0 {
                    continue;
                }
                let left: Vec<i64> = rest.iter().copied().filter(|w| !pick.contains(w)).collect();
                let zero_left = has_zero && l.n % 2 == 0;
                current.push(l);
                partitions(&left, zero_left, tables, current, out)?;
                current.pop();
            }
        }
    }
    Ok(())
}

fn choose(pool: &[i64], k: usize) -> Vec<Vec<i64>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for i in 0..pool.len() {
        for mut r in choose(&pool[i + 1..], k - 1) {
            r.insert(0, pool[i]);
            out.push(r);
        }
    }
    out
}

/// Tempered sums of labels of rank at most 8 whose infinitesimal character
/// has eigenvalues `+-1/2, ..., +-(n-1)/2`; each entry is one choice of
/// labels, listed with its number of realizations.
pub fn search_tempered(tables: &CountTables, n: usize) -> Result<Vec<(Vec<CuspidalLabel>, u64)>, ArthurError> {
    let (weights, has_zero): (Vec<i64>, bool) = if n.is_multiple_of(2) {
        ((1..n as i64).rev().step_by(2).collect(), false)
    } else {
        ((2..n as i64).rev().step_by(2).collect(), true)
    };
    let mut found = vec![];
    partitions(&weights, has_zero, tables, &mut vec![], &mut found)?;
    let mut out = vec![];
    for labels in found {
        let mut count = 1;
        for l in &labels {
            count *= tables.count(l)?;
        }
        out.push((labels, count));
    }
    Ok(out)
}

/// The tempered parameters of rank 28 with Hodge weights `27, 25, ..., 1`.
pub fn search_tempered_28(tables: &CountTables) -> Result<Vec<ArthurParameter>, ArthurError> {
    let mut out = vec![];
    for (labels, count) in search_tempered(tables, 28)? {
        let blocks: Vec<Block> = labels.into_iter().map(|pi| Block { pi, d: 1 }).collect();
        for _ in 0..count {
            out.push(ArthurParameter::new(Group::OddSO(14), blocks.clone()));
        }
    }
    Ok(out)
}

/// Parameters rendered one per line, in the `Delta_{..}[d]` notation.
pub fn render_all(params: &[ArthurParameter], tables: &CountTables) -> Vec<String> {
    params.iter().map(|p| p.render(Some(tables))).collect()
}

/// Maps the LaTeX spelling (`\Delta`, `{\rm Sym}^2`, `\oplus`) to the
/// plain notation and drops all whitespace.
pub fn normalize_notation(s: &str) -> String {
    s.replace("\\Delta", "Δ")
        .replace("{\\rm Sym}", "Sym")
        .replace("\\oplus", "⊕")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect()
}

fn parse_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|x| x.parse::<i64>().map_err(|e| format!("{}: {}", x, e))).collect()
}

/// Parses one parameter written as `Δ_{w..}^k[d] ⊕ Sym^2Δ_{w}[d] ⊕ [d]`,
/// in plain or LaTeX spelling. Superscripts counting choices are ignored.
pub fn parse_notation(group: Group, text: &str) -> Result<ArthurParameter, String> {
    let norm = normalize_notation(text);
    let mut blocks = vec![];
    for term in norm.split('⊕') {
        let (head, d) = match term.rfind('[') {
            Some(i) if term.ends_with(']') => {
                (&term[..i], term[i + 1..term.len() - 1].parse::<usize>().map_err(|e| e.to_string())?)
            }
            _ => (term, 1),
        };
        let pi = if head.is_empty() {
            CuspidalLabel::trivial()
        } else {
            let (sym2, rest) = match head.strip_prefix("Sym^2") {
                Some(r) => (true, r),
                None => (false, head),
            };
            let (kind, rest) = if let Some(r) = rest.strip_prefix("Δ_{") {
                ("D", r)
            } else if let Some(r) = rest.strip_prefix("O*_{") {
                ("O*", r)
            } else if let Some(r) = rest.strip_prefix("O_{") {
                ("O", r)
            } else {
                return Err(format!("unrecognized term {:?}", term));
            };
            let close = rest.find('}').ok_or_else(|| format!("unclosed weights in {:?}", term))?;
            let w = parse_list(&rest[..close])?;
            match (sym2, kind) {
                (true, "D") if w.len() == 1 => CuspidalLabel::orthogonal(3, vec![2 * w[0]]),
                (false, "D") => CuspidalLabel::symplectic(w),
                (false, "O") => CuspidalLabel::orthogonal(2 * w.len(), w),
                (false, "O*") => CuspidalLabel::orthogonal(2 * w.len() + 1, w),
                _ => return Err(format!("unrecognized term {:?}", term)),
            }
        };
        blocks.push(Block { pi, d });
    }
    let p = ArthurParameter::new(group, blocks);
    p.validate()?;
    Ok(p)
}
