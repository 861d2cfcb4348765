//! Based root data of types `B_l`, `D_l` and `G2`, their Weyl groups, and
//! conversions between Hodge weights and highest weights.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::degwcf::TorsionElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("unsupported root datum {0}{1}")]
    Unsupported(Family, usize),
    #[error("inadmissible Hodge weights {0:?}: {1}")]
    BadHodge(Vec<i64>, String),
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("vector of length {0} does not match rank {1}")]
    Rank(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    B,
    D,
    G2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::B => write!(f, "B"),
            Family::D => write!(f, "D"),
            Family::G2 => write!(f, "G2"),
        }
    }
}

/// An element of the Weyl group acting on the character lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    /// Row-major matrix acting on column vectors of character coordinates.
    pub matrix: Vec<i64>,
    /// `det = (-1)^length`.
    pub sign: i64,
    /// Index of the inverse element in the enclosing list.
    pub inverse: usize,
}

/// A based root datum `(X, Phi+, X_*, Phi+ coroots)` with a `W`-invariant
/// integral inner product on `X`.
#[derive(Debug, Clone)]
pub struct BasedRootDatum {
    pub family: Family,
    pub rank: usize,
    pub positive_roots: Vec<Vec<i64>>,
    pub positive_coroots: Vec<Vec<i64>>,
    /// Indices of the simple roots in `positive_roots`.
    pub simple: Vec<usize>,
    /// `pairing[i][j] = <e_i, f_j>` for the standard bases of `X` and `X_*`.
    pub pairing: Vec<Vec<i64>>,
    /// `gram[i][j] = (e_i, e_j)`.
    pub gram: Vec<Vec<i64>>,
    /// Twice the half sum of positive roots.
    pub rho2: Vec<i64>,
    pub weyl: Vec<WeylElement>,
}

/// A weight of the maximal torus in standard character coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

/// Result of [`levi_data`].
#[derive(Debug, Clone)]
pub struct LeviData {
    /// Indices into `positive_roots` of the roots integral on `mu`.
    pub roots_m: Vec<usize>,
    /// Twice the half sum of the roots in `roots_m`.
    pub rho_m2: Vec<i64>,
    /// Indices into `weyl` of the minimal coset representatives `W^M`.
    pub coset: Vec<usize>,
    pub wm_order: usize,
}

impl BasedRootDatum {
    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    /// `<x, y>` for `x` in `X` and `y` in `X_*`.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * self.pairing[i][j] * yj;
            }
        }
        s
    }

    /// The invariant inner product on `X` (extended to rational multiples).
    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * self.gram[i][j] * yj;
            }
        }
        s
    }

    pub fn apply(&self, w: usize, v: &[i64]) -> Vec<i64> {
        apply_matrix(&self.weyl[w].matrix, v)
    }

    pub fn is_dominant(&self, lambda: &Weight) -> bool {
        self.simple.iter().all(|&s| self.pair(&lambda.0, &self.positive_coroots[s]) >= 0)
    }

    pub fn is_positive_root(&self, v: &[i64]) -> bool {
        self.positive_roots.iter().any(|r| r.as_slice() == v)
    }
}

pub(crate) fn apply_matrix(m: &[i64], v: &[i64]) -> Vec<i64> {
    let n = v.len();
    (0..n).map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum()).collect()
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn identity(n: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

/// Builds the standard based root datum of the given family and rank.
pub fn build_root_datum(family: Family, rank: usize) -> Result<BasedRootDatum, RootError> {
    let (roots, coroots, simple, pairing, gram) = match family {
        Family::B | Family::D => {
            let l = rank;
            if (family == Family::B && l < 1) || (family == Family::D && l < 3) {
                return Err(RootError::Unsupported(family, rank));
            }
            let mut roots = vec![];
            let mut coroots = vec![];
            let mut simple = vec![];
            for i in 0..l {
                for j in i + 1..l {
                    let mut a = vec![0; l];
                    a[i] = 1;
                    a[j] = -1;
                    if j == i + 1 {
                        simple.push(roots.len());
                    }
                    roots.push(a.clone());
                    coroots.push(a);
                    let mut b = vec![0; l];
                    b[i] = 1;
                    b[j] = 1;
                    if family == Family::D && i == l - 2 && j == l - 1 {
                        simple.push(roots.len());
                    }
                    roots.push(b.clone());
                    coroots.push(b);
                }
                if family == Family::B {
                    if i == l - 1 {
                        simple.push(roots.len());
                    }
                    roots.push(unit(l, i));
                    let mut c = vec![0; l];
                    c[i] = 2;
                    coroots.push(c);
                }
            }
            let id: Vec<Vec<i64>> = (0..l).map(|i| unit(l, i)).collect();
            (roots, coroots, simple, id.clone(), id)
        }
        Family::G2 => {
            if rank != 2 {
                return Err(RootError::Unsupported(family, rank));
            }
            // X = Z alpha + Z beta, alpha short, beta long
            let roots = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![3, 1], vec![3, 2]];
            // coroots in the basis (alpha^v, beta^v)
            let coroots = vec![vec![1, 0], vec![0, 1], vec![1, 3], vec![2, 3], vec![1, 1], vec![1, 2]];
            let pairing = vec![vec![2, -1], vec![-3, 2]];
            let gram = vec![vec![2, -3], vec![-3, 6]];
            (roots, coroots, vec![0, 1], pairing, gram)
        }
    };
    let n = rank;
    let mut rho2 = vec![0; n];
    for r in &roots {
        for (k, v) in r.iter().enumerate() {
            rho2[k] += v;
        }
    }
    let mut datum = BasedRootDatum {
        family,
        rank,
        positive_roots: roots,
        positive_coroots: coroots,
        simple,
        pairing,
        gram,
        rho2,
        weyl: vec![],
    };
    datum.weyl = generate_weyl(&datum);
    Ok(datum)
}

fn reflection_matrix(d: &BasedRootDatum, idx: usize) -> Vec<i64> {
    let n = d.rank;
    let alpha = &d.positive_roots[idx];
    let cor = &d.positive_coroots[idx];
    let mut m = vec![0; n * n];
    for j in 0..n {
        // image of e_j is e_j - <e_j, a^v> a
        let e = unit(n, j);
        let c = d.pair(&e, cor);
        for i in 0..n {
            m[i * n + j] = e[i] - c * alpha[i];
        }
    }
    m
}

fn generate_weyl(d: &BasedRootDatum) -> Vec<WeylElement> {
    let n = d.rank;
    let gens: Vec<Vec<i64>> = d.simple.iter().map(|&s| reflection_matrix(d, s)).collect();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut elems: Vec<(Vec<i64>, i64)> = vec![(identity(n), 1)];
    index.insert(identity(n), 0);
    let mut head = 0;
    while head < elems.len() {
        let (m, sign) = elems[head].clone();
        head += 1;
        for g in &gens {
            let p = mat_mul(g, &m, n);
            if !index.contains_key(&p) {
                index.insert(p.clone(), elems.len());
                elems.push((p, -sign));
            }
        }
    }
    let id = identity(n);
    let mut out = Vec::with_capacity(elems.len());
    for (m, sign) in &elems {
        let inverse =
            elems.iter().position(|(x, _)| mat_mul(m, x, n) == id).expect("finite group element has an inverse");
        out.push(WeylElement { matrix: m.clone(), sign: *sign, inverse });
    }
    out
}

/// Converts Hodge weights to a dominant highest weight.
///
/// For `B_l` and `D_l`, `lambda + rho = sum (w_i/2) e_i`. For `G2` the input
/// is `(w, v)` and the result is `((w-v-2)/2) omega_1 + ((v-2)/2) omega_2`.
pub fn weight_from_hodge(d: &BasedRootDatum, w: &[i64]) -> Result<Weight, RootError> {
    let bad = |msg: &str| RootError::BadHodge(w.to_vec(), msg.to_string());
    if w.windows(2).any(|p| p[0] <= p[1]) {
        return Err(bad("weights must be strictly decreasing"));
    }
    if w.iter().any(|&x| x < 0) {
        return Err(bad("weights must be nonnegative"));
    }
    let lambda = match d.family {
        Family::B | Family::D => {
            if w.len() != d.rank {
                return Err(bad("wrong number of weights"));
            }
            let parity = if d.family == Family::B { 1 } else { 0 };
            if w.iter().any(|x| x.rem_euclid(2) != parity) {
                return Err(bad("wrong parity"));
            }
            Weight(w.iter().zip(&d.rho2).map(|(wi, r)| (wi - r) / 2).collect())
        }
        Family::G2 => {
            if w.len() != 2 || w[0] % 2 != 0 || w[1] % 2 != 0 || w[1] < 2 {
                return Err(bad("expected even (w, v) with w > v >= 2"));
            }
            let a = (w[0] - w[1] - 2) / 2;
            let b = (w[1] - 2) / 2;
            Weight(vec![2 * a + 3 * b, a + 2 * b])
        }
    };
    if !d.is_dominant(&lambda) {
        return Err(RootError::NotDominant(lambda.0));
    }
    Ok(lambda)
}

/// Inverse of [`weight_from_hodge`].
pub fn hodge_from_weight(d: &BasedRootDatum, lambda: &Weight) -> Vec<i64> {
    match d.family {
        Family::B | Family::D => lambda.0.iter().zip(&d.rho2).map(|(l, r)| 2 * l + r).collect(),
        Family::G2 => {
            // lambda = (2a + 3b, a + 2b)
            let b = 2 * lambda.0[1] - lambda.0[0];
            let a = lambda.0[1] - 2 * b;
            let v = 2 * b + 2;
            vec![2 * a + 2 + v, v]
        }
    }
}

/// The Levi data attached to a torsion element `exp(2 pi i mu)`.
pub fn levi_data(d: &BasedRootDatum, mu: &TorsionElement) -> LeviData {
    let m = mu.order as i64;
    let roots_m: Vec<usize> =
        (0..d.positive_roots.len()).filter(|&i| d.pair(&d.positive_roots[i], &mu.num).rem_euclid(m) == 0).collect();
    let mut rho_m2 = vec![0; d.rank];
    for &i in &roots_m {
        for (k, v) in d.positive_roots[i].iter().enumerate() {
            rho_m2[k] += v;
        }
    }
    let coset: Vec<usize> = (0..d.weyl.len())
        .filter(|&w| {
            let inv = d.weyl[w].inverse;
            roots_m.iter().all(|&i| d.is_positive_root(&d.apply(inv, &d.positive_roots[i])))
        })
        .collect();
    LeviData { wm_order: coset.len(), roots_m, rho_m2, coset }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts_and_rho() {
        let b3 = build_root_datum(Family::B, 3).unwrap();
        assert_eq!(b3.positive_roots.len(), 9);
        assert_eq!(b3.rho2, vec![5, 3, 1]);
        assert_eq!(b3.weyl_order(), 48);
        let d4 = build_root_datum(Family::D, 4).unwrap();
        assert_eq!(d4.positive_roots.len(), 12);
        assert_eq!(d4.rho2, vec![6, 4, 2, 0]);
        assert_eq!(d4.weyl_order(), 192);
        let g2 = build_root_datum(Family::G2, 2).unwrap();
        assert_eq!(g2.positive_roots.len(), 6);
        assert_eq!(g2.rho2, vec![10, 6]);
        assert_eq!(g2.weyl_order(), 12);
        assert_eq!(build_root_datum(Family::B, 4).unwrap().weyl_order(), 384);
        assert!(build_root_datum(Family::D, 2).is_err());
        assert!(build_root_datum(Family::G2, 3).is_err());
    }

    #[test]
    fn root_coroot_pairings() {
        for (f, l) in [(Family::B, 4), (Family::D, 4), (Family::G2, 2), (Family::B, 1)] {
            let d = build_root_datum(f, l).unwrap();
            for (a, c) in d.positive_roots.iter().zip(&d.positive_coroots) {
                assert_eq!(d.pair(a, c), 2);
                // <v, a^v> = 2 (v, a) / (a, a)
                for v in d.positive_roots.iter() {
                    assert_eq!(d.pair(v, c) * d.inner(a, a), 2 * d.inner(v, a));
                }
            }
        }
    }

    #[test]
    fn hodge_conversions() {
        let b3 = build_root_datum(Family::B, 3).unwrap();
        assert_eq!(weight_from_hodge(&b3, &[5, 3, 1]).unwrap(), Weight(vec![0, 0, 0]));
        assert_eq!(weight_from_hodge(&b3, &[29, 27, 25]).unwrap(), Weight(vec![12, 12, 12]));
        let d4 = build_root_datum(Family::D, 4).unwrap();
        assert!(weight_from_hodge(&d4, &[7, 5, 3, 1]).is_err());
        assert_eq!(weight_from_hodge(&d4, &[24, 18, 10, 4]).unwrap(), Weight(vec![9, 7, 4, 2]));
        let g2 = build_root_datum(Family::G2, 2).unwrap();
        assert_eq!(weight_from_hodge(&g2, &[4, 2]).unwrap(), Weight(vec![0, 0]));
        let l = weight_from_hodge(&g2, &[16, 8]).unwrap();
        assert_eq!(hodge_from_weight(&g2, &l), vec![16, 8]);
    }

    #[test]
    fn levi_extremes() {
        let b3 = build_root_datum(Family::B, 3).unwrap();
        let id = TorsionElement::new(vec![0, 0, 0], 1);
        let l = levi_data(&b3, &id);
        assert_eq!(l.roots_m.len(), 9);
        assert_eq!(l.coset, vec![0]);
        let generic = TorsionElement::new(vec![1, 2, 4], 11);
        let l = levi_data(&b3, &generic);
        assert!(l.roots_m.is_empty());
        assert_eq!(l.wm_order, 48);
    }
}
