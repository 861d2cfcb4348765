//! Base counts `S(w)`, `S(w,v)`, the small-rank orthogonal identities, the
//! archimedean representation calculus and epsilon factors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("S(w) needs an odd positive weight, got {0}")]
    EvenWeight(i64),
    #[error("S(w,v) table covers w <= {max}, got ({w},{v})")]
    OutOfRange { w: i64, v: i64, max: i64 },
    #[error("bad table line {0}: {1}")]
    Parse(usize, String),
    #[error("no count available for {0}")]
    Missing(String),
    #[error("O*{0:?} is unresolved: 2 O + O* = {1}")]
    Unresolved(Vec<i64>, u64),
    #[error("invalid label: {0}")]
    BadLabel(String),
}

/// `S(w) = dim S_{w+1}(SL2(Z))` for odd `w`.
pub fn s1(w: i64) -> Result<u64, CountError> {
    if w < 1 || w % 2 == 0 {
        return Err(CountError::EvenWeight(w));
    }
    let base = (w + 1) / 12;
    let corr = i64::from(w % 12 == 1 && w > 1);
    Ok((base - corr) as u64)
}

/// `S(w, v)` as a lookup table; pairs absent from the table are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct S2Table {
    pub values: BTreeMap<(i64, i64), u64>,
    pub max_w: i64,
}

impl S2Table {
    /// Parses lines `w v value`; `#` starts a comment.
    pub fn parse(text: &str, max_w: i64) -> Result<Self, CountError> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || CountError::Parse(no + 1, raw.to_string());
            if f.len() != 3 {
                return Err(bad());
            }
            let w: i64 = f[0].parse().map_err(|_| bad())?;
            let v: i64 = f[1].parse().map_err(|_| bad())?;
            let c: u64 = f[2].parse().map_err(|_| bad())?;
            if w <= v || v < 1 || w % 2 == 0 || v % 2 == 0 || w > max_w {
                return Err(bad());
            }
            values.insert((w, v), c);
        }
        Ok(S2Table { values, max_w })
    }

    /// The table bundled with the crate (`w <= 45`).
    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/s2.dat"), 45).expect("bundled s2.dat parses")
    }

    pub fn get(&self, w: i64, v: i64) -> Result<u64, CountError> {
        if w > self.max_w {
            return Err(CountError::OutOfRange { w, v, max: self.max_w });
        }
        if w <= v || v < 1 || w % 2 == 0 || v % 2 == 0 {
            return Ok(0);
        }
        Ok(self.values.get(&(w, v)).copied().unwrap_or(0))
    }
}

/// Parity condition for `O(w_1..w_r)` and `O*(w_1..w_r)` to be nonzero:
/// `(w_1 + ... + w_r)/2 = floor((r+1)/2) mod 2`.
pub fn orthogonal_parity_ok(weights: &[i64]) -> bool {
    let half: i64 = weights.iter().sum::<i64>() / 2;
    let r = weights.len() as i64;
    (half - (r + 1) / 2).rem_euclid(2) == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallOrthogonal {
    /// `O*(w)`, rank 3.
    Ostar1,
    /// `O(w, v)`, rank 4.
    O2,
    /// `O*(w, v)`, rank 5.
    Ostar2,
}

/// The small-rank orthogonal counts, as `(value, parity_ok)`.
pub fn small_orthogonal(kind: SmallOrthogonal, weights: &[i64], s2: &S2Table) -> Result<(u64, bool), CountError> {
    let need = if kind == SmallOrthogonal::Ostar1 { 1 } else { 2 };
    if weights.len() != need || weights.iter().any(|w| w % 2 != 0) {
        return Err(CountError::BadLabel(format!("{:?}{:?}", kind, weights)));
    }
    if !orthogonal_parity_ok(weights) {
        return Ok((0, false));
    }
    let s = |x: i64| if x >= 1 && x % 2 == 1 { s1(x) } else { Ok(0) };
    let value = match kind {
        SmallOrthogonal::Ostar1 => s(weights[0] / 2)?,
        SmallOrthogonal::O2 => {
            let (w, v) = (weights[0], weights[1]);
            if v == 0 {
                let c = s(w / 2)?;
                c * c.saturating_sub(1) / 2
            } else {
                s((w + v) / 2)? * s((w - v) / 2)?
            }
        }
        SmallOrthogonal::Ostar2 => {
            let (w, v) = (weights[0], weights[1]);
            s2.get((w + v) / 2, (w - v) / 2)?
        }
    };
    Ok((value, true))
}

// ---------------------------------------------------------------------------
// archimedean calculus

/// A fourth root of unity `re + i im`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fourth {
    pub re: i8,
    pub im: i8,
}

impl Fourth {
    pub const ONE: Fourth = Fourth { re: 1, im: 0 };
    pub const I: Fourth = Fourth { re: 0, im: 1 };

    pub fn pow_i(k: i64) -> Fourth {
        match k.rem_euclid(4) {
            0 => Fourth { re: 1, im: 0 },
            1 => Fourth { re: 0, im: 1 },
            2 => Fourth { re: -1, im: 0 },
            _ => Fourth { re: 0, im: -1 },
        }
    }

    pub fn sign(self) -> Option<i8> {
        (self.im == 0).then_some(self.re)
    }
}

impl Mul for Fourth {
    type Output = Fourth;
    fn mul(self, o: Fourth) -> Fourth {
        Fourth { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

/// A representation of `W_R` as a sum of `I_w` (w > 0), trivial and sign
/// characters. `I_0` is stored as `1 + eps`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArchRep {
    pub iw: BTreeMap<i64, u32>,
    pub count_triv: u32,
    pub count_sign: u32,
}

impl ArchRep {
    pub fn trivial() -> Self {
        ArchRep { count_triv: 1, ..Default::default() }
    }

    pub fn sign_char() -> Self {
        ArchRep { count_sign: 1, ..Default::default() }
    }

    pub fn add_iw(&mut self, w: i64, mult: u32) {
        let w = w.abs();
        if mult == 0 {
            return;
        }
        if w == 0 {
            self.count_triv += mult;
            self.count_sign += mult;
        } else {
            *self.iw.entry(w).or_insert(0) += mult;
        }
    }

    pub fn dim(&self) -> u32 {
        2 * self.iw.values().sum::<u32>() + self.count_triv + self.count_sign
    }

    pub fn direct_sum(&self, other: &ArchRep) -> ArchRep {
        let mut out = self.clone();
        for (&w, &m) in &other.iw {
            out.add_iw(w, m);
        }
        out.count_triv += other.count_triv;
        out.count_sign += other.count_sign;
        out
    }
}

impl fmt::Display for ArchRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for (w, m) in &self.iw {
            for _ in 0..*m {
                parts.push(format!("I_{}", w));
            }
        }
        parts.extend(std::iter::repeat_n("1".to_string(), self.count_triv as usize));
        parts.extend(std::iter::repeat_n("eps".to_string(), self.count_sign as usize));
        write!(f, "{}", parts.join(" + "))
    }
}

/// `I_w x I_w' = I_{w+w'} + I_{|w-w'|}`, `eps x I_w = I_w`, `eps x eps = 1`.
pub fn tensor(a: &ArchRep, b: &ArchRep) -> ArchRep {
    let mut out = ArchRep::default();
    for (&w, &m) in &a.iw {
        for (&v, &n) in &b.iw {
            out.add_iw(w + v, m * n);
            out.add_iw(w - v, m * n);
        }
        out.add_iw(w, m * (b.count_triv + b.count_sign));
    }
    for (&v, &n) in &b.iw {
        out.add_iw(v, n * (a.count_triv + a.count_sign));
    }
    out.count_triv += a.count_triv * b.count_triv + a.count_sign * b.count_sign;
    out.count_sign += a.count_triv * b.count_sign + a.count_sign * b.count_triv;
    out
}

/// `eps(I_w) = i^(w+1)`, `eps(1) = 1`, `eps(sign) = i`, multiplicatively.
pub fn epsilon(a: &ArchRep) -> Fourth {
    let mut e = Fourth::ONE;
    for (&w, &m) in &a.iw {
        e = e * Fourth::pow_i((w + 1) * m as i64);
    }
    e * Fourth::pow_i(a.count_sign as i64)
}

// ---------------------------------------------------------------------------
// labels

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Duality {
    Symplectic,
    Orthogonal,
    Trivial,
}

impl Duality {
    /// `s(pi)`: -1 for symplectic, +1 otherwise.
    pub fn sign(self) -> i64 {
        if self == Duality::Symplectic {
            -1
        } else {
            1
        }
    }
}

/// A cuspidal selfdual representation of `PGL_n` up to its archimedean
/// type: rank, duality and Hodge weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuspidalLabel {
    pub n: usize,
    pub duality: Duality,
    pub hodge: Vec<i64>,
}

impl CuspidalLabel {
    pub fn trivial() -> Self {
        CuspidalLabel { n: 1, duality: Duality::Trivial, hodge: vec![] }
    }

    pub fn symplectic(hodge: Vec<i64>) -> Self {
        CuspidalLabel { n: 2 * hodge.len(), duality: Duality::Symplectic, hodge }
    }

    pub fn orthogonal(n: usize, hodge: Vec<i64>) -> Self {
        CuspidalLabel { n, duality: Duality::Orthogonal, hodge }
    }

    pub fn validate(&self) -> Result<(), CountError> {
        let bad = |m: &str| Err(CountError::BadLabel(format!("{:?}: {}", self, m)));
        if self.hodge.windows(2).any(|p| p[0] <= p[1]) {
            return bad("weights must decrease strictly");
        }
        match self.duality {
            Duality::Trivial => {
                if self.n != 1 || !self.hodge.is_empty() {
                    return bad("trivial label has rank 1 and no weights");
                }
            }
            Duality::Symplectic => {
                if self.n != 2 * self.hodge.len() || self.n == 0 || self.hodge.iter().any(|w| w % 2 == 0 || *w < 1) {
                    return bad("symplectic needs n/2 odd positive weights");
                }
            }
            Duality::Orthogonal => {
                if self.hodge.len() != self.n / 2
                    || self.hodge.is_empty()
                    || self.hodge.iter().any(|w| w % 2 != 0 || *w < 0)
                {
                    return bad("orthogonal needs floor(n/2) even weights");
                }
                if self.n % 2 == 1 && self.hodge.contains(&0) {
                    return bad("odd orthogonal weights must be positive");
                }
            }
        }
        Ok(())
    }

    pub fn motivic_weight(&self) -> i64 {
        self.hodge.first().copied().unwrap_or(0)
    }

    /// Doubled eigenvalues of the infinitesimal character.
    pub fn eigenvalues(&self) -> Vec<i64> {
        let mut out = vec![];
        for &w in &self.hodge {
            out.push(w);
            out.push(-w);
        }
        if self.n % 2 == 1 {
            out.push(0);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// The archimedean Langlands parameter attached to a label.
pub fn arch_rep(label: &CuspidalLabel) -> ArchRep {
    let mut a = ArchRep::default();
    match label.duality {
        Duality::Trivial => return ArchRep::trivial(),
        Duality::Symplectic | Duality::Orthogonal => {
            for &w in &label.hodge {
                a.add_iw(w, 1);
            }
        }
    }
    if label.n % 2 == 1 {
        if ((label.n - 1) / 2) % 2 == 1 {
            a.count_sign += 1;
        } else {
            a.count_triv += 1;
        }
    }
    a
}

/// `eps(pi x pi') = eps(L(pi_inf) x L(pi'_inf))`, always a sign here.
pub fn epsilon_pair(p: &CuspidalLabel, q: &CuspidalLabel) -> i64 {
    let e = epsilon(&tensor(&arch_rep(p), &arch_rep(q)));
    e.sign().expect("epsilon factor of a selfdual pair is real") as i64
}

/// `eps(pi)` of a single label.
pub fn epsilon_label(p: &CuspidalLabel) -> Fourth {
    epsilon(&arch_rep(p))
}

// ---------------------------------------------------------------------------
// count tables

/// Counts of cuspidal labels: `S` for symplectic, `O` for even orthogonal
/// and `O*` for odd orthogonal, plus `G2` and the raw invariant dimensions.
#[derive(Debug, Clone, Default)]
pub struct CountTables {
    pub s2: S2Table,
    /// Extracted `S(w1,w2,w3)` and `S(w1..w4)`.
    pub s: BTreeMap<Vec<i64>, u64>,
    /// Extracted `O(w1..w4)` with `w4 > 0`.
    pub o: BTreeMap<Vec<i64>, u64>,
    /// `2 O(w1,w2,w3,0) + O*(w1,w2,w3)`.
    pub o_combined: BTreeMap<Vec<i64>, u64>,
    /// `G2(w, v)`.
    pub g2: BTreeMap<Vec<i64>, u64>,
    /// Invariant dimensions per group name.
    pub m: BTreeMap<String, BTreeMap<Vec<i64>, u64>>,
}

impl CountTables {
    pub fn new(s2: S2Table) -> Self {
        CountTables { s2, ..Default::default() }
    }

    /// `O*(w1,w2,w3)` when the combined value forces it (combined <= 1).
    pub fn ostar3(&self, w: &[i64]) -> Result<u64, CountError> {
        if !orthogonal_parity_ok(w) {
            return Ok(0);
        }
        let mut key = w.to_vec();
        key.push(0);
        let c = *self.o_combined.get(&key).ok_or_else(|| CountError::Missing(format!("O*{:?}", w)))?;
        if c <= 1 {
            Ok(c)
        } else {
            Err(CountError::Unresolved(w.to_vec(), c))
        }
    }

    /// Number of cuspidal representations with the given label.
    pub fn count(&self, label: &CuspidalLabel) -> Result<u64, CountError> {
        label.validate()?;
        let w = &label.hodge;
        let missing = || CountError::Missing(format!("{:?} {:?}", label.duality, label.hodge));
        match label.duality {
            Duality::Trivial => Ok(1),
            Duality::Symplectic => match label.n {
                2 => s1(w[0]),
                4 => self.s2.get(w[0], w[1]),
                6 | 8 => self.s.get(w).copied().ok_or_else(missing),
                _ => Err(missing()),
            },
            Duality::Orthogonal => {
                if !orthogonal_parity_ok(w) {
                    return Ok(0);
                }
                match label.n {
                    2 | 6 => Ok(0),
                    3 => Ok(small_orthogonal(SmallOrthogonal::Ostar1, w, &self.s2)?.0),
                    4 => Ok(small_orthogonal(SmallOrthogonal::O2, w, &self.s2)?.0),
                    5 => Ok(small_orthogonal(SmallOrthogonal::Ostar2, w, &self.s2)?.0),
                    7 => self.ostar3(w),
                    8 => {
                        if w[3] > 0 {
                            self.o.get(w).copied().ok_or_else(missing)
                        } else {
                            let c = *self.o_combined.get(w).ok_or_else(missing)?;
                            let ostar = self.ostar3(&w[..3])?;
                            Ok((c - ostar) / 2)
                        }
                    }
                    _ => Err(missing()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s1_values() {
        let got: Vec<u64> = [11, 15, 17, 19, 21, 23, 25, 27].iter().map(|&w| s1(w).unwrap()).collect();
        assert_eq!(got, vec![1, 1, 1, 1, 1, 2, 1, 2]);
        assert_eq!(s1(13).unwrap(), 0);
        assert_eq!(s1(1).unwrap(), 0);
        assert!(s1(12).is_err());
    }

    #[test]
    fn s2_lookup() {
        let t = S2Table::bundled();
        assert_eq!(t.get(19, 7).unwrap(), 1);
        assert_eq!(t.get(29, 25).unwrap(), 1);
        assert_eq!(t.get(17, 5).unwrap(), 0);
        assert!(t.get(47, 5).is_err());
        assert!(S2Table::parse("19 7", 45).is_err());
    }

    #[test]
    fn small_orthogonal_identities() {
        let t = S2Table::bundled();
        assert_eq!(small_orthogonal(SmallOrthogonal::Ostar1, &[22], &t).unwrap(), (1, true));
        assert_eq!(small_orthogonal(SmallOrthogonal::O2, &[46, 0], &t).unwrap(), (1, true));
        assert_eq!(small_orthogonal(SmallOrthogonal::Ostar2, &[26, 12], &t).unwrap(), (1, true));
        assert_eq!(small_orthogonal(SmallOrthogonal::Ostar1, &[24], &t).unwrap(), (0, false));
    }

    #[test]
    fn tensor_rules() {
        let i = |w: i64| {
            let mut a = ArchRep::default();
            a.add_iw(w, 1);
            a
        };
        let mut want = i(22);
        want.count_triv = 1;
        want.count_sign = 1;
        assert_eq!(tensor(&i(11), &i(11)), want);
        assert_eq!(tensor(&i(3), &i(1)), i(4).direct_sum(&i(2)));
        let got = tensor(&ArchRep::sign_char(), &i(5).direct_sum(&ArchRep::trivial()));
        assert_eq!(got, i(5).direct_sum(&ArchRep::sign_char()));
    }

    #[test]
    fn epsilon_values() {
        let d = |w| CuspidalLabel::symplectic(vec![w]);
        assert_eq!(epsilon_label(&d(17)), Fourth::pow_i(2));
        assert_eq!(epsilon_label(&d(11)), Fourth::ONE);
        assert_eq!(epsilon_pair(&d(11), &CuspidalLabel::trivial()), 1);
        assert_eq!(epsilon_pair(&d(17), &CuspidalLabel::trivial()), -1);
        for (w, v) in [(11, 17), (5, 9), (23, 21)] {
            let expected = if (1 + w.max(v)) % 2 == 0 { 1 } else { -1 };
            assert_eq!(epsilon_pair(&d(w), &d(v)), expected);
        }
        let sym = CuspidalLabel::orthogonal(3, vec![22]);
        assert_eq!(arch_rep(&sym).to_string(), "I_22 + eps");
    }

    mod signs {
        use super::*;
        use proptest::prelude::*;

        fn orthogonal() -> impl Strategy<Value = CuspidalLabel> {
            (prop::collection::btree_set(0i64..15, 1..4), any::<bool>()).prop_map(|(s, odd)| {
                let h: Vec<i64> = s.into_iter().rev().map(|k| 2 * k).collect();
                let h = if odd { h.into_iter().map(|x| x + 2).collect() } else { h };
                CuspidalLabel::orthogonal(2 * h.len() + odd as usize, h)
            })
        }

        // ranks 2 and 6 mod 4 only matter for the vanishing check
        fn any_label() -> impl Strategy<Value = CuspidalLabel> {
            prop_oneof![
                Just(CuspidalLabel::trivial()),
                prop::collection::btree_set(0i64..15, 1..4)
                    .prop_map(|s| { CuspidalLabel::symplectic(s.into_iter().rev().map(|k| 2 * k + 1).collect()) }),
                orthogonal(),
            ]
        }

        fn label() -> impl Strategy<Value = CuspidalLabel> {
            any_label().prop_filter("rank 2 mod 4 orthogonal", |p| p.duality != Duality::Orthogonal || p.n % 4 != 2)
        }

        fn arch() -> impl Strategy<Value = ArchRep> {
            (prop::collection::vec((0i64..30, 1u32..3), 0..4), 0u32..3, 0u32..3).prop_map(|(iw, t, e)| {
                let mut a = ArchRep { count_triv: t, count_sign: e, ..Default::default() };
                for (w, m) in iw {
                    a.add_iw(w, m);
                }
                a
            })
        }

        proptest! {
            #[test]
            fn pair_signs_are_real_and_symmetric(p in label(), q in label()) {
                let e = epsilon_pair(&p, &q);
                prop_assert!(e == 1 || e == -1);
                prop_assert_eq!(e, epsilon_pair(&q, &p));
            }

            #[test]
            fn epsilon_is_multiplicative(a in arch(), b in arch()) {
                prop_assert_eq!(epsilon(&a.direct_sum(&b)), epsilon(&a) * epsilon(&b));
                prop_assert_eq!(tensor(&a, &b).dim(), a.dim() * b.dim());
            }

            #[test]
            fn parity_ok_orthogonal_labels_have_sign_one(p in orthogonal()) {
                prop_assume!(p.n % 4 != 2 && orthogonal_parity_ok(&p.hodge));
                prop_assert_eq!(epsilon_label(&p), Fourth::ONE);
            }

            #[test]
            fn vanishing_orthogonal_counts(p in orthogonal()) {
                prop_assume!(p.validate().is_ok());
                let t = CountTables::new(S2Table::bundled());
                if !orthogonal_parity_ok(&p.hodge) || p.n == 2 || p.n == 6 {
                    prop_assert_eq!(t.count(&p).unwrap(), 0);
                }
            }
        }
    }
}
