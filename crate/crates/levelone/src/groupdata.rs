//! Class datasets for finite subgroups of compact groups: `W(E7)+` in
//! `SO(7)`, `W(E8)+` in `SO(8)`, `W(E8)` in `SO(9)` and `G2(Z)` in `G2(R)`.
//!
//! A dataset lists characteristic-polynomial buckets with their sizes and
//! torsion representatives in the ambient maximal torus.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::degwcf::TorsionElement;
use crate::rootsys::Family;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error("io error on {0}: {1}")]
    Io(String, String),
    #[error("polynomial {0:?} is not a product of cyclotomic polynomials")]
    NotCyclotomic(Vec<i64>),
    #[error("eigenvalue multiplicities of {0:?} do not fit ambient {1}")]
    Multiplicity(Vec<i64>, Ambient),
    #[error("no G2 torus element has the eigenvalues of {0:?}")]
    NoG2Rep(Vec<i64>),
    #[error("group closure exceeded {0} elements")]
    Ceiling(usize),
    #[error("dataset failed verification: {0}")]
    Invalid(String),
    #[error("matrix entries do not fit the compact representation")]
    Entries,
}

/// The compact group containing the finite group, with its natural module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// `SO(2l+1)`.
    B(usize),
    /// `SO(2l)`.
    D(usize),
    /// `G2` acting on its 7-dimensional module.
    G2,
    /// The full orthogonal group `O(n)`; classes carry no torus representatives.
    O(usize),
}

impl Ambient {
    pub fn module_dim(&self) -> usize {
        match *self {
            Ambient::B(l) => 2 * l + 1,
            Ambient::D(l) => 2 * l,
            Ambient::G2 => 7,
            Ambient::O(n) => n,
        }
    }

    pub fn family_rank(&self) -> Option<(Family, usize)> {
        match *self {
            Ambient::B(l) => Some((Family::B, l)),
            Ambient::D(l) => Some((Family::D, l)),
            Ambient::G2 => Some((Family::G2, 2)),
            Ambient::O(_) => None,
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::B(l) => write!(f, "B {}", l),
            Ambient::D(l) => write!(f, "D {}", l),
            Ambient::G2 => write!(f, "G2 2"),
            Ambient::O(n) => write!(f, "O {}", n),
        }
    }
}

/// One characteristic-polynomial bucket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRecord {
    pub id: String,
    /// Coefficients low to high, monic.
    pub charpoly: Vec<i64>,
    pub size: u64,
    /// Torus representatives; each carries `size / reps.len()` elements.
    pub reps: Vec<TorsionElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDataset {
    pub name: String,
    pub ambient: Ambient,
    pub order: u64,
    pub classes: Vec<ClassRecord>,
    /// Least common multiple of the representative orders.
    pub conductor: u32,
}

// ---------------------------------------------------------------------------
// polynomials

fn poly_divmod_monic(num: &[i64], den: &[i64]) -> (Vec<i64>, bool) {
    let dd = den.len() - 1;
    if num.len() < den.len() {
        return (vec![], num.iter().all(|&c| c == 0));
    }
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    (q, rem.iter().all(|&r| r == 0))
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Factors a monic integer polynomial into cyclotomic polynomials `Phi_d`,
/// `d <= limit`, returning `(d, multiplicity)` pairs in increasing `d`.
pub fn factor_cyclotomic(poly: &[i64], limit: u32) -> Result<Vec<(u32, u32)>, GroupError> {
    let mut rest = poly.to_vec();
    let mut out = vec![];
    for d in 1..=limit {
        if rest.len() == 1 {
            break;
        }
        let phi = crate::cyclo::cyclotomic_poly(d);
        if phi.len() > rest.len() {
            continue;
        }
        let mut mult = 0;
        loop {
            let (q, exact) = poly_divmod_monic(&rest, &phi);
            if !exact || q.is_empty() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((d, mult));
        }
    }
    if rest != vec![1] {
        return Err(GroupError::NotCyclotomic(poly.to_vec()));
    }
    Ok(out)
}

/// Expands a cyclotomic factorization back to a polynomial.
pub fn expand_cyclotomic(factors: &[(u32, u32)]) -> Vec<i64> {
    let mut p = vec![1];
    for &(d, m) in factors {
        let phi = crate::cyclo::cyclotomic_poly(d);
        for _ in 0..m {
            p = poly_mul(&p, &phi);
        }
    }
    p
}

/// All eigenvalue angles `k/d` in `[0, 1)` of a cyclotomic product, as
/// reduced fractions.
pub fn eigen_angles(factors: &[(u32, u32)]) -> Vec<Ratio<i64>> {
    let mut out = vec![];
    for &(d, m) in factors {
        for k in 0..d as i64 {
            if k.gcd(&(d as i64)) == 1 || d == 1 {
                for _ in 0..m {
                    out.push(Ratio::new(k, d as i64));
                }
            }
        }
    }
    out.sort();
    out
}

fn torsion_from_angles(angles: &[Ratio<i64>]) -> TorsionElement {
    let order = angles.iter().fold(1i64, |a, t| a.lcm(t.denom()));
    TorsionElement::new(angles.iter().map(|t| (t * order).to_integer()).collect(), order as u32)
}

/// Torus representatives of the ambient class with the given characteristic
/// polynomial on the natural module.
pub fn class_reps_from_charpoly(poly: &[i64], ambient: Ambient) -> Result<Vec<TorsionElement>, GroupError> {
    if poly.len() != ambient.module_dim() + 1 {
        return Err(GroupError::Multiplicity(poly.to_vec(), ambient));
    }
    let factors = factor_cyclotomic(poly, 240)?;
    let bad = || GroupError::Multiplicity(poly.to_vec(), ambient);
    match ambient {
        Ambient::O(_) => Ok(vec![]),
        Ambient::G2 => Ok(vec![g2_torus_rep(poly)?]),
        Ambient::B(l) | Ambient::D(l) => {
            let m1 = factors.iter().find(|f| f.0 == 1).map_or(0, |f| f.1) as usize;
            let m2 = factors.iter().find(|f| f.0 == 2).map_or(0, |f| f.1) as usize;
            let odd = matches!(ambient, Ambient::B(_));
            if !m2.is_multiple_of(2) || (odd && m1 % 2 != 1) || (!odd && !m1.is_multiple_of(2)) {
                return Err(bad());
            }
            let mut angles = vec![Ratio::from_integer(0); m1 / 2];
            angles.extend(std::iter::repeat_n(Ratio::new(1, 2), m2 / 2));
            for t in eigen_angles(&factors) {
                if t > Ratio::from_integer(0) && t < Ratio::new(1, 2) {
                    angles.push(t);
                }
            }
            if angles.len() != l {
                return Err(bad());
            }
            angles.sort();
            angles.reverse();
            let first = torsion_from_angles(&angles);
            if !odd && m1 == 0 && m2 == 0 {
                let mut flipped = angles.clone();
                let last = flipped.len() - 1;
                flipped[last] = -flipped[last];
                Ok(vec![first, torsion_from_angles(&flipped)])
            } else {
                Ok(vec![first])
            }
        }
    }
}

/// A torus element `x alpha^v + y beta^v` of `G2` whose eigenvalues on the
/// 7-dimensional module match the polynomial. The weights of that module
/// take the values `0, +-x, +-(y-x), +-(2x-y)` on such an element.
pub fn g2_torus_rep(poly: &[i64]) -> Result<TorsionElement, GroupError> {
    let factors = factor_cyclotomic(poly, 240)?;
    let angles = eigen_angles(&factors);
    if angles.len() != 7 {
        return Err(GroupError::NoG2Rep(poly.to_vec()));
    }
    let m = angles.iter().fold(1i64, |a, t| a.lcm(t.denom()));
    let mut target: Vec<i64> = angles.iter().map(|t| (t * m).to_integer()).collect();
    target.sort();
    for x in 0..m {
        for y in 0..m {
            let vals = [x, y - x, 2 * x - y];
            let mut got = vec![0];
            for v in vals {
                got.push(v.rem_euclid(m));
                got.push((-v).rem_euclid(m));
            }
            got.sort();
            if got == target {
                return Ok(TorsionElement::new(vec![x, y], m as u32));
            }
        }
    }
    Err(GroupError::NoG2Rep(poly.to_vec()))
}

// ---------------------------------------------------------------------------
// datasets

fn determinant_sign(poly: &[i64]) -> i64 {
    // det = (-1)^n p(0)
    let n = poly.len() - 1;
    if n.is_multiple_of(2) {
        poly[0]
    } else {
        -poly[0]
    }
}

impl ClassDataset {
    /// Builds a dataset from `(charpoly, size)` buckets, computing reps.
    pub fn from_buckets(
        name: &str,
        ambient: Ambient,
        order: u64,
        buckets: Vec<(Vec<i64>, u64)>,
    ) -> Result<Self, GroupError> {
        let mut classes = vec![];
        for (i, (charpoly, size)) in buckets.into_iter().enumerate() {
            let reps = class_reps_from_charpoly(&charpoly, ambient)?;
            classes.push(ClassRecord { id: format!("c{}", i + 1), charpoly, size, reps });
        }
        let conductor = classes.iter().flat_map(|c| c.reps.iter()).fold(1u32, |a, r| num_integer::lcm(a, r.order));
        Ok(ClassDataset { name: name.to_string(), ambient, order, classes, conductor })
    }

    /// Parses the class-data text format.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut header: Option<(String, Ambient, u64)> = None;
        let mut buckets = vec![];
        let mut ids = vec![];
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| GroupError::Parse(no + 1, m.to_string());
            let tok: Vec<&str> = line.split_whitespace().collect();
            match tok[0] {
                "group" => {
                    if tok.len() != 7 || tok[2] != "ambient" || tok[5] != "order" {
                        return Err(err("expected: group <name> ambient <B|D|G2|O> <rank> order <int>"));
                    }
                    let rank: usize = tok[4].parse().map_err(|_| err("bad rank"))?;
                    let ambient = match tok[3] {
                        "B" => Ambient::B(rank),
                        "D" => Ambient::D(rank),
                        "G2" => Ambient::G2,
                        "O" => Ambient::O(rank),
                        _ => return Err(err("unknown ambient family")),
                    };
                    let order: u64 = tok[6].parse().map_err(|_| err("bad order"))?;
                    header = Some((tok[1].to_string(), ambient, order));
                }
                "class" => {
                    if header.is_none() {
                        return Err(err("class line before header"));
                    }
                    if tok.len() != 6 || tok[2] != "size" || tok[4] != "charpoly" {
                        return Err(err("expected: class <id> size <int> charpoly c0,...,cn"));
                    }
                    let size: u64 = tok[3].parse().map_err(|_| err("bad size"))?;
                    let poly: Result<Vec<i64>, _> = tok[5].split(',').map(|c| c.parse::<i64>()).collect();
                    let poly = poly.map_err(|_| err("bad charpoly"))?;
                    if poly.last() != Some(&1) {
                        return Err(err("charpoly must be monic"));
                    }
                    ids.push(tok[1].to_string());
                    buckets.push((poly, size));
                }
                _ => return Err(err("unknown record")),
            }
        }
        let (name, ambient, order) = header.ok_or(GroupError::Parse(0, "missing header".into()))?;
        let mut ds = Self::from_buckets(&name, ambient, order, buckets)?;
        for (c, id) in ds.classes.iter_mut().zip(ids) {
            c.id = id;
        }
        Ok(ds)
    }

    /// Serializes to the class-data text format (reps are not stored).
    pub fn to_text(&self) -> String {
        let mut s = format!("group {} ambient {} order {}\n", self.name, self.ambient, self.order);
        for c in &self.classes {
            let poly: Vec<String> = c.charpoly.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("class {} size {} charpoly {}\n", c.id, c.size, poly.join(",")));
        }
        s
    }

    /// Keeps the determinant-one buckets, as a dataset in `SO(2l)`.
    pub fn restrict_special(&self, name: &str) -> Result<Self, GroupError> {
        let n = self.ambient.module_dim();
        if !n.is_multiple_of(2) {
            return Err(GroupError::Invalid("restriction expects an even-dimensional module".into()));
        }
        let buckets: Vec<(Vec<i64>, u64)> = self
            .classes
            .iter()
            .filter(|c| determinant_sign(&c.charpoly) == 1)
            .map(|c| (c.charpoly.clone(), c.size))
            .collect();
        Self::from_buckets(name, Ambient::D(n / 2), self.order / 2, buckets)
    }
}

/// Reads and verifies a class-data file. The split of even orthogonal
/// classes without eigenvalue `+-1` into two half-size reps happens here.
pub fn ingest_carter_data(path: &Path) -> Result<ClassDataset, GroupError> {
    let text = fs::read_to_string(path).map_err(|e| GroupError::Io(path.display().to_string(), e.to_string()))?;
    let ds = ClassDataset::parse(&text)?;
    let report = verify_class_data(&ds);
    if !report.passed() {
        return Err(GroupError::Invalid(report.failures().join("; ")));
    }
    Ok(ds)
}

/// Moves `W(E8)` from `O(8)` into `SO(9)` through `w -> (w, det w)`.
pub fn so9_twist(ds: &ClassDataset) -> Result<ClassDataset, GroupError> {
    let n = ds.ambient.module_dim();
    if ds.ambient != Ambient::O(n) || !n.is_multiple_of(2) {
        return Err(GroupError::Invalid("twist expects a dataset in O(2l)".into()));
    }
    let buckets = ds
        .classes
        .iter()
        .map(|c| {
            let det = determinant_sign(&c.charpoly);
            (poly_mul(&c.charpoly, &[-det, 1]), c.size)
        })
        .collect();
    let mut out = ClassDataset::from_buckets(&format!("{}-twisted", ds.name), Ambient::B(n / 2), ds.order, buckets)?;
    for (c, src) in out.classes.iter_mut().zip(&ds.classes) {
        c.id = src.id.clone();
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// verification

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.to_string(), passed, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

fn angles_of(rep: &TorsionElement, ambient: Ambient) -> Vec<Ratio<i64>> {
    let m = rep.order as i64;
    let mut out = vec![];
    let mut push = |k: i64| out.push(Ratio::new(k.rem_euclid(m), m));
    match ambient {
        Ambient::B(_) | Ambient::D(_) => {
            if matches!(ambient, Ambient::B(_)) {
                push(0);
            }
            for &k in &rep.num {
                push(k);
                push(-k);
            }
        }
        Ambient::G2 => {
            let (x, y) = (rep.num[0], rep.num[1]);
            push(0);
            for v in [x, y - x, 2 * x - y] {
                push(v);
                push(-v);
            }
        }
        Ambient::O(_) => {}
    }
    out.sort();
    out
}

/// Checks every dataset invariant and reports each one.
pub fn verify_class_data(ds: &ClassDataset) -> VerificationReport {
    let mut r = VerificationReport::default();
    let n = ds.ambient.module_dim();
    let total: u64 = ds.classes.iter().map(|c| c.size).sum();
    r.push("order", total == ds.order, format!("sum of sizes {} vs order {}", total, ds.order));

    let shapes_ok = ds.classes.iter().all(|c| c.charpoly.len() == n + 1 && c.charpoly[n] == 1);
    r.push("degree", shapes_ok, format!("monic of degree {}", n));

    let mut cyclo_ok = true;
    let mut eigen_ok = true;
    let mut split_ok = true;
    let mut cond = 1u32;
    for c in &ds.classes {
        match factor_cyclotomic(&c.charpoly, 240) {
            Ok(f) => {
                let want = eigen_angles(&f);
                for rep in &c.reps {
                    cond = num_integer::lcm(cond, rep.order);
                    if angles_of(rep, ds.ambient) != want {
                        eigen_ok = false;
                    }
                }
            }
            Err(_) => cyclo_ok = false,
        }
        match c.reps.len() {
            0 => split_ok &= matches!(ds.ambient, Ambient::O(_)),
            1 => {}
            2 => {
                let (a, b) = (&c.reps[0], &c.reps[1]);
                let l = a.num.len();
                split_ok &= matches!(ds.ambient, Ambient::D(_))
                    && c.size % 2 == 0
                    && a.order == b.order
                    && a.num[..l - 1] == b.num[..l - 1]
                    && (a.num[l - 1] + b.num[l - 1]) % a.order as i64 == 0;
            }
            _ => split_ok = false,
        }
    }
    r.push("cyclotomic", cyclo_ok, "every charpoly is a product of cyclotomic polynomials".into());
    r.push("eigenvalues", eigen_ok, "reps reproduce the charpoly eigenvalues".into());
    r.push("splits", split_ok, "split classes carry two half-size reps differing in the last angle".into());
    r.push("conductor", cond == ds.conductor, format!("lcm of rep orders {} vs stored {}", cond, ds.conductor));

    // average characteristic polynomial
    let mut sum = vec![0i128; n + 1];
    for c in &ds.classes {
        for (k, &a) in c.charpoly.iter().enumerate() {
            sum[k] += a as i128 * c.size as i128;
        }
    }
    let order = ds.order as i128;
    let divisible = sum.iter().all(|s| s % order == 0);
    let avg: Vec<i128> = sum.iter().map(|s| s / order.max(1)).collect();
    let expected: Vec<i128> = match ds.ambient {
        Ambient::G2 => vec![-1, 0, 0, 1, -1, 0, 0, 1],
        _ => {
            let all_special = ds.classes.iter().all(|c| determinant_sign(&c.charpoly) == 1);
            let mut e = vec![0i128; n + 1];
            e[n] = 1;
            if all_special {
                e[0] = if n.is_multiple_of(2) { 1 } else { -1 };
            }
            e
        }
    };
    r.push(
        "average charpoly",
        divisible && avg == expected,
        format!("(1/|G|) sum size*charpoly = {:?}, expected {:?}", avg, expected),
    );
    r
}

// ---------------------------------------------------------------------------
// enumeration

/// A square matrix `entries / 2^shift` with integer entries, normalized so
/// that `shift` is minimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledMatrix {
    pub n: usize,
    pub entries: Vec<i64>,
    pub shift: u32,
}

impl ScaledMatrix {
    pub fn new(n: usize, entries: Vec<i64>, shift: u32) -> Self {
        let mut m = ScaledMatrix { n, entries, shift };
        m.normalize();
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        ScaledMatrix { n, entries: e, shift: 0 }
    }

    fn normalize(&mut self) {
        while self.shift > 0 && self.entries.iter().all(|x| x % 2 == 0) {
            for x in self.entries.iter_mut() {
                *x /= 2;
            }
            self.shift -= 1;
        }
    }

    pub fn mul(&self, other: &ScaledMatrix) -> ScaledMatrix {
        let n = self.n;
        let mut e = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    e[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        ScaledMatrix::new(n, e, self.shift + other.shift)
    }

    fn key(&self) -> Result<Box<[u8]>, GroupError> {
        let mut out = Vec::with_capacity(self.entries.len() + 1);
        out.push(self.shift as u8);
        for &x in &self.entries {
            let b = i8::try_from(x).map_err(|_| GroupError::Entries)?;
            out.push(b as u8);
        }
        Ok(out.into_boxed_slice())
    }

    fn from_key(n: usize, key: &[u8]) -> ScaledMatrix {
        ScaledMatrix { n, shift: key[0] as u32, entries: key[1..].iter().map(|&b| b as i8 as i64).collect() }
    }

    pub fn trace(&self) -> Ratio<i128> {
        let t: i64 = (0..self.n).map(|i| self.entries[i * self.n + i]).sum();
        Ratio::new(t as i128, 1i128 << self.shift)
    }

    /// Characteristic polynomial via Newton's identities on power traces.
    pub fn charpoly(&self) -> Result<Vec<i64>, GroupError> {
        let n = self.n;
        let mut p = Vec::with_capacity(n + 1);
        p.push(Ratio::from_integer(n as i128));
        let mut power = self.clone();
        for k in 1..=n {
            if k > 1 {
                power = power.mul(self);
            }
            p.push(power.trace());
        }
        let mut e = vec![Ratio::from_integer(1i128)];
        for k in 1..=n {
            let mut s = Ratio::from_integer(0i128);
            for i in 1..=k {
                let term = e[k - i] * p[i];
                if i % 2 == 1 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            e.push(s / Ratio::from_integer(k as i128));
        }
        let mut poly = vec![0i64; n + 1];
        for k in 0..=n {
            if !e[k].is_integer() {
                return Err(GroupError::NotCyclotomic(vec![]));
            }
            let v = e[k].to_integer() as i64;
            poly[n - k] = if k % 2 == 0 { v } else { -v };
        }
        Ok(poly)
    }
}

/// Closure of the generated group, bucketed by characteristic polynomial.
pub fn enumerate_buckets(
    generators: &[ScaledMatrix],
    ceiling: usize,
) -> Result<(u64, Vec<(Vec<i64>, u64)>), GroupError> {
    let n = generators.first().map_or(0, |g| g.n);
    let id = ScaledMatrix::identity(n);
    let mut seen: HashSet<Box<[u8]>> = HashSet::new();
    let mut stack = vec![id.key()?];
    seen.insert(id.key()?);
    let mut buckets: HashMap<Vec<i64>, u64> = HashMap::new();
    while let Some(key) = stack.pop() {
        let m = ScaledMatrix::from_key(n, &key);
        *buckets.entry(m.charpoly()?).or_insert(0) += 1;
        for g in generators {
            let p = m.mul(g);
            let k = p.key()?;
            if !seen.contains(&k) {
                if seen.len() >= ceiling {
                    return Err(GroupError::Ceiling(ceiling));
                }
                seen.insert(k.clone());
                stack.push(k);
            }
        }
    }
    let mut list: Vec<(Vec<i64>, u64)> = buckets.into_iter().collect();
    list.sort();
    Ok((seen.len() as u64, list))
}

/// Full enumeration of the group generated by `generators`, as a dataset.
pub fn enumerate_group(
    name: &str,
    generators: &[ScaledMatrix],
    ambient: Ambient,
    ceiling: usize,
) -> Result<ClassDataset, GroupError> {
    let (order, buckets) = enumerate_buckets(generators, ceiling)?;
    ClassDataset::from_buckets(name, ambient, order, buckets)
}

/// The two generators of `G2(Z)` acting on the trace-zero octonions.
pub fn g2_generators() -> Vec<ScaledMatrix> {
    let a = vec![
        0, 1, -1, 0, 0, 1, -1, //
        0, -1, 0, -1, -1, 1, 0, //
        0, -1, 0, 1, 1, 1, 0, //
        0, 1, 1, 0, 0, 1, 1, //
        -2, 0, 0, 0, 0, 0, 0, //
        0, 0, 1, 1, -1, 0, -1, //
        0, 0, -1, 1, -1, 0, 1,
    ];
    let b = vec![
        0, 0, 0, 0, 0, -1, 0, //
        0, 1, 0, 0, 0, 0, 0, //
        0, 0, 1, 0, 0, 0, 0, //
        0, 0, 0, 0, 0, 0, 1, //
        0, 0, 0, 0, 1, 0, 0, //
        1, 0, 0, 0, 0, 0, 0, //
        0, 0, 0, -1, 0, 0, 0,
    ];
    vec![ScaledMatrix::new(7, a, 1), ScaledMatrix::new(7, b, 0)]
}

/// Cartan matrix of `E_n` (`n` = 7 or 8), Bourbaki numbering.
pub fn cartan_e(n: usize) -> Vec<Vec<i64>> {
    let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    let mut a = vec![vec![0; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j) in &edges {
        if i <= n && j <= n {
            a[i - 1][j - 1] = -1;
            a[j - 1][i - 1] = -1;
        }
    }
    a
}

/// Simple reflections of `E_n` in the basis of simple roots.
pub fn e_reflections(n: usize) -> Vec<ScaledMatrix> {
    let a = cartan_e(n);
    (0..n)
        .map(|i| {
            let mut m = ScaledMatrix::identity(n);
            for j in 0..n {
                // s_i(alpha_j) = alpha_j - a_ij alpha_i: column j changes in row i
                m.entries[i * n + j] -= a[j][i];
            }
            m
        })
        .collect()
}

/// Generators `s_1 s_j` of `W(E7)+`.
pub fn e7_plus_generators() -> Vec<ScaledMatrix> {
    let s = e_reflections(7);
    (1..7).map(|j| s[0].mul(&s[j])).collect()
}

/// `W(E7)+` in `SO(7)` by direct enumeration.
pub fn enumerate_e7_plus() -> Result<ClassDataset, GroupError> {
    enumerate_group("W(E7)+", &e7_plus_generators(), Ambient::B(3), 2_000_000)
}

/// `G2(Z)` in `G2(R)` by direct enumeration.
pub fn enumerate_g2() -> Result<ClassDataset, GroupError> {
    enumerate_group("G2(Z)", &g2_generators(), Ambient::G2, 20_000)
}

type M8 = [i8; 64];

fn m8_from(m: &ScaledMatrix) -> M8 {
    let mut out = [0i8; 64];
    for (o, &x) in out.iter_mut().zip(&m.entries) {
        *o = x as i8;
    }
    out
}

fn m8_mul(a: &M8, b: &M8) -> M8 {
    let mut out = [0i8; 64];
    for i in 0..8 {
        for j in 0..8 {
            let mut s = 0i32;
            for k in 0..8 {
                s += a[i * 8 + k] as i32 * b[k * 8 + j] as i32;
            }
            out[i * 8 + j] = s as i8;
        }
    }
    out
}

#[inline]
fn power_traces(c: &[i32; 64], h: &M8) -> [i32; 4] {
    let mut g = [0i32; 64];
    for i in 0..8 {
        for k in 0..8 {
            let a = c[i * 8 + k];
            for j in 0..8 {
                g[i * 8 + j] += a * h[k * 8 + j] as i32;
            }
        }
    }
    let mut g2 = [0i32; 64];
    for i in 0..8 {
        for k in 0..8 {
            let a = g[i * 8 + k];
            for j in 0..8 {
                g2[i * 8 + j] += a * g[k * 8 + j];
            }
        }
    }
    let (mut t1, mut t2, mut t3, mut t4) = (0, 0, 0, 0);
    for i in 0..8 {
        t1 += g[i * 8 + i];
        t2 += g2[i * 8 + i];
        for j in 0..8 {
            t3 += g2[i * 8 + j] * g[j * 8 + i];
            t4 += g2[i * 8 + j] * g2[j * 8 + i];
        }
    }
    [t1, t2, t3, t4]
}

/// Characteristic polynomial of an 8x8 matrix of finite order from
/// `tr g^k` (k <= 4) and `det g`, using `e_(8-k) = det * e_k`.
pub fn charpoly8_from_traces(p: [i64; 4], det: i64) -> Vec<i64> {
    let (p1, p2, p3, p4) = (p[0], p[1], p[2], p[3]);
    let e1 = p1;
    let e2 = (e1 * p1 - p2) / 2;
    let e3 = (e2 * p1 - e1 * p2 + p3) / 3;
    let e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4;
    let e = [1, e1, e2, e3, e4, det * e3, det * e2, det * e1, det];
    let mut poly = vec![0; 9];
    for k in 0..=8 {
        poly[8 - k] = if k % 2 == 0 { e[k] } else { -e[k] };
    }
    poly
}

/// Enumerates `W(E8)` on its reflection module as the union of the cosets
/// `c_r W(E7)` over the roots `r`, where `W(E7)` fixes the highest root.
/// Returns charpoly buckets of all 696729600 elements. Slow.
pub fn enumerate_e8_full(mut progress: impl FnMut(usize, usize)) -> Result<ClassDataset, GroupError> {
    let s = e_reflections(8);
    let s8: Vec<M8> = s.iter().map(m8_from).collect();
    // stabilizer of the highest root: W(E7) on the 8-dim module
    let id = m8_from(&ScaledMatrix::identity(8));
    let mut index: HashSet<M8> = HashSet::new();
    let mut elems: Vec<(M8, i8)> = vec![(id, 1)];
    index.insert(id);
    let mut head = 0;
    while head < elems.len() {
        let (m, sign) = elems[head];
        head += 1;
        for g in &s8[..7] {
            let p = m8_mul(g, &m);
            if index.insert(p) {
                elems.push((p, -sign));
            }
        }
    }
    drop(index);
    if elems.len() != 2_903_040 {
        return Err(GroupError::Invalid(format!("stabilizer has {} elements", elems.len())));
    }
    // coset representatives indexed by positive roots
    let highest: [i64; 8] = [2, 3, 4, 6, 5, 4, 3, 2];
    let mut roots: HashMap<[i64; 8], (M8, i8)> = HashMap::new();
    roots.insert(highest, (id, 1));
    let mut queue = vec![highest];
    while let Some(r) = queue.pop() {
        let (c, sign) = roots[&r];
        for (i, g) in s8.iter().enumerate() {
            let mut img = r;
            let a = cartan_e(8);
            let pairing: i64 = (0..8).map(|j| r[j] * a[j][i]).sum();
            img[i] -= pairing;
            if let std::collections::hash_map::Entry::Vacant(e) = roots.entry(img) {
                e.insert((m8_mul(g, &c), -sign));
                queue.push(img);
            }
        }
    }
    let mut positive: Vec<([i64; 8], (M8, i8))> =
        roots.into_iter().filter(|(r, _)| r.iter().all(|&x| x >= 0)).collect();
    positive.sort_by_key(|a| a.0);
    if positive.len() != 120 {
        return Err(GroupError::Invalid(format!("found {} positive roots", positive.len())));
    }
    // bucket by (p1..p4, det) with p_k in [-8, 8]
    let mut counts = vec![0u64; 17 * 17 * 17 * 17 * 2];
    let slot = |p: [i32; 4], det: i8| -> usize {
        let mut idx = 0usize;
        for x in p {
            idx = idx * 17 + (x + 8) as usize;
        }
        idx * 2 + usize::from(det < 0)
    };
    let total = positive.len();
    for (done, (_, (c, csign))) in positive.iter().enumerate() {
        let c32: [i32; 64] = std::array::from_fn(|i| c[i] as i32);
        for (h, hsign) in &elems {
            let p = power_traces(&c32, h);
            let det = csign * hsign;
            counts[slot(p, det)] += 1;
            counts[slot([-p[0], p[1], -p[2], p[3]], det)] += 1;
        }
        progress(done + 1, total);
    }
    let mut buckets: HashMap<Vec<i64>, u64> = HashMap::new();
    for (idx, &cnt) in counts.iter().enumerate() {
        if cnt == 0 {
            continue;
        }
        let det = if idx % 2 == 1 { -1 } else { 1 };
        let mut rest = idx / 2;
        let mut p = [0i64; 4];
        for k in (0..4).rev() {
            p[k] = (rest % 17) as i64 - 8;
            rest /= 17;
        }
        *buckets.entry(charpoly8_from_traces(p, det)).or_insert(0) += cnt;
    }
    let mut list: Vec<(Vec<i64>, u64)> = buckets.into_iter().collect();
    list.sort();
    ClassDataset::from_buckets("W(E8)", Ambient::O(8), 696_729_600, list)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_factorization() {
        // Phi_1 Phi_2^2 Phi_8
        let p = expand_cyclotomic(&[(1, 1), (2, 2), (8, 1)]);
        assert_eq!(factor_cyclotomic(&p, 60).unwrap(), vec![(1, 1), (2, 2), (8, 1)]);
        assert!(factor_cyclotomic(&[1, 1, 1, 0, 1], 60).is_err());
    }

    #[test]
    fn reps_in_odd_orthogonal() {
        let id = expand_cyclotomic(&[(1, 7)]);
        assert_eq!(class_reps_from_charpoly(&id, Ambient::B(3)).unwrap(), vec![TorsionElement::identity(3)]);
        let p = expand_cyclotomic(&[(1, 1), (2, 2), (8, 1)]);
        let reps = class_reps_from_charpoly(&p, Ambient::B(3)).unwrap();
        assert_eq!(reps, vec![TorsionElement::new(vec![4, 3, 1], 8)]);
        let p = expand_cyclotomic(&[(1, 1), (2, 2), (4, 2)]);
        let reps = class_reps_from_charpoly(&p, Ambient::B(3)).unwrap();
        assert_eq!(reps, vec![TorsionElement::new(vec![2, 1, 1], 4)]);
        let even = expand_cyclotomic(&[(1, 2), (3, 2)]);
        assert!(class_reps_from_charpoly(&even, Ambient::B(3)).is_err());
    }

    #[test]
    fn split_rule_in_even_orthogonal() {
        let p = expand_cyclotomic(&[(12, 2)]);
        let reps = class_reps_from_charpoly(&p, Ambient::D(4)).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0].num[..3], reps[1].num[..3]);
        let q = expand_cyclotomic(&[(1, 2), (3, 3)]);
        assert_eq!(class_reps_from_charpoly(&q, Ambient::D(4)).unwrap().len(), 1);
    }

    #[test]
    fn g2_reps() {
        let id = expand_cyclotomic(&[(1, 7)]);
        assert_eq!(g2_torus_rep(&id).unwrap(), TorsionElement::identity(2));
        for f in [vec![(1, 1), (7, 1)], vec![(1, 3), (4, 2)], vec![(1, 1), (3, 1), (12, 1)]] {
            let p = expand_cyclotomic(&f);
            let rep = g2_torus_rep(&p).unwrap();
            assert_eq!(angles_of(&rep, Ambient::G2), eigen_angles(&f));
        }
        assert!(g2_torus_rep(&expand_cyclotomic(&[(1, 1), (2, 6)])).is_err());
    }

    #[test]
    fn parse_rejects_malformed() {
        let bad = "group X ambient B 3 order 1\nclass c1 size one charpoly -1,7,-21,35,-35,21,-7,1\n";
        assert!(matches!(ClassDataset::parse(bad), Err(GroupError::Parse(2, _))));
        let good = "# identity only\ngroup X ambient B 3 order 1\nclass c1 size 1 charpoly -1,7,-21,35,-35,21,-7,1\n";
        let ds = ClassDataset::parse(good).unwrap();
        assert_eq!(ds.classes.len(), 1);
        assert_eq!(ClassDataset::parse(&ds.to_text()).unwrap(), ds);
    }

    #[test]
    fn twist_of_small_classes() {
        let text = "group T ambient O 8 order 2\nclass id size 1 charpoly 1,-8,28,-56,70,-56,28,-8,1\nclass neg size 1 charpoly 1,8,28,56,70,56,28,8,1\n";
        let ds = ClassDataset::parse(text).unwrap();
        let tw = so9_twist(&ds).unwrap();
        assert_eq!(tw.classes[0].charpoly, expand_cyclotomic(&[(1, 9)]));
        assert_eq!(tw.classes[1].charpoly, expand_cyclotomic(&[(1, 1), (2, 8)]));
        assert_eq!(tw.classes[0].reps, vec![TorsionElement::identity(4)]);
    }

    #[test]
    fn charpoly_of_scaled_matrices() {
        let gens = g2_generators();
        for g in &gens {
            let p = g.charpoly().unwrap();
            assert!(factor_cyclotomic(&p, 60).is_ok());
            assert_eq!(p[7], 1);
        }
        let s = e_reflections(7);
        assert_eq!(s[0].charpoly().unwrap(), expand_cyclotomic(&[(1, 6), (2, 1)]));
    }

    #[test]
    fn trace_identity_for_e8_formula() {
        // identity and minus identity
        assert_eq!(charpoly8_from_traces([8, 8, 8, 8], 1), expand_cyclotomic(&[(1, 8)]));
        assert_eq!(charpoly8_from_traces([-8, 8, -8, 8], 1), expand_cyclotomic(&[(2, 8)]));
        // a reflection
        assert_eq!(charpoly8_from_traces([6, 8, 6, 8], -1), expand_cyclotomic(&[(1, 7), (2, 1)]));
    }
}
