//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! Elements are stored in the power basis `1, x, ..., x^(phi(N)-1)` of
//! `Q[x]/(Phi_N(x))` as integer numerators over one positive common
//! denominator. The representation is canonical, so structural equality is
//! field equality.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u32),
    #[error("value is not a rational integer: {0}")]
    NonIntegral(String),
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("conductor {0} does not divide {1}")]
    BadEmbedding(u32, u32),
    #[error("intermediate coefficient overflow")]
    Overflow,
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
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
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn compute_cyclotomic(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d of n
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d);
            p = poly_div_exact(&p, &phi_d);
        }
    }
    p
}

/// Coefficients of `Phi_n`, low degree first. Results are cached.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(n));
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// Reduces an `i128` polynomial modulo `Phi_n`, in place, after folding
/// exponents modulo `n`. Returns the `phi(n)` low coefficients.
pub fn reduce_i128(coeffs: &[i128], n: u32) -> Result<Vec<i128>, CycloError> {
    let n_us = n as usize;
    let mut folded = vec![0i128; n_us];
    for (i, &c) in coeffs.iter().enumerate() {
        let slot = &mut folded[i % n_us];
        *slot = slot.checked_add(c).ok_or(CycloError::Overflow)?;
    }
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    for i in (d..n_us).rev() {
        let c = folded[i];
        if c == 0 {
            continue;
        }
        folded[i] = 0;
        for (j, &pj) in phi.iter().enumerate().take(d) {
            if pj != 0 {
                let t = c.checked_mul(pj as i128).ok_or(CycloError::Overflow)?;
                folded[i - d + j] = folded[i - d + j].checked_sub(t).ok_or(CycloError::Overflow)?;
            }
        }
    }
    folded.truncate(d);
    Ok(folded)
}

fn reduce_big(coeffs: Vec<BigInt>, n: u32) -> Vec<BigInt> {
    let n_us = n as usize;
    let mut folded = vec![BigInt::zero(); n_us];
    for (i, c) in coeffs.into_iter().enumerate() {
        if !c.is_zero() {
            folded[i % n_us] += c;
        }
    }
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    for i in (d..n_us).rev() {
        if folded[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut folded[i]);
        for (j, &pj) in phi.iter().enumerate().take(d) {
            if pj != 0 {
                folded[i - d + j] -= &c * pj;
            }
        }
    }
    folded.truncate(d);
    folded
}

/// An element of `Q(zeta_N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    n: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    fn normalized(n: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= g;
        }
        Cyclotomic { n, num, den }
    }

    pub fn zero(n: u32) -> Self {
        Cyclotomic { n, num: vec![BigInt::zero(); euler_phi(n) as usize], den: BigInt::one() }
    }

    pub fn from_integer(value: impl Into<BigInt>, n: u32) -> Self {
        let mut z = Self::zero(n);
        z.num[0] = value.into();
        z
    }

    pub fn one(n: u32) -> Self {
        Self::from_integer(1, n)
    }

    pub fn from_rational(value: &BigRational, n: u32) -> Self {
        let mut num = vec![BigInt::zero(); euler_phi(n) as usize];
        num[0] = value.numer().clone();
        Self::normalized(n, num, value.denom().clone())
    }

    /// `zeta_N^k`, with `k` reduced modulo `N`.
    pub fn root_of_unity(k: i64, n: u32) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![BigInt::zero(); e + 1];
        poly[e] = BigInt::one();
        Cyclotomic { n, num: reduce_big(poly, n), den: BigInt::one() }
    }

    /// Builds the class of an integer polynomial in `zeta_N` (any degree).
    pub fn from_i128_poly(coeffs: &[i128], n: u32) -> Result<Self, CycloError> {
        let red = reduce_i128(coeffs, n)?;
        Ok(Self::normalized(n, red.into_iter().map(BigInt::from).collect(), BigInt::one()))
    }

    /// Builds the class of a rational polynomial in `zeta_N` given as
    /// integer numerators over a common denominator.
    pub fn from_poly(coeffs: Vec<BigInt>, den: BigInt, n: u32) -> Result<Self, CycloError> {
        if den.is_zero() {
            return Err(CycloError::DivisionByZero(n));
        }
        Ok(Self::normalized(n, reduce_big(coeffs, n), den))
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coordinates as rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<(), CycloError> {
        if self.n != other.n {
            Err(CycloError::ConductorMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        let l = self.den.lcm(&other.den);
        let fa = &l / &self.den;
        let fb = &l / &other.den;
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &fa + b * &fb).collect();
        Ok(Self::normalized(self.n, num, l))
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { n: self.n, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        let d = self.num.len();
        let mut prod = vec![BigInt::zero(); 2 * d];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::normalized(self.n, reduce_big(prod, self.n), &self.den * &other.den))
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * factor.numer()).collect();
        Self::normalized(self.n, num, &self.den * factor.denom())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Phi_N`.
    pub fn invert(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero(self.n));
        }
        let phi = cyclotomic_poly(self.n);
        let to_q = |v: &[BigInt], den: &BigInt| -> Vec<BigRational> {
            v.iter().map(|c| BigRational::new(c.clone(), den.clone())).collect()
        };
        let mut r0: Vec<BigRational> = phi.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        let mut r1 = to_q(&self.num, &self.den);
        trim(&mut r1);
        // invariant: s_i * a == r_i (mod Phi_N)
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        let c = r1[0].clone();
        let inv: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        let den = inv.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num: Vec<BigInt> = inv.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        Self::from_poly(num, den, self.n)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.try_mul(&other.invert()?)
    }

    /// Image under `zeta_N -> zeta_(kN)^k`.
    pub fn embed(&self, target: u32) -> Result<Self, CycloError> {
        if !target.is_multiple_of(self.n) {
            return Err(CycloError::BadEmbedding(self.n, target));
        }
        let k = (target / self.n) as usize;
        let mut poly = vec![BigInt::zero(); k * self.num.len().max(1)];
        for (i, c) in self.num.iter().enumerate() {
            poly[i * k] = c.clone();
        }
        Self::from_poly(poly, self.den.clone(), target)
    }

    /// Complex conjugate, i.e. the image under `zeta -> zeta^-1`.
    pub fn conjugate(&self) -> Self {
        let n = self.n as usize;
        let mut poly = vec![BigInt::zero(); n];
        for (i, c) in self.num.iter().enumerate() {
            poly[(n - i) % n] += c;
        }
        Cyclotomic { n: self.n, num: reduce_big(poly, self.n), den: self.den.clone() }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Result<BigInt, CycloError> {
        match self.to_rational() {
            Some(q) if q.is_integer() => Ok(q.to_integer()),
            _ => Err(CycloError::NonIntegral(self.to_string())),
        }
    }

    /// Numerical value at `zeta_N = exp(2 pi i / N)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN) / den;
            let ang = 2.0 * std::f64::consts::PI * k as f64 / self.n as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = vec![];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = BigRational::new(c.clone(), self.den.clone());
            terms.push(match k {
                0 => format!("{}", q),
                1 => format!("({})z", q),
                _ => format!("({})z^{}", q, k),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} [z = zeta_{}]", terms.join(" + "), self.n)
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut q = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        q[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut q);
    (q, rem)
}
