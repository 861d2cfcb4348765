//! The degenerate Weyl character formula and averaged invariant dimensions.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclo::{CycloError, Cyclotomic};
use crate::groupdata::ClassDataset;
use crate::rootsys::{levi_data, BasedRootDatum, Family, LeviData, Weight};

#[derive(Debug, Error)]
pub enum DimError {
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error("class sum {0} is not divisible by the group order {1}")]
    NonIntegralSum(BigInt, u64),
    #[error("dataset ambient {0}{1} does not match root datum {2}{3}")]
    AmbientMismatch(Family, usize, Family, usize),
    #[error("integer overflow while evaluating the character numerator")]
    Overflow,
}

/// A torsion element `exp(2 pi i mu)` of the maximal torus, with
/// `mu = num / order` in cocharacter coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionElement {
    pub num: Vec<i64>,
    pub order: u32,
}

impl TorsionElement {
    /// Normalizes `num/order` to lowest terms with `0 <= num_i < order`.
    pub fn new(num: Vec<i64>, order: u32) -> Self {
        let m = order as i64;
        let reduced: Vec<i64> = num.iter().map(|x| x.rem_euclid(m)).collect();
        let mut g = m;
        for &x in &reduced {
            g = num_integer::gcd(g, x);
        }
        let g = g.max(1);
        TorsionElement { num: reduced.iter().map(|x| x / g).collect(), order: (m / g) as u32 }
    }

    pub fn identity(rank: usize) -> Self {
        TorsionElement { num: vec![0; rank], order: 1 }
    }
}

/// Per-class data independent of the highest weight.
#[derive(Debug)]
pub struct ClassPrep {
    pub torsion: TorsionElement,
    pub levi: LeviData,
    /// Inverse of the denominator `prod (1 - t^-a)` over non-integral roots.
    den_inv: Cyclotomic,
    den_inv_c: (f64, f64),
    /// `prod (a, 2 rho_M)` over integral roots.
    pm_den: i128,
}

impl ClassPrep {
    pub fn new(d: &BasedRootDatum, t: &TorsionElement) -> Result<Self, DimError> {
        let levi = levi_data(d, t);
        let m = t.order;
        let mut den = Cyclotomic::one(m);
        for (i, root) in d.positive_roots.iter().enumerate() {
            if levi.roots_m.contains(&i) {
                continue;
            }
            let k = d.pair(root, &t.num);
            let factor = Cyclotomic::one(m).try_sub(&Cyclotomic::root_of_unity(-k, m))?;
            den = den.try_mul(&factor)?;
        }
        let den_inv = den.invert()?;
        let den_inv_c = den_inv.to_complex();
        let mut pm_den: i128 = 1;
        for &i in &levi.roots_m {
            pm_den *= d.inner(&d.positive_roots[i], &levi.rho_m2) as i128;
        }
        Ok(ClassPrep { torsion: t.clone(), levi, den_inv, den_inv_c, pm_den })
    }
}

/// Numerator polynomial `sum eps(w) prod (a, 2 w(lambda+rho)) t^(w(lambda+rho)-rho)`
/// indexed by exponent modulo the element order, plus the sum of absolute
/// values of its terms.
fn numerator(d: &BasedRootDatum, prep: &ClassPrep, lambda2: &[i64]) -> Result<(Vec<i128>, f64), DimError> {
    let m = prep.torsion.order as usize;
    let mut poly = vec![0i128; m];
    let mut mass = 0.0f64;
    for &w in &prep.levi.coset {
        let v2 = d.apply(w, lambda2);
        let mut prod: i128 = d.weyl[w].sign as i128;
        for &i in &prep.levi.roots_m {
            let f = d.inner(&d.positive_roots[i], &v2) as i128;
            prod = prod.checked_mul(f).ok_or(DimError::Overflow)?;
        }
        if prod == 0 {
            continue;
        }
        let x2: Vec<i64> = v2.iter().zip(&d.rho2).map(|(a, b)| a - b).collect();
        let k = (d.pair(&x2, &prep.torsion.num) / 2).rem_euclid(m as i64) as usize;
        poly[k] = poly[k].checked_add(prod).ok_or(DimError::Overflow)?;
        mass += (prod as f64).abs();
    }
    Ok((poly, mass))
}

fn doubled_shift(d: &BasedRootDatum, lambda: &Weight) -> Vec<i64> {
    lambda.0.iter().zip(&d.rho2).map(|(l, r)| 2 * l + r).collect()
}

fn char_value_prepped(d: &BasedRootDatum, lambda: &Weight, prep: &ClassPrep) -> Result<Cyclotomic, DimError> {
    let (poly, _) = numerator(d, prep, &doubled_shift(d, lambda))?;
    let num = Cyclotomic::from_i128_poly(&poly, prep.torsion.order)?;
    let v = num.try_mul(&prep.den_inv)?;
    Ok(v.scale(&BigRational::new(1.into(), BigInt::from(prep.pm_den))))
}

/// Numerical character value with an upper bound on its absolute error.
fn char_value_numeric(d: &BasedRootDatum, lambda: &Weight, prep: &ClassPrep) -> Result<((f64, f64), f64), DimError> {
    let (poly, mass) = numerator(d, prep, &doubled_shift(d, lambda))?;
    let m = prep.torsion.order as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for (k, &c) in poly.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let ang = 2.0 * std::f64::consts::PI * k as f64 / m;
        re += c as f64 * ang.cos();
        im += c as f64 * ang.sin();
    }
    let (dr, di) = prep.den_inv_c;
    let scale = prep.pm_den as f64;
    let vr = (re * dr - im * di) / scale;
    let vi = (re * di + im * dr) / scale;
    let dabs = (dr * dr + di * di).sqrt();
    let terms = prep.levi.coset.len() as f64 + 64.0;
    let err = 16.0 * terms * f64::EPSILON * mass * dabs / scale.abs();
    Ok(((vr, vi), err))
}

/// `chi_lambda(t)` as an exact cyclotomic number in `Q(zeta_order)`.
pub fn char_value(d: &BasedRootDatum, lambda: &Weight, t: &TorsionElement) -> Result<Cyclotomic, DimError> {
    if !d.is_dominant(lambda) {
        return Err(DimError::NotDominant(lambda.0.clone()));
    }
    let prep = ClassPrep::new(d, t)?;
    char_value_prepped(d, lambda, &prep)
}

/// Weyl's dimension formula.
pub fn weyl_dim(d: &BasedRootDatum, lambda: &Weight) -> BigInt {
    let v2 = doubled_shift(d, lambda);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for r in &d.positive_roots {
        num *= d.inner(r, &v2);
        den *= d.inner(r, &d.rho2);
    }
    num / den
}

/// How an invariant dimension is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Exact cyclotomic arithmetic throughout.
    Exact,
    /// Floating point per class with a certified error bound; classes whose
    /// bound is not small enough fall back to the exact path.
    Fast,
}

/// Averages characters over a class dataset, memoizing per-class data.
pub struct InvariantEngine {
    pub datum: Arc<BasedRootDatum>,
    pub dataset: Arc<ClassDataset>,
    preps: Vec<Vec<ClassPrep>>,
    pub fallbacks: Mutex<u64>,
}

impl InvariantEngine {
    pub fn new(datum: Arc<BasedRootDatum>, dataset: Arc<ClassDataset>) -> Result<Self, DimError> {
        let (fam, rank) =
            dataset.ambient.family_rank().ok_or(DimError::AmbientMismatch(Family::B, 0, datum.family, datum.rank))?;
        if fam != datum.family || rank != datum.rank {
            return Err(DimError::AmbientMismatch(fam, rank, datum.family, datum.rank));
        }
        let mut preps = vec![];
        for class in &dataset.classes {
            let mut v = vec![];
            for rep in &class.reps {
                v.push(ClassPrep::new(&datum, rep)?);
            }
            preps.push(v);
        }
        Ok(InvariantEngine { datum, dataset, preps, fallbacks: Mutex::new(0) })
    }

    /// Integer value of the sum of the characters over the reps of one class.
    fn class_value(&self, lambda: &Weight, j: usize, mode: EvalMode) -> Result<BigInt, DimError> {
        let preps = &self.preps[j];
        if mode == EvalMode::Fast {
            let mut re = 0.0;
            let mut err = 0.0;
            for p in preps {
                let ((r, _), e) = char_value_numeric(&self.datum, lambda, p)?;
                re += r;
                err += e + 4.0 * f64::EPSILON * r.abs();
            }
            let rounded = re.round();
            if err < 0.25 && (re - rounded).abs() + err < 0.5 {
                if let Some(v) = rounded.to_i64() {
                    return Ok(BigInt::from(v));
                }
            }
            *self.fallbacks.lock().unwrap() += 1;
        }
        let n = self.lcm_order(j);
        let mut acc = Cyclotomic::zero(n);
        for p in preps {
            acc = acc.try_add(&char_value_prepped(&self.datum, lambda, p)?.embed(n)?)?;
        }
        Ok(acc.to_integer()?)
    }

    fn lcm_order(&self, j: usize) -> u32 {
        self.preps[j].iter().fold(1u32, |a, p| num_integer::lcm(a, p.torsion.order))
    }

    /// Per-class integer character sums `sum_reps chi(rep)`.
    pub fn class_values(&self, lambda: &Weight, mode: EvalMode) -> Result<Vec<BigInt>, DimError> {
        if !self.datum.is_dominant(lambda) {
            return Err(DimError::NotDominant(lambda.0.clone()));
        }
        (0..self.preps.len()).map(|j| self.class_value(lambda, j, mode)).collect()
    }

    /// `dim V_lambda^Gamma`.
    pub fn dimension(&self, lambda: &Weight, mode: EvalMode) -> Result<BigInt, DimError> {
        let vals = self.class_values(lambda, mode)?;
        let mut sum = BigInt::zero();
        for (class, v) in self.dataset.classes.iter().zip(vals) {
            let share = class.size / class.reps.len() as u64;
            sum += v * BigInt::from(share);
        }
        let order = BigInt::from(self.dataset.order);
        if !(&sum % &order).is_zero() {
            return Err(DimError::NonIntegralSum(sum, self.dataset.order));
        }
        Ok(sum / order)
    }
}

/// `dim V_lambda^Gamma` computed exactly.
pub fn invariant_dimension(d: &BasedRootDatum, lambda: &Weight, dataset: &ClassDataset) -> Result<BigInt, DimError> {
    let engine = InvariantEngine::new(Arc::new(d.clone()), Arc::new(dataset.clone()))?;
    engine.dimension(lambda, EvalMode::Exact)
}

/// Which harmonic generating series to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicCase {
    /// `W(E7)+` on the 7-dimensional reflection module.
    E7,
    /// `W(E8)+` on the 8-dimensional reflection module.
    E8,
    /// `W(E8)` on the reflection module plus the sign character.
    E8Twisted,
}

/// Coefficients of `sum_n dim H_n^Gamma t^n` up to `max_degree`, from the
/// closed generating functions built on the Weyl group exponents.
pub fn harmonic_invariant_series(case: HarmonicCase, max_degree: usize) -> Vec<i64> {
    let (exponents, roots): (&[usize], usize) = match case {
        HarmonicCase::E7 => (&[1, 5, 7, 9, 11, 13, 17], 126),
        HarmonicCase::E8 | HarmonicCase::E8Twisted => (&[1, 7, 11, 13, 17, 19, 23, 29], 240),
    };
    let len = max_degree + 1;
    // P_R(t) = prod 1/(1 - t^(m_i + 1))
    let mut series = vec![0i64; len];
    series[0] = 1;
    for &m in exponents {
        let step = m + 1;
        for i in step..len {
            series[i] += series[i - step];
        }
    }
    let mul_binomial = |s: &[i64], k: usize, sign: i64| -> Vec<i64> {
        let mut out = s.to_vec();
        for i in k..len {
            out[i] += sign * s[i - k];
        }
        out
    };
    match case {
        HarmonicCase::E7 | HarmonicCase::E8 => {
            let s = mul_binomial(&series, roots / 2, 1);
            mul_binomial(&s, 2, -1)
        }
        HarmonicCase::E8Twisted => mul_binomial(&series, 1 + roots / 2, 1),
    }
}
