//! Exact scalars with rational p-exponents, Laurent functions over them,
//! and circle residues.
//!
//! A scalar is a finite canonical sum `sum_k q_k * p^{s_k}` with the
//! `q_k` rational p-units (numerator and denominator prime to p) and the
//! exponents `s_k` strictly increasing rationals. Rational exponents are
//! what p-th roots of monomials need, and keeping the unit parts as exact
//! rationals keeps every residue computation exact. The magnitude is
//! `log_p|x| = -s_0` and the leading residue is `q_0 mod p`.
//!
//! On the circle `log|T| = lambda` with `lambda` an integer, writing
//! `T = t * p^{lambda}` for a unit coordinate t turns a Laurent function
//! into a Laurent polynomial over the residue field once the dominant
//! magnitude is stripped; `residue_at` computes that polynomial. Residues
//! are only taken at integer radii: elsewhere the unit coordinate does
//! not exist over the ground field.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::newton::NewtonData;
use crate::valnum::{rat_int, LogMag, Rat};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ResidueError {
    #[error("zero has no residue")]
    ResidueOfZero,
    #[error("residues exist only at integer radii, got {0}")]
    NonIntegralRadius(Rat),
    #[error("denominator of a function representative is the zero function")]
    DenominatorVanishes,
    #[error("denominator residue vanishes somewhere on the residue torus")]
    DenominatorResidueZero,
}

// ---------------------------------------------------------------------
// scalars

fn vp_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0i64;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

fn vp_rat(q: &Rat, p: u64) -> i64 {
    vp_int(q.numer(), p) - vp_int(q.denom(), p)
}

/// q * p^k as an exact rational, k of either sign.
fn shift_p(q: &Rat, p: u64, k: i64) -> Rat {
    let pw = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        q * Rat::from_integer(pw)
    } else {
        q / Rat::from_integer(pw)
    }
}

fn modpow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut bb: u128 = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// Image of a p-unit rational in F_p, in [1, p).
fn residue_mod_p(q: &Rat, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let a = ((q.numer() % &pb) + &pb) % &pb;
    let b = ((q.denom() % &pb) + &pb) % &pb;
    let a: u64 = a.try_into().expect("reduced residue fits u64");
    let b: u64 = b.try_into().expect("reduced residue fits u64");
    debug_assert!(a != 0 && b != 0, "residue of a non-unit");
    a * modpow(b, p - 2, p) % p
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    unit: Rat,
    exp: Rat,
}

/// Canonical finite sum of `unit * p^exp`, exponents strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtScalar {
    p: u64,
    terms: Vec<Term>,
}

impl ExtScalar {
    pub fn zero(p: u64) -> Self {
        ExtScalar { p, terms: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::from_rat(p, Rat::one())
    }

    pub fn from_rat(p: u64, q: Rat) -> Self {
        Self::from_terms(p, vec![(q, Rat::zero())])
    }

    pub fn from_int(p: u64, n: i64) -> Self {
        Self::from_rat(p, rat_int(n))
    }

    /// Build from raw (coefficient, exponent) pairs; coefficients need not
    /// be p-units. Exponents differing by an integer describe rational
    /// multiples of one another, so each exponent class mod Z collapses to
    /// a single term — making equal scalars structurally equal.
    pub fn from_terms(p: u64, raw: Vec<(Rat, Rat)>) -> Self {
        let mut classes: BTreeMap<Rat, Rat> = BTreeMap::new();
        for (q, s) in raw {
            if q.is_zero() {
                continue;
            }
            let fl = s.floor();
            let frac = &s - &fl;
            let k = fl.to_integer().to_i64().expect("exponent magnitude fits i64");
            *classes.entry(frac).or_insert_with(Rat::zero) += shift_p(&q, p, k);
        }
        let mut terms: Vec<Term> = classes
            .into_iter()
            .filter(|(_, q)| !q.is_zero())
            .map(|(frac, q)| {
                let v = vp_rat(&q, p);
                Term { unit: shift_p(&q, p, -v), exp: frac + rat_int(v) }
            })
            .collect();
        terms.sort_by(|a, b| a.exp.cmp(&b.exp));
        ExtScalar { p, terms }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// min exponent; None for zero.
    pub fn valuation(&self) -> Option<Rat> {
        self.terms.first().map(|t| t.exp.clone())
    }

    /// log_p of the absolute value: minus the valuation.
    pub fn mag(&self) -> LogMag {
        match self.valuation() {
            Some(v) => LogMag::finite(-v),
            None => LogMag::NegInf,
        }
    }

    /// Residue of the leading unit, in [1, p). Panics on zero.
    pub fn leading_residue(&self) -> u64 {
        let t = self.terms.first().expect("leading residue of zero");
        residue_mod_p(&t.unit, self.p)
    }

    pub fn add(&self, other: &ExtScalar) -> ExtScalar {
        assert_eq!(self.p, other.p);
        let raw = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|t| (t.unit.clone(), t.exp.clone()))
            .collect();
        Self::from_terms(self.p, raw)
    }

    pub fn neg(&self) -> ExtScalar {
        ExtScalar {
            p: self.p,
            terms: self.terms.iter().map(|t| Term { unit: -&t.unit, exp: t.exp.clone() }).collect(),
        }
    }

    pub fn sub(&self, other: &ExtScalar) -> ExtScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExtScalar) -> ExtScalar {
        assert_eq!(self.p, other.p);
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                raw.push((&a.unit * &b.unit, &a.exp + &b.exp));
            }
        }
        Self::from_terms(self.p, raw)
    }

    pub fn mul_rat(&self, q: &Rat) -> ExtScalar {
        self.mul(&ExtScalar::from_rat(self.p, q.clone()))
    }

    pub fn pow(&self, e: u32) -> ExtScalar {
        let mut acc = ExtScalar::one(self.p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    /// Inverse, defined only for single-term scalars.
    pub fn inv_single_term(&self) -> Option<ExtScalar> {
        if let [t] = self.terms.as_slice() {
            Some(ExtScalar {
                p: self.p,
                terms: vec![Term { unit: Rat::one() / &t.unit, exp: -&t.exp }],
            })
        } else {
            None
        }
    }

    /// Integer power; negative exponents require a single-term scalar.
    pub fn pow_int(&self, e: i64) -> Option<ExtScalar> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            Some(self.inv_single_term()?.pow((-e) as u32))
        }
    }
}

impl std::fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if t.exp.is_zero() {
                write!(f, "{}", t.unit)?;
            } else if t.unit.is_one() {
                write!(f, "p^({})", t.exp)?;
            } else {
                write!(f, "{}*p^({})", t.unit, t.exp)?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------
// Laurent polynomials over F_p

/// Laurent polynomial with coefficients in F_p, entries kept in [1, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpLaurent {
    p: u64,
    coeffs: BTreeMap<i64, u64>,
}

impl FpLaurent {
    pub fn new(p: u64, raw: BTreeMap<i64, u64>) -> Self {
        let coeffs = raw.into_iter().filter_map(|(i, c)| {
            let c = c % p;
            (c != 0).then_some((i, c))
        });
        FpLaurent { p, coeffs: coeffs.collect() }
    }

    pub fn monomial(p: u64, deg: i64, c: u64) -> Self {
        Self::new(p, BTreeMap::from([(deg, c)]))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, u64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_monomial(&self) -> Option<(i64, u64)> {
        if self.coeffs.len() == 1 {
            let (&i, &c) = self.coeffs.iter().next().unwrap();
            Some((i, c))
        } else {
            None
        }
    }

    pub fn mul(&self, other: &FpLaurent) -> FpLaurent {
        assert_eq!(self.p, other.p);
        let mut acc: BTreeMap<i64, u64> = BTreeMap::new();
        for (&i, &a) in &self.coeffs {
            for (&j, &b) in &other.coeffs {
                let e = acc.entry(i + j).or_insert(0);
                *e = (*e + a * b % self.p) % self.p;
            }
        }
        FpLaurent::new(self.p, acc)
    }

    /// Divide by the unit monomial c * t^deg.
    pub fn div_monomial(&self, deg: i64, c: u64) -> FpLaurent {
        assert!(!c.is_multiple_of(self.p), "division by zero residue");
        let cinv = modpow(c % self.p, self.p - 2, self.p);
        let coeffs = self.coeffs.iter().map(|(&i, &a)| (i - deg, a * cinv % self.p)).collect();
        FpLaurent::new(self.p, coeffs)
    }

    /// p-th power: Frobenius fixes F_p, so only the degrees dilate.
    pub fn pth_power(&self) -> FpLaurent {
        let coeffs = self.coeffs.iter().map(|(&i, &c)| (i * self.p as i64, c)).collect();
        FpLaurent { p: self.p, coeffs }
    }

    /// p-th root if one exists: needs every degree divisible by p.
    pub fn pth_root(&self) -> Option<FpLaurent> {
        let p = self.p as i64;
        let mut coeffs = BTreeMap::new();
        for (&i, &c) in &self.coeffs {
            if i % p != 0 {
                return None;
            }
            coeffs.insert(i / p, c);
        }
        Some(FpLaurent { p: self.p, coeffs })
    }
}

impl std::fmt::Display for FpLaurent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, &c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------
// Laurent functions over the scalars

/// Finite Laurent sum `sum_i a_i T^i` with ExtScalar coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentExt {
    p: u64,
    coeffs: BTreeMap<i64, ExtScalar>,
}

impl LaurentExt {
    pub fn zero(p: u64) -> Self {
        LaurentExt { p, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(p: u64, raw: Vec<(i64, ExtScalar)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (i, a) in raw {
            assert_eq!(a.p(), p);
            if a.is_zero() {
                continue;
            }
            let slot = coeffs.entry(i).or_insert_with(|| ExtScalar::zero(p));
            *slot = slot.add(&a);
        }
        coeffs.retain(|_, a: &mut ExtScalar| !a.is_zero());
        LaurentExt { p, coeffs }
    }

    /// Coefficients given as plain rationals.
    pub fn from_rat_coeffs(p: u64, raw: Vec<(i64, Rat)>) -> Self {
        Self::from_coeffs(p, raw.into_iter().map(|(i, q)| (i, ExtScalar::from_rat(p, q))).collect())
    }

    pub fn monomial(p: u64, deg: i64, a: ExtScalar) -> Self {
        Self::from_coeffs(p, vec![(deg, a)])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, ExtScalar> {
        &self.coeffs
    }

    pub fn coeff(&self, i: i64) -> ExtScalar {
        self.coeffs.get(&i).cloned().unwrap_or_else(|| ExtScalar::zero(self.p))
    }

    pub fn support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    pub fn add(&self, other: &LaurentExt) -> LaurentExt {
        assert_eq!(self.p, other.p);
        let raw = self
            .coeffs
            .iter()
            .chain(other.coeffs.iter())
            .map(|(&i, a)| (i, a.clone()))
            .collect();
        Self::from_coeffs(self.p, raw)
    }

    pub fn neg(&self) -> LaurentExt {
        LaurentExt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|(&i, a)| (i, a.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentExt) -> LaurentExt {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentExt) -> LaurentExt {
        assert_eq!(self.p, other.p);
        let mut raw = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                raw.push((i + j, a.mul(b)));
            }
        }
        Self::from_coeffs(self.p, raw)
    }

    pub fn mul_scalar(&self, a: &ExtScalar) -> LaurentExt {
        let raw = self.coeffs.iter().map(|(&i, c)| (i, c.mul(a))).collect();
        Self::from_coeffs(self.p, raw)
    }

    pub fn pow(&self, e: u32) -> LaurentExt {
        let mut acc = Self::from_rat_coeffs(self.p, vec![(0, Rat::one())]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficient magnitudes as max-plus data; None when zero.
    pub fn to_newton(&self) -> Option<NewtonData> {
        if self.coeffs.is_empty() {
            return None;
        }
        let terms: Vec<(i64, Rat)> = self
            .coeffs
            .iter()
            .map(|(&i, a)| (i, a.mag().as_finite().expect("nonzero coefficient").clone()))
            .collect();
        Some(NewtonData::from_pairs(&terms))
    }

    /// log of the sup-magnitude on the circle log|T| = lambda.
    pub fn mag_at(&self, lambda: &Rat) -> LogMag {
        match self.to_newton() {
            Some(nd) => LogMag::finite(nd.eval_at(lambda)),
            None => LogMag::NegInf,
        }
    }
}

impl std::fmt::Display for LaurentExt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, a) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({a})")?,
                1 => write!(f, "({a})*T")?,
                i => write!(f, "({a})*T^{i}")?,
            }
        }
        Ok(())
    }
}

/// Residue of a nonzero Laurent function on the integer-radius circle
/// log|T| = lambda: strip the dominant magnitude, reduce the surviving
/// coefficients. Distinct degrees cannot cancel, so the result is nonzero.
pub fn residue_at(g: &LaurentExt, lambda: &Rat) -> Result<FpLaurent, ResidueError> {
    if g.is_zero() {
        return Err(ResidueError::ResidueOfZero);
    }
    if !lambda.is_integer() {
        return Err(ResidueError::NonIntegralRadius(lambda.clone()));
    }
    let nd = g.to_newton().expect("nonzero");
    let mut coeffs = BTreeMap::new();
    for i in nd.argmax_at(lambda) {
        coeffs.insert(i, g.coeff(i).leading_residue());
    }
    Ok(FpLaurent::new(g.p(), coeffs))
}

// ---------------------------------------------------------------------
// quotients

/// Quotient representative num/den of a function invertible near the
/// working circle; division of scalar sums is never performed, only
/// residue-level division by a unit monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncRep {
    num: LaurentExt,
    den: LaurentExt,
}

impl FuncRep {
    pub fn new(num: LaurentExt, den: LaurentExt) -> Result<Self, ResidueError> {
        if den.is_zero() {
            return Err(ResidueError::DenominatorVanishes);
        }
        assert_eq!(num.p(), den.p());
        Ok(FuncRep { num, den })
    }

    pub fn num(&self) -> &LaurentExt {
        &self.num
    }

    pub fn den(&self) -> &LaurentExt {
        &self.den
    }

    pub fn is_num_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// log-magnitude of the quotient on the circle.
    pub fn mag_at(&self, lambda: &Rat) -> LogMag {
        match (self.num.mag_at(lambda), self.den.mag_at(lambda)) {
            (LogMag::NegInf, _) => LogMag::NegInf,
            (LogMag::Finite(n), LogMag::Finite(d)) => LogMag::finite(n - d),
            (_, LogMag::NegInf) => unreachable!("denominator is nonzero"),
        }
    }

    /// Residue of the quotient; defined when the denominator residue is a
    /// unit of the residue torus, i.e. a monomial.
    pub fn residue_at(&self, lambda: &Rat) -> Result<FpLaurent, ResidueError> {
        let dn = residue_at(&self.den, lambda)?;
        let (deg, c) = dn.as_monomial().ok_or(ResidueError::DenominatorResidueZero)?;
        let nm = residue_at(&self.num, lambda)?;
        Ok(nm.div_monomial(deg, c))
    }
}
