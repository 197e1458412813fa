//! Valuation-scale scalars, intervals and the prime thresholds.
//!
//! A magnitude is `log_p |x|`, an exact rational (or `-inf` for zero).
//! Multiplication of absolute values becomes addition, the ultrametric
//! inequality becomes a max. Intervals of magnitudes carry open/closed
//! flags on finite endpoints; infinite endpoints are always open.
//!
//! The thresholds attached to a prime p,
//!   tau  = -p/(p-1),   tau1 = -1/(p-1),   c = p/(p-1),
//! satisfy tau = tau1 - 1 and c = -tau, and are the only constants the
//! rest of the toolkit needs: tau is the total-splitting bound for wild
//! mu_p torsors, tau1 the separation of p-th roots of unity, c the
//! detectable length quantum.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Rat = BigRational;

/// Exact rational from a numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `log_p |x|` of a scalar: a finite rational, or `-inf` for `x = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogMag {
    NegInf,
    Finite(Rat),
}

impl LogMag {
    pub fn finite(v: Rat) -> Self {
        LogMag::Finite(v)
    }

    pub fn is_zero_mag(&self) -> bool {
        matches!(self, LogMag::NegInf)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            LogMag::NegInf => None,
            LogMag::Finite(v) => Some(v),
        }
    }

    /// Magnitude of a product: addition with `-inf` absorbing.
    pub fn mul(&self, other: &LogMag) -> LogMag {
        match (self, other) {
            (LogMag::NegInf, _) | (_, LogMag::NegInf) => LogMag::NegInf,
            (LogMag::Finite(a), LogMag::Finite(b)) => LogMag::Finite(a + b),
        }
    }

    /// Ultrametric bound of a sum: max with `-inf` neutral.
    pub fn umax(&self, other: &LogMag) -> LogMag {
        match (self, other) {
            (LogMag::NegInf, b) => b.clone(),
            (a, LogMag::NegInf) => a.clone(),
            (LogMag::Finite(a), LogMag::Finite(b)) => LogMag::Finite(a.max(b).clone()),
        }
    }
}

impl fmt::Display for LogMag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogMag::NegInf => write!(f, "-inf"),
            LogMag::Finite(v) => write!(f, "{}", v),
        }
    }
}

/// Thresholds of a prime, all in the log scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub p: u64,
    /// -p/(p-1): wild torsors split totally below this remainder magnitude.
    pub tau: Rat,
    /// -1/(p-1): distance between distinct p-th roots of unity.
    pub tau1: Rat,
    /// p/(p-1) = -tau: the length quantum detected by splitting behaviour.
    pub c: Rat,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Thresholds {
    /// Panics on a non-prime; every caller works with a fixed small prime.
    pub fn new(p: u64) -> Self {
        assert!(is_prime(p), "p must be prime, got {p}");
        let pi = p as i64;
        Thresholds {
            p,
            tau: rat(-pi, pi - 1),
            tau1: rat(-1, pi - 1),
            c: rat(pi, pi - 1),
        }
    }

    pub fn p_rat(&self) -> Rat {
        rat_int(self.p as i64)
    }
}

/// Separation of distinct p-th roots of unity: log |zeta - zeta'| = -1/(p-1).
pub fn root_separation(p: u64) -> Rat {
    Thresholds::new(p).tau1
}

/// One side of a magnitude interval. Unbounded ends are always open.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Unbounded,
    At { value: Rat, closed: bool },
}

impl Endpoint {
    pub fn open(value: Rat) -> Self {
        Endpoint::At { value, closed: false }
    }

    pub fn closed(value: Rat) -> Self {
        Endpoint::At { value, closed: true }
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::At { value, .. } => Some(value),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Endpoint::At { closed: true, .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("interval endpoints out of order: lo > hi")]
    Disordered,
    #[error("midpoint of an interval with an unbounded end")]
    MidpointOfInfinite,
}

/// An interval of magnitudes `log_p r`. `lo = hi` with both flags closed
/// is the one-point interval; `lo = hi` with any open flag is empty
/// (`LogInterval::empty()` is the canonical form).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogInterval {
    lo: Endpoint,
    hi: Endpoint,
}

impl LogInterval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Result<Self, IntervalError> {
        if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
            if a > b {
                return Err(IntervalError::Disordered);
            }
        }
        let iv = LogInterval { lo, hi };
        Ok(if iv.is_empty() { LogInterval::empty() } else { iv })
    }

    pub fn open(lo: Rat, hi: Rat) -> Self {
        LogInterval::new(Endpoint::open(lo), Endpoint::open(hi)).expect("ordered endpoints")
    }

    pub fn closed(lo: Rat, hi: Rat) -> Self {
        LogInterval::new(Endpoint::closed(lo), Endpoint::closed(hi)).expect("ordered endpoints")
    }

    pub fn half_open_lo(lo: Rat, hi: Rat) -> Self {
        // [lo, hi)
        LogInterval::new(Endpoint::closed(lo), Endpoint::open(hi)).expect("ordered endpoints")
    }

    pub fn half_open_hi(lo: Rat, hi: Rat) -> Self {
        // (lo, hi]
        LogInterval::new(Endpoint::open(lo), Endpoint::closed(hi)).expect("ordered endpoints")
    }

    pub fn point(v: Rat) -> Self {
        LogInterval { lo: Endpoint::closed(v.clone()), hi: Endpoint::closed(v) }
    }

    pub fn empty() -> Self {
        let z = Rat::zero();
        LogInterval { lo: Endpoint::open(z.clone()), hi: Endpoint::open(z) }
    }

    pub fn unbounded_lo(hi: Endpoint) -> Self {
        LogInterval { lo: Endpoint::Unbounded, hi }
    }

    pub fn lo(&self) -> &Endpoint {
        &self.lo
    }

    pub fn hi(&self) -> &Endpoint {
        &self.hi
    }

    pub fn is_empty(&self) -> bool {
        match (self.lo.value(), self.hi.value()) {
            (Some(a), Some(b)) => a == b && !(self.lo.is_closed() && self.hi.is_closed()),
            _ => false,
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        if self.is_empty() {
            return false;
        }
        let lo_ok = match &self.lo {
            Endpoint::Unbounded => true,
            Endpoint::At { value, closed } => x > value || (*closed && x == value),
        };
        let hi_ok = match &self.hi {
            Endpoint::Unbounded => true,
            Endpoint::At { value, closed } => x < value || (*closed && x == value),
        };
        lo_ok && hi_ok
    }

    /// Strict interior membership, ignoring the closed flags.
    pub fn strictly_contains(&self, x: &Rat) -> bool {
        if self.is_empty() {
            return false;
        }
        let lo_ok = self.lo.value().is_none_or(|v| x > v);
        let hi_ok = self.hi.value().is_none_or(|v| x < v);
        lo_ok && hi_ok
    }

    /// `hi - lo`; `None` for an unbounded interval, zero for the empty one.
    pub fn length(&self) -> Option<Rat> {
        match (self.lo.value(), self.hi.value()) {
            (Some(a), Some(b)) => Some(b - a),
            _ => None,
        }
    }

    pub fn translate(&self, q: &Rat) -> Self {
        let shift = |e: &Endpoint| match e {
            Endpoint::Unbounded => Endpoint::Unbounded,
            Endpoint::At { value, closed } => Endpoint::At { value: value + q, closed: *closed },
        };
        LogInterval { lo: shift(&self.lo), hi: shift(&self.hi) }
    }

    /// Mirror image under r -> 1/r: endpoints negate and swap roles.
    pub fn reflect(&self) -> Self {
        let neg = |e: &Endpoint| match e {
            Endpoint::Unbounded => Endpoint::Unbounded,
            Endpoint::At { value, closed } => Endpoint::At { value: -value, closed: *closed },
        };
        LogInterval { lo: neg(&self.hi), hi: neg(&self.lo) }
    }

    /// Scale every endpoint by a positive rational factor.
    pub fn scale(&self, q: &Rat) -> Self {
        assert!(q.is_positive(), "scale factor must be positive");
        let sc = |e: &Endpoint| match e {
            Endpoint::Unbounded => Endpoint::Unbounded,
            Endpoint::At { value, closed } => Endpoint::At { value: value * q, closed: *closed },
        };
        LogInterval { lo: sc(&self.lo), hi: sc(&self.hi) }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return LogInterval::empty();
        }
        let lo = tighter_lo(&self.lo, &other.lo);
        let hi = tighter_hi(&self.hi, &other.hi);
        if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
            match a.cmp(b) {
                Ordering::Greater => return LogInterval::empty(),
                Ordering::Equal => {
                    if !(lo.is_closed() && hi.is_closed()) {
                        return LogInterval::empty();
                    }
                }
                Ordering::Less => {}
            }
        }
        LogInterval { lo, hi }
    }

    /// Intersect with the open half-line `(-inf, b)`.
    pub fn clamp_above(&self, b: &Rat) -> Self {
        self.intersect(&LogInterval { lo: Endpoint::Unbounded, hi: Endpoint::open(b.clone()) })
    }

    /// Intersect with the open half-line `(b, +inf)`.
    pub fn clamp_below(&self, b: &Rat) -> Self {
        self.intersect(&LogInterval { lo: Endpoint::open(b.clone()), hi: Endpoint::Unbounded })
    }

    pub fn midpoint(&self) -> Result<Rat, IntervalError> {
        match (self.lo.value(), self.hi.value()) {
            (Some(a), Some(b)) => Some((a + b) / rat_int(2)),
            _ => None,
        }
        .ok_or(IntervalError::MidpointOfInfinite)
    }

    pub fn has_unbounded_end(&self) -> bool {
        self.lo.value().is_none() || self.hi.value().is_none()
    }
}

fn tighter_lo(a: &Endpoint, b: &Endpoint) -> Endpoint {
    match (a, b) {
        (Endpoint::Unbounded, e) | (e, Endpoint::Unbounded) => e.clone(),
        (Endpoint::At { value: va, closed: ca }, Endpoint::At { value: vb, closed: cb }) => {
            match va.cmp(vb) {
                Ordering::Greater => a.clone(),
                Ordering::Less => b.clone(),
                Ordering::Equal => Endpoint::At { value: va.clone(), closed: *ca && *cb },
            }
        }
    }
}

fn tighter_hi(a: &Endpoint, b: &Endpoint) -> Endpoint {
    match (a, b) {
        (Endpoint::Unbounded, e) | (e, Endpoint::Unbounded) => e.clone(),
        (Endpoint::At { value: va, closed: ca }, Endpoint::At { value: vb, closed: cb }) => {
            match va.cmp(vb) {
                Ordering::Less => a.clone(),
                Ordering::Greater => b.clone(),
                Ordering::Equal => Endpoint::At { value: va.clone(), closed: *ca && *cb },
            }
        }
    }
}

impl fmt::Display for LogInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            Endpoint::Unbounded => write!(f, "(-inf, ")?,
            Endpoint::At { value, closed } => {
                write!(f, "{}{}, ", if *closed { "[" } else { "(" }, value)?
            }
        }
        match &self.hi {
            Endpoint::Unbounded => write!(f, "+inf)"),
            Endpoint::At { value, closed } => {
                write!(f, "{}{}", value, if *closed { "]" } else { ")" })
            }
        }
    }
}

/// Skeleton distance between two magnitude coordinates.
pub fn distance(a: &Rat, b: &Rat) -> Rat {
    (a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn logmag_mul_examples() {
        let a = LogMag::finite(rat(1, 2));
        let b = LogMag::finite(rat(-3, 2));
        assert_eq!(a.mul(&b), LogMag::finite(rat_int(-1)));
        assert_eq!(a.mul(&LogMag::NegInf), LogMag::NegInf);
        assert_eq!(LogMag::NegInf.umax(&b), b);
    }

    #[test]
    fn thresholds_identities() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let th = Thresholds::new(p);
            assert_eq!(th.tau, &th.tau1 - rat_int(1));
            assert_eq!(th.c, -th.tau.clone());
            assert_eq!(root_separation(p), th.tau1);
        }
    }

    #[test]
    fn root_separation_values() {
        assert_eq!(root_separation(2), rat_int(-1));
        assert_eq!(root_separation(3), rat(-1, 2));
        assert_eq!(root_separation(5), rat(-1, 4));
    }

    #[test]
    fn reflect_swaps_flags() {
        let iv = LogInterval::half_open_lo(rat_int(-3), rat_int(0)); // [-3, 0)
        let r = iv.reflect(); // (0, 3]
        assert_eq!(r, LogInterval::half_open_hi(rat_int(0), rat_int(3)));
        assert_eq!(r.reflect(), iv);
    }

    #[test]
    fn point_and_empty() {
        let pt = LogInterval::point(rat_int(2));
        assert!(pt.contains(&rat_int(2)));
        assert!(!pt.strictly_contains(&rat_int(2)));
        assert_eq!(pt.length(), Some(Rat::zero()));
        let e = LogInterval::empty();
        assert!(e.is_empty());
        assert!(!e.contains(&Rat::zero()));
    }

    #[test]
    fn intersect_flag_cases() {
        let a = LogInterval::open(rat_int(-3), rat_int(0));
        let b = LogInterval::half_open_hi(rat_int(-5), rat_int(-3));
        assert!(a.intersect(&b).is_empty());
        let c = LogInterval::closed(rat_int(-4), rat_int(-3));
        let d = LogInterval::closed(rat_int(-3), rat_int(1));
        assert_eq!(c.intersect(&d), LogInterval::point(rat_int(-3)));
    }

    #[test]
    fn unbounded_clamps() {
        let iv = LogInterval::unbounded_lo(Endpoint::closed(rat_int(0)));
        let cut = iv.clamp_above(&rat(-3, 2));
        assert!(cut.contains(&rat_int(-2)));
        assert!(!cut.contains(&rat(-3, 2)));
        assert_eq!(cut.length(), None);
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn logmag_mul_commutes(a in arb_rat(), b in arb_rat()) {
            let (x, y) = (LogMag::finite(a), LogMag::finite(b));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.umax(&y), y.umax(&x));
        }

        #[test]
        fn translate_preserves_length(lo in arb_rat(), len in arb_rat(), q in arb_rat()) {
            let hi = &lo + len.abs();
            let iv = LogInterval::closed(lo, hi);
            prop_assert_eq!(iv.translate(&q).length(), iv.length());
        }

        #[test]
        fn reflect_is_involutive(lo in arb_rat(), len in arb_rat()) {
            let hi = &lo + len.abs();
            let iv = LogInterval::half_open_hi(lo, hi);
            prop_assert_eq!(iv.reflect().reflect(), iv.clone());
            prop_assert_eq!(iv.reflect().length(), iv.length());
        }

        #[test]
        fn intersect_is_contained(a in arb_rat(), b in arb_rat(), c in arb_rat(), d in arb_rat(), x in arb_rat()) {
            let i1 = LogInterval::closed(a.clone().min(b.clone()), a.max(b));
            let i2 = LogInterval::open(c.clone().min(d.clone()), c.max(d));
            let cap = i1.intersect(&i2);
            if cap.contains(&x) {
                prop_assert!(i1.contains(&x) && i2.contains(&x));
            }
        }
    }
}
