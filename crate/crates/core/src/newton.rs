//! Newton data of a Laurent series on an annulus.
//!
//! A series `f = sum a_i T^i` is represented by the map `i -> log_p |a_i|`
//! over its finite support. Its seminorm at the skeleton point of radius
//! `p^lambda` is the tropical evaluation
//!
//!   eval(f, lambda) = max_i ( c_i + i * lambda ),
//!
//! a convex piecewise-affine function of lambda. A degree is *dominant*
//! on an interval when its affine form strictly exceeds every other on
//! the whole interval; at open or unbounded endpoints strictness relaxes
//! to the limit (two distinct degrees give distinct affine forms, so a
//! non-strict limit at an excluded endpoint still means strict inequality
//! inside). Dominance at every point of the interval is exactly
//! invertibility of `f` on the annulus.

use crate::valnum::{rat_int, Endpoint, LogInterval, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NewtonError {
    #[error("no degree dominates on the whole interval")]
    NotInvertible,
    #[error("dominant degree is zero, the induced skeleton map is constant")]
    ZeroDegree,
}

/// Finite, non-empty support map `degree -> log_p |coefficient|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonData {
    terms: BTreeMap<i64, Rat>,
}

/// Invertible normal form `a * T^degree * (1 + u)` in the log scale:
/// `u` collects the non-dominant part re-indexed relative to the
/// dominant degree, or is absent for a monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub degree: i64,
    pub coeff_mag: Rat,
    pub remainder: Option<NewtonData>,
}

impl NewtonData {
    /// Panics on an empty support; the zero series has no Newton data.
    pub fn new(terms: BTreeMap<i64, Rat>) -> Self {
        assert!(!terms.is_empty(), "Newton data requires non-empty support");
        NewtonData { terms }
    }

    pub fn from_pairs(pairs: &[(i64, Rat)]) -> Self {
        NewtonData::new(pairs.iter().cloned().collect())
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rat> {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    /// Tropical evaluation: the exact seminorm exponent at radius `p^lambda`.
    pub fn eval_at(&self, lambda: &Rat) -> Rat {
        self.terms
            .iter()
            .map(|(i, c)| c + rat_int(*i) * lambda)
            .max()
            .expect("non-empty support")
    }

    /// The set of degrees attaining the maximum at `lambda`.
    pub fn argmax_at(&self, lambda: &Rat) -> Vec<i64> {
        let m = self.eval_at(lambda);
        self.terms
            .iter()
            .filter(|(i, c)| *c + rat_int(**i) * lambda == m)
            .map(|(i, _)| *i)
            .collect()
    }

    /// The unique degree strictly dominating every other on `interval`,
    /// if one exists. Interval emptiness gives `None`.
    pub fn dominant_degree(&self, interval: &LogInterval) -> Option<i64> {
        if interval.is_empty() {
            return None;
        }
        let mut found = None;
        for &i in self.terms.keys() {
            if self.dominates(i, interval) {
                debug_assert!(found.is_none(), "two strictly dominant degrees");
                found = Some(i);
                if !cfg!(debug_assertions) {
                    break;
                }
            }
        }
        found
    }

    fn dominates(&self, i0: i64, interval: &LogInterval) -> bool {
        let c0 = &self.terms[&i0];
        self.terms.iter().all(|(&j, cj)| {
            j == i0 || affine_positive_on(&(c0 - cj), i0 - j, interval)
        })
    }

    pub fn is_invertible(&self, interval: &LogInterval) -> bool {
        self.dominant_degree(interval).is_some()
    }

    /// Invertible with dominant degree of maximal absolute value one,
    /// i.e. the induced map on the skeleton is injective.
    pub fn is_coordinate(&self, interval: &LogInterval) -> bool {
        matches!(self.dominant_degree(interval), Some(1) | Some(-1))
    }

    /// Dominant degree as a representative of the class it induces.
    pub fn degree_class(&self, interval: &LogInterval) -> Result<i64, NewtonError> {
        self.dominant_degree(interval).ok_or(NewtonError::NotInvertible)
    }

    /// Split off the dominant monomial: `f = a T^d (1 + u)` with every
    /// term of `u` of negative magnitude throughout the interval.
    pub fn normalize(&self, interval: &LogInterval) -> Result<NormalForm, NewtonError> {
        let degree = self.degree_class(interval)?;
        let coeff_mag = self.terms[&degree].clone();
        let rest: BTreeMap<i64, Rat> = self
            .terms
            .iter()
            .filter(|(&i, _)| i != degree)
            .map(|(&i, c)| (i - degree, c - &coeff_mag))
            .collect();
        let remainder = if rest.is_empty() { None } else { Some(NewtonData::new(rest)) };
        Ok(NormalForm { degree, coeff_mag, remainder })
    }

    /// Image of the skeleton interval under the invertible map induced by
    /// `f`: `lambda -> coeff_mag + degree * lambda`, together with the
    /// covering degree `|degree|` of the induced map on annuli.
    pub fn image_interval(&self, interval: &LogInterval) -> Result<(LogInterval, u64), NewtonError> {
        let nf = self.normalize(interval)?;
        if nf.degree == 0 {
            return Err(NewtonError::ZeroDegree);
        }
        let map = |e: &Endpoint| match e {
            Endpoint::Unbounded => Endpoint::Unbounded,
            Endpoint::At { value, closed } => Endpoint::At {
                value: &nf.coeff_mag + rat_int(nf.degree) * value,
                closed: *closed,
            },
        };
        let (a, b) = (map(interval.lo()), map(interval.hi()));
        let image = if nf.degree > 0 {
            LogInterval::new(a, b)
        } else {
            LogInterval::new(b, a)
        }
        .expect("affine image of ordered endpoints");
        Ok((image, nf.degree.unsigned_abs()))
    }
}

impl NormalForm {
    /// Undo the normalization; test hook for the round-trip property.
    pub fn recombine(&self) -> NewtonData {
        let mut terms = BTreeMap::new();
        terms.insert(self.degree, self.coeff_mag.clone());
        if let Some(u) = &self.remainder {
            for (j, c) in u.terms() {
                terms.insert(self.degree + j, c + &self.coeff_mag);
            }
        }
        NewtonData::new(terms)
    }
}

/// Is the affine form `b + s*lambda` strictly positive on the interval?
/// Strict at closed endpoints, non-strict in the limit at open ones; at
/// an unbounded end only the slope sign matters. The form is never
/// identically zero here since callers pass distinct degrees (s != 0) or
/// check b directly.
fn affine_positive_on(b: &Rat, s: i64, interval: &LogInterval) -> bool {
    debug_assert!(!interval.is_empty());
    let at = |v: &Rat| b + rat_int(s) * v;
    let lo_ok = match interval.lo() {
        Endpoint::Unbounded => s < 0 || (s == 0 && b > &Rat::zero()),
        Endpoint::At { value, closed: true } => at(value) > Rat::zero(),
        Endpoint::At { value, closed: false } => at(value) >= Rat::zero(),
    };
    let hi_ok = match interval.hi() {
        Endpoint::Unbounded => s > 0 || (s == 0 && b > &Rat::zero()),
        Endpoint::At { value, closed: true } => at(value) > Rat::zero(),
        Endpoint::At { value, closed: false } => at(value) >= Rat::zero(),
    };
    // Both-limits-zero would force the form to vanish identically, which
    // distinct degrees exclude; the conjunction is exact.
    lo_ok && hi_ok && !(s == 0 && b.is_zero())
}

/// The exact locus `{ lambda in interval : eval(u, lambda) < bound }`,
/// for `u` a remainder whose evaluation is convex: the locus is a single
/// (possibly empty) subinterval cut out by one open half-line per term.
pub fn sub_level_locus(u: &NewtonData, interval: &LogInterval, bound: &Rat) -> LogInterval {
    let mut locus = interval.clone();
    for (&j, c) in u.terms() {
        if locus.is_empty() {
            return LogInterval::empty();
        }
        if j == 0 {
            if c >= bound {
                return LogInterval::empty();
            }
            continue;
        }
        let cut = (bound - c) / rat_int(j);
        locus = if j > 0 { locus.clamp_above(&cut) } else { locus.clamp_below(&cut) };
    }
    locus
}
