//! Length detection and localization for annuli through mu_p torsor
//! behaviour.
//!
//! The two detectors answer strict threshold questions about the skeleton
//! length: `detect_gt_c` decides length > c and `detect_gt_2c` decides
//! length > 2c, both by exhibiting (or failing to exhibit) trivial-cochain
//! classes whose split loci sit where only a long enough annulus lets
//! them. Kummer pullbacks divide the length by prime-to-p degrees, so the
//! single threshold c localizes the length to a window of width at most
//! 2c.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::annuli::{Annulus, AnnulusLength};
use crate::residues::{ExtScalar, LaurentExt};
use crate::torsors::{OmegaEnd, OmegaVerdict, TorsorClass};
use crate::valnum::{rat, rat_int, LogInterval, Rat, Thresholds};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LengthError {
    #[error("threshold profile is not monotone: degree {passed} passed after degree {failed} failed")]
    NonMonotoneProfile { passed: u32, failed: u32 },
}

// ---------------------------------------------------------------------
// detectors

/// One corroborating wild class: threshold placed at `mid`, split locus
/// reaching the lo end and stopping at `mid`.
#[derive(Clone, Debug)]
pub struct GtCSample {
    pub mid: Rat,
    pub split_locus: LogInterval,
    pub lo_member: OmegaVerdict,
}

#[derive(Clone, Debug)]
pub struct GtCReport {
    pub result: bool,
    /// radii more than c below the finite end; nonempty exactly when the
    /// length exceeds c.
    pub zone: LogInterval,
    pub samples: Vec<GtCSample>,
}

/// Shift (and reflect, if needed) the skeleton so its finite end sits at
/// radius 0 as the hi end. Fully unbounded skeletons return None.
fn normalize_to_hi_zero(interval: &LogInterval) -> Option<LogInterval> {
    let oriented = if interval.hi().value().is_some() {
        interval.clone()
    } else if interval.lo().value().is_some() {
        interval.reflect()
    } else {
        return None;
    };
    let hi = oriented.hi().value().expect("finite end is hi").clone();
    Some(oriented.translate(&-hi))
}

/// Is the skeleton length strictly greater than c = p/(p-1)?
pub fn detect_gt_c(a: &Annulus, th: &Thresholds) -> bool {
    detect_gt_c_report(a, th).result
}

pub fn detect_gt_c_report(a: &Annulus, th: &Thresholds) -> GtCReport {
    let Some(interval) = normalize_to_hi_zero(a.skeleton_interval()) else {
        // two unbounded ends: infinite length
        return GtCReport {
            result: true,
            zone: a.skeleton_interval().clone(),
            samples: Vec::new(),
        };
    };
    let zone = interval.clamp_above(&-&th.c);
    let result = !zone.is_empty();
    // corroborating family: 1 + bT with |bT| crossing the wild threshold
    // at mid splits on (lo, mid) and nowhere above
    let mut samples = Vec::new();
    let lo_eff = match interval.lo().value() {
        Some(lo) if lo.is_negative() => lo.clone().max(th.tau.clone()),
        Some(_) => Rat::zero(),
        None => th.tau.clone(),
    };
    if lo_eff.is_negative() {
        let mut mids = vec![
            &lo_eff / rat_int(2),
            &lo_eff / rat_int(4),
            &lo_eff * rat(3, 4),
        ];
        mids.sort();
        mids.dedup();
        for mid in mids {
            let b = ExtScalar::from_terms(th.p, vec![(Rat::one(), &mid - &th.tau)]);
            let g = LaurentExt::from_coeffs(th.p, vec![(0, ExtScalar::one(th.p)), (1, b)]);
            let annulus = Annulus::oriented(interval.clone()).expect("nonempty skeleton");
            let class = TorsorClass::from_laurent(th.p, g, annulus)
                .expect("threshold class is invertible up to the finite end");
            debug_assert_eq!(class.cochain_value(), 0);
            let split_locus = class.split_locus(th);
            debug_assert_eq!(split_locus, interval.clamp_above(&mid));
            let lo_member = class.h1_omega_member(OmegaEnd::Lo, th).verdict;
            debug_assert_eq!(lo_member, OmegaVerdict::Yes);
            // every sample threshold sits within c of the finite end, so
            // a nonempty zone is covered by each sample's locus
            debug_assert!(zone.intersect(&split_locus) == zone);
            samples.push(GtCSample { mid, split_locus, lo_member });
        }
    }
    GtCReport { result, zone, samples }
}

#[derive(Clone, Debug)]
pub struct Gt2cReport {
    pub result: bool,
    /// split locus of the extremal class, an island clear of both ends;
    /// nonempty exactly when the length exceeds 2c.
    pub island: LogInterval,
}

/// Is the skeleton length strictly greater than 2c? Decided by the
/// extremal trivial-cochain class 1 + T + p^{-lo} T^{-1} on the
/// normalized skeleton: its split locus (lo - tau, tau) is nonempty
/// precisely when lo < -2c.
pub fn detect_gt_2c(a: &Annulus, th: &Thresholds) -> bool {
    detect_gt_2c_report(a, th).result
}

pub fn detect_gt_2c_report(a: &Annulus, th: &Thresholds) -> Gt2cReport {
    let Some(interval) = normalize_to_hi_zero(a.skeleton_interval()) else {
        return Gt2cReport { result: true, island: a.skeleton_interval().clone() };
    };
    let island = match interval.lo().value() {
        Some(lo) => interval.clamp_above(&th.tau).clamp_below(&(lo - &th.tau)),
        // one unbounded end: 1 + T already splits on an interior island
        None => interval.clamp_above(&th.tau),
    };
    Gt2cReport { result: !island.is_empty(), island }
}

// ---------------------------------------------------------------------
// threshold profiles over Kummer pullbacks

/// For each degree N prime to p up to n_max: did the pulled-back annulus
/// still have length above c?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdProfile {
    pub n_max: u32,
    pub passed: BTreeSet<u32>,
    pub failed: BTreeSet<u32>,
}

impl ThresholdProfile {
    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.passed.iter().chain(self.failed.iter()).copied()
    }

    /// Smallest degree where the two profiles disagree.
    pub fn first_difference(&self, other: &ThresholdProfile) -> Option<u32> {
        debug_assert_eq!(self.n_max, other.n_max);
        self.degrees()
            .filter(|n| self.passed.contains(n) != other.passed.contains(n))
            .min()
    }
}

fn prime_to_p(th: &Thresholds, n_max: u32) -> impl Iterator<Item = u32> + '_ {
    (1..=n_max).filter(move |n| u64::from(*n) % th.p != 0)
}

/// Profile computed straight from the length: degree N passes iff
/// N*c < length, with an infinite length passing everything.
pub fn profile_direct(th: &Thresholds, length: &AnnulusLength, n_max: u32) -> ThresholdProfile {
    let mut passed = BTreeSet::new();
    let mut failed = BTreeSet::new();
    for n in prime_to_p(th, n_max) {
        let pass = match length {
            AnnulusLength::Infinite => true,
            AnnulusLength::Finite(l) => &(rat_int(i64::from(n)) * &th.c) < l,
        };
        if pass {
            passed.insert(n);
        } else {
            failed.insert(n);
        }
    }
    ThresholdProfile { n_max, passed, failed }
}

/// Profile computed through torsors: pull the annulus back along each
/// prime-to-p Kummer cover and run the c-detector on the result.
pub fn profile_from_torsors(th: &Thresholds, a: &Annulus, n_max: u32) -> ThresholdProfile {
    let mut passed = BTreeSet::new();
    let mut failed = BTreeSet::new();
    for n in prime_to_p(th, n_max) {
        let (pulled, map) = a.kummer_pullback(u64::from(n));
        debug_assert_eq!(map.degree, u64::from(n));
        if detect_gt_c(&pulled, th) {
            passed.insert(n);
        } else {
            failed.insert(n);
        }
    }
    ThresholdProfile { n_max, passed, failed }
}

// ---------------------------------------------------------------------
// localization

/// Window (lo, hi] known to contain the length; hi = None means the
/// profile never failed, so only the lower end is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localization {
    pub lo: Rat,
    pub hi: Option<Rat>,
    pub saturated: bool,
}

/// Turn a monotone profile into the window it pins down: the largest
/// passing degree bounds the length from below, the smallest failing one
/// from above.
pub fn localize(th: &Thresholds, profile: &ThresholdProfile) -> Result<Localization, LengthError> {
    if let (Some(&max_pass), Some(&min_fail)) = (profile.passed.iter().max(), profile.failed.iter().min()) {
        if max_pass > min_fail {
            return Err(LengthError::NonMonotoneProfile { passed: max_pass, failed: min_fail });
        }
    }
    let lo = match profile.passed.iter().max() {
        Some(&n) => rat_int(i64::from(n)) * &th.c,
        None => Rat::zero(),
    };
    let hi = profile.failed.iter().min().map(|&n| rat_int(i64::from(n)) * &th.c);
    let saturated = hi.is_none();
    Ok(Localization { lo, hi, saturated })
}

// ---------------------------------------------------------------------
// pair comparison

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub profiles_equal: bool,
    pub first_difference: Option<u32>,
    pub loc1: Localization,
    pub loc2: Localization,
    /// |l1 - l2| when both lengths are finite.
    pub delta: Option<Rat>,
    /// equal unsaturated profiles force |delta| < 2c; None when the
    /// guarantee does not apply.
    pub bound_2c_ok: Option<bool>,
    /// distance of each finite length to the positive multiples of p.
    pub d1: Option<Rat>,
    pub d2: Option<Rat>,
    pub findings: Vec<String>,
}

fn distance_to_p_multiples(l: &Rat, th: &Thresholds) -> Rat {
    let p = rat_int(th.p as i64);
    let q = l / &p;
    let mut best: Option<Rat> = None;
    for j in [q.floor(), q.ceil()] {
        let j = j.max(Rat::one());
        let d = (l - j * &p).abs();
        if best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
    }
    best.expect("two candidates checked")
}

/// Compare two lengths through their threshold profiles. Equal profiles
/// that are not saturated certify |delta| < 2c; the sharper bound c is
/// only a heuristic and the report flags when it fails.
pub fn pair_report(
    th: &Thresholds,
    l1: &AnnulusLength,
    l2: &AnnulusLength,
    n_max: u32,
) -> Result<PairReport, LengthError> {
    let p1 = profile_direct(th, l1, n_max);
    let p2 = profile_direct(th, l2, n_max);
    let loc1 = localize(th, &p1)?;
    let loc2 = localize(th, &p2)?;
    let profiles_equal = p1 == p2;
    let first_difference = p1.first_difference(&p2);
    let saturated = loc1.saturated || loc2.saturated;
    let delta = match (l1, l2) {
        (AnnulusLength::Finite(a), AnnulusLength::Finite(b)) => Some((a - b).abs()),
        _ => None,
    };
    let two_c = rat_int(2) * &th.c;
    let bound_2c_ok = match (&delta, profiles_equal && !saturated) {
        (Some(d), true) => Some(d < &two_c),
        _ => None,
    };
    let d1 = match l1 {
        AnnulusLength::Finite(l) => Some(distance_to_p_multiples(l, th)),
        AnnulusLength::Infinite => None,
    };
    let d2 = match l2 {
        AnnulusLength::Finite(l) => Some(distance_to_p_multiples(l, th)),
        AnnulusLength::Infinite => None,
    };
    let mut findings = Vec::new();
    if profiles_equal && !saturated {
        if let (Some(d), Some(d1v), Some(d2v)) = (&delta, &d1, &d2) {
            if d1v > &Rat::one() && d2v > &Rat::one() {
                let holds = d < &th.c;
                findings.push(format!(
                    "both lengths lie more than 1 from the positive multiples of {}; the informal narrow bound |delta| < c {} here (delta = {}, c = {})",
                    th.p,
                    if holds { "holds" } else { "fails" },
                    d,
                    th.c,
                ));
            }
        }
    }
    Ok(PairReport {
        profiles_equal,
        first_difference,
        loc1,
        loc2,
        delta,
        bound_2c_ok,
        d1,
        d2,
        findings,
    })
}
