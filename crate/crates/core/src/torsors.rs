//! Degree-n torsor classes on annuli and their splitting behaviour.
//!
//! A class carries exact norm data (a Newton map) and optionally a
//! coefficient-level representative as a quotient of Laurent functions.
//! Tame classes — dominant degree prime to p — are governed entirely by
//! the degree; wild ones (degree divisible by p) require the residue
//! descent loop, which decides splitting circle by circle.
//!
//! Conventions: radii live on the log_p scale, `tau = -p/(p-1)` is the
//! wild splitting threshold and `tau1 = -1/(p-1)` the root separation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::annuli::Annulus;
use crate::cochains::{eval_surjective, CochainError, SemiGraph};
use crate::newton::{sub_level_locus, NewtonData};
use crate::points::fiber_count;
use crate::residues::{ExtScalar, FpLaurent, FuncRep, LaurentExt, ResidueError};
use crate::valnum::{rat, rat_int, Endpoint, LogInterval, LogMag, Rat, Thresholds};

pub const DEFAULT_MAX_ITER: u32 = 24;
pub const DEFAULT_I_MAX: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TorsorError {
    #[error("representative is not invertible on the annulus")]
    NotInvertible,
    #[error("operation needs a coefficient-level representative, class has norm data only")]
    NormOnlyRepresentative,
    #[error("magnitude {0} is not interior to the annulus")]
    OffAnnulus(Rat),
    #[error("no nonzero-cochain class exists over edge {0}")]
    BridgeEdge(String),
    #[error("no class with nonzero cochain supplied for edge {0}")]
    MissingEdgeClass(String),
    #[error(transparent)]
    Graph(#[from] CochainError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    /// |u| sits exactly on the wild threshold p^tau.
    WildBoundary,
    /// residue descent needs an integer radius to reduce at.
    NonIntegralRadius,
    /// descent still above the threshold when the iteration cap hit.
    IterationCap,
}

impl std::fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            UnknownReason::WildBoundary => "wild-boundary",
            UnknownReason::NonIntegralRadius => "non-integral-radius",
            UnknownReason::IterationCap => "iteration-cap",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Split,
    NotSplit,
    Unknown(UnknownReason),
}

/// Non-p-th-power residue certifying NotSplit at one circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueCert {
    pub lambda: Rat,
    /// log-magnitude of the torsor remainder when the residue was taken.
    pub level: Rat,
    pub residue: FpLaurent,
    /// a residue degree not divisible by p.
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// dominant degree of the class is prime to p.
    Degree { degree: i64 },
    Residue(ResidueCert),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictReport {
    pub verdict: Verdict,
    /// number of residue-root lifts performed.
    pub iterations: u32,
    pub certificate: Option<Certificate>,
}

// ---------------------------------------------------------------------
// classes

/// A degree-n torsor class over an annulus: exact norm data plus an
/// optional coefficient representative consistent with it.
#[derive(Clone, Debug)]
pub struct TorsorClass {
    n: u64,
    rep: NewtonData,
    coeff: Option<FuncRep>,
    annulus: Annulus,
    dominant: i64,
}

impl TorsorClass {
    /// Norm-only class. The representative must be invertible on the
    /// skeleton interval.
    pub fn from_newton(n: u64, rep: NewtonData, annulus: Annulus) -> Result<Self, TorsorError> {
        assert!(n >= 2, "torsor degree must be at least 2");
        let dominant = rep
            .dominant_degree(annulus.skeleton_interval())
            .ok_or(TorsorError::NotInvertible)?;
        Ok(TorsorClass { n, rep, coeff: None, annulus, dominant })
    }

    /// Coefficient-level class represented by a Laurent function.
    pub fn from_laurent(n: u64, g: LaurentExt, annulus: Annulus) -> Result<Self, TorsorError> {
        let rep = g.to_newton().ok_or(TorsorError::NotInvertible)?;
        let one = LaurentExt::from_rat_coeffs(g.p(), vec![(0, Rat::one())]);
        let coeff = FuncRep::new(g, one).expect("nonzero denominator");
        Self::from_parts(n, rep, coeff, annulus)
    }

    /// Class with explicit quotient representative; `rep` must be the
    /// norm data of `coeff` on the annulus (caller's contract).
    pub fn from_parts(n: u64, rep: NewtonData, coeff: FuncRep, annulus: Annulus) -> Result<Self, TorsorError> {
        assert!(n >= 2, "torsor degree must be at least 2");
        if coeff.is_num_zero() {
            return Err(TorsorError::NotInvertible);
        }
        let dominant = rep
            .dominant_degree(annulus.skeleton_interval())
            .ok_or(TorsorError::NotInvertible)?;
        Ok(TorsorClass { n, rep, coeff: Some(coeff), annulus, dominant })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rep(&self) -> &NewtonData {
        &self.rep
    }

    pub fn coeff(&self) -> Option<&FuncRep> {
        self.coeff.as_ref()
    }

    pub fn annulus(&self) -> &Annulus {
        &self.annulus
    }

    pub fn interval(&self) -> &LogInterval {
        self.annulus.skeleton_interval()
    }

    pub fn dominant_degree(&self) -> i64 {
        self.dominant
    }

    /// Degree class mod n, signed by the annulus orientation.
    pub fn cochain_value(&self) -> i64 {
        (self.dominant * i64::from(self.annulus.orientation())).rem_euclid(self.n as i64)
    }

    fn assert_mu_p(&self, th: &Thresholds) {
        assert_eq!(self.n, th.p, "operation is specific to mu_p classes");
    }

    /// Exact locus of radii where a trivial-cochain class splits wildly
    /// outright: remainder magnitude below the threshold. Nonzero cochain
    /// means an empty locus.
    pub fn split_locus(&self, th: &Thresholds) -> LogInterval {
        self.assert_mu_p(th);
        if self.dominant.rem_euclid(th.p as i64) != 0 {
            return LogInterval::empty();
        }
        let nf = self.rep.normalize(self.interval()).expect("class invariant");
        match nf.remainder {
            None => self.interval().clone(),
            Some(u) => sub_level_locus(&u, self.interval(), &th.tau),
        }
    }
}

// ---------------------------------------------------------------------
// residue descent

enum EngineResult {
    Split,
    NotSplit(ResidueCert),
    Stalled(UnknownReason),
    /// truncated data cannot see below the tail floor.
    BelowFloor,
}

struct EngineOutcome {
    result: EngineResult,
    iterations: u32,
}

/// Decide splitting of `1 + num/den` at the circle log|T| = lambda by
/// repeatedly dividing out lifted p-th roots of the residue. `floor`
/// (relative to |den|) marks the magnitude below which `num` is not
/// trusted; descent stops rather than conclude past it.
fn residue_descent(
    mut num: LaurentExt,
    mut den: LaurentExt,
    lambda: &Rat,
    max_iter: u32,
    floor: Option<&Rat>,
    th: &Thresholds,
) -> EngineOutcome {
    let p = th.p;
    let one = LaurentExt::from_rat_coeffs(p, vec![(0, Rat::one())]);
    let mut prev_level: Option<Rat> = None;
    let mut iterations = 0;
    loop {
        if num.is_zero() {
            // remainder vanished exactly; only the untrusted tail is left
            let result = match floor {
                Some(f) if f >= &th.tau => EngineResult::BelowFloor,
                _ => EngineResult::Split,
            };
            return EngineOutcome { result, iterations };
        }
        let q = FuncRep::new(num.clone(), den.clone()).expect("nonzero denominator");
        let level = match q.mag_at(lambda) {
            LogMag::Finite(l) => l,
            LogMag::NegInf => unreachable!("nonzero numerator"),
        };
        debug_assert!(level.is_negative(), "dominance leaves a sub-unit remainder");
        if let Some(prev) = &prev_level {
            debug_assert!(&level < prev, "descent level must strictly decrease");
        }
        if let Some(f) = floor {
            if &level <= f {
                return EngineOutcome { result: EngineResult::BelowFloor, iterations };
            }
        }
        if level < th.tau {
            return EngineOutcome { result: EngineResult::Split, iterations };
        }
        if level == th.tau {
            return EngineOutcome { result: EngineResult::Stalled(UnknownReason::WildBoundary), iterations };
        }
        if !lambda.is_integer() {
            return EngineOutcome { result: EngineResult::Stalled(UnknownReason::NonIntegralRadius), iterations };
        }
        let ubar = match q.residue_at(lambda) {
            Ok(r) => r,
            Err(ResidueError::DenominatorResidueZero) => {
                unreachable!("denominator stays residue-monomial along the descent")
            }
            Err(e) => unreachable!("residue at a checked integer radius: {e}"),
        };
        let Some(wbar) = ubar.pth_root() else {
            let degree = ubar
                .coeffs()
                .keys()
                .copied()
                .find(|d| d.rem_euclid(p as i64) != 0)
                .expect("non-p-th-power residue has a degree prime to p");
            let cert = ResidueCert { lambda: lambda.clone(), level, residue: ubar, degree };
            return EngineOutcome { result: EngineResult::NotSplit(cert), iterations };
        };
        if iterations >= max_iter {
            return EngineOutcome { result: EngineResult::Stalled(UnknownReason::IterationCap), iterations };
        }
        // lift the root with every term pinned at magnitude level/p
        let lift = LaurentExt::from_coeffs(
            p,
            wbar.coeffs()
                .iter()
                .map(|(&j, &c)| {
                    let exp = rat_int(j) * lambda - &level / rat_int(p as i64);
                    (j, ExtScalar::from_terms(p, vec![(rat_int(c as i64), exp)]))
                })
                .collect(),
        );
        let unit = one.add(&lift).pow(p as u32);
        num = num.sub(&den.mul(&unit.sub(&one)));
        den = den.mul(&unit);
        prev_level = Some(level);
        iterations += 1;
    }
}

/// Fold a quotient representative into a single Laurent function with the
/// same splitting behaviour: num/den and num * den^{p-1} differ by the
/// p-th power den^p.
fn fold_quotient(coeff: &FuncRep, p: u64) -> LaurentExt {
    let den = coeff.den();
    if den.support() == [0] && den.coeff(0).is_single_term() && den.coeff(0) == ExtScalar::one(p) {
        return coeff.num().clone();
    }
    coeff.num().mul(&den.pow(p as u32 - 1))
}

impl TorsorClass {
    /// Splitting verdict at one circle. Sound in both directions; Unknown
    /// carries the reason the procedure cannot decide.
    pub fn split_verdict_at(&self, lambda: &Rat, max_iter: u32, th: &Thresholds) -> Result<Verdict, TorsorError> {
        Ok(self.split_verdict_report(lambda, max_iter, th)?.verdict)
    }

    pub fn split_verdict_report(
        &self,
        lambda: &Rat,
        max_iter: u32,
        th: &Thresholds,
    ) -> Result<VerdictReport, TorsorError> {
        self.assert_mu_p(th);
        if !self.interval().contains(lambda) {
            return Err(TorsorError::OffAnnulus(lambda.clone()));
        }
        if self.dominant.rem_euclid(th.p as i64) != 0 {
            return Ok(VerdictReport {
                verdict: Verdict::NotSplit,
                iterations: 0,
                certificate: Some(Certificate::Degree { degree: self.dominant }),
            });
        }
        let coeff = self.coeff.as_ref().ok_or(TorsorError::NormOnlyRepresentative)?;
        let h = fold_quotient(coeff, th.p);
        let nd = h.to_newton().expect("nonzero representative");
        let i0 = nd.dominant_degree(self.interval()).ok_or(TorsorError::NotInvertible)?;
        let pivot = LaurentExt::monomial(h.p(), i0, h.coeff(i0));
        let num = h.sub(&pivot);
        let outcome = residue_descent(num, pivot, lambda, max_iter, None, th);
        let (verdict, certificate) = match outcome.result {
            EngineResult::Split => (Verdict::Split, None),
            EngineResult::NotSplit(cert) => (Verdict::NotSplit, Some(Certificate::Residue(cert))),
            EngineResult::Stalled(reason) => (Verdict::Unknown(reason), None),
            EngineResult::BelowFloor => unreachable!("no floor in direct verdicts"),
        };
        Ok(VerdictReport { verdict, iterations: outcome.iterations, certificate })
    }
}

// ---------------------------------------------------------------------
// recentering

/// Taylor data of a Laurent function around a rigid point alpha: exact
/// coefficients A_0..A_{i_max} of powers of t = T - alpha, plus the data
/// bounding every discarded tail term.
#[derive(Clone, Debug)]
pub struct RecenterData {
    pub coeffs: Vec<ExtScalar>,
    /// log|alpha|.
    pub center_mag: Rat,
    /// sup-magnitude of the function on the circle log|T| = center_mag.
    pub sup_mag: Rat,
    pub i_max: u32,
}

impl RecenterData {
    /// Upper bound for the magnitude of any tail term (index > i_max) on
    /// the circle log|t| = s, valid for s <= center_mag.
    pub fn tail_mag_at(&self, s: &Rat) -> Rat {
        &self.sup_mag + rat_int(i64::from(self.i_max) + 1) * (s - &self.center_mag)
    }
}

fn binom_rat(k: i64, i: u32) -> Rat {
    let mut num = BigInt::one();
    for j in 0..i64::from(i) {
        num *= BigInt::from(k - j);
    }
    let mut den = BigInt::one();
    for j in 1..=i64::from(i) {
        den *= BigInt::from(j);
    }
    Rat::new(num, den)
}

/// Exact recentering: A_i = sum_k a_k C(k,i) alpha^{k-i}, generalized
/// binomials making negative degrees exact finite sums. The center must
/// be a single-term scalar so that negative powers stay exact.
pub fn recenter(g: &LaurentExt, alpha: &ExtScalar, i_max: u32) -> RecenterData {
    assert!(alpha.is_single_term(), "recentering needs a single-term center");
    let center_mag = match alpha.mag() {
        LogMag::Finite(m) => m,
        LogMag::NegInf => unreachable!("single-term scalar is nonzero"),
    };
    let nd = g.to_newton().expect("recentering a nonzero function");
    let sup_mag = nd.eval_at(&center_mag);
    let mut coeffs = Vec::with_capacity(i_max as usize + 1);
    for i in 0..=i_max {
        let mut acc = ExtScalar::zero(g.p());
        for (&k, a_k) in g.coeffs() {
            if k >= 0 && (k as u32) < i {
                continue; // C(k, i) = 0
            }
            let b = binom_rat(k, i);
            if b.is_zero() {
                continue;
            }
            let shifted = alpha.pow_int(k - i64::from(i)).expect("single-term center");
            acc = acc.add(&a_k.mul_rat(&b).mul(&shifted));
        }
        coeffs.push(acc);
    }
    RecenterData { coeffs, center_mag, sup_mag, i_max }
}

// ---------------------------------------------------------------------
// splitting radius at a rigid point

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadiusBound {
    Exact(Rat),
    Bounds { lower: Rat, upper: Rat },
}

impl RadiusBound {
    pub fn lower(&self) -> &Rat {
        match self {
            RadiusBound::Exact(r) => r,
            RadiusBound::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &Rat {
        match self {
            RadiusBound::Exact(r) => r,
            RadiusBound::Bounds { upper, .. } => upper,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    Split,
    NotSplit,
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidProbe {
    pub radius: Rat,
    pub outcome: ProbeOutcome,
}

impl TorsorClass {
    /// Splitting radius of the class around the rigid point T = alpha.
    /// Tame classes are exact at center_mag + tau. Wild ones recenter and
    /// combine a proved lower bound with integer-radius probes; when the
    /// two sides meet the radius is exact.
    pub fn split_radius_rigid(
        &self,
        alpha: &ExtScalar,
        i_max: u32,
        max_iter: u32,
        th: &Thresholds,
    ) -> Result<RadiusBound, TorsorError> {
        Ok(self.split_radius_rigid_report(alpha, i_max, max_iter, th)?.0)
    }

    pub fn split_radius_rigid_report(
        &self,
        alpha: &ExtScalar,
        i_max: u32,
        max_iter: u32,
        th: &Thresholds,
    ) -> Result<(RadiusBound, Vec<RigidProbe>), TorsorError> {
        self.assert_mu_p(th);
        assert!(alpha.is_single_term(), "rigid center must be a single-term scalar");
        let m = match alpha.mag() {
            LogMag::Finite(m) => m,
            LogMag::NegInf => unreachable!("single-term scalar is nonzero"),
        };
        if !self.interval().strictly_contains(&m) {
            return Err(TorsorError::OffAnnulus(m));
        }
        let p = th.p;
        if self.dominant.rem_euclid(p as i64) != 0 {
            return Ok((RadiusBound::Exact(&m + &th.tau), Vec::new()));
        }
        let coeff = self.coeff.as_ref().ok_or(TorsorError::NormOnlyRepresentative)?;
        // fold to one Laurent function and strip the dominant monomial's
        // p-th-power degree so the dominant degree becomes zero
        let h = fold_quotient(coeff, p);
        let nd = h.to_newton().expect("nonzero representative");
        let i0 = nd.dominant_degree(self.interval()).ok_or(TorsorError::NotInvertible)?;
        debug_assert_eq!(i0.rem_euclid(p as i64), 0, "folding preserves the degree class");
        let shifted = h.mul(&LaurentExt::monomial(p, -i0, ExtScalar::one(p)));
        let support = shifted.support();
        if support == [0] {
            // monomial: trivial torsor after the p-th root, splits below m
            return Ok((RadiusBound::Exact(m), Vec::new()));
        }
        if support.iter().all(|&k| k == 0 || k == 1) {
            // affine case is exact: |A_1/A_0| t stays below the threshold
            // precisely for log|t| < mag A_0 - mag A_1 + tau
            let a0 = shifted.coeff(0).add(&shifted.coeff(1).mul(alpha));
            let a1 = shifted.coeff(1);
            let mag0 = a0.mag().as_finite().expect("dominant at the center").clone();
            let mag1 = a1.mag().as_finite().expect("affine term present").clone();
            let r = (mag0 - mag1 + &th.tau).min(m);
            return Ok((RadiusBound::Exact(r), Vec::new()));
        }
        let rc = recenter(&shifted, alpha, i_max);
        let c0 = rc.coeffs[0].mag().as_finite().expect("invertible at the center").clone();
        debug_assert_eq!(c0, rc.sup_mag, "dominant degree zero evaluates exactly at the center");
        // proved lower bound: the linear Taylor term loses a full factor
        // of |alpha| (derivative kills the constant), quadratic and higher
        // lose at least i*(m - s) each
        let half_tau = &th.tau / rat_int(2);
        let linear_gain = rc.coeffs[1].mag().as_finite().map(|m1| &c0 - m1 + &th.tau);
        let mut lower = match linear_gain {
            Some(s1) => s1.min(&m + &half_tau),
            None => &m + &half_tau,
        };
        let mut upper = m.clone();
        let mut probes = Vec::new();
        for s in integers_in(&LogInterval::open(&m + &th.tau, m.clone())) {
            let floor = rc.tail_mag_at(&s) - &c0;
            let num = LaurentExt::from_coeffs(
                p,
                rc.coeffs.iter().enumerate().skip(1).map(|(i, a)| (i as i64, a.clone())).collect(),
            );
            let den = LaurentExt::monomial(p, 0, rc.coeffs[0].clone());
            let outcome = residue_descent(num, den, &s, max_iter, Some(&floor), th);
            let probe_outcome = match outcome.result {
                EngineResult::Split => {
                    if s > lower {
                        lower = s.clone();
                    }
                    ProbeOutcome::Split
                }
                EngineResult::NotSplit(_) => {
                    if s < upper {
                        upper = s.clone();
                    }
                    ProbeOutcome::NotSplit
                }
                EngineResult::Stalled(reason) => ProbeOutcome::Inconclusive(reason.to_string()),
                EngineResult::BelowFloor => ProbeOutcome::Inconclusive("truncation-floor".to_string()),
            };
            probes.push(RigidProbe { radius: s, outcome: probe_outcome });
        }
        debug_assert!(lower <= upper, "sound bounds cannot cross");
        let bound = if lower == upper {
            RadiusBound::Exact(lower)
        } else {
            RadiusBound::Bounds { lower, upper }
        };
        Ok((bound, probes))
    }
}

/// Splitting radius of the pullback of a height-h cyclic cover torsor
/// around a center of magnitude m: each level costs one root separation.
pub fn split_radius_power(th: &Thresholds, h: u32, m: &Rat) -> Rat {
    assert!(h >= 1, "height must be positive");
    m - rat_int(i64::from(h)) + &th.tau1
}

/// The trunk point where splitting switches, tau below the center.
pub fn threshold_point(
    a: &Annulus,
    m: &Rat,
    tag: impl Into<String>,
    th: &Thresholds,
) -> Result<crate::points::TrunkPoint, TorsorError> {
    if !a.skeleton_interval().strictly_contains(m) {
        return Err(TorsorError::OffAnnulus(m.clone()));
    }
    Ok(crate::points::TrunkPoint::new(m.clone(), m + &th.tau, tag).expect("tau is negative"))
}

// ---------------------------------------------------------------------
// witnesses

/// A coordinate class over an edge, its exact splitting threshold, and
/// fiber counts probing both sides of it.
#[derive(Clone, Debug)]
pub struct ThresholdWitness {
    pub edge: String,
    pub class: TorsorClass,
    pub threshold: Rat,
    /// (radius, fiber count) with count p strictly below the threshold
    /// and 1 at and above it.
    pub probes: Vec<(Rat, u64)>,
}

/// The coordinate class T over a non-bridge edge detects the threshold
/// m + tau exactly; fiber counts of z -> z^p corroborate it on both sides.
pub fn witness_threshold_solvable(
    g: &SemiGraph,
    edge: &str,
    a: &Annulus,
    m: &Rat,
    th: &Thresholds,
) -> Result<ThresholdWitness, TorsorError> {
    let tg = g.truncate();
    let usable = match tg.is_bridge(edge) {
        Ok(b) => !b && eval_surjective(g, th.p, edge)?,
        Err(CochainError::UnknownEdge(_)) => false,
        Err(e) => return Err(e.into()),
    };
    if !usable {
        return Err(TorsorError::BridgeEdge(edge.to_string()));
    }
    let p = th.p;
    let t_coordinate = LaurentExt::from_rat_coeffs(p, vec![(1, Rat::one())]);
    let class = TorsorClass::from_laurent(p, t_coordinate, a.clone())?;
    debug_assert_ne!(class.cochain_value(), 0);
    let bound = class.split_radius_rigid(&ExtScalar::from_terms(p, vec![(Rat::one(), -m)]), 1, 1, th)?;
    let threshold = m + &th.tau;
    assert_eq!(bound, RadiusBound::Exact(threshold.clone()), "coordinate class threshold is exact");
    let mut radii = Vec::new();
    let below = threshold.floor();
    radii.push(if below == threshold { &threshold - rat_int(1) } else { below });
    radii.push(threshold.clone());
    radii.extend(integers_in(&LogInterval::open(threshold.clone(), m.clone())));
    let probes = radii
        .into_iter()
        .map(|r| {
            let count = fiber_count(th, 1, m, &r).expect("probe radius below the center magnitude");
            (r, count)
        })
        .collect();
    Ok(ThresholdWitness { edge: edge.to_string(), class, threshold, probes })
}

/// Certificate that skeleton-level splitting at log-radius lambda reduces
/// to the standard cover after rescaling by tau - lambda: one point in
/// the fiber at the threshold, p strictly below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonWitness {
    pub lambda: Rat,
    pub rescale: Rat,
    pub count_at_threshold: u64,
    pub count_below: u64,
}

pub fn witness_skeleton_solvable(lambda: &Rat, th: &Thresholds) -> SkeletonWitness {
    let rescale = &th.tau - lambda;
    let zero = Rat::zero();
    let count_at_threshold = fiber_count(th, 1, &zero, &th.tau).expect("tau is negative");
    let below = &th.tau - rat(1, 2);
    let count_below = fiber_count(th, 1, &zero, &below).expect("below tau");
    SkeletonWitness { lambda: lambda.clone(), rescale, count_at_threshold, count_below }
}

// ---------------------------------------------------------------------
// membership near one end

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaEnd {
    Lo,
    Hi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaVerdict {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaReport {
    pub verdict: OmegaVerdict,
    pub locus: LogInterval,
    /// integer radius and prime-to-p dominant degree certifying No.
    pub witness: Option<(Rat, i64)>,
}

impl TorsorClass {
    /// Does the class split on some sub-annulus abutting the chosen end?
    /// Yes when the split locus reaches the end, No when a prime-to-p
    /// degree dominates all the way to it, Unknown otherwise.
    pub fn h1_omega_member(&self, omega: OmegaEnd, th: &Thresholds) -> OmegaReport {
        self.assert_mu_p(th);
        match omega {
            OmegaEnd::Hi => omega_member_hi(&self.rep, self.interval(), th),
            OmegaEnd::Lo => {
                // reflect T -> 1/T: degrees negate, the interval mirrors,
                // and the lo end becomes the hi end
                let reflected = NewtonData::from_pairs(
                    &self.rep.terms().iter().map(|(&i, c)| (-i, c.clone())).collect::<Vec<_>>(),
                );
                let report = omega_member_hi(&reflected, &self.interval().reflect(), th);
                OmegaReport {
                    verdict: report.verdict,
                    locus: report.locus.reflect(),
                    witness: report.witness.map(|(l, d)| (-l, -d)),
                }
            }
        }
    }
}

fn omega_member_hi(rep: &NewtonData, interval: &LogInterval, th: &Thresholds) -> OmegaReport {
    let p = th.p as i64;
    let Some(i0) = rep.dominant_degree(interval) else {
        // not invertible: treat as undecided rather than panic; classes
        // built through the constructors never reach this
        return OmegaReport { verdict: OmegaVerdict::Unknown, locus: LogInterval::empty(), witness: None };
    };
    if i0.rem_euclid(p) != 0 {
        return OmegaReport { verdict: OmegaVerdict::No, locus: LogInterval::empty(), witness: None };
    }
    let nf = rep.normalize(interval).expect("dominant degree exists");
    let Some(u) = nf.remainder else {
        return OmegaReport { verdict: OmegaVerdict::Yes, locus: interval.clone(), witness: None };
    };
    let locus = sub_level_locus(&u, interval, &th.tau);
    if locus_abuts_hi(&locus, interval) {
        return OmegaReport { verdict: OmegaVerdict::Yes, locus, witness: None };
    }
    // hunt for an integer radius from which one degree dominates all the
    // way to the end
    let candidates = no_witness_candidates(&locus, interval, &u);
    for lam in candidates {
        if !interval.contains(&lam) {
            continue;
        }
        if u.eval_at(&lam) <= th.tau {
            continue;
        }
        let piece = LogInterval::new(Endpoint::closed(lam.clone()), interval.hi().clone())
            .expect("candidate below the hi end");
        if let Some(j) = u.dominant_degree(&piece) {
            if j != 0 && j.rem_euclid(p) != 0 {
                return OmegaReport { verdict: OmegaVerdict::No, locus, witness: Some((lam, j)) };
            }
        }
    }
    OmegaReport { verdict: OmegaVerdict::Unknown, locus, witness: None }
}

/// The locus reaches the hi end with interior: a closed annulus end needs
/// the boundary circle itself, an open end only the approach to it.
fn locus_abuts_hi(locus: &LogInterval, interval: &LogInterval) -> bool {
    if locus.is_empty() || locus.length() == Some(Rat::zero()) {
        return false;
    }
    match (locus.hi(), interval.hi()) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => true,
        (Endpoint::At { value: a, closed: ca }, Endpoint::At { value: b, closed: cb }) => {
            a == b && (*ca || !*cb)
        }
        _ => false,
    }
}

/// Integer radii between the split locus and the hi end, scanned from the
/// end inward; an unbounded end gets a single radius beyond every kink.
fn no_witness_candidates(locus: &LogInterval, interval: &LogInterval, u: &NewtonData) -> Vec<Rat> {
    let lo_bound: Option<Rat> = match (locus.hi().value(), interval.lo().value()) {
        (Some(v), _) if !locus.is_empty() => Some(v.clone()),
        (_, Some(v)) => Some(v.clone()),
        _ => None,
    };
    match interval.hi().value() {
        Some(hi) => {
            let lo = match lo_bound {
                Some(l) => l,
                None => hi - rat_int(64),
            };
            let gap = LogInterval::new(
                Endpoint::closed(lo),
                Endpoint::At { value: hi.clone(), closed: interval.hi().is_closed() },
            )
            .map(|iv| integers_in(&iv))
            .unwrap_or_default();
            gap.into_iter().rev().take(256).collect()
        }
        None => {
            // beyond every breakpoint of the remainder one degree rules
            let degs: Vec<(i64, Rat)> = u.terms().iter().map(|(&j, c)| (j, c.clone())).collect();
            let mut bound = lo_bound.unwrap_or_else(Rat::zero);
            for (a, ca) in &degs {
                for (b, cb) in &degs {
                    if a != b {
                        let kink = (ca - cb) / rat_int(b - a);
                        if kink > bound {
                            bound = kink;
                        }
                    }
                }
            }
            vec![bound.floor() + rat_int(1)]
        }
    }
}

// ---------------------------------------------------------------------
// kernel tests

impl TorsorClass {
    /// Is the class in the kernel of the degree map on this annulus?
    /// The answer is read off the cochain value; as a cross-check the
    /// splitting radius at a rounded interior point is verified to sit
    /// exactly at the threshold (nonzero cochain) or strictly above it
    /// (zero cochain).
    pub fn kernel_test_annulus(&self, th: &Thresholds) -> bool {
        self.assert_mu_p(th);
        let in_kernel = self.cochain_value() == 0;
        if let Some(probe) = self.interior_probe() {
            if !in_kernel {
                let alpha = ExtScalar::from_terms(th.p, vec![(Rat::one(), -&probe)]);
                let bound = self
                    .split_radius_rigid(&alpha, 1, 1, th)
                    .expect("tame radius needs no coefficients");
                assert_eq!(bound, RadiusBound::Exact(&probe + &th.tau));
            } else {
                let lower = self.kernel_lower_bound(&probe, th);
                assert!(lower > &probe + &th.tau, "kernel class splits past the threshold");
            }
        }
        in_kernel
    }

    /// Midpoint rounded to the nearest half-integer, pulled back to the
    /// exact midpoint if rounding leaves the interior; None when the
    /// annulus has no usable interior point.
    fn interior_probe(&self) -> Option<Rat> {
        let mid = self.interval().midpoint().ok()?;
        let rounded = (&mid * rat_int(2) + rat(1, 2)).floor() / rat_int(2);
        if self.interval().strictly_contains(&rounded) {
            Some(rounded)
        } else if self.interval().strictly_contains(&mid) {
            Some(mid)
        } else {
            None
        }
    }

    /// Strict lower bound for the splitting radius of a trivial-cochain
    /// class around magnitude m, from coefficients when present and from
    /// norm data alone otherwise.
    fn kernel_lower_bound(&self, m: &Rat, th: &Thresholds) -> Rat {
        if self.coeff.is_some() {
            match self.split_radius_rigid(
                &ExtScalar::from_terms(th.p, vec![(Rat::one(), -m)]),
                DEFAULT_I_MAX,
                DEFAULT_MAX_ITER,
                th,
            ) {
                Ok(bound) => return bound.lower().clone(),
                Err(TorsorError::NormOnlyRepresentative) => {}
                Err(e) => panic!("interior probe cannot fail: {e}"),
            }
        }
        // norm-only: every recentered Taylor term of index i >= 1 is
        // bounded by E - i*(m - s) with E the normalized remainder level
        let nf = self.rep.normalize(self.interval()).expect("class invariant");
        match nf.remainder {
            None => m.clone(),
            Some(u) => {
                let e = u.eval_at(m);
                assert!(e.is_negative(), "interior dominance is strict");
                if e < th.tau {
                    m.clone()
                } else {
                    m + &th.tau - e
                }
            }
        }
    }
}

/// Kernel detection over the vicinal edges of a curve's reduction graph:
/// the candidate family pins each annular threshold, and the tested class
/// must strictly beat all of them. Bridges admit no nonzero-cochain
/// classes and are rejected.
pub fn kernel_test_curve(
    g: &SemiGraph,
    f: &BTreeMap<String, TorsorClass>,
    candidates: &[BTreeMap<String, TorsorClass>],
    th: &Thresholds,
) -> Result<bool, TorsorError> {
    let tg = g.truncate();
    for edge in tg.edges().keys() {
        if tg.is_bridge(edge)? {
            return Err(TorsorError::BridgeEdge(edge.clone()));
        }
        let fc = f.get(edge).ok_or_else(|| TorsorError::MissingEdgeClass(edge.clone()))?;
        if fc.cochain_value() != 0 {
            return Ok(false);
        }
    }
    for edge in tg.edges().keys() {
        let fc = &f[edge];
        let witness = candidates
            .iter()
            .filter_map(|c| c.get(edge))
            .find(|t| t.cochain_value() != 0)
            .ok_or_else(|| TorsorError::MissingEdgeClass(edge.clone()))?;
        debug_assert_ne!(witness.cochain_value(), 0);
        let Some(probe) = fc.interior_probe() else { continue };
        let threshold = &probe + &th.tau;
        let lower = fc.kernel_lower_bound(&probe, th);
        if lower <= threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Integers lying in a bounded interval, ascending.
fn integers_in(iv: &LogInterval) -> Vec<Rat> {
    if iv.is_empty() {
        return Vec::new();
    }
    let (Some(lo), Some(hi)) = (iv.lo().value(), iv.hi().value()) else {
        panic!("integer scan over an unbounded interval");
    };
    let mut n = lo.ceil();
    if &n == lo && !iv.lo().is_closed() {
        n += rat_int(1);
    }
    let mut end = hi.floor();
    if &end == hi && !iv.hi().is_closed() {
        end -= rat_int(1);
    }
    let mut out = Vec::new();
    while n <= end {
        debug_assert!(iv.contains(&n));
        out.push(n.clone());
        n += rat_int(1);
    }
    out
}
