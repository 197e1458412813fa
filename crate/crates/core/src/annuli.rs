//! Annuli in log coordinates and their isomorphism classes.
//!
//! An annulus `{ lo < log|T| < hi }` is recorded by its skeleton
//! interval; endpoint flags track whether a boundary circle belongs to
//! the annulus. Two annuli are isomorphic exactly when one interval is
//! a rational translate of the other or of its reflection (translation
//! is `T -> cT`, reflection is `T -> c/T`), so the isomorphism class is
//! the length together with the endpoint flags up to the reflection
//! swap. An orientation (a choice among the two ends) is stored because
//! degree classes and cochain values are only canonical once one is
//! fixed; isomorphism ignores it.

pub use crate::valnum::distance;
use crate::valnum::{IntervalError, LogInterval, Rat};

/// Length of the skeleton: a rational, or infinite when an end is unbounded.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AnnulusLength {
    Finite(Rat),
    Infinite,
}

impl std::fmt::Display for AnnulusLength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnnulusLength::Finite(l) => write!(f, "{l}"),
            AnnulusLength::Infinite => write!(f, "inf"),
        }
    }
}

/// Degree-n Kummer covering data attached to a pullback.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerMap {
    pub degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annulus {
    interval: LogInterval,
    orientation: i8,
}

impl Annulus {
    /// Wrap a nonempty interval as an annulus skeleton; orientation ±1.
    pub fn new(interval: LogInterval, orientation: i8) -> Option<Self> {
        assert!(orientation == 1 || orientation == -1, "orientation is a sign");
        if interval.is_empty() {
            None
        } else {
            Some(Annulus { interval, orientation })
        }
    }

    /// Positively oriented annulus (the common case).
    pub fn oriented(interval: LogInterval) -> Option<Self> {
        Self::new(interval, 1)
    }

    pub fn skeleton_interval(&self) -> &LogInterval {
        &self.interval
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn reversed(&self) -> Annulus {
        Annulus { interval: self.interval.clone(), orientation: -self.orientation }
    }

    pub fn length(&self) -> AnnulusLength {
        match self.interval.length() {
            Some(l) => AnnulusLength::Finite(l),
            None => AnnulusLength::Infinite,
        }
    }

    /// Midpoint of the skeleton; errors on unbounded annuli.
    pub fn midpoint(&self) -> Result<Rat, IntervalError> {
        self.interval.midpoint()
    }

    /// Translation and reflection are the only coordinate changes, so
    /// compare the interval against the other one and its reflection,
    /// translation-invariantly. Orientation is ignored.
    pub fn is_isomorphic(&self, other: &Annulus) -> bool {
        if self.length() != other.length() {
            return false;
        }
        same_up_to_translation(&self.interval, other.skeleton_interval())
            || same_up_to_translation(&self.interval, &other.skeleton_interval().reflect())
    }

    /// Pullback along the degree-n Kummer cover `z -> z^n`: the skeleton
    /// scales by 1/n, endpoint flags and orientation unchanged.
    pub fn kummer_pullback(&self, n: u64) -> (Annulus, KummerMap) {
        assert!(n >= 1, "cover degree must be positive");
        let interval = self.interval.scale(&Rat::new(1.into(), (n as i64).into()));
        (Annulus { interval, orientation: self.orientation }, KummerMap { degree: n })
    }
}

impl std::fmt::Display for Annulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.interval)
    }
}

fn same_up_to_translation(a: &LogInterval, b: &LogInterval) -> bool {
    use crate::valnum::Endpoint;
    match (a.lo(), b.lo(), a.hi(), b.hi()) {
        (Endpoint::Unbounded, Endpoint::Unbounded, Endpoint::Unbounded, Endpoint::Unbounded) => true,
        (Endpoint::Unbounded, Endpoint::Unbounded, Endpoint::At { closed: c1, .. }, Endpoint::At { closed: c2, .. }) => c1 == c2,
        (Endpoint::At { closed: c1, .. }, Endpoint::At { closed: c2, .. }, Endpoint::Unbounded, Endpoint::Unbounded) => c1 == c2,
        (
            Endpoint::At { closed: cl1, .. },
            Endpoint::At { closed: cl2, .. },
            Endpoint::At { closed: ch1, .. },
            Endpoint::At { closed: ch2, .. },
        ) => {
            // lengths already match, so translating lo onto lo aligns hi
            cl1 == cl2 && ch1 == ch2
        }
        _ => false,
    }
}
