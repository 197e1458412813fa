//! Exact-arithmetic toolkit for one-dimensional non-archimedean annuli.
//!
//! Everything is computed in the logarithmic scale: an absolute value
//! `|x| = p^s` is represented by its exponent `s` as an exact rational,
//! with `|p| = p^{-1}`. In this scale all quantities of interest
//! (seminorms of Laurent series on annuli, fiber counts of the wild
//! covering `z -> z^{p^h}`, splitting radii of mu_p torsors) are
//! piecewise-affine functions with rational breakpoints, so the entire
//! pipeline runs on `BigRational` and is reproducible bit for bit.

pub mod annuli;
pub mod cochains;
pub mod lengthlab;
pub mod newton;
pub mod points;
pub mod residues;
pub mod torsors;
pub mod valnum;

pub use valnum::{LogInterval, LogMag, Rat, Thresholds};
