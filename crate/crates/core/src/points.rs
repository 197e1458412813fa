// errors carry the exact offending rationals and the Err path is cold
#![allow(clippy::result_large_err)]

//! Points of the open unit disk trunk and the covering `z -> z^{p^h}`.
//!
//! A trunk point is a disk `D(z0, r)` with `r <= |z0|`, recorded in the
//! log scale as `(center_mag, radius)` plus an opaque center tag. The
//! covering `z -> z^p` acts on these points by an explicit piecewise
//! rule with a single breakpoint at `radius = center_mag + tau1`, and
//! the fiber cardinality over a point below the trunk is a power of p
//! determined by which of h+1 half-open zones the radius falls in:
//!
//!   count 1    for radius in [m + tau, m)
//!   count p^i  for radius in [m - i + tau, m - i + tau1),  1 <= i < h
//!   count p^h  for radius below m - h + tau1
//!
//! (tau = tau1 - 1 makes the zones tile the whole ray below m). The same
//! counts fall out of inverting `z -> z^p` one level at a time, with the
//! fiber multiplying by p exactly while the radius stays strictly below
//! the separation of the p conjugate centers; `fiber_count_recursive`
//! follows that route and serves as the independent check.

use crate::valnum::{rat, rat_int, Rat, Thresholds};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PointError {
    #[error("radius must stay below the center magnitude: radius {radius}, center {center_mag}")]
    InvalidPoint { center_mag: Rat, radius: Rat },
}

/// `D(z0, r)` with `log|z0| = center_mag`, `log r = radius`,
/// `radius <= center_mag`; equality is the retraction onto the trunk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrunkPoint {
    pub center_mag: Rat,
    pub radius: Rat,
    pub center_tag: String,
}

impl TrunkPoint {
    pub fn new(center_mag: Rat, radius: Rat, center_tag: impl Into<String>) -> Result<Self, PointError> {
        if radius > center_mag {
            return Err(PointError::InvalidPoint { center_mag, radius });
        }
        Ok(TrunkPoint { center_mag, radius, center_tag: center_tag.into() })
    }
}

/// Image of a strict trunk point under `z -> z^p`. The two branches
/// agree at the breakpoint `radius = center_mag + tau1`.
pub fn push_p(pt: &TrunkPoint, th: &Thresholds) -> Result<TrunkPoint, PointError> {
    if pt.radius >= pt.center_mag {
        return Err(PointError::InvalidPoint {
            center_mag: pt.center_mag.clone(),
            radius: pt.radius.clone(),
        });
    }
    let p = th.p as i64;
    let center_mag = rat_int(p) * &pt.center_mag;
    let radius = if pt.radius <= &pt.center_mag + &th.tau1 {
        &pt.radius - rat_int(1) + rat_int(p - 1) * &pt.center_mag
    } else {
        rat_int(p) * &pt.radius
    };
    Ok(TrunkPoint {
        center_mag,
        radius,
        center_tag: format!("{}^{}", pt.center_tag, th.p),
    })
}

/// Zone-table fiber count of `z -> z^{p^h}` over `(m, r)` with `r < m`.
pub fn fiber_count(th: &Thresholds, h: u32, m: &Rat, r: &Rat) -> Result<u64, PointError> {
    if r >= m {
        return Err(PointError::InvalidPoint { center_mag: m.clone(), radius: r.clone() });
    }
    if h == 0 {
        return Ok(1);
    }
    if *r >= m + &th.tau {
        return Ok(1);
    }
    for i in 1..h {
        // zone [m - i + tau, m - i + tau1); its upper bound is the lower
        // bound of the previous zone, so reaching iteration i already
        // excludes everything at or above m - i + tau1.
        if *r >= m - rat_int(i as i64) + &th.tau {
            return Ok(th.p.pow(i));
        }
    }
    Ok(th.p.pow(h))
}

/// Level-by-level fiber count, inverting one `z -> z^p` at a time.
/// Independent of the zone table: the count multiplies by p exactly when
/// the current radius sits strictly below current center magnitude + tau,
/// equivalently when the pulled-back radius separates the p conjugate
/// centers, and the radius pulls back through the inverse of `push_p`.
pub fn fiber_count_recursive(th: &Thresholds, h: u32, m: &Rat, r: &Rat) -> Result<u64, PointError> {
    if r >= m {
        return Err(PointError::InvalidPoint { center_mag: m.clone(), radius: r.clone() });
    }
    let p = th.p as i64;
    let mut count: u64 = 1;
    let mut m_cur = m.clone();
    let mut r_cur = r.clone();
    for _ in 0..h {
        let split_bound = &m_cur + &th.tau;
        if r_cur < split_bound {
            count *= th.p;
        }
        r_cur = if r_cur <= split_bound {
            &r_cur + rat_int(1) - rat(p - 1, p) * &m_cur
        } else {
            r_cur / rat_int(p)
        };
        m_cur /= rat_int(p);
        debug_assert!(r_cur < m_cur);
    }
    Ok(count)
}

/// One row of the fiber table for a radius below the trunk: the count
/// plus the conjugate-center separations at each level of the tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberRow {
    pub radius: Rat,
    pub count: u64,
    pub separations: Vec<Rat>,
}

/// Fiber table over a set of radii, rows sorted by radius descending.
/// Level j of the tower separates conjugates at `m / p^j + tau1`.
pub fn fiber_tree(th: &Thresholds, h: u32, m: &Rat, radii: &[Rat]) -> Result<Vec<FiberRow>, PointError> {
    let mut seps = Vec::with_capacity(h as usize);
    let mut scale = rat_int(1);
    for _ in 0..h {
        scale *= rat_int(th.p as i64);
        seps.push(m / &scale + &th.tau1);
    }
    let mut rows = Vec::with_capacity(radii.len());
    for r in radii {
        rows.push(FiberRow {
            radius: r.clone(),
            count: fiber_count(th, h, m, r)?,
            separations: seps.clone(),
        });
    }
    rows.sort_by(|a, b| b.radius.cmp(&a.radius));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn pt(m: i64, r_num: i64, r_den: i64) -> TrunkPoint {
        TrunkPoint::new(rat_int(m), rat(r_num, r_den), "z").unwrap()
    }

    #[test]
    fn push_examples_at_p2() {
        let th = Thresholds::new(2);
        let q = push_p(&pt(0, -2, 1), &th).unwrap();
        assert_eq!((q.center_mag.clone(), q.radius.clone()), (rat_int(0), rat_int(-3)));
        assert_eq!(q.center_tag, "z^2");
        let q = push_p(&pt(0, -1, 2), &th).unwrap();
        assert_eq!(q.radius, rat_int(-1));
        // breakpoint: both branches give the same image
        let q = push_p(&pt(0, -1, 1), &th).unwrap();
        assert_eq!(q.radius, rat_int(-2));
    }

    #[test]
    fn push_rejects_trunk_points() {
        let th = Thresholds::new(2);
        let on_trunk = TrunkPoint::new(Rat::zero(), Rat::zero(), "z").unwrap();
        assert!(push_p(&on_trunk, &th).is_err());
        assert!(TrunkPoint::new(rat_int(-1), rat_int(0), "z").is_err());
    }

    #[test]
    fn push_is_monotone_and_continuous_in_radius() {
        let th = Thresholds::new(3);
        let m = rat(1, 2);
        let mut prev: Option<Rat> = None;
        // quarter-step sweep across the breakpoint m + tau1
        for k in -40..1 {
            let r = &m + rat(k, 8);
            if r >= m {
                continue;
            }
            let q = push_p(&TrunkPoint::new(m.clone(), r, "z").unwrap(), &th).unwrap();
            if let Some(pr) = prev {
                assert!(pr <= q.radius);
            }
            prev = Some(q.radius);
        }
    }

    #[test]
    fn fiber_count_zone_examples() {
        let th = Thresholds::new(3);
        let m = rat_int(0);
        let table = [
            (rat_int(-1), 1u64),
            (rat(-3, 2), 1),
            (rat_int(-2), 3),
            (rat(-5, 2), 3),
            (rat_int(-3), 9),
        ];
        for (r, want) in table {
            assert_eq!(fiber_count(&th, 2, &m, &r).unwrap(), want, "r = {r}");
            assert_eq!(fiber_count_recursive(&th, 2, &m, &r).unwrap(), want, "r = {r}");
        }
    }

    #[test]
    fn fiber_count_boundary_is_single() {
        let th = Thresholds::new(2);
        let m = rat_int(0);
        assert_eq!(fiber_count_recursive(&th, 1, &m, &rat_int(-3)).unwrap(), 2);
        assert_eq!(fiber_count_recursive(&th, 1, &m, &rat_int(-2)).unwrap(), 1);
    }

    #[test]
    fn zones_tile_without_gaps() {
        // walk a fine grid; adjacent radii may only jump count by a factor p
        let th = Thresholds::new(5);
        let m = rat(3, 2);
        let mut prev: Option<u64> = None;
        for k in (1..200).rev() {
            let r = &m - rat(k, 8);
            let c = fiber_count(&th, 3, &m, &r).unwrap();
            if let Some(pc) = prev {
                assert!(c == pc || c * 5 == pc, "count jump at r = {r}");
            }
            prev = Some(c);
        }
    }

    #[test]
    fn fiber_tree_sorts_descending() {
        let th = Thresholds::new(2);
        let rows = fiber_tree(&th, 1, &rat_int(0), &[rat_int(-3), rat_int(-1)]).unwrap();
        assert_eq!(rows[0].radius, rat_int(-1));
        assert_eq!(rows[1].radius, rat_int(-3));
        assert_eq!(rows[1].count, 2);
        assert_eq!(rows[1].separations, vec![rat_int(-1)]);
    }
}
