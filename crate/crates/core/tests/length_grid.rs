//! Length detectors and localization against the lengths themselves:
//! detectors must flip exactly at c and 2c, the torsor-side profile must
//! reproduce the arithmetic one, and every localization window must
//! contain the true length with width at most 2c.

use annuli_core::annuli::{Annulus, AnnulusLength};
use annuli_core::lengthlab::{
    detect_gt_2c, detect_gt_c, localize, pair_report, profile_direct, profile_from_torsors,
};
use annuli_core::valnum::{rat, rat_int};
use annuli_core::{LogInterval, Rat, Thresholds};
use num_traits::Zero;
use proptest::prelude::*;

fn annulus_of_length(l: &Rat) -> Annulus {
    let iv = LogInterval::open(-l.clone(), Rat::zero());
    Annulus::oriented(iv).expect("nondegenerate")
}

#[test]
fn detectors_flip_exactly_at_their_thresholds() {
    for p in [2u64, 3, 5] {
        let th = Thresholds::new(p);
        for k in 1..=48i64 {
            let l = rat(k, 8);
            let a = annulus_of_length(&l);
            assert_eq!(detect_gt_c(&a, &th), l > th.c, "p={p} l={l}");
            assert_eq!(
                detect_gt_2c(&a, &th),
                l > rat_int(2) * &th.c,
                "p={p} l={l}"
            );
        }
        // exactly at the thresholds both detectors refuse
        let at_c = annulus_of_length(&th.c);
        assert!(!detect_gt_c(&at_c, &th));
        let at_2c = annulus_of_length(&(rat_int(2) * &th.c));
        assert!(!detect_gt_2c(&at_2c, &th));
    }
}

#[test]
fn torsor_profile_equals_direct_profile_on_the_grid() {
    for p in [2u64, 3, 5] {
        let th = Thresholds::new(p);
        for k in 1..=16i64 {
            let l = rat(k, 2);
            let a = annulus_of_length(&l);
            let via_torsors = profile_from_torsors(&th, &a, 12);
            let direct = profile_direct(&th, &AnnulusLength::Finite(l.clone()), 12);
            assert_eq!(via_torsors, direct, "p={p} l={l}");
        }
    }
}

#[test]
fn localization_contains_the_length_with_width_at_most_2c() {
    for p in [2u64, 3, 5] {
        let th = Thresholds::new(p);
        for k in 1..=96i64 {
            let l = rat(k, 8);
            let profile = profile_direct(&th, &AnnulusLength::Finite(l.clone()), 32);
            let loc = localize(&th, &profile).expect("direct profiles are monotone");
            assert!(loc.lo < l, "p={p} l={l}: lower end must be strict");
            match &loc.hi {
                Some(hi) => {
                    assert!(&l <= hi, "p={p} l={l}: window misses the length");
                    assert!(
                        hi - &loc.lo <= rat_int(2) * &th.c,
                        "p={p} l={l}: window too wide"
                    );
                    assert!(!loc.saturated);
                }
                None => assert!(loc.saturated),
            }
        }
    }
}

#[test]
fn equal_profiles_bound_the_gap_by_2c() {
    for p in [2u64, 3, 5] {
        let th = Thresholds::new(p);
        let lengths: Vec<Rat> = (1..=64i64).map(|k| rat(k, 4)).collect();
        for l1 in &lengths {
            for l2 in &lengths {
                let report = pair_report(
                    &th,
                    &AnnulusLength::Finite(l1.clone()),
                    &AnnulusLength::Finite(l2.clone()),
                    16,
                )
                .expect("monotone");
                if let Some(ok) = report.bound_2c_ok {
                    assert!(ok, "p={p} l1={l1} l2={l2}: 2c bound failed");
                }
                if report.profiles_equal {
                    assert_eq!(report.first_difference, None);
                } else {
                    assert!(report.first_difference.is_some());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn detectors_agree_with_arithmetic_off_grid(
        p in prop_oneof![Just(2u64), Just(3u64), Just(5u64)],
        num in 1i64..=240,
        den in 1i64..=7,
    ) {
        let th = Thresholds::new(p);
        let l = rat(num, den);
        let a = annulus_of_length(&l);
        prop_assert_eq!(detect_gt_c(&a, &th), l.clone() > th.c.clone());
        prop_assert_eq!(detect_gt_2c(&a, &th), l > rat_int(2) * &th.c);
    }

    #[test]
    fn localization_window_tracks_random_lengths(
        p in prop_oneof![Just(2u64), Just(3u64), Just(5u64)],
        num in 1i64..=120,
        den in 1i64..=6,
        n_max in 8u32..=32,
    ) {
        let th = Thresholds::new(p);
        let l = rat(num, den);
        let profile = profile_direct(&th, &AnnulusLength::Finite(l.clone()), n_max);
        let loc = localize(&th, &profile).expect("monotone");
        prop_assert!(loc.lo < l);
        if let Some(hi) = &loc.hi {
            prop_assert!(&l <= hi);
        }
    }
}
