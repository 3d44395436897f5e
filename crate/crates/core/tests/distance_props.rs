mod common;

use common::{gram_for, pair, rel, spec_for, v};
use pangle_core::distance::{
    alpha_p_closed_form_ips, angular, closed_form_radicand, sign_identity_ips, skew_relation,
};
use pangle_core::{alpha_p, beta_p, Error, NormSpec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn symmetric_and_nonnegative((d, x, y) in pair(), seed in 0u64..500, p in -3.0f64..3.0) {
        let s = spec_for(seed, d);
        let a = alpha_p(&s, &x, &y, p).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert_eq!(a, alpha_p(&s, &y, &x, p).unwrap());
        prop_assert_eq!(beta_p(&s, &x, &y, p).unwrap(), beta_p(&s, &y, &x, p).unwrap());
    }

    #[test]
    fn p_one_is_the_norm_distance((d, x, y) in pair(), seed in 0u64..500) {
        let s = spec_for(seed, d);
        let dist = s.norm(&x.sub(&y)).unwrap();
        prop_assert!(rel(alpha_p(&s, &x, &y, 1.0).unwrap(), dist) < 1e-14);
        prop_assert!(rel(beta_p(&s, &x, &y, 1.0).unwrap(), dist) < 1e-14);
    }

    #[test]
    fn skew_relation_holds((d, x, y) in pair(), seed in 0u64..500, p in -3.0f64..3.0) {
        let r = skew_relation(&spec_for(seed, d), &x, &y, p).unwrap();
        prop_assert!(r.relative() < 1e-12, "{:?}", r);
    }

    #[test]
    fn homogeneous_of_degree_p((d, x, y) in pair(), seed in 0u64..500, p in -3.0f64..3.0, c in 0.1f64..10.0) {
        let s = spec_for(seed, d);
        let a = alpha_p(&s, &x, &y, p).unwrap();
        let scaled = alpha_p(&s, &x.scaled(c), &y.scaled(c), p).unwrap();
        prop_assert!(rel(scaled, c.powf(p) * a) < 1e-11);
    }

    #[test]
    fn equal_norms_make_both_distances_agree((d, x, y) in pair(), seed in 0u64..500, p in -3.0f64..3.0) {
        let s = spec_for(seed, d);
        let y = y.scaled(s.norm(&x).unwrap() / s.norm(&y).unwrap());
        let r = angular(&s, &x, &y, p).unwrap();
        prop_assert!((r.alpha - r.beta).abs() <= 1e-12 * r.alpha.max(1.0));
    }

    #[test]
    fn closed_form_in_gram_norms((d, x, y) in pair(), seed in 0u64..500, p in -3.0f64..3.0) {
        let s = gram_for(seed, d);
        let direct = alpha_p(&s, &x, &y, p).unwrap();
        let closed = alpha_p_closed_form_ips(&s, &x, &y, p).unwrap();
        let r = closed_form_radicand(&s, &x, &y, p).unwrap();
        // rounding in the radicand is at most a few ulps of its largest addend
        prop_assert!((direct * direct - r.value).abs() <= 1e-12 * r.scale.max(direct * direct));
        prop_assert!(closed >= 0.0);
    }

    #[test]
    fn sign_identity_in_gram_norms((d, x, y) in pair(), seed in 0u64..500, p in -3.0f64..3.0) {
        let s = gram_for(seed, d);
        let a = alpha_p(&s, &x, &y, p).unwrap();
        let b = beta_p(&s, &x, &y, p).unwrap();
        let id = sign_identity_ips(&s, &x, &y, p).unwrap();
        let scale = a * a + b * b + id.abs();
        prop_assert!((a * a - b * b - id).abs() <= 1e-11 * scale);
        // alpha_p >= beta_p exactly when p >= 1
        if p > 1.0 { prop_assert!(a >= b - 1e-12 * scale); }
        if p < 1.0 { prop_assert!(a <= b + 1e-12 * scale); }
    }
}

#[test]
fn worked_values() {
    let (x, y) = (v(&[3.0, 0.0]), v(&[0.0, 4.0]));
    let l2 = NormSpec::l2();
    assert!((alpha_p(&l2, &x, &y, 2.0).unwrap() - 337f64.sqrt()).abs() < 1e-12);
    assert!((beta_p(&l2, &x, &y, 2.0).unwrap() - 12.0 * 2f64.sqrt()).abs() < 1e-12);
    assert!((alpha_p(&l2, &x, &y, 0.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    let e = NormSpec::euclidean(2);
    assert!((alpha_p_closed_form_ips(&e, &x, &y, 2.0).unwrap() - 337f64.sqrt()).abs() < 1e-12);
}

#[test]
fn closed_form_needs_an_inner_product() {
    let (x, y) = (v(&[1.0, 0.0]), v(&[5.0 / 6.0, 11.0 / 30.0]));
    assert_eq!(
        alpha_p_closed_form_ips(&NormSpec::l1(), &x, &y, 2.0),
        Err(Error::NoInnerProduct)
    );
    // the radicand itself is still defined and disagrees with alpha_2 = 0.44
    let r = closed_form_radicand(&NormSpec::l1(), &x, &y, 2.0).unwrap();
    assert!((r.value.sqrt() - 0.44).abs() > 0.25);
}

#[test]
fn zero_and_mismatched_inputs() {
    let l1 = NormSpec::l1();
    assert_eq!(
        alpha_p(&l1, &v(&[0.0, 0.0]), &v(&[1.0, 0.0]), 2.0),
        Err(Error::ZeroVector)
    );
    assert!(matches!(
        alpha_p(&l1, &v(&[1.0]), &v(&[1.0, 0.0]), 2.0),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(alpha_p(&l1, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), f64::NAN).is_err());
}
