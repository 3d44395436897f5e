mod common;

use common::{gram_for, pair, v};
use pangle_core::series::{
    alpha_p_series, alpha_zero_series, binom_half, binom_half_coeffs, convergence_window,
    norm_line_series, Order, Orientation,
};
use pangle_core::{alpha_p, Error, NormSpec};
use proptest::prelude::*;

/// Coefficients of sqrt(1+u) through Pascal-style recursion on exact rationals,
/// binom(1/2, k) = (-1)^(k-1) (2k)! / ((2k-1) 4^k (k!)^2).
fn binom_half_oracle(k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut central = 1.0f64; // (2k)! / (k!)^2 / 4^k, built incrementally
    for j in 1..=k {
        central *= (2 * j - 1) as f64 / (2 * j) as f64;
    }
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * central / (2 * k - 1) as f64
}

#[test]
fn coefficients_match_factorial_form() {
    let c = binom_half_coeffs(64);
    for k in 0..=64u32 {
        let o = binom_half_oracle(k);
        assert!((c[k as usize] - o).abs() <= 1e-14 * o.abs(), "k={k}");
        assert_eq!(binom_half(k as usize), c[k as usize]);
    }
}

#[test]
fn norm_line_boundary_sums_to_sqrt_two() {
    let r = norm_line_series(
        &NormSpec::euclidean(2),
        &v(&[1.0, 0.0]),
        &v(&[0.0, 1.0]),
        1.0,
        Order::Fixed(20_000),
    )
    .unwrap();
    assert_eq!(r.ratio, 1.0);
    assert!((r.value - 2f64.sqrt()).abs() <= r.tail_bound);
    assert!(r.tail_bound < 1e-6);
}

#[test]
fn orthogonal_pair_is_on_the_boundary() {
    let r = alpha_zero_series(
        &NormSpec::euclidean(2),
        &v(&[1.0, 0.0]),
        &v(&[0.0, 1.0]),
        Order::default(),
    )
    .unwrap();
    assert!(r.slow_convergence);
    assert!((r.value - 2f64.sqrt()).abs() <= r.tail_bound);
}

#[test]
fn swapped_orientation_is_used_when_needed() {
    // centred at x the ratio exceeds 1; centred at y it does not
    let e = NormSpec::euclidean(2);
    let (x, y) = (v(&[1.0, 0.0]), v(&[0.3, 1.6]));
    let r = alpha_p_series(&e, &x, &y, 1.5, Order::default());
    let s = alpha_p_series(&e, &y, &x, 1.5, Order::default()).unwrap();
    match r {
        Ok(r) => {
            assert!((r.value - s.value).abs() <= r.tail_bound + s.tail_bound + 1e-12);
            if r.orientation == Orientation::Swapped {
                assert_eq!(s.orientation, Orientation::Direct);
            }
        }
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn non_gram_norms_are_rejected() {
    let r = alpha_p_series(
        &NormSpec::l2(),
        &v(&[1.0, 0.0]),
        &v(&[0.0, 1.0]),
        0.0,
        Order::default(),
    );
    assert_eq!(r.unwrap_err(), Error::NoInnerProduct);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn line_series_matches_direct_norm((d, x, y) in pair(), seed in 0u64..500, s in -1.0f64..1.0) {
        let spec = gram_for(seed, d);
        // choose t inside the domain: t = (s D - <x,y>) / ‖y‖²
        let (nx, ny) = (spec.norm(&x).unwrap(), spec.norm(&y).unwrap());
        let ip = spec.inner_product(&x, &y).unwrap();
        let disc2 = nx * nx * ny * ny - ip * ip;
        prop_assume!(disc2 > 1e-6 * nx * nx * ny * ny);
        let t = (s * disc2.sqrt() - ip) / (ny * ny);
        let r = norm_line_series(&spec, &x, &y, t, Order::default()).unwrap();
        let direct = spec.norm(&x.lincomb(1.0, &y, t)).unwrap();
        prop_assert!((r.value - direct).abs() <= r.tail_bound + 1e-12 * direct.max(1.0));
    }

    #[test]
    fn alpha_series_matches_kernel_or_is_gated((d, x, y) in pair(), seed in 0u64..500, p in -2.5f64..2.5) {
        let spec = gram_for(seed, d);
        let direct = alpha_p(&spec, &x, &y, p).unwrap();
        match alpha_p_series(&spec, &x, &y, p, Order::default()) {
            Ok(r) => prop_assert!((r.value - direct).abs() <= r.tail_bound + 1e-12 * direct.max(1.0), "{:?} vs {}", r, direct),
            Err(Error::OutOfDomain(_)) => {
                // neither orientation has its cosine inside the window
                let (nx, ny) = (spec.norm(&x).unwrap(), spec.norm(&y).unwrap());
                let c = spec.inner_product(&x, &y).unwrap() / (nx * ny);
                let inside = |a: f64, b: f64| convergence_window(a, b, p).is_some_and(|(lo, hi)| c >= lo - 1e-9 && c <= hi + 1e-9);
                prop_assert!(!inside(nx, ny) && !inside(ny, nx));
            }
            Err(Error::LinearlyDependent) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn window_agrees_with_ratio_gate((d, x, y) in pair(), seed in 0u64..500, p in -2.5f64..2.5) {
        let spec = gram_for(seed, d);
        let (nx, ny) = (spec.norm(&x).unwrap(), spec.norm(&y).unwrap());
        let ip = spec.inner_product(&x, &y).unwrap();
        let disc2 = nx * nx * ny * ny - ip * ip;
        prop_assume!(disc2 > 1e-6 * nx * nx * ny * ny);
        let r = (nx.powf(1.0 - p) * ny.powf(1.0 + p) - ip) / disc2.sqrt();
        let c = ip / (nx * ny);
        let in_window = convergence_window(nx, ny, p).map(|(lo, hi)| (c - lo).min(hi - c));
        // away from the boundary the two tests agree
        if (r.abs() - 1.0).abs() > 1e-6 {
            prop_assert_eq!(r.abs() <= 1.0, in_window.is_some_and(|m| m >= 0.0));
        }
    }

    #[test]
    fn tail_bound_is_valid((d, x, y) in pair(), seed in 0u64..500, k in 1usize..200) {
        let spec = gram_for(seed, d);
        if let Ok(a) = alpha_zero_series(&spec, &x, &y, Order::Fixed(k)) {
            let b = alpha_zero_series(&spec, &x, &y, Order::Fixed(2 * k)).unwrap();
            prop_assert!((a.value - b.value).abs() <= a.tail_bound + 1e-13);
            prop_assert!(b.tail_bound <= a.tail_bound);
            let direct = alpha_p(&spec, &x, &y, 0.0).unwrap();
            prop_assert!((a.value - direct).abs() <= a.tail_bound + 1e-13);
        }
    }

    #[test]
    fn p_one_reproduces_norm_distance((d, x, y) in pair(), seed in 0u64..500) {
        let spec = gram_for(seed, d);
        if let Ok(r) = alpha_p_series(&spec, &x, &y, 1.0, Order::default()) {
            let dist = spec.norm(&x.sub(&y)).unwrap();
            prop_assert!((r.value - dist).abs() <= r.tail_bound + 1e-12 * dist.max(1.0));
        }
    }
}
