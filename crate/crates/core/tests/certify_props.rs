mod common;

use common::v;
use pangle_core::certify::{
    certify, certify_alpha_beta, certify_identity, certify_shifted, dual_witness, ficken_probe,
    lorch_probe, Criterion, SearchConfig, Verdict, NOT_A_PROOF,
};
use pangle_core::norm::GramMatrix;
use pangle_core::{ExecMode, NormSpec};
use proptest::prelude::*;

fn cfg(samples: usize, seed: u64) -> SearchConfig {
    SearchConfig {
        samples,
        seed,
        ..Default::default()
    }
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion::AlphaBeta { p: 2.0 },
        Criterion::AlphaBeta { p: 0.5 },
        Criterion::Identity { p: 3.0 },
        Criterion::Shifted,
        Criterion::Lorch,
        Criterion::Ficken,
    ]
}

#[test]
fn linf_counterexamples_are_found_and_replay() {
    let spec = NormSpec::linf();
    for c in criteria() {
        let r = certify(&spec, c, &cfg(4000, 3)).unwrap();
        assert_eq!(r.verdict, Verdict::CounterexampleFound, "{}", c.name());
        let w = r.witness.unwrap();
        let m = c.replay(&spec, &w).unwrap();
        assert!(
            (m - w.margin).abs() <= 1e-12 * w.lhs.abs().max(w.rhs.abs()).max(1.0),
            "{}: {m} vs {}",
            c.name(),
            w.margin
        );
        assert!(r.note.is_none());
    }
}

#[test]
fn known_l1_pair_violates_alpha_beta() {
    // ‖x‖ = 1, ‖y‖ = 1.2; beta_2 exceeds alpha_2 in the taxicab norm
    let spec = NormSpec::l1();
    let w = Criterion::AlphaBeta { p: 2.0 }
        .evaluate(&spec, &v(&[1.0, 0.0]), &v(&[5.0 / 6.0, 11.0 / 30.0]))
        .unwrap();
    // oracle: alpha = ‖(1,0) - 1.2 (5/6, 11/30)‖₁ = 0 + 0.44, beta = ‖1.2 (1,0) - (5/6, 11/30)‖₁ = 11/30 + 11/30
    assert!((w.lhs - 0.44).abs() < 1e-12);
    assert!((w.rhs - 22.0 / 30.0).abs() < 1e-12);
    assert!(w.margin > 0.29);
}

#[test]
fn gram_norm_is_consistent() {
    let spec = NormSpec::Gram(GramMatrix::diagonal(&[2.0, 5.0]).unwrap());
    for c in [
        Criterion::Identity { p: 3.0 },
        Criterion::AlphaBeta { p: 3.0 },
        Criterion::Lorch,
        Criterion::Ficken,
        Criterion::Shifted,
    ] {
        let r = certify(&spec, c, &cfg(3000, 1)).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::ConsistentWithInnerProduct,
            "{} {}",
            c.name(),
            r.max_margin
        );
        assert_eq!(r.note.as_deref(), Some(NOT_A_PROOF));
        assert!(r.witness.is_none());
    }
    assert!(dual_witness(&spec, 2.0, &cfg(100, 0)).is_err());
}

#[test]
fn euclidean_soundness_across_dimensions() {
    for d in 2..=5 {
        let spec = NormSpec::euclidean(d);
        let c = SearchConfig {
            dim: d,
            ..cfg(2000, d as u64)
        };
        assert_eq!(
            certify_alpha_beta(&spec, 2.5, &c).unwrap().verdict,
            Verdict::ConsistentWithInnerProduct
        );
        assert_eq!(
            certify_alpha_beta(&spec, -1.0, &c).unwrap().verdict,
            Verdict::ConsistentWithInnerProduct
        );
        assert_eq!(
            certify_identity(&spec, 0.5, &c).unwrap().verdict,
            Verdict::ConsistentWithInnerProduct
        );
        assert_eq!(
            certify_shifted(&spec, &c).unwrap().verdict,
            Verdict::ConsistentWithInnerProduct
        );
        assert_eq!(
            lorch_probe(&spec, &c).unwrap().verdict,
            Verdict::ConsistentWithInnerProduct
        );
        assert_eq!(
            ficken_probe(&spec, &c).unwrap().verdict,
            Verdict::ConsistentWithInnerProduct
        );
    }
}

#[test]
fn searches_are_deterministic_across_modes() {
    let spec = NormSpec::l1();
    for c in criteria() {
        let s = certify(
            &spec,
            c,
            &SearchConfig {
                mode: ExecMode::Sequential,
                ..cfg(1500, 9)
            },
        )
        .unwrap();
        let p = certify(
            &spec,
            c,
            &SearchConfig {
                mode: ExecMode::Parallel,
                ..cfg(1500, 9)
            },
        )
        .unwrap();
        assert_eq!(s, p, "{}", c.name());
    }
}

#[test]
fn dual_witness_covers_both_sides() {
    for spec in [NormSpec::l1(), NormSpec::linf()] {
        for p in [0.5, 2.0, 3.0] {
            let d = dual_witness(&spec, p, &cfg(3000, 0)).unwrap();
            assert!(d.alpha_below.lhs < d.alpha_below.rhs);
            assert!(d.alpha_above.lhs > d.alpha_above.rhs);
        }
    }
}

#[test]
fn vacuous_exponent_is_rejected() {
    assert!(certify_alpha_beta(&NormSpec::l1(), 1.0, &cfg(10, 0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Both sides of the alpha-beta criterion are homogeneous of degree `p`,
    /// so rescaling a pair rescales its margin by `t^p`.
    #[test]
    fn alpha_beta_margin_scales(x in prop::collection::vec(-5.0f64..5.0, 3), y in prop::collection::vec(-5.0f64..5.0, 3),
                                t in 0.1f64..10.0, p in prop_oneof![-2.0f64..0.9, 1.1f64..3.0]) {
        let (x, y) = (v(&x), v(&y));
        prop_assume!(x.max_abs() > 1e-2 && y.max_abs() > 1e-2);
        let c = Criterion::AlphaBeta { p };
        let spec = NormSpec::l1();
        let a = c.evaluate(&spec, &x, &y).unwrap();
        let b = c.evaluate(&spec, &x.scaled(t), &y.scaled(t)).unwrap();
        let tp = t.powf(p);
        prop_assert!((b.margin - tp * a.margin).abs() <= 1e-10 * tp * a.lhs.max(a.rhs).max(1e-300));
    }

    #[test]
    fn canonical_form_preserves_the_verdict(x in prop::collection::vec(-5.0f64..5.0, 2), y in prop::collection::vec(-5.0f64..5.0, 2), p in 1.1f64..3.0) {
        let (x, y) = (v(&x), v(&y));
        let c = Criterion::AlphaBeta { p };
        let spec = NormSpec::linf();
        if let Some((u, w)) = c.canonical(&spec, &x, &y) {
            prop_assert!((u.max_abs().max(w.max_abs()) - 1.0).abs() < 1e-15);
            let a = c.evaluate(&spec, &x, &y).unwrap();
            let b = c.evaluate(&spec, &u, &w).unwrap();
            if a.margin.abs() > 1e-9 * a.lhs.max(a.rhs) {
                prop_assert_eq!(a.margin > 0.0, b.margin > 0.0);
            }
        }
    }
}
