//! The acceptance checks, each a self-contained run returning pass/fail and a
//! one-line summary. Used by the `acceptance` test target and `pangle verify-all`.

use std::fmt;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::bounds::{
    best_constant_sweep, comparison_bound, hermite_hadamard_chain, refined_comparison_bound,
    RatioCase,
};
use crate::certify::{certify, Criterion, SearchConfig, Verdict};
use crate::distance::{alpha_p, alpha_p_closed_form_ips, beta_p, skew_relation};
use crate::exec::ExecMode;
use crate::geometry::{
    beta_non_metric_witness, completeness_experiment, metric_audit_alpha, nonequivalence_table,
};
use crate::norm::NormSpec;
use crate::quadrature::QuadConfig;
use crate::sampling::{nonzero_vector, random_gram, random_spec, rng_for};
use crate::series::{alpha_p_series, alpha_zero_series, Order};
use crate::tol;
use crate::vector::Vector;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{tag}] {} {}: {} ({:.2}s)",
            self.id, self.name, self.detail, self.seconds
        )
    }
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "kernel identities"),
    (2, "closed-form equivalence"),
    (3, "bound sandwich"),
    (4, "best constants"),
    (5, "integral chain"),
    (6, "series oracle"),
    (7, "metric audits"),
    (8, "certifier soundness and effectiveness"),
    (9, "topology experiments"),
];

const SEED: u64 = 20_240_611;

fn timed(id: u8, f: impl FnOnce() -> (bool, String)) -> CriterionOutcome {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown", |c| c.1);
    let start = Instant::now();
    let (passed, detail) = f();
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs one check by number (1 to 9).
pub fn run(id: u8, mode: ExecMode) -> Option<CriterionOutcome> {
    let outcome = match id {
        1 => timed(1, || kernel_identities(mode)),
        2 => timed(2, || closed_form(mode)),
        3 => timed(3, || bound_sandwich(mode)),
        4 => timed(4, best_constants),
        5 => timed(5, || integral_chain(mode)),
        6 => timed(6, || series_oracle(mode)),
        7 => timed(7, || metric_audits(mode)),
        8 => timed(8, || certifier(mode)),
        9 => timed(9, topology),
        _ => return None,
    };
    Some(outcome)
}

pub fn run_all(mode: ExecMode) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .filter_map(|(id, _)| run(*id, mode))
        .collect()
}

fn random_dim<R: Rng>(rng: &mut R) -> usize {
    rng.random_range(2..=5)
}

fn fold_max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn kernel_identities(mode: ExecMode) -> (bool, String) {
    let start = Instant::now();
    let worst = fold_max(mode.map(10_000, |i| {
        let mut rng = rng_for(SEED, i as u64);
        let dim = random_dim(&mut rng);
        let spec = random_spec(&mut rng, dim);
        let x = nonzero_vector(&mut rng, &spec, dim);
        let y = nonzero_vector(&mut rng, &spec, dim);
        let p = rng.random_range(-3.0..=3.0);
        skew_relation(&spec, &x, &y, p).map_or(f64::INFINITY, |r| r.relative())
    }));
    let secs = start.elapsed().as_secs_f64();
    (
        worst <= 1e-12 && secs < 5.0,
        format!("max relative residual {worst:.2e} over 10^4 samples"),
    )
}

fn closed_form(mode: ExecMode) -> (bool, String) {
    let worst = fold_max(mode.map(10_000, |i| {
        let mut rng = rng_for(SEED + 1, i as u64);
        let dim = random_dim(&mut rng);
        let spec = NormSpec::Gram(random_gram(&mut rng, dim));
        let x = nonzero_vector(&mut rng, &spec, dim);
        let y = nonzero_vector(&mut rng, &spec, dim);
        let p = rng.random_range(-3.0..=3.0);
        match (
            alpha_p(&spec, &x, &y, p),
            alpha_p_closed_form_ips(&spec, &x, &y, p),
        ) {
            (Ok(a), Ok(c)) => tol::rel_err(c, a),
            _ => f64::INFINITY,
        }
    }));
    let e = NormSpec::euclidean(2);
    let reg = alpha_p_closed_form_ips(
        &e,
        &Vector::from_slice(&[3.0, 0.0]),
        &Vector::from_slice(&[0.0, 4.0]),
        2.0,
    )
    .map_or(f64::INFINITY, |v| (v - 337f64.sqrt()).abs());
    (
        worst <= 1e-10 && reg <= 1e-12,
        format!("max relative gap {worst:.2e}; regression error {reg:.1e}"),
    )
}

/// Draws `(p, q)` with `p/q` in the requested case.
fn exponents_for<R: Rng>(rng: &mut R, case: RatioCase) -> (f64, f64) {
    let q = rng.random_range(0.2..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let r = match case {
        RatioCase::AtLeastOne => rng.random_range(1.0..4.0),
        RatioCase::UnitInterval => rng.random_range(0.0..1.0),
        RatioCase::Negative => -rng.random_range(0.05..3.0),
    };
    (r * q, q)
}

fn bound_sandwich(mode: ExecMode) -> (bool, String) {
    let mut parts = Vec::new();
    let mut ok = true;
    for (k, case) in [
        RatioCase::AtLeastOne,
        RatioCase::UnitInterval,
        RatioCase::Negative,
    ]
    .into_iter()
    .enumerate()
    {
        let results = mode.map(10_000, |i| {
            let mut rng = rng_for(SEED + 10 + k as u64, i as u64);
            let dim = random_dim(&mut rng);
            let spec = random_spec(&mut rng, dim);
            let x = nonzero_vector(&mut rng, &spec, dim);
            let y = nonzero_vector(&mut rng, &spec, dim);
            let (p, q) = exponents_for(&mut rng, case);
            let (Ok(basic), Ok(refined)) = (
                comparison_bound(&spec, &x, &y, p, q),
                refined_comparison_bound(&spec, &x, &y, p, q),
            ) else {
                return (false, false);
            };
            let slack = |a: f64, b: f64| tol::BOUND_SLACK * a.abs().max(b.abs());
            let (bl, bu, rl, ru) = (
                basic.lower.unwrap(),
                basic.upper.unwrap(),
                refined.lower.unwrap(),
                refined.upper.unwrap(),
            );
            let tighter = rl >= bl - slack(rl, bl) && ru <= bu + slack(ru, bu);
            (basic.holds() && refined.holds(), tighter)
        });
        let held = results.iter().filter(|r| r.0).count();
        let tighter = results.iter().filter(|r| r.1).count();
        ok &= held == results.len() && tighter == results.len();
        parts.push(format!(
            "{case:?}: {held}/{} hold, {tighter} refined",
            results.len()
        ));
    }
    (ok, parts.join("; "))
}

fn best_constants() -> (bool, String) {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, q) in [(2.0, 1.0), (3.0, 2.0), (1.0, 2.0)] {
        match best_constant_sweep(p, q, &[1e-6]) {
            Ok(t) => {
                let gap = (t.rows[0].ratio - t.limit).abs();
                ok &= gap <= 1e-5;
                parts.push(format!("({p},{q}) gap {gap:.1e}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("({p},{q}) error {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (ok && secs < 1.0, parts.join(", "))
}

fn integral_chain(mode: ExecMode) -> (bool, String) {
    let quad = QuadConfig::new(1e-13);
    let results = mode.map(1000, |i| {
        let mut rng = rng_for(SEED + 20, i as u64);
        let dim = random_dim(&mut rng);
        let spec = random_spec(&mut rng, dim);
        let x = nonzero_vector(&mut rng, &spec, dim);
        let y = nonzero_vector(&mut rng, &spec, dim);
        let q = rng.random_range(0.3..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let p = q * rng.random_range(2.0..=5.0);
        hermite_hadamard_chain(&spec, &x, &y, p, q, &quad).map(|c| c.worst_relative_step)
    });
    let errors = results.iter().filter(|r| r.is_err()).count();
    let worst = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .fold(f64::INFINITY, |m, &s| m.min(s));
    let reg = hermite_hadamard_chain(
        &NormSpec::l2(),
        &Vector::from_slice(&[3.0, 0.0]),
        &Vector::from_slice(&[0.0, 4.0]),
        2.0,
        1.0,
        &QuadConfig::default(),
    );
    let reg_ok = reg.as_ref().is_ok_and(|c| {
        let v = c.values();
        let tail_ok = [35.0, 35.0, 35.0, 40.0]
            .iter()
            .zip(&v[2..])
            .all(|(e, a)| (e - a).abs() <= 1e-9 * e);
        tail_ok && v[1] > 337f64.sqrt() && v[1] < 35.0
    });
    (
        errors == 0 && worst >= -tol::BOUND_SLACK && reg_ok,
        format!(
            "worst relative step {worst:.2e}, {errors} errors; regression {}",
            if reg_ok { "ok" } else { "mismatch" }
        ),
    )
}

fn series_oracle(mode: ExecMode) -> (bool, String) {
    let results = mode.map(1000, |i| {
        // resample until the pair is inside the convergence domain
        for attempt in 0..64u64 {
            let mut rng = rng_for(SEED + 30 + attempt, i as u64);
            let dim = random_dim(&mut rng);
            let spec = NormSpec::Gram(random_gram(&mut rng, dim));
            let x = nonzero_vector(&mut rng, &spec, dim);
            let y = nonzero_vector(&mut rng, &spec, dim);
            let p = if i % 4 == 0 {
                0.0
            } else {
                rng.random_range(-2.0..=2.0)
            };
            let eval = if p == 0.0 && i % 8 == 0 {
                alpha_zero_series(&spec, &x, &y, Order::default())
            } else {
                alpha_p_series(&spec, &x, &y, p, Order::default())
            };
            if let Ok(s) = eval {
                let direct = alpha_p(&spec, &x, &y, p).unwrap_or(f64::NAN);
                return Some((s.value - direct).abs() - s.tail_bound);
            }
        }
        None
    });
    let missing = results.iter().filter(|r| r.is_none()).count();
    let worst = results
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |m, &e| m.max(e));
    let e = NormSpec::euclidean(2);
    let reg = alpha_p_series(
        &e,
        &Vector::from_slice(&[1.0, 0.0]),
        &Vector::from_slice(&[3f64.sqrt() / 2.0, 0.5]),
        0.0,
        Order::default(),
    )
    .map_or(f64::INFINITY, |s| {
        (s.value - (2.0 - 3f64.sqrt()).sqrt()).abs()
    });
    (
        missing == 0 && worst <= 1e-12 && reg <= 1e-9,
        format!("max (error - tail) {worst:.2e}; regression error {reg:.1e}"),
    )
}

fn metric_audits(mode: ExecMode) -> (bool, String) {
    let mut failures = Vec::new();
    let mut rng = rng_for(SEED + 40, 0);
    let gram = NormSpec::Gram(random_gram(&mut rng, 3));
    let specs = [NormSpec::l1(), NormSpec::l2(), NormSpec::linf(), gram];
    for p in [-2.0, -1.0, 0.5, 2.0, 3.0] {
        for spec in &specs {
            match metric_audit_alpha(spec, p, 3, 10_000, SEED, mode) {
                Ok(r) if r.passed() => {}
                Ok(_) => failures.push(format!("p={p} {}", spec.label())),
                Err(e) => failures.push(format!("p={p} {}: {e}", spec.label())),
            }
        }
    }
    let witness = beta_non_metric_witness(&NormSpec::l2(), 2.0, 2);
    let beta_ok = witness
        .as_ref()
        .is_ok_and(|w| w.parameter == 0.5 && w.margin == 1.0);
    let ok = failures.is_empty() && beta_ok;
    let detail = if failures.is_empty() {
        format!(
            "20 audits x 10^4 triples pass; beta_2 margin {}",
            witness.map_or(f64::NAN, |w| w.margin)
        )
    } else {
        format!("failing audits: {}", failures.join(", "))
    };
    (ok, detail)
}

fn certifier(mode: ExecMode) -> (bool, String) {
    let start = Instant::now();
    let criteria = |p_ab: f64| {
        [
            Criterion::AlphaBeta { p: p_ab },
            Criterion::Identity { p: 2.0 },
            Criterion::Shifted,
            Criterion::Lorch,
            Criterion::Ficken,
        ]
    };

    // soundness: 5 criteria x 4 dimensions x 5000 samples = 10^5 probes
    let mut sound_max = f64::NEG_INFINITY;
    let mut unsound = Vec::new();
    for dim in 2..=5usize {
        let mut rng = rng_for(SEED + 50, dim as u64);
        let spec = NormSpec::Gram(random_gram(&mut rng, dim));
        for c in criteria(2.0) {
            let cfg = SearchConfig {
                dim,
                samples: 5000,
                seed: SEED,
                refine_steps: 50,
                mode,
                ..Default::default()
            };
            match certify(&spec, c, &cfg) {
                Ok(v) => {
                    sound_max = sound_max.max(v.max_margin);
                    if v.verdict != Verdict::ConsistentWithInnerProduct || v.max_margin > 1e-10 {
                        unsound.push(format!("{} dim {dim}", c.name()));
                    }
                }
                Err(e) => unsound.push(format!("{} dim {dim}: {e}", c.name())),
            }
        }
    }

    // effectiveness on l1 in R^2, seeds 0..10, default budget
    let mut missed = Vec::new();
    for seed in 0..10u64 {
        for p_ab in [2.0, 0.5] {
            let list: Vec<Criterion> = if p_ab == 2.0 {
                criteria(2.0).to_vec()
            } else {
                vec![Criterion::AlphaBeta { p: 0.5 }]
            };
            for c in list {
                let cfg = SearchConfig {
                    seed,
                    mode,
                    ..Default::default()
                };
                match certify(&NormSpec::l1(), c, &cfg) {
                    Ok(v) if v.verdict == Verdict::CounterexampleFound => {
                        let w = v.witness.as_ref().expect("found implies witness");
                        let replay = c.replay(&NormSpec::l1(), w).unwrap_or(f64::NAN);
                        if !((replay - w.margin).abs() <= 1e-12) {
                            missed.push(format!("{} seed {seed} replay", c.name()));
                        }
                    }
                    _ => missed.push(format!("{} seed {seed}", c.name())),
                }
            }
        }
    }

    let (x, y) = (
        Vector::from_slice(&[1.0, 0.0]),
        Vector::from_slice(&[5.0 / 6.0, 11.0 / 30.0]),
    );
    let l1 = NormSpec::l1();
    let a = alpha_p(&l1, &x, &y, 2.0).unwrap_or(f64::NAN);
    let b = beta_p(&l1, &x, &y, 2.0).unwrap_or(f64::NAN);
    let fixed = (a - 0.44).abs() <= 1e-12 && (b - 11.0 / 15.0).abs() <= 1e-12;

    let secs = start.elapsed().as_secs_f64();
    let ok = unsound.is_empty() && missed.is_empty() && fixed && secs < 60.0;
    let mut detail = format!(
        "Gram max margin {sound_max:.1e}; l1 seeds 0-9 all found: {}; fixed witness {}",
        missed.is_empty(),
        fixed
    );
    if !unsound.is_empty() {
        detail.push_str(&format!("; unsound: {}", unsound.join(", ")));
    }
    if !missed.is_empty() {
        detail.push_str(&format!("; missed: {}", missed.join(", ")));
    }
    (ok, detail)
}

fn topology() -> (bool, String) {
    let ns: Vec<f64> = (0..6).map(|k| 10f64.powi(k)).collect();
    let mut worst = 0.0f64;
    let mut ok = true;
    for (p, q) in [
        (1.0, 2.0),
        (0.5, 3.0),
        (-2.0, -1.0),
        (-1.0, 1.5),
        (2.0, 1.0),
    ] {
        match nonequivalence_table(p, q, 0.5, &ns) {
            Ok(t) => {
                for w in t.rows.windows(2) {
                    worst = worst.max(tol::rel_err(
                        w[1].constant / w[0].constant,
                        10f64.powf(q - p),
                    ));
                }
            }
            Err(_) => ok = false,
        }
    }
    ok &= worst <= 1e-12;
    let completeness = completeness_experiment(&NormSpec::l2(), 1.0, -1.0, 2, 10_000);
    let modulus = completeness.as_ref().ok().and_then(|(a, _)| {
        let rows: Vec<_> = a.moduli.iter().filter(|r| r.from >= 100).collect();
        (!rows.is_empty()).then(|| {
            rows.iter()
                .map(|r| r.observed.max(r.supremum))
                .fold(0.0, f64::max)
        })
    });
    let in_a = completeness.as_ref().is_ok_and(|(a, _)| !a.limit_in_set);
    ok &= modulus.is_some_and(|m| m <= 0.01) && in_a;
    (
        ok,
        format!(
            "decade ratio error {worst:.1e}; alpha_-1 modulus from N=100 {}; limit in A: {}",
            modulus.map_or("missing".to_string(), |m| format!("{m:.2e}")),
            !in_a
        ),
    )
}
