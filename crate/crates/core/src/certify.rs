//! Searches for violations of inner-product-space characterizations.
//!
//! Each criterion is an inequality that holds in every inner product space and
//! fails somewhere in every other normed space. The search samples random pairs,
//! refines the most promising ones by greedy coordinate moves, and reports the
//! largest violation found. A clean run means only that no counterexample was
//! found at the given budget.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::distance::{
    alpha_with_norms, beta_with_norms, check_exponent, closed_form_radicand, pair_norms,
};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::norm::NormSpec;
use crate::sampling::{log_uniform, rng_for, unit_vector};
use crate::tol;
use crate::vector::Vector;

pub const NOT_A_PROOF: &str = "no counterexample found at this budget; not a proof";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    /// Refinement passes per candidate; the step halves after a pass without progress.
    pub refine_steps: usize,
    pub initial_step: f64,
    /// Number of best samples that get refined.
    pub refine_top: usize,
    pub tolerance: f64,
    pub mode: ExecMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            samples: 10_000,
            seed: 0,
            refine_steps: 100,
            initial_step: 0.1,
            refine_top: 8,
            tolerance: tol::VIOLATION,
            mode: ExecMode::default(),
        }
    }
}

/// An inequality characterizing inner product spaces. The margin is positive
/// exactly when the inequality is violated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "criterion", rename_all = "snake_case")]
pub enum Criterion {
    /// `alpha_p >= beta_p` for `p > 1`, `alpha_p <= beta_p` for `p < 1`.
    AlphaBeta { p: f64 },
    /// `alpha_p` equals the inner-product closed form.
    Identity { p: f64 },
    /// `‖x/(1+‖x‖) - y/(1+‖y‖)‖ <= ‖x/(1+‖y‖) - y/(1+‖x‖)‖`, also tested on `n x`, `n y`.
    Shifted,
    /// `‖x‖ = ‖y‖` implies `‖x + y‖ <= ‖λx + λ⁻¹y‖` (Lorch).
    Lorch,
    /// `‖x‖ = ‖y‖` implies `‖λx + λ⁻¹y‖ = ‖λ⁻¹x + λy‖` (Ficken).
    Ficken,
}

/// Scales `n` tried by the shifted criterion.
pub const SHIFT_SCALES: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];

/// `λ = 10^(k/20)` for `k = -60..=60`, a log grid on `[1e-3, 1e3]`.
pub fn lambda_grid() -> Vec<f64> {
    (-60..=60).map(|k| 10f64.powf(k as f64 / 20.0)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vector,
    pub y: Vector,
    pub p: Option<f64>,
    /// `λ` for Lorch and Ficken, `n` for the shifted criterion.
    pub parameter: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Radicand of the closed form, for the identity criterion.
    pub radicand: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ConsistentWithInnerProduct,
    CounterexampleFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateVerdict {
    pub criterion: String,
    pub norm: String,
    pub verdict: Verdict,
    /// Present when a counterexample was found.
    pub witness: Option<Witness>,
    /// Largest margin seen, violation or not.
    pub max_margin: f64,
    pub trials: usize,
    pub seed: u64,
    pub note: Option<String>,
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::AlphaBeta { .. } => "alpha-beta",
            Criterion::Identity { .. } => "identity",
            Criterion::Shifted => "shifted",
            Criterion::Lorch => "lorch",
            Criterion::Ficken => "ficken",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Criterion::AlphaBeta { p } | Criterion::Identity { p } => {
                check_exponent(p)?;
                if p == 1.0 {
                    return Err(Error::InvalidParameter(
                        "the criterion is vacuous at p = 1".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Whether the criterion compares both vectors at equal norm.
    fn equal_norms(&self) -> bool {
        matches!(self, Criterion::Lorch | Criterion::Ficken)
    }

    /// Whether both sides are homogeneous in `(x, y)`, so pairs can be rescaled freely.
    fn homogeneous(&self) -> bool {
        !matches!(self, Criterion::Shifted)
    }

    /// Puts a pair in the canonical form the criterion is evaluated on.
    ///
    /// Homogeneous criteria are scaled jointly so the largest coordinate magnitude
    /// is 1; equal-norm criteria first rescale both vectors to unit norm. Returns
    /// `None` for pairs too close to the origin.
    pub fn canonical(&self, spec: &NormSpec, x: &Vector, y: &Vector) -> Option<(Vector, Vector)> {
        let (mut x, mut y) = (x.clone(), y.clone());
        if self.equal_norms() {
            let (nx, ny) = (
                spec.norm_unchecked(x.coords()),
                spec.norm_unchecked(y.coords()),
            );
            if !(nx >= tol::SAMPLE_MIN_NORM && ny >= tol::SAMPLE_MIN_NORM) {
                return None;
            }
            x = x.scaled(1.0 / nx);
            y = y.scaled(1.0 / ny);
        } else if self.homogeneous() {
            let m = x.max_abs().max(y.max_abs());
            if !(m > 0.0 && m.is_finite()) {
                return None;
            }
            x = x.scaled(1.0 / m);
            y = y.scaled(1.0 / m);
        }
        let floor = tol::SAMPLE_MIN_NORM * x.max_abs().max(y.max_abs()).max(1.0);
        if !matches!(self, Criterion::Shifted)
            && (spec.norm_unchecked(x.coords()) < floor || spec.norm_unchecked(y.coords()) < floor)
        {
            return None;
        }
        Some((x, y))
    }

    /// Evaluates the criterion on a pair exactly as given.
    pub fn evaluate(&self, spec: &NormSpec, x: &Vector, y: &Vector) -> Result<Witness> {
        self.validate()?;
        x.check_dim(y)?;
        spec.check(x)?;
        let witness = |lhs: f64, rhs: f64, margin: f64, p, parameter, radicand| Witness {
            x: x.clone(),
            y: y.clone(),
            p,
            parameter,
            lhs,
            rhs,
            margin,
            radicand,
        };
        match *self {
            Criterion::AlphaBeta { p } => {
                let (nx, ny) = pair_norms(spec, x, y)?;
                let a = alpha_with_norms(spec, x, y, nx, ny, p);
                let b = beta_with_norms(spec, x, y, nx, ny, p);
                let margin = if p > 1.0 { b - a } else { a - b };
                Ok(witness(a, b, margin, Some(p), None, None))
            }
            Criterion::Identity { p } => {
                let (nx, ny) = pair_norms(spec, x, y)?;
                let a = alpha_with_norms(spec, x, y, nx, ny, p);
                let r = closed_form_radicand(spec, x, y, p)?;
                // |a - sqrt(R)| written as |a² - R|/(a + sqrt(R)), with the denominator
                // floored so rounding in R cannot be amplified when a is tiny
                let scale = r.scale.max(a * a);
                let denom = (a + r.value.abs().sqrt()).max(scale.sqrt());
                let margin = if denom == 0.0 {
                    0.0
                } else {
                    (a * a - r.value).abs() / denom
                };
                Ok(witness(
                    a,
                    r.signed_sqrt(),
                    margin,
                    Some(p),
                    None,
                    Some(r.value),
                ))
            }
            Criterion::Shifted => {
                let mut best: Option<Witness> = None;
                for n in SHIFT_SCALES {
                    let (u, v) = (x.scaled(n), y.scaled(n));
                    let (nu, nv) = (
                        spec.norm_unchecked(u.coords()),
                        spec.norm_unchecked(v.coords()),
                    );
                    let lhs = spec.norm_unchecked(
                        u.lincomb(1.0 / (1.0 + nu), &v, -1.0 / (1.0 + nv)).coords(),
                    );
                    let rhs = spec.norm_unchecked(
                        u.lincomb(1.0 / (1.0 + nv), &v, -1.0 / (1.0 + nu)).coords(),
                    );
                    let w = Witness {
                        x: u,
                        y: v,
                        p: None,
                        parameter: Some(n),
                        lhs,
                        rhs,
                        margin: lhs - rhs,
                        radicand: None,
                    };
                    if best.as_ref().is_none_or(|b| w.margin > b.margin) {
                        best = Some(w);
                    }
                }
                Ok(best.expect("at least one scale"))
            }
            Criterion::Lorch | Criterion::Ficken => {
                let mut best: Option<Witness> = None;
                for lambda in lambda_grid() {
                    let w = self.evaluate_at(spec, x, y, lambda);
                    if best.as_ref().is_none_or(|b| w.margin > b.margin) {
                        best = Some(w);
                    }
                }
                Ok(best.expect("non-empty grid"))
            }
        }
    }

    /// Lorch or Ficken margin at a single `λ`.
    fn evaluate_at(&self, spec: &NormSpec, x: &Vector, y: &Vector, lambda: f64) -> Witness {
        let mixed = spec.norm_unchecked(x.lincomb(lambda, y, 1.0 / lambda).coords());
        let (lhs, rhs, margin) = match self {
            Criterion::Lorch => {
                let sum = spec.norm_unchecked(x.add(y).coords());
                (sum, mixed, sum - mixed)
            }
            _ => {
                let flipped = spec.norm_unchecked(x.lincomb(1.0 / lambda, y, lambda).coords());
                (mixed, flipped, (mixed - flipped).abs())
            }
        };
        Witness {
            x: x.clone(),
            y: y.clone(),
            p: None,
            parameter: Some(lambda),
            lhs,
            rhs,
            margin,
            radicand: None,
        }
    }

    /// Re-evaluates a recorded witness and returns its margin.
    pub fn replay(&self, spec: &NormSpec, w: &Witness) -> Result<f64> {
        match (self, w.parameter) {
            (Criterion::Lorch | Criterion::Ficken, Some(lambda)) => {
                Ok(self.evaluate_at(spec, &w.x, &w.y, lambda).margin)
            }
            (Criterion::Shifted, Some(_)) => {
                // the stored pair is already scaled by n
                let (u, v) = (&w.x, &w.y);
                let (nu, nv) = (spec.norm(u)?, spec.norm(v)?);
                let lhs =
                    spec.norm_unchecked(u.lincomb(1.0 / (1.0 + nu), v, -1.0 / (1.0 + nv)).coords());
                let rhs =
                    spec.norm_unchecked(u.lincomb(1.0 / (1.0 + nv), v, -1.0 / (1.0 + nu)).coords());
                Ok(lhs - rhs)
            }
            _ => self.evaluate(spec, &w.x, &w.y).map(|r| r.margin),
        }
    }

    /// A random starting pair: `x` on the unit sphere, `y` a unit direction
    /// times a log-uniform radius in `[1e-2, 1e2]` (unit for equal-norm criteria).
    fn sample(&self, spec: &NormSpec, dim: usize, seed: u64, index: usize) -> (Vector, Vector) {
        let mut rng = rng_for(seed, index as u64);
        let x = unit_vector(&mut rng, spec, dim);
        let y = unit_vector(&mut rng, spec, dim);
        if self.equal_norms() {
            (x, y)
        } else {
            let r = log_uniform(&mut rng, 1e-2, 1e2);
            (x, y.scaled(r))
        }
    }

    fn score(&self, spec: &NormSpec, x: &Vector, y: &Vector) -> Option<Witness> {
        let (x, y) = self.canonical(spec, x, y)?;
        let w = self.evaluate(spec, &x, &y).ok()?;
        w.margin.is_finite().then_some(w)
    }
}

/// Greedy coordinate ascent on the margin. Returns the best witness and the number of evaluations.
fn refine(
    criterion: &Criterion,
    spec: &NormSpec,
    start: Witness,
    cfg: &SearchConfig,
) -> (Witness, usize) {
    let mut best = start;
    let mut step = cfg.initial_step;
    let mut evals = 0;
    let n = best.x.dim();
    for _ in 0..cfg.refine_steps {
        let mut improved = false;
        // perturbations act on the un-scaled pair for the shifted criterion
        let (bx, by) = match (criterion, best.parameter) {
            (Criterion::Shifted, Some(s)) => (best.x.scaled(1.0 / s), best.y.scaled(1.0 / s)),
            _ => (best.x.clone(), best.y.clone()),
        };
        let scale = bx.max_abs().max(by.max_abs());
        for coord in 0..2 * n {
            for sign in [1.0, -1.0] {
                let (mut cx, mut cy) = (bx.clone().into_coords(), by.clone().into_coords());
                let slot = if coord < n {
                    &mut cx[coord]
                } else {
                    &mut cy[coord - n]
                };
                *slot += sign * step * scale;
                let (Ok(cx), Ok(cy)) = (Vector::new(cx), Vector::new(cy)) else {
                    continue;
                };
                evals += 1;
                if let Some(w) = criterion.score(spec, &cx, &cy) {
                    if w.margin > best.margin {
                        best = w;
                        improved = true;
                        break;
                    }
                }
            }
            if improved {
                break;
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    (best, evals)
}

fn by_margin(a: &(usize, Witness), b: &(usize, Witness)) -> Ordering {
    b.1.margin.total_cmp(&a.1.margin).then(a.0.cmp(&b.0))
}

/// Runs the sample-and-refine search for one criterion.
pub fn certify(
    spec: &NormSpec,
    criterion: Criterion,
    cfg: &SearchConfig,
) -> Result<CertificateVerdict> {
    criterion.validate()?;
    if cfg.dim == 0 {
        return Err(Error::EmptyVector);
    }
    if let Some(d) = spec.dimension() {
        if d != cfg.dim {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: cfg.dim,
            });
        }
    }
    let scored = cfg.mode.map(cfg.samples, |i| {
        let (x, y) = criterion.sample(spec, cfg.dim, cfg.seed, i);
        criterion.score(spec, &x, &y)
    });
    let mut ranked: Vec<(usize, Witness)> = scored
        .into_iter()
        .enumerate()
        .filter_map(|(i, w)| w.map(|w| (i, w)))
        .collect();
    ranked.sort_by(by_margin);
    ranked.truncate(cfg.refine_top.max(1));
    let refined = cfg.mode.map_slice(&ranked, |(i, w)| {
        let (best, evals) = refine(&criterion, spec, w.clone(), cfg);
        ((*i, best), evals)
    });
    let trials = cfg.samples + refined.iter().map(|(_, e)| e).sum::<usize>();
    let mut results: Vec<(usize, Witness)> = refined.into_iter().map(|(r, _)| r).collect();
    results.sort_by(by_margin);
    let best = results.into_iter().next().map(|(_, w)| w);
    let max_margin = best.as_ref().map_or(f64::NEG_INFINITY, |w| w.margin);
    let found = max_margin > cfg.tolerance;
    Ok(CertificateVerdict {
        criterion: criterion.name().into(),
        norm: spec.label(),
        verdict: if found {
            Verdict::CounterexampleFound
        } else {
            Verdict::ConsistentWithInnerProduct
        },
        witness: if found { best } else { None },
        max_margin,
        trials,
        seed: cfg.seed,
        note: (!found).then(|| NOT_A_PROOF.to_string()),
    })
}

pub fn certify_alpha_beta(
    spec: &NormSpec,
    p: f64,
    cfg: &SearchConfig,
) -> Result<CertificateVerdict> {
    certify(spec, Criterion::AlphaBeta { p }, cfg)
}

pub fn certify_identity(spec: &NormSpec, p: f64, cfg: &SearchConfig) -> Result<CertificateVerdict> {
    certify(spec, Criterion::Identity { p }, cfg)
}

pub fn certify_shifted(spec: &NormSpec, cfg: &SearchConfig) -> Result<CertificateVerdict> {
    certify(spec, Criterion::Shifted, cfg)
}

pub fn lorch_probe(spec: &NormSpec, cfg: &SearchConfig) -> Result<CertificateVerdict> {
    certify(spec, Criterion::Lorch, cfg)
}

pub fn ficken_probe(spec: &NormSpec, cfg: &SearchConfig) -> Result<CertificateVerdict> {
    certify(spec, Criterion::Ficken, cfg)
}

/// Pairs on both sides of `alpha_p` vs `beta_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualWitness {
    /// A pair with `alpha_p < beta_p`.
    pub alpha_below: Witness,
    /// A pair with `alpha_p > beta_p`.
    pub alpha_above: Witness,
}

/// In a norm without an inner product, pairs exist with `alpha_p < beta_p` and
/// with `alpha_p > beta_p`. The inequality that holds in inner product spaces
/// also holds on any line, so `(a, 2a)` supplies that side; the search supplies
/// the other.
pub fn dual_witness(spec: &NormSpec, p: f64, cfg: &SearchConfig) -> Result<DualWitness> {
    if spec.has_inner_product() {
        return Err(Error::InvalidParameter(
            "a Gram norm has no dual witness".into(),
        ));
    }
    let criterion = Criterion::AlphaBeta { p };
    criterion.validate()?;
    let a = spec.unit_axis(cfg.dim);
    let collinear = criterion.evaluate(spec, &a, &a.scaled(2.0))?;
    if !(collinear.lhs != collinear.rhs) {
        return Err(Error::WitnessNotFound(
            "collinear pair gives alpha_p = beta_p".into(),
        ));
    }
    let verdict = certify(spec, criterion, cfg)?;
    let searched = verdict.witness.ok_or_else(|| {
        Error::WitnessNotFound(format!("no violating pair in {} trials", verdict.trials))
    })?;
    let (alpha_below, alpha_above) = if p > 1.0 {
        (searched, collinear)
    } else {
        (collinear, searched)
    };
    Ok(DualWitness {
        alpha_below,
        alpha_above,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c)
    }

    fn l1_witness() -> (Vector, Vector) {
        (v(&[1.0, 0.0]), v(&[5.0 / 6.0, 11.0 / 30.0]))
    }

    #[test]
    fn alpha_beta_l1_witness() {
        let (x, y) = l1_witness();
        let w = Criterion::AlphaBeta { p: 2.0 }
            .evaluate(&NormSpec::l1(), &x, &y)
            .unwrap();
        assert!((w.lhs - 0.44).abs() < 1e-12);
        assert!((w.rhs - 11.0 / 15.0).abs() < 1e-12);
        assert!((w.margin - (11.0 / 15.0 - 0.44)).abs() < 1e-12);
    }

    #[test]
    fn identity_l1_witness() {
        let (x, y) = l1_witness();
        let w = Criterion::Identity { p: 2.0 }
            .evaluate(&NormSpec::l1(), &x, &y)
            .unwrap();
        let rhs = ((1.0 - 1.2f64.powi(3)) * (1.0 - 1.2) + 1.2 * (8.0f64 / 15.0).powi(2)).sqrt();
        assert!((w.rhs - rhs).abs() < 1e-12);
        assert!((w.margin - (rhs - 0.44)).abs() < 1e-12);
    }

    #[test]
    fn lorch_and_ficken_l1() {
        let (x, y) = (v(&[1.0, 0.0]), v(&[-0.5, 0.5]));
        let l = Criterion::Lorch.evaluate_at(&NormSpec::l1(), &x, &y, 0.8);
        assert!((l.lhs - 1.0).abs() < 1e-15 && (l.rhs - 0.8).abs() < 1e-15);
        let f = Criterion::Ficken.evaluate_at(&NormSpec::l1(), &x, &y, 0.8);
        assert!((f.margin - 0.45).abs() < 1e-15);
        for c in [Criterion::Lorch, Criterion::Ficken] {
            assert_eq!(c.evaluate_at(&NormSpec::l1(), &x, &y, 1.0).margin, 0.0);
        }
    }

    #[test]
    fn shifted_diagonal_is_zero() {
        let x = v(&[0.3, -2.0]);
        let w = Criterion::Shifted
            .evaluate(&NormSpec::linf(), &x, &x)
            .unwrap();
        assert_eq!(w.margin, 0.0);
    }

    #[test]
    fn p_one_rejected() {
        let cfg = SearchConfig {
            samples: 10,
            ..Default::default()
        };
        assert!(certify_alpha_beta(&NormSpec::l1(), 1.0, &cfg).is_err());
        assert!(certify_identity(&NormSpec::l1(), 1.0, &cfg).is_err());
    }

    #[test]
    fn small_searches() {
        let cfg = SearchConfig {
            samples: 500,
            refine_steps: 30,
            ..Default::default()
        };
        let r = certify_alpha_beta(&NormSpec::l1(), 2.0, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::CounterexampleFound);
        let w = r.witness.unwrap();
        assert_eq!(
            Criterion::AlphaBeta { p: 2.0 }
                .replay(&NormSpec::l1(), &w)
                .unwrap(),
            w.margin
        );
        let r = certify_alpha_beta(&NormSpec::euclidean(2), 2.0, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithInnerProduct);
        assert_eq!(r.note.as_deref(), Some(NOT_A_PROOF));
    }

    #[test]
    fn dual_witness_sides() {
        let cfg = SearchConfig {
            samples: 500,
            refine_steps: 20,
            ..Default::default()
        };
        let d = dual_witness(&NormSpec::l1(), 2.0, &cfg).unwrap();
        assert!(d.alpha_below.lhs < d.alpha_below.rhs);
        assert!(d.alpha_above.lhs > d.alpha_above.rhs);
        assert_eq!(d.alpha_above.lhs, 3.0);
        assert!(dual_witness(&NormSpec::euclidean(2), 2.0, &cfg).is_err());
    }
}
