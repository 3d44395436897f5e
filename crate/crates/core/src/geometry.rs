//! Metric structure of `alpha_p` and `beta_p`: axiom audits, explicit
//! non-metric and non-invariance witnesses, and experiments on sequences.
//!
//! Most witnesses live on a line `{λa}` through a unit vector `a`, where
//! `alpha_p[λa, μa] = |sgn(λ)|λ|^p - sgn(μ)|μ|^p|` for any norm.

use serde::{Deserialize, Serialize};

use crate::distance::{alpha_p, alpha_with_norms, beta_p, check_exponent, pair_norms};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::norm::NormSpec;
use crate::sampling::{nonzero_vector, rng_for};
use crate::tol;
use crate::vector::Vector;

/// `sgn(λ)|λ|^p`, the coordinate of `‖λa‖^(p-1) λa` along a unit `a`.
pub fn signed_power(lambda: f64, p: f64) -> f64 {
    lambda.signum() * lambda.abs().powf(p)
}

/// `alpha_p[λa, μa]` for a unit vector `a`.
pub fn collinear_alpha(p: f64, lambda: f64, mu: f64) -> f64 {
    (signed_power(lambda, p) - signed_power(mu, p)).abs()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub passed: bool,
    pub violations: usize,
    /// Smallest observed slack; negative values are violations.
    pub worst_slack: f64,
    /// The sample attaining `worst_slack`.
    pub witness: Option<Vec<Vector>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricAuditReport {
    pub p: f64,
    pub norm: String,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub symmetry: AxiomResult,
    pub identity: AxiomResult,
    pub triangle: AxiomResult,
}

impl MetricAuditReport {
    pub fn passed(&self) -> bool {
        self.symmetry.passed && self.identity.passed && self.triangle.passed
    }
}

struct TripleOutcome {
    symmetry: f64,
    identity: f64,
    triangle: f64,
    triple: [Vector; 3],
}

/// Relative triangle slack `(d(x,y) + d(y,z) - d(x,z)) / max(d(x,z), d(x,y) + d(y,z))`.
pub fn triangle_slack(spec: &NormSpec, x: &Vector, y: &Vector, z: &Vector, p: f64) -> Result<f64> {
    let xz = alpha_p(spec, x, z, p)?;
    let via = alpha_p(spec, x, y, p)? + alpha_p(spec, y, z, p)?;
    Ok(
        crate::bounds::BoundReport::new("triangle", None, Some(via), xz)
            .relative_slack_upper()
            .unwrap_or(0.0),
    )
}

fn audit_triple(spec: &NormSpec, p: f64, dim: usize, seed: u64, index: usize) -> TripleOutcome {
    let mut rng = rng_for(seed, index as u64);
    let x = nonzero_vector(&mut rng, spec, dim);
    let y = nonzero_vector(&mut rng, spec, dim);
    let z = nonzero_vector(&mut rng, spec, dim);
    let d = |a: &Vector, b: &Vector| alpha_p(spec, a, b, p).expect("sampled vectors are valid");
    let symmetry = -(d(&x, &y) - d(&y, &x)).abs();
    // zero on the diagonal, strictly positive off it
    let diag = d(&x, &x);
    let identity = if diag != 0.0 {
        -diag
    } else if x != y && d(&x, &y) <= 0.0 {
        -1.0
    } else {
        0.0
    };
    let triangle = triangle_slack(spec, &x, &y, &z, p).expect("sampled vectors are valid");
    TripleOutcome {
        symmetry,
        identity,
        triangle,
        triple: [x, y, z],
    }
}

fn summarize(
    outcomes: &[TripleOutcome],
    pick: impl Fn(&TripleOutcome) -> f64,
    threshold: f64,
) -> AxiomResult {
    let mut worst = f64::INFINITY;
    let mut witness = None;
    let mut violations = 0;
    for o in outcomes {
        let s = pick(o);
        if s < threshold {
            violations += 1;
        }
        if s < worst {
            worst = s;
            witness = Some(o.triple.to_vec());
        }
    }
    AxiomResult {
        passed: violations == 0,
        violations,
        worst_slack: worst,
        witness,
    }
}

/// Samples `samples` triples and checks symmetry, identity of indiscernibles and
/// the triangle inequality for `alpha_p`, `p != 0`.
///
/// Symmetry and identity must hold exactly; the triangle inequality may fail by
/// at most `1e-9` relative.
pub fn metric_audit_alpha(
    spec: &NormSpec,
    p: f64,
    dim: usize,
    samples: usize,
    seed: u64,
    mode: ExecMode,
) -> Result<MetricAuditReport> {
    check_exponent(p)?;
    if let Some(d) = spec.dimension() {
        if d != dim {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: dim,
            });
        }
    }
    if dim == 0 {
        return Err(Error::EmptyVector);
    }
    if p == 0.0 {
        let a = spec.unit_axis(dim);
        return Err(Error::NotAMetric {
            p,
            x: a.coords().to_vec(),
            y: a.scaled(2.0).into_coords(),
        });
    }
    let outcomes = mode.map(samples, |i| audit_triple(spec, p, dim, seed, i));
    Ok(MetricAuditReport {
        p,
        norm: spec.label(),
        dim,
        samples,
        seed,
        symmetry: summarize(&outcomes, |o| o.symmetry, 0.0),
        identity: summarize(&outcomes, |o| o.identity, 0.0),
        triangle: summarize(&outcomes, |o| o.triangle, -tol::BOUND_SLACK),
    })
}

/// A triple on which the triangle inequality for `beta_p` fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleWitness {
    pub p: f64,
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
    /// The scanned scalar (`t` for `p > 1`, `s` for `p < 1`).
    pub parameter: f64,
    /// `d(x, y)`
    pub lhs: f64,
    /// `d(x, z) + d(z, y)`
    pub rhs: f64,
    pub margin: f64,
}

impl TriangleWitness {
    /// Recomputes the margin `beta_p[x,y] - beta_p[x,z] - beta_p[y,z]` from the stored vectors.
    pub fn replay(&self, spec: &NormSpec) -> Result<f64> {
        let lhs = beta_p(spec, &self.x, &self.y, self.p)?;
        let rhs = beta_p(spec, &self.x, &self.z, self.p)? + beta_p(spec, &self.y, &self.z, self.p)?;
        Ok(lhs - rhs)
    }
}

/// Geometric scan grid `2^-1, ..., 2^-30`.
fn halving_grid() -> impl Iterator<Item = f64> {
    (1..=30).map(|k| 0.5f64.powi(k))
}

/// A triple violating the triangle inequality for `beta_p`, `p != 1`.
///
/// With `a` the unit axis of `spec`: for `p > 1` the triple is `(a, -a, t a)`,
/// for `p < 1` it is `(2a, s a, a)`, with `t` or `s` scanned down from `1/2`.
pub fn beta_non_metric_witness(spec: &NormSpec, p: f64, dim: usize) -> Result<TriangleWitness> {
    check_exponent(p)?;
    if p == 1.0 {
        return Err(Error::InvalidParameter(
            "beta_1 is the norm distance, a metric".into(),
        ));
    }
    let a = spec.unit_axis(dim);
    for c in halving_grid() {
        let (x, y, z) = if p > 1.0 {
            (a.clone(), a.neg(), a.scaled(c))
        } else {
            (a.scaled(2.0), a.scaled(c), a.clone())
        };
        let lhs = beta_p(spec, &x, &y, p)?;
        let rhs = beta_p(spec, &x, &z, p)? + beta_p(spec, &y, &z, p)?;
        let margin = lhs - rhs;
        if margin > tol::REL * lhs.max(rhs) {
            return Ok(TriangleWitness {
                p,
                x,
                y,
                z,
                parameter: c,
                lhs,
                rhs,
                margin,
            });
        }
    }
    Err(Error::WitnessNotFound(format!(
        "no triangle violation for beta_{p} on the scan grid"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonequivalenceRow {
    pub n: f64,
    /// `n^(q-p) |1 - t^p| / |1 - t^q|`
    pub constant: f64,
    /// `alpha_p / alpha_q` at `λ = 1/n`, `μ = t/n`, from the distance kernels.
    pub kernel_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonequivalenceTable {
    pub p: f64,
    pub q: f64,
    pub t: f64,
    /// True when `q > p`, i.e. the required constant grows without bound in `n`.
    pub diverges: bool,
    pub rows: Vec<NonequivalenceRow>,
}

/// The smallest `M` with `alpha_p <= M alpha_q` on the pair `(a/n, t a/n)`.
pub fn nonequivalence_table(p: f64, q: f64, t: f64, ns: &[f64]) -> Result<NonequivalenceTable> {
    check_exponent(p)?;
    check_exponent(q)?;
    if p == 0.0 || q == 0.0 || p == q {
        return Err(Error::InvalidParameter(
            "p and q must be distinct and non-zero".into(),
        ));
    }
    if !(t > 0.0 && t.is_finite()) || t == 1.0 {
        return Err(Error::InvalidParameter(
            "t must be positive and different from 1".into(),
        ));
    }
    let spec = NormSpec::l2();
    let a = Vector::from_slice(&[1.0]);
    let rows = ns
        .iter()
        .map(|&n| {
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::InvalidParameter(format!("n = {n} must be positive")));
            }
            let constant = n.powf(q - p) * (1.0 - t.powf(p)).abs() / (1.0 - t.powf(q)).abs();
            let (x, y) = (a.scaled(1.0 / n), a.scaled(t / n));
            let kernel_ratio = alpha_p(&spec, &x, &y, p)? / alpha_p(&spec, &x, &y, q)?;
            Ok(NonequivalenceRow {
                n,
                constant,
                kernel_ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NonequivalenceTable {
        p,
        q,
        t,
        diverges: q > p,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationWitness {
    pub p: f64,
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
    /// `alpha_p[x + z, y + z]`
    pub shifted: f64,
    /// `alpha_p[x, y]`
    pub unshifted: f64,
    pub gap: f64,
}

impl TranslationWitness {
    pub fn replay(&self, spec: &NormSpec) -> Result<f64> {
        let shifted = alpha_p(spec, &self.x.add(&self.z), &self.y.add(&self.z), self.p)?;
        Ok((shifted - alpha_p(spec, &self.x, &self.y, self.p)?).abs())
    }
}

/// `|alpha_p[x+z, y+z] - alpha_p[x, y]|` for `x = λa`, `z = μa`, `y = γa`.
pub fn translation_gap(
    spec: &NormSpec,
    p: f64,
    dim: usize,
    lambda: f64,
    mu: f64,
    gamma: f64,
) -> Result<TranslationWitness> {
    check_exponent(p)?;
    let a = spec.unit_axis(dim);
    let (x, y, z) = (a.scaled(lambda), a.scaled(gamma), a.scaled(mu));
    let shifted = alpha_p(spec, &x.add(&z), &y.add(&z), p)?;
    let unshifted = alpha_p(spec, &x, &y, p)?;
    Ok(TranslationWitness {
        p,
        x,
        y,
        z,
        shifted,
        unshifted,
        gap: (shifted - unshifted).abs(),
    })
}

/// A collinear triple showing `alpha_p` is not translation invariant, `p != 1`.
///
/// With `λ = μ = 1` the two sides are `|2^p - (γ+1)^p|` and `|1 - γ^p|`; `γ` is
/// scanned toward 0 for `p > 0` and toward infinity for `p < 0`. For `p = 0`
/// the triple `λ = 1`, `μ = -2`, `γ = -1` is used.
pub fn translation_invariance_probe(
    spec: &NormSpec,
    p: f64,
    dim: usize,
) -> Result<TranslationWitness> {
    check_exponent(p)?;
    if p == 1.0 {
        return Err(Error::InvalidParameter(
            "alpha_1 is the norm distance, translation invariant".into(),
        ));
    }
    if p == 0.0 {
        return translation_gap(spec, p, dim, 1.0, -2.0, -1.0);
    }
    for g in halving_grid() {
        let gamma = if p > 0.0 { g } else { 1.0 / g };
        let w = translation_gap(spec, p, dim, 1.0, 1.0, gamma)?;
        if w.gap > tol::BOUND_SLACK * w.shifted.max(w.unshifted) {
            return Ok(w);
        }
    }
    Err(Error::WitnessNotFound(format!(
        "no translation gap for alpha_{p} on the scan grid"
    )))
}

/// Closed-form index laws for test sequences along a unit vector `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceLaw {
    /// `x_n = (1 + 1/n) a`, limit candidate `a`.
    Converging,
    /// `x_n = e_1` for even `n`, `e_2` for odd `n`, limit candidate `e_1`.
    Alternating,
    /// `x_n = n a`, limit candidate `a`.
    Scaled,
    /// `x_n = a / n`, limit candidate `0`, which lies outside the space.
    Harmonic,
}

impl SequenceLaw {
    pub fn term(self, a: &Vector, b: &Vector, n: u64) -> Vector {
        let n = n as f64;
        match self {
            SequenceLaw::Converging => a.scaled(1.0 + 1.0 / n),
            SequenceLaw::Alternating => {
                if n % 2.0 == 0.0 {
                    a.clone()
                } else {
                    b.clone()
                }
            }
            SequenceLaw::Scaled => a.scaled(n),
            SequenceLaw::Harmonic => a.scaled(1.0 / n),
        }
    }

    pub fn limit(self, a: &Vector) -> Option<Vector> {
        match self {
            SequenceLaw::Harmonic => None,
            _ => Some(a.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRow {
    pub n: u64,
    /// `‖x_n - L‖`
    pub norm_distance: f64,
    /// `alpha_p[x_n, L]`
    pub alpha_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub law: SequenceLaw,
    pub p: f64,
    pub rows: Vec<ConsistencyRow>,
    pub converges_in_norm: bool,
    pub converges_in_alpha: bool,
    pub agree: bool,
}

/// Distances at or below this on the tail of the index schedule count as convergence.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-6;

/// Indices `10^k` and `10^k + 1` for `k = 1..=8`; the pairs expose oscillation.
fn index_schedule() -> Vec<u64> {
    (1..=8)
        .flat_map(|k| [10u64.pow(k), 10u64.pow(k) + 1])
        .collect()
}

/// Compares convergence of a sequence to its limit candidate under `‖·‖` and `alpha_p`.
///
/// A sequence is judged convergent when both distances at the last two
/// scheduled indices are below [`CONVERGENCE_THRESHOLD`].
pub fn consistency_check(
    spec: &NormSpec,
    p: f64,
    dim: usize,
    law: SequenceLaw,
) -> Result<ConsistencyReport> {
    check_exponent(p)?;
    if p == 0.0 {
        return Err(Error::InvalidParameter("p must be non-zero".into()));
    }
    if dim < 2 && law == SequenceLaw::Alternating {
        return Err(Error::InvalidParameter(
            "the alternating law needs dimension >= 2".into(),
        ));
    }
    let a = spec.unit_axis(dim);
    let b = if dim >= 2 {
        let e = Vector::basis(dim, 1);
        let n = spec.norm(&e)?;
        e.scaled(1.0 / n)
    } else {
        a.clone()
    };
    let limit = law
        .limit(&a)
        .ok_or_else(|| Error::InvalidParameter("limit candidate is 0".into()))?;
    let rows = index_schedule()
        .into_iter()
        .map(|n| {
            let xn = law.term(&a, &b, n);
            let norm_distance = spec.norm(&xn.sub(&limit))?;
            let alpha_distance = alpha_p(spec, &xn, &limit, p)?;
            Ok(ConsistencyRow {
                n,
                norm_distance,
                alpha_distance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = &rows[rows.len() - 2..];
    let converges_in_norm = tail
        .iter()
        .all(|r| r.norm_distance <= CONVERGENCE_THRESHOLD);
    let converges_in_alpha = tail
        .iter()
        .all(|r| r.alpha_distance <= CONVERGENCE_THRESHOLD);
    Ok(ConsistencyReport {
        law,
        p,
        rows,
        converges_in_norm,
        converges_in_alpha,
        agree: converges_in_norm == converges_in_alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusRow {
    /// Starting index `N`.
    pub from: u64,
    /// Largest `d(x_m, x_n)` over sampled `m, n >= N`.
    pub observed: f64,
    /// `sup_{m,n >= N} d(x_m, x_n)` in closed form.
    pub supremum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceExperiment {
    pub description: String,
    /// Exponent of the metric in which the sequence is Cauchy.
    pub exponent: f64,
    pub moduli: Vec<ModulusRow>,
    /// Whether the sequence has a limit inside the set. Always false here.
    pub limit_in_set: bool,
    pub reason: String,
}

impl SequenceExperiment {
    pub fn monotone(&self) -> bool {
        self.moduli.windows(2).all(|w| {
            w[1].supremum <= w[0].supremum && w[1].observed <= w[0].observed * (1.0 + tol::REL)
        })
    }
}

fn modulus_table(
    spec: &NormSpec,
    a: &Vector,
    exponent: f64,
    scale: impl Fn(f64) -> f64,
    resolution: u64,
) -> Result<Vec<ModulusRow>> {
    let mut out = Vec::new();
    let mut from = 1u64;
    while from <= resolution {
        let idx: Vec<u64> = [1u64, 2, 10, 100, 1000].iter().map(|k| from * k).collect();
        let mut observed = 0.0f64;
        for &m in &idx {
            for &n in &idx {
                let (xm, xn) = (a.scaled(scale(m as f64)), a.scaled(scale(n as f64)));
                if m != n {
                    observed = observed.max(alpha_p(spec, &xm, &xn, exponent)?);
                }
            }
        }
        // scale(n)^exponent decreases to 0, so the supremum is attained at n = N, m → ∞
        let supremum = scale(from as f64).powf(exponent);
        out.push(ModulusRow {
            from,
            observed,
            supremum,
        });
        from *= 10;
    }
    Ok(out)
}

/// Cauchy sequences without limits for `p > 0 > q`, on the sets
/// `A = {λa : λ >= 1}` and `B = {λa : 0 < λ <= 1}`.
///
/// `n a` in `A` is `alpha_q`-Cauchy, but a limit `x` would need `‖x‖^q = 0`.
/// `a / n` in `B` is `alpha_p`-Cauchy and tends to the excluded origin.
pub fn completeness_experiment(
    spec: &NormSpec,
    p: f64,
    q: f64,
    dim: usize,
    resolution: u64,
) -> Result<(SequenceExperiment, SequenceExperiment)> {
    check_exponent(p)?;
    check_exponent(q)?;
    if !(p > 0.0 && q < 0.0) {
        return Err(Error::InvalidParameter("requires p > 0 > q".into()));
    }
    if resolution == 0 {
        return Err(Error::InvalidParameter(
            "resolution must be positive".into(),
        ));
    }
    let a = spec.unit_axis(dim);
    let in_a = SequenceExperiment {
        description: "x_n = n a in A = {λa : λ >= 1}".into(),
        exponent: q,
        moduli: modulus_table(spec, &a, q, |n| n, resolution)?,
        limit_in_set: false,
        reason: "a limit x would satisfy ‖x‖^q = lim n^q = 0".into(),
    };
    let in_b = SequenceExperiment {
        description: "x_n = a / n in B = {λa : 0 < λ <= 1}".into(),
        exponent: p,
        moduli: modulus_table(spec, &a, p, |n| 1.0 / n, resolution)?,
        limit_in_set: false,
        reason: "the norm limit is 0, which is not in B".into(),
    };
    Ok((in_a, in_b))
}

/// `alpha_p` on a collinear pair through the general kernel, for cross-checks.
pub fn collinear_alpha_kernel(
    spec: &NormSpec,
    dim: usize,
    p: f64,
    lambda: f64,
    mu: f64,
) -> Result<f64> {
    let a = spec.unit_axis(dim);
    let (x, y) = (a.scaled(lambda), a.scaled(mu));
    let (nx, ny) = pair_norms(spec, &x, &y)?;
    Ok(alpha_with_norms(spec, &x, &y, nx, ny, p))
}
