//! Upper and lower bounds on `alpha_p` in terms of `alpha_q`, `beta_p`, and
//! segment integrals, plus the refinement chains between them.
//!
//! Every bound is evaluated into a [`BoundReport`]. A report never fails
//! because an inequality is violated; it records `holds = false` instead, so
//! property runs can tell a numerical bug from an input error.

use serde::{Deserialize, Serialize};

use crate::distance::{alpha_with_norms, beta_with_norms, check_exponent, norms_equal, pair_norms};
use crate::error::{Error, Result};
use crate::line::min_over_line;
use crate::norm::NormSpec;
use crate::quadrature::{
    graded_breakpoints, integrate, integrate_with_breakpoints, QuadConfig, QuadratureResult,
};
use crate::tol;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Holds {
    pub lower: Option<bool>,
    pub upper: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub value: f64,
    pub slack_lower: Option<f64>,
    pub slack_upper: Option<f64>,
    pub holds: Holds,
}

fn side_holds(slack: f64, value: f64, bound: f64) -> bool {
    slack >= -tol::BOUND_SLACK * value.abs().max(bound.abs())
}

impl BoundReport {
    pub fn new(
        name: impl Into<String>,
        lower: Option<f64>,
        upper: Option<f64>,
        value: f64,
    ) -> Self {
        let slack_lower = lower.map(|l| value - l);
        let slack_upper = upper.map(|u| u - value);
        let holds = Holds {
            lower: lower.zip(slack_lower).map(|(l, s)| side_holds(s, value, l)),
            upper: upper.zip(slack_upper).map(|(u, s)| side_holds(s, value, u)),
        };
        Self {
            name: name.into(),
            lower,
            upper,
            value,
            slack_lower,
            slack_upper,
            holds,
        }
    }

    /// True when every evaluated side holds.
    pub fn holds(&self) -> bool {
        self.holds.lower.unwrap_or(true) && self.holds.upper.unwrap_or(true)
    }

    pub fn relative_slack_lower(&self) -> Option<f64> {
        self.lower.map(|l| rel_slack(self.value - l, self.value, l))
    }

    pub fn relative_slack_upper(&self) -> Option<f64> {
        self.upper.map(|u| rel_slack(u - self.value, self.value, u))
    }
}

fn rel_slack(slack: f64, a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        slack / scale
    }
}

/// A bound that was either evaluated or skipped as inapplicable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BoundOutcome {
    Evaluated(BoundReport),
    Skipped { name: String, reason: String },
}

/// Position of `p/q` relative to 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioCase {
    /// `p/q >= 1`
    AtLeastOne,
    /// `0 <= p/q < 1`
    UnitInterval,
    /// `p/q < 0`
    Negative,
}

impl RatioCase {
    /// Decided from the signs of `p`, `q` and `|p|` vs `|q|`, never from a rounded quotient.
    pub fn classify(p: f64, q: f64) -> Self {
        if p == 0.0 {
            RatioCase::UnitInterval
        } else if (p > 0.0) != (q > 0.0) {
            RatioCase::Negative
        } else if p.abs() >= q.abs() {
            RatioCase::AtLeastOne
        } else {
            RatioCase::UnitInterval
        }
    }
}

fn check_q(q: f64) -> Result<()> {
    check_exponent(q)?;
    if q == 0.0 {
        return Err(Error::InvalidParameter("q must be non-zero".into()));
    }
    Ok(())
}

fn max_pow(nx: f64, ny: f64, e: f64) -> f64 {
    nx.powf(e).max(ny.powf(e))
}

fn min_pow(nx: f64, ny: f64, e: f64) -> f64 {
    nx.powf(e).min(ny.powf(e))
}

/// Two-sided comparison valid for every `p` and `q != 0`:
///
/// ```text
/// |p|/(|p|+|p-q|) min(‖x‖^(p-q), ‖y‖^(p-q)) alpha_q
///     <= alpha_p <=
/// (|q|+|p-q|)/|q| max(‖x‖^(p-q), ‖y‖^(p-q)) alpha_q
/// ```
pub fn comparison_bound(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: f64,
    q: f64,
) -> Result<BoundReport> {
    check_exponent(p)?;
    check_q(q)?;
    let (nx, ny) = pair_norms(spec, x, y)?;
    let ap = alpha_with_norms(spec, x, y, nx, ny, p);
    let aq = alpha_with_norms(spec, x, y, nx, ny, q);
    let d = (p - q).abs();
    let lower_c = if p == 0.0 {
        0.0
    } else {
        p.abs() / (p.abs() + d)
    };
    let lower = lower_c * min_pow(nx, ny, p - q) * aq;
    let upper = (q.abs() + d) / q.abs() * max_pow(nx, ny, p - q) * aq;
    Ok(BoundReport::new("comparison", Some(lower), Some(upper), ap))
}

/// The sharp case-split comparison between `alpha_p` and `alpha_q`.
///
/// | case | lower | upper |
/// |------|-------|-------|
/// | `p/q >= 1` | `p/(2p-q) M alpha_q` | `(p/q) M alpha_q`, `M = max(‖·‖^(p-q))` |
/// | `0 <= p/q < 1` | `(p/q) alpha_q / N` | `(2q-p)/q alpha_q / N`, `N = max(‖·‖^(q-p))` |
/// | `p/q < 0` | `p/(2p-q) R alpha_q` | `(2q-p)/q R alpha_q`, `R = max(‖·‖^p)/max(‖·‖^q)` |
///
/// `p = q` falls in the first row with both constants equal to 1.
pub fn refined_comparison_bound(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: f64,
    q: f64,
) -> Result<BoundReport> {
    check_exponent(p)?;
    check_q(q)?;
    let (nx, ny) = pair_norms(spec, x, y)?;
    let ap = alpha_with_norms(spec, x, y, nx, ny, p);
    let aq = alpha_with_norms(spec, x, y, nx, ny, q);
    let case = RatioCase::classify(p, q);
    let (name, lower, upper) = match case {
        RatioCase::AtLeastOne => {
            let m = max_pow(nx, ny, p - q);
            (
                "refined_comparison[p/q>=1]",
                p / (2.0 * p - q) * m * aq,
                p / q * m * aq,
            )
        }
        RatioCase::UnitInterval => {
            let n = max_pow(nx, ny, q - p);
            (
                "refined_comparison[0<=p/q<1]",
                p / q * aq / n,
                (2.0 * q - p) / q * aq / n,
            )
        }
        RatioCase::Negative => {
            let r = max_pow(nx, ny, p) / max_pow(nx, ny, q);
            (
                "refined_comparison[p/q<0]",
                p / (2.0 * p - q) * r * aq,
                (2.0 * q - p) / q * r * aq,
            )
        }
    };
    Ok(BoundReport::new(name, Some(lower), Some(upper), ap))
}

/// Bounds `alpha_p` by the skew distance `beta_p`, for `p != 2`.
///
/// The case split is on `p/(2-p)`, with `K = max(‖x‖^(p-1)‖y‖^(1-p), ‖y‖^(p-1)‖x‖^(1-p))`.
/// At `p = 0` the upper side reads `alpha_0 <= 2 min(‖x‖/‖y‖, ‖y‖/‖x‖) beta_0`.
pub fn skew_comparison_bound(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: f64,
) -> Result<BoundReport> {
    check_exponent(p)?;
    if p == 2.0 {
        return Err(Error::InvalidParameter(
            "p = 2 makes the companion exponent 2 - p vanish".into(),
        ));
    }
    let (nx, ny) = pair_norms(spec, x, y)?;
    let ap = alpha_with_norms(spec, x, y, nx, ny, p);
    let bp = beta_with_norms(spec, x, y, nx, ny, p);
    let k = (nx.powf(p - 1.0) * ny.powf(1.0 - p)).max(ny.powf(p - 1.0) * nx.powf(1.0 - p));
    let (name, lower, upper) = match RatioCase::classify(p, 2.0 - p) {
        RatioCase::AtLeastOne => (
            "skew_comparison[p/(2-p)>=1]",
            p / (3.0 * p - 2.0) * k * bp,
            p / (2.0 - p) * k * bp,
        ),
        RatioCase::UnitInterval => {
            let name = if p == 0.0 {
                "skew_comparison[p=0]"
            } else {
                "skew_comparison[0<=p/(2-p)<1]"
            };
            (
                name,
                p / (2.0 - p) * bp / k,
                (4.0 - 3.0 * p) / (2.0 - p) * bp / k,
            )
        }
        RatioCase::Negative => {
            let r = max_pow(nx, ny, p) / (nx * ny.powf(p - 1.0)).max(ny * nx.powf(p - 1.0));
            (
                "skew_comparison[p/(2-p)<0]",
                p / (3.0 * p - 2.0) * r * bp,
                (4.0 - 3.0 * p) / (2.0 - p) * r * bp,
            )
        }
    };
    Ok(BoundReport::new(name, Some(lower), Some(upper), ap))
}

/// Dunkl–Williams, Gurariĭ and Hile bounds. Inapplicable ones are skipped with a reason.
pub fn classical_bounds(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: f64,
) -> Result<Vec<BoundOutcome>> {
    check_exponent(p)?;
    let (nx, ny) = pair_norms(spec, x, y)?;
    let dist = spec.norm_unchecked(x.sub(y).coords());
    let mut out = Vec::with_capacity(3);

    let a0 = alpha_with_norms(spec, x, y, nx, ny, 0.0);
    out.push(BoundOutcome::Evaluated(BoundReport::new(
        "dunkl_williams",
        None,
        Some(4.0 * dist / (nx + ny)),
        a0,
    )));

    let ap = alpha_with_norms(spec, x, y, nx, ny, p);
    if p >= 1.0 {
        out.push(BoundOutcome::Evaluated(BoundReport::new(
            "gurarii",
            Some(2f64.powf(-p) * dist.powf(p)),
            None,
            ap,
        )));
    } else {
        out.push(BoundOutcome::Skipped {
            name: "gurarii".into(),
            reason: "requires p >= 1".into(),
        });
    }

    if p < 1.0 {
        out.push(BoundOutcome::Skipped {
            name: "hile".into(),
            reason: "requires p >= 1".into(),
        });
    } else if norms_equal(nx, ny, tol::NORM_EQUALITY) {
        out.push(BoundOutcome::Skipped {
            name: "hile".into(),
            reason: "requires ‖x‖ != ‖y‖".into(),
        });
    } else {
        let c = (ny.powf(p) - nx.powf(p)) / (ny - nx);
        out.push(BoundOutcome::Evaluated(BoundReport::new(
            "hile",
            None,
            Some(c * dist),
            ap,
        )));
    }
    Ok(out)
}

/// `∫_0^1 ‖(1-t)‖x‖^(s-1) x + t‖y‖^(s-1) y‖^e dt`.
///
/// For `e < 0` the segment must stay away from the origin: the minimum of the
/// norm along the whole line must exceed `1e-9 * max(‖x‖^s, ‖y‖^s)`, i.e. the
/// vectors must be linearly independent. Near-singular integrands get a
/// partition graded toward the closest point to the origin.
pub fn segment_integral(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    s: f64,
    e: f64,
    quad: &QuadConfig,
) -> Result<QuadratureResult> {
    let (nx, ny) = pair_norms(spec, x, y)?;
    let u = x.scaled(nx.powf(s - 1.0));
    let v = y.scaled(ny.powf(s - 1.0));
    let dir = v.sub(&u);
    let f = |t: f64| {
        spec.norm_unchecked(u.lincomb(1.0 - t, &v, t).coords())
            .powf(e)
    };
    if e == 0.0 {
        return Ok(QuadratureResult {
            value: 1.0,
            error_estimate: 0.0,
            subdivisions: 0,
            singular_endpoint: false,
        });
    }
    if e > 0.0 {
        return integrate(f, 0.0, 1.0, quad);
    }
    if dir.is_zero() {
        return Err(Error::LinearlyDependent);
    }
    let scale = nx.powf(s).max(ny.powf(s));
    let closest = min_over_line(spec, &u, &dir)?;
    if closest.value < tol::SEGMENT_CLEARANCE * scale {
        return Err(Error::LinearlyDependent);
    }
    let ratio = closest.value / scale;
    if (0.0..=1.0).contains(&closest.t_star) && ratio < 1e-2 {
        let levels = (-ratio.log2()).ceil() as u32 + 4;
        let mut r =
            integrate_with_breakpoints(f, &graded_breakpoints(closest.t_star, levels), quad)?;
        r.singular_endpoint = true;
        Ok(r)
    } else {
        integrate(f, 0.0, 1.0, quad)
    }
}

/// Upper bound through the segment integral:
///
/// ```text
/// alpha_p <= c alpha_q ∫_0^1 ‖(1-t)‖x‖^(q-1) x + t‖y‖^(q-1) y‖^(p/q-1) dt
/// ```
///
/// with `c = p/q` when `p/q >= 1` and `c = (2q-p)/q` otherwise; the second case
/// needs linearly independent `x`, `y`.
pub fn dragomir_integral_bound(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: f64,
    q: f64,
    quad: &QuadConfig,
) -> Result<(BoundReport, QuadratureResult)> {
    check_exponent(p)?;
    check_q(q)?;
    let (nx, ny) = pair_norms(spec, x, y)?;
    let ap = alpha_with_norms(spec, x, y, nx, ny, p);
    let aq = alpha_with_norms(spec, x, y, nx, ny, q);
    let (factor, name) = match RatioCase::classify(p, q) {
        RatioCase::AtLeastOne => (p / q, "dragomir_upper[p/q>=1]"),
        _ => ((2.0 * q - p) / q, "dragomir_upper[p/q<1]"),
    };
    let integral = segment_integral(spec, x, y, q, p / q - 1.0, quad)?;
    let report = BoundReport::new(name, None, Some(factor * aq * integral.value), ap);
    Ok((report, integral))
}

/// Lower bound obtained by exchanging the roles of `p` and `q` in the integral bound:
///
/// ```text
/// alpha_p >= c alpha_q / ∫_0^1 ‖(1-t)‖x‖^(p-1) x + t‖y‖^(p-1) y‖^(q/p-1) dt
/// ```
///
/// with `c = p/q` for `0 < p/q <= 1` and `c = p/(2p-q)` otherwise.
pub fn dragomir_reverse_bound(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: f64,
    q: f64,
    quad: &QuadConfig,
) -> Result<BoundReport> {
    check_exponent(p)?;
    check_q(q)?;
    if p == 0.0 {
        return Err(Error::InvalidParameter("p must be non-zero".into()));
    }
    let (nx, ny) = pair_norms(spec, x, y)?;
    check_independent(spec, x, y)?;
    let ap = alpha_with_norms(spec, x, y, nx, ny, p);
    let aq = alpha_with_norms(spec, x, y, nx, ny, q);
    let (factor, name) = if p.abs() <= q.abs() && (p > 0.0) == (q > 0.0) {
        (p / q, "dragomir_lower[0<p/q<=1]")
    } else {
        (p / (2.0 * p - q), "dragomir_lower[p/q>1 or p/q<0]")
    };
    let integral = segment_integral(spec, x, y, p, q / p - 1.0, quad)?;
    Ok(BoundReport::new(
        name,
        Some(factor * aq / integral.value),
        None,
        ap,
    ))
}

/// Independence of `x`, `y` measured by the distance from `x` to the line through `y`.
fn check_independent(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<()> {
    let (nx, _) = pair_norms(spec, x, y)?;
    let m = min_over_line(spec, x, y)?;
    if m.value <= tol::SEGMENT_CLEARANCE * nx {
        return Err(Error::LinearlyDependent);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainTerm {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub p: f64,
    pub q: f64,
    pub terms: Vec<ChainTerm>,
    /// Smallest `(next - prev) / max(|prev|, |next|)` over consecutive terms.
    pub worst_relative_step: f64,
    pub nondecreasing: bool,
}

impl ChainReport {
    fn new(p: f64, q: f64, terms: Vec<ChainTerm>) -> Self {
        let worst = terms
            .windows(2)
            .map(|w| rel_slack(w[1].value - w[0].value, w[0].value, w[1].value))
            .fold(f64::INFINITY, f64::min);
        Self {
            p,
            q,
            nondecreasing: worst >= -tol::BOUND_SLACK,
            worst_relative_step: worst,
            terms,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.value).collect()
    }
}

fn term(label: &str, value: f64) -> ChainTerm {
    ChainTerm {
        label: label.into(),
        value,
    }
}

fn chain_common(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: f64,
    q: f64,
    min_ratio: f64,
) -> Result<(f64, f64, f64, f64)> {
    check_exponent(p)?;
    check_q(q)?;
    if !(p / q >= min_ratio) {
        return Err(Error::InvalidParameter(format!(
            "requires p/q >= {min_ratio}"
        )));
    }
    let (nx, ny) = pair_norms(spec, x, y)?;
    if norms_equal(nx, ny, tol::NORM_EQUALITY) {
        return Err(Error::InvalidParameter("requires ‖x‖ != ‖y‖".into()));
    }
    let ap = alpha_with_norms(spec, x, y, nx, ny, p);
    let aq = alpha_with_norms(spec, x, y, nx, ny, q);
    Ok((nx, ny, ap, aq))
}

/// The three-term refinement of Hile's inequality, for `p/q >= 1` and `‖x‖ != ‖y‖`:
/// `alpha_p <= (p/q) alpha_q ∫‖segment‖^(p/q-1) <= (‖y‖^p-‖x‖^p)/(‖y‖^q-‖x‖^q) alpha_q`.
pub fn hile_refinement_chain(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: f64,
    q: f64,
    quad: &QuadConfig,
) -> Result<ChainReport> {
    let (nx, ny, ap, aq) = chain_common(spec, x, y, p, q, 1.0)?;
    let seg = segment_integral(spec, x, y, q, p / q - 1.0, quad)?;
    let hile = (ny.powf(p) - nx.powf(p)) / (ny.powf(q) - nx.powf(q)) * aq;
    Ok(ChainReport::new(
        p,
        q,
        vec![
            term("alpha_p", ap),
            term("segment_integral", p / q * aq * seg.value),
            term("hile", hile),
        ],
    ))
}

/// The six-term chain for `p/q >= 2` and `‖x‖ != ‖y‖`:
///
/// 1. `alpha_p`
/// 2. `(p/q) alpha_q ∫ ‖(1-t)‖x‖^(q-1)x + t‖y‖^(q-1)y‖^(p/q-1)`
/// 3. `(p/q) alpha_q ∫ ((1-t)‖x‖^q + t‖y‖^q)^(p/q-1)` (by quadrature)
/// 4. `(‖y‖^p - ‖x‖^p)/(‖y‖^q - ‖x‖^q) alpha_q` (closed form of 3)
/// 5. `(p/q) alpha_q (‖x‖^(p-q) + ‖y‖^(p-q))/2` (Hermite–Hadamard)
/// 6. `(p/q) alpha_q max(‖x‖^(p-q), ‖y‖^(p-q))`
pub fn hermite_hadamard_chain(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: f64,
    q: f64,
    quad: &QuadConfig,
) -> Result<ChainReport> {
    let (nx, ny, ap, aq) = chain_common(spec, x, y, p, q, 2.0)?;
    let r = p / q;
    let seg = segment_integral(spec, x, y, q, r - 1.0, quad)?;
    let (a, b) = (nx.powf(q), ny.powf(q));
    let scalar = integrate(|t| ((1.0 - t) * a + t * b).powf(r - 1.0), 0.0, 1.0, quad)?;
    let hile = (ny.powf(p) - nx.powf(p)) / (b - a) * aq;
    let (ex, ey) = (nx.powf(p - q), ny.powf(p - q));
    Ok(ChainReport::new(
        p,
        q,
        vec![
            term("alpha_p", ap),
            term("segment_integral", r * aq * seg.value),
            term("scalar_integral", r * aq * scalar.value),
            term("hile", hile),
            term("hermite_hadamard_midpoint", r * aq * 0.5 * (ex + ey)),
            term("max_power", r * aq * ex.max(ey)),
        ],
    ))
}

/// `sqrt(‖x‖²‖y‖² - ⟨x,y⟩²) <= 2‖x‖‖y‖‖x-y‖² / ‖ ‖y‖x - ‖x‖y ‖`. Gram norms only.
pub fn cauchy_schwarz_error_bound(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<BoundReport> {
    if !spec.has_inner_product() {
        return Err(Error::NoInnerProduct);
    }
    let (nx, ny) = pair_norms(spec, x, y)?;
    let ip = spec.inner_product(x, y)?;
    let denom = spec.norm_unchecked(x.lincomb(ny, y, -nx).coords());
    if denom <= 1e-14 * nx * ny {
        return Err(Error::InvalidParameter("requires ‖y‖x != ‖x‖y".into()));
    }
    let dist = spec.norm_unchecked(x.sub(y).coords());
    let lhs = (nx * nx * ny * ny - ip * ip).max(0.0).sqrt();
    Ok(BoundReport::new(
        "cauchy_schwarz_error",
        None,
        Some(2.0 * nx * ny * dist * dist / denom),
        lhs,
    ))
}

/// `2‖x-y‖² / sqrt(‖x‖²‖y‖² - ⟨x,y⟩²)`, the closed-form cap on the `p = 0`, `q = 1`
/// integral bound in an inner product space.
pub fn angular_integral_cap(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<f64> {
    if !spec.has_inner_product() {
        return Err(Error::NoInnerProduct);
    }
    let (nx, ny) = pair_norms(spec, x, y)?;
    let ip = spec.inner_product(x, y)?;
    let disc = nx * nx * ny * ny - ip * ip;
    if disc <= tol::DEPENDENCE * nx * nx * ny * ny {
        return Err(Error::LinearlyDependent);
    }
    let dist = spec.norm_unchecked(x.sub(y).coords());
    Ok(2.0 * dist * dist / disc.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub p: f64,
    pub q: f64,
    pub case: RatioCase,
    /// `p/q` for `p/q >= 1`, otherwise `2 - p/q`.
    pub limit: f64,
    pub rows: Vec<SweepRow>,
}

/// Extremal family showing the upper constants of [`refined_comparison_bound`] are sharp.
///
/// In `l^1` on `R^2`, `x = (1+ε)^((1-q)/q) (1, ε)` and `y = (1, 0)`. The ratio of
/// `alpha_p` to the upper bound without its constant tends to `p/q` (when
/// `p/q >= 1`) or `2 - p/q` (otherwise) as `ε → 0+`.
pub fn best_constant_sweep(p: f64, q: f64, epsilons: &[f64]) -> Result<SweepTable> {
    check_exponent(p)?;
    check_q(q)?;
    if epsilons.is_empty() {
        return Err(Error::InvalidParameter("empty epsilon list".into()));
    }
    let spec = NormSpec::l1();
    let case = RatioCase::classify(p, q);
    let limit = match case {
        RatioCase::AtLeastOne => p / q,
        _ => 2.0 - p / q,
    };
    let y = Vector::from_slice(&[1.0, 0.0]);
    let rows = epsilons
        .iter()
        .map(|&eps| {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "epsilon {eps} must be positive"
                )));
            }
            let s = (1.0 + eps).powf((1.0 - q) / q);
            let x = Vector::new(vec![s, s * eps])?;
            let (nx, ny) = pair_norms(&spec, &x, &y)?;
            let ap = alpha_with_norms(&spec, &x, &y, nx, ny, p);
            let aq = alpha_with_norms(&spec, &x, &y, nx, ny, q);
            let ratio = match case {
                RatioCase::AtLeastOne => ap / (aq * max_pow(nx, ny, p - q)),
                RatioCase::UnitInterval => ap / aq * max_pow(nx, ny, q - p),
                RatioCase::Negative => ap / aq * max_pow(nx, ny, q) / max_pow(nx, ny, p),
            };
            Ok(SweepRow {
                epsilon: eps,
                ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        p,
        q,
        case,
        limit,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c)
    }

    fn pair() -> (Vector, Vector) {
        (v(&[3.0, 0.0]), v(&[0.0, 4.0]))
    }

    #[test]
    fn classify_cases() {
        assert_eq!(RatioCase::classify(2.0, 1.0), RatioCase::AtLeastOne);
        assert_eq!(RatioCase::classify(1.0, 1.0), RatioCase::AtLeastOne);
        assert_eq!(RatioCase::classify(-3.0, -2.0), RatioCase::AtLeastOne);
        assert_eq!(RatioCase::classify(1.0, 2.0), RatioCase::UnitInterval);
        assert_eq!(RatioCase::classify(0.0, -2.0), RatioCase::UnitInterval);
        assert_eq!(RatioCase::classify(-1.0, 1.0), RatioCase::Negative);
    }

    #[test]
    fn comparison_hand_values() {
        let (x, y) = pair();
        let r = comparison_bound(&NormSpec::l2(), &x, &y, 2.0, 1.0).unwrap();
        assert!((r.lower.unwrap() - 10.0).abs() < 1e-12);
        assert!((r.upper.unwrap() - 40.0).abs() < 1e-12);
        assert!(r.holds());
        let r =
            comparison_bound(&NormSpec::l1(), &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), 0.0, 1.0).unwrap();
        assert_eq!(r.lower.unwrap(), 0.0);
        assert_eq!(r.upper.unwrap(), 4.0);
        assert_eq!(r.value, 2.0);
    }

    #[test]
    fn equal_exponents_collapse() {
        let (x, y) = (v(&[1.0, -2.0, 0.5]), v(&[0.2, 0.4, 3.0]));
        for f in [comparison_bound, refined_comparison_bound] {
            let r = f(&NormSpec::linf(), &x, &y, 1.7, 1.7).unwrap();
            assert!((r.lower.unwrap() - r.value).abs() < 1e-14 * r.value);
            assert!((r.upper.unwrap() - r.value).abs() < 1e-14 * r.value);
        }
    }

    #[test]
    fn refined_hand_values() {
        let (x, y) = pair();
        let r = refined_comparison_bound(&NormSpec::l2(), &x, &y, 2.0, 1.0).unwrap();
        assert!((r.lower.unwrap() - 40.0 / 3.0).abs() < 1e-12);
        assert!((r.upper.unwrap() - 40.0).abs() < 1e-12);
        let r =
            refined_comparison_bound(&NormSpec::l1(), &v(&[2.0, 0.0]), &v(&[0.0, 1.0]), -1.0, 1.0)
                .unwrap();
        assert!((r.value - 1.5).abs() < 1e-15);
        assert!((r.lower.unwrap() - 0.5).abs() < 1e-15);
        assert!((r.upper.unwrap() - 4.5).abs() < 1e-15);
        assert!(r.holds());
    }

    #[test]
    fn skew_comparison_examples() {
        let (x, y) = pair();
        let r = skew_comparison_bound(&NormSpec::l2(), &x, &y, 0.0).unwrap();
        let beta0 = (9.0f64 / 16.0 + 16.0 / 9.0).sqrt();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-15);
        assert!((r.upper.unwrap() - 2.0 * 0.75 * beta0).abs() < 1e-12);
        assert!(r.holds());
        let r = skew_comparison_bound(&NormSpec::l1(), &x, &y, 1.0).unwrap();
        assert!((r.lower.unwrap() - r.value).abs() < 1e-14);
        assert!((r.upper.unwrap() - r.value).abs() < 1e-14);
        assert!(skew_comparison_bound(&NormSpec::l1(), &x, &y, 2.0).is_err());
    }

    #[test]
    fn classical_examples() {
        let (x, y) = pair();
        let out = classical_bounds(&NormSpec::l2(), &x, &y, 2.0).unwrap();
        let get = |n: &str| {
            out.iter()
                .find_map(|o| match o {
                    BoundOutcome::Evaluated(r) if r.name == n => Some(r.clone()),
                    _ => None,
                })
                .unwrap()
        };
        assert!((get("dunkl_williams").upper.unwrap() - 20.0 / 7.0).abs() < 1e-14);
        assert!((get("gurarii").lower.unwrap() - 6.25).abs() < 1e-14);
        assert!((get("hile").upper.unwrap() - 35.0).abs() < 1e-12);
        assert!(out
            .iter()
            .all(|o| matches!(o, BoundOutcome::Evaluated(r) if r.holds())));

        let same = classical_bounds(&NormSpec::l2(), &x, &x, 2.0).unwrap();
        assert!(matches!(&same[2], BoundOutcome::Skipped { name, .. } if name == "hile"));
        let low = classical_bounds(&NormSpec::l2(), &x, &y, 0.5).unwrap();
        assert_eq!(
            low.iter()
                .filter(|o| matches!(o, BoundOutcome::Skipped { .. }))
                .count(),
            2
        );
    }

    #[test]
    fn integral_bound_p_equals_q() {
        let (x, y) = pair();
        let (r, quad) =
            dragomir_integral_bound(&NormSpec::l1(), &x, &y, 1.5, 1.5, &QuadConfig::default())
                .unwrap();
        assert_eq!(quad.value, 1.0);
        assert!((r.upper.unwrap() - r.value).abs() < 1e-14 * r.value);
    }

    #[test]
    fn integral_bound_rejects_dependent_pairs_below_one() {
        let x = v(&[1.0, 2.0]);
        let y = v(&[-2.0, -4.0]);
        let r = dragomir_integral_bound(&NormSpec::l2(), &x, &y, 0.0, 1.0, &QuadConfig::default());
        assert_eq!(r.unwrap_err(), Error::LinearlyDependent);
        // p/q >= 1 needs no independence
        assert!(
            dragomir_integral_bound(&NormSpec::l2(), &x, &y, 2.0, 1.0, &QuadConfig::default())
                .is_ok()
        );
    }

    #[test]
    fn cauchy_schwarz_examples() {
        let e = NormSpec::euclidean(2);
        let r = cauchy_schwarz_error_bound(&e, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
        assert_eq!(r.value, 1.0);
        assert!((r.upper.unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        let (x, y) = pair();
        let r = cauchy_schwarz_error_bound(&e, &x, &y).unwrap();
        assert!((r.value - 12.0).abs() < 1e-14);
        assert!((r.upper.unwrap() - 600.0 / (12.0 * 2f64.sqrt())).abs() < 1e-12);
        let x = v(&[1.0, 2.0]);
        assert!(cauchy_schwarz_error_bound(&e, &x, &x.scaled(2.0)).is_err());
    }

    #[test]
    fn chain_requires_distinct_norms_and_ratio() {
        let q = QuadConfig::default();
        let x = v(&[3.0, 0.0]);
        assert!(
            hermite_hadamard_chain(&NormSpec::l2(), &x, &v(&[0.0, 3.0]), 2.0, 1.0, &q).is_err()
        );
        assert!(
            hermite_hadamard_chain(&NormSpec::l2(), &x, &v(&[0.0, 4.0]), 1.5, 1.0, &q).is_err()
        );
    }

    #[test]
    fn sweep_rejects_empty_and_bad_eps() {
        assert!(best_constant_sweep(2.0, 1.0, &[]).is_err());
        assert!(best_constant_sweep(2.0, 1.0, &[0.0]).is_err());
        assert!(best_constant_sweep(2.0, 0.0, &[0.1]).is_err());
    }

    #[test]
    fn sweep_at_eps_one() {
        let t = best_constant_sweep(2.0, 1.0, &[1.0]).unwrap();
        assert!((t.rows[0].ratio - 1.5).abs() < 1e-15);
        assert_eq!(t.limit, 2.0);
    }
}
