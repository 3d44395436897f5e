//! Binomial-series expansions of `‖x + t y‖` and `alpha_p` in inner product spaces.
//!
//! All expansions are instances of `sqrt(1 + u) = Σ_k binom(1/2, k) u^k` for
//! `0 <= u <= 1`. For `k >= 1` the coefficients alternate in sign and decrease in
//! magnitude, so the error of a partial sum through `k = K` is at most the first
//! omitted term `|binom(1/2, K+1)| u^(K+1)`. That bound also covers `u = 1`, where
//! it decays like `K^(-3/2)`.

use serde::{Deserialize, Serialize};

use crate::distance::pair_norms;
use crate::error::{Error, Result};
use crate::norm::NormSpec;
use crate::tol;
use crate::vector::Vector;

/// Orders above this are not attempted; convergence is flagged as slow instead.
pub const MAX_ORDER: usize = 1 << 16;

const START_ORDER: usize = 8;

/// Default absolute accuracy requested by the adaptive order.
pub const DEFAULT_TARGET: f64 = 1e-13;

/// Which roles `x` and `y` play in the expansion of `alpha_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Direct,
    Swapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEvaluation {
    pub value: f64,
    /// Index of the last summed term.
    pub order: usize,
    /// `|r|`, where the series runs over `r^(2k)`.
    pub ratio: f64,
    pub tail_bound: f64,
    pub in_domain: bool,
    pub orientation: Orientation,
    /// Set when the adaptive order hit [`MAX_ORDER`] before reaching its target.
    pub slow_convergence: bool,
}

/// How many terms to sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Order {
    Fixed(usize),
    /// Double `K` from 8 until the tail bound drops below the target.
    Adaptive {
        target: f64,
    },
}

impl Default for Order {
    fn default() -> Self {
        Order::Adaptive {
            target: DEFAULT_TARGET,
        }
    }
}

/// `binom(1/2, k)`.
pub fn binom_half(k: usize) -> f64 {
    let mut b = 1.0;
    for j in 0..k {
        b *= (0.5 - j as f64) / (j as f64 + 1.0);
    }
    b
}

/// `binom(1/2, 0..=n)` by the ratio recurrence.
pub fn binom_half_coeffs(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut b = 1.0;
    out.push(b);
    for j in 0..n {
        b *= (0.5 - j as f64) / (j as f64 + 1.0);
        out.push(b);
    }
    out
}

/// Partial sum of `Σ_{k<=K} binom(1/2,k) u^k` and the alternating tail bound.
fn partial_sum(u: f64, order: usize) -> (f64, f64) {
    let mut b = 1.0;
    let mut pow = 1.0;
    let mut sum = 1.0;
    for j in 0..order {
        b *= (0.5 - j as f64) / (j as f64 + 1.0);
        pow *= u;
        sum += b * pow;
    }
    let next = b * (0.5 - order as f64) / (order as f64 + 1.0);
    (sum, (next * pow * u).abs())
}

/// Sums `scale * Σ binom(1/2,k) u^k` at the requested order.
fn sum_scaled(scale: f64, u: f64, order: Order) -> (f64, usize, f64, bool) {
    match order {
        Order::Fixed(k) => {
            let (s, tail) = partial_sum(u, k);
            (scale * s, k, scale * tail, false)
        }
        Order::Adaptive { target } => {
            let mut k = START_ORDER;
            loop {
                let (s, tail) = partial_sum(u, k);
                let tail = scale * tail;
                if tail <= target || k >= MAX_ORDER {
                    return (scale * s, k, tail, tail > target);
                }
                k *= 2;
            }
        }
    }
}

struct Gram {
    nx: f64,
    ny: f64,
    ip: f64,
    /// `sqrt(‖x‖²‖y‖² - ⟨x,y⟩²)`
    disc: f64,
}

fn gram_data(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<Gram> {
    if !spec.has_inner_product() {
        return Err(Error::NoInnerProduct);
    }
    let (nx, ny) = pair_norms(spec, x, y)?;
    let ip = spec.inner_product(x, y)?;
    let prod = nx * nx * ny * ny;
    let d2 = prod - ip * ip;
    if d2 <= tol::DEPENDENCE * prod {
        return Err(Error::LinearlyDependent);
    }
    Ok(Gram {
        nx,
        ny,
        ip,
        disc: d2.sqrt(),
    })
}

fn in_unit(r: f64) -> bool {
    r.abs() <= 1.0 + tol::REL
}

/// `‖x + t y‖ = sqrt(‖x‖²‖y‖² - ⟨x,y⟩²)/‖y‖ · Σ binom(1/2,k) r^(2k)`,
/// `r = (t‖y‖² + ⟨x,y⟩)/sqrt(‖x‖²‖y‖² - ⟨x,y⟩²)`, valid for `|r| <= 1`.
pub fn norm_line_series(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    t: f64,
    order: Order,
) -> Result<SeriesEvaluation> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter("t must be finite".into()));
    }
    let g = gram_data(spec, x, y)?;
    let r = (t * g.ny * g.ny + g.ip) / g.disc;
    if !in_unit(r) {
        return Err(Error::OutOfDomain(format!("|r| = {} exceeds 1", r.abs())));
    }
    let u = (r * r).min(1.0);
    let (value, k, tail, slow) = sum_scaled(g.disc / g.ny, u, order);
    Ok(SeriesEvaluation {
        value,
        order: k,
        ratio: r.abs(),
        tail_bound: tail,
        in_domain: true,
        orientation: Orientation::Direct,
        slow_convergence: slow,
    })
}

/// The ratio `r = (‖x‖^(1-p)‖y‖^(1+p) - ⟨x,y⟩) / sqrt(‖x‖²‖y‖² - ⟨x,y⟩²)` of the
/// `alpha_p` expansion centred at `x`.
fn alpha_ratio(g: &Gram, p: f64) -> f64 {
    (g.nx.powf(1.0 - p) * g.ny.powf(1.0 + p) - g.ip) / g.disc
}

/// The window for `⟨x,y⟩/(‖x‖‖y‖)` inside which the expansion centred at `x`
/// converges: `(ρ ∓ sqrt(2 - ρ²))/2` with `ρ = (‖y‖/‖x‖)^p`. `None` when `ρ² > 2`.
pub fn convergence_window(nx: f64, ny: f64, p: f64) -> Option<(f64, f64)> {
    let rho = (ny / nx).powf(p);
    let rest = 2.0 - rho * rho;
    if rest < 0.0 {
        return None;
    }
    let s = rest.sqrt();
    Some(((rho - s) / 2.0, (rho + s) / 2.0))
}

/// `alpha_p[x,y] = sqrt(‖x‖²‖y‖² - ⟨x,y⟩²)/(‖x‖^(1-p)‖y‖) · Σ binom(1/2,k) r^(2k)`.
///
/// When `|r| > 1` the expansion centred at `y` is tried; if that also fails the
/// pair is out of domain.
pub fn alpha_p_series(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: f64,
    order: Order,
) -> Result<SeriesEvaluation> {
    if !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "exponent p = {p} must be finite"
        )));
    }
    let g = gram_data(spec, x, y)?;
    let swapped = Gram {
        nx: g.ny,
        ny: g.nx,
        ip: g.ip,
        disc: g.disc,
    };
    let (g, r, orientation) = {
        let r = alpha_ratio(&g, p);
        if in_unit(r) {
            (g, r, Orientation::Direct)
        } else {
            let rs = alpha_ratio(&swapped, p);
            if !in_unit(rs) {
                return Err(Error::OutOfDomain(format!(
                    "|r| = {} and {} with roles swapped; both exceed 1",
                    r.abs(),
                    rs.abs()
                )));
            }
            (swapped, rs, Orientation::Swapped)
        }
    };
    let scale = g.disc / (g.nx.powf(1.0 - p) * g.ny);
    let (value, k, tail, slow) = sum_scaled(scale, (r * r).min(1.0), order);
    Ok(SeriesEvaluation {
        value,
        order: k,
        ratio: r.abs(),
        tail_bound: tail,
        in_domain: true,
        orientation,
        slow_convergence: slow,
    })
}

/// The angular distance `alpha_0` through the Cauchy–Schwarz gaps `‖x‖‖y‖ ± ⟨x,y⟩`.
///
/// For `⟨x,y⟩ >= 0`:
/// `alpha_0 = sqrt(‖x‖²‖y‖² - ⟨x,y⟩²)/(‖x‖‖y‖) · Σ binom(1/2,k) s^k`,
/// `s = (‖x‖‖y‖ - ⟨x,y⟩)/(‖x‖‖y‖ + ⟨x,y⟩)`. For `⟨x,y⟩ < 0` the value is
/// `sqrt(4 - alpha_0[x,-y]²)` with the same series for `(x, -y)`; the tail bound
/// is carried through the square root as an interval.
pub fn alpha_zero_series(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    order: Order,
) -> Result<SeriesEvaluation> {
    let g = gram_data(spec, x, y)?;
    let n = g.nx * g.ny;
    let scale = g.disc / n;
    let ip = g.ip.abs();
    let s = (n - ip) / (n + ip);
    let (value, k, tail, slow) = sum_scaled(scale, s, order);
    let mut eval = SeriesEvaluation {
        value,
        order: k,
        ratio: s.sqrt(),
        tail_bound: tail,
        in_domain: true,
        orientation: Orientation::Direct,
        slow_convergence: slow,
    };
    if g.ip < 0.0 {
        let reflect = |a: f64| (4.0 - a * a).max(0.0).sqrt();
        let centre = reflect(value);
        let lo = reflect(value + tail);
        let hi = reflect((value - tail).max(0.0));
        eval.value = centre;
        eval.tail_bound = (centre - lo).max(hi - centre);
    }
    Ok(eval)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c)
    }

    fn e2() -> NormSpec {
        NormSpec::euclidean(2)
    }

    #[test]
    fn coefficients() {
        let c = binom_half_coeffs(4);
        assert_eq!(c, vec![1.0, 0.5, -0.125, 0.0625, -0.0390625]);
        assert_eq!(binom_half(4), c[4]);
        for k in 1..64 {
            assert!(binom_half(k + 1).abs() < binom_half(k).abs());
        }
    }

    #[test]
    fn single_term_at_r_zero() {
        let r = norm_line_series(
            &e2(),
            &v(&[1.0, 0.0]),
            &v(&[0.0, 1.0]),
            0.0,
            Order::Fixed(0),
        )
        .unwrap();
        assert_eq!((r.value, r.ratio, r.tail_bound), (1.0, 0.0, 0.0));
        let r = norm_line_series(
            &e2(),
            &v(&[1.0, 1.0]),
            &v(&[0.0, 1.0]),
            -1.0,
            Order::Fixed(0),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_converges_slowly() {
        let (x, y) = (v(&[1.0, 0.0]), v(&[0.0, 1.0]));
        let mut prev = f64::INFINITY;
        for k in [16, 64, 256, 1024] {
            let r = norm_line_series(&e2(), &x, &y, 1.0, Order::Fixed(k)).unwrap();
            let err = (r.value - 2f64.sqrt()).abs();
            assert!(err <= r.tail_bound);
            assert!(err < prev);
            prev = err;
        }
        let r = norm_line_series(&e2(), &x, &y, 1.0, Order::default()).unwrap();
        assert!(r.slow_convergence);
        assert!((r.value - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn line_outside_domain() {
        let r = norm_line_series(
            &e2(),
            &v(&[1.0, 0.0]),
            &v(&[0.0, 1.0]),
            1.5,
            Order::default(),
        );
        assert!(matches!(r, Err(Error::OutOfDomain(_))));
        let r = norm_line_series(
            &e2(),
            &v(&[1.0, 0.0]),
            &v(&[2.0, 0.0]),
            0.0,
            Order::default(),
        );
        assert_eq!(r.unwrap_err(), Error::LinearlyDependent);
    }

    #[test]
    fn alpha_zero_example() {
        let (x, y) = (v(&[1.0, 0.0]), v(&[3f64.sqrt() / 2.0, 0.5]));
        let target = (2.0 - 3f64.sqrt()).sqrt();
        let r = alpha_p_series(&e2(), &x, &y, 0.0, Order::default()).unwrap();
        assert!((r.ratio - (2.0 - 3f64.sqrt())).abs() < 1e-15);
        assert!((r.value - target).abs() < 1e-12);
        let r = alpha_zero_series(&e2(), &x, &y, Order::default()).unwrap();
        assert!((r.value - target).abs() < 1e-12);
    }

    #[test]
    fn obtuse_branch() {
        let (x, y) = (v(&[1.0, 0.0]), v(&[-3f64.sqrt() / 2.0, 0.5]));
        let r = alpha_zero_series(&e2(), &x, &y, Order::default()).unwrap();
        assert!((r.value - (2.0 + 3f64.sqrt()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_unit_vectors_are_on_the_boundary() {
        let r =
            alpha_zero_series(&e2(), &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), Order::Fixed(4096)).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert!((r.value - 2f64.sqrt()).abs() <= r.tail_bound);
    }

    #[test]
    fn p_two_domain() {
        // r ≈ -1.57 centred at x and ≈ 2.04 centred at y
        let r = alpha_p_series(
            &e2(),
            &v(&[1.0, 0.0]),
            &v(&[0.9, 0.1]),
            2.0,
            Order::default(),
        );
        assert!(matches!(r, Err(Error::OutOfDomain(_))));
        let (x, y) = (v(&[1.0, 0.0]), v(&[0.9, 0.5]));
        let r = alpha_p_series(&e2(), &x, &y, 2.0, Order::default()).unwrap();
        let direct = crate::alpha_p(&e2(), &x, &y, 2.0).unwrap();
        assert!((r.value - direct).abs() <= r.tail_bound + 1e-12);
    }

    #[test]
    fn window_matches_ratio_gate() {
        let (nx, ny) = (1.0, 1.1);
        let (lo, hi) = convergence_window(nx, ny, 2.0).unwrap();
        assert!(lo < hi);
        assert!(convergence_window(1.0, 2.0, 1.0).is_none());
    }
}
