//! Adaptive Gauss–Kronrod (7/15) quadrature with global bisection.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate is below `max(abs_tol, rel_tol * |I|)`. Initial breakpoints let
//! the caller grade the partition toward a near-singular point.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadConfig {
    /// Same absolute and relative tolerance.
    pub fn new(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            max_subdivisions: 4000,
        }
    }
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self::new(1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
    /// Set when the partition was graded toward a near-singular point.
    pub singular_endpoint: bool,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One 15-point Kronrod evaluation with the QUADPACK error rescaling.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        *slot = (f1, f2);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadratureResult> {
    integrate_with_breakpoints(f, &[a, b], cfg)
}

/// Integrates `f` over `[points[0], points.last()]`, starting from the given partition.
///
/// `points` must be sorted and contain at least two entries.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadratureResult> {
    if points.len() < 2 || points.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter(
            "breakpoints must be sorted, at least two".into(),
        ));
    }
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[0] < w[1] {
            let (value, err) = gk15(&f, w[0], w[1]);
            heap.push(Piece {
                a: w[0],
                b: w[1],
                value,
                err,
            });
        }
    }
    let sums = |heap: &BinaryHeap<Piece>| {
        heap.iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err))
    };
    let mut subdivisions = heap.len();
    loop {
        let (value, err) = sums(&heap);
        if !value.is_finite() || !err.is_finite() {
            return Err(Error::QuadratureTolerance {
                achieved: f64::INFINITY,
                requested: cfg.abs_tol,
            });
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if err <= target {
            return Ok(QuadratureResult {
                value,
                error_estimate: err,
                subdivisions,
                singular_endpoint: false,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Ok(QuadratureResult {
                    value: 0.0,
                    error_estimate: 0.0,
                    subdivisions,
                    singular_endpoint: false,
                })
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        if subdivisions >= cfg.max_subdivisions || mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            let (_, err) = sums(&heap);
            return Err(Error::QuadratureTolerance {
                achieved: err,
                requested: target,
            });
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        subdivisions += 1;
    }
}

/// Breakpoints on `[0, 1]` graded geometrically toward `center`.
pub fn graded_breakpoints(center: f64, levels: u32) -> Vec<f64> {
    let c = center.clamp(0.0, 1.0);
    let mut pts = vec![0.0, c, 1.0];
    for k in 1..=levels {
        let h = 0.5f64.powi(k as i32);
        pts.push((c - h).max(0.0));
        pts.push((c + h).min(1.0));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|t| 3.0 * t * t + 1.0, 0.0, 2.0, &QuadConfig::default()).unwrap();
        assert!((r.value - 10.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_transcendental() {
        let r = integrate(f64::exp, 0.0, 1.0, &QuadConfig::new(1e-13)).unwrap();
        assert!((r.value - (std::f64::consts::E - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        // ∫_0^1 t^(-1/2) dt = 2
        let r = integrate(
            |t: f64| if t > 0.0 { t.powf(-0.5) } else { 0.0 },
            0.0,
            1.0,
            &QuadConfig::new(1e-9),
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn sharp_peak_with_graded_partition() {
        // ∫_0^1 dt / sqrt((t - 0.3)^2 + 1e-12) = asinh(0.7e6) + asinh(0.3e6)
        let exact = (0.7e6f64).asinh() + (0.3e6f64).asinh();
        let f = |t: f64| 1.0 / ((t - 0.3) * (t - 0.3) + 1e-12).sqrt();
        let r =
            integrate_with_breakpoints(f, &graded_breakpoints(0.3, 40), &QuadConfig::new(1e-11))
                .unwrap();
        assert!(
            (r.value - exact).abs() < 1e-9 * exact,
            "{} vs {}",
            r.value,
            exact
        );
    }

    #[test]
    fn reports_unmet_tolerance() {
        let cfg = QuadConfig {
            abs_tol: 1e-15,
            rel_tol: 1e-15,
            max_subdivisions: 3,
        };
        let r = integrate(|t: f64| (50.0 * t).sin().abs(), 0.0, 1.0, &cfg);
        assert!(matches!(r, Err(Error::QuadratureTolerance { .. })));
    }

    #[test]
    fn graded_points_are_sorted_and_bounded() {
        let pts = graded_breakpoints(0.0, 10);
        assert_eq!(pts[0], 0.0);
        assert_eq!(*pts.last().unwrap(), 1.0);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }
}
