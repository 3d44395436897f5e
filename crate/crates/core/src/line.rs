//! Minimisation of `t ↦ ‖a + t b‖` over the real line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::NormSpec;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineMin {
    pub t_star: f64,
    pub value: f64,
}

/// Golden-section search on a convex function over `[lo, hi]`.
///
/// Stops when the bracket is narrower than `xtol`. Returns the best abscissa
/// seen and its value.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    // 200 iterations shrink any finite bracket below machine resolution
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `min_t ‖a + t b‖` and a minimiser.
///
/// Gram norms use the closed form `t* = -⟨a,b⟩/‖b‖²`,
/// `value = sqrt(‖a‖²‖b‖² - ⟨a,b⟩²)/‖b‖`. Other norms bracket the minimiser in
/// `[-2‖a‖/‖b‖, 2‖a‖/‖b‖]` (outside it `‖a + t b‖ > ‖a‖`) and run golden
/// section; the minimiser need not be unique for polyhedral norms.
pub fn min_over_line(spec: &NormSpec, a: &Vector, b: &Vector) -> Result<LineMin> {
    a.check_dim(b)?;
    spec.check(a)?;
    if b.is_zero() {
        return Err(Error::ZeroVector);
    }
    if spec.has_inner_product() {
        let ab = spec.inner_product(a, b)?;
        let aa = spec.inner_product(a, a)?;
        let bb = spec.inner_product(b, b)?;
        let disc = (aa * bb - ab * ab).max(0.0);
        return Ok(LineMin {
            t_star: -ab / bb,
            value: disc.sqrt() / bb.sqrt(),
        });
    }
    let na = spec.norm(a)?;
    let nb = spec.norm(b)?;
    if na == 0.0 {
        return Ok(LineMin {
            t_star: 0.0,
            value: 0.0,
        });
    }
    let half_width = 2.0 * na / nb;
    let f = |t: f64| spec.norm_unchecked(a.lincomb(1.0, b, t).coords());
    let xtol = 1e-12 * half_width;
    let (t_star, value) = golden_section(f, -half_width, half_width, xtol);
    Ok(LineMin { t_star, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c)
    }

    #[test]
    fn euclidean_closed_form() {
        let e = NormSpec::euclidean(2);
        let m = min_over_line(&e, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
        assert_eq!((m.t_star, m.value), (0.0, 1.0));
        let m = min_over_line(&e, &v(&[1.0, 1.0]), &v(&[0.0, 1.0])).unwrap();
        assert_eq!((m.t_star, m.value), (-1.0, 1.0));
    }

    #[test]
    fn l1_flat_minimum() {
        // |1 - t| + |t| equals 1 on all of [0, 1]
        let m = min_over_line(&NormSpec::l1(), &v(&[1.0, 0.0]), &v(&[-1.0, 1.0])).unwrap();
        assert!((m.value - 1.0).abs() < 1e-12);
        assert!((-1e-9..=1.0 + 1e-9).contains(&m.t_star));
    }

    #[test]
    fn golden_section_on_euclidean_agrees_with_closed_form() {
        let a = v(&[2.0, -1.0, 0.5]);
        let b = v(&[0.3, 1.0, -2.0]);
        let closed = min_over_line(&NormSpec::euclidean(3), &a, &b).unwrap();
        let numeric = min_over_line(&NormSpec::l2(), &a, &b).unwrap();
        assert!((closed.value - numeric.value).abs() < 1e-12);
        assert!((closed.t_star - numeric.t_star).abs() < 1e-6);
    }

    #[test]
    fn zero_direction_rejected() {
        let r = min_over_line(&NormSpec::l1(), &v(&[1.0, 0.0]), &v(&[0.0, 0.0]));
        assert_eq!(r, Err(Error::ZeroVector));
    }
}
