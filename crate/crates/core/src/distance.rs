//! The p-angular and skew p-angular distance kernels.
//!
//! ```text
//! alpha_p[x, y] = ‖ ‖x‖^(p-1) x - ‖y‖^(p-1) y ‖
//! beta_p[x, y]  = ‖ ‖y‖^(p-1) x - ‖x‖^(p-1) y ‖
//! ```
//!
//! Both are defined for non-zero `x`, `y` and any finite `p`. They are linked by
//! `beta_p[x,y] = ‖x‖^(p-1) ‖y‖^(p-1) alpha_(2-p)[x,y]`. In an inner product space
//! `alpha_p` has the closed form
//! `sqrt((‖x‖^(p+1) - ‖y‖^(p+1))(‖x‖^(p-1) - ‖y‖^(p-1)) + ‖x‖^(p-1)‖y‖^(p-1)‖x-y‖²)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::NormSpec;
use crate::tol;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularResult {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "exponent p = {p} must be finite"
        )))
    }
}

/// `‖v‖`, rejecting zero vectors and norms outside the supported range.
pub fn nonzero_norm(spec: &NormSpec, v: &Vector) -> Result<f64> {
    let n = spec.norm(v)?;
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    if !(tol::MIN_NORM..=tol::MAX_NORM).contains(&n) {
        return Err(Error::OutOfRange { norm: n });
    }
    Ok(n)
}

/// Norms of a pair after validating dimensions.
pub(crate) fn pair_norms(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<(f64, f64)> {
    x.check_dim(y)?;
    Ok((nonzero_norm(spec, x)?, nonzero_norm(spec, y)?))
}

/// `‖a x - b y‖` without re-validating the inputs.
pub(crate) fn combo_norm(spec: &NormSpec, x: &Vector, a: f64, y: &Vector, b: f64) -> f64 {
    spec.norm_unchecked(x.lincomb(a, y, -b).coords())
}

pub(crate) fn alpha_with_norms(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    nx: f64,
    ny: f64,
    p: f64,
) -> f64 {
    combo_norm(spec, x, nx.powf(p - 1.0), y, ny.powf(p - 1.0))
}

pub(crate) fn beta_with_norms(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    nx: f64,
    ny: f64,
    p: f64,
) -> f64 {
    combo_norm(spec, x, ny.powf(p - 1.0), y, nx.powf(p - 1.0))
}

/// The p-angular distance.
pub fn alpha_p(spec: &NormSpec, x: &Vector, y: &Vector, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let (nx, ny) = pair_norms(spec, x, y)?;
    Ok(alpha_with_norms(spec, x, y, nx, ny, p))
}

/// The skew p-angular distance.
pub fn beta_p(spec: &NormSpec, x: &Vector, y: &Vector, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let (nx, ny) = pair_norms(spec, x, y)?;
    Ok(beta_with_norms(spec, x, y, nx, ny, p))
}

pub fn angular(spec: &NormSpec, x: &Vector, y: &Vector, p: f64) -> Result<AngularResult> {
    check_exponent(p)?;
    let (nx, ny) = pair_norms(spec, x, y)?;
    Ok(AngularResult {
        p,
        alpha: alpha_with_norms(spec, x, y, nx, ny, p),
        beta: beta_with_norms(spec, x, y, nx, ny, p),
    })
}

/// Both sides of `beta_p = ‖x‖^(p-1)‖y‖^(p-1) alpha_(2-p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub beta: f64,
    pub rescaled_alpha: f64,
    pub residual: f64,
}

impl RelationCheck {
    pub fn relative(&self) -> f64 {
        tol::rel_err(self.beta, self.rescaled_alpha)
    }
}

pub fn skew_relation(spec: &NormSpec, x: &Vector, y: &Vector, p: f64) -> Result<RelationCheck> {
    check_exponent(p)?;
    let (nx, ny) = pair_norms(spec, x, y)?;
    let beta = beta_with_norms(spec, x, y, nx, ny, p);
    let rescaled_alpha =
        nx.powf(p - 1.0) * ny.powf(p - 1.0) * alpha_with_norms(spec, x, y, nx, ny, 2.0 - p);
    Ok(RelationCheck {
        beta,
        rescaled_alpha,
        residual: (beta - rescaled_alpha).abs(),
    })
}

/// `|beta_p - ‖x‖^(p-1)‖y‖^(p-1) alpha_(2-p)|`; an exact identity, so this is rounding noise.
pub fn skew_relation_residual(spec: &NormSpec, x: &Vector, y: &Vector, p: f64) -> Result<f64> {
    skew_relation(spec, x, y, p).map(|r| r.residual)
}

/// The radicand of the inner-product closed form, evaluated in any norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Radicand {
    pub value: f64,
    /// Magnitude of the largest addend, used to judge rounding.
    pub scale: f64,
}

impl Radicand {
    /// Square root with small negative values clamped to zero.
    pub fn sqrt_guarded(&self) -> Result<f64> {
        if self.value >= 0.0 {
            Ok(self.value.sqrt())
        } else if self.value >= -tol::RADICAND_CLAMP * self.scale {
            Ok(0.0)
        } else {
            Err(Error::NegativeRadicand {
                radicand: self.value,
                scale: self.scale,
            })
        }
    }

    /// `sign(v) sqrt(|v|)`, continuous through zero.
    pub fn signed_sqrt(&self) -> f64 {
        self.value.signum() * self.value.abs().sqrt()
    }
}

pub fn closed_form_radicand(spec: &NormSpec, x: &Vector, y: &Vector, p: f64) -> Result<Radicand> {
    check_exponent(p)?;
    let (nx, ny) = pair_norms(spec, x, y)?;
    let d = spec.norm_unchecked(x.sub(y).coords());
    let first = (nx.powf(p + 1.0) - ny.powf(p + 1.0)) * (nx.powf(p - 1.0) - ny.powf(p - 1.0));
    let second = nx.powf(p - 1.0) * ny.powf(p - 1.0) * d * d;
    Ok(Radicand {
        value: first + second,
        scale: first.abs().max(second.abs()),
    })
}

/// `alpha_p` via the inner-product closed form. Gram norms only.
pub fn alpha_p_closed_form_ips(spec: &NormSpec, x: &Vector, y: &Vector, p: f64) -> Result<f64> {
    if !spec.has_inner_product() {
        return Err(Error::NoInnerProduct);
    }
    closed_form_radicand(spec, x, y, p)?.sqrt_guarded()
}

/// `(‖x‖² - ‖y‖²)(‖x‖^(2p-2) - ‖y‖^(2p-2))`, which equals `alpha_p² - beta_p²`
/// in an inner product space.
pub fn sign_identity_ips(spec: &NormSpec, x: &Vector, y: &Vector, p: f64) -> Result<f64> {
    if !spec.has_inner_product() {
        return Err(Error::NoInnerProduct);
    }
    check_exponent(p)?;
    let (nx, ny) = pair_norms(spec, x, y)?;
    Ok((nx * nx - ny * ny) * (nx.powf(2.0 * p - 2.0) - ny.powf(2.0 * p - 2.0)))
}

/// `‖x‖ = ‖y‖` up to relative tolerance `tol`.
pub fn norms_equal(nx: f64, ny: f64, tol: f64) -> bool {
    tol::rel_eq(nx, ny, tol)
}
