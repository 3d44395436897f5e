//! p-angular and skew p-angular distances on finite-dimensional real normed spaces.
//!
//! For non-zero `x`, `y` in a normed space and a real exponent `p`:
//!
//! | Quantity | Definition |
//! |----------|------------|
//! | `alpha_p[x, y]` | `‖ ‖x‖^(p-1) x - ‖y‖^(p-1) y ‖` |
//! | `beta_p[x, y]`  | `‖ ‖y‖^(p-1) x - ‖x‖^(p-1) y ‖` |
//!
//! `alpha_0` is the classical angular distance and `alpha_1` is the norm distance.
//!
//! The crate is organised as:
//!
//! - [`vector`], [`norm`], [`line`]: points of `R^n`, the norm catalog, and
//!   one-dimensional minimisation along lines.
//! - [`distance`]: the distance kernels and the inner-product closed forms.
//! - [`bounds`] and [`quadrature`]: two-sided comparisons between `alpha_p` and
//!   `alpha_q`, including the integral bounds.
//! - [`series`]: binomial-series representations in inner product spaces.
//! - [`geometry`]: metric audits, non-metric witnesses, and topology experiments.
//! - [`certify`]: searches for violations of inner-product-space characterizations.
//! - [`exec`]: sequential or rayon-backed execution of sample loops.
//! - [`verify`]: the acceptance checks, runnable from tests or the CLI.

// `!(a <= b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod certify;
pub mod distance;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod line;
pub mod norm;
pub mod quadrature;
pub mod sampling;
pub mod series;
pub mod tol;
pub mod vector;
pub mod verify;

pub use distance::{alpha_p, beta_p, AngularResult};
pub use error::{Error, Result};
pub use exec::ExecMode;
pub use norm::{LpOrder, NormSpec};
pub use vector::Vector;
