//! Tolerances shared across modules.
//!
//! Every threshold used by a default configuration lives here so that reports
//! and tests refer to the same numbers.

/// Default relative tolerance for floating-point comparisons.
pub const REL: f64 = 1e-12;

/// Relative tolerance for deciding `‖x‖ = ‖y‖`.
pub const NORM_EQUALITY: f64 = 1e-9;

/// Relative slack allowed before a bound or triangle inequality counts as violated.
pub const BOUND_SLACK: f64 = 1e-9;

/// Radicands in `[-RADICAND_CLAMP * scale, 0)` are clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-10;

/// Norms outside `[MIN_NORM, MAX_NORM]` are rejected by the distance kernels.
pub const MIN_NORM: f64 = 1e-150;
pub const MAX_NORM: f64 = 1e150;

/// Linear dependence threshold on `‖x‖²‖y‖² - ⟨x,y⟩²` relative to `‖x‖²‖y‖²`.
pub const DEPENDENCE: f64 = 1e-14;

/// Minimum norm of an integration segment relative to its endpoints.
pub const SEGMENT_CLEARANCE: f64 = 1e-9;

/// Absolute margin above which a normalized witness counts as a violation.
pub const VIOLATION: f64 = 1e-8;

/// Sampled vectors with smaller norm are rejected (the space is `X \ {0}`).
pub const SAMPLE_MIN_NORM: f64 = 1e-6;

/// `|a - b| <= tol * max(|a|, |b|)`, with exact equality accepted.
pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Relative error of `value` against `reference`, guarded against zero.
pub fn rel_err(value: f64, reference: f64) -> f64 {
    let scale = value.abs().max(reference.abs());
    if scale == 0.0 {
        0.0
    } else {
        (value - reference).abs() / scale
    }
}
