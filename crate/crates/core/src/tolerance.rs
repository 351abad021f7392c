//! Tolerances shared by the verification suites.

/// Slack on `|γ_k| <= 1` when classifying recovered Schur parameters.
pub const ADMISSIBLE_SLACK: f64 = 1e-10;

/// `1 - |γ|²` below this value marks a unimodular Schur parameter.
pub const BOUNDARY_DEFECT: f64 = 1e-10;

/// Relative tolerance for identities and bound comparisons, scaled by
/// `1 + magnitude`.
pub const RELATIVE: f64 = 1e-9;

/// Floor for Leverenz-form positivity checks.
pub const LEVERENZ_FLOOR: f64 = -1e-8;

/// Slack on `F(λ, t) <= 0` over the theorem range.
pub const F_GRID_SLACK: f64 = 1e-10;

/// Accuracy of `F(λ, 1) = 0`.
pub const F_AT_ONE: f64 = 1e-12;

/// Allowed overshoot of a search result above a proven bound.
pub const SEARCH_OVERSHOOT: f64 = 1e-6;

/// `|a - b| <= tol * (1 + max(|a|, |b|))`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// `a <= b` up to the relative tolerance `tol`.
pub fn le(a: f64, b: f64, tol: f64) -> bool {
    a - b <= tol * (1.0 + a.abs().max(b.abs()))
}
