//! Default tolerances shared by the library and the law suites.

/// Relative tolerance for null classification, `|g(v,v)| <= tol * max(1, |v|^2)`.
pub const CLASSIFY: f64 = 1e-9;

/// Residual bound for algebraic law checks.
pub const LAW_RESIDUAL: f64 = 1e-10;

/// Round-trip bound for exact chart compositions.
pub const ROUND_TRIP: f64 = 1e-12;

/// Frame reconstruction and duality bound.
pub const FRAME: f64 = 1e-10;

/// Relative singular value threshold for numerical rank.
pub const RANK: f64 = 1e-8;

/// Eigenvalue magnitude below which a metric counts as degenerate.
pub const DEGENERATE: f64 = 1e-12;
