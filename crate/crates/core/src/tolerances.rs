//! Every numeric threshold used by checks, snapping and the acceptance suite.
//!
//! Closed-form arithmetic on roots of unity stays within a few ulps, so the
//! "exact" tolerances are set at 1e-12; quadrature carries its own budget.

/// Curve equation residual |w^2 - (z^(2g+2) - 1)| at sampled path points.
pub const CURVE_RESIDUAL: f64 = 1e-12;

/// |zeta^k| = 1 and reduction of the exponent mod 2g+2.
pub const ZETA_UNIT: f64 = 1e-14;

/// Case formula for t_u against the direct exponential sum.
pub const TU_CASES: f64 = 1e-12;

/// Relative error of the beta function against its defining integral, and of
/// the reflection identity for log-gamma.
pub const BETA_RELATIVE: f64 = 1e-10;

/// Closed-form single integrals against summed segment values.
pub const CLOSED_FORM: f64 = 1e-12;

/// Closed-form inverses, symmetry and reality of the period matrix.
pub const PERIOD_MATRIX: f64 = 1e-12;

/// Schindler sum vs (Omega_a)^-1 Omega_b vs the cotangent form.
pub const PERIOD_MATRIX_ROUTES: f64 = 1e-10;

/// Pivot threshold of the positive definiteness test for Im Z.
pub const PD_PIVOT: f64 = 1e-10;

/// Duality integrals of alpha/beta (closed form).
pub const DUALITY_CLOSED: f64 = 1e-10;

/// Duality integrals of alpha/beta from quadrature periods.
pub const DUALITY_NUMERIC: f64 = 1e-8;

/// Quadrature single periods, relative.
pub const QUAD_PERIOD_RELATIVE: f64 = 1e-8;

/// Quadrature iterated integrals against the closed-form engine.
pub const QUAD_ITERATED: f64 = 1e-6;

/// Shuffle engine against the displayed iterated-integral formulas.
pub const ENGINE_VS_FORMULA: f64 = 1e-10;

/// Closed-form relator vanishing ("exactly zero" up to rounding).
pub const RELATOR_CLOSED: f64 = 1e-12;

/// Distance from a raw harmonic volume to {0, 1/2} mod 1.
pub const SNAP: f64 = 1e-4;

/// S3 equivariance of raw volumes mod 1.
pub const S3_EQUIVARIANCE: f64 = 1e-8;

/// Default absolute tolerance of the tanh-sinh oracle.
pub const QUAD_ABS_TOL: f64 = 1e-12;

/// Default maximum tanh-sinh refinement level.
pub const QUAD_DEFAULT_LEVEL: u32 = 8;

/// Largest genus for which cube-level mod-2 computations are run.
pub const MOD2_CUBE_MAX_GENUS: usize = 6;
