use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("genus {0} out of range: expected 3 <= g <= 12")]
    GenusOutOfRange(i64),

    #[error("path parameter t = {0} outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: i64,
        max: i64,
    },

    #[error("{0} forms are not accepted here; expand into omega'/conjugate pairs first")]
    UnsupportedForm(&'static str),

    #[error("tensor is not in the kernel of p: {0}")]
    NotInKernel(String),

    #[error("loop group on {loop_name} violates the K condition (pairing sum {sum})")]
    KConditionViolated { loop_name: String, sum: i64 },

    #[error("harmonic volume {raw} is not within {tolerance:e} of 0 or 1/2 mod 1 (residual {residual:e})")]
    SnapFailure {
        raw: f64,
        residual: f64,
        tolerance: f64,
    },

    #[error(
        "quadrature did not converge at level {level}: error estimate {estimate:e} > {tolerance:e}"
    )]
    QuadratureNotConverged {
        level: u32,
        estimate: f64,
        tolerance: f64,
    },

    #[error("consistency check failed: {what} (error {error:e}, tolerance {tolerance:e})")]
    Consistency {
        what: String,
        error: f64,
        tolerance: f64,
    },

    #[error("basis enumeration failed: {0}")]
    Basis(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot parse tensor: {0}")]
    Parse(String),
}
