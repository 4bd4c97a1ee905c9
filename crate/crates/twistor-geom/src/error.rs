use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("bivector is not self-dual: anti-self-dual residual {residual:.3e}")]
    NotSelfDual { residual: f64 },

    #[error("twistor point is off the hypersurface: rho = {rho:.3e}")]
    NotOnSigma { rho: f64 },

    #[error("tangent vector violates the hypersurface tangency condition: residual {residual:.3e}")]
    NotTangent { residual: f64 },

    #[error("frame mode {mode} is inapplicable here: {reason}")]
    ModeInapplicable { mode: &'static str, reason: String },

    #[error("closed-form trace needs an integrable or symplectic structure (class is {class})")]
    RouteInapplicable { class: &'static str },

    #[error("finite-difference step-size check failed: step residual {residual:.3e} exceeds {limit:.3e}")]
    StepSizeFailure { residual: f64, limit: f64 },

    #[error("structure validation failed: {0}")]
    InvalidStructure(String),

    #[error("fixture mismatch in {entry}: {detail}")]
    FixtureMismatch { entry: String, detail: String },

    #[error("manifold `{0}` has no coordinate chart; chart-based oracles are unavailable")]
    NoChart(String),

    #[error("homogeneous coordinates violate the required predicate: {0}")]
    PredicateViolation(String),

    #[error("zero homogeneous vector")]
    ZeroProjectivePoint,
}

pub type Result<T> = std::result::Result<T, GeomError>;
