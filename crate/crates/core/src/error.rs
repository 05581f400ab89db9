use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent p = {p} out of range for equation {eq} (requires {requirement})")]
    ExponentOutOfRange {
        eq: &'static str,
        p: String,
        requirement: &'static str,
    },

    #[error("role {role} is not admissible for equation {eq}")]
    InadmissibleRole { eq: &'static str, role: &'static str },

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("g factor is not strictly positive (infimum {infimum})")]
    NonPositiveG { infimum: f64 },

    #[error("g factor parameters do not match the weight family: {0}")]
    ParameterMismatch(String),

    #[error("omega2 vanishes at r = {radius} inside the integration range")]
    OmegaTwoVanishes { radius: f64 },

    #[error("non-finite integrand value at r = {radius}")]
    NonFiniteIntegrand { radius: f64 },

    #[error("instance is not strictly on the existence side: {0}")]
    NotExistenceSide(String),

    #[error("beta - alpha + 2 = 0 is not covered by either witness regime")]
    DegenerateGrowth,

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("mass matrix is not positive definite")]
    MassNotPositiveDefinite,

    #[error("test function violates the zero boundary condition at r_max (value {0})")]
    BoundaryCondition(f64),

    #[error("invalid sampled table: {0}")]
    InvalidTable(String),

    #[error("invalid number {0:?}")]
    InvalidNumber(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
