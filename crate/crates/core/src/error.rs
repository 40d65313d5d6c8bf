use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("{0}")]
    Domain(String),
    #[error("ellipticity violated: f({p}) = {value} is not positive")]
    Ellipticity { p: f64, value: f64 },
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("state is not normalizable: {0}")]
    Divergence(String),
    #[error("integral did not converge: {0}")]
    NonConvergence(String),
    #[error("degenerate model: {0}")]
    DegenerateModel(String),
    #[error("spectrum is complex at beta = {beta} (critical beta = {beta_c})")]
    ComplexSpectrum { beta: f64, beta_c: f64 },
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
