use thiserror::Error;

pub type Result<T> = std::result::Result<T, EqgError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EqgError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("singular jet: constant coefficient is zero")]
    SingularJet,
    #[error("pole: {what} lies within {dist:.3e} of the lattice")]
    Pole { what: String, dist: f64 },
    #[error("dynamical pole: {what} lies within {dist:.3e} of the lattice")]
    DynamicalPole { what: String, dist: f64 },
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("ill-conditioned Gram matrix (cond = {cond:.3e})")]
    Dualization { cond: f64 },
    #[error("domain: {0}")]
    Domain(String),
    #[error("integration path: {0}")]
    Path(String),
}
