use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("A0(t) = A1(t) at t = {t}: M(t) is singular")]
    SingularM { t: f64 },
    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },
    #[error("integration error: {0}")]
    Integration(String),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("pole in terminating hypergeometric series: c + {s} = 0 with c = {c}")]
    Pole { c: f64, s: usize },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("series did not converge after {terms} terms")]
    Convergence { terms: usize },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("numerics error: {0}")]
    Numerics(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
