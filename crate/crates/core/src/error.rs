use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("potential pole at x = {location}")]
    Pole { location: Complex64 },
    #[error("q = 0 is the exponential potential; the closed-form spectrum diverges there (use the q=0 applicability diagnostic)")]
    ExponentialCase,
    #[error("no k solves the double-zero condition: {0}")]
    NoKSolution(String),
    #[error("no admissible branch with negative tau derivative: {diagnostic}")]
    NoBoundBranch { diagnostic: String },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("normalization integral diverges at {edge}")]
    Divergent { edge: String },
    #[error("no eigenvalue in bracket [{lo}, {hi}]{detail}")]
    NoEigenvalueInBracket { lo: f64, hi: f64, detail: String },
    #[error("no bound state: {condition}")]
    NoBoundState { condition: String },
    #[error("trivial solution: wavefunction is identically zero")]
    TrivialSolution,
    #[error("cannot write {path}: {reason}")]
    Output { path: String, reason: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
