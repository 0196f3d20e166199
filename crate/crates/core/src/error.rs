use thiserror::Error;

/// Failure modes shared by every solver module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the admissible parameter domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The potential was evaluated too close to one of its poles.
    #[error("potential is singular at x = {x} (nearest pole at {pole})")]
    Singularity { x: f64, pole: f64 },

    /// An iterative method hit its iteration cap.
    #[error("no convergence in {what} after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    /// Forward recurrence left the representable range.
    #[error("forward recurrence overflow guard tripped at index {index} (|Q| = {magnitude:e})")]
    Growth { index: usize, magnitude: f64 },

    /// Two or more eigenvalues sit inside the resolution window.
    #[error(
        "degenerate eigenvalue cluster near {value} ({multiplicity} eigenvalues within {width:e})"
    )]
    DegenerateCluster {
        value: f64,
        multiplicity: usize,
        width: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
