use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Fock cutoff leaves too much of the state outside the truncated space.
    #[error("cutoff {cutoff} too small for lambda = {lambda}: truncated tail {tail:e} exceeds {max_tail:e}")]
    CutoffTooSmall { lambda: f64, cutoff: usize, tail: f64, max_tail: f64 },

    /// A tomogram or similar projection sees non-negligible weight at the edge of the space.
    #[error("cutoff {cutoff} insufficient: edge coherence {edge:e} exceeds {max_edge:e}")]
    CutoffInsufficient { cutoff: usize, edge: f64, max_edge: f64 },

    #[error("lambda = {lambda} exceeds the default guard {guard}; pass an explicit cutoff")]
    LambdaAboveGuard { lambda: f64, guard: f64 },

    #[error("quadrature did not converge: refinement changed the result by {delta:e} (tolerance {tol:e})")]
    QuadratureNotConverged { delta: f64, tol: f64 },

    #[error("imaginary residue {residue:e} in a quantity that must be real")]
    ImaginaryResidue { residue: f64 },

    #[error("positivity lost: minimum eigenvalue {min_eigenvalue:e} below {threshold:e}")]
    PositivityLoss { min_eigenvalue: f64, threshold: f64 },

    /// A Gaussian-integral convergence condition failed (radicand must be positive).
    #[error("non-positive radicand {value:e} in {context}")]
    NonPositiveRadicand { context: &'static str, value: f64 },

    #[error("density matrix invalid: {0}")]
    InvalidState(String),
}
