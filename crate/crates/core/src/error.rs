//! Error type shared across the workspace.

use thiserror::Error;

/// Errors raised by the symplectic, index and operator layers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix had the wrong shape (odd dimension, block mismatch, ...).
    #[error("dimension error: {0}")]
    Dimension(String),

    /// The matrix fails the symplectic-form preservation check.
    #[error("matrix is not symplectic (defect {defect:.3e} exceeds tolerance {tol:.3e})")]
    NotSymplectic { defect: f64, tol: f64 },

    /// A matrix expected to be symmetric is not.
    #[error("matrix is not symmetric (defect {defect:.3e} exceeds tolerance {tol:.3e})")]
    Symmetry { defect: f64, tol: f64 },

    /// The upper-right block is singular, so the matrix admits no generator.
    #[error("matrix is not free: |det B| = {det_b:.3e} below threshold")]
    NotFree { det_b: f64 },

    /// Generator data violates its invariants (singular L, bad Maslov parity).
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    /// det(S - I) vanishes: S has a nontrivial fixed point.
    #[error("S has eigenvalue 1: |det(S - I)| = {det:.3e} below threshold")]
    FixedPoint { det: f64 },

    /// M - J/2 is singular, so the inverse Cayley-type map is undefined.
    #[error("inverse Cayley map undefined: |det(M - J/2)| = {det:.3e} below threshold")]
    CayleyDomain { det: f64 },

    /// The Hessian of the generator's diagonal restriction is singular.
    #[error("degenerate Hessian: |det W_xx| = {det:.3e} below threshold")]
    DegenerateHessian { det: f64 },

    /// Bounded search for a two-free-factor split was exhausted.
    #[error("free-pair decomposition search failed after {attempts} attempts")]
    Decomposition { attempts: usize },

    /// M + M' is singular, signalling det(SS' - I) = 0.
    #[error("composition degenerate: |det(M + M')| = {det:.3e} below threshold")]
    CompositionDegenerate { det: f64 },

    /// Grid data would leave the sampled window (shift too large, tail mass).
    #[error("grid overflow: {0}")]
    GridOverflow(String),

    /// Quadrature or extrapolation failed to produce a trustworthy value.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The phase matrix of a generalized Fresnel integral is singular.
    #[error("Fresnel integral degenerate: |det M| = {det:.3e} below threshold")]
    FresnelDegenerate { det: f64 },

    /// Requested verification suite is not registered.
    #[error("unknown suite '{name}'; registered suites: {registered}")]
    UnknownSuite { name: String, registered: String },

    /// Indices that must agree by a parity relation do not.
    #[error("index parity mismatch: {0}")]
    IndexMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
