//! Central tolerance table.
//!
//! Every threshold used by the library, the verification suites and the
//! acceptance tests is defined here, so the suites and the acceptance gate
//! cannot drift apart.

/// Symmetry / symplectic-form defect allowed on constructed matrices.
pub const TOL_SYMP: f64 = 1e-10;

/// Degeneracy threshold for "det != 0" preconditions, applied after scaling
/// by the matrix max-norm. Separates genuine degeneracy from roundoff at the
/// dimensions we work in (n <= 8).
pub const TOL_DET: f64 = 1e-8;

/// Max symplectic-form defect for matrices produced by any operation.
pub const SYMPLECTIC_RESIDUAL: f64 = 1e-9;

/// Relative residual for the free-matrix determinant identities.
pub const DET_IDENTITY_REL: f64 = 1e-9;

/// Round-trip accuracy of the Cayley-type map S <-> M.
pub const CAYLEY_ROUNDTRIP: f64 = 1e-8;

/// Symmetry defect allowed on the Cayley-type matrix M_S.
pub const CAYLEY_SYMMETRY: f64 = 1e-10;

/// Operator-level phase agreement between the Gaussian-integral operator and
/// the quadratic Fourier transform on coherent states.
pub const MASLOV_PHASE: f64 = 1e-5;

/// Absolute trace error for elliptic matrices at basis size 128.
pub const TRACE_ABS: f64 = 5e-3;

/// Absolute trace error at the half-turn rotation (exact value -i/2).
pub const TRACE_HALF_TURN_ABS: f64 = 1e-3;

/// Quarter-block residual of the operator composition oracle.
pub const COMPOSE_RESIDUAL: f64 = 1e-3;

/// Relative residual for the composition determinant identity.
pub const COMPOSITION_DET_REL: f64 = 1e-8;

/// Residual between the three integral forms of the Gaussian-weighted
/// phase-space integral operator, evaluated in closed form.
pub const ALT_FORMS_RESIDUAL: f64 = 1e-8;

/// Covariance residual ||S^(T(z)f) - T(Sz)(S^f)|| / ||f|| on grid operators.
pub const COVARIANCE_RESIDUAL: f64 = 1e-5;

/// Residual of the Heisenberg-Weyl commutation identities on grid-aligned shifts.
pub const HW_RESIDUAL: f64 = 1e-10;

/// Norm preservation defect of grid translation operators.
pub const HW_UNITARITY: f64 = 1e-12;

/// Agreement between the closed-form Fresnel value and the damped quadrature.
pub const FRESNEL_TOL: f64 = 1e-6;

/// Product residual of the two-free-factor split.
pub const SPLIT_PRODUCT_RESIDUAL: f64 = 1e-9;

/// Twisted-convolution cross checks (closed form and operator level).
pub const TWISTED_TOL: f64 = 1e-4;

/// Unitarity defect of the converged quarter block of truncated operators.
pub const UNITARITY_QUARTER: f64 = 1e-4;

/// Fraction of |f|^2 mass allowed in the outer 10% of the grid.
pub const GRID_TAIL: f64 = 1e-6;

/// Unitarity defect of grid kernel operators on Schwartz-like inputs.
pub const GRID_UNITARITY: f64 = 1e-6;

/// Relative zero threshold for eigenvalue classification in inertia counts,
/// scaled by the spectral norm.
pub const INERTIA_ZERO_REL: f64 = 1e-8;

/// Default grid: number of samples (power of two) and half-width.
pub const GRID_N: usize = 1024;
pub const GRID_X_MAX: f64 = 12.0;

/// Grid half-width for the oscillator-basis trace suite at basis size 128.
pub const TRACE_X_MAX: f64 = 20.0;

/// Largest admissible oscillator basis truncation.
pub const MAX_BASIS: usize = 256;

/// Check |det| against the scaled degeneracy threshold.
pub fn clears_det_tol(det: f64, norm: f64) -> bool {
    det.abs() > TOL_DET * norm.max(1.0)
}
