//! Numerical thresholds shared across modules.
//!
//! These are contract values, not tuning knobs: tests pin behaviour at exactly
//! these numbers, so changing one is an interface change.

/// Eigenvalues of a nominally PSD Gram matrix may undershoot zero by this much
/// before we call the matrix broken instead of clamping.
pub const EIG_CLAMP: f64 = 1e-10;

/// Eigenvalues within this fraction of the spectral radius are solver noise
/// left over from an exact null space and are flushed to zero, so spectral
/// functions with infinite slope at 0 (√, pseudo-inverse) don't amplify them.
/// Kept well below any eigenvalue the physics can produce at test scales.
pub const EIG_FLUSH: f64 = 1e-14;

/// Hermiticity / row-stochasticity / completeness defects below this are
/// treated as floating-point noise.
pub const STRUCTURE: f64 = 1e-12;

/// Optimality-certificate residual threshold (Bayes, minimax, accessible
/// information): residuals below this pass, operator lower bounds may dip
/// this far below zero.
pub const OPTIMALITY: f64 = 1e-8;

/// Agreement demanded between closed forms and the truncated-Fock oracle.
pub const ORACLE: f64 = 1e-8;

/// Convergence target for scalar searches (golden section over s ∈ [0,1]).
pub const SCALAR_SEARCH: f64 = 1e-10;

/// Convergence target for the simplex quadratic program behind cutoff rates.
pub const SIMPLEX_QP: f64 = 1e-12;

/// Fock-space truncation: auto-sized expansions keep the discarded tail
/// probability below this.
pub const FOCK_TAIL: f64 = 1e-12;

/// Largest mean photon number the Fock oracle accepts before truncation sizes
/// stop being trustworthy (and affordable).
pub const FOCK_SCALE_LIMIT: f64 = 100.0;
