// Parameter validation negates comparisons (`!(x >= 0.0)`) on purpose: the
// negated form rejects NaN, which the "simplified" `x < 0.0` would accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Design quantities for coherent-state quantum communication systems.
//!
//! Everything here works on small constellations of coherent states |α⟩ and the
//! Gram matrices they induce. The modules split along the questions a link
//! designer actually asks:
//!
//! - [`states`]: constellations, Gram matrices and their spectra, quasi-Bell pairs.
//! - [`fock`]: a truncated-Fock-space brute-force oracle used to cross-check every
//!   closed form in the other modules.
//! - [`detection`]: Helstrom bounds, square-root measurement, covariant optimum,
//!   Bayes/minimax optimality certificates.
//! - [`capacity`]: mutual information, Holevo bounds, Gaussian-channel capacities.
//! - [`reliability`]: error exponents, cutoff rates, code-length planning.
//! - [`estimation`]: quadrature/complex-amplitude estimation variances and SNRs.
//! - [`cipher`]: Y-00 style quantum stream cipher — keystream, encryption,
//!   eavesdropper channels, masking and unicity metrics, block randomization.
//! - [`reading`]: quasi-Bell-state quantum reading error probabilities.
//!
//! All information quantities are in nats unless a function name says otherwise.
//! Tolerances follow the conventions in [`tol`].

pub mod capacity;
pub mod cipher;
pub mod detection;
pub mod error;
pub mod estimation;
pub mod fmt;
pub mod fock;
pub(crate) mod linalg;
pub mod reading;
pub mod reliability;
pub mod states;
pub mod tol;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense complex vector.
pub type CVec = nalgebra::DVector<C64>;
/// Dense real matrix.
pub type RMat = nalgebra::DMatrix<f64>;
