//! Quantum states of the su(1,1) Lie algebra in a truncated discrete basis.
//!
//! The crate builds Perelomov, Barut–Girardello, nonlinear coherent,
//! displaced number and Laguerre polynomial states over `|n,k⟩`, evaluates
//! matrix elements of the displacement operator `exp(ξK₊ - ξ*K₋)` in closed
//! form, and maps abstract states onto photon-number amplitudes through the
//! Holstein–Primakoff, amplitude-squared and two-mode realizations.
//!
//! Every defining identity has a residual function so that callers can check
//! it numerically; see the guide in `book/` for a walk-through.
//!
//! ```
//! use su11::{algebra::BargmannIndex, states::pcs};
//! use num_complex::Complex64;
//!
//! let k = BargmannIndex::new(0.5).unwrap();
//! let s = pcs(Complex64::new(0.5, 0.0), k, 64).unwrap();
//! assert!((s.coeffs()[0].re - 0.75f64.sqrt()).abs() < 1e-12);
//! ```

pub mod algebra;
pub mod displacement;
pub mod error;
pub mod realizations;
pub mod specfun;
pub mod states;

pub use algebra::{BargmannIndex, NonlinearFunction, StateVector};
pub use displacement::{DisplacementParams, MatrixElementTable};
pub use error::{Error, Result};

// The guide's Rust snippets run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/displacement.md")]
    mod displacement {}
    #[doc = include_str!("../../../book/src/dns_lps.md")]
    mod dns_lps {}
    #[doc = include_str!("../../../book/src/realizations.md")]
    mod realizations {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
