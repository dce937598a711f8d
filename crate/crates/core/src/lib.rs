//! Symbolic-numeric engine for hypergeometric-type ODEs in quantum phase space.
//!
//! The crate is `no_std` (with `alloc`) and contains only pure computation:
//!
//! * [`poly`] and [`ept`]: dense complex polynomials and the family
//!   `P(A)·e^{aA}·A^b`, which is closed under differentiation.
//! * [`nu`]: the Nikiforov-Uvarov pipeline, from `(σ, σ̃, τ̃)` to branch
//!   selection, Rodrigues polynomials and bisection on the energy parameter.
//! * [`opspace`]: operator-coefficient points `(α, β, γ, δ)`, diagonal
//!   transform matrices, complements and composition rules.
//! * [`hta`]: the phase-space hydrogen atom built on top of [`nu`].
//! * [`oracle`]: independent checks (finite-difference radial spectrum,
//!   Laguerre recurrence, finite-difference commutator).
//!
//! IO, the CLI and file formats live in the `phasespace` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod ept;
pub mod error;
pub mod hta;
pub mod nu;
pub mod opspace;
pub mod oracle;
pub mod poly;

pub use ept::ExpPowerTerm;
pub use error::{Error, Result};
pub use poly::Poly;

/// Double-precision complex scalar used throughout.
pub type Complex = num_complex::Complex64;

/// Shorthand for building a [`Complex`].
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}
