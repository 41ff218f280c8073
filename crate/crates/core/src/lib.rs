//! Saw-chain tight-binding bands and Darboux-coupled pseudo-spin-1 Dirac
//! operators.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised bottom-up:
//!
//! - [`numcore`]: grids, finite differences, quadrature, small dense and
//!   banded Hermitian eigensolvers, quadratic roots.
//! - [`lattice`]: Bloch Hamiltonian of the saw chain, band structure,
//!   flat-band tuning of `t_CC`, finite open chains.
//! - [`continuum`]: Dirac-type operators `-iγ∂ₓ + V(x)`, symbol dispersion
//!   and finite-difference discretization.
//! - [`susy`]: the Darboux transformation engine (seed states, the matrix
//!   `U`, hermitization, transformed potential, the intertwiner `L`).
//! - [`models`]: the two closed-form coupled models used as oracles.
//! - [`spectrum`]: shared spectral bookkeeping (clusters, gap edges,
//!   localization tags).

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod continuum;
mod error;
pub mod lattice;
pub mod models;
pub mod numcore;
pub mod spectrum;
pub mod susy;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// `|z|` through libm. `Complex::norm` dispatches to whichever math backend
/// num-traits was built with, which changes the last bits between builds.
pub trait Modulus {
    fn modulus(&self) -> f64;
}

impl Modulus for C64 {
    #[inline]
    fn modulus(&self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

/// `r·e^{iθ}` through libm.
#[inline]
pub fn polar(r: f64, theta: f64) -> C64 {
    let (s, c) = libm::sincos(theta);
    C64::new(r * c, r * s)
}
