//! Energy-dependent Green functions and Feynman propagators for one-dimensional,
//! time-independent Hamiltonians.
//!
//! The Green function `G(x, x', E)` is assembled from two energy solutions
//! `u-`, `u+` and their Wronskian; the propagator `K(x, x', t)` is then recovered
//! by closed forms, by the oscillator's spectral residue sum, or by numerical
//! inversion of the Laplace transform. A Crank-Nicolson evolver provides an
//! independent time-domain check.
//!
//! Conventions: `G` is normalized so that `[dG/dx]` jumps by `-2m/hbar` at
//! `x = x'`, i.e. `G = hbar (H - E)^-1`, and
//! `K(t) = (1 / 2 pi hbar i) \int exp(-i E t / hbar) G(E) dE` along a contour
//! passing above the spectrum.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod eval;
pub mod greens;
pub mod grid;
pub mod laplace;
pub mod ode;
pub mod potential;
pub mod propagator;
pub mod quad;
pub mod specfun;
pub mod tdse;
pub mod units;

pub use error::{Error, Result};
pub use eval::{EvalPoint, GreenEval, GreenMethod, PropEval, PropMethod};
pub use grid::Grid1D;
pub use potential::{CustomPotential, Interpolation, PotentialModel};
pub use units::UnitsConfig;

pub use num_complex::Complex64;

#[allow(unused_imports)]
pub(crate) mod prelude {
    pub use num_traits::Float;

    pub use alloc::{boxed::Box, format, string::String, vec, vec::Vec};
    pub use num_complex::Complex64;

    pub const I: Complex64 = Complex64::new(0.0, 1.0);

    #[inline]
    pub fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[inline]
    pub fn cr(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }
}
