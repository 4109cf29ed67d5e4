//! Numerical laboratory for mass equidistribution of Eisenstein series on
//! shrinking hyperbolic balls.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: upper-half-space models of ℍ², ℍ³ and ℍⁿ, distances,
//!   ball volumes, isometries, sampling and quadrature over geodesic balls.
//! * [`lattice`]: exact arithmetic in the nine class-number-one imaginary
//!   quadratic rings.
//! * [`specfun`]: log-gamma, K- and J-Bessel functions, incomplete gamma.
//! * [`zeta`]: Riemann, Dirichlet, Dedekind and Epstein zeta functions,
//!   scattering matrices and critical-line moments.
//! * [`selberg`]: Selberg transform of the normalised ball kernel.
//! * [`eisenstein`]: Eisenstein series on the modular surface and on Bianchi
//!   orbifolds, gamma factors and regularised triple products.
//! * [`mass`]: ball masses of |E|², QUE main terms and variance windows.
//! * [`cli`]: declarative experiment configs and the tabular driver behind
//!   the `quelab` binary.

pub mod cli;
pub mod eisenstein;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod mass;
pub mod quad;
pub mod selberg;
pub mod specfun;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
