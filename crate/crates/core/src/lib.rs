//! Canonical momentum operators in orthogonal curvilinear coordinates.
//!
//! The momentum conjugate to a coordinate `q` is built as
//! `-iħ (1/f) ∂_q f` with `f = √w`, where `w(q)` is that coordinate's
//! factor of the volume element. Everything else in the crate exists to
//! check, by one-dimensional Gaussian quadrature over separable states,
//! that this choice gives real expectation values, satisfies the
//! canonical commutators, and reproduces the hydrogen-atom radial force
//! balance.
//!
//! Module map:
//!
//! - [`specfun`]: associated Legendre and Laguerre functions, spherical harmonics.
//! - [`geometry`]: coordinate presets, volume weights, measure factors.
//! - [`quadrature`]: Gauss–Legendre, half-line, line and periodic rules.
//! - [`states`]: separable wavefunctions, hydrogen eigenstates, trial states.
//! - [`operators`]: momentum operators, application, commutator residuals.
//! - [`analysis`]: expectation reports, defects, force balance.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod operators;
pub mod quadrature;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
