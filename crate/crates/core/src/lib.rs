//! Simulator and numerical-analysis toolkit for the 2D defocusing nonlinear
//! Schroedinger equation with singular weighted exponential nonlinearity,
//!   i u_t + Lap u = |x|^{-b} u (e^{alpha |u|^2} - 1),  alpha = 2 pi (2 - b),
//! on the periodic box [-L, L)^2.
//!
//! Modules follow the problem's anatomy: `grid`/`field`/`spectral`/`weight`
//! carry the discretization, `nonlin` the pointwise terms, `functionals` the
//! conserved quantities and functional inequalities, `rearrange` the
//! symmetrization machinery, `evolve` the split-step and Duhamel
//! integrators, and `diagnostics` the trajectory monitors.

pub mod diagnostics;
pub mod error;
pub mod evolve;
pub mod field;
pub mod functionals;
pub mod grid;
pub mod nonlin;
pub mod norms;
pub mod rearrange;
pub mod rng;
pub mod spectral;
pub mod util;
pub mod weight;

pub use error::{CoreError, Result};
pub use field::Field;
pub use grid::GridSpec;
pub use nonlin::PhysParams;
pub use weight::SingularWeight;
