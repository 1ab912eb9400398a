//! Numerical laboratory for the spinless relativistic (square-root)
//! Schrodinger equation in one spatial dimension, with closed-form
//! three-dimensional reference states for the radially symmetric massless
//! case.
//!
//! The kinetic operator sqrt(m^2 c^4 - hbar^2 c^2 Laplacian) is realized two
//! independent ways, as a Fourier multiplier and as a singular convolution
//! kernel built from Macdonald functions; wavepackets are propagated exactly
//! (free and linear-potential cases) or by Strang splitting, and the
//! probability density and current are cross-checked against closed-form
//! solutions.

pub mod cli;
pub mod error;
pub mod evolve;
pub mod exact;
pub mod grid;
pub mod hamiltonian;
pub mod observables;
pub mod quad;
pub mod specfun;
pub mod validate;

pub use error::{Result, SalpeterError};
