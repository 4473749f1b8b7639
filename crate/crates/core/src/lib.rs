//! Steady-state and transient response of a single two-level atom coupled to
//! the guided mode of an optical nanofiber cavity bounded by two fiber Bragg
//! gratings.
//!
//! The crate is organized bottom-up:
//!
//! * [`fiber_modes`] solves the fundamental guided mode of a step-index fiber;
//! * [`cavity`] turns grating reflectivity and length into damping and drive;
//! * [`atom_field`] gives the position-dependent coupling, surface shift and
//!   decay rate of the atom;
//! * [`liouvillian`] builds the master-equation generator on the truncated
//!   Fock x two-level space;
//! * [`steady_state`] solves for and propagates the density matrix;
//! * [`analytic`] holds the weak-drive closed forms used as a cross-check;
//! * [`sweep`] runs position and detuning scans for the predefined scenarios.

pub mod analytic;
pub mod atom_field;
pub mod cavity;
pub mod constants;
pub mod error;
pub mod fiber_modes;
pub mod liouvillian;
mod quadrature;
pub mod special;
pub mod steady_state;
pub mod sweep;

pub use error::{Error, Result};

/// Complex scalar used for density matrices and operators.
pub type C64 = num_complex::Complex64;
