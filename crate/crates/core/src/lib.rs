//! Geometric phases generated by slowly looping the squeezing phase of a
//! broadband squeezed-vacuum reservoir.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: small dense complex linear algebra, eigen-decomposition,
//!   matrix exponentials and a fixed-step RK4 integrator.
//! - [`bath`]: squeezing parameters, bath moments, ladder and dressed jump
//!   operators, dark and orthogonal states, loop schedules.
//! - [`lindblad`]: the dissipator, master-equation evolution and relaxation
//!   experiments.
//! - [`geomphase`]: discrete Berry phases, phase/visibility extraction and
//!   the spin-1/2 reference loop.
//! - [`fourlevel`]: three coupled levels plus a decoupled reference level,
//!   with the 2x2 reduced coherence system.
//! - [`fivelevel`]: two independently squeezed channels, the 4x4 reduced
//!   system and polarization readout.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod error;
pub mod fivelevel;
pub mod fourlevel;
pub mod geomphase;
pub mod lindblad;
pub mod qcore;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
