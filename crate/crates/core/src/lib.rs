//! Semiclassical "ping-pong" steady states, optical bistability and
//! cooling coefficients for a driven two-level atom in a single-mode
//! cavity, together with an exact truncated-Fock master-equation solver
//! used as the reference.
//!
//! Units: frequencies in units of the peak coupling `g0`, positions in
//! units of the wavelength, detunings measured from the probe.

// Negated comparisons such as `!(x > 0.0)` are used on purpose: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bistability;
mod cubic;
pub mod error;
pub mod exact;
pub mod kinetics;
pub mod model;
pub mod scan;
pub mod states;

pub use error::{Error, Result};
pub use model::{CouplingProfile, SystemParams};
pub use states::{SemiclassicalState, StateVariant};
