//! Exact reference: the driven atom-mode master equation on a truncated
//! Fock space, its steady state, and exact diffusion and friction.

pub mod basis;
pub mod liouvillian;
pub mod response;
pub mod steady;

pub use basis::{FockBasis, Operator};
pub use liouvillian::{build_hamiltonian, build_liouvillian, Superoperator};
pub use response::{coupling_derivative, exact_diffusion, exact_friction, friction_sign};
pub use steady::{
    cutoff_seed, expectation, solve_at_cutoff, steady_state, CutoffPolicy, FactorizedLiouvillian, SteadyState,
    SteadyStateOptions, SteadyStateReport, MAX_CUTOFF,
};
