//! Entanglement-of-formation lower bounds from the monotone pair.
//!
//! - [`closed_form`]: the `n_T`-only and `n_Φ`-only bounds and pure-state EOF.
//! - [`sweep`]: the doubly constrained minimum `H̃` and its monotone
//!   regularisation `H̃↑`.
//! - [`hull`]: lower convex envelopes of sampled surfaces.
//! - [`surface`]: the gridded bound `ℋ` over the whole plane.

pub mod closed_form;
pub mod hull;
pub mod surface;
pub mod sweep;

pub use closed_form::{
    alpha, binary_entropy, bound_nphi, bound_nt, bound_nt_with, eof_pure, gamma, h_tilde_nt,
    ClosedFormParams,
};
pub use hull::{convex_hull, LowerEnvelope};
pub use sweep::{constrained_minimum, h_tilde_2c, h_up, SweepConfig};
pub use surface::{
    build_surface, eval_bound, extended_bound_nphi, extended_bound_nt, node_class, BoundSurface,
    DEFAULT_GRID, MAX_MU4_STEP, MIN_GRID,
};
