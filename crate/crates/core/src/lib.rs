//! Entanglement monotones and entanglement-of-formation lower bounds for
//! bipartite `4 x N` quantum states.
//!
//! The crate computes three operational monotones of a density matrix:
//!
//! - the negativity `n_T`, from the partial transpose;
//! - the Φ-negativity `n_Φ`, from Breuer's positive map on the four-level factor;
//! - the realignment negativity `n_R`, from the index reshuffle.
//!
//! For pure states these reduce to closed forms in the Schmidt coefficients.
//! Using `(n_Φ, n_T)` as joint constraints on the minimal marginal entropy
//! gives a surface [`bounds::BoundSurface`] whose value at the monotone pair
//! of any state lower-bounds its entanglement of formation.
//!
//! Modules, bottom-up:
//!
//! - [`linalg`]: complex matrices, Jacobi eigenvalues, trace norm, the
//!   bipartite reshufflings and Schmidt vectors.
//! - [`monotones`]: `n_T`, `n_Φ`, `n_R`, mixed and pure.
//! - [`region`]: the pure-state region in the `(n_Φ, n_T)` plane and the
//!   exact constraint solver.
//! - [`bounds`]: singly constrained closed forms, the doubly constrained
//!   minimum, its monotone regularisation, the convex hull and the
//!   full-plane extension.
//! - [`oracle`]: brute-force references used by the tests and the verifier.
//! - [`random`]: seeded samplers.

pub mod bounds;
pub mod linalg;
pub mod monotones;
pub mod oracle;
pub mod random;
pub mod region;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("matrix is not Hermitian (max |m - m†| = {0:e})")]
    NotHermitian(f64),

    #[error("trace deviates from 1 (got {0})")]
    Trace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("state norm deviates from 1 (got {0})")]
    Norm(f64),

    #[error("invalid Schmidt vector: {0}")]
    Simplex(String),

    #[error("{name} = {value} is outside its domain [{lo}, {hi}]")]
    Domain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("point ({n_phi}, {n_t}) not reachable by any Schmidt vector at this resolution")]
    Unreachable { n_phi: f64, n_t: f64 },

    #[error("point ({n_phi}, {n_t}) is outside the pure-state region")]
    OutsidePureRegion { n_phi: f64, n_t: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no grid point satisfies the constraints")]
    Infeasible,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value, lo, hi })
    }
}
