//! Dense complex linear algebra for bipartite `4 x N` systems.

mod bipartite;
mod eigen;
mod matrix;
mod norms;
mod schmidt;

pub use bipartite::{
    apply_map_to_a, partial_transpose_a, realign, DensityMatrix, PureState, DIM_A, STATE_TOL,
};
pub use eigen::hermitian_eigenvalues;
pub use matrix::ComplexMatrix;
pub use norms::{singular_values, trace_norm};
pub use schmidt::{schmidt_vector, shannon_entropy, LabeledSchmidt, SchmidtVector, SIMPLEX_TOL};
