//! Bipartite states on `C^4 ⊗ C^N` and the index reshufflings used by the
//! separability criteria.
//!
//! Composite indices are `(a, b) -> a * N + b`: the four-level factor `A`
//! is always the first tensor factor.

use num_complex::Complex64;

use super::{hermitian_eigenvalues, ComplexMatrix};
use crate::{Error, Result};

/// Dimension of the first factor.
pub const DIM_A: usize = 4;

/// Hermiticity, trace and positivity tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;

/// A validated density matrix on `C^4 ⊗ C^N`.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dim_b: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (all at [`STATE_TOL`]).
    pub fn new(matrix: ComplexMatrix, dim_b: usize) -> Result<Self> {
        let dim = DIM_A * dim_b;
        if dim_b == 0 || matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::Shape(format!(
                "density matrix for 4x{dim_b} must be {dim}x{dim}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::Trace(trace.re));
        }
        let min_eig = hermitian_eigenvalues(&matrix, STATE_TOL)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -STATE_TOL {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { dim_b, matrix })
    }

    /// Projector onto a (normalised) pure state.
    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            dim_b: psi.dim_b,
            matrix: ComplexMatrix::outer(&psi.amplitudes, &psi.amplitudes),
        }
    }

    /// Convex combination `Σ w_k ρ_k`; weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Shape("empty mixture".into()))?;
        let dim_b = first.1.dim_b;
        let mut acc = ComplexMatrix::zeros(first.1.matrix.rows(), first.1.matrix.cols());
        let mut total = 0.0;
        for (w, rho) in parts {
            if rho.dim_b != dim_b {
                return Err(Error::Shape("mixture of states with different dimensions".into()));
            }
            if *w < 0.0 {
                return Err(Error::Shape(format!("negative mixture weight {w}")));
            }
            acc = acc.add_scaled(&rho.matrix, *w);
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Trace(total));
        }
        Ok(Self { dim_b, matrix: acc })
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Applies `U ⊗ W` by conjugation. Unitarity is the caller's job.
    pub fn conjugate_local(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Self {
        let u = u_a.kron(u_b);
        Self {
            dim_b: self.dim_b,
            matrix: u.matmul(&self.matrix).matmul(&u.adjoint()),
        }
    }
}

/// A unit vector in `C^4 ⊗ C^N`.
#[derive(Clone, Debug)]
pub struct PureState {
    dim_b: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Accepts vectors whose norm lies within `1e-9` of one.
    pub fn new(amplitudes: Vec<Complex64>, dim_b: usize) -> Result<Self> {
        if dim_b == 0 || amplitudes.len() != DIM_A * dim_b {
            return Err(Error::Shape(format!(
                "pure state for 4x{dim_b} needs {} amplitudes, got {}",
                DIM_A * dim_b,
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Norm(norm));
        }
        Ok(Self { dim_b, amplitudes })
    }

    /// `Σ_k sqrt(c_k) |k>|k>` for `k < min(4, N)`.
    pub fn canonical(coefficients: [f64; 4], dim_b: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); DIM_A * dim_b];
        for (k, &c) in coefficients.iter().enumerate() {
            if c < 0.0 {
                return Err(Error::Shape(format!("negative Schmidt coefficient {c}")));
            }
            if c > 0.0 {
                if k >= dim_b {
                    return Err(Error::Shape(format!(
                        "Schmidt rank exceeds the dimension N = {dim_b}"
                    )));
                }
                amps[k * dim_b + k] = Complex64::new(c.sqrt(), 0.0);
            }
        }
        Self::new(amps, dim_b)
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn apply_local(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Self {
        let u = u_a.kron(u_b);
        let amplitudes = (0..u.rows())
            .map(|i| (0..u.cols()).map(|j| u[(i, j)] * self.amplitudes[j]).sum())
            .collect();
        Self {
            dim_b: self.dim_b,
            amplitudes,
        }
    }

    /// The reduced state `Tr_B |ψ><ψ|` as a 4x4 matrix.
    pub fn reduced_a(&self) -> ComplexMatrix {
        let n = self.dim_b;
        let mut rho = ComplexMatrix::zeros(DIM_A, DIM_A);
        for a in 0..DIM_A {
            for a2 in 0..DIM_A {
                rho[(a, a2)] = (0..n)
                    .map(|b| self.amplitudes[a * n + b] * self.amplitudes[a2 * n + b].conj())
                    .sum();
            }
        }
        rho
    }
}

/// Partial transpose on factor `A`: `out[(a,b),(a',b')] = ρ[(a',b),(a,b')]`.
pub fn partial_transpose_a(rho: &ComplexMatrix, dim_b: usize) -> ComplexMatrix {
    let n = dim_b;
    let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
    for a in 0..DIM_A {
        for b in 0..n {
            for a2 in 0..DIM_A {
                for b2 in 0..n {
                    out[(a * n + b, a2 * n + b2)] = rho[(a2 * n + b, a * n + b2)];
                }
            }
        }
    }
    out
}

/// Realignment `[R(ρ)]_{ij,kl} = ρ_{ik,jl}` with `i, j` on `A` and `k, l` on `B`.
///
/// The result is `16 x N²`, rows indexed by `(i, j)` and columns by `(k, l)`.
pub fn realign(rho: &ComplexMatrix, dim_b: usize) -> ComplexMatrix {
    let n = dim_b;
    let mut out = ComplexMatrix::zeros(DIM_A * DIM_A, n * n);
    for i in 0..DIM_A {
        for j in 0..DIM_A {
            for k in 0..n {
                for l in 0..n {
                    out[(i * DIM_A + j, k * n + l)] = rho[(i * n + k, j * n + l)];
                }
            }
        }
    }
    out
}

/// `(Λ ⊗ I)(ρ)`: applies a linear map on 4x4 matrices to every `A`-block
/// `ρ[(·, b), (·, b')]`.
pub fn apply_map_to_a<F>(rho: &ComplexMatrix, dim_b: usize, map: F) -> ComplexMatrix
where
    F: Fn(&ComplexMatrix) -> ComplexMatrix,
{
    let n = dim_b;
    let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
    let mut block = ComplexMatrix::zeros(DIM_A, DIM_A);
    for b in 0..n {
        for b2 in 0..n {
            for a in 0..DIM_A {
                for a2 in 0..DIM_A {
                    block[(a, a2)] = rho[(a * n + b, a2 * n + b2)];
                }
            }
            let image = map(&block);
            for a in 0..DIM_A {
                for a2 in 0..DIM_A {
                    out[(a * n + b, a2 * n + b2)] = image[(a, a2)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_norm;
    use crate::random::{random_density, random_product_density, seeded};

    fn max_entangled(n: usize) -> DensityMatrix {
        DensityMatrix::from_pure(&PureState::canonical([0.25; 4], n).unwrap())
    }

    #[test]
    fn validation_diagnostics() {
        let mut m = ComplexMatrix::identity(8).scale(0.9 / 8.0);
        assert!(matches!(DensityMatrix::new(m.clone(), 2), Err(Error::Trace(_))));
        m = ComplexMatrix::from_real_diagonal(&[1.2, -0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(DensityMatrix::new(m, 2), Err(Error::NotPositive(_))));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::identity(6).scale(1.0 / 6.0), 2),
            Err(Error::Shape(_))
        ));
        assert!(PureState::new(vec![Complex64::new(0.5, 0.0); 8], 2).is_err());
    }

    #[test]
    fn partial_transpose_is_an_involution_preserving_trace() {
        let mut rng = seeded(7);
        let rho = random_density(&mut rng, 3, 5);
        let pt = partial_transpose_a(rho.matrix(), 3);
        assert!(pt.hermiticity_defect() < 1e-14);
        assert!((pt.trace() - rho.matrix().trace()).norm() < 1e-14);
        assert_eq!(&partial_transpose_a(&pt, 3), rho.matrix());
    }

    #[test]
    fn partial_transpose_of_product_is_positive() {
        let mut rng = seeded(8);
        let rho = random_product_density(&mut rng, 4);
        let pt = partial_transpose_a(rho.matrix(), 4);
        assert!((trace_norm(&pt) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn maximally_entangled_partial_transpose_spectrum() {
        let pt = partial_transpose_a(max_entangled(4).matrix(), 4);
        let ev = hermitian_eigenvalues(&pt, 1e-12).unwrap();
        assert!((ev.last().unwrap() + 0.25).abs() < 1e-12);
        assert!((ev[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn realign_matches_index_loop_reference() {
        let mut rng = seeded(9);
        let n = 3;
        let rho = random_density(&mut rng, n, 6);
        let r = realign(rho.matrix(), n);
        assert_eq!((r.rows(), r.cols()), (16, 9));
        // Reference written against the tensor view ρ[i][k][j][l].
        let m = rho.matrix();
        let tensor = |i: usize, k: usize, j: usize, l: usize| m[(i * n + k, j * n + l)];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..n {
                    for l in 0..n {
                        assert_eq!(r[(4 * i + j, n * k + l)], tensor(i, k, j, l));
                    }
                }
            }
        }
    }

    #[test]
    fn realigned_product_has_rank_one() {
        use crate::linalg::singular_values;
        let mut rng = seeded(10);
        let rho = random_product_density(&mut rng, 5);
        let sv = singular_values(&realign(rho.matrix(), 5));
        assert!(sv[1] < 1e-7 * sv[0], "{sv:?}");
        assert!(sv[0] <= 1.0 + 1e-12);
    }

    #[test]
    fn map_application_consistency() {
        let mut rng = seeded(12);
        let rho = random_density(&mut rng, 4, 3);
        let same = apply_map_to_a(rho.matrix(), 4, |m| m.clone());
        assert_eq!(&same, rho.matrix());
        let t = apply_map_to_a(rho.matrix(), 4, |m| m.transpose());
        assert_eq!(t, partial_transpose_a(rho.matrix(), 4));
    }

    #[test]
    fn reduced_state_of_canonical_embedding() {
        let psi = PureState::canonical([0.5, 0.5, 0.0, 0.0], 6).unwrap();
        let r = psi.reduced_a();
        assert!((r[(0, 0)].re - 0.5).abs() < 1e-15 && (r[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(PureState::canonical([0.25; 4], 2).is_err());
    }
}
