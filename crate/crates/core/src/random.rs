//! Seeded samplers for states, unitaries and simplex points.
//!
//! Everything draws from [`ChaCha8Rng`] so runs are reproducible from a
//! single `u64` seed regardless of platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::{ComplexMatrix, DensityMatrix, PureState, DIM_A};

pub type StateRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Ginibre matrix with standard complex Gaussian entries.
pub fn random_complex_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_row_major(rows, cols, data).expect("finite gaussian entries")
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, n, n);
    g.add_scaled(&g.adjoint(), 1.0).scale(0.5)
}

/// Haar unitary: Gram-Schmidt on a Ginibre matrix with the phase fix that
/// makes the distribution exactly Haar.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, n, n);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for k in 0..j {
            let proj: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..n {
                let sub = proj * cols[k][i];
                cols[j][i] -= sub;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
    v
}

/// Haar-random pure state of `C^4 ⊗ C^N`.
pub fn random_pure_state(rng: &mut impl Rng, dim_b: usize) -> PureState {
    PureState::new(random_unit_vector(rng, DIM_A * dim_b), dim_b).expect("unit vector")
}

/// Uniform point on the probability simplex (flat Dirichlet).
pub fn random_simplex_point(rng: &mut impl Rng) -> [f64; 4] {
    random_dirichlet(rng, 1.0)
}

/// Symmetric Dirichlet sample with the given concentration.
pub fn random_dirichlet(rng: &mut impl Rng, concentration: f64) -> [f64; 4] {
    let mut x = [0.0; 4];
    if concentration == 1.0 {
        for v in x.iter_mut() {
            *v = Exp1.sample(rng);
        }
    } else {
        let g = rand_distr::Gamma::new(concentration, 1.0).expect("positive concentration");
        for v in x.iter_mut() {
            *v = g.sample(rng);
        }
    }
    let total: f64 = x.iter().sum();
    let mut out = x.map(|v| v / total);
    // Pin the sum to one exactly.
    let drift = 1.0 - out.iter().sum::<f64>();
    out[0] += drift;
    out
}

/// Full-rank random density matrix `G G† / Tr(G G†)` with `rank` Ginibre columns.
pub fn random_density(rng: &mut impl Rng, dim_b: usize, rank: usize) -> DensityMatrix {
    let dim = DIM_A * dim_b;
    let g = random_complex_matrix(rng, dim, rank.max(1));
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    DensityMatrix::new(w.scale(1.0 / tr), dim_b).expect("Wishart matrix is a state")
}

fn random_local_density(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    // Pure with probability 1/2, otherwise full rank.
    let rank = if rng.random::<bool>() { 1 } else { n };
    let g = random_complex_matrix(rng, n, rank);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    w.scale(1.0 / tr)
}

/// `ρ_A ⊗ ρ_B` with each factor random (pure or mixed).
pub fn random_product_density(rng: &mut impl Rng, dim_b: usize) -> DensityMatrix {
    let a = random_local_density(rng, DIM_A);
    let b = random_local_density(rng, dim_b);
    DensityMatrix::new(a.kron(&b), dim_b).expect("product of states")
}

/// Mixture of between one and `max_terms` random product states.
pub fn random_separable(rng: &mut impl Rng, dim_b: usize, max_terms: usize) -> DensityMatrix {
    let terms = rng.random_range(1..=max_terms.max(1));
    let parts: Vec<DensityMatrix> = (0..terms).map(|_| random_product_density(rng, dim_b)).collect();
    let raw: Vec<f64> = (0..terms).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let drift = 1.0 - weights.iter().sum::<f64>();
    weights[0] += drift;
    let refs: Vec<(f64, &DensityMatrix)> = weights.iter().copied().zip(parts.iter()).collect();
    DensityMatrix::mixture(&refs).expect("convex weights")
}
