//! The in-house Jacobi routines against nalgebra, plus structural identities
//! of the bipartite reshufflings.

use eofbound::linalg::{
    hermitian_eigenvalues, partial_transpose_a, realign, schmidt_vector, singular_values,
    trace_norm, ComplexMatrix, DensityMatrix, DIM_A,
};
use eofbound::random::{
    random_complex_matrix, random_density, random_hermitian, random_pure_state, random_unitary,
    seeded,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn to_na(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn eigenvalues_match_nalgebra_up_to_64() {
    let mut rng = seeded(11);
    for n in [1, 2, 4, 7, 16, 33, 64] {
        let h = random_hermitian(&mut rng, n);
        let ours = hermitian_eigenvalues(&h, 1e-12).unwrap();
        let theirs = sorted_desc(to_na(&h).symmetric_eigenvalues().iter().copied().collect());
        let scale = theirs.iter().map(|x| x.abs()).fold(1.0, f64::max);
        assert!(max_diff(&ours, &theirs) < 1e-10 * scale, "n = {n}");
    }
}

#[test]
fn singular_values_match_nalgebra_on_realignment_shapes() {
    let mut rng = seeded(12);
    for n in [1, 2, 3, 4, 8] {
        let m = random_complex_matrix(&mut rng, DIM_A * DIM_A, n * n);
        let ours = singular_values(&m);
        let theirs = sorted_desc(to_na(&m).singular_values().iter().copied().collect());
        let k = ours.len().min(theirs.len());
        assert!(max_diff(&ours[..k], &theirs[..k]) < 1e-10, "16 x {}", n * n);
        assert!(ours[k..].iter().all(|s| s.abs() < 1e-10));
    }
}

#[test]
fn pure_state_trace_norm_example() {
    let psi = DensityMatrix::from_pure(
        &eofbound::linalg::PureState::canonical([0.4, 0.3, 0.2, 0.1], 4).unwrap(),
    );
    let norm = trace_norm(&partial_transpose_a(psi.matrix(), 4));
    let s: f64 = [0.4f64, 0.3, 0.2, 0.1].iter().map(|m| m.sqrt()).sum();
    assert!((norm - s * s).abs() < 1e-12);
}

#[test]
fn realignment_matches_quadruple_loop() {
    let mut rng = seeded(13);
    let n = 3;
    let rho = random_density(&mut rng, n, 12);
    let r = realign(rho.matrix(), n);
    assert_eq!((r.rows(), r.cols()), (16, 9));
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..n {
                for l in 0..n {
                    assert_eq!(r[(4 * i + j, n * k + l)], rho.matrix()[(n * i + k, n * j + l)]);
                }
            }
        }
    }
}

#[test]
fn realignment_trace_norm_matches_gram_oracle() {
    let mut rng = seeded(14);
    for n in [2, 4] {
        let rho = random_density(&mut rng, n, DIM_A * n);
        let r = to_na(&realign(rho.matrix(), n));
        let gram = &r * r.adjoint();
        let oracle: f64 = gram.symmetric_eigenvalues().iter().map(|e| e.max(0.0).sqrt()).sum();
        let ours = trace_norm(&realign(rho.matrix(), n));
        assert!((ours - oracle).abs() < 1e-7, "n = {n}: {ours} vs {oracle}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_norm_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = seeded(seed);
        let h = random_hermitian(&mut rng, n);
        let u = random_unitary(&mut rng, n);
        let v = random_unitary(&mut rng, n);
        let rotated = u.matmul(&h).matmul(&v);
        let a = trace_norm(&h);
        prop_assert!((a - trace_norm(&rotated)).abs() < 1e-10 * a.max(1.0));
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = seeded(seed);
        let rho = random_density(&mut rng, n, 2);
        let back = partial_transpose_a(&partial_transpose_a(rho.matrix(), n), n);
        prop_assert_eq!(back.max_abs_diff(rho.matrix()), 0.0);
    }

    #[test]
    fn schmidt_vector_is_local_unitary_invariant(seed in any::<u64>(), n in 4usize..7) {
        let mut rng = seeded(seed);
        let psi = random_pure_state(&mut rng, n);
        let ua = random_unitary(&mut rng, DIM_A);
        let ub = random_unitary(&mut rng, n);
        let a = schmidt_vector(&psi).unwrap().coefficients();
        let b = schmidt_vector(&psi.apply_local(&ua, &ub)).unwrap().coefficients();
        prop_assert!(max_diff(&a, &b) < 1e-10);
        let ea = schmidt_vector(&psi).unwrap().entropy();
        let eb = schmidt_vector(&psi.apply_local(&ua, &ub)).unwrap().entropy();
        prop_assert!((ea - eb).abs() < 1e-9);
    }

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>(), n in 1usize..20) {
        let mut rng = seeded(seed);
        let h = random_hermitian(&mut rng, n);
        let sum: f64 = hermitian_eigenvalues(&h, 1e-12).unwrap().iter().sum();
        prop_assert!((sum - h.trace().re).abs() < 1e-10 * (n as f64));
    }
}
