//! Operational entanglement monotones for `4 x N` states and their pure-state
//! closed forms.
//!
//! With `Φ(σ) = Tr(σ) I − σ − V σᵀ V†` on the four-level factor, the
//! Φ-negativity is `n_Φ = 3 (‖(Φ ⊗ I)(ρ)‖₁ / 2 − 1)`. For a pure state
//! `Σ √μ_k |k⟩|k⟩` written in the `J_z` basis of the four-level factor it
//! equals `3 √((μ₁+μ₄)(μ₂+μ₃))` with `μ_k` attached to `m = 3/2 − (k−1)`.
//! That value depends on how the Schmidt basis sits relative to the `J_z`
//! basis. Pairing the largest coefficient with the smallest maximises it, and
//! every other local frame gives a value no larger (see the
//! `phi_negativity_frame_dependence` tests).

use num_complex::Complex64;

use crate::linalg::{
    apply_map_to_a, partial_transpose_a, realign, trace_norm, ComplexMatrix, DensityMatrix,
    LabeledSchmidt, SchmidtVector, DIM_A,
};
use crate::{check_domain, Error, Result};

/// Both monotones take values in `[0, MAX_MONOTONE]` for `4 x N` states.
pub const MAX_MONOTONE: f64 = 1.5;

/// Round-off allowance before a negative or oversized monotone is an error.
pub const CLIP_TOL: f64 = 1e-9;

/// A point `(n_Φ, n_T)` of the constraint plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotonePair {
    pub n_phi: f64,
    pub n_t: f64,
}

impl MonotonePair {
    pub fn new(n_phi: f64, n_t: f64) -> Result<Self> {
        check_domain("n_phi", n_phi, 0.0, MAX_MONOTONE)?;
        check_domain("n_t", n_t, 0.0, MAX_MONOTONE)?;
        Ok(Self { n_phi, n_t })
    }

    /// Pure-state closed forms for a labeled Schmidt vector.
    pub fn of_pure(mu: &LabeledSchmidt) -> Self {
        Self {
            n_phi: phi_negativity_labeled(mu),
            n_t: negativity_pure(&mu.sorted()),
        }
    }
}

/// Breuer's `V` on `C^4`, basis index `k ↦ m = 3/2 − k`: antidiagonal
/// `(1, −1, 1, −1)` read from the top-right corner down.
pub fn breuer_v() -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(DIM_A, DIM_A);
    for k in 0..DIM_A {
        // <j,m|V|j,m'> = (-1)^{j-m} δ_{m,-m'}, j - m = k
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        v[(k, DIM_A - 1 - k)] = Complex64::new(sign, 0.0);
    }
    v
}

/// `Φ(σ) = Tr(σ) I − σ − V σᵀ V†` on 4x4 matrices.
pub fn phi_map(sigma: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!((sigma.rows(), sigma.cols()), (DIM_A, DIM_A), "phi_map acts on 4x4 blocks");
    // V is real antidiagonal, so (V σᵀ V†)_{ij} = v_i v_j σ_{j̄ ī} with ī = 3 − i.
    const SIGNS: [f64; 4] = [1.0, -1.0, 1.0, -1.0];
    let tr = sigma.trace();
    let mut out = ComplexMatrix::zeros(DIM_A, DIM_A);
    for i in 0..DIM_A {
        for j in 0..DIM_A {
            let flipped = sigma[(DIM_A - 1 - j, DIM_A - 1 - i)] * (SIGNS[i] * SIGNS[j]);
            let mut z = -sigma[(i, j)] - flipped;
            if i == j {
                z += tr;
            }
            out[(i, j)] = z;
        }
    }
    out
}

/// `(Φ ⊗ I)(ρ)` with Φ on the four-level factor.
pub fn phi_image(rho: &DensityMatrix) -> ComplexMatrix {
    apply_map_to_a(rho.matrix(), rho.dim_b(), phi_map)
}

fn clip_low(name: &str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -CLIP_TOL {
        Ok(0.0)
    } else {
        Err(Error::Inconsistent(format!("{name} = {value:e} is negative")))
    }
}

/// `n_T = (‖ρ^{T_A}‖₁ − 1)/2`.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let norm = trace_norm(&partial_transpose_a(rho.matrix(), rho.dim_b()));
    clip_low("negativity", (norm - 1.0) / 2.0)
}

/// `n_T = ((Σ √μ)² − 1)/2`.
pub fn negativity_pure(mu: &SchmidtVector) -> f64 {
    let s: f64 = mu.coefficients().iter().map(|m| m.sqrt()).sum();
    ((s * s - 1.0) / 2.0).clamp(0.0, MAX_MONOTONE)
}

/// `n_Φ = 3 (‖(Φ ⊗ I)(ρ)‖₁ / 2 − 1)`.
pub fn phi_negativity(rho: &DensityMatrix) -> Result<f64> {
    let norm = trace_norm(&phi_image(rho));
    // D(D-1)/4 [ ‖·‖/(D-2) − 1 ] at D = 4
    clip_low("phi-negativity", 3.0 * (norm / 2.0 - 1.0))
}

/// Pure-state Φ-negativity in the canonical Schmidt frame (largest
/// coefficient on `m = 3/2`, smallest on `m = −3/2`): `3 √((μ₁+μ₄)(μ₂+μ₃))`.
pub fn phi_negativity_pure(mu: &SchmidtVector) -> f64 {
    phi_negativity_labeled(&mu.canonical_labeling())
}

/// `3 √((μ₁+μ₄)(μ₂+μ₃))` for coefficients attached to the `J_z` basis.
pub fn phi_negativity_labeled(mu: &LabeledSchmidt) -> f64 {
    let [a, b, c, d] = mu.coefficients();
    (3.0 * ((a + d) * (b + c)).max(0.0).sqrt()).min(MAX_MONOTONE)
}

/// `n_R = (‖R(ρ)‖₁ − 1)/2`, clipped at zero. Separable states typically
/// have `‖R(ρ)‖₁ < 1`, so the clip here is not a rounding fix.
pub fn realignment_negativity(rho: &DensityMatrix) -> Result<f64> {
    let norm = trace_norm(&realign(rho.matrix(), rho.dim_b()));
    Ok(((norm - 1.0) / 2.0).max(0.0))
}

fn clip_high(name: &str, value: f64) -> Result<f64> {
    if value > MAX_MONOTONE + CLIP_TOL {
        Err(Error::Inconsistent(format!(
            "{name} = {value} exceeds {MAX_MONOTONE}"
        )))
    } else {
        Ok(value.min(MAX_MONOTONE))
    }
}

/// `(n_Φ, n_T)`, or `(n_Φ, max(n_T, n_R))` with `use_realignment`.
pub fn monotone_pair(rho: &DensityMatrix, use_realignment: bool) -> Result<MonotonePair> {
    let n_phi = clip_high("phi-negativity", phi_negativity(rho)?)?;
    let mut n_t = clip_high("negativity", negativity(rho)?)?;
    if use_realignment {
        n_t = n_t.max(clip_high("realignment negativity", realignment_negativity(rho)?)?);
    }
    Ok(MonotonePair { n_phi, n_t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, PureState};
    use crate::random::{random_density, random_hermitian, random_separable, seeded};

    fn pure(c: [f64; 4], n: usize) -> DensityMatrix {
        DensityMatrix::from_pure(&PureState::canonical(c, n).unwrap())
    }

    #[test]
    fn v_is_unitary_and_antisymmetric() {
        let v = breuer_v();
        assert!(v.matmul(&v.adjoint()).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        assert!(v.transpose().max_abs_diff(&v.scale(-1.0)) < 1e-15);
        assert_eq!(v[(0, 3)].re, 1.0);
        assert_eq!(v[(1, 2)].re, -1.0);
        assert_eq!(v[(2, 1)].re, 1.0);
        assert_eq!(v[(3, 0)].re, -1.0);
    }

    #[test]
    fn phi_map_matches_definition() {
        let mut rng = seeded(31);
        let v = breuer_v();
        let sigma = random_hermitian(&mut rng, 4);
        let tr = sigma.trace().re;
        let direct = ComplexMatrix::identity(4)
            .scale(tr)
            .add_scaled(&sigma, -1.0)
            .add_scaled(&v.matmul(&sigma.transpose()).matmul(&v.adjoint()), -1.0);
        assert!(phi_map(&sigma).max_abs_diff(&direct) < 1e-14);
        assert!((phi_map(&sigma).trace().re - 2.0 * tr).abs() < 1e-12);

        let quarter = ComplexMatrix::identity(4).scale(0.25);
        assert!(phi_map(&quarter).max_abs_diff(&ComplexMatrix::identity(4).scale(0.5)) < 1e-15);
    }

    #[test]
    fn named_states() {
        let me = pure([0.25; 4], 4);
        assert!((negativity(&me).unwrap() - 1.5).abs() < 1e-10);
        assert!((phi_negativity(&me).unwrap() - 1.5).abs() < 1e-10);

        let bell = pure([0.5, 0.5, 0.0, 0.0], 4);
        assert!((negativity(&bell).unwrap() - 0.5).abs() < 1e-10);
        assert!((phi_negativity(&bell).unwrap() - 1.5).abs() < 1e-10);
        let pair = monotone_pair(&bell, false).unwrap();
        assert!((pair.n_t - pair.n_phi / 3.0).abs() < 1e-10);

        let prod = pure([1.0, 0.0, 0.0, 0.0], 3);
        let pair = monotone_pair(&prod, true).unwrap();
        assert!(pair.n_phi.abs() < 1e-10 && pair.n_t.abs() < 1e-10);
    }

    #[test]
    fn pure_closed_forms() {
        let g = 0.75;
        let gp = (1.0 - g) / 3.0;
        let mu = SchmidtVector::new([g, gp, gp, gp]).unwrap();
        assert!((negativity_pure(&mu) - 1.0).abs() < 1e-14);
        let expected = (2.0 * (2.0 * g + 1.0) * (1.0 - g)).sqrt();
        assert!((phi_negativity_pure(&mu) - expected).abs() < 1e-14);
        assert_eq!(negativity_pure(&SchmidtVector::new([1.0, 0.0, 0.0, 0.0]).unwrap()), 0.0);
        assert_eq!(phi_negativity_pure(&SchmidtVector::new([0.25; 4]).unwrap()), 1.5);
        assert!((negativity_pure(&SchmidtVector::new([0.25; 4]).unwrap()) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn labeled_closed_form_matches_operational_value() {
        // Every pairing, not just the canonical one.
        let sorted = SchmidtVector::new([0.45, 0.3, 0.15, 0.1]).unwrap();
        for lab in LabeledSchmidt::pairings(&sorted) {
            let rho = pure(lab.coefficients(), 4);
            let op = phi_negativity(&rho).unwrap();
            assert!((op - phi_negativity_labeled(&lab)).abs() < 1e-9, "{lab:?}");
        }
    }

    #[test]
    fn separable_states_have_positive_phi_image() {
        let mut rng = seeded(33);
        for _ in 0..20 {
            let rho = random_separable(&mut rng, 3, 5);
            let ev = hermitian_eigenvalues(&phi_image(&rho), 1e-10).unwrap();
            assert!(*ev.last().unwrap() > -1e-9);
            assert!((crate::linalg::trace_norm(&phi_image(&rho)) - 2.0).abs() < 1e-9);
            let p = monotone_pair(&rho, true).unwrap();
            assert!(p.n_phi < 1e-9 && p.n_t < 1e-9, "{p:?} nr={:?}", realignment_negativity(&rho));
        }
    }

    #[test]
    fn phi_negativity_frame_dependence_is_bounded_by_canonical() {
        use crate::random::random_unitary;
        let mut rng = seeded(35);
        let sorted = SchmidtVector::new([0.5, 0.25, 0.15, 0.1]).unwrap();
        let psi = PureState::canonical(sorted.coefficients(), 4).unwrap();
        let top = phi_negativity_pure(&sorted);
        let nt = negativity_pure(&sorted);
        for _ in 0..25 {
            let ua = random_unitary(&mut rng, 4);
            let ub = random_unitary(&mut rng, 4);
            let rho = DensityMatrix::from_pure(&psi.apply_local(&ua, &ub));
            assert!(phi_negativity(&rho).unwrap() <= top + 1e-9);
            assert!((negativity(&rho).unwrap() - nt).abs() < 1e-9);
        }
    }

    #[test]
    fn phi_negativity_frame_dependence_under_relabeling() {
        // Permuting the four-level basis realises every pairing.
        let sorted = SchmidtVector::new([0.55, 0.2, 0.15, 0.1]).unwrap();
        let psi = PureState::canonical(sorted.coefficients(), 4).unwrap();
        let values: Vec<f64> = [[0, 1, 2, 3], [0, 1, 3, 2], [0, 3, 1, 2]]
            .iter()
            .map(|perm| {
                let mut p = ComplexMatrix::zeros(4, 4);
                for (k, &t) in perm.iter().enumerate() {
                    p[(t, k)] = Complex64::new(1.0, 0.0);
                }
                let rho = DensityMatrix::from_pure(&psi.apply_local(&p, &ComplexMatrix::identity(4)));
                phi_negativity(&rho).unwrap()
            })
            .collect();
        let expected: Vec<f64> = LabeledSchmidt::pairings(&sorted)
            .iter()
            .map(phi_negativity_labeled)
            .collect();
        for (v, e) in values.iter().zip(&expected) {
            assert!((v - e).abs() < 1e-9, "{v} vs {e}");
        }
        assert!(values[0] > values[1] && values[1] > values[2]);
    }

    #[test]
    fn realignment_flag_takes_the_max() {
        let mut rng = seeded(34);
        let rho = random_density(&mut rng, 4, 2);
        let plain = monotone_pair(&rho, false).unwrap();
        let with = monotone_pair(&rho, true).unwrap();
        let nr = realignment_negativity(&rho).unwrap();
        assert_eq!(with.n_phi, plain.n_phi);
        assert!((with.n_t - plain.n_t.max(nr)).abs() < 1e-15);
    }

    #[test]
    fn pair_domain_is_checked() {
        assert!(MonotonePair::new(1.6, 0.0).is_err());
        assert!(MonotonePair::new(0.2, -0.1).is_err());
        assert!(MonotonePair::new(1.5, 1.5).is_ok());
    }
}
