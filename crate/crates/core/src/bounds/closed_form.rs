//! Singly constrained bounds and the pure-state entropy.

use crate::check_domain;
use crate::linalg::{shannon_entropy, SchmidtVector};
use crate::monotones::MAX_MONOTONE;
use crate::Result;

/// `-x log₂ x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    shannon_entropy(&[x, 1.0 - x])
}

/// Largest Schmidt coefficient of the `n_T`-constrained minimiser
/// `(γ, γ', γ', γ')`: `γ = (√(2n_T+1) + √(9−6n_T))²/16`.
///
/// Meaningful on all of `[0, 3/2]` (it decreases from 1 to 1/4), though the
/// convex bound only uses it up to `n_T = 1`.
pub fn gamma(n_t: f64) -> Result<f64> {
    check_domain("n_t", n_t, 0.0, MAX_MONOTONE)?;
    let s = (2.0 * n_t + 1.0).sqrt() + (9.0 - 6.0 * n_t).max(0.0).sqrt();
    Ok((s * s / 16.0).clamp(0.25, 1.0))
}

/// `α = (1 + √(1 − 4n_Φ²/9))/2`, the larger coefficient of the
/// `n_Φ`-constrained minimiser `(α, 1−α, 0, 0)`.
pub fn alpha(n_phi: f64) -> Result<f64> {
    check_domain("n_phi", n_phi, 0.0, MAX_MONOTONE)?;
    Ok((1.0 + (1.0 - 4.0 * n_phi * n_phi / 9.0).max(0.0).sqrt()) / 2.0)
}

/// Both closed-form parameters of a monotone pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormParams {
    pub gamma: f64,
    pub alpha: f64,
}

impl ClosedFormParams {
    pub fn new(n_phi: f64, n_t: f64) -> Result<Self> {
        Ok(Self {
            gamma: gamma(n_t)?,
            alpha: alpha(n_phi)?,
        })
    }
}

/// Minimal entropy at fixed `n_T` without convexification:
/// `H₂(γ) + (1−γ) log₂ 3`. Convex on `[0, 1]`, concave beyond.
pub fn h_tilde_nt(n_t: f64) -> Result<f64> {
    let g = gamma(n_t)?;
    Ok(binary_entropy(g) + (1.0 - g) * 3f64.log2())
}

/// Convex negativity bound: `H₂(γ) + (1−γ) log₂ 3` on `[0, 1]` and the
/// chord `(n_T − 3/2) log₂ 3 + 2` on `[1, 3/2]`.
pub fn bound_nt(n_t: f64) -> Result<f64> {
    bound_nt_with(n_t, 3f64.log2())
}

/// [`bound_nt`] with the `log₂ 3` constant supplied, for checks that must
/// detect a perturbed constant.
pub fn bound_nt_with(n_t: f64, log2_3: f64) -> Result<f64> {
    check_domain("n_t", n_t, 0.0, MAX_MONOTONE)?;
    if n_t <= 1.0 {
        let g = gamma(n_t)?;
        Ok(binary_entropy(g) + (1.0 - g) * log2_3)
    } else {
        Ok((n_t - 1.5) * log2_3 + 2.0)
    }
}

/// Φ-negativity bound `H₂(α)`; already convex, so the minimum is the bound.
pub fn bound_nphi(n_phi: f64) -> Result<f64> {
    Ok(binary_entropy(alpha(n_phi)?))
}

/// Entanglement of a pure state: the Shannon entropy (bits) of its Schmidt
/// coefficients.
pub fn eof_pure(mu: &SchmidtVector) -> f64 {
    mu.entropy()
}
