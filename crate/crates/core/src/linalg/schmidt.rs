use super::{hermitian_eigenvalues, PureState};
use crate::{Error, Result};

/// Tolerance on `Σ μ = 1`.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Schmidt coefficients of a pure 4xN state, nonincreasing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchmidtVector([f64; 4]);

impl SchmidtVector {
    /// Validates range, normalisation and ordering.
    pub fn new(mu: [f64; 4]) -> Result<Self> {
        check_simplex(&mu)?;
        if mu.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Simplex(format!("coefficients not nonincreasing: {mu:?}")));
        }
        Ok(Self(mu))
    }

    /// Sorts an arbitrary probability 4-vector.
    pub fn from_unsorted(mut mu: [f64; 4]) -> Result<Self> {
        check_simplex(&mu)?;
        mu.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(mu))
    }

    pub fn coefficients(&self) -> [f64; 4] {
        self.0
    }

    /// The labeling that pairs the largest coefficient with the smallest,
    /// i.e. the canonical Schmidt frame.
    pub fn canonical_labeling(&self) -> LabeledSchmidt {
        LabeledSchmidt(self.0)
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.0)
    }
}

/// Schmidt coefficients attached to the `J_z` basis `m = 3/2, 1/2, -1/2, -3/2`
/// of the four-level factor.
///
/// The Φ-negativity of a pure state depends on this assignment and not just
/// on the multiset of coefficients; the entropy and negativity do not.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabeledSchmidt(pub(crate) [f64; 4]);

impl LabeledSchmidt {
    pub fn new(mu: [f64; 4]) -> Result<Self> {
        check_simplex(&mu)?;
        Ok(Self(mu))
    }

    pub fn coefficients(&self) -> [f64; 4] {
        self.0
    }

    pub fn sorted(&self) -> SchmidtVector {
        let mut mu = self.0;
        mu.sort_by(|a, b| b.total_cmp(a));
        SchmidtVector(mu)
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.0)
    }

    /// The three pairings `{1,4}{2,3}` reachable by relabeling a sorted
    /// vector, in decreasing order of `(μ₁+μ₄)(μ₂+μ₃)`.
    pub fn pairings(sorted: &SchmidtVector) -> [LabeledSchmidt; 3] {
        let [a, b, c, d] = sorted.0;
        [
            LabeledSchmidt([a, b, c, d]),
            LabeledSchmidt([a, b, d, c]),
            LabeledSchmidt([a, c, d, b]),
        ]
    }
}

fn check_simplex(mu: &[f64; 4]) -> Result<()> {
    if mu.iter().any(|&m| !(0.0..=1.0).contains(&m)) {
        return Err(Error::Simplex(format!("coefficient outside [0, 1]: {mu:?}")));
    }
    let sum: f64 = mu.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::Simplex(format!("coefficients sum to {sum}")));
    }
    Ok(())
}

/// `-Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Descending spectrum of the reduced state on the four-level factor.
pub fn schmidt_vector(psi: &PureState) -> Result<SchmidtVector> {
    let mut ev = hermitian_eigenvalues(&psi.reduced_a(), 1e-10)?;
    for v in ev.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    let sum: f64 = ev.iter().sum();
    let mut mu = [0.0; 4];
    for (dst, v) in mu.iter_mut().zip(&ev) {
        *dst = v / sum;
    }
    SchmidtVector::new(mu)
}
