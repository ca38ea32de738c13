//! Geometry of the pure-state region in the `(n_Φ, n_T)` plane.
//!
//! Pure states fill the parallelogram between `n_T = n_Φ/3` (reached with
//! two nonzero Schmidt coefficients) and `n_T = 2n_Φ/3 + 1/2` (reached with
//! `μ = (a/2, b/2, b/2, a/2)` in the `J_z` labeling). Inside it runs the
//! monotone boundary traced by `μ = (γ, γ', γ', γ')`, `γ' = (1−γ)/3`, where the
//! `n_T`-only entropy minimiser meets the `n_Φ` constraint on its own.

use crate::linalg::LabeledSchmidt;
use crate::monotones::{MonotonePair, MAX_MONOTONE};
use crate::{check_domain, Error, Result};

/// Default half-width of the boundary bands used by [`classify`].
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Where a point of the plane sits relative to the three curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionClass {
    OutsideBelow,
    LowerBoundary,
    TwoConstraint,
    MonotoneBoundary,
    OneConstraint,
    OutsideAbove,
}

impl RegionClass {
    pub fn label(self) -> &'static str {
        match self {
            RegionClass::OutsideBelow => "OUTSIDE_BELOW",
            RegionClass::LowerBoundary => "LOWER_BOUNDARY",
            RegionClass::TwoConstraint => "TWO_CONSTRAINT",
            RegionClass::MonotoneBoundary => "MONOTONE_BOUNDARY",
            RegionClass::OneConstraint => "ONE_CONSTRAINT",
            RegionClass::OutsideAbove => "OUTSIDE_ABOVE",
        }
    }

    pub fn is_pure(self) -> bool {
        !matches!(self, RegionClass::OutsideBelow | RegionClass::OutsideAbove)
    }

    /// Classes on which the doubly constrained minimum is used.
    pub fn uses_both_constraints(self) -> bool {
        matches!(
            self,
            RegionClass::LowerBoundary | RegionClass::TwoConstraint | RegionClass::MonotoneBoundary
        )
    }
}

impl std::fmt::Display for RegionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// `n_T = 2n_Φ/3 + 1/2`.
pub fn upper_pure_boundary(n_phi: f64) -> Result<f64> {
    check_domain("n_phi", n_phi, 0.0, MAX_MONOTONE)?;
    Ok(2.0 * n_phi / 3.0 + 0.5)
}

/// `n_T = n_Φ/3`.
pub fn lower_pure_boundary(n_phi: f64) -> Result<f64> {
    check_domain("n_phi", n_phi, 0.0, MAX_MONOTONE)?;
    Ok(n_phi / 3.0)
}

/// `n_Φ` at which the upper boundary reaches height `n_t ∈ [1/2, 3/2]`.
pub fn upper_boundary_phi(n_t: f64) -> Result<f64> {
    check_domain("n_t", n_t, 0.5, MAX_MONOTONE)?;
    Ok((1.5 * (n_t - 0.5)).min(MAX_MONOTONE))
}

/// Point `(n_Φ, n_T)` of `μ = (γ, γ', γ', γ')` for `γ ∈ [1/4, 1]`.
pub fn monotone_boundary_point(gamma: f64) -> Result<MonotonePair> {
    check_domain("gamma", gamma, 0.25, 1.0)?;
    let n_phi = (2.0 * (2.0 * gamma + 1.0) * (1.0 - gamma)).max(0.0).sqrt();
    let n_t = 1.0 - gamma + (3.0 * gamma * (1.0 - gamma)).max(0.0).sqrt();
    Ok(MonotonePair {
        n_phi: n_phi.min(MAX_MONOTONE),
        n_t: n_t.clamp(0.0, MAX_MONOTONE),
    })
}

/// `γ` of the monotone-boundary point with the given `n_Φ`: `(1 + √(9 − 4n_Φ²))/4`.
pub fn monotone_boundary_gamma(n_phi: f64) -> Result<f64> {
    check_domain("n_phi", n_phi, 0.0, MAX_MONOTONE)?;
    Ok((1.0 + (9.0 - 4.0 * n_phi * n_phi).max(0.0).sqrt()) / 4.0)
}

/// Monotone boundary through the γ-parameterisation.
pub fn monotone_boundary(n_phi: f64) -> Result<f64> {
    let gamma = monotone_boundary_gamma(n_phi)?;
    Ok(1.0 - gamma + (3.0 * gamma * (1.0 - gamma)).max(0.0).sqrt())
}

/// The same curve in radical form,
/// `3/4 (1 − √(1 − 4n_Φ²/9) + √(4n_Φ²/3 + 2√(1 − 4n_Φ²/9) − 2))`.
///
/// The inner radicand factors as `(1 + 3s)(1 − s)` with `s = √(1 − 4n_Φ²/9)`,
/// so it is nonnegative on all of `[0, 3/2]` up to rounding.
pub fn monotone_boundary_radical(n_phi: f64) -> Result<f64> {
    check_domain("n_phi", n_phi, 0.0, MAX_MONOTONE)?;
    let s = (1.0 - 4.0 * n_phi * n_phi / 9.0).max(0.0).sqrt();
    let inner = 4.0 * n_phi * n_phi / 3.0 + 2.0 * s - 2.0;
    if inner < -1e-12 {
        return Err(Error::Domain {
            name: "monotone boundary radicand",
            value: inner,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(0.75 * (1.0 - s + inner.max(0.0).sqrt()))
}

/// Classifies `n` against the lower, monotone and upper curves with
/// boundary bands of half-width `tol`. Where the monotone boundary meets
/// another curve (the corners `(0,0)` and `(3/2,3/2)`) it wins the tie.
pub fn classify(n: MonotonePair, tol: f64) -> RegionClass {
    let MonotonePair { n_phi, n_t } = n;
    let x = n_phi.clamp(0.0, MAX_MONOTONE);
    let lower = x / 3.0;
    let upper = 2.0 * x / 3.0 + 0.5;
    let mono = monotone_boundary(x).expect("clamped into domain");
    if n_t < lower - tol {
        RegionClass::OutsideBelow
    } else if n_t > upper + tol {
        RegionClass::OutsideAbove
    } else if (n_t - mono).abs() <= tol {
        RegionClass::MonotoneBoundary
    } else if (n_t - lower).abs() <= tol {
        RegionClass::LowerBoundary
    } else if n_t < mono {
        RegionClass::TwoConstraint
    } else {
        RegionClass::OneConstraint
    }
}

pub fn in_pure_region(n: MonotonePair, tol: f64) -> bool {
    classify(n, tol).is_pure()
}

const SOLVE_TOL: f64 = 1e-12;
const SOLVE_CHECK: f64 = 1e-9;

/// Labeled Schmidt vectors `(μ₁, μ₂, μ₃, μ₄)` with the prescribed `μ₄` as
/// smallest entry that reproduce `n`.
///
/// The `n_Φ` constraint fixes `a = μ₁ + μ₄` through `a(1−a) = n_Φ²/9`, one
/// candidate per root. With `b = 1 − a` and `t = √(2n_T+1) − √μ₁ − √μ₄`,
/// `√μ₂` and `√μ₃` are the roots of `x² − t x + (t² − b)/2`. The swap
/// `μ₂ ↔ μ₃` changes neither constraint nor the entropy, so each root of
/// `a` contributes at most one vector. Any relabeling that preserves the pair
/// structure `{1,4}{2,3}` can move the smallest coefficient to slot 4, so no
/// solution of the constraints is lost by that normalisation.
///
/// Components within `1e-12` below zero are taken as zero; anything further
/// out drops the candidate. An empty result means `n` is unreachable at this
/// `μ₄`.
pub fn solve_schmidt(n: MonotonePair, mu4: f64) -> Result<Vec<LabeledSchmidt>> {
    check_domain("mu4", mu4, 0.0, 0.25)?;
    let MonotonePair { n_phi, n_t } = n;
    let s = (2.0 * n_t + 1.0).sqrt();
    let disc = (1.0 - 4.0 * n_phi * n_phi / 9.0).max(0.0).sqrt();
    let roots = if disc == 0.0 {
        vec![0.5]
    } else {
        vec![(1.0 + disc) / 2.0, (1.0 - disc) / 2.0]
    };

    let mut out: Vec<LabeledSchmidt> = Vec::with_capacity(2);
    for a in roots {
        let Some(mu) = candidate(a, mu4, s) else {
            continue;
        };
        let lab = LabeledSchmidt(mu);
        let back = MonotonePair::of_pure(&lab);
        if (back.n_phi - n_phi).abs() > SOLVE_CHECK || (back.n_t - n_t).abs() > SOLVE_CHECK {
            continue;
        }
        let dup = out.iter().any(|o| {
            o.0.iter()
                .zip(&mu)
                .all(|(x, y)| (x - y).abs() < 1e-10)
        });
        if !dup {
            out.push(lab);
        }
    }
    Ok(out)
}

fn nonneg(x: f64) -> Option<f64> {
    if x < -SOLVE_TOL {
        None
    } else {
        Some(x.max(0.0))
    }
}

fn candidate(a: f64, mu4: f64, s: f64) -> Option<[f64; 4]> {
    let mu1 = nonneg(a - mu4)?;
    let b = 1.0 - a;
    let t = nonneg(s - mu1.sqrt() - mu4.sqrt())?;
    let q = nonneg(2.0 * b - t * t)?;
    let root = q.sqrt();
    let r3 = nonneg((t - root) / 2.0)?;
    let r2 = (t + root) / 2.0;
    let mut mu = [mu1, r2 * r2, r3 * r3, mu4];
    if mu4 > mu[0].min(mu[1]).min(mu[2]) + SOLVE_TOL {
        return None;
    }
    let sum: f64 = mu.iter().sum();
    if (sum - 1.0).abs() > SOLVE_CHECK {
        return None;
    }
    for m in mu.iter_mut() {
        *m /= sum;
    }
    if mu.iter().any(|&m| m > 1.0) {
        return None;
    }
    Some(mu)
}

/// Square node grid over `[0, 3/2]²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub nodes: usize,
}

impl GridSpec {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::Parameter(format!("grid needs at least 2 nodes, got {nodes}")));
        }
        Ok(Self { nodes })
    }

    pub fn spacing(&self) -> f64 {
        MAX_MONOTONE / (self.nodes - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        (i as f64) * MAX_MONOTONE / ((self.nodes - 1) as f64)
    }

    pub fn len(&self) -> usize {
        self.nodes * self.nodes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major index with `n_Φ` (index `i`) as the slow axis.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nodes + j
    }

    pub fn point(&self, i: usize, j: usize) -> MonotonePair {
        MonotonePair {
            n_phi: self.coord(i),
            n_t: self.coord(j),
        }
    }
}

/// Grid nodes reachable by [`solve_schmidt`] at one `μ₄`.
#[derive(Clone, Debug)]
pub struct CoverageMap {
    pub grid: GridSpec,
    pub mu4: f64,
    pub covered: Vec<bool>,
}

impl CoverageMap {
    pub fn is_covered(&self, i: usize, j: usize) -> bool {
        self.covered[self.grid.index(i, j)]
    }

    pub fn count(&self) -> usize {
        self.covered.iter().filter(|&&c| c).count()
    }
}

pub fn coverage_map(mu4: f64, grid: GridSpec) -> Result<CoverageMap> {
    use rayon::prelude::*;
    check_domain("mu4", mu4, 0.0, 0.25)?;
    let covered = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let p = grid.point(k / grid.nodes, k % grid.nodes);
            solve_schmidt(p, mu4).map(|c| !c.is_empty()).unwrap_or(false)
        })
        .collect();
    Ok(CoverageMap { grid, mu4, covered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotones::negativity_pure;
    use crate::linalg::SchmidtVector;

    #[test]
    fn boundary_values() {
        assert_eq!(upper_pure_boundary(0.0).unwrap(), 0.5);
        assert_eq!(upper_pure_boundary(1.5).unwrap(), 1.5);
        assert_eq!(upper_pure_boundary(0.75).unwrap(), 1.0);
        assert_eq!(lower_pure_boundary(0.0).unwrap(), 0.0);
        assert_eq!(lower_pure_boundary(1.5).unwrap(), 0.5);
        assert_eq!(lower_pure_boundary(0.75).unwrap(), 0.25);
        assert!(upper_pure_boundary(1.6).is_err());
        assert!(lower_pure_boundary(-0.1).is_err());
    }

    #[test]
    fn monotone_boundary_values() {
        assert!((monotone_boundary(1.5).unwrap() - 1.5).abs() < 1e-15);
        assert!(monotone_boundary(0.0).unwrap().abs() < 1e-15);
        assert!((monotone_boundary_radical(1.5).unwrap() - 1.5).abs() < 1e-15);
        let p = monotone_boundary_point(0.75).unwrap();
        assert!((p.n_phi - 1.25f64.sqrt()).abs() < 1e-15);
        assert!((p.n_t - 1.0).abs() < 1e-15);
        assert!((monotone_boundary(1.25f64.sqrt()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parametric_and_radical_forms_agree() {
        for k in 0..=100 {
            let gamma = 0.25 + 0.75 * k as f64 / 100.0;
            let p = monotone_boundary_point(gamma).unwrap();
            let gp = (1.0 - gamma) / 3.0;
            let nt = negativity_pure(&SchmidtVector::new([gamma, gp, gp, gp]).unwrap());
            assert!((p.n_t - nt).abs() < 1e-12);
            assert!((monotone_boundary(p.n_phi).unwrap() - nt).abs() < 1e-9, "gamma {gamma}");
            assert!((monotone_boundary_radical(p.n_phi).unwrap() - nt).abs() < 1e-9);
        }
    }

    #[test]
    fn curves_are_ordered_and_nondecreasing() {
        let mut prev = (-1.0, -1.0, -1.0);
        for k in 0..=300 {
            let x = 1.5 * k as f64 / 300.0;
            let lo = lower_pure_boundary(x).unwrap();
            let mo = monotone_boundary(x).unwrap();
            let up = upper_pure_boundary(x).unwrap();
            assert!(lo <= mo + 1e-15 && mo <= up + 1e-15, "{x}");
            if k > 0 && k < 300 {
                assert!(lo < mo && mo < up, "{x}");
            }
            assert!(lo >= prev.0 && mo >= prev.1 && up >= prev.2);
            prev = (lo, mo, up);
        }
    }

    #[test]
    fn classification_examples() {
        let c = |a, b| classify(MonotonePair { n_phi: a, n_t: b }, BOUNDARY_TOL);
        assert_eq!(c(1.5, 1.5), RegionClass::MonotoneBoundary);
        assert_eq!(c(0.0, 0.0), RegionClass::MonotoneBoundary);
        assert_eq!(c(0.3, 1.2), RegionClass::OutsideAbove);
        assert_eq!(c(1.2, 0.2), RegionClass::OutsideBelow);
        assert_eq!(c(1.5, 0.5), RegionClass::LowerBoundary);
        assert_eq!(c(0.5, 0.7), RegionClass::OneConstraint);
        assert_eq!(c(1.2, 0.6), RegionClass::TwoConstraint);
        assert_eq!(c(0.0, 0.5), RegionClass::OneConstraint);
    }

    #[test]
    fn solver_examples() {
        let corner = solve_schmidt(MonotonePair { n_phi: 1.5, n_t: 1.5 }, 0.25).unwrap();
        assert_eq!(corner.len(), 1);
        for m in corner[0].coefficients() {
            assert!((m - 0.25).abs() < 1e-12);
        }
        let bell = solve_schmidt(MonotonePair { n_phi: 1.5, n_t: 0.5 }, 0.0).unwrap();
        assert_eq!(bell.len(), 1);
        let s = bell[0].sorted().coefficients();
        assert!((s[0] - 0.5).abs() < 1e-12 && (s[1] - 0.5).abs() < 1e-12 && s[2] < 1e-12);
        assert!(solve_schmidt(MonotonePair { n_phi: 1.5, n_t: 1.5 }, 0.0).unwrap().is_empty());
        assert!(solve_schmidt(MonotonePair { n_phi: 1.0, n_t: 1.0 }, 0.3).is_err());
    }

    #[test]
    fn solver_reaches_the_monotone_boundary_minimiser() {
        let g = 0.75;
        let p = monotone_boundary_point(g).unwrap();
        let c = solve_schmidt(p, (1.0 - g) / 3.0).unwrap();
        assert!(c.iter().any(|l| (l.sorted().coefficients()[0] - g).abs() < 1e-9));
    }

    #[test]
    fn coverage_examples() {
        let grid = GridSpec::new(31).unwrap();
        let zero = coverage_map(0.0, grid).unwrap();
        // Lower boundary nodes sit at n_T = n_Φ/3, i.e. j = i/3.
        for i in (0..31).step_by(3) {
            assert!(zero.is_covered(i, i / 3), "node {i}");
        }
        assert!(!zero.is_covered(30, 30));
        let quarter = coverage_map(0.25, grid).unwrap();
        assert!(quarter.is_covered(30, 30));
        assert_eq!(quarter.count(), 1);
    }
}
