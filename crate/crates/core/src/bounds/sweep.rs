//! Doubly constrained minimum entropy by sweeping the smallest coefficient.
//!
//! For fixed `μ₄` the constraints leave at most one labeled Schmidt vector
//! per root of `a(1−a) = n_Φ²/9` (see [`crate::region::solve_schmidt`]), so
//! `H̃(n_Φ, n_T)` is a one-dimensional minimisation over `μ₄ ∈ [0, 1/4]`.

use super::closed_form::{bound_nphi, h_tilde_nt};
use crate::linalg::LabeledSchmidt;
use crate::monotones::MonotonePair;
use crate::region::{classify, solve_schmidt, RegionClass, BOUNDARY_TOL};
use crate::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Sweep resolution and refinement settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepConfig {
    pub mu4_step: f64,
    /// Golden-section refinement of the best bracket.
    pub refine: bool,
    /// Absolute bracket width at which refinement stops.
    pub refine_tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            mu4_step: 1e-3,
            refine: true,
            refine_tol: 1e-8,
        }
    }
}

impl SweepConfig {
    pub fn with_step(mu4_step: f64) -> Self {
        Self {
            mu4_step,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu4_step > 0.0 && self.mu4_step <= 0.25) {
            return Err(Error::Parameter(format!(
                "mu4 step must lie in (0, 0.25], got {}",
                self.mu4_step
            )));
        }
        if self.refine && !(self.refine_tol > 0.0) {
            return Err(Error::Parameter(format!(
                "refinement tolerance must be positive, got {}",
                self.refine_tol
            )));
        }
        Ok(())
    }
}

/// Lowest entropy among the solutions at one `μ₄`.
fn best_at(n: MonotonePair, mu4: f64) -> Option<(f64, LabeledSchmidt)> {
    solve_schmidt(n, mu4.clamp(0.0, 0.25))
        .ok()?
        .into_iter()
        .map(|l| (l.entropy(), l))
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

fn sweep(n: MonotonePair, step: f64) -> Option<(usize, usize, f64, LabeledSchmidt)> {
    let steps = (0.25 / step).ceil() as usize;
    let mut best: Option<(usize, f64, LabeledSchmidt)> = None;
    for k in 0..=steps {
        let mu4 = 0.25 * k as f64 / steps as f64;
        if let Some((h, l)) = best_at(n, mu4) {
            if best.as_ref().is_none_or(|b| h < b.1) {
                best = Some((k, h, l));
            }
        }
    }
    best.map(|(k, h, l)| (k, steps, h, l))
}

/// Minimum `H(μ)` over labeled Schmidt vectors with the given monotones,
/// together with the minimiser.
///
/// The grid sweep is retried at a tenth and a hundredth of the step when no
/// node is feasible (points hugging the upper boundary have a very short
/// feasible `μ₄` interval). With refinement on, golden-section search runs
/// on the bracket around the best node; infeasible probes count as `+∞` and
/// the best feasible value seen is kept, so refinement never worsens the
/// sweep result.
pub fn constrained_minimum(n: MonotonePair, cfg: &SweepConfig) -> Result<(f64, LabeledSchmidt)> {
    cfg.validate()?;
    MonotonePair::new(n.n_phi, n.n_t)?;
    let found = [1.0, 0.1, 0.01]
        .iter()
        .find_map(|f| sweep(n, cfg.mu4_step * f));
    let Some((k, steps, mut h, mut arg)) = found else {
        return Err(Error::Unreachable {
            n_phi: n.n_phi,
            n_t: n.n_t,
        });
    };
    if !cfg.refine {
        return Ok((h, arg));
    }

    let node = |i: usize| 0.25 * i as f64 / steps as f64;
    let mut lo = node(k.saturating_sub(1));
    let mut hi = node((k + 1).min(steps));
    let eval = |x: f64, h: &mut f64, arg: &mut LabeledSchmidt| -> f64 {
        match best_at(n, x) {
            Some((v, l)) => {
                if v < *h {
                    *h = v;
                    *arg = l;
                }
                v
            }
            None => f64::INFINITY,
        }
    };
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = eval(c, &mut h, &mut arg);
    let mut fd = eval(d, &mut h, &mut arg);
    while hi - lo > cfg.refine_tol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = eval(c, &mut h, &mut arg);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = eval(d, &mut h, &mut arg);
        }
    }
    Ok((h, arg))
}

/// `H̃(n_Φ, n_T)`: the doubly constrained minimum entropy.
///
/// The swept minimum is used on its own wherever it exists. Exactly on the
/// lower or monotone boundary, where the feasible set can collapse below the
/// sweep resolution, the singly constrained closed form is the fallback.
pub fn h_tilde_2c(n: MonotonePair, cfg: &SweepConfig) -> Result<f64> {
    match constrained_minimum(n, cfg) {
        Ok((h, _)) => Ok(h),
        Err(Error::Unreachable { .. }) => match classify(n, BOUNDARY_TOL) {
            RegionClass::LowerBoundary => bound_nphi(n.n_phi),
            RegionClass::MonotoneBoundary => h_tilde_nt(n.n_t),
            _ => Err(Error::Unreachable {
                n_phi: n.n_phi,
                n_t: n.n_t,
            }),
        },
        Err(e) => Err(e),
    }
}

/// Monotone regularisation `H̃↑`: the doubly constrained minimum on and
/// below the monotone boundary, the `n_T`-only minimum above it.
pub fn h_up(n: MonotonePair, cfg: &SweepConfig) -> Result<f64> {
    let class = classify(n, BOUNDARY_TOL);
    match class {
        RegionClass::OutsideAbove | RegionClass::OutsideBelow => Err(Error::OutsidePureRegion {
            n_phi: n.n_phi,
            n_t: n.n_t,
        }),
        RegionClass::OneConstraint => h_tilde_nt(n.n_t),
        _ => h_tilde_2c(n, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::closed_form::bound_nt;
    use crate::region::monotone_boundary_point;

    fn pair(a: f64, b: f64) -> MonotonePair {
        MonotonePair { n_phi: a, n_t: b }
    }

    #[test]
    fn corner_and_boundary_examples() {
        let cfg = SweepConfig::default();
        assert!((h_tilde_2c(pair(1.5, 1.5), &cfg).unwrap() - 2.0).abs() < 1e-9);
        assert!((h_tilde_2c(pair(1.5, 0.5), &cfg).unwrap() - 1.0).abs() < 1e-9);
        let p = pair(1.25f64.sqrt(), 1.0);
        assert!((h_tilde_2c(p, &cfg).unwrap() - bound_nt(1.0).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn interior_values() {
        let cfg = SweepConfig::default();
        for (p, want) in [(pair(1.2, 0.6), 0.8069), (pair(1.0, 0.5), 0.6146), (pair(1.4, 1.2), 1.5456)] {
            let h = h_tilde_2c(p, &cfg).unwrap();
            assert!((h - want).abs() < 2e-4, "{p:?}: {h}");
        }
    }

    #[test]
    fn minimiser_satisfies_constraints() {
        let cfg = SweepConfig::default();
        let p = pair(1.1, 0.7);
        let (h, arg) = constrained_minimum(p, &cfg).unwrap();
        let back = MonotonePair::of_pure(&arg);
        assert!((back.n_phi - p.n_phi).abs() < 1e-9 && (back.n_t - p.n_t).abs() < 1e-9);
        assert!((arg.entropy() - h).abs() < 1e-15);
    }

    #[test]
    fn refinement_never_worsens() {
        let coarse = SweepConfig { mu4_step: 1e-2, refine: false, refine_tol: 1e-8 };
        let fine = SweepConfig { refine: true, ..coarse };
        for p in [pair(1.3, 0.8), pair(0.9, 0.4), pair(1.45, 1.3)] {
            let a = h_tilde_2c(p, &coarse).unwrap();
            let b = h_tilde_2c(p, &fine).unwrap();
            assert!(b <= a + 1e-15);
        }
    }

    #[test]
    fn dominates_both_single_bounds() {
        let cfg = SweepConfig::default();
        for &(x, y) in &[(1.2, 0.6), (1.0, 0.45), (1.4, 1.0), (0.6, 0.25)] {
            let h = h_tilde_2c(pair(x, y), &cfg).unwrap();
            assert!(h >= bound_nt(y).unwrap() - 1e-9);
            assert!(h >= bound_nphi(x).unwrap() - 1e-9);
        }
    }

    #[test]
    fn monotone_boundary_meets_the_single_constraint_minimum() {
        let cfg = SweepConfig::default();
        for k in 0..=10 {
            let g = 0.25 + 0.75 * k as f64 / 10.0;
            let p = monotone_boundary_point(g).unwrap();
            let h = h_tilde_2c(p, &cfg).unwrap();
            assert!((h - h_tilde_nt(p.n_t).unwrap()).abs() < 1e-4, "gamma {g}: {h}");
        }
    }

    #[test]
    fn region_dispatch() {
        let cfg = SweepConfig::default();
        assert_eq!(h_up(pair(0.5, 0.7), &cfg).unwrap(), h_tilde_nt(0.7).unwrap());
        assert!(matches!(h_up(pair(0.3, 1.2), &cfg), Err(Error::OutsidePureRegion { .. })));
        assert!(SweepConfig::with_step(0.0).validate().is_err());
    }
}
