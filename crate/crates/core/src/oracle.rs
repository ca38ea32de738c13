//! Brute-force references for the closed forms and the surface builder.
//!
//! Nothing here shares code with [`crate::bounds`] beyond the monotone
//! formulas themselves: minimisation is exhaustive over a simplex lattice,
//! optionally polished by random perturbation and Gauss-Newton projection
//! back onto the constraint set.

use rand::Rng;
use rayon::prelude::*;

use crate::linalg::{LabeledSchmidt, SchmidtVector};
use crate::monotones::{negativity_pure, phi_negativity_labeled, MonotonePair};
use crate::random::{random_dirichlet, seeded};
use crate::region::{lower_pure_boundary, upper_pure_boundary};
use crate::{Error, Result};

/// Descending 4-vectors with entries in `(1/resolution)·ℕ`.
#[derive(Clone, Debug)]
pub struct SimplexGrid {
    resolution: u32,
    points: Vec<[u32; 4]>,
}

impl SimplexGrid {
    pub fn new(resolution: u32) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::Parameter("simplex resolution must be positive".into()));
        }
        let r = resolution;
        let mut points = Vec::new();
        for a in r.div_ceil(4)..=r {
            for b in 0..=a.min(r - a) {
                let rest = r - a - b;
                // d = rest − c ≤ c.
                for c in rest.div_ceil(2)..=b.min(rest) {
                    points.push([a, b, c, rest - c]);
                }
            }
        }
        Ok(Self { resolution, points })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, k: usize) -> SchmidtVector {
        let r = self.resolution as f64;
        let p = self.points[k];
        let mu = [p[0] as f64 / r, p[1] as f64 / r, p[2] as f64 / r, p[3] as f64 / r];
        SchmidtVector::from_unsorted(mu).expect("lattice point is on the simplex")
    }

    pub fn iter(&self) -> impl Iterator<Item = SchmidtVector> + '_ {
        (0..self.len()).map(|k| self.point(k))
    }
}

type Functional = dyn Fn(&LabeledSchmidt) -> f64 + Sync;

/// `f(μ) ∈ [target − band, target + band]`.
pub struct Constraint {
    f: Box<Functional>,
    pub target: f64,
    pub band: f64,
}

impl std::fmt::Debug for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Constraint")
            .field("target", &self.target)
            .field("band", &self.band)
            .finish_non_exhaustive()
    }
}

impl Constraint {
    pub fn new(f: impl Fn(&LabeledSchmidt) -> f64 + Sync + 'static, target: f64, band: f64) -> Self {
        Self {
            f: Box::new(f),
            target,
            band,
        }
    }

    pub fn n_t(target: f64, band: f64) -> Self {
        Self::new(|m| negativity_pure(&m.sorted()), target, band)
    }

    pub fn n_phi(target: f64, band: f64) -> Self {
        Self::new(phi_negativity_labeled, target, band)
    }

    /// Band of `2/resolution`.
    pub fn default_band(grid: &SimplexGrid) -> f64 {
        2.0 / grid.resolution() as f64
    }

    pub fn eval(&self, mu: &LabeledSchmidt) -> f64 {
        (self.f)(mu)
    }

    fn residual(&self, mu: &LabeledSchmidt) -> f64 {
        self.eval(mu) - self.target
    }
}

/// Local polish after the lattice search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefineConfig {
    pub iterations: usize,
    pub initial_radius: f64,
    pub halve_every: usize,
    /// How many of the best lattice candidates to project and polish.
    pub starts: usize,
    pub seed: u64,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            iterations: 200,
            initial_radius: 0.05,
            halve_every: 25,
            starts: 8,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `μ = x²/‖x‖²`, so every `x ≠ 0` is a point on the simplex.
fn from_amplitudes(x: &[f64; 4]) -> Option<LabeledSchmidt> {
    let sq = x.map(|v| v * v);
    let total: f64 = sq.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return None;
    }
    let mut mu = sq.map(|v| v / total);
    let drift = 1.0 - mu.iter().sum::<f64>();
    let k = (0..4).max_by(|&a, &b| mu[a].total_cmp(&mu[b])).expect("four entries");
    mu[k] += drift;
    Some(LabeledSchmidt(mu.map(|v| v.clamp(0.0, 1.0))))
}

/// Gauss-Newton projection onto `{f_k = target_k}` with the minimum-norm
/// step and a forward-difference Jacobian.
fn project(x0: [f64; 4], constraints: &[Constraint]) -> Option<([f64; 4], LabeledSchmidt)> {
    let m = constraints.len();
    let residuals = |x: &[f64; 4]| -> Option<Vec<f64>> {
        let mu = from_amplitudes(x)?;
        Some(constraints.iter().map(|c| c.residual(&mu)).collect())
    };
    let mut x = x0;
    for _ in 0..50 {
        let r = residuals(&x)?;
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Some((x, from_amplitudes(&x)?));
        }
        let h = 1e-7;
        let mut jac = vec![[0.0; 4]; m];
        for k in 0..4 {
            let mut xp = x;
            xp[k] += h;
            let rp = residuals(&xp)?;
            for (row, (a, b)) in jac.iter_mut().zip(rp.iter().zip(&r)) {
                row[k] = (a - b) / h;
            }
        }
        // Solve (J Jᵀ) y = r, step = Jᵀ y; m ≤ 2 in practice, so Cramer.
        let g: Vec<Vec<f64>> = (0..m)
            .map(|a| (0..m).map(|b| (0..4).map(|k| jac[a][k] * jac[b][k]).sum()).collect())
            .collect();
        let y = solve_small(&g, &r)?;
        for k in 0..4 {
            x[k] -= (0..m).map(|a| jac[a][k] * y[a]).sum::<f64>();
        }
    }
    let r = residuals(&x)?;
    (r.iter().all(|v| v.abs() < 1e-10)).then(|| (x, from_amplitudes(&x).expect("checked")))
}

fn solve_small(g: &[Vec<f64>], r: &[f64]) -> Option<Vec<f64>> {
    match g.len() {
        1 => (g[0][0].abs() > 1e-300).then(|| vec![r[0] / g[0][0]]),
        2 => {
            let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            if det.abs() < 1e-300 {
                return None;
            }
            Some(vec![
                (r[0] * g[1][1] - r[1] * g[0][1]) / det,
                (g[0][0] * r[1] - g[1][0] * r[0]) / det,
            ])
        }
        _ => None,
    }
}

/// Exhaustive lattice search for the extreme of `objective` under the given
/// constraint bands, each lattice point taken in all three pairings.
///
/// Without refinement the result is the best band-feasible lattice point.
/// With refinement the best `starts` candidates are projected exactly onto
/// the constraint set and polished by random perturbation; the reported
/// point then satisfies the constraints to `1e-10`. When no candidate
/// projects, the lattice result is returned unchanged. Also with refinement,
/// an empty lattice search is retried with bands doubled up to 64-fold.
pub fn brute_optimize(
    objective: &Functional,
    sense: Sense,
    constraints: &[Constraint],
    grid: &SimplexGrid,
    refine: Option<RefineConfig>,
) -> Result<(f64, LabeledSchmidt)> {
    if constraints.is_empty() {
        return Err(Error::Parameter("at least one constraint is required".into()));
    }
    let better = |a: f64, b: f64| match sense {
        Sense::Minimize => a < b,
        Sense::Maximize => a > b,
    };
    let key = |v: f64| match sense {
        Sense::Minimize => v,
        Sense::Maximize => -v,
    };

    // Deterministic regardless of thread count: order by (key, index).
    let scan = |widen: f64| -> Vec<(f64, usize, LabeledSchmidt)> {
        (0..grid.len())
            .into_par_iter()
            .flat_map_iter(|k| {
                let sorted = grid.point(k);
                LabeledSchmidt::pairings(&sorted)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, l)| constraints.iter().all(|c| c.residual(l).abs() <= c.band * widen))
                    .map(move |(p, l)| (key(objective(&l)), 3 * k + p, l))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let mut found = scan(1.0);
    // Where a constraint is steep in μ the lattice can miss its band; with
    // refinement the candidates are projected anyway, so widen and retry.
    if refine.is_some() {
        let mut widen = 1.0;
        while found.is_empty() && widen < 64.0 {
            widen *= 2.0;
            found = scan(widen);
        }
    }
    if found.is_empty() {
        return Err(Error::Infeasible);
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (v0, _, l0) = found[0];
    let lattice_best = (key(v0), l0);
    let Some(cfg) = refine else {
        return Ok(lattice_best);
    };

    let mut best: Option<(f64, [f64; 4], LabeledSchmidt)> = None;
    for &(_, _, l) in found.iter().take(cfg.starts.max(1)) {
        let x0 = l.coefficients().map(f64::sqrt);
        if let Some((x, mu)) = project(x0, constraints) {
            let v = objective(&mu);
            if best.as_ref().is_none_or(|b| better(v, b.0)) {
                best = Some((v, x, mu));
            }
        }
    }
    let Some((mut value, mut x, mut mu)) = best else {
        return Ok(lattice_best);
    };

    let mut rng = seeded(cfg.seed);
    let mut radius = cfg.initial_radius;
    for it in 0..cfg.iterations {
        if it > 0 && cfg.halve_every > 0 && it % cfg.halve_every == 0 {
            radius /= 2.0;
        }
        let mut trial = x;
        for t in trial.iter_mut() {
            *t = (*t + radius * rng.random_range(-1.0..=1.0)).abs();
        }
        if let Some((xt, mt)) = project(trial, constraints) {
            let v = objective(&mt);
            if better(v, value) {
                value = v;
                x = xt;
                mu = mt;
            }
        }
    }
    Ok((value, mu))
}

/// Minimum marginal entropy under the constraints.
pub fn brute_min_entropy(
    constraints: &[Constraint],
    grid: &SimplexGrid,
    refine: Option<RefineConfig>,
) -> Result<(f64, LabeledSchmidt)> {
    brute_optimize(&|m: &LabeledSchmidt| m.entropy(), Sense::Minimize, constraints, grid, refine)
}

/// Largest negativity among labeled vectors with the given Φ-negativity.
pub fn brute_max_negativity(
    n_phi: f64,
    grid: &SimplexGrid,
    refine: Option<RefineConfig>,
) -> Result<(f64, LabeledSchmidt)> {
    let band = Constraint::default_band(grid);
    brute_optimize(
        &|m: &LabeledSchmidt| negativity_pure(&m.sorted()),
        Sense::Maximize,
        &[Constraint::n_phi(n_phi, band)],
        grid,
        refine,
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterPoint {
    pub pair: MonotonePair,
    pub entropy: f64,
    pub mu: LabeledSchmidt,
}

/// Random pure-state Schmidt vectors and their monotone pairs.
///
/// Coefficients are symmetric-Dirichlet with the given concentration (1 is
/// uniform on the simplex) and keep the random order in which they were
/// drawn, which amounts to a uniformly random alignment of the Schmidt basis
/// with the `J_z` basis. The first sample is always the product state.
pub fn pure_scatter_with(samples: usize, seed: u64, concentration: f64) -> Result<Vec<ScatterPoint>> {
    if samples == 0 {
        return Err(Error::Parameter("at least one sample is required".into()));
    }
    if !(concentration > 0.0 && concentration.is_finite()) {
        return Err(Error::Parameter(format!("concentration must be positive, got {concentration}")));
    }
    let mut rng = seeded(seed);
    let mut out = Vec::with_capacity(samples);
    let product = LabeledSchmidt([1.0, 0.0, 0.0, 0.0]);
    out.push(ScatterPoint {
        pair: MonotonePair::of_pure(&product),
        entropy: 0.0,
        mu: product,
    });
    while out.len() < samples {
        let mu = LabeledSchmidt(random_dirichlet(&mut rng, concentration));
        out.push(ScatterPoint {
            pair: MonotonePair::of_pure(&mu),
            entropy: mu.entropy(),
            mu,
        });
    }
    Ok(out)
}

/// [`pure_scatter_with`] at concentration 1.
pub fn pure_scatter(samples: usize, seed: u64) -> Result<Vec<ScatterPoint>> {
    pure_scatter_with(samples, seed, 1.0)
}

/// Corners of the pure-state region, counterclockwise.
pub fn pure_region_polygon() -> [[f64; 2]; 4] {
    [[0.0, 0.0], [1.5, 0.5], [1.5, 1.5], [0.0, 0.5]]
}

/// Counterclockwise convex hull (monotone chain).
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut p: Vec<[f64; 2]> = points.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(p.iter())
        } else {
            Box::new(p.iter().rev())
        };
        for q in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(*q);
        }
        hull.pop();
    }
    hull
}

fn point_polygon_distance(q: &[f64; 2], poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let inside = (0..n).all(|k| {
        let (a, b) = (&poly[k], &poly[(k + 1) % n]);
        (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]) >= 0.0
    });
    if inside {
        return 0.0;
    }
    (0..n)
        .map(|k| {
            let (a, b) = (&poly[k], &poly[(k + 1) % n]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let len2 = d[0] * d[0] + d[1] * d[1];
            let t = if len2 > 0.0 {
                (((q[0] - a[0]) * d[0] + (q[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            ((q[0] - a[0] - t * d[0]).powi(2) + (q[1] - a[1] - t * d[1]).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Hausdorff distance between two convex polygons (both counterclockwise);
/// for convex sets it is attained at a vertex of one of them.
pub fn convex_hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let one = |p: &[[f64; 2]], q: &[[f64; 2]]| {
        p.iter().map(|v| point_polygon_distance(v, q)).fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Hausdorff distance from the convex hull of the scatter to the region.
pub fn scatter_hausdorff(points: &[ScatterPoint]) -> f64 {
    let xy: Vec<[f64; 2]> = points.iter().map(|p| [p.pair.n_phi, p.pair.n_t]).collect();
    convex_hausdorff(&convex_hull_2d(&xy), &pure_region_polygon())
}

/// True when `n` lies between the region edges within `tol`.
pub fn within_region(n: MonotonePair, tol: f64) -> bool {
    let x = n.n_phi.clamp(0.0, 1.5);
    let (lo, hi) = (
        lower_pure_boundary(x).expect("clamped"),
        upper_pure_boundary(x).expect("clamped"),
    );
    n.n_t >= lo - tol && n.n_t <= hi + tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_grid_is_exhaustive_and_sorted() {
        for r in [1u32, 2, 5, 12, 40] {
            let g = SimplexGrid::new(r).unwrap();
            let mut count = 0;
            for a in 0..=r {
                for b in 0..=a {
                    for c in 0..=b {
                        if a + b + c <= r && r - a - b - c <= c {
                            count += 1;
                        }
                    }
                }
            }
            assert_eq!(g.len(), count, "resolution {r}");
            for p in &g.points {
                assert_eq!(p.iter().sum::<u32>(), r);
                assert!(p[0] >= p[1] && p[1] >= p[2] && p[2] >= p[3]);
            }
        }
        assert!(SimplexGrid::new(0).is_err());
    }

    #[test]
    fn single_constraint_examples() {
        let g = SimplexGrid::new(40).unwrap();
        let b = Constraint::default_band(&g);
        let (h, mu) = brute_min_entropy(&[Constraint::n_t(1.5, 1e-9)], &g, None).unwrap();
        assert!((h - 2.0).abs() < 1e-12);
        assert_eq!(mu.coefficients(), [0.25; 4]);
        let (h, _) = brute_min_entropy(&[Constraint::n_phi(1.5, 1e-9)], &g, None).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
        let (h, _) = brute_min_entropy(&[Constraint::n_phi(1.2, b)], &g, Some(RefineConfig::default())).unwrap();
        assert!((h - 0.721928).abs() < 1e-4, "{h}");
    }

    #[test]
    fn two_constraint_example() {
        let g = SimplexGrid::new(120).unwrap();
        let b = Constraint::default_band(&g);
        let cs = [Constraint::n_t(1.0, b), Constraint::n_phi(1.25f64.sqrt(), b)];
        let (h, mu) = brute_min_entropy(&cs, &g, Some(RefineConfig::default())).unwrap();
        assert!((h - 1.2075).abs() < 1e-3, "{h}");
        assert!((mu.sorted().coefficients()[0] - 0.75).abs() < 1e-2);
    }

    #[test]
    fn infeasible_and_empty_constraints() {
        let g = SimplexGrid::new(10).unwrap();
        assert!(matches!(
            brute_min_entropy(&[Constraint::n_t(1.4, 1e-6)], &g, None),
            Err(Error::Infeasible)
        ));
        assert!(brute_min_entropy(&[], &g, None).is_err());
    }

    #[test]
    fn scatter_examples() {
        let pts = pure_scatter(2000, 7).unwrap();
        assert_eq!(pts[0].pair, MonotonePair { n_phi: 0.0, n_t: 0.0 });
        assert!(pts.iter().all(|p| within_region(p.pair, 1e-9)));
        assert_eq!(pts, pure_scatter(2000, 7).unwrap());
        assert!(pure_scatter(0, 1).is_err());
    }

    #[test]
    fn hausdorff_of_identical_polygons_is_zero() {
        let r = pure_region_polygon();
        assert_eq!(convex_hausdorff(&r, &r), 0.0);
        let hull = convex_hull_2d(&[[0.0, 0.0], [1.5, 0.5], [1.5, 1.5], [0.0, 0.5], [0.7, 0.6]]);
        assert_eq!(hull.len(), 4);
        let shrunk = [[0.0, 0.0], [1.5, 0.5], [1.5, 1.4], [0.0, 0.5]];
        assert!((convex_hausdorff(&shrunk, &r) - 0.1).abs() < 1e-12);
    }
}
