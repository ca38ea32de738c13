//! The doubly constrained bound on a grid over the whole `(n_Φ, n_T)` square.
//!
//! Build order: `H̃↑` at every pure-region node (parallel), the lower
//! convex envelope `ℋ` of those samples plus exact values along both region
//! edges, then the extension outside the region: constant in `n_T` below
//! the lower edge and constant in `n_Φ` above the upper edge.

use rayon::prelude::*;

use super::closed_form::{bound_nphi, bound_nt, h_tilde_nt};
use super::hull::{LowerEnvelope, Point3};
use super::sweep::{h_tilde_2c, h_up, SweepConfig};
use crate::monotones::{MonotonePair, MAX_MONOTONE};
use crate::region::{classify, GridSpec, RegionClass, BOUNDARY_TOL};
use crate::{Error, Result};

pub const DEFAULT_GRID: usize = 301;
pub const MIN_GRID: usize = 101;
pub const MAX_MU4_STEP: f64 = 1e-2;

/// Gridded bound surface. Node `(i, j)` sits at `(n_Φ, n_T) = (x_i, x_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundSurface {
    grid: GridSpec,
    sweep: SweepConfig,
    h_tilde: Vec<Option<f64>>,
    h_up: Vec<Option<f64>>,
    h_hull: Vec<Option<f64>>,
    h_ext: Vec<f64>,
}

/// Node class with the same tolerance used during the build.
pub fn node_class(grid: &GridSpec, i: usize, j: usize) -> RegionClass {
    classify(grid.point(i, j), BOUNDARY_TOL)
}

/// Point of the lower edge directly above a node below the region.
fn lower_edge_point(n_phi: f64) -> (f64, f64) {
    (n_phi, n_phi / 3.0)
}

/// Point of the upper edge at the height of a node above the region.
fn upper_edge_point(n_t: f64) -> (f64, f64) {
    ((1.5 * (n_t - 0.5)).clamp(0.0, MAX_MONOTONE), n_t)
}

/// Integer lattice for the hull: node `(i, j)` sits at `(12i, 12j)`. The
/// edge samples used below, `(12i, 4i)` on the lower edge and
/// `(12i, 8i + 4(n−1))`, `(18j − 6(n−1), 12j)` on the upper edge, are then
/// exact integers lying exactly on the edge lines, so rounding cannot create
/// spurious extreme points. The envelope is invariant under this scaling.
#[derive(Clone, Copy)]
struct Lattice {
    last: i64,
}

impl Lattice {
    fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (12.0 * i as f64, 12.0 * j as f64)
    }

    fn lower_edge(&self, i: usize) -> (f64, f64) {
        (12.0 * i as f64, 4.0 * i as f64)
    }

    fn upper_edge_at_column(&self, i: usize) -> (f64, f64) {
        (12.0 * i as f64, (8 * i as i64 + 4 * self.last) as f64)
    }

    /// Upper-edge point at the height of row `j`; needs `n_T ≥ 1/2`.
    fn upper_edge_at_row(&self, j: usize) -> Option<(f64, f64)> {
        let a = 18 * j as i64 - 6 * self.last;
        (a >= 0).then_some((a as f64, 12.0 * j as f64))
    }
}

impl BoundSurface {
    /// Reassembles a surface from stored node values, checking shapes and
    /// that values are present exactly where the node class requires.
    pub fn from_parts(
        grid: GridSpec,
        sweep: SweepConfig,
        h_tilde: Vec<Option<f64>>,
        h_up: Vec<Option<f64>>,
        h_hull: Vec<Option<f64>>,
        h_ext: Vec<f64>,
    ) -> Result<Self> {
        let n = grid.len();
        if [h_tilde.len(), h_up.len(), h_hull.len(), h_ext.len()]
            .iter()
            .any(|&l| l != n)
        {
            return Err(Error::Shape(format!("surface columns must all have {n} entries")));
        }
        for i in 0..grid.nodes {
            for j in 0..grid.nodes {
                let k = grid.index(i, j);
                let class = node_class(&grid, i, j);
                let finite = |v: Option<f64>| v.is_some_and(f64::is_finite);
                if class.is_pure() != finite(h_up[k]) || class.is_pure() != finite(h_hull[k]) {
                    return Err(Error::Inconsistent(format!(
                        "node ({i}, {j}) is {class} but its h_up/h_hull presence disagrees"
                    )));
                }
                if h_tilde[k].is_some() && !class.uses_both_constraints() {
                    return Err(Error::Inconsistent(format!(
                        "node ({i}, {j}) is {class} but carries h_tilde"
                    )));
                }
                if !h_ext[k].is_finite() {
                    return Err(Error::NonFinite(i, j));
                }
            }
        }
        Ok(Self {
            grid,
            sweep,
            h_tilde,
            h_up,
            h_hull,
            h_ext,
        })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn sweep(&self) -> SweepConfig {
        self.sweep
    }

    pub fn h_tilde(&self, i: usize, j: usize) -> Option<f64> {
        self.h_tilde[self.grid.index(i, j)]
    }

    pub fn h_up(&self, i: usize, j: usize) -> Option<f64> {
        self.h_up[self.grid.index(i, j)]
    }

    pub fn h_hull(&self, i: usize, j: usize) -> Option<f64> {
        self.h_hull[self.grid.index(i, j)]
    }

    pub fn h_ext(&self, i: usize, j: usize) -> f64 {
        self.h_ext[self.grid.index(i, j)]
    }

    /// Bilinear interpolation of `h_ext`.
    pub fn interpolate(&self, n: MonotonePair) -> Result<f64> {
        let n = MonotonePair::new(n.n_phi, n.n_t)?;
        let last = self.grid.nodes - 1;
        let h = self.grid.spacing();
        let locate = |v: f64| {
            let t = v / h;
            let i = (t.floor() as usize).min(last - 1);
            (i, (t - i as f64).clamp(0.0, 1.0))
        };
        let (i, u) = locate(n.n_phi);
        let (j, w) = locate(n.n_t);
        let f = |a, b| self.h_ext(a, b);
        // Exact at nodes: a zero weight drops the neighbour entirely.
        let lerp = |a: f64, b: f64, t: f64| if t == 0.0 { a } else if t == 1.0 { b } else { a + t * (b - a) };
        let lo = lerp(f(i, j), f(i + 1, j), u);
        let hi = lerp(f(i, j + 1), f(i + 1, j + 1), u);
        Ok(lerp(lo, hi, w))
    }

    /// Lower bound on the entanglement of formation of any state whose
    /// monotone pair is `n`.
    ///
    /// Bilinear interpolation of a convex surface overshoots between nodes,
    /// so the interpolated value is capped by an exact node-free bound at
    /// `n`: `H̃↑(n)` inside the pure region and the closed-form extension
    /// outside. Node values are never changed by the cap.
    pub fn eval(&self, n: MonotonePair) -> Result<f64> {
        let raw = self.interpolate(n)?;
        let cap = match classify(n, BOUNDARY_TOL) {
            RegionClass::OutsideBelow => bound_nphi(n.n_phi)?,
            RegionClass::OutsideAbove => bound_nt(n.n_t)?,
            _ => h_up(n, &self.sweep)?,
        };
        Ok(raw.min(cap).max(0.0))
    }
}

/// Free-function form of [`BoundSurface::eval`].
pub fn eval_bound(surface: &BoundSurface, n: MonotonePair) -> Result<f64> {
    surface.eval(n)
}

/// The `n_T`-only bound extended the same way as the surface.
pub fn extended_bound_nt(n: MonotonePair) -> Result<f64> {
    match classify(n, BOUNDARY_TOL) {
        RegionClass::OutsideBelow => bound_nt(lower_edge_point(n.n_phi).1),
        _ => bound_nt(n.n_t),
    }
}

/// The `n_Φ`-only bound extended the same way as the surface.
pub fn extended_bound_nphi(n: MonotonePair) -> Result<f64> {
    match classify(n, BOUNDARY_TOL) {
        RegionClass::OutsideAbove => bound_nphi(upper_edge_point(n.n_t).0),
        _ => bound_nphi(n.n_phi),
    }
}

fn check_build_params(grid: &GridSpec, sweep: &SweepConfig) -> Result<()> {
    if grid.nodes < MIN_GRID {
        return Err(Error::Parameter(format!(
            "grid must have at least {MIN_GRID} nodes per axis, got {}",
            grid.nodes
        )));
    }
    if sweep.mu4_step > MAX_MU4_STEP {
        return Err(Error::Parameter(format!(
            "mu4 step must be at most {MAX_MU4_STEP}, got {}",
            sweep.mu4_step
        )));
    }
    sweep.validate()
}

/// Builds the surface on `grid` with the given sweep settings.
pub fn build_surface(grid: GridSpec, sweep: SweepConfig) -> Result<BoundSurface> {
    check_build_params(&grid, &sweep)?;
    build_unchecked(grid, sweep)
}

pub(crate) fn build_unchecked(grid: GridSpec, sweep: SweepConfig) -> Result<BoundSurface> {
    let nodes: Vec<(Option<f64>, Option<f64>)> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / grid.nodes, k % grid.nodes);
            let p = grid.point(i, j);
            let class = node_class(&grid, i, j);
            if !class.is_pure() {
                return Ok((None, None));
            }
            if class.uses_both_constraints() {
                let h = h_tilde_2c(p, &sweep)?;
                Ok((Some(h), Some(h)))
            } else {
                Ok((None, Some(h_up(p, &sweep)?)))
            }
        })
        .collect::<Result<_>>()?;
    let (h_tilde, h_up_vals): (Vec<_>, Vec<_>) = nodes.into_iter().unzip();

    let lattice = Lattice {
        last: grid.nodes as i64 - 1,
    };
    let envelope = LowerEnvelope::new(hull_samples(&grid, lattice, &h_up_vals)?)?;
    let hull_at = |(a, b): (f64, f64)| {
        envelope
            .value(a, b)
            .ok_or_else(|| Error::Inconsistent(format!("lattice point ({a}, {b}) not covered by the hull")))
    };

    let mut h_hull = vec![None; grid.len()];
    let mut h_ext = vec![0.0; grid.len()];
    for i in 0..grid.nodes {
        for j in 0..grid.nodes {
            let k = grid.index(i, j);
            let p = grid.point(i, j);
            h_ext[k] = match node_class(&grid, i, j) {
                RegionClass::OutsideBelow => {
                    hull_at(lattice.lower_edge(i))?.min(bound_nphi(p.n_phi)?)
                }
                RegionClass::OutsideAbove => {
                    let q = lattice
                        .upper_edge_at_row(j)
                        .ok_or_else(|| Error::Inconsistent(format!("row {j} has no upper-edge point")))?;
                    hull_at(q)?.min(h_tilde_nt(p.n_t)?)
                }
                _ => {
                    let up = h_up_vals[k].expect("pure node has h_up");
                    let v = hull_at(lattice.node(i, j))?.min(up);
                    h_hull[k] = Some(v);
                    v
                }
            };
        }
    }
    Ok(BoundSurface {
        grid,
        sweep,
        h_tilde,
        h_up: h_up_vals,
        h_hull,
        h_ext,
    })
}

/// Pure-region node samples plus exact edge values at every grid column
/// and row, so the envelope's domain is the full region. Points are in
/// [`Lattice`] coordinates.
fn hull_samples(grid: &GridSpec, lattice: Lattice, h_up_vals: &[Option<f64>]) -> Result<Vec<Point3>> {
    let mut pts: Vec<Point3> = Vec::new();
    for i in 0..grid.nodes {
        for j in 0..grid.nodes {
            if let Some(z) = h_up_vals[grid.index(i, j)] {
                let (a, b) = lattice.node(i, j);
                pts.push([a, b, z]);
            }
        }
    }
    for i in 0..grid.nodes {
        let x = grid.coord(i);
        let (a, b) = lattice.lower_edge(i);
        pts.push([a, b, bound_nphi(x)?]);
        let (a, b) = lattice.upper_edge_at_column(i);
        pts.push([a, b, h_tilde_nt((2.0 * x / 3.0 + 0.5).min(MAX_MONOTONE))?]);
    }
    for j in 0..grid.nodes {
        if let Some((a, b)) = lattice.upper_edge_at_row(j) {
            pts.push([a, b, h_tilde_nt(grid.coord(j))?]);
        }
    }
    // Exact duplicates keep the lower value.
    pts.sort_by(|a, b| {
        a[0].total_cmp(&b[0])
            .then(a[1].total_cmp(&b[1]))
            .then(a[2].total_cmp(&b[2]))
    });
    pts.dedup_by(|b, a| a[0] == b[0] && a[1] == b[1]);
    Ok(pts)
}
