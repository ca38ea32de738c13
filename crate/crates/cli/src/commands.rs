//! The verbs that print a report: monotones, bound, build-surface, coverage.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use eofbound::bounds::{bound_nphi, bound_nt, build_surface, BoundSurface};
use eofbound::linalg::DensityMatrix;
use eofbound::monotones::{negativity, phi_negativity, realignment_negativity, MonotonePair, MAX_MONOTONE};
use eofbound::region::{classify, coverage_map, GridSpec, BOUNDARY_TOL};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::surface_file::{self, SurfaceParams};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonesReport {
    pub label: Option<String>,
    pub n: usize,
    pub n_t: f64,
    pub n_phi: f64,
    pub n_r: f64,
    pub n_t_or_r: f64,
    pub use_realignment: bool,
    pub class: String,
}

impl MonotonesReport {
    /// The pair the bound is evaluated at.
    pub fn pair(&self) -> MonotonePair {
        MonotonePair {
            n_phi: self.n_phi,
            n_t: if self.use_realignment { self.n_t_or_r } else { self.n_t },
        }
    }
}

impl fmt::Display for MonotonesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            writeln!(f, "state          {l}")?;
        }
        writeln!(f, "dims           4 x {}", self.n)?;
        writeln!(f, "n_T            {:.12}", self.n_t)?;
        writeln!(f, "n_Phi          {:.12}", self.n_phi)?;
        writeln!(f, "n_R            {:.12}", self.n_r)?;
        writeln!(f, "max(n_T, n_R)  {:.12}", self.n_t_or_r)?;
        write!(f, "class          {}", self.class)
    }
}

fn clip(name: &str, v: f64) -> CliResult<f64> {
    if v > MAX_MONOTONE + eofbound::monotones::CLIP_TOL {
        return Err(eofbound::Error::Inconsistent(format!("{name} = {v} exceeds {MAX_MONOTONE}")).into());
    }
    Ok(v.min(MAX_MONOTONE))
}

pub fn monotones(
    rho: &DensityMatrix,
    label: Option<String>,
    use_realignment: bool,
) -> CliResult<MonotonesReport> {
    let n_t = clip("negativity", negativity(rho)?)?;
    let n_phi = clip("phi-negativity", phi_negativity(rho)?)?;
    let n_r = clip("realignment negativity", realignment_negativity(rho)?)?;
    let mut report = MonotonesReport {
        label,
        n: rho.dim_b(),
        n_t,
        n_phi,
        n_r,
        n_t_or_r: n_t.max(n_r),
        use_realignment,
        class: String::new(),
    };
    report.class = classify(report.pair(), BOUNDARY_TOL).label().to_string();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub monotones: MonotonesReport,
    pub bound: f64,
    pub bound_nt: f64,
    pub bound_nphi: f64,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.monotones)?;
        let p = self.monotones.pair();
        writeln!(f, "pair           ({:.12}, {:.12})", p.n_phi, p.n_t)?;
        writeln!(f, "EOF bound      {:.12}", self.bound)?;
        writeln!(f, "  n_T only     {:.12}", self.bound_nt)?;
        write!(f, "  n_Phi only   {:.12}", self.bound_nphi)
    }
}

pub fn bound(surface: &BoundSurface, monotones: MonotonesReport) -> CliResult<BoundReport> {
    let p = monotones.pair();
    Ok(BoundReport {
        bound: surface.eval(p)?,
        bound_nt: bound_nt(p.n_t)?,
        bound_nphi: bound_nphi(p.n_phi)?,
        monotones,
    })
}

/// Largest `h_up − h_hull` over pure nodes and where it occurs.
pub fn hull_gap(surface: &BoundSurface) -> Option<(f64, MonotonePair)> {
    let g = surface.grid();
    let mut best: Option<(f64, MonotonePair)> = None;
    for i in 0..g.nodes {
        for j in 0..g.nodes {
            if let (Some(up), Some(hull)) = (surface.h_up(i, j), surface.h_hull(i, j)) {
                let gap = up - hull;
                if best.is_none_or(|b| gap > b.0) {
                    best = Some((gap, g.point(i, j)));
                }
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuildReport {
    pub path: PathBuf,
    pub cached: bool,
    pub hull_gap: Option<(f64, MonotonePair)>,
}

impl fmt::Display for BuildReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let how = if self.cached { "reused cached" } else { "wrote" };
        write!(f, "{how} surface {}", self.path.display())?;
        if let Some((gap, at)) = self.hull_gap {
            write!(f, "\nmax hull gap   {gap:.3e} at ({:.4}, {:.4})", at.n_phi, at.n_t)?;
        }
        Ok(())
    }
}

/// Returns the cached surface at `path` if its header matches `params`.
fn cached(path: &Path, params: &SurfaceParams) -> Option<BoundSurface> {
    let text = fs::read_to_string(path).ok()?;
    let found = surface_file::read_params(&text, path).ok()?;
    if found != *params {
        return None;
    }
    surface_file::from_str(&text, path).ok()
}

/// Builds (or reuses) the surface for `params` and writes it to `path`.
pub fn build(params: SurfaceParams, path: &Path, force: bool) -> CliResult<(BuildReport, BoundSurface)> {
    if !force {
        if let Some(s) = cached(path, &params) {
            log::info!("{} already holds a surface with these parameters", path.display());
            let report = BuildReport {
                path: path.to_path_buf(),
                cached: true,
                hull_gap: hull_gap(&s),
            };
            return Ok((report, s));
        }
    }
    let start = Instant::now();
    let surface = build_surface(params.grid, params.sweep)?;
    log::info!("built {0}x{0} surface in {1:.2?}", params.grid.nodes, start.elapsed());
    let gap = hull_gap(&surface);
    if let Some((g, at)) = gap {
        log::info!("max hull gap {g:.3e} at ({:.4}, {:.4})", at.n_phi, at.n_t);
    }
    surface_file::save(&surface, path)?;
    let report = BuildReport {
        path: path.to_path_buf(),
        cached: false,
        hull_gap: gap,
    };
    Ok((report, surface))
}

/// Coverage masks as TSV: one row per `(μ₄, node)`.
pub fn coverage_table(grid: GridSpec, mu4s: &[f64]) -> CliResult<String> {
    let mut out = String::from("mu4\ti\tj\tn_phi\tn_t\tcovered\n");
    for &m in mu4s {
        let map = coverage_map(m, grid)?;
        for i in 0..grid.nodes {
            for j in 0..grid.nodes {
                let p = grid.point(i, j);
                out.push_str(&format!(
                    "{m}\t{i}\t{j}\t{}\t{}\t{}\n",
                    p.n_phi,
                    p.n_t,
                    u8::from(map.is_covered(i, j))
                ));
            }
        }
    }
    Ok(out)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
