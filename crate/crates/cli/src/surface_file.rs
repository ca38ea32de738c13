//! Tab-separated surface files with a commented header. Floats are written
//! in shortest round-trip form, so save/load is bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use eofbound::bounds::{BoundSurface, SweepConfig};
use eofbound::region::GridSpec;

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_DIR: &str = ".eofbound-cache";
const COLUMNS: &str = "i\tj\tn_phi\tn_t\th_tilde\th_up\th_hull\th_ext";
const NA: &str = "NA";

/// Parameters that fully determine a surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceParams {
    pub grid: GridSpec,
    pub sweep: SweepConfig,
}

impl SurfaceParams {
    pub fn of(surface: &BoundSurface) -> Self {
        Self {
            grid: surface.grid(),
            sweep: surface.sweep(),
        }
    }

    fn header(&self) -> String {
        format!(
            "# eofbound surface\n# format {FORMAT_VERSION}\n# grid {}\n# mu4_step {}\n# refine {}\n# refine_tol {}\n",
            self.grid.nodes, self.sweep.mu4_step, self.sweep.refine, self.sweep.refine_tol
        )
    }
}

/// Default location of the cached surface for the given parameters.
pub fn cache_path(params: &SurfaceParams) -> PathBuf {
    let mut name = format!("surface-g{}-s{}", params.grid.nodes, params.sweep.mu4_step);
    if !params.sweep.refine {
        name.push_str("-norefine");
    } else if params.sweep.refine_tol != SweepConfig::default().refine_tol {
        name.push_str(&format!("-t{}", params.sweep.refine_tol));
    }
    Path::new(CACHE_DIR).join(name + ".tsv")
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| NA.to_string(), |x| x.to_string())
}

pub fn to_string(surface: &BoundSurface) -> String {
    let g = surface.grid();
    let mut out = SurfaceParams::of(surface).header();
    out.push_str(COLUMNS);
    out.push('\n');
    for i in 0..g.nodes {
        for j in 0..g.nodes {
            let p = g.point(i, j);
            writeln!(
                out,
                "{i}\t{j}\t{}\t{}\t{}\t{}\t{}\t{}",
                p.n_phi,
                p.n_t,
                cell(surface.h_tilde(i, j)),
                cell(surface.h_up(i, j)),
                cell(surface.h_hull(i, j)),
                surface.h_ext(i, j)
            )
            .expect("writing to a String");
        }
    }
    out
}

pub fn save(surface: &BoundSurface, path: &Path) -> CliResult<()> {
    crate::commands::write_file(path, &to_string(surface))
}

fn header_value<'a>(lines: &[&'a str], key: &str) -> Option<&'a str> {
    lines
        .iter()
        .filter_map(|l| l.strip_prefix("# "))
        .find_map(|l| l.strip_prefix(key)?.strip_prefix(' '))
}

/// Reads just the header parameters.
pub fn read_params(text: &str, path: &Path) -> CliResult<SurfaceParams> {
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    let bad = |m: String| CliError::parse(path, m);
    let get = |key: &str| header_value(&header, key).ok_or_else(|| bad(format!("header lacks `{key}`")));
    if !header.first().is_some_and(|l| *l == "# eofbound surface") {
        return Err(bad("not an eofbound surface file".into()));
    }
    let version: u32 = get("format")?.parse().map_err(|_| bad("bad format version".into()))?;
    if version != FORMAT_VERSION {
        return Err(bad(format!("format version {version}, expected {FORMAT_VERSION}")));
    }
    let nodes: usize = get("grid")?.parse().map_err(|_| bad("bad grid".into()))?;
    let mu4_step: f64 = get("mu4_step")?.parse().map_err(|_| bad("bad mu4_step".into()))?;
    let refine: bool = get("refine")?.parse().map_err(|_| bad("bad refine flag".into()))?;
    let refine_tol: f64 = get("refine_tol")?.parse().map_err(|_| bad("bad refine_tol".into()))?;
    Ok(SurfaceParams {
        grid: GridSpec::new(nodes)?,
        sweep: SweepConfig {
            mu4_step,
            refine,
            refine_tol,
        },
    })
}

pub fn from_str(text: &str, path: &Path) -> CliResult<BoundSurface> {
    let params = read_params(text, path)?;
    let grid = params.grid;
    let mut body = text.lines().skip_while(|l| l.starts_with('#'));
    if body.next() != Some(COLUMNS) {
        return Err(CliError::parse(path, "missing or malformed column header"));
    }
    let n = grid.len();
    let (mut h_tilde, mut h_up, mut h_hull, mut h_ext) =
        (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let mut rows = 0;
    for (k, line) in body.enumerate() {
        let at = |m: &str| CliError::parse(path, format!("row {}: {m}", k + 1));
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 8 {
            return Err(at("expected 8 columns"));
        }
        let (i, j) = (k / grid.nodes, k % grid.nodes);
        if f[0].parse::<usize>().ok() != Some(i) || f[1].parse::<usize>().ok() != Some(j) {
            return Err(at(&format!("expected node ({i}, {j})")));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| at(&format!("bad number `{s}`")));
        let opt = |s: &str| if s == NA { Ok(None) } else { num(s).map(Some) };
        h_tilde.push(opt(f[4])?);
        h_up.push(opt(f[5])?);
        h_hull.push(opt(f[6])?);
        h_ext.push(num(f[7])?);
        rows += 1;
    }
    if rows != n {
        return Err(CliError::parse(path, format!("expected {n} node rows, found {rows}")));
    }
    Ok(BoundSurface::from_parts(grid, params.sweep, h_tilde, h_up, h_hull, h_ext)?)
}

pub fn load(path: &Path) -> CliResult<BoundSurface> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(CliError::MissingSurface(path.to_path_buf()))
        }
        Err(e) => return Err(CliError::io(path, e)),
    };
    from_str(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(nodes: usize, step: f64) -> SurfaceParams {
        SurfaceParams {
            grid: GridSpec::new(nodes).unwrap(),
            sweep: SweepConfig::with_step(step),
        }
    }

    #[test]
    fn header_round_trips() {
        let p = params(301, 1e-3);
        let text = p.header();
        assert_eq!(read_params(&text, Path::new("h")).unwrap(), p);
        let off = SurfaceParams {
            sweep: SweepConfig { refine: false, ..p.sweep },
            ..p
        };
        assert_eq!(read_params(&off.header(), Path::new("h")).unwrap(), off);
    }

    #[test]
    fn cache_names_follow_parameters() {
        assert_eq!(cache_path(&params(301, 1e-3)), Path::new(".eofbound-cache/surface-g301-s0.001.tsv"));
        assert_ne!(cache_path(&params(301, 1e-3)), cache_path(&params(301, 2e-3)));
        let mut p = params(101, 1e-2);
        p.sweep.refine = false;
        assert!(cache_path(&p).to_str().unwrap().ends_with("-norefine.tsv"));
    }

    #[test]
    fn rejects_foreign_files() {
        assert!(matches!(
            read_params("hello\n", Path::new("f")),
            Err(CliError::Parse { .. })
        ));
    }
}
