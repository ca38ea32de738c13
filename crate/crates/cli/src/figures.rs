//! Plot data: region boundaries, coverage masks, the surface, its contour
//! lines and a pure-state scatter, all as tab-separated text.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use eofbound::bounds::BoundSurface;
use eofbound::oracle::pure_scatter;
use eofbound::region::{
    classify, lower_pure_boundary, monotone_boundary, monotone_boundary_radical, upper_pure_boundary,
    BOUNDARY_TOL,
};

use crate::commands::{coverage_table, write_file};
use crate::error::CliResult;

pub const DEFAULT_MU4: [f64; 4] = [0.0, 0.05, 0.1, 0.15];
pub const CONTOUR_LEVELS: [f64; 7] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75];

#[derive(Clone, Debug)]
pub struct FigureConfig {
    pub mu4: Vec<f64>,
    pub levels: Vec<f64>,
    pub boundary_samples: usize,
    pub scatter_samples: usize,
    pub seed: u64,
}

impl Default for FigureConfig {
    fn default() -> Self {
        Self {
            mu4: DEFAULT_MU4.to_vec(),
            levels: CONTOUR_LEVELS.to_vec(),
            boundary_samples: 301,
            scatter_samples: 5000,
            seed: 0,
        }
    }
}

/// Lower, monotone (both forms) and upper boundary curves.
pub fn boundaries_table(samples: usize) -> CliResult<String> {
    let mut out = String::from("n_phi\tlower\tmonotone\tmonotone_radical\tupper\n");
    let last = samples.max(2) - 1;
    for k in 0..=last {
        let x = 1.5 * k as f64 / last as f64;
        writeln!(
            out,
            "{x}\t{}\t{}\t{}\t{}",
            lower_pure_boundary(x)?,
            monotone_boundary(x)?,
            monotone_boundary_radical(x)?,
            upper_pure_boundary(x)?
        )
        .expect("writing to a String");
    }
    Ok(out)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |x| x.to_string())
}

pub fn surface_table(surface: &BoundSurface) -> String {
    let g = surface.grid();
    let mut out = String::from("i\tj\tn_phi\tn_t\tclass\th_up\th_hull\th_ext\n");
    for i in 0..g.nodes {
        for j in 0..g.nodes {
            let p = g.point(i, j);
            writeln!(
                out,
                "{i}\t{j}\t{}\t{}\t{}\t{}\t{}\t{}",
                p.n_phi,
                p.n_t,
                classify(p, BOUNDARY_TOL).label(),
                opt(surface.h_up(i, j)),
                opt(surface.h_hull(i, j)),
                surface.h_ext(i, j)
            )
            .expect("writing to a String");
        }
    }
    out
}

/// Contour polylines of `h_ext` at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    pub level: f64,
    pub lines: Vec<Vec<[f64; 2]>>,
}

// Grid edge: 0 = from (i, j) to (i+1, j), 1 = from (i, j) to (i, j+1).
type Edge = (u8, usize, usize);

/// Marching squares on the node grid, with saddles resolved by the cell
/// mean and segments chained into polylines through shared edges.
pub fn contour(surface: &BoundSurface, level: f64) -> Contour {
    let g = surface.grid();
    let v = |i, j| surface.h_ext(i, j);
    let above = |i, j| v(i, j) >= level;
    let point = |e: Edge| -> [f64; 2] {
        let (k, i, j) = e;
        let (i2, j2) = if k == 0 { (i + 1, j) } else { (i, j + 1) };
        let (a, b) = (v(i, j), v(i2, j2));
        let t = ((level - a) / (b - a)).clamp(0.0, 1.0);
        let (p, q) = (g.point(i, j), g.point(i2, j2));
        [p.n_phi + t * (q.n_phi - p.n_phi), p.n_t + t * (q.n_t - p.n_t)]
    };

    let mut segments: Vec<[Edge; 2]> = Vec::new();
    for i in 0..g.nodes - 1 {
        for j in 0..g.nodes - 1 {
            // Corners counterclockwise from bottom-left; edge k joins corner k and k+1.
            let c = [above(i, j), above(i + 1, j), above(i + 1, j + 1), above(i, j + 1)];
            let edges: [Edge; 4] = [(0, i, j), (1, i + 1, j), (0, i, j + 1), (1, i, j)];
            let crossed: Vec<usize> = (0..4).filter(|&k| c[k] != c[(k + 1) % 4]).collect();
            match crossed.len() {
                2 => segments.push([edges[crossed[0]], edges[crossed[1]]]),
                4 => {
                    let mean = (v(i, j) + v(i + 1, j) + v(i + 1, j + 1) + v(i, j + 1)) / 4.0;
                    if (mean >= level) == c[0] {
                        // Corners 0 and 2 are joined through the centre.
                        segments.push([edges[0], edges[1]]);
                        segments.push([edges[2], edges[3]]);
                    } else {
                        segments.push([edges[3], edges[0]]);
                        segments.push([edges[1], edges[2]]);
                    }
                }
                _ => {}
            }
        }
    }

    let mut at: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (s, seg) in segments.iter().enumerate() {
        for e in seg {
            at.entry(*e).or_default().push(s);
        }
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    let walk = |start: usize, from: Edge, used: &mut Vec<bool>| {
        let mut line = vec![point(from)];
        let (mut s, mut e) = (start, from);
        loop {
            used[s] = true;
            let next = if segments[s][0] == e { segments[s][1] } else { segments[s][0] };
            line.push(point(next));
            match at[&next].iter().copied().find(|&t| !used[t]) {
                Some(t) => {
                    s = t;
                    e = next;
                }
                None => break,
            }
        }
        line
    };
    // Open lines start at an edge with a single segment; the rest are loops.
    let open: Vec<(usize, Edge)> = at
        .iter()
        .filter(|(_, s)| s.len() == 1)
        .map(|(e, s)| (s[0], *e))
        .collect();
    for (s, e) in open {
        if !used[s] {
            lines.push(walk(s, e, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            lines.push(walk(s, segments[s][0], &mut used));
        }
    }
    Contour { level, lines }
}

pub fn contours_table(surface: &BoundSurface, levels: &[f64]) -> String {
    let mut out = String::from("level\tline\tvertex\tn_phi\tn_t\n");
    for &level in levels {
        for (l, line) in contour(surface, level).lines.iter().enumerate() {
            for (k, p) in line.iter().enumerate() {
                writeln!(out, "{level}\t{l}\t{k}\t{}\t{}", p[0], p[1]).expect("writing to a String");
            }
        }
    }
    out
}

pub fn scatter_table(surface: &BoundSurface, samples: usize, seed: u64) -> CliResult<String> {
    let mut out = String::from("n_phi\tn_t\tentropy\tbound\n");
    for p in pure_scatter(samples, seed)? {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            p.pair.n_phi,
            p.pair.n_t,
            p.entropy,
            surface.eval(p.pair)?
        )
        .expect("writing to a String");
    }
    Ok(out)
}

/// Writes every table into `dir` and returns the paths written.
pub fn export(surface: &BoundSurface, dir: &Path, cfg: &FigureConfig) -> CliResult<Vec<PathBuf>> {
    let files = [
        ("boundaries.tsv", boundaries_table(cfg.boundary_samples)?),
        ("coverage.tsv", coverage_table(surface.grid(), &cfg.mu4)?),
        ("surface.tsv", surface_table(surface)),
        ("contours.tsv", contours_table(surface, &cfg.levels)),
        ("scatter.tsv", scatter_table(surface, cfg.scatter_samples, cfg.seed)?),
    ];
    let mut written = Vec::new();
    for (name, text) in files {
        let path = dir.join(name);
        write_file(&path, &text)?;
        written.push(path);
    }
    Ok(written)
}
