//! Lower convex envelope of scattered samples `z = f(x, y)`.
//!
//! The envelope is read off the downward-facing facets of the 3-D convex
//! hull of the graph points. The hull is built by quickhull with Shewchuk's
//! adaptive-precision orientation predicate, so heavily degenerate input
//! (regular grids, ruled surfaces with collinear samples) needs no epsilon
//! tuning: a point joins the hull only if it lies strictly outside.

use std::collections::HashMap;

use robust::{orient2d, orient3d, Coord, Coord3D};

use crate::{Error, Result};

pub type Point3 = [f64; 3];

fn c3(p: &Point3) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

fn c2(p: &Point3) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

/// Negative when `p` is strictly on the outer side of the facet `(a, b, c)`,
/// facets being stored counterclockwise seen from outside.
fn side(pts: &[Point3], f: &[usize; 3], p: usize) -> f64 {
    orient3d(c3(&pts[f[0]]), c3(&pts[f[1]]), c3(&pts[f[2]]), c3(&pts[p]))
}

fn sub(a: &Point3, b: &Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &Point3, b: &Point3) -> Point3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &Point3, b: &Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

struct Facet {
    v: [usize; 3],
    alive: bool,
    outside: Vec<usize>,
}

/// Facets of the convex hull, counterclockwise seen from outside.
pub fn convex_hull(pts: &[Point3]) -> Result<Vec<[usize; 3]>> {
    if pts.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::Parameter("hull input must be finite".into()));
    }
    let simplex = initial_simplex(pts)?;

    let mut facets: Vec<Facet> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let add = |facets: &mut Vec<Facet>, edges: &mut HashMap<(usize, usize), usize>, v: [usize; 3]| {
        let id = facets.len();
        for k in 0..3 {
            edges.insert((v[k], v[(k + 1) % 3]), id);
        }
        facets.push(Facet { v, alive: true, outside: Vec::new() });
        id
    };

    for skip in 0..4 {
        let mut tri: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| simplex[k]).collect();
        let opposite = simplex[skip];
        if side(pts, &[tri[0], tri[1], tri[2]], opposite) < 0.0 {
            tri.swap(1, 2);
        }
        add(&mut facets, &mut edges, [tri[0], tri[1], tri[2]]);
    }
    for p in 0..pts.len() {
        if simplex.contains(&p) {
            continue;
        }
        if let Some(f) = (0..4).find(|&f| side(pts, &facets[f].v, p) < 0.0) {
            facets[f].outside.push(p);
        }
    }

    let mut pending: Vec<usize> = (0..4).filter(|&f| !facets[f].outside.is_empty()).collect();
    while let Some(f0) = pending.pop() {
        if !facets[f0].alive || facets[f0].outside.is_empty() {
            continue;
        }
        let eye = furthest(pts, &facets[f0]);

        // Visible region by flood fill; its boundary is the horizon.
        let mut visible = vec![f0];
        let mut seen: HashMap<usize, bool> = HashMap::from([(f0, true)]);
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        let mut k = 0;
        while k < visible.len() {
            let v = facets[visible[k]].v;
            k += 1;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                let nb = *edges
                    .get(&(b, a))
                    .ok_or_else(|| Error::Inconsistent("hull edge without twin".into()))?;
                let is_visible = *seen
                    .entry(nb)
                    .or_insert_with(|| side(pts, &facets[nb].v, eye) < 0.0);
                if is_visible {
                    if !visible.contains(&nb) {
                        visible.push(nb);
                    }
                } else {
                    horizon.push((a, b));
                }
            }
        }

        let mut orphans: Vec<usize> = Vec::new();
        for &f in &visible {
            facets[f].alive = false;
            orphans.append(&mut facets[f].outside);
            let v = facets[f].v;
            for e in 0..3 {
                edges.remove(&(v[e], v[(e + 1) % 3]));
            }
        }
        let fresh: Vec<usize> = horizon
            .iter()
            .map(|&(a, b)| add(&mut facets, &mut edges, [a, b, eye]))
            .collect();
        for p in orphans {
            if p == eye {
                continue;
            }
            if let Some(&f) = fresh.iter().find(|&&f| side(pts, &facets[f].v, p) < 0.0) {
                facets[f].outside.push(p);
            }
        }
        pending.extend(fresh.into_iter().filter(|&f| !facets[f].outside.is_empty()));
    }

    Ok(facets.into_iter().filter(|f| f.alive).map(|f| f.v).collect())
}

fn furthest(pts: &[Point3], f: &Facet) -> usize {
    let [a, b, c] = f.v.map(|i| pts[i]);
    let n = cross(&sub(&b, &a), &sub(&c, &a));
    *f.outside
        .iter()
        .max_by(|&&p, &&q| {
            let dp = dot(&n, &sub(&pts[p], &a));
            let dq = dot(&n, &sub(&pts[q], &a));
            dp.total_cmp(&dq).then(q.cmp(&p))
        })
        .expect("nonempty outside set")
}

fn initial_simplex(pts: &[Point3]) -> Result<[usize; 4]> {
    let degenerate = || Error::Parameter("hull input is degenerate (fewer than 4 affinely independent points)".into());
    if pts.len() < 4 {
        return Err(degenerate());
    }
    let i0 = (0..pts.len())
        .min_by(|&a, &b| pts[a].partial_cmp(&pts[b]).expect("finite"))
        .expect("nonempty");
    let dist2 = |a: &Point3, b: &Point3| {
        let d = sub(a, b);
        dot(&d, &d)
    };
    let i1 = (0..pts.len())
        .max_by(|&a, &b| dist2(&pts[a], &pts[i0]).total_cmp(&dist2(&pts[b], &pts[i0])))
        .expect("nonempty");
    let axis = sub(&pts[i1], &pts[i0]);
    let line = |p: &Point3| {
        let c = cross(&axis, &sub(p, &pts[i0]));
        dot(&c, &c)
    };
    let i2 = (0..pts.len())
        .max_by(|&a, &b| line(&pts[a]).total_cmp(&line(&pts[b])))
        .expect("nonempty");
    if line(&pts[i2]) == 0.0 {
        return Err(degenerate());
    }
    let i3 = (0..pts.len())
        .max_by(|&a, &b| {
            side(pts, &[i0, i1, i2], a)
                .abs()
                .total_cmp(&side(pts, &[i0, i1, i2], b).abs())
        })
        .expect("nonempty");
    if side(pts, &[i0, i1, i2], i3) == 0.0 {
        return Err(degenerate());
    }
    Ok([i0, i1, i2, i3])
}

/// Piecewise-linear lower convex envelope over the convex hull of the
/// sample abscissae.
#[derive(Clone, Debug)]
pub struct LowerEnvelope {
    points: Vec<Point3>,
    facets: Vec<[usize; 3]>,
    origin: [f64; 2],
    cell: [f64; 2],
    buckets: usize,
    index: Vec<Vec<u32>>,
}

impl LowerEnvelope {
    pub fn new(points: Vec<Point3>) -> Result<Self> {
        let hull = convex_hull(&points)?;
        // Downward facets project clockwise; vertical ones project to a segment.
        let facets: Vec<[usize; 3]> = hull
            .into_iter()
            .filter(|f| orient2d(c2(&points[f[0]]), c2(&points[f[1]]), c2(&points[f[2]])) < 0.0)
            .collect();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let buckets = ((facets.len() as f64 / 4.0).sqrt().ceil() as usize).clamp(1, 1024);
        let cell = [0, 1].map(|k| ((hi[k] - lo[k]) / buckets as f64).max(f64::MIN_POSITIVE));
        let mut env = Self {
            points,
            facets,
            origin: lo,
            cell,
            buckets,
            index: vec![Vec::new(); buckets * buckets],
        };
        for (id, f) in env.facets.iter().enumerate() {
            let (mut a, mut b) = ([usize::MAX; 2], [0usize; 2]);
            for &v in f {
                let c = env.bucket_of(env.points[v][0], env.points[v][1]);
                for k in 0..2 {
                    a[k] = a[k].min(c[k]);
                    b[k] = b[k].max(c[k]);
                }
            }
            for i in a[0]..=b[0] {
                for j in a[1]..=b[1] {
                    env.index[i * env.buckets + j].push(id as u32);
                }
            }
        }
        Ok(env)
    }

    fn bucket_of(&self, x: f64, y: f64) -> [usize; 2] {
        let b = |v: f64, k: usize| {
            let t = ((v - self.origin[k]) / self.cell[k]).floor();
            if t < 0.0 {
                0
            } else {
                (t as usize).min(self.buckets - 1)
            }
        };
        [b(x, 0), b(y, 1)]
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    /// Downward-facing hull facets.
    pub fn facets(&self) -> &[[usize; 3]] {
        &self.facets
    }

    /// Envelope value, or `None` outside the convex hull of the abscissae.
    /// At a facet vertex the stored sample value is returned unmodified.
    pub fn value(&self, x: f64, y: f64) -> Option<f64> {
        let q = [x, y, 0.0];
        let [bi, bj] = self.bucket_of(x, y);
        let mut best: Option<f64> = None;
        for &id in &self.index[bi * self.buckets + bj] {
            let f = self.facets[id as usize];
            let [a, b, c] = f.map(|i| &self.points[i]);
            for v in [a, b, c] {
                if v[0] == x && v[1] == y {
                    return Some(v[2]);
                }
            }
            let wa = orient2d(c2(b), c2(c), c2(&q));
            let wb = orient2d(c2(c), c2(a), c2(&q));
            let wc = orient2d(c2(a), c2(b), c2(&q));
            if wa > 0.0 || wb > 0.0 || wc > 0.0 {
                continue;
            }
            let total = wa + wb + wc;
            let z = (wa * a[2] + wb * b[2] + wc * c[2]) / total;
            let zmin = a[2].min(b[2]).min(c[2]);
            let zmax = a[2].max(b[2]).max(c[2]);
            let z = z.clamp(zmin, zmax);
            best = Some(best.map_or(z, |w: f64| w.max(z)));
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, f: impl Fn(f64, f64) -> f64) -> Vec<Point3> {
        let mut v = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
                v.push([x, y, f(x, y)]);
            }
        }
        v
    }

    fn check_hull(pts: &[Point3], facets: &[[usize; 3]]) {
        for f in facets {
            for p in 0..pts.len() {
                assert!(side(pts, f, p) >= 0.0, "point {p} outside facet {f:?}");
            }
        }
    }

    #[test]
    fn cube_hull_is_closed_and_convex() {
        let mut pts = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    pts.push([x as f64, y as f64, z as f64]);
                }
            }
        }
        let facets = convex_hull(&pts).unwrap();
        check_hull(&pts, &facets);
        // Each undirected edge is shared by exactly two facets.
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &facets {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        assert!(count.values().all(|&c| c == 2));
        let area: f64 = facets
            .iter()
            .map(|f| {
                let n = cross(&sub(&pts[f[1]], &pts[f[0]]), &sub(&pts[f[2]], &pts[f[0]]));
                dot(&n, &n).sqrt() / 2.0
            })
            .sum();
        assert!((area - 24.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let flat: Vec<Point3> = (0..10).map(|i| [i as f64, (i * i) as f64, 0.0]).collect();
        assert!(convex_hull(&flat).is_err());
        assert!(convex_hull(&[[0.0; 3]; 3]).is_err());
    }

    #[test]
    fn convex_samples_are_reproduced() {
        let pts = grid(21, |x, y| (x - 0.3).powi(2) + 2.0 * (y - 0.6).powi(2));
        let env = LowerEnvelope::new(pts.clone()).unwrap();
        check_hull(&pts, &convex_hull(&pts).unwrap());
        for p in &pts {
            assert_eq!(env.value(p[0], p[1]).unwrap(), p[2]);
        }
        let mid = env.value(0.3125, 0.6125).unwrap();
        assert!((0.0..5e-3).contains(&mid));
        assert!(env.value(1.1, 0.5).is_none());
    }

    #[test]
    fn ruled_surface_is_handled() {
        // Linear along x, concave along y: every row is collinear in 3-D.
        let pts = grid(17, |_, y| (std::f64::consts::PI * y).sin());
        let env = LowerEnvelope::new(pts).unwrap();
        for k in 0..=20 {
            let (x, y) = (k as f64 / 20.0, (k * 7 % 20) as f64 / 20.0);
            assert!(env.value(x, y).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn matches_triangle_enumeration() {
        // Convex envelope at q = least interpolated value over sample
        // triangles containing q.
        let pts = grid(6, |x, y| ((3.0 * x).sin() + (2.0 * y).cos() * x).abs());
        let env = LowerEnvelope::new(pts.clone()).unwrap();
        let n = pts.len();
        for &(x, y) in &[(0.13, 0.71), (0.5, 0.5), (0.91, 0.07), (0.33, 0.25)] {
            let mut best = f64::INFINITY;
            let q = [x, y, 0.0];
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        let (pa, pb, pc) = (&pts[a], &pts[b], &pts[c]);
                        let t = orient2d(c2(pa), c2(pb), c2(pc));
                        if t == 0.0 {
                            continue;
                        }
                        let wa = orient2d(c2(pb), c2(pc), c2(&q)) / t;
                        let wb = orient2d(c2(pc), c2(pa), c2(&q)) / t;
                        let wc = orient2d(c2(pa), c2(pb), c2(&q)) / t;
                        if wa >= 0.0 && wb >= 0.0 && wc >= 0.0 {
                            best = best.min(wa * pa[2] + wb * pb[2] + wc * pc[2]);
                        }
                    }
                }
            }
            let v = env.value(x, y).unwrap();
            assert!((v - best).abs() < 1e-12, "({x}, {y}): {v} vs {best}");
        }
    }
}
