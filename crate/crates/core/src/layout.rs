//! Two-dimensional layouts: circle, Fruchterman-Reingold, Kamada-Kawai and
//! UMAP.

use std::f64::consts::PI;

use rand::Rng;

use crate::adjacency::Adjacency;
use crate::error::{Error, Result};
use crate::graph::{Graph, Mode};
use crate::patterns::{connected_components, Connectedness};
use crate::rng;
use crate::weights;

pub type Point = [f64; 2];

/// Vertex coordinates plus how they were produced.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutCoords {
    pub coords: Vec<Point>,
    pub algorithm: &'static str,
    pub params: Vec<(&'static str, f64)>,
    pub seed: Option<u64>,
}

impl LayoutCoords {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

fn check_start(g: &Graph, start: Option<&[Point]>) -> Result<()> {
    if let Some(s) = start {
        if s.len() as u64 != g.vertex_count() {
            return Err(Error::param(format!(
                "start has {} points, graph has {} vertices",
                s.len(),
                g.vertex_count()
            )));
        }
        if s.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::param("start coordinates must be finite"));
        }
    }
    Ok(())
}

fn circle_points(n: usize, radius: f64) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            [radius * t.cos(), radius * t.sin()]
        })
        .collect()
}

/// Vertex `i` at angle `2 pi i / n` on the unit circle.
pub fn circle(g: &Graph) -> LayoutCoords {
    LayoutCoords {
        coords: circle_points(g.vertex_count() as usize, 1.0),
        algorithm: "circle",
        params: Vec::new(),
        seed: None,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FrOptions<'a> {
    pub iterations: usize,
    pub seed: u64,
    pub start: Option<&'a [Point]>,
}

impl Default for FrOptions<'_> {
    fn default() -> Self {
        FrOptions {
            iterations: 500,
            seed: 0,
            start: None,
        }
    }
}

/// Unit vector for two coincident points; depends only on the pair.
fn split_direction(i: usize, j: usize) -> Point {
    let t = (i.wrapping_mul(7919) ^ j.wrapping_mul(104_729)) as f64 * 0.618_033_988_75;
    let a = 2.0 * PI * t.fract();
    [a.cos(), a.sin()]
}

/// Fruchterman-Reingold with natural length `k = 1`: repulsion `k^2/d`
/// between all pairs, attraction `d^2/k` along edges, displacement capped
/// by a temperature that cools linearly to zero.
pub fn fruchterman_reingold(g: &Graph, opts: &FrOptions<'_>) -> Result<LayoutCoords> {
    check_start(g, opts.start)?;
    let n = g.vertex_count() as usize;
    let spread = (n as f64).sqrt();
    let mut pos: Vec<Point> = match opts.start {
        Some(s) => s.to_vec(),
        None => {
            let mut r = rng::seeded(opts.seed);
            (0..n)
                .map(|_| {
                    [
                        r.random_range(-spread..=spread),
                        r.random_range(-spread..=spread),
                    ]
                })
                .collect()
        }
    };
    let k = 1.0;
    let t0 = 0.1 * spread.max(1.0);
    let mut disp = vec![[0.0; 2]; n];
    for it in 0..opts.iterations {
        disp.iter_mut().for_each(|d| *d = [0.0; 2]);
        for i in 0..n {
            for j in i + 1..n {
                let mut dx = pos[i][0] - pos[j][0];
                let mut dy = pos[i][1] - pos[j][1];
                let mut d = dx.hypot(dy);
                if d < 1e-9 {
                    let [ux, uy] = split_direction(i, j);
                    d = 1e-9;
                    dx = ux * d;
                    dy = uy * d;
                }
                let f = k * k / d / d;
                disp[i][0] += dx * f;
                disp[i][1] += dy * f;
                disp[j][0] -= dx * f;
                disp[j][1] -= dy * f;
            }
        }
        for (u, v) in g.edges() {
            let (u, v) = (u as usize, v as usize);
            if u == v {
                continue;
            }
            let dx = pos[u][0] - pos[v][0];
            let dy = pos[u][1] - pos[v][1];
            let d = dx.hypot(dy);
            let f = d / k;
            disp[u][0] -= dx * f;
            disp[u][1] -= dy * f;
            disp[v][0] += dx * f;
            disp[v][1] += dy * f;
        }
        let temp = t0 * (1.0 - it as f64 / opts.iterations as f64);
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = d[0].hypot(d[1]);
            if len > 0.0 {
                let s = len.min(temp) / len;
                p[0] += d[0] * s;
                p[1] += d[1] * s;
            }
        }
    }
    Ok(LayoutCoords {
        coords: pos,
        algorithm: "fruchterman_reingold",
        params: vec![("iterations", opts.iterations as f64), ("k", k)],
        seed: opts.start.is_none().then_some(opts.seed),
    })
}

/// `sum_{i<j} (|x_i - x_j| - d_ij)^2 / d_ij^2`.
pub fn stress(coords: &[Point], dist: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let e = (coords[i][0] - coords[j][0]).hypot(coords[i][1] - coords[j][1]) - dist[i][j];
            s += e * e / (dist[i][j] * dist[i][j]);
        }
    }
    s
}

fn stress_gradient(coords: &[Point], dist: &[Vec<f64>], grad: &mut [Point]) {
    grad.iter_mut().for_each(|g| *g = [0.0; 2]);
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let dx = coords[i][0] - coords[j][0];
            let dy = coords[i][1] - coords[j][1];
            let len = dx.hypot(dy);
            if len == 0.0 {
                continue;
            }
            let c = 2.0 * (len - dist[i][j]) / (dist[i][j] * dist[i][j] * len);
            grad[i][0] += c * dx;
            grad[i][1] += c * dy;
            grad[j][0] -= c * dx;
            grad[j][1] -= c * dy;
        }
    }
}

pub const KK_GRADIENT_TOL: f64 = 1e-6;
pub const KK_MAX_STEPS: usize = 20_000;

/// Gradient descent with Armijo backtracking on the stress of one
/// connected component. Returns the stress after each accepted step,
/// starting with the initial value.
fn kk_descend(coords: &mut [Point], dist: &[Vec<f64>]) -> Vec<f64> {
    let n = coords.len();
    let mut grad = vec![[0.0; 2]; n];
    let mut trial = coords.to_vec();
    let mut s = stress(coords, dist);
    let mut history = vec![s];
    let mut step = 0.1;
    for _ in 0..KK_MAX_STEPS {
        stress_gradient(coords, dist, &mut grad);
        let g2: f64 = grad.iter().map(|g| g[0] * g[0] + g[1] * g[1]).sum();
        if g2.sqrt() < KK_GRADIENT_TOL {
            break;
        }
        let accepted = loop {
            for ((t, c), g) in trial.iter_mut().zip(coords.iter()).zip(&grad) {
                t[0] = c[0] - step * g[0];
                t[1] = c[1] - step * g[1];
            }
            let st = stress(&trial, dist);
            if st <= s - 1e-4 * step * g2 {
                break Some(st);
            }
            step *= 0.5;
            if step < 1e-16 {
                break None;
            }
        };
        let Some(st) = accepted else { break };
        coords.copy_from_slice(&trial);
        s = st;
        history.push(s);
        step *= 2.0;
    }
    history
}

/// Kamada-Kawai stress layout on hop distances. Each connected component
/// starts on a circle and is optimized separately; components are then
/// packed left to right, top to bottom on a square grid.
pub fn kamada_kawai(g: &Graph) -> Result<LayoutCoords> {
    kamada_kawai_traced(g).map(|(l, _)| l)
}

/// Like [`kamada_kawai`], also returning each component's stress history.
pub fn kamada_kawai_traced(g: &Graph) -> Result<(LayoutCoords, Vec<Vec<f64>>)> {
    let n = g.vertex_count() as usize;
    let comps = connected_components(g, Connectedness::Weak)?;
    let adj = Adjacency::new(g, Mode::All);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); comps.count()];
    for v in 0..n {
        members[comps.membership[v] as usize].push(v);
    }
    let mut coords = vec![[0.0; 2]; n];
    let mut histories = Vec::with_capacity(members.len());
    let mut local_layouts = Vec::with_capacity(members.len());
    let mut local = vec![usize::MAX; n];
    for vs in &members {
        for (i, &v) in vs.iter().enumerate() {
            local[v] = i;
        }
        let dist: Vec<Vec<f64>> = vs
            .iter()
            .map(|&s| {
                let mut d = vec![f64::INFINITY; vs.len()];
                d[local[s]] = 0.0;
                let mut queue = std::collections::VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for &w in adj.neighbors(u) {
                        if d[local[w]].is_infinite() {
                            d[local[w]] = d[local[u]] + 1.0;
                            queue.push_back(w);
                        }
                    }
                }
                d
            })
            .collect();
        let diameter = dist.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
        let mut pts = if vs.len() == 1 {
            vec![[0.0, 0.0]]
        } else {
            circle_points(vs.len(), (diameter / 2.0).max(0.5))
        };
        histories.push(kk_descend(&mut pts, &dist));
        local_layouts.push(pts);
    }
    if members.len() == 1 {
        for (&v, p) in members[0].iter().zip(&local_layouts[0]) {
            coords[v] = *p;
        }
    } else {
        pack_grid(&members, &local_layouts, &mut coords);
    }
    Ok((
        LayoutCoords {
            coords,
            algorithm: "kamada_kawai",
            params: vec![
                ("gradient_tol", KK_GRADIENT_TOL),
                ("max_steps", KK_MAX_STEPS as f64),
            ],
            seed: None,
        },
        histories,
    ))
}

fn bounds(pts: &[Point]) -> (Point, Point) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    (lo, hi)
}

fn pack_grid(members: &[Vec<usize>], layouts: &[Vec<Point>], out: &mut [Point]) {
    let cols = (members.len() as f64).sqrt().ceil() as usize;
    let cell = layouts
        .iter()
        .map(|pts| {
            let (lo, hi) = bounds(pts);
            (hi[0] - lo[0]).max(hi[1] - lo[1])
        })
        .fold(0.0f64, f64::max)
        + 1.0;
    for (c, (vs, pts)) in members.iter().zip(layouts).enumerate() {
        let (lo, hi) = bounds(pts);
        let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
        let origin = [(c % cols) as f64 * cell, -((c / cols) as f64) * cell];
        for (&v, p) in vs.iter().zip(pts) {
            out[v] = [p[0] - center[0] + origin[0], p[1] - center[1] + origin[1]];
        }
    }
}

/// Least-squares fit of `1 / (1 + a x^(2b))` to the UMAP target curve
/// (1 below `min_dist`, `exp(-(x - min_dist) / spread)` above) on 300
/// points in `[0, 3 spread]`, by Levenberg-Marquardt.
pub fn fit_ab(min_dist: f64, spread: f64) -> (f64, f64) {
    let xs: Vec<f64> = (0..300).map(|i| 3.0 * spread * i as f64 / 299.0).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| {
            if x < min_dist {
                1.0
            } else {
                (-(x - min_dist) / spread).exp()
            }
        })
        .collect();
    let sse = |a: f64, b: f64| -> f64 {
        xs.iter()
            .zip(&ys)
            .map(|(&x, &y)| {
                let r = 1.0 / (1.0 + a * x.powf(2.0 * b)) - y;
                r * r
            })
            .sum()
    };
    let (mut a, mut b) = (1.0, 1.0);
    let mut lambda = 1e-3;
    let mut err = sse(a, b);
    for _ in 0..500 {
        let (mut jtj, mut jtr) = ([[0.0; 2]; 2], [0.0; 2]);
        for (&x, &y) in xs.iter().zip(&ys) {
            if x == 0.0 {
                continue;
            }
            let p = x.powf(2.0 * b);
            let den = 1.0 + a * p;
            let r = 1.0 / den - y;
            let ja = -p / (den * den);
            let jb = -a * p * 2.0 * x.ln() / (den * den);
            jtj[0][0] += ja * ja;
            jtj[0][1] += ja * jb;
            jtj[1][1] += jb * jb;
            jtr[0] += ja * r;
            jtr[1] += jb * r;
        }
        jtj[1][0] = jtj[0][1];
        let mut improved = false;
        for _ in 0..50 {
            let m00 = jtj[0][0] * (1.0 + lambda);
            let m11 = jtj[1][1] * (1.0 + lambda);
            let det = m00 * m11 - jtj[0][1] * jtj[1][0];
            let da = -(m11 * jtr[0] - jtj[0][1] * jtr[1]) / det;
            let db = -(m00 * jtr[1] - jtj[1][0] * jtr[0]) / det;
            let e = sse(a + da, b + db);
            if e.is_finite() && e < err {
                let small = da.abs() < 1e-14 && db.abs() < 1e-14;
                a += da;
                b += db;
                err = e;
                lambda = (lambda / 10.0).max(1e-12);
                improved = !small;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (a, b)
}

#[derive(Debug, Clone, Copy)]
pub struct UmapOptions<'a> {
    pub min_dist: f64,
    pub epochs: usize,
    pub seed: u64,
    pub weights: Option<&'a [f64]>,
    pub start: Option<&'a [Point]>,
}

impl Default for UmapOptions<'_> {
    fn default() -> Self {
        UmapOptions {
            min_dist: 0.1,
            epochs: 500,
            seed: 0,
            weights: None,
            start: None,
        }
    }
}

pub const UMAP_NEGATIVE_SAMPLES: usize = 5;
const UMAP_CLIP: f64 = 4.0;

fn clip(x: f64) -> f64 {
    x.clamp(-UMAP_CLIP, UMAP_CLIP)
}

/// UMAP embedding of a graph: edge weights are membership strengths, each
/// edge is sampled in proportion to its weight with attraction on both
/// ends, and every attraction is followed by negative samples drawn
/// uniformly over vertices. The learning rate decays linearly to zero.
/// The random start is uniform in `[-10, 10]^2`.
pub fn umap(g: &Graph, opts: &UmapOptions<'_>) -> Result<LayoutCoords> {
    check_start(g, opts.start)?;
    if opts.min_dist.is_nan() || opts.min_dist < 0.0 {
        return Err(Error::param("min_dist must be non-negative"));
    }
    let w = weights::resolve(g, opts.weights, true)?;
    let n = g.vertex_count() as usize;
    let mut r = rng::seeded(opts.seed);
    let mut pos: Vec<Point> = match opts.start {
        Some(s) => s.to_vec(),
        None => (0..n)
            .map(|_| [r.random_range(-10.0..=10.0), r.random_range(-10.0..=10.0)])
            .collect(),
    };
    let (a, b) = fit_ab(opts.min_dist, 1.0);
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .zip(w.iter())
        .filter(|&((u, v), &x)| u != v && x > 0.0)
        .map(|((u, v), &x)| (u as usize, v as usize, x))
        .collect();
    let w_max = edges.iter().map(|e| e.2).fold(0.0f64, f64::max);
    let every: Vec<f64> = edges.iter().map(|e| w_max / e.2).collect();
    let mut next = every.clone();
    for epoch in 0..opts.epochs {
        let alpha = 1.0 - epoch as f64 / opts.epochs as f64;
        let now = epoch as f64 + 1.0;
        for (i, &(u, v, _)) in edges.iter().enumerate() {
            if next[i] > now {
                continue;
            }
            next[i] += every[i];
            let dx = pos[u][0] - pos[v][0];
            let dy = pos[u][1] - pos[v][1];
            let d2 = dx * dx + dy * dy;
            if d2 > 0.0 {
                let c = -2.0 * a * b * d2.powf(b - 1.0) / (1.0 + a * d2.powf(b));
                let gx = clip(c * dx) * alpha;
                let gy = clip(c * dy) * alpha;
                pos[u][0] += gx;
                pos[u][1] += gy;
                pos[v][0] -= gx;
                pos[v][1] -= gy;
            }
            for _ in 0..UMAP_NEGATIVE_SAMPLES {
                let k = r.random_range(0..n);
                if k == u {
                    continue;
                }
                let dx = pos[u][0] - pos[k][0];
                let dy = pos[u][1] - pos[k][1];
                let d2 = dx * dx + dy * dy;
                let (gx, gy) = if d2 > 0.0 {
                    let c = 2.0 * b / ((0.001 + d2) * (1.0 + a * d2.powf(b)));
                    (clip(c * dx), clip(c * dy))
                } else {
                    (UMAP_CLIP, UMAP_CLIP)
                };
                pos[u][0] += gx * alpha;
                pos[u][1] += gy * alpha;
            }
        }
    }
    Ok(LayoutCoords {
        coords: pos,
        algorithm: "umap",
        params: vec![
            ("min_dist", opts.min_dist),
            ("epochs", opts.epochs as f64),
            ("a", a),
            ("b", b),
        ],
        seed: Some(opts.seed),
    })
}

/// Mean intra-group and inter-group Euclidean distance for a two-group
/// labelling.
pub fn group_distances(coords: &[Point], group: &[usize]) -> (f64, f64) {
    let (mut intra, mut ni, mut inter, mut nx) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let d = (coords[i][0] - coords[j][0]).hypot(coords[i][1] - coords[j][1]);
            if group[i] == group[j] {
                intra += d;
                ni += 1;
            } else {
                inter += d;
                nx += 1;
            }
        }
    }
    (intra / ni.max(1) as f64, inter / nx.max(1) as f64)
}

/// Two `k`-cliques joined by the edge `(k-1, k)`.
pub fn two_cliques(k: usize) -> Graph {
    let mut pairs = Vec::new();
    for off in [0, k] {
        for i in 0..k {
            for j in i + 1..k {
                pairs.push(((off + i) as u64, (off + j) as u64));
            }
        }
    }
    pairs.push(((k - 1) as u64, k as u64));
    Graph::from_edges(2 * k as u64, false, &pairs).expect("valid clique pairs")
}
