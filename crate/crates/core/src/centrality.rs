//! Vertex centrality: betweenness, PageRank and closeness.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::adjacency::Adjacency;
use crate::error::{Error, Result};
use crate::graph::{Graph, Mode};
use crate::weights::{self, Total};

/// Parameters a score vector was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CentralityParams {
    pub damping: Option<f64>,
    pub tolerance: Option<f64>,
    pub normalized: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub measure: &'static str,
    pub scores: Vec<f64>,
    pub params: CentralityParams,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BetweennessOptions<'a> {
    pub weights: Option<&'a [f64]>,
    /// Divide by `(n-1)(n-2)` (directed) or `(n-1)(n-2)/2` (undirected).
    pub normalized: bool,
    /// Worker threads; 0 or 1 runs on the calling thread.
    pub threads: usize,
}

// Sources are reduced in fixed-size blocks, in block order, so the float
// sums do not depend on how many workers ran.
const SOURCE_BLOCK: usize = 32;

/// Unnormalized betweenness, endpoints excluded.
pub fn betweenness(g: &Graph, weights: Option<&[f64]>) -> Result<CentralityScores> {
    betweenness_with(
        g,
        &BetweennessOptions {
            weights,
            ..Default::default()
        },
    )
}

pub fn betweenness_with(g: &Graph, opts: &BetweennessOptions<'_>) -> Result<CentralityScores> {
    let w = match opts.weights {
        Some(w) => Some(weights::resolve(g, Some(w), true)?.into_owned()),
        None => None,
    };
    let n = g.vertex_count() as usize;
    let adj = Adjacency::forward(g);
    let blocks: Vec<std::ops::Range<usize>> = (0..n)
        .step_by(SOURCE_BLOCK)
        .map(|s| s..(s + SOURCE_BLOCK).min(n))
        .collect();

    let run_block = |r: std::ops::Range<usize>| {
        let mut acc = vec![0.0; n];
        let mut work = BrandesWork::new(n);
        for s in r {
            work.single_source(&adj, w.as_deref(), s, &mut acc);
        }
        acc
    };

    let threads = opts.threads.max(1).min(blocks.len().max(1));
    let partials: Vec<Vec<f64>> = if threads <= 1 {
        blocks.iter().cloned().map(run_block).collect()
    } else {
        let mut out: Vec<Option<Vec<f64>>> = vec![None; blocks.len()];
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let blocks = &blocks;
                    let run_block = &run_block;
                    scope.spawn(move || {
                        (t..blocks.len())
                            .step_by(threads)
                            .map(|b| (b, run_block(blocks[b].clone())))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (b, v) in h.join().expect("betweenness worker panicked") {
                    out[b] = Some(v);
                }
            }
        });
        out.into_iter().map(Option::unwrap).collect()
    };

    let mut scores = vec![0.0; n];
    for p in partials {
        for (s, x) in scores.iter_mut().zip(p) {
            *s += x;
        }
    }
    if !g.is_directed() {
        scores.iter_mut().for_each(|x| *x /= 2.0);
    }
    if opts.normalized && n > 2 {
        let mut denom = ((n - 1) * (n - 2)) as f64;
        if !g.is_directed() {
            denom /= 2.0;
        }
        scores.iter_mut().for_each(|x| *x /= denom);
    }
    Ok(CentralityScores {
        measure: "betweenness",
        scores,
        params: CentralityParams {
            normalized: opts.normalized,
            ..Default::default()
        },
    })
}

struct BrandesWork {
    sigma: Vec<f64>,
    dist: Vec<f64>,
    delta: Vec<f64>,
    preds: Vec<Vec<usize>>,
    stack: Vec<usize>,
}

impl BrandesWork {
    fn new(n: usize) -> Self {
        BrandesWork {
            sigma: vec![0.0; n],
            dist: vec![f64::INFINITY; n],
            delta: vec![0.0; n],
            preds: vec![Vec::new(); n],
            stack: Vec::with_capacity(n),
        }
    }

    fn single_source(&mut self, adj: &Adjacency, w: Option<&[f64]>, s: usize, acc: &mut [f64]) {
        for v in self.stack.drain(..) {
            self.sigma[v] = 0.0;
            self.dist[v] = f64::INFINITY;
            self.delta[v] = 0.0;
            self.preds[v].clear();
        }
        self.sigma[s] = 1.0;
        self.dist[s] = 0.0;
        match w {
            None => {
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    self.stack.push(u);
                    for &v in adj.neighbors(u) {
                        if v == u {
                            continue;
                        }
                        if self.dist[v].is_infinite() {
                            self.dist[v] = self.dist[u] + 1.0;
                            queue.push_back(v);
                        }
                        if self.dist[v] == self.dist[u] + 1.0 {
                            self.sigma[v] += self.sigma[u];
                            self.preds[v].push(u);
                        }
                    }
                }
            }
            Some(w) => {
                let mut done = vec![false; adj.len()];
                let mut heap = BinaryHeap::from([Reverse((Total(0.0), s))]);
                while let Some(Reverse((Total(d), u))) = heap.pop() {
                    if done[u] {
                        continue;
                    }
                    done[u] = true;
                    self.stack.push(u);
                    for (v, e) in adj.arcs(u) {
                        if v == u || done[v] {
                            continue;
                        }
                        let nd = d + w[e];
                        if nd < self.dist[v] {
                            self.dist[v] = nd;
                            self.sigma[v] = self.sigma[u];
                            self.preds[v].clear();
                            self.preds[v].push(u);
                            heap.push(Reverse((Total(nd), v)));
                        } else if nd == self.dist[v] {
                            self.sigma[v] += self.sigma[u];
                            self.preds[v].push(u);
                        }
                    }
                }
            }
        }
        for &v in self.stack.iter().rev() {
            let coeff = (1.0 + self.delta[v]) / self.sigma[v];
            for &u in &self.preds[v] {
                self.delta[u] += self.sigma[u] * coeff;
            }
            if v != s {
                acc[v] += self.delta[v];
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PageRankOptions<'a> {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iter: usize,
    pub weights: Option<&'a [f64]>,
}

impl Default for PageRankOptions<'_> {
    fn default() -> Self {
        PageRankOptions {
            damping: 0.85,
            tolerance: 1e-12,
            max_iter: 10_000,
            weights: None,
        }
    }
}

/// PageRank by power iteration. Undirected edges link both ways; mass at
/// vertices without out-links is spread uniformly.
pub fn pagerank(g: &Graph, opts: &PageRankOptions<'_>) -> Result<CentralityScores> {
    if !(opts.damping > 0.0 && opts.damping < 1.0) {
        return Err(Error::param(format!(
            "damping {} outside (0, 1)",
            opts.damping
        )));
    }
    let w = weights::resolve(g, opts.weights, true)?;
    let n = g.vertex_count() as usize;
    let params = CentralityParams {
        damping: Some(opts.damping),
        tolerance: Some(opts.tolerance),
        normalized: true,
    };
    if n == 0 {
        return Ok(CentralityScores {
            measure: "pagerank",
            scores: Vec::new(),
            params,
        });
    }
    // flat arc list (source, target, weight)
    let mut arcs: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * g.edge_count() as usize);
    for (e, (u, v)) in g.edges().enumerate() {
        arcs.push((u as usize, v as usize, w[e]));
        if !g.is_directed() && u != v {
            arcs.push((v as usize, u as usize, w[e]));
        }
    }
    let mut strength = vec![0.0; n];
    for &(u, _, x) in &arcs {
        strength[u] += x;
    }
    let d = opts.damping;
    let nf = n as f64;
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    for _ in 0..opts.max_iter {
        let dangling: f64 = (0..n).filter(|&v| strength[v] == 0.0).map(|v| x[v]).sum();
        let base = (1.0 - d) / nf + d * dangling / nf;
        next.iter_mut().for_each(|y| *y = base);
        for &(u, v, wt) in &arcs {
            if wt > 0.0 {
                next[v] += d * x[u] * wt / strength[u];
            }
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|y| *y /= total);
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if change < opts.tolerance {
            return Ok(CentralityScores {
                measure: "pagerank",
                scores: x,
                params,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
    })
}

/// Closeness over hop distances. Normalized: `(r-1)/sum(d)` over the `r`
/// vertices reachable from `v` (itself included); otherwise `1/sum(d)`.
/// Vertices that reach nothing score 0.
pub fn closeness(g: &Graph, mode: Mode, normalized: bool) -> CentralityScores {
    let n = g.vertex_count() as usize;
    let adj = Adjacency::new(g, mode);
    let mut dist = vec![u64::MAX; n];
    let mut scores = vec![0.0; n];
    let mut queue = VecDeque::new();
    let mut seen = Vec::new();
    for s in 0..n {
        for v in seen.drain(..) {
            dist[v] = u64::MAX;
        }
        dist[s] = 0;
        seen.push(s);
        queue.push_back(s);
        let mut total = 0u64;
        while let Some(u) = queue.pop_front() {
            for &v in adj.neighbors(u) {
                if dist[v] == u64::MAX {
                    dist[v] = dist[u] + 1;
                    total += dist[v];
                    seen.push(v);
                    queue.push_back(v);
                }
            }
        }
        let reached = seen.len() - 1;
        if reached > 0 {
            scores[s] = if normalized {
                reached as f64 / total as f64
            } else {
                1.0 / total as f64
            };
        }
    }
    CentralityScores {
        measure: "closeness",
        scores,
        params: CentralityParams {
            normalized,
            ..Default::default()
        },
    }
}
