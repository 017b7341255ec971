//! Deterministic and seeded random graph constructors.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{pair_count, Graph, VertexId};
use crate::rng;

fn alloc_pair(len: u64) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
    let bytes = len.saturating_mul(16);
    let err = || Error::Allocation { bytes };
    let len = usize::try_from(len).map_err(|_| err())?;
    let mut from = Vec::new();
    let mut to = Vec::new();
    from.try_reserve_exact(len).map_err(|_| err())?;
    to.try_reserve_exact(len).map_err(|_| err())?;
    Ok((from, to))
}

/// Ring on `n` vertices: edges `i -> i+1`, plus `n-1 -> 0` when `circular`.
/// A circular ring on one vertex is a single self-loop.
pub fn ring(n: u64, directed: bool, circular: bool) -> Graph {
    try_ring(n, directed, circular).expect("ring: allocation failed")
}

/// [`ring`] that reports allocation failure instead of aborting.
pub fn try_ring(n: u64, directed: bool, circular: bool) -> Result<Graph> {
    let m = match n {
        0 => 0,
        _ if circular => n,
        _ => n - 1,
    };
    let (mut from, mut to) = alloc_pair(m)?;
    for i in 0..n.saturating_sub(1) {
        from.push(i);
        to.push(i + 1);
    }
    if circular && n >= 1 {
        from.push(n - 1);
        to.push(0);
    }
    Graph::from_edge_arrays(n, directed, from, to)
}

/// Breadth-first numbered k-ary tree: vertex `v >= 1` hangs off
/// `(v - 1) / children`. Directed trees point from parent to child.
pub fn regular_tree(n: u64, children: u64, directed: bool) -> Result<Graph> {
    if children == 0 {
        return Err(Error::param(
            "regular_tree needs at least one child per vertex",
        ));
    }
    let (mut from, mut to) = alloc_pair(n.saturating_sub(1))?;
    for v in 1..n {
        from.push((v - 1) / children);
        to.push(v);
    }
    Graph::from_edge_arrays(n, directed, from, to)
}

/// All distinct ordered (directed) or unordered (undirected) pairs, no loops.
pub fn full_graph(n: u64, directed: bool) -> Result<Graph> {
    let m =
        pair_count(n, directed).ok_or_else(|| Error::param("full graph edge count overflows"))?;
    let (mut from, mut to) = alloc_pair(m)?;
    for u in 0..n {
        let start = if directed { 0 } else { u + 1 };
        for v in start..n {
            if u != v {
                from.push(u);
                to.push(v);
            }
        }
    }
    Graph::from_edge_arrays(n, directed, from, to)
}

/// Maps a linear index over loop-free pairs to its endpoints.
///
/// Undirected pairs are ordered by larger endpoint: index
/// `j(j-1)/2 + i` is `(i, j)` with `i < j`. Directed pairs are ordered by
/// source, skipping the diagonal.
fn decode_pair(k: u64, n: u64, directed: bool) -> (VertexId, VertexId) {
    if directed {
        let u = k / (n - 1);
        let r = k % (n - 1);
        (u, if r < u { r } else { r + 1 })
    } else {
        let mut j = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as u64;
        while j * (j - 1) / 2 > k {
            j -= 1;
        }
        while (j + 1) * j / 2 <= k {
            j += 1;
        }
        (k - j * (j - 1) / 2, j)
    }
}

/// G(n, m): exactly `m` distinct loop-free edges sampled uniformly without
/// replacement, listed in pair-index order.
pub fn erdos_renyi_gnm(n: u64, m: u64, directed: bool, seed: u64) -> Result<Graph> {
    let total = pair_count(n, directed).ok_or_else(|| Error::param("pair count overflows"))?;
    if m > total {
        return Err(Error::param(format!(
            "cannot place {m} distinct edges among {total} vertex pairs"
        )));
    }
    let total_usize =
        usize::try_from(total).map_err(|_| Error::param("pair count exceeds address space"))?;
    let mut rng = rng::seeded(seed);
    let mut picks: Vec<u64> = rand::seq::index::sample(&mut rng, total_usize, m as usize)
        .into_iter()
        .map(|k| k as u64)
        .collect();
    picks.sort_unstable();
    let (mut from, mut to) = alloc_pair(m)?;
    for k in picks {
        let (u, v) = decode_pair(k, n, directed);
        from.push(u);
        to.push(v);
    }
    Graph::from_edge_arrays(n, directed, from, to)
}

/// G(n, p): every loop-free pair present independently with probability
/// `p`. Uses geometric skipping, so the cost is proportional to the number
/// of edges produced.
pub fn erdos_renyi_gnp(n: u64, p: f64, directed: bool, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("probability {p} outside [0, 1]")));
    }
    let total = pair_count(n, directed).ok_or_else(|| Error::param("pair count overflows"))?;
    if p == 1.0 {
        return full_graph(n, directed);
    }
    let mut from = Vec::new();
    let mut to = Vec::new();
    if p > 0.0 {
        let mut rng = rng::seeded(seed);
        let log_q = (1.0 - p).ln();
        let mut k: u64 = 0;
        loop {
            let u: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
            let skip = (u.ln() / log_q).floor();
            if skip >= (total - k) as f64 {
                break;
            }
            k += skip as u64;
            let (a, b) = decode_pair(k, n, directed);
            from.push(a);
            to.push(b);
            k += 1;
            if k >= total {
                break;
            }
        }
    }
    Graph::from_edge_arrays(n, directed, from, to)
}

/// Preferential attachment grown from a single vertex. Vertex `t` links to
/// `min(t, edges_per_step)` distinct earlier vertices, each chosen with
/// probability proportional to its current degree plus one. Undirected.
pub fn barabasi_albert(n: u64, edges_per_step: u64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::param("barabasi_albert needs at least one vertex"));
    }
    if edges_per_step == 0 {
        return Err(Error::param("barabasi_albert needs edges_per_step >= 1"));
    }
    let mut rng = rng::seeded(seed);
    let mut from = Vec::new();
    let mut to = Vec::new();
    // every vertex once (the +1 term) plus once per incident edge endpoint
    let mut pool: Vec<VertexId> = vec![0];
    let mut chosen: Vec<VertexId> = Vec::with_capacity(edges_per_step as usize);
    for t in 1..n {
        let want = t.min(edges_per_step) as usize;
        chosen.clear();
        if want as u64 == t {
            chosen.extend(0..t);
        } else {
            while chosen.len() < want {
                let cand = pool[rng.random_range(0..pool.len())];
                if !chosen.contains(&cand) {
                    chosen.push(cand);
                }
            }
        }
        for &c in &chosen {
            from.push(t);
            to.push(c);
            pool.push(c);
            pool.push(t);
        }
        pool.push(t);
    }
    Graph::from_edge_arrays(n, false, from, to)
}
