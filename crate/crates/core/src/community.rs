//! Community detection: modularity and CPM scoring, Louvain, Leiden and
//! fluid communities.
//!
//! Directed graphs are analysed as undirected (a warning is logged).
//! Parallel edges merge by summing weights; a self-loop of weight `w` adds
//! `w` to its community's internal weight and `2w` to its vertex degree.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::adjacency::simple_undirected;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{self, GraphRng};
use crate::weights;

/// Quality function being optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// `Q = (1/m) * sum_c [ e_c - gamma * d_c^2 / (4m) ]`.
    Modularity,
    /// Constant Potts model: `sum_c [ e_c - gamma * n_c (n_c - 1) / 2 ]`.
    Cpm,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Modularity => "modularity",
            Objective::Cpm => "cpm",
        }
    }
}

/// A community assignment with the score it achieved.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Community of each vertex; ids are contiguous and numbered in order
    /// of each community's smallest vertex.
    pub membership: Vec<u64>,
    pub quality: f64,
    pub objective: Objective,
    pub resolution: f64,
    pub method: &'static str,
    pub seed: Option<u64>,
    /// Refinement randomness (Leiden only).
    pub theta: Option<f64>,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.membership.iter().max().map_or(0, |&c| c as usize + 1)
    }

    /// Vertex lists per community, in id order.
    pub fn communities(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new(); self.community_count()];
        for (v, &c) in self.membership.iter().enumerate() {
            out[c as usize].push(v as u64);
        }
        out
    }
}

fn warn_directed(g: &Graph) {
    if g.is_directed() {
        log::warn!("community detection treats directed edges as undirected");
    }
}

fn check_membership(g: &Graph, membership: &[u64]) -> Result<()> {
    if membership.len() as u64 != g.vertex_count() {
        return Err(Error::param(format!(
            "membership has {} entries, graph has {} vertices",
            membership.len(),
            g.vertex_count()
        )));
    }
    Ok(())
}

/// Relabels arbitrary community labels to `0..c` by first appearance.
pub fn normalize_membership(membership: &[u64]) -> Vec<u64> {
    let mut map = std::collections::HashMap::new();
    membership
        .iter()
        .map(|&c| {
            let next = map.len() as u64;
            *map.entry(c).or_insert(next)
        })
        .collect()
}

/// Per-community internal weight, degree sum and vertex count.
fn community_sums(g: &Graph, labels: &[u64], w: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let c = labels.iter().max().map_or(0, |&x| x as usize + 1);
    let mut internal = vec![0.0; c];
    let mut degree = vec![0.0; c];
    let mut count = vec![0.0; c];
    for &l in labels {
        count[l as usize] += 1.0;
    }
    for (e, (u, v)) in g.edges().enumerate() {
        let (cu, cv) = (labels[u as usize] as usize, labels[v as usize] as usize);
        if cu == cv {
            internal[cu] += w[e];
        }
        degree[cu] += w[e];
        degree[cv] += w[e];
    }
    (internal, degree, count)
}

/// Newman modularity with resolution `gamma`.
pub fn modularity(
    g: &Graph,
    membership: &[u64],
    resolution: f64,
    weights: Option<&[f64]>,
) -> Result<f64> {
    check_membership(g, membership)?;
    warn_directed(g);
    let w = weights::resolve(g, weights, true)?;
    let m: f64 = w.iter().sum();
    if g.edge_count() == 0 || m == 0.0 {
        return Err(Error::EmptyGraph);
    }
    let labels = normalize_membership(membership);
    let (internal, degree, _) = community_sums(g, &labels, &w);
    let e: f64 = internal.iter().sum();
    let d2: f64 = degree.iter().map(|d| d * d).sum();
    Ok((e - resolution * d2 / (4.0 * m)) / m)
}

/// Constant Potts model quality. With weights, the edge term uses weights
/// while the penalty still counts vertex pairs.
pub fn cpm_quality(
    g: &Graph,
    membership: &[u64],
    resolution: f64,
    weights: Option<&[f64]>,
) -> Result<f64> {
    check_membership(g, membership)?;
    warn_directed(g);
    let w = weights::resolve(g, weights, true)?;
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let labels = normalize_membership(membership);
    let (internal, _, count) = community_sums(g, &labels, &w);
    Ok(internal
        .iter()
        .zip(&count)
        .map(|(e, n)| e - resolution * n * (n - 1.0) / 2.0)
        .sum())
}

pub fn quality(
    g: &Graph,
    membership: &[u64],
    objective: Objective,
    resolution: f64,
    weights: Option<&[f64]>,
) -> Result<f64> {
    match objective {
        Objective::Modularity => modularity(g, membership, resolution, weights),
        Objective::Cpm => cpm_quality(g, membership, resolution, weights),
    }
}

/// Weighted undirected network the optimizers work on; aggregation levels
/// are built from it.
#[derive(Debug, Clone)]
struct Net {
    /// Merged neighbor weights, no self entries, sorted by neighbor.
    adj: Vec<Vec<(usize, f64)>>,
    self_w: Vec<f64>,
    /// Node weight in the null-model term: degree (modularity) or vertex
    /// count (CPM).
    node_w: Vec<f64>,
    total: f64,
}

impl Net {
    fn from_graph(g: &Graph, w: &[f64], objective: Objective) -> Net {
        let n = g.vertex_count() as usize;
        let mut raw: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut self_w = vec![0.0; n];
        let mut total = 0.0;
        for (e, (u, v)) in g.edges().enumerate() {
            let (u, v) = (u as usize, v as usize);
            total += w[e];
            if u == v {
                self_w[u] += w[e];
            } else {
                raw[u].push((v, w[e]));
                raw[v].push((u, w[e]));
            }
        }
        let adj: Vec<Vec<(usize, f64)>> = raw.into_iter().map(merge_sorted).collect();
        let node_w = match objective {
            Objective::Modularity => (0..n)
                .map(|v| adj[v].iter().map(|&(_, x)| x).sum::<f64>() + 2.0 * self_w[v])
                .collect(),
            Objective::Cpm => vec![1.0; n],
        };
        Net {
            adj,
            self_w,
            node_w,
            total,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// One node per community of `comm` (labels `0..count`).
    fn aggregate(&self, comm: &[usize], count: usize) -> Net {
        let mut raw: Vec<Vec<(usize, f64)>> = vec![Vec::new(); count];
        let mut self_w = vec![0.0; count];
        let mut node_w = vec![0.0; count];
        for v in 0..self.len() {
            let cv = comm[v];
            self_w[cv] += self.self_w[v];
            node_w[cv] += self.node_w[v];
            for &(u, x) in &self.adj[v] {
                let cu = comm[u];
                if cu == cv {
                    // each internal edge is seen from both ends
                    self_w[cv] += x / 2.0;
                } else {
                    raw[cv].push((cu, x));
                }
            }
        }
        Net {
            adj: raw.into_iter().map(merge_sorted).collect(),
            self_w,
            node_w,
            total: self.total,
        }
    }
}

fn merge_sorted(mut list: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    list.sort_by_key(|&(u, _)| u);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(list.len());
    for (u, x) in list {
        match out.last_mut() {
            Some((last, acc)) if *last == u => *acc += x,
            _ => out.push((u, x)),
        }
    }
    out
}

/// Scratch accumulator of a node's edge weight to each community.
struct NeighborWeights {
    w: Vec<f64>,
    touched: Vec<usize>,
}

impl NeighborWeights {
    fn new(n: usize) -> Self {
        NeighborWeights {
            w: vec![0.0; n],
            touched: Vec::new(),
        }
    }

    /// Fills weights from `v` to communities in `comm`, skipping neighbors
    /// rejected by `keep`. Communities are listed in neighbor order.
    fn collect(&mut self, net: &Net, v: usize, comm: &[usize], keep: impl Fn(usize) -> bool) {
        for c in self.touched.drain(..) {
            self.w[c] = 0.0;
        }
        for &(u, x) in &net.adj[v] {
            if !keep(u) {
                continue;
            }
            let c = comm[u];
            if self.w[c] == 0.0 && !self.touched.contains(&c) {
                self.touched.push(c);
            }
            self.w[c] += x;
        }
    }
}

/// Labels `0..count` by first appearance.
fn renumber(comm: &mut [usize]) -> usize {
    let mut map = vec![usize::MAX; comm.len()];
    let mut next = 0;
    for c in comm.iter_mut() {
        if map[*c] == usize::MAX {
            map[*c] = next;
            next += 1;
        }
        *c = map[*c];
    }
    next
}

struct Optimizer {
    /// Scaled resolution: `gamma / 2m` for modularity, `gamma` for CPM.
    gamma: f64,
    eps: f64,
    rng: GraphRng,
}

impl Optimizer {
    fn new(net: &Net, objective: Objective, resolution: f64, seed: u64) -> Self {
        let gamma = match objective {
            Objective::Modularity => resolution / (2.0 * net.total),
            Objective::Cpm => resolution,
        };
        Optimizer {
            gamma,
            eps: 1e-12 * net.total.max(1.0),
            rng: rng::seeded(seed),
        }
    }

    fn gain(&self, k_to: f64, node_w: f64, comm_w: f64) -> f64 {
        k_to - self.gamma * node_w * comm_w
    }

    /// Louvain local moving: sweep nodes in a seeded order until a sweep
    /// moves nothing. Returns whether any node changed community.
    fn louvain_move(&mut self, net: &Net, comm: &mut [usize]) -> bool {
        let n = net.len();
        let mut comm_w = vec![0.0; n];
        for v in 0..n {
            comm_w[comm[v]] += net.node_w[v];
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);
        let mut scratch = NeighborWeights::new(n);
        let mut any = false;
        loop {
            let mut moved = false;
            for &v in &order {
                let home = comm[v];
                comm_w[home] -= net.node_w[v];
                scratch.collect(net, v, comm, |_| true);
                let mut best = home;
                let mut best_gain = self.gain(scratch.w[home], net.node_w[v], comm_w[home]);
                for &c in &scratch.touched {
                    let gain = self.gain(scratch.w[c], net.node_w[v], comm_w[c]);
                    if gain > best_gain + self.eps {
                        best = c;
                        best_gain = gain;
                    }
                }
                comm[v] = best;
                comm_w[best] += net.node_w[v];
                if best != home {
                    moved = true;
                }
            }
            if !moved {
                break;
            }
            any = true;
        }
        any
    }

    /// Leiden queue-based local moving; nodes may also split off into an
    /// empty community.
    fn fast_move(&mut self, net: &Net, comm: &mut [usize]) {
        let n = net.len();
        let mut comm_w = vec![0.0; n];
        let mut members = vec![0usize; n];
        for v in 0..n {
            comm_w[comm[v]] += net.node_w[v];
            members[comm[v]] += 1;
        }
        let mut empty: Vec<usize> = (0..n).filter(|&c| members[c] == 0).rev().collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);
        let mut queue: VecDeque<usize> = order.into();
        let mut queued = vec![true; n];
        let mut scratch = NeighborWeights::new(n);
        while let Some(v) = queue.pop_front() {
            queued[v] = false;
            let home = comm[v];
            comm_w[home] -= net.node_w[v];
            members[home] -= 1;
            if members[home] == 0 {
                empty.push(home);
            }
            scratch.collect(net, v, comm, |_| true);
            let mut best = home;
            let mut best_gain = self.gain(scratch.w[home], net.node_w[v], comm_w[home]);
            for &c in &scratch.touched {
                let gain = self.gain(scratch.w[c], net.node_w[v], comm_w[c]);
                if gain > best_gain + self.eps {
                    best = c;
                    best_gain = gain;
                }
            }
            if members[home] > 0 && 0.0 > best_gain + self.eps {
                best = *empty.last().expect("an empty community exists");
            }
            if members[best] == 0 {
                empty.retain(|&c| c != best);
            }
            comm[v] = best;
            comm_w[best] += net.node_w[v];
            members[best] += 1;
            if best != home {
                for &(u, _) in &net.adj[v] {
                    if !queued[u] && comm[u] != best {
                        queued[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
    }

    /// Leiden refinement: within each community of `comm`, merge
    /// well-connected singletons into well-connected sub-communities,
    /// chosen with probability proportional to `exp(gain / theta)`.
    fn refine(&mut self, net: &Net, comm: &[usize], theta: f64) -> Vec<usize> {
        let n = net.len();
        let mut refined: Vec<usize> = (0..n).collect();
        let mut ref_w = net.node_w.clone();
        let mut singleton = vec![true; n];
        let mut comm_w = vec![0.0; n];
        for v in 0..n {
            comm_w[comm[v]] += net.node_w[v];
        }
        // weight from each refined community to the rest of its parent
        let mut ext: Vec<f64> = (0..n)
            .map(|v| {
                net.adj[v]
                    .iter()
                    .filter(|&&(u, _)| comm[u] == comm[v])
                    .map(|&(_, x)| x)
                    .sum()
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);
        let mut scratch = NeighborWeights::new(n);
        let mut cand: Vec<(usize, f64)> = Vec::new();
        for &v in &order {
            let parent = comm[v];
            let total = comm_w[parent];
            let well_connected = |e: f64, w: f64| e + self.eps >= self.gamma * w * (total - w);
            if !singleton[v] || !well_connected(ext[v], net.node_w[v]) {
                continue;
            }
            scratch.collect(net, v, &refined, |u| comm[u] == parent);
            cand.clear();
            cand.push((v, 0.0));
            for &c in &scratch.touched {
                if c == v || !well_connected(ext[c], ref_w[c]) {
                    continue;
                }
                let gain = self.gain(scratch.w[c], net.node_w[v], ref_w[c]);
                if gain >= 0.0 {
                    cand.push((c, gain));
                }
            }
            let top = cand
                .iter()
                .map(|&(_, g)| g)
                .fold(f64::NEG_INFINITY, f64::max);
            let probs: Vec<f64> = cand
                .iter()
                .map(|&(_, g)| ((g - top) / theta).exp())
                .collect();
            let sum: f64 = probs.iter().sum();
            let mut draw = self.rng.random::<f64>() * sum;
            let mut chosen = cand[cand.len() - 1].0;
            for (i, p) in probs.iter().enumerate() {
                if draw < *p {
                    chosen = cand[i].0;
                    break;
                }
                draw -= p;
            }
            if chosen != v {
                let k = scratch.w[chosen];
                ext[chosen] = ext[chosen] + ext[v] - 2.0 * k;
                ref_w[chosen] += net.node_w[v];
                ref_w[v] = 0.0;
                refined[v] = chosen;
                singleton[v] = false;
                singleton[chosen] = false;
            }
        }
        refined
    }
}

fn prepare(g: &Graph, weights: Option<&[f64]>) -> Result<Vec<f64>> {
    warn_directed(g);
    let w = weights::resolve(g, weights, true)?.into_owned();
    if g.edge_count() == 0 || w.iter().sum::<f64>() == 0.0 {
        return Err(Error::EmptyGraph);
    }
    Ok(w)
}

fn to_membership(comm: &[usize]) -> Vec<u64> {
    normalize_membership(&comm.iter().map(|&c| c as u64).collect::<Vec<_>>())
}

#[derive(Debug, Clone, Copy)]
pub struct LouvainOptions<'a> {
    pub resolution: f64,
    pub seed: u64,
    pub weights: Option<&'a [f64]>,
}

impl Default for LouvainOptions<'_> {
    fn default() -> Self {
        LouvainOptions {
            resolution: 1.0,
            seed: 0,
            weights: None,
        }
    }
}

/// Multilevel modularity optimization: greedy local moving, then
/// aggregation, until a level produces no move.
pub fn louvain(g: &Graph, opts: &LouvainOptions<'_>) -> Result<Partition> {
    let w = prepare(g, opts.weights)?;
    let mut net = Net::from_graph(g, &w, Objective::Modularity);
    let mut opt = Optimizer::new(&net, Objective::Modularity, opts.resolution, opts.seed);
    let mut membership: Vec<usize> = (0..net.len()).collect();
    loop {
        let mut comm: Vec<usize> = (0..net.len()).collect();
        if !opt.louvain_move(&net, &mut comm) {
            break;
        }
        let count = renumber(&mut comm);
        for m in membership.iter_mut() {
            *m = comm[*m];
        }
        if count == net.len() {
            break;
        }
        net = net.aggregate(&comm, count);
    }
    let membership = to_membership(&membership);
    let quality = modularity(g, &membership, opts.resolution, Some(&w))?;
    Ok(Partition {
        membership,
        quality,
        objective: Objective::Modularity,
        resolution: opts.resolution,
        method: "louvain",
        seed: Some(opts.seed),
        theta: None,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct LeidenOptions<'a> {
    pub objective: Objective,
    pub resolution: f64,
    pub seed: u64,
    /// Full passes of the algorithm; 0 repeats until the partition is
    /// stable.
    pub iterations: usize,
    pub theta: f64,
    pub weights: Option<&'a [f64]>,
}

impl Default for LeidenOptions<'_> {
    fn default() -> Self {
        LeidenOptions {
            objective: Objective::Modularity,
            resolution: 1.0,
            seed: 0,
            iterations: 2,
            theta: 0.01,
            weights: None,
        }
    }
}

/// One Leiden pass starting from `start` (labels on the original graph).
fn leiden_pass(base: &Net, start: &[usize], opt: &mut Optimizer, theta: f64) -> Vec<usize> {
    let mut net = base.clone();
    let mut comm = start.to_vec();
    // node of the current level holding each original vertex
    let mut node_of: Vec<usize> = (0..base.len()).collect();
    for _level in 0..base.len().max(1) * 4 {
        opt.fast_move(&net, &mut comm);
        let count = renumber(&mut comm);
        if count == net.len() {
            break;
        }
        let mut refined = opt.refine(&net, &comm, theta);
        let mut ref_count = renumber(&mut refined);
        if ref_count == net.len() {
            // refinement merged nothing; aggregate the coarse partition
            refined = comm.clone();
            ref_count = count;
        }
        let mut next_comm = vec![0; ref_count];
        for v in 0..net.len() {
            next_comm[refined[v]] = comm[v];
        }
        for x in node_of.iter_mut() {
            *x = refined[*x];
        }
        net = net.aggregate(&refined, ref_count);
        comm = next_comm;
    }
    node_of.iter().map(|&x| comm[x]).collect()
}

/// Splits every community that is not connected in `g` into its
/// connected pieces. Never lowers modularity or CPM quality.
fn split_disconnected(g: &Graph, membership: &[u64]) -> Vec<u64> {
    let adj = simple_undirected(g);
    let n = adj.len();
    let mut piece = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if piece[s] != usize::MAX {
            continue;
        }
        piece[s] = next;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if piece[v] == usize::MAX && membership[v] == membership[s] {
                    piece[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    to_membership(&piece)
}

/// Leiden: local moving, refinement and aggregation. Every returned
/// community induces a connected subgraph.
pub fn leiden(g: &Graph, opts: &LeidenOptions<'_>) -> Result<Partition> {
    let w = prepare(g, opts.weights)?;
    if opts.theta.is_nan() || opts.theta <= 0.0 {
        return Err(Error::param("theta must be positive"));
    }
    let net = Net::from_graph(g, &w, opts.objective);
    let mut opt = Optimizer::new(&net, opts.objective, opts.resolution, opts.seed);
    let mut comm: Vec<usize> = (0..net.len()).collect();
    let passes = if opts.iterations == 0 {
        usize::MAX
    } else {
        opts.iterations
    };
    for _ in 0..passes {
        let mut next = leiden_pass(&net, &comm, &mut opt, opts.theta);
        renumber(&mut next);
        let stable = next == comm;
        comm = next;
        if stable && opts.iterations == 0 {
            break;
        }
    }
    let membership = split_disconnected(g, &to_membership(&comm));
    let quality = quality(g, &membership, opts.objective, opts.resolution, Some(&w))?;
    Ok(Partition {
        membership,
        quality,
        objective: opts.objective,
        resolution: opts.resolution,
        method: "leiden",
        seed: Some(opts.seed),
        theta: Some(opts.theta),
    })
}

/// Fluid communities on a connected undirected graph: `k` fluids start at
/// random vertices and spread by density-weighted majority until no vertex
/// changes or `max_iter` sweeps have run. Sweeps continue past `max_iter`
/// only while some vertex has not been reached yet.
pub fn fluid_communities(g: &Graph, k: usize, seed: u64, max_iter: usize) -> Result<Partition> {
    if g.is_directed() {
        return Err(Error::RequiresUndirected);
    }
    let n = g.vertex_count() as usize;
    if k == 0 || k > n {
        return Err(Error::param(format!("k = {k} outside 1..={n}")));
    }
    let adj = simple_undirected(g);
    if crate::patterns::connected_components(g, crate::patterns::Connectedness::Weak)?.count() != 1
    {
        return Err(Error::Disconnected);
    }
    let mut rng = rng::seeded(seed);
    const NONE: usize = usize::MAX;
    let mut comm = vec![NONE; n];
    let mut size = vec![0usize; k];
    for (c, v) in rand::seq::index::sample(&mut rng, n, k)
        .into_iter()
        .enumerate()
    {
        comm[v] = c;
        size[c] = 1;
    }
    let mut assigned = k;
    let mut order: Vec<usize> = (0..n).collect();
    let mut sums = vec![0.0; k];
    let mut touched: Vec<usize> = Vec::new();
    let mut best: Vec<usize> = Vec::new();
    let mut sweeps = 0;
    loop {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            for c in touched.drain(..) {
                sums[c] = 0.0;
            }
            for &u in std::iter::once(&v).chain(&adj[v]) {
                let c = comm[u];
                if c != NONE {
                    if sums[c] == 0.0 {
                        touched.push(c);
                    }
                    sums[c] += 1.0 / size[c] as f64;
                }
            }
            if touched.is_empty() {
                continue;
            }
            let top = touched
                .iter()
                .map(|&c| sums[c])
                .fold(f64::NEG_INFINITY, f64::max);
            best.clear();
            best.extend(touched.iter().copied().filter(|&c| sums[c] >= top - 1e-12));
            let current = comm[v];
            if current != NONE && best.contains(&current) {
                continue;
            }
            best.sort_unstable();
            let pick = best[rng.random_range(0..best.len())];
            if current == NONE {
                assigned += 1;
            } else {
                size[current] -= 1;
            }
            comm[v] = pick;
            size[pick] += 1;
            changed = true;
        }
        sweeps += 1;
        if assigned == n && (!changed || sweeps >= max_iter) {
            break;
        }
    }
    let membership = to_membership(&comm);
    let quality = if g.edge_count() == 0 {
        0.0
    } else {
        modularity(g, &membership, 1.0, None)?
    };
    Ok(Partition {
        membership,
        quality,
        objective: Objective::Modularity,
        resolution: 1.0,
        method: "fluid",
        seed: Some(seed),
        theta: None,
    })
}
