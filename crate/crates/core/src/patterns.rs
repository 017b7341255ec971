//! Connected components, motif census, cliques and minimum cycle bases.
//!
//! Motif, clique and cycle-basis routines work on the underlying simple
//! graph: parallel edges collapse and self-loops are ignored.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::adjacency::{simple_undirected, Adjacency};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Mode, VertexId};
use crate::weights::{self, Total};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectedness {
    Weak,
    Strong,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Component of each vertex, numbered by smallest member.
    pub membership: Vec<u64>,
    pub sizes: Vec<u64>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

fn from_labels(labels: &[usize]) -> Components {
    let mut map = vec![usize::MAX; labels.len()];
    let mut sizes = Vec::new();
    let membership = labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = sizes.len();
                sizes.push(0);
            }
            sizes[map[l]] += 1;
            map[l] as u64
        })
        .collect();
    Components { membership, sizes }
}

pub fn connected_components(g: &Graph, mode: Connectedness) -> Result<Components> {
    let n = g.vertex_count() as usize;
    match mode {
        Connectedness::Weak => {
            let adj = Adjacency::new(g, Mode::All);
            let mut label = vec![usize::MAX; n];
            let mut stack = Vec::new();
            for s in 0..n {
                if label[s] != usize::MAX {
                    continue;
                }
                label[s] = s;
                stack.push(s);
                while let Some(u) = stack.pop() {
                    for &v in adj.neighbors(u) {
                        if label[v] == usize::MAX {
                            label[v] = s;
                            stack.push(v);
                        }
                    }
                }
            }
            Ok(from_labels(&label))
        }
        Connectedness::Strong => {
            if !g.is_directed() {
                return Err(Error::RequiresDirected);
            }
            Ok(from_labels(&tarjan(&Adjacency::forward(g))))
        }
    }
}

/// Iterative Tarjan; returns an arbitrary representative label per SCC.
fn tarjan(adj: &Adjacency) -> Vec<usize> {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut label = vec![0; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    // (vertex, position in its neighbor list)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos == 0 && index[v] == UNSEEN {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let nbrs = adj.neighbors(v);
            if *pos < nbrs.len() {
                let w = nbrs[*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    label[w] = v;
                    if w == v {
                        break;
                    }
                }
            }
        }
    }
    label
}

fn require_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() {
        Err(Error::RequiresUndirected)
    } else {
        Ok(())
    }
}

pub const MOTIF3_CLASSES: [&str; 2] = ["path", "triangle"];
pub const MOTIF4_CLASSES: [&str; 6] = ["star", "path", "paw", "cycle", "diamond", "complete"];

/// Counts of connected induced subgraphs per isomorphism class, in the
/// order of [`MOTIF3_CLASSES`] or [`MOTIF4_CLASSES`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifCensus {
    pub size: usize,
    pub classes: &'static [&'static str],
    pub counts: Vec<u64>,
}

impl MotifCensus {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, class: &str) -> Option<u64> {
        self.classes
            .iter()
            .position(|&c| c == class)
            .map(|i| self.counts[i])
    }
}

const NOT_CONNECTED: u8 = u8::MAX;

/// Pairs of a 4-vertex subgraph in mask-bit order.
const PAIRS4: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const fn class4(mask: u8) -> u8 {
    let mut deg = [0u8; 4];
    let mut edges = 0;
    let mut i = 0;
    while i < 6 {
        if mask & (1 << i) != 0 {
            deg[PAIRS4[i].0] += 1;
            deg[PAIRS4[i].1] += 1;
            edges += 1;
        }
        i += 1;
    }
    let mut max = 0;
    let mut min = 3;
    let mut j = 0;
    while j < 4 {
        if deg[j] > max {
            max = deg[j];
        }
        if deg[j] < min {
            min = deg[j];
        }
        j += 1;
    }
    // with 3 edges a path and a star are the only connected shapes; a
    // triangle plus an isolated vertex has a zero degree
    match (edges, max, min) {
        (3, 3, _) => 0,
        (3, 2, 1) => 1,
        (4, 3, _) => 2,
        (4, 2, _) => 3,
        (5, _, _) => 4,
        (6, _, _) => 5,
        _ => NOT_CONNECTED,
    }
}

const fn table4() -> [u8; 64] {
    let mut t = [0u8; 64];
    let mut m = 0;
    while m < 64 {
        t[m] = class4(m as u8);
        m += 1;
    }
    t
}

static CLASS4: [u8; 64] = table4();
/// Size-3 masks over pairs (0,1), (0,2), (1,2).
static CLASS3: [u8; 8] = [
    NOT_CONNECTED,
    NOT_CONNECTED,
    NOT_CONNECTED,
    0,
    NOT_CONNECTED,
    0,
    0,
    1,
];

fn is_adjacent(adj: &[Vec<usize>], u: usize, v: usize) -> bool {
    adj[u].binary_search(&v).is_ok()
}

/// ESU enumeration of connected induced subgraphs of size 3 or 4.
pub fn motif_census(g: &Graph, size: usize) -> Result<MotifCensus> {
    require_undirected(g)?;
    let classes: &'static [&'static str] = match size {
        3 => &MOTIF3_CLASSES,
        4 => &MOTIF4_CLASSES,
        _ => return Err(Error::param(format!("motif size {size} not in 3..=4"))),
    };
    let adj = simple_undirected(g);
    let mut counts = vec![0u64; classes.len()];
    let mut sub = Vec::with_capacity(size);
    for v in 0..adj.len() {
        sub.clear();
        sub.push(v);
        let ext: Vec<usize> = adj[v].iter().copied().filter(|&u| u > v).collect();
        esu_extend(&adj, &mut sub, ext, v, size, &mut counts);
    }
    Ok(MotifCensus {
        size,
        classes,
        counts,
    })
}

fn esu_extend(
    adj: &[Vec<usize>],
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    root: usize,
    size: usize,
    counts: &mut [u64],
) {
    if sub.len() == size {
        let class = classify(adj, sub);
        debug_assert_ne!(class, NOT_CONNECTED);
        counts[class as usize] += 1;
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &u in &adj[w] {
            if u > root
                && !sub.contains(&u)
                && !next.contains(&u)
                && u != w
                && !sub.iter().any(|&s| is_adjacent(adj, s, u))
            {
                next.push(u);
            }
        }
        sub.push(w);
        esu_extend(adj, sub, next, root, size, counts);
        sub.pop();
    }
}

fn classify(adj: &[Vec<usize>], sub: &[usize]) -> u8 {
    let pairs: &[(usize, usize)] = if sub.len() == 3 {
        &[(0, 1), (0, 2), (1, 2)]
    } else {
        &PAIRS4
    };
    let mut mask = 0usize;
    for (bit, &(a, b)) in pairs.iter().enumerate() {
        if is_adjacent(adj, sub[a], sub[b]) {
            mask |= 1 << bit;
        }
    }
    if sub.len() == 3 {
        CLASS3[mask]
    } else {
        CLASS4[mask]
    }
}

/// All maximal cliques with size in `min_size..=max_size`; vertices within
/// a clique ascend and cliques are sorted lexicographically.
pub fn maximal_cliques(
    g: &Graph,
    min_size: usize,
    max_size: Option<usize>,
) -> Result<Vec<Vec<VertexId>>> {
    require_undirected(g)?;
    let adj = simple_undirected(g);
    let max_size = max_size.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut r = Vec::new();
    let p: Vec<usize> = (0..adj.len()).collect();
    bron_kerbosch(&adj, &mut r, p, Vec::new(), min_size, max_size, &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    Ok(out)
}

fn intersect(sorted: &[usize], adj: &[usize]) -> Vec<usize> {
    sorted
        .iter()
        .copied()
        .filter(|v| adj.binary_search(v).is_ok())
        .collect()
}

fn bron_kerbosch(
    adj: &[Vec<usize>],
    r: &mut Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    min_size: usize,
    max_size: usize,
    out: &mut Vec<Vec<VertexId>>,
) {
    if p.is_empty() {
        if x.is_empty() && r.len() >= min_size && r.len() <= max_size {
            out.push(r.iter().map(|&v| v as VertexId).collect());
        }
        return;
    }
    if r.len() + p.len() < min_size || r.len() >= max_size {
        return;
    }
    // Tomita pivot: maximize |P ∩ N(u)|
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| (intersect(&p, &adj[u]).len(), Reverse(u)))
        .expect("P is non-empty");
    let branch: Vec<usize> = p
        .iter()
        .copied()
        .filter(|v| adj[pivot].binary_search(v).is_err())
        .collect();
    for v in branch {
        r.push(v);
        bron_kerbosch(
            adj,
            r,
            intersect(&p, &adj[v]),
            intersect(&x, &adj[v]),
            min_size,
            max_size,
            out,
        );
        r.pop();
        p.retain(|&u| u != v);
        let at = x.partition_point(|&u| u < v);
        x.insert(at, v);
    }
}

struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
}

/// A maximum clique (Östergård's branch and bound). Vertices are processed
/// by descending degree with ties broken by id; the result is sorted.
pub fn max_clique(g: &Graph) -> Result<Vec<VertexId>> {
    require_undirected(g)?;
    let adj = simple_undirected(g);
    let n = adj.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (Reverse(adj[v].len()), v));
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // neighbor bitsets in ordered positions
    let nbr: Vec<BitSet> = order
        .iter()
        .map(|&v| {
            let mut b = BitSet::new(n);
            for &u in &adj[v] {
                b.insert(pos[u]);
            }
            b
        })
        .collect();
    let mut state = Ostergard {
        nbr: &nbr,
        c: vec![0; n],
        best: Vec::new(),
        found: false,
    };
    for i in (0..n).rev() {
        state.found = false;
        let mut cand = BitSet::new(n);
        for j in i + 1..n {
            cand.insert(j);
        }
        let cand = cand.and(&nbr[i]);
        state.expand(cand, &mut vec![i]);
        state.c[i] = state.best.len();
    }
    let mut clique: Vec<VertexId> = state.best.iter().map(|&i| order[i] as VertexId).collect();
    clique.sort_unstable();
    Ok(clique)
}

struct Ostergard<'a> {
    nbr: &'a [BitSet],
    /// `c[i]`: clique number of the subgraph induced by positions `i..`.
    c: Vec<usize>,
    best: Vec<usize>,
    found: bool,
}

impl Ostergard<'_> {
    fn expand(&mut self, mut cand: BitSet, current: &mut Vec<usize>) {
        if cand.first().is_none() {
            if current.len() > self.best.len() {
                self.best = current.clone();
                self.found = true;
            }
            return;
        }
        while let Some(i) = cand.first() {
            let size = current.len();
            if size + cand.len() <= self.best.len() || size + self.c[i] <= self.best.len() {
                return;
            }
            cand.remove(i);
            current.push(i);
            let next = cand.and(&self.nbr[i]);
            self.expand(next, current);
            current.pop();
            if self.found {
                return;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleBasis {
    /// Each cycle as ascending edge ids.
    pub cycles: Vec<Vec<EdgeId>>,
    pub weights: Vec<f64>,
    pub total_weight: f64,
}

/// Minimum-weight cycle basis from Horton's candidate set: for every
/// vertex `x` and edge `(u, v)`, the cycle formed by the shortest-path tree
/// paths `x..u`, `x..v` and the edge, when those paths meet only at `x`.
/// Candidates are scanned by ascending weight and kept when independent
/// over GF(2). Of parallel edges only the lightest (lowest id on ties)
/// takes part.
pub fn minimum_cycle_basis(g: &Graph, weights: Option<&[f64]>) -> Result<CycleBasis> {
    require_undirected(g)?;
    let w = weights::resolve(g, weights, false)?;
    let n = g.vertex_count() as usize;
    // simple graph edges: (u, v, original id, weight)
    let mut best_edge: BTreeMap<(usize, usize), (usize, f64)> = BTreeMap::new();
    for (e, (u, v)) in g.edges().enumerate() {
        let (u, v) = (u as usize, v as usize);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        let entry = best_edge.entry(key).or_insert((e, w[e]));
        if w[e] < entry.1 {
            *entry = (e, w[e]);
        }
    }
    let edges: Vec<(usize, usize, usize, f64)> = best_edge
        .iter()
        .map(|(&(u, v), &(e, x))| (u, v, e, x))
        .collect();
    let m = edges.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(u, v, _, _)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let unit = Graph::from_edges(
        n as u64,
        false,
        &edges
            .iter()
            .map(|&(u, v, _, _)| (u as u64, v as u64))
            .collect::<Vec<_>>(),
    )?;
    let c = connected_components(&unit, Connectedness::Weak)?.count();
    let dim = m + c - n;
    if dim == 0 {
        return Ok(CycleBasis {
            cycles: Vec::new(),
            weights: Vec::new(),
            total_weight: 0.0,
        });
    }

    let mut candidates: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for x in 0..n {
        let (dist, pred) = tree(&adj, &edges, x);
        // child of x on the tree path to each vertex
        let mut branch = vec![usize::MAX; n];
        for v in 0..n {
            if dist[v].is_finite() && v != x {
                let mut u = v;
                loop {
                    let (p, _) = pred[u].expect("reached vertex has a parent");
                    if p == x {
                        break;
                    }
                    u = p;
                }
                branch[v] = u;
            }
        }
        for (i, &(u, v, _, wt)) in edges.iter().enumerate() {
            if !dist[u].is_finite()
                || pred[u].map(|p| p.1) == Some(i)
                || pred[v].map(|p| p.1) == Some(i)
            {
                continue;
            }
            if u != x && v != x && branch[u] == branch[v] {
                continue;
            }
            let mut cyc = vec![i];
            for end in [u, v] {
                let mut t = end;
                while let Some((p, e)) = pred[t] {
                    cyc.push(e);
                    t = p;
                }
            }
            cyc.sort_unstable();
            candidates.entry(cyc).or_insert(dist[u] + wt + dist[v]);
        }
    }
    let mut sorted: Vec<(Vec<usize>, f64)> = candidates.into_iter().collect();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));

    // incremental GF(2) elimination, rows keyed by pivot bit
    let words = m.div_ceil(64);
    let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut basis = Vec::new();
    for (cyc, weight) in sorted {
        let mut vec = vec![0u64; words];
        for &e in &cyc {
            vec[e / 64] ^= 1 << (e % 64);
        }
        for (pivot, row) in &rows {
            if vec[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (a, b) in vec.iter_mut().zip(row) {
                    *a ^= b;
                }
            }
        }
        let Some(pivot) = vec
            .iter()
            .enumerate()
            .find(|(_, &x)| x != 0)
            .map(|(i, x)| i * 64 + x.trailing_zeros() as usize)
        else {
            continue;
        };
        // keep rows reduced on each other's pivots
        for (_, row) in rows.iter_mut() {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (a, b) in row.iter_mut().zip(&vec) {
                    *a ^= b;
                }
            }
        }
        rows.push((pivot, vec));
        basis.push((cyc, weight));
        if basis.len() == dim {
            break;
        }
    }
    debug_assert_eq!(basis.len(), dim);
    let mut cycles = Vec::with_capacity(basis.len());
    let mut ws = Vec::with_capacity(basis.len());
    for (cyc, weight) in basis {
        let mut ids: Vec<EdgeId> = cyc.iter().map(|&i| edges[i].2 as EdgeId).collect();
        ids.sort_unstable();
        cycles.push(ids);
        ws.push(weight);
    }
    Ok(CycleBasis {
        total_weight: ws.iter().sum(),
        cycles,
        weights: ws,
    })
}

type Pred = Option<(usize, usize)>;

/// Dijkstra tree from `x` over the simple edge list; ties go to the
/// smaller predecessor vertex.
fn tree(
    adj: &[Vec<(usize, usize)>],
    edges: &[(usize, usize, usize, f64)],
    x: usize,
) -> (Vec<f64>, Vec<Pred>) {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Pred> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[x] = 0.0;
    heap.push(Reverse((Total(0.0), x)));
    while let Some(Reverse((Total(d), u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, i) in &adj[u] {
            if done[v] {
                continue;
            }
            let nd = d + edges[i].3;
            let better = nd < dist[v] || (nd == dist[v] && pred[v].is_some_and(|(p, _)| u < p));
            if better {
                dist[v] = nd;
                pred[v] = Some((u, i));
                heap.push(Reverse((Total(nd), v)));
            }
        }
    }
    (dist, pred)
}
