//! Traversals, topological ordering and shortest paths.
//!
//! Every routine is deterministic: neighbors are visited in ascending id
//! order, and among equal-weight shortest paths the one with the
//! lexicographically smallest vertex sequence wins. Directed graphs are
//! traversed along edge direction; undirected graphs in both directions.
//!
//! Path weights are accumulated left to right from the source, and two
//! weights are "equal" only when those sums are bit-identical.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet, VecDeque};

use crate::adjacency::Adjacency;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Mode, VertexId};
use crate::weights::{self, Total};

/// A walk through the graph with its edges and total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub total_weight: f64,
}

impl PathResult {
    fn trivial(v: VertexId) -> Self {
        PathResult {
            vertices: vec![v],
            edges: Vec::new(),
            total_weight: 0.0,
        }
    }

    pub fn hop_count(&self) -> usize {
        self.edges.len()
    }
}

/// Single-source distances with the predecessor edge of each reached vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMap {
    pub source: VertexId,
    /// `f64::INFINITY` for unreachable vertices.
    pub distances: Vec<f64>,
    pub predecessors: Vec<Option<EdgeId>>,
}

impl DistanceMap {
    fn empty(g: &Graph, source: VertexId) -> Self {
        let n = g.vertex_count() as usize;
        let mut distances = vec![f64::INFINITY; n];
        distances[source as usize] = 0.0;
        DistanceMap {
            source,
            distances,
            predecessors: vec![None; n],
        }
    }

    /// Path from the source to `target` along predecessor edges.
    pub fn path_to(&self, g: &Graph, target: VertexId) -> Option<PathResult> {
        if !self.distances.get(target as usize)?.is_finite() {
            return None;
        }
        let mut vertices = vec![target];
        let mut edges = Vec::new();
        let mut cur = target;
        while let Some(e) = self.predecessors[cur as usize] {
            let (a, b) = g.edge(e);
            cur = if a == cur { b } else { a };
            vertices.push(cur);
            edges.push(e);
        }
        vertices.reverse();
        edges.reverse();
        Some(PathResult {
            vertices,
            edges,
            total_weight: self.distances[target as usize],
        })
    }
}

/// Breadth-first search from `root`. Returns the visit order and hop
/// distances.
pub fn bfs(g: &Graph, root: VertexId) -> Result<(Vec<VertexId>, DistanceMap)> {
    g.check_vertex(root)?;
    let adj = Adjacency::forward(g);
    let mut dist = DistanceMap::empty(g, root);
    let mut seen = vec![false; adj.len()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([root as usize]);
    seen[root as usize] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u as VertexId);
        for (v, e) in adj.arcs(u) {
            if !seen[v] {
                seen[v] = true;
                dist.distances[v] = dist.distances[u] + 1.0;
                dist.predecessors[v] = Some(e as EdgeId);
                queue.push_back(v);
            }
        }
    }
    Ok((order, dist))
}

/// Depth-first preorder from `root`.
pub fn dfs(g: &Graph, root: VertexId) -> Result<Vec<VertexId>> {
    g.check_vertex(root)?;
    let adj = Adjacency::forward(g);
    let mut seen = vec![false; adj.len()];
    let mut order = vec![root];
    seen[root as usize] = true;
    let mut stack = vec![(root as usize, 0usize)];
    while let Some((u, pos)) = stack.last_mut() {
        let nbrs = adj.neighbors(*u);
        match nbrs[*pos..].iter().position(|&v| !seen[v]) {
            Some(off) => {
                let v = nbrs[*pos + off];
                *pos += off + 1;
                seen[v] = true;
                order.push(v as VertexId);
                stack.push((v, 0));
            }
            None => {
                stack.pop();
            }
        }
    }
    Ok(order)
}

/// Kahn's algorithm, always taking the smallest available vertex.
pub fn topological_sort(g: &Graph) -> Result<Vec<VertexId>> {
    if !g.is_directed() {
        return Err(Error::RequiresDirected);
    }
    let n = g.vertex_count() as usize;
    let adj = Adjacency::new(g, Mode::Out);
    let mut indeg = vec![0usize; n];
    for &t in g.targets() {
        indeg[t as usize] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u as VertexId);
        for &v in adj.neighbors(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every leftover vertex has a leftover in-neighbor; walking backwards
    // must revisit a vertex, and the first repeat lies on a cycle.
    let inn = Adjacency::new(g, Mode::In);
    let mut cur = (0..n).find(|&v| indeg[v] > 0).unwrap();
    let mut visited = vec![false; n];
    while !visited[cur] {
        visited[cur] = true;
        cur = *inn
            .neighbors(cur)
            .iter()
            .find(|&&p| indeg[p] > 0)
            .expect("leftover vertex has a leftover predecessor");
    }
    Err(Error::Cycle {
        vertex: cur as VertexId,
    })
}

/// Dijkstra distances from `source`.
pub fn dijkstra(g: &Graph, source: VertexId, weights: Option<&[f64]>) -> Result<DistanceMap> {
    g.check_vertex(source)?;
    let w = weights::resolve(g, weights, true)?;
    let adj = Adjacency::forward(g);
    let mut map = DistanceMap::empty(g, source);
    let mut done = vec![false; adj.len()];
    let mut heap = BinaryHeap::from([Reverse((Total(0.0), source as usize))]);
    while let Some(Reverse((Total(d), u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for (v, e) in adj.arcs(u) {
            let nd = d + w[e];
            if nd < map.distances[v] {
                map.distances[v] = nd;
                map.predecessors[v] = Some(e as EdgeId);
                heap.push(Reverse((Total(nd), v)));
            }
        }
    }
    Ok(map)
}

/// Search state shared by single and k-shortest path queries.
struct LexSearch<'a> {
    adj: &'a Adjacency,
    w: &'a [f64],
    has_zero: bool,
}

/// Vertices and arcs excluded from a spur search.
#[derive(Default)]
struct Bans {
    vertices: Vec<bool>,
    arcs: HashSet<(usize, usize)>,
}

impl Bans {
    fn vertex(&self, v: usize) -> bool {
        self.vertices.get(v).copied().unwrap_or(false)
    }
}

impl LexSearch<'_> {
    /// Minimum-weight path from `s` to `t` with the lexicographically
    /// smallest vertex sequence among ties. Distances start at `offset`.
    fn run(
        &self,
        s: usize,
        t: usize,
        offset: f64,
        bans: &Bans,
    ) -> Option<(Vec<usize>, Vec<usize>, f64)> {
        let n = self.adj.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        dist[s] = offset;
        let mut heap = BinaryHeap::from([Reverse((Total(offset), s))]);
        while let Some(Reverse((Total(d), u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for (v, e) in self.adj.arcs(u) {
                if bans.vertex(v) || bans.arcs.contains(&(u, v)) {
                    continue;
                }
                let nd = d + self.w[e];
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((Total(nd), v)));
                }
            }
        }
        if !dist[t].is_finite() {
            return None;
        }
        if s == t {
            return Some((vec![s], Vec::new(), offset));
        }

        let tight = |u: usize, v: usize, e: usize| {
            dist[u].is_finite()
                && !bans.vertex(v)
                && !bans.arcs.contains(&(u, v))
                && dist[u] + self.w[e] == dist[v]
        };
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for u in 0..n {
            if bans.vertex(u) && u != s {
                continue;
            }
            for (v, e) in self.adj.arcs(u) {
                if tight(u, v, e) {
                    rev[v].push(u);
                }
            }
        }
        let reach_avoiding = |blocked: &[bool]| {
            let mut reach = vec![false; n];
            let mut queue = VecDeque::from([t]);
            reach[t] = true;
            while let Some(v) = queue.pop_front() {
                for &u in &rev[v] {
                    if !reach[u] && !blocked[u] {
                        reach[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            reach
        };

        let mut visited = vec![false; n];
        let mut reach = reach_avoiding(&visited);
        let mut vertices = vec![s];
        let mut edges = Vec::new();
        let mut u = s;
        visited[s] = true;
        while u != t {
            if self.has_zero {
                reach = reach_avoiding(&visited);
            }
            let (v, e) = self
                .adj
                .arcs(u)
                .find(|&(v, e)| !visited[v] && reach[v] && tight(u, v, e))
                .expect("a tight continuation to the target exists");
            visited[v] = true;
            vertices.push(v);
            edges.push(e);
            u = v;
        }
        Some((vertices, edges, dist[t]))
    }
}

fn to_result(vertices: Vec<usize>, edges: Vec<usize>, w: &[f64]) -> PathResult {
    let total_weight = edges.iter().fold(0.0, |acc, &e| acc + w[e]);
    PathResult {
        vertices: vertices.into_iter().map(|v| v as VertexId).collect(),
        edges: edges.into_iter().map(|e| e as EdgeId).collect(),
        total_weight,
    }
}

/// Minimum-weight path from `s` to `t`, or `None` when `t` is unreachable.
pub fn shortest_path(
    g: &Graph,
    s: VertexId,
    t: VertexId,
    weights: Option<&[f64]>,
) -> Result<Option<PathResult>> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let w = weights::resolve(g, weights, true)?;
    if s == t {
        return Ok(Some(PathResult::trivial(s)));
    }
    let adj = Adjacency::forward(g);
    let search = LexSearch {
        adj: &adj,
        w: &w,
        has_zero: w.contains(&0.0),
    };
    Ok(search
        .run(s as usize, t as usize, 0.0, &Bans::default())
        .map(|(vs, es, _)| to_result(vs, es, &w)))
}

/// Yen's algorithm: up to `k` loopless paths from `s` to `t` in
/// non-decreasing weight, ties broken by vertex sequence.
///
/// Paths are distinguished by their vertex sequence; between two
/// consecutive vertices the cheapest (then lowest-id) edge is used.
pub fn k_shortest_paths(
    g: &Graph,
    s: VertexId,
    t: VertexId,
    k: usize,
    weights: Option<&[f64]>,
) -> Result<Vec<PathResult>> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let w = weights::resolve(g, weights, true)?;
    if s == t {
        return Ok(vec![PathResult::trivial(s)]);
    }
    let adj = Adjacency::forward(g);
    let search = LexSearch {
        adj: &adj,
        w: &w,
        has_zero: w.contains(&0.0),
    };
    let (s, t) = (s as usize, t as usize);
    let n = adj.len();

    let Some(first) = search.run(s, t, 0.0, &Bans::default()) else {
        return Ok(Vec::new());
    };
    let mut accepted: Vec<(Vec<usize>, Vec<usize>)> = vec![(first.0, first.1)];
    let mut known: HashSet<Vec<usize>> = HashSet::from([accepted[0].0.clone()]);
    // keyed by (weight, vertex sequence) so the minimum is the next path
    let mut candidates: BTreeMap<(Total, Vec<usize>), Vec<usize>> = BTreeMap::new();

    while accepted.len() < k {
        let (prev_vs, prev_es) = accepted.last().unwrap().clone();
        let mut root_weight = 0.0;
        for i in 0..prev_vs.len() - 1 {
            let spur = prev_vs[i];
            let root = &prev_vs[..=i];
            let mut bans = Bans {
                vertices: vec![false; n],
                arcs: HashSet::new(),
            };
            for &v in &root[..i] {
                bans.vertices[v] = true;
            }
            for (vs, _) in &accepted {
                if vs.len() > i + 1 && &vs[..=i] == root {
                    bans.arcs.insert((vs[i], vs[i + 1]));
                }
            }
            if let Some((spur_vs, spur_es, total)) = search.run(spur, t, root_weight, &bans) {
                let mut vs = root[..i].to_vec();
                vs.extend(spur_vs);
                if !known.contains(&vs) {
                    let mut es = prev_es[..i].to_vec();
                    es.extend(spur_es);
                    known.insert(vs.clone());
                    candidates.insert((Total(total), vs), es);
                }
            }
            root_weight += w[prev_es[i]];
        }
        match candidates.pop_first() {
            Some(((_, vs), es)) => accepted.push((vs, es)),
            None => break,
        }
    }
    Ok(accepted
        .into_iter()
        .map(|(vs, es)| to_result(vs, es, &w))
        .collect())
}
