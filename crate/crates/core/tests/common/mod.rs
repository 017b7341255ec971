//! Brute-force reference implementations and random graph helpers shared
//! by the integration tests. Everything here favors obviousness over speed.
#![allow(dead_code)]

use graphkit::{Graph, Scope};
use rand::Rng;

pub use graphkit::rng::{seeded, GraphRng};

/// Simple graph: no loops, no parallel edges, each pair kept with
/// probability `p`.
pub fn random_simple(n: u64, p: f64, directed: bool, rng: &mut GraphRng) -> Graph {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.random::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_edges(n, directed, &pairs).unwrap()
}

/// Random spanning tree plus extra pairs with probability `p`.
pub fn random_connected(n: u64, p: f64, rng: &mut GraphRng) -> Graph {
    let mut pairs = Vec::new();
    for v in 1..n {
        pairs.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !pairs.contains(&(u, v)) && rng.random::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_edges(n, false, &pairs).unwrap()
}

/// Arbitrary multigraph: loops and parallel edges allowed.
pub fn random_multigraph(n: u64, m: usize, directed: bool, rng: &mut GraphRng) -> Graph {
    let pairs: Vec<(u64, u64)> = (0..m)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .collect();
    Graph::from_edges(n, directed, &pairs).unwrap()
}

pub fn int_weights(m: u64, hi: u32, rng: &mut GraphRng) -> Vec<f64> {
    (0..m).map(|_| rng.random_range(1..=hi) as f64).collect()
}

/// Directed arc list `(u, v, w, edge id)`; undirected edges appear both ways.
pub fn arcs(g: &Graph, w: &[f64]) -> Vec<(usize, usize, f64, usize)> {
    let mut out = Vec::new();
    for (e, (u, v)) in g.edges().enumerate() {
        out.push((u as usize, v as usize, w[e], e));
        if !g.is_directed() && u != v {
            out.push((v as usize, u as usize, w[e], e));
        }
    }
    out
}

pub fn floyd_warshall(g: &Graph, w: &[f64]) -> Vec<Vec<f64>> {
    let n = g.vertex_count() as usize;
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for (u, v, x, _) in arcs(g, w) {
        if x < d[u][v] {
            d[u][v] = x;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Every simple `s`-`t` path as (total weight, vertex sequence), using the
/// lightest arc between consecutive vertices. Sorted by weight, then
/// sequence.
pub fn all_simple_paths(g: &Graph, w: &[f64], s: usize, t: usize) -> Vec<(f64, Vec<usize>)> {
    let n = g.vertex_count() as usize;
    let mut best = vec![vec![f64::INFINITY; n]; n];
    for (u, v, x, _) in arcs(g, w) {
        if u != v && x < best[u][v] {
            best[u][v] = x;
        }
    }
    let mut out = Vec::new();
    let mut path = vec![s];
    let mut on = vec![false; n];
    on[s] = true;
    fn go(
        best: &[Vec<f64>],
        t: usize,
        path: &mut Vec<usize>,
        on: &mut [bool],
        acc: f64,
        out: &mut Vec<(f64, Vec<usize>)>,
    ) {
        let u = *path.last().unwrap();
        if u == t {
            out.push((acc, path.clone()));
            return;
        }
        for v in 0..best.len() {
            if !on[v] && best[u][v].is_finite() {
                on[v] = true;
                path.push(v);
                go(best, t, path, on, acc + best[u][v], out);
                path.pop();
                on[v] = false;
            }
        }
    }
    go(&best, t, &mut path, &mut on, 0.0, &mut out);
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    out
}

/// Betweenness by explicit shortest-path counting over all ordered pairs:
/// `sum_{s != v != t} sigma_st(v) / sigma_st`, halved when undirected.
/// Requires strictly positive weights.
pub fn betweenness_oracle(g: &Graph, w: &[f64]) -> Vec<f64> {
    let n = g.vertex_count() as usize;
    let d = floyd_warshall(g, w);
    let arcs = arcs(g, w);
    // sigma[s][v]: number of shortest s-v paths (parallel arcs distinct)
    let mut sigma = vec![vec![0f64; n]; n];
    for s in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&v| d[s][v].is_finite()).collect();
        order.sort_by(|&a, &b| d[s][a].total_cmp(&d[s][b]));
        sigma[s][s] = 1.0;
        for &v in &order {
            if v == s {
                continue;
            }
            sigma[s][v] = arcs
                .iter()
                .filter(|&&(a, b, x, _)| b == v && a != v && d[s][a] + x == d[s][v])
                .map(|&(a, _, _, _)| sigma[s][a])
                .sum();
        }
    }
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || !d[s][t].is_finite() {
                continue;
            }
            for v in 0..n {
                if v != s && v != t && d[s][v] + d[v][t] == d[s][t] {
                    bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
    }
    if !g.is_directed() {
        bc.iter_mut().for_each(|x| *x /= 2.0);
    }
    bc
}

/// PageRank as the solution of `(I - d M) x = (1 - d)/n`, where `M` is
/// column-stochastic and dangling columns are uniform, by Gaussian
/// elimination with partial pivoting.
pub fn pagerank_dense(g: &Graph, damping: f64, w: &[f64]) -> Vec<f64> {
    let n = g.vertex_count() as usize;
    let mut out_w = vec![0.0; n];
    let arcs = arcs(g, w);
    for &(u, _, x, _) in &arcs {
        out_w[u] += x;
    }
    let mut m = vec![vec![0.0; n]; n];
    for &(u, v, x, _) in &arcs {
        if out_w[u] > 0.0 {
            m[v][u] += x / out_w[u];
        }
    }
    for u in 0..n {
        if out_w[u] == 0.0 {
            for row in m.iter_mut() {
                row[u] = 1.0 / n as f64;
            }
        }
    }
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n)
                .map(|j| if i == j { 1.0 } else { 0.0 } - damping * m[i][j])
                .collect();
            row.push((1.0 - damping) / n as f64);
            row
        })
        .collect();
    solve(&mut a)
}

/// Solves the augmented system in place.
pub fn solve(a: &mut [Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        a.swap(c, p);
        let pivot = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c {
                let f = row[c] / pivot[c];
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= f * y;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n] / a[i][i]).collect()
}

/// All set partitions of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; n];
    fn go(i: usize, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            cur[i] = c;
            go(i + 1, max.max(c), cur, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    go(1, 0, &mut cur, &mut out);
    out
}

/// Highest modularity over every partition, computed from the textbook
/// per-community formula.
pub fn best_modularity(g: &Graph) -> f64 {
    let n = g.vertex_count() as usize;
    let m = g.edge_count() as f64;
    set_partitions(n)
        .iter()
        .map(|p| {
            let k = *p.iter().max().unwrap() as usize + 1;
            let mut e = vec![0.0; k];
            let mut d = vec![0.0; k];
            for (u, v) in g.edges() {
                let (cu, cv) = (p[u as usize] as usize, p[v as usize] as usize);
                if cu == cv {
                    e[cu] += 1.0;
                }
                d[cu] += 1.0;
                d[cv] += 1.0;
            }
            (0..k)
                .map(|c| e[c] / m - (d[c] / (2.0 * m)).powi(2))
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn adjacency_matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.vertex_count() as usize;
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        if u != v {
            a[u as usize][v as usize] = true;
            a[v as usize][u as usize] = true;
        }
    }
    a
}

fn subset_connected(a: &[Vec<bool>], vs: &[usize]) -> bool {
    let mut seen = vec![false; vs.len()];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..vs.len() {
            if !seen[j] && a[vs[i]][vs[j]] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Motif counts by enumerating every vertex subset; classes follow the
/// library's order, identified by sorted degree sequence.
pub fn motif_oracle(g: &Graph, size: usize) -> Vec<u64> {
    let a = adjacency_matrix(g);
    let classes: Vec<Vec<usize>> = if size == 3 {
        vec![vec![1, 1, 2], vec![2, 2, 2]]
    } else {
        vec![
            vec![1, 1, 1, 3],
            vec![1, 1, 2, 2],
            vec![1, 2, 2, 3],
            vec![2, 2, 2, 2],
            vec![2, 2, 3, 3],
            vec![3, 3, 3, 3],
        ]
    };
    let mut counts = vec![0; classes.len()];
    for vs in combinations(a.len(), size) {
        if !subset_connected(&a, &vs) {
            continue;
        }
        let mut deg: Vec<usize> = vs
            .iter()
            .map(|&u| vs.iter().filter(|&&v| a[u][v]).count())
            .collect();
        deg.sort_unstable();
        let c = classes
            .iter()
            .position(|c| *c == deg)
            .expect("connected shape");
        counts[c] += 1;
    }
    counts
}

/// Clique number by checking every vertex subset.
pub fn brute_clique_number(g: &Graph) -> usize {
    let a = adjacency_matrix(g);
    let n = a.len();
    assert!(n <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if vs.iter().all(|&u| vs.iter().all(|&v| u == v || a[u][v])) {
            best = size;
        }
    }
    best
}

pub fn is_clique(g: &Graph, vs: &[u64]) -> bool {
    let a = adjacency_matrix(g);
    vs.iter()
        .all(|&u| vs.iter().all(|&v| u == v || a[u as usize][v as usize]))
}

/// Rank over GF(2) of edge-incidence vectors.
pub fn gf2_rank(m: usize, sets: &[Vec<u64>]) -> usize {
    let mut rows: Vec<Vec<bool>> = sets
        .iter()
        .map(|s| {
            let mut r = vec![false; m];
            for &e in s {
                r[e as usize] ^= true;
            }
            r
        })
        .collect();
    let mut rank = 0;
    for c in 0..m {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c]) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][c] {
                let pivot = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// True when the edge set forms one simple cycle.
pub fn is_simple_cycle(g: &Graph, edges: &[u64]) -> bool {
    if edges.is_empty() {
        return false;
    }
    let mut deg = std::collections::HashMap::new();
    for &e in edges {
        let (u, v) = g.edge(e);
        if u == v {
            return false;
        }
        *deg.entry(u).or_insert(0) += 1;
        *deg.entry(v).or_insert(0) += 1;
    }
    if deg.values().any(|&d| d != 2) || deg.len() != edges.len() {
        return false;
    }
    let sub = Graph::from_edges(
        g.vertex_count(),
        false,
        &edges.iter().map(|&e| g.edge(e)).collect::<Vec<_>>(),
    )
    .unwrap();
    let start = sub.edge(0).0;
    let (order, _) = graphkit::paths::bfs(&sub, start).unwrap();
    order.len() == deg.len()
}

/// Minimum cycle basis weight: every simple cycle found by checking edge
/// subsets, then greedy independent selection by weight (optimal since
/// independent cycle sets form a matroid).
pub fn min_cycle_basis_weight(g: &Graph, w: &[f64]) -> (usize, f64) {
    let m = g.edge_count() as usize;
    assert!(m <= 20);
    let mut cycles: Vec<(f64, Vec<u64>)> = Vec::new();
    for mask in 1u32..(1 << m) {
        let es: Vec<u64> = (0..m as u64).filter(|&e| mask >> e & 1 == 1).collect();
        if es.len() >= 3 && is_simple_cycle(g, &es) {
            cycles.push((es.iter().map(|&e| w[e as usize]).sum(), es));
        }
    }
    cycles.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut chosen: Vec<Vec<u64>> = Vec::new();
    let mut total = 0.0;
    for (x, c) in cycles {
        chosen.push(c);
        if gf2_rank(m, &chosen) == chosen.len() {
            total += x;
        } else {
            chosen.pop();
        }
    }
    (chosen.len(), total)
}

/// A graph with random attributes in all three scopes.
pub fn random_attributed(rng: &mut GraphRng) -> Graph {
    let n = rng.random_range(0..=100u64);
    let directed = rng.random();
    let mut g = if n == 0 {
        Graph::new(0, directed)
    } else {
        let m = rng.random_range(0..=3 * n as usize);
        random_multigraph(n, m, directed, rng)
    };
    let text = |rng: &mut GraphRng| -> String {
        let alphabet = [
            'a', 'Z', ' ', '"', '\\', '\n', '\t', 'é', '日', '{', '#', '0',
        ];
        (0..rng.random_range(0..8))
            .map(|_| alphabet[rng.random_range(0..alphabet.len())])
            .collect()
    };
    let number = |rng: &mut GraphRng| -> f64 {
        match rng.random_range(0..8) {
            0 => f64::NAN,
            1 => f64::INFINITY,
            2 => -0.0,
            3 => f64::from_bits(
                rng.random::<u64>() & !(0x7ff << 52) | (rng.random_range(1..0x7feu64) << 52),
            ),
            4 => rng.random_range(-1e6..1e6),
            5 => rng.random::<f64>() * 1e-300,
            _ => rng.random_range(-5..5) as f64 / 10.0,
        }
    };
    for scope in Scope::ALL {
        let len = g.scope_len(scope) as usize;
        for i in 0..rng.random_range(0..3) {
            let name = format!("{} {i}\"{}", scope, text(rng));
            match rng.random_range(0..3) {
                0 => {
                    let v: Vec<f64> = (0..len).map(|_| number(rng)).collect();
                    g.set_attribute(scope, &name, v).unwrap();
                }
                1 => {
                    let v: Vec<String> = (0..len).map(|_| text(rng)).collect();
                    g.set_attribute(scope, &name, v).unwrap();
                }
                _ => {
                    let v: Vec<bool> = (0..len).map(|_| rng.random()).collect();
                    g.set_attribute(scope, &name, v).unwrap();
                }
            }
        }
    }
    g
}
