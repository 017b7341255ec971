//! Flat adjacency views built once per algorithm call.

use crate::graph::{Graph, Mode};

/// CSR view of `(neighbor, edge id)` arcs, ordered by neighbor then edge.
#[derive(Debug, Clone)]
pub(crate) struct Adjacency {
    offsets: Vec<usize>,
    nbrs: Vec<usize>,
    eids: Vec<usize>,
}

impl Adjacency {
    /// Arcs followed when traversing `g` in `mode` (undirected graphs always
    /// use both directions).
    pub fn new(g: &Graph, mode: Mode) -> Self {
        let n = g.vertex_count() as usize;
        let mut offsets = Vec::with_capacity(n + 1);
        let mut nbrs = Vec::new();
        let mut eids = Vec::new();
        offsets.push(0);
        for v in 0..n {
            for (u, e) in g.incident_pairs_unchecked(v, mode) {
                nbrs.push(u as usize);
                eids.push(e as usize);
            }
            offsets.push(nbrs.len());
        }
        Adjacency {
            offsets,
            nbrs,
            eids,
        }
    }

    /// Arcs of a directed graph traversed out-wise, or of an undirected
    /// graph in both directions.
    pub fn forward(g: &Graph) -> Self {
        Self::new(g, Mode::Out)
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn arcs(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.nbrs[r.clone()]
            .iter()
            .copied()
            .zip(self.eids[r].iter().copied())
    }
}

/// Simple undirected adjacency: loops dropped, parallel edges collapsed,
/// neighbor lists sorted ascending.
pub(crate) fn simple_undirected(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count() as usize;
    let mut lists = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        if u != v {
            lists[u as usize].push(v as usize);
            lists[v as usize].push(u as usize);
        }
    }
    for l in &mut lists {
        l.sort_unstable();
        l.dedup();
    }
    lists
}
