//! The core graph structure.
//!
//! A [`Graph`] is an indexed edge list over contiguous 64-bit vertex ids
//! `0..n`. Edge `e` joins `sources()[e]` and `targets()[e]`. Incidence
//! indices (per-vertex offset tables into edge-id arrays sorted by endpoint)
//! are built lazily on first query and dropped on mutation, so a graph that
//! is only read can be shared between threads freely.

use std::sync::OnceLock;

use crate::attributes::{AttributeTable, Column};
use crate::error::{Error, Result};

pub use crate::attributes::Scope;

pub type VertexId = u64;
pub type EdgeId = u64;

/// Which incident edges a query follows. Ignored for undirected graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    Out,
    In,
    #[default]
    All,
}

#[derive(Debug, Clone)]
struct Incidence {
    out_offsets: Vec<u64>,
    out_edges: Vec<EdgeId>,
    in_offsets: Vec<u64>,
    in_edges: Vec<EdgeId>,
}

/// Directed or undirected multigraph. Self-loops and parallel edges allowed.
#[derive(Debug, Clone)]
pub struct Graph {
    vertex_count: u64,
    directed: bool,
    from: Vec<VertexId>,
    to: Vec<VertexId>,
    attrs: AttributeTable,
    index: OnceLock<Incidence>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.directed == other.directed
            && self.from == other.from
            && self.to == other.to
            && self.attrs == other.attrs
    }
}

/// Number of distinct vertex pairs without loops, or `None` on overflow.
pub fn pair_count(n: u64, directed: bool) -> Option<u64> {
    if n == 0 {
        return Some(0);
    }
    let ordered = n.checked_mul(n - 1)?;
    Some(if directed { ordered } else { ordered / 2 })
}

fn try_vec<T: Clone>(len: usize, value: T) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len).map_err(|_| Error::Allocation {
        bytes: (len as u64).saturating_mul(std::mem::size_of::<T>() as u64),
    })?;
    v.resize(len, value);
    Ok(v)
}

/// Edge ids bucketed by `key`, each bucket ordered by `(other, edge id)`.
fn bucket_edges(n: usize, key: &[VertexId], other: &[VertexId]) -> (Vec<u64>, Vec<EdgeId>) {
    let mut offsets = vec![0u64; n + 1];
    for &k in key {
        offsets[k as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut edges = vec![0 as EdgeId; key.len()];
    for (e, &k) in key.iter().enumerate() {
        let slot = &mut cursor[k as usize];
        edges[*slot as usize] = e as EdgeId;
        *slot += 1;
    }
    for v in 0..n {
        let bucket = &mut edges[offsets[v] as usize..offsets[v + 1] as usize];
        if bucket
            .windows(2)
            .any(|w| other[w[0] as usize] > other[w[1] as usize])
        {
            // stable: ties stay in edge-id order
            bucket.sort_by_key(|&e| other[e as usize]);
        }
    }
    (offsets, edges)
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn new(n: u64, directed: bool) -> Self {
        Graph {
            vertex_count: n,
            directed,
            from: Vec::new(),
            to: Vec::new(),
            attrs: AttributeTable::default(),
            index: OnceLock::new(),
        }
    }

    pub fn from_edges(n: u64, directed: bool, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Graph::new(n, directed);
        g.add_edges(pairs)?;
        Ok(g)
    }

    /// Takes ownership of prebuilt endpoint arrays after validating them.
    pub fn from_edge_arrays(
        n: u64,
        directed: bool,
        from: Vec<VertexId>,
        to: Vec<VertexId>,
    ) -> Result<Self> {
        if from.len() != to.len() {
            return Err(Error::param(format!(
                "endpoint arrays differ in length ({} vs {})",
                from.len(),
                to.len()
            )));
        }
        if let Some(&bad) = from.iter().chain(&to).find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange {
                vertex: bad,
                vertex_count: n,
            });
        }
        Ok(Graph {
            vertex_count: n,
            directed,
            from,
            to,
            attrs: AttributeTable::default(),
            index: OnceLock::new(),
        })
    }

    pub fn vertex_count(&self) -> u64 {
        self.vertex_count
    }

    pub fn edge_count(&self) -> u64 {
        self.from.len() as u64
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn sources(&self) -> &[VertexId] {
        &self.from
    }

    pub fn targets(&self) -> &[VertexId] {
        &self.to
    }

    /// Endpoints of edge `e`.
    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        (self.from[e as usize], self.to[e as usize])
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (VertexId, VertexId)> + '_ {
        self.from.iter().copied().zip(self.to.iter().copied())
    }

    /// Approximate heap footprint of the structure in bytes.
    pub fn heap_bytes(&self) -> u64 {
        let word = std::mem::size_of::<u64>() as u64;
        let mut bytes = 2 * word * self.edge_count();
        if self.index.get().is_some() {
            bytes += 2 * word * (self.vertex_count + 1) + 2 * word * self.edge_count();
        }
        bytes
    }

    pub fn add_vertices(&mut self, count: u64) {
        self.vertex_count += count;
        for col in self.attrs.scope_mut(Scope::Vertex).values_mut() {
            col.extend_missing(count as usize);
        }
        self.index = OnceLock::new();
    }

    /// Appends edges in order. The whole batch is rejected if any endpoint
    /// is out of range. Existing edge attribute columns are padded with
    /// missing values.
    pub fn add_edges(&mut self, pairs: &[(VertexId, VertexId)]) -> Result<()> {
        if let Some(&(u, v)) = pairs
            .iter()
            .find(|&&(u, v)| u >= self.vertex_count || v >= self.vertex_count)
        {
            return Err(Error::VertexOutOfRange {
                vertex: if u >= self.vertex_count { u } else { v },
                vertex_count: self.vertex_count,
            });
        }
        self.from.reserve(pairs.len());
        self.to.reserve(pairs.len());
        for &(u, v) in pairs {
            self.from.push(u);
            self.to.push(v);
        }
        for col in self.attrs.scope_mut(Scope::Edge).values_mut() {
            col.extend_missing(pairs.len());
        }
        self.index = OnceLock::new();
        Ok(())
    }

    /// Builds the incidence index now instead of on first query.
    pub fn build_index(&self) {
        self.incidence();
    }

    /// Fallible variant of [`Graph::build_index`] that reports allocation
    /// failure instead of aborting.
    pub fn try_build_index(&self) -> Result<()> {
        if self.index.get().is_some() {
            return Ok(());
        }
        let n = self.vertex_count as usize;
        let m = self.from.len();
        // probe that the index fits before committing
        let probe: Vec<u64> = try_vec(2 * (n + 1) + 2 * m, 0)?;
        drop(probe);
        self.incidence();
        Ok(())
    }

    fn incidence(&self) -> &Incidence {
        self.index.get_or_init(|| {
            let n = self.vertex_count as usize;
            let (out_offsets, out_edges) = bucket_edges(n, &self.from, &self.to);
            let (in_offsets, in_edges) = bucket_edges(n, &self.to, &self.from);
            Incidence {
                out_offsets,
                out_edges,
                in_offsets,
                in_edges,
            }
        })
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count,
            })
        }
    }

    fn effective_mode(&self, mode: Mode) -> Mode {
        if self.directed {
            mode
        } else {
            Mode::All
        }
    }

    /// Incident `(neighbor, edge)` pairs of `v`, ordered by neighbor then
    /// edge id. In `All` mode a self-loop appears twice.
    pub fn incident_pairs(&self, v: VertexId, mode: Mode) -> Result<Vec<(VertexId, EdgeId)>> {
        self.check_vertex(v)?;
        Ok(self.incident_pairs_unchecked(v as usize, mode))
    }

    pub(crate) fn incident_pairs_unchecked(&self, v: usize, mode: Mode) -> Vec<(VertexId, EdgeId)> {
        let idx = self.incidence();
        let outs = &idx.out_edges[idx.out_offsets[v] as usize..idx.out_offsets[v + 1] as usize];
        let ins = &idx.in_edges[idx.in_offsets[v] as usize..idx.in_offsets[v + 1] as usize];
        let out_iter = outs.iter().map(|&e| (self.to[e as usize], e));
        let in_iter = ins.iter().map(|&e| (self.from[e as usize], e));
        match self.effective_mode(mode) {
            Mode::Out => out_iter.collect(),
            Mode::In => in_iter.collect(),
            Mode::All => {
                let mut merged = Vec::with_capacity(outs.len() + ins.len());
                let (mut a, mut b) = (out_iter.peekable(), in_iter.peekable());
                loop {
                    match (a.peek(), b.peek()) {
                        (Some(x), Some(y)) => {
                            if x <= y {
                                merged.push(a.next().unwrap());
                            } else {
                                merged.push(b.next().unwrap());
                            }
                        }
                        (Some(_), None) => merged.push(a.next().unwrap()),
                        (None, Some(_)) => merged.push(b.next().unwrap()),
                        (None, None) => break,
                    }
                }
                merged
            }
        }
    }

    /// Adjacent vertices of `v` as a sorted multiset.
    pub fn neighbors(&self, v: VertexId, mode: Mode) -> Result<Vec<VertexId>> {
        Ok(self
            .incident_pairs(v, mode)?
            .into_iter()
            .map(|(u, _)| u)
            .collect())
    }

    /// Incident edge ids of `v`, ordered by neighbor id then edge id.
    pub fn incident(&self, v: VertexId, mode: Mode) -> Result<Vec<EdgeId>> {
        Ok(self
            .incident_pairs(v, mode)?
            .into_iter()
            .map(|(_, e)| e)
            .collect())
    }

    pub fn degree(&self, v: VertexId, mode: Mode, count_loops: bool) -> Result<u64> {
        self.check_vertex(v)?;
        Ok(self.degree_unchecked(v as usize, mode, count_loops))
    }

    fn degree_unchecked(&self, v: usize, mode: Mode, count_loops: bool) -> u64 {
        let idx = self.incidence();
        let out = idx.out_offsets[v + 1] - idx.out_offsets[v];
        let inn = idx.in_offsets[v + 1] - idx.in_offsets[v];
        let total = match self.effective_mode(mode) {
            Mode::Out => out,
            Mode::In => inn,
            Mode::All => out + inn,
        };
        if count_loops {
            return total;
        }
        let loops = idx.out_edges[idx.out_offsets[v] as usize..idx.out_offsets[v + 1] as usize]
            .iter()
            .filter(|&&e| self.to[e as usize] == v as u64)
            .count() as u64;
        match self.effective_mode(mode) {
            Mode::All => total - 2 * loops,
            _ => total - loops,
        }
    }

    pub fn degrees(&self, mode: Mode, count_loops: bool) -> Vec<u64> {
        (0..self.vertex_count as usize)
            .map(|v| self.degree_unchecked(v, mode, count_loops))
            .collect()
    }

    /// Removes `vs` and their incident edges. Survivors are renumbered
    /// contiguously in their original relative order.
    pub fn delete_vertices(&self, vs: &[VertexId]) -> Result<Graph> {
        for &v in vs {
            self.check_vertex(v)?;
        }
        let n = self.vertex_count as usize;
        let mut keep = vec![true; n];
        for &v in vs {
            keep[v as usize] = false;
        }
        let mut new_id = vec![u64::MAX; n];
        let mut next = 0u64;
        for v in 0..n {
            if keep[v] {
                new_id[v] = next;
                next += 1;
            }
        }
        let keep_edge: Vec<bool> = self
            .edges()
            .map(|(u, v)| keep[u as usize] && keep[v as usize])
            .collect();
        let (mut from, mut to) = (Vec::new(), Vec::new());
        for (e, (u, v)) in self.edges().enumerate() {
            if keep_edge[e] {
                from.push(new_id[u as usize]);
                to.push(new_id[v as usize]);
            }
        }
        let mut attrs = self.attrs.clone();
        for col in attrs.scope_mut(Scope::Vertex).values_mut() {
            col.retain_mask(&keep);
        }
        for col in attrs.scope_mut(Scope::Edge).values_mut() {
            col.retain_mask(&keep_edge);
        }
        Ok(Graph {
            vertex_count: next,
            directed: self.directed,
            from,
            to,
            attrs,
            index: OnceLock::new(),
        })
    }

    /// Number of entries a column in `scope` must have.
    pub fn scope_len(&self, scope: Scope) -> u64 {
        match scope {
            Scope::Graph => 1,
            Scope::Vertex => self.vertex_count,
            Scope::Edge => self.edge_count(),
        }
    }

    /// Sets or replaces an attribute column.
    pub fn set_attribute(
        &mut self,
        scope: Scope,
        name: &str,
        values: impl Into<Column>,
    ) -> Result<()> {
        let values = values.into();
        let expected = self.scope_len(scope);
        if values.len() as u64 != expected {
            return Err(Error::AttributeLength {
                scope,
                name: name.to_owned(),
                expected,
                actual: values.len() as u64,
            });
        }
        self.attrs.scope_mut(scope).insert(name.to_owned(), values);
        Ok(())
    }

    pub fn attribute(&self, scope: Scope, name: &str) -> Result<&Column> {
        self.attrs.get(scope, name)
    }

    pub fn remove_attribute(&mut self, scope: Scope, name: &str) -> Result<Column> {
        self.attrs
            .scope_mut(scope)
            .remove(name)
            .ok_or_else(|| Error::AttributeNotFound {
                scope,
                name: name.to_owned(),
            })
    }

    pub fn attributes(&self) -> &AttributeTable {
        &self.attrs
    }

    /// A numeric edge column, for use as algorithm weights.
    pub fn edge_weights(&self, name: &str) -> Result<&[f64]> {
        self.attribute(Scope::Edge, name)?
            .as_numeric()
            .ok_or_else(|| Error::AttributeNotNumeric {
                scope: Scope::Edge,
                name: name.to_owned(),
            })
    }
}
