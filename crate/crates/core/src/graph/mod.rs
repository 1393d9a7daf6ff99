//! Interaction graphs and the stabilizer layer assignment built on them.

mod coloring;
pub(crate) mod io;
mod layers;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

pub use coloring::{edge_color, is_proper_coloring, misra_gries, Coloring};
pub use io::{parse_graph, parse_hypergraph, render_graph, render_hypergraph};
pub use layers::{
    assign_layers, build_stabilizer, orient_layer_pair, stabilizer_set, verify_layer_commutation,
    LayerAssignment, Sign,
};

/// Unordered edge stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: usize,
    hi: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidEdge(a, b));
        }
        Ok(Edge {
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn other(&self, v: usize) -> Option<usize> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }

    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.contains(other.lo) || self.contains(other.hi)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Simple undirected graph on vertices `1..=n_vertices`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InteractionGraph {
    n_vertices: usize,
    edges: BTreeSet<Edge>,
}

impl InteractionGraph {
    pub fn new(n_vertices: usize) -> Self {
        InteractionGraph {
            n_vertices,
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph, merging duplicate edges.
    pub fn from_edges<I>(n_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = InteractionGraph::new(n_vertices);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Inserts an edge; returns false if it was already present.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<bool> {
        let e = Edge::new(a, b)?;
        if e.hi > self.n_vertices || e.lo == 0 {
            return Err(Error::InvalidEdge(a, b));
        }
        Ok(self.edges.insert(e))
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// Degree of vertex `v` at index `v - 1`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices + 1];
        for e in &self.edges {
            deg[e.lo] += 1;
            deg[e.hi] += 1;
        }
        deg.remove(0);
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Sorted neighbour lists indexed by vertex (index 0 unused).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices + 1];
        for e in &self.edges {
            adj[e.lo].push(e.hi);
            adj[e.hi].push(e.lo);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let first = *deg.first()?;
        deg.iter().all(|&d| d == first).then_some(first)
    }
}

/// 4-uniform hypergraph on Majorana indices `1..=n_majorana`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InteractionHypergraph {
    n_majorana: usize,
    hyperedges: Vec<[usize; 4]>,
}

impl InteractionHypergraph {
    pub fn new(n_majorana: usize) -> Self {
        InteractionHypergraph {
            n_majorana,
            hyperedges: Vec::new(),
        }
    }

    /// Adds a hyperedge, stored sorted ascending. Duplicates are kept once.
    pub fn add_hyperedge(&mut self, h: [usize; 4]) -> Result<bool> {
        let mut s = h;
        s.sort_unstable();
        if s[0] == 0 || s[3] > self.n_majorana || s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidHyperedge(h));
        }
        if self.hyperedges.contains(&s) {
            return Ok(false);
        }
        self.hyperedges.push(s);
        Ok(true)
    }

    pub fn from_hyperedges<I>(n_majorana: usize, hyperedges: I) -> Result<Self>
    where
        I: IntoIterator<Item = [usize; 4]>,
    {
        let mut h = InteractionHypergraph::new(n_majorana);
        for e in hyperedges {
            h.add_hyperedge(e)?;
        }
        Ok(h)
    }

    pub fn n_majorana(&self) -> usize {
        self.n_majorana
    }

    pub fn hyperedges(&self) -> &[[usize; 4]] {
        &self.hyperedges
    }

    /// Number of hyperedges containing Majorana `m`, at index `m - 1`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_majorana];
        for h in &self.hyperedges {
            for &m in h {
                deg[m - 1] += 1;
            }
        }
        deg
    }
}

/// Pair split of a sorted hyperedge `(i, j, k, l)` into `(i, j)` and `(k, l)`.
pub fn split_hyperedge(h: [usize; 4]) -> Result<[(usize, usize); 2]> {
    let mut s = h;
    s.sort_unstable();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidHyperedge(h));
    }
    Ok([(s[0], s[1]), (s[2], s[3])])
}

/// Majorana-level pair edges of every hyperedge, merged.
pub fn split_majorana_pairs(h: &InteractionHypergraph) -> Result<BTreeSet<(usize, usize)>> {
    let mut out = BTreeSet::new();
    for &e in h.hyperedges() {
        out.extend(split_hyperedge(e)?);
    }
    Ok(out)
}

/// Site-level stabilizer graph of a hypergraph. Majorana `m` lives on site
/// `ceil(m/2)`; a pair whose two Majoranas share a site needs no stabilizer
/// and contributes no edge.
pub fn split_hyperedges(h: &InteractionHypergraph) -> Result<InteractionGraph> {
    let mut g = InteractionGraph::new(h.n_majorana().div_ceil(2));
    for (a, b) in split_majorana_pairs(h)? {
        let (sa, sb) = (a.div_ceil(2), b.div_ceil(2));
        if sa != sb {
            g.add_edge(sa, sb)?;
        }
    }
    Ok(g)
}

/// Groups edges by color.
pub fn color_classes(coloring: &Coloring) -> BTreeMap<usize, Vec<Edge>> {
    let mut classes: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
    for (&e, &c) in coloring {
        classes.entry(c).or_default().push(e);
    }
    classes
}
