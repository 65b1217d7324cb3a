//! Multihypergraphs and the basic constructions on them: complete hosts,
//! amalgamated hosts, shrinking (`G - V`) and restriction (`G \ V`).

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::binom::binom;
use crate::edge::{Edge, VertexId};
use crate::error::{Error, Result};

/// A hypergraph with an explicit vertex set and a multiset of multiset edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiHypergraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<Edge, u64>,
}

impl MultiHypergraph {
    pub fn new(vertices: BTreeSet<VertexId>) -> MultiHypergraph {
        MultiHypergraph {
            vertices,
            edges: BTreeMap::new(),
        }
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &BTreeMap<Edge, u64> {
        &self.edges
    }

    pub fn insert_edge(&mut self, e: Edge, mult: u64) {
        if mult > 0 {
            *self.edges.entry(e).or_insert(0) += mult;
        }
    }

    pub fn mult(&self, e: &Edge) -> u64 {
        self.edges.get(e).copied().unwrap_or(0)
    }

    /// Total number of edge instances.
    pub fn total_edges(&self) -> u64 {
        self.edges.values().sum()
    }

    /// Occurrences of `v` over all edge instances, counting multiplicity
    /// within an edge.
    pub fn degree(&self, v: VertexId) -> u64 {
        self.edges
            .iter()
            .map(|(e, &m)| e.mult_of(v) as u64 * m)
            .sum()
    }
}

/// The complete h-uniform hypergraph on vertex set `[1, n]`.
pub fn complete(n: u32, h: u32) -> Result<MultiHypergraph> {
    if h == 0 || h > n {
        return Err(Error::InvalidParameters(format!(
            "complete({n},{h}) requires 1 <= h <= n"
        )));
    }
    let vertices: BTreeSet<VertexId> = (1..=n).map(VertexId).collect();
    let mut g = MultiHypergraph::new(vertices);
    for combo in (1..=n).combinations(h as usize) {
        g.insert_edge(Edge::from_set(combo.into_iter().map(VertexId)), 1);
    }
    Ok(g)
}

/// The amalgamation of `K_n^h` obtained by merging `n - m` vertices into `u`:
/// all h-subsets of `[1, m]` once, plus `C(n-m, i)` copies of `{u^i} ∪ W` for
/// each `i` in `[1, h]` and each `(h-i)`-subset `W` of `[1, m]`.
pub fn amalgamate(n: u32, m: u32, h: u32) -> Result<MultiHypergraph> {
    if h == 0 || h > m || m >= n {
        return Err(Error::InvalidParameters(format!(
            "amalgamate({n},{m},{h}) requires 1 <= h <= m < n"
        )));
    }
    let mut vertices: BTreeSet<VertexId> = (1..=m).map(VertexId).collect();
    vertices.insert(VertexId::AMALGAM);
    let mut g = MultiHypergraph::new(vertices);
    for combo in (1..=m).combinations(h as usize) {
        g.insert_edge(Edge::from_set(combo.into_iter().map(VertexId)), 1);
    }
    for i in 1..=h {
        let copies = binom((n - m) as u64, i as u64);
        if copies == 0 {
            continue;
        }
        let base = std::iter::repeat(VertexId::AMALGAM).take(i as usize);
        for combo in (1..=m).combinations((h - i) as usize) {
            let e = Edge::from_occurrences(base.clone().chain(combo.into_iter().map(VertexId)));
            g.insert_edge(e, copies);
        }
    }
    Ok(g)
}

/// `G - V`: delete the vertices of `V` from every edge; images that become
/// empty are dropped.
pub fn shrink(g: &MultiHypergraph, v: &BTreeSet<VertexId>) -> MultiHypergraph {
    let vertices: BTreeSet<VertexId> = g.vertices().difference(v).copied().collect();
    let mut out = MultiHypergraph::new(vertices);
    for (e, &m) in g.edges() {
        if let Some(image) = e.without_vertices(v) {
            out.insert_edge(image, m);
        }
    }
    out
}

/// `G \ V`: same vertex set, keep only the edges not fully inside `V`.
pub fn restrict(g: &MultiHypergraph, v: &BTreeSet<VertexId>) -> MultiHypergraph {
    let mut out = MultiHypergraph::new(g.vertices().clone());
    for (e, &m) in g.edges() {
        if !e.is_inside(v) {
            out.insert_edge(e.clone(), m);
        }
    }
    out
}
