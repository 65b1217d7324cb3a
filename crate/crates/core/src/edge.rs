//! Vertices and multiset edges.
//!
//! An edge is a multiset of vertices: amalgamated hosts contain edges such as
//! `{u^2, 3, 5}` in which the merged vertex `u` occurs twice. Edges are kept
//! in canonical sorted form so that equality, ordering and hashing are
//! structural.

use std::collections::BTreeSet;
use std::fmt;

/// A vertex identifier. Ordinary vertices are 1-based; the reserved id 0
/// denotes the amalgamated vertex `u` of an amalgamated host.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

impl VertexId {
    /// The amalgamated vertex `u`. It sorts before every ordinary vertex.
    pub const AMALGAM: VertexId = VertexId(0);

    pub fn is_amalgam(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_amalgam() {
            write!(f, "u")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// A multiset of vertices in canonical form: slots sorted by vertex id, every
/// multiplicity positive, total size at least 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    slots: Vec<(VertexId, u32)>,
}

impl Edge {
    /// Builds an edge from an arbitrary stream of vertex occurrences.
    pub fn from_occurrences<I: IntoIterator<Item = VertexId>>(iter: I) -> Edge {
        let mut vs: Vec<VertexId> = iter.into_iter().collect();
        vs.sort();
        let mut slots: Vec<(VertexId, u32)> = Vec::new();
        for v in vs {
            match slots.last_mut() {
                Some((w, c)) if *w == v => *c += 1,
                _ => slots.push((v, 1)),
            }
        }
        Edge { slots }
    }

    /// Builds a set edge (all multiplicities 1) from distinct vertices.
    pub fn from_set<I: IntoIterator<Item = VertexId>>(iter: I) -> Edge {
        let e = Edge::from_occurrences(iter);
        debug_assert!(e.is_set());
        e
    }

    pub fn slots(&self) -> &[(VertexId, u32)] {
        &self.slots
    }

    /// Total slot count with multiplicity.
    pub fn size(&self) -> u32 {
        self.slots.iter().map(|&(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Multiplicity of `v` within this edge.
    pub fn mult_of(&self, v: VertexId) -> u32 {
        self.slots
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, c)| c)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.mult_of(v) > 0
    }

    /// True when every vertex occurs exactly once.
    pub fn is_set(&self) -> bool {
        self.slots.iter().all(|&(_, c)| c == 1)
    }

    /// Distinct vertices, ascending.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.slots.iter().map(|&(v, _)| v)
    }

    /// Number of copies of the amalgamated vertex, i.e. the edge's type `u^j`.
    pub fn amalgam_mult(&self) -> u32 {
        self.mult_of(VertexId::AMALGAM)
    }

    /// The edge `e \ V`; `None` when nothing remains.
    pub fn without_vertices(&self, set: &BTreeSet<VertexId>) -> Option<Edge> {
        let slots: Vec<(VertexId, u32)> = self
            .slots
            .iter()
            .filter(|(v, _)| !set.contains(v))
            .copied()
            .collect();
        if slots.is_empty() {
            None
        } else {
            Some(Edge { slots })
        }
    }

    /// Adds `count` further copies of `v`.
    pub fn with_vertex(&self, v: VertexId, count: u32) -> Edge {
        let mut slots = self.slots.clone();
        match slots.iter_mut().find(|(w, _)| *w == v) {
            Some((_, c)) => *c += count,
            None => {
                let pos = slots.partition_point(|&(w, _)| w < v);
                slots.insert(pos, (v, count));
            }
        }
        Edge { slots }
    }

    /// Replaces one occurrence of `from` by one occurrence of `to`.
    pub fn replace_one(&self, from: VertexId, to: VertexId) -> Edge {
        debug_assert!(self.contains(from));
        let mut slots = self.slots.clone();
        if let Some(pos) = slots.iter().position(|&(w, _)| w == from) {
            if slots[pos].1 == 1 {
                slots.remove(pos);
            } else {
                slots[pos].1 -= 1;
            }
        }
        let e = Edge { slots };
        e.with_vertex(to, 1)
    }

    /// Number of distinct vertices shared with `set`, counting edge
    /// multiplicity.
    pub fn intersection_size(&self, set: &BTreeSet<VertexId>) -> u32 {
        self.slots
            .iter()
            .filter(|(v, _)| set.contains(v))
            .map(|&(_, c)| c)
            .sum()
    }

    /// True when every vertex of the edge lies in `set`.
    pub fn is_inside(&self, set: &BTreeSet<VertexId>) -> bool {
        self.slots.iter().all(|(v, _)| set.contains(v))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for &(v, c) in &self.slots {
            for _ in 0..c {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn canonical_form_is_sorted_and_grouped() {
        let e = Edge::from_occurrences([v(3), v(1), v(3), VertexId::AMALGAM]);
        assert_eq!(e.slots(), &[(v(0), 1), (v(1), 1), (v(3), 2)]);
        assert_eq!(e.size(), 4);
        assert_eq!(e.mult_of(v(3)), 2);
        assert!(!e.is_set());
    }

    #[test]
    fn multiset_degree_contributions() {
        // an edge {u^2, x} contributes 2 to u and 1 to x
        let e = Edge::from_occurrences([VertexId::AMALGAM, VertexId::AMALGAM, v(4)]);
        assert_eq!(e.amalgam_mult(), 2);
        assert_eq!(e.mult_of(v(4)), 1);
    }

    #[test]
    fn shrink_and_replace() {
        let e = Edge::from_set([v(1), v(2), v(3)]);
        let set: BTreeSet<VertexId> = [v(2), v(3)].into();
        assert_eq!(e.without_vertices(&set), Some(Edge::from_set([v(1)])));
        let all: BTreeSet<VertexId> = [v(1), v(2), v(3)].into();
        assert_eq!(e.without_vertices(&all), None);

        let f = Edge::from_occurrences([VertexId::AMALGAM, VertexId::AMALGAM, v(5)]);
        let g = f.replace_one(VertexId::AMALGAM, v(7));
        assert_eq!(g, Edge::from_occurrences([VertexId::AMALGAM, v(5), v(7)]));
    }
}
