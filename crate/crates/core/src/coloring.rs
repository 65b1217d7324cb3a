//! Colorings of a host hypergraph and the bundled `PartialFact` value that
//! every verifier and extender operates on.

use std::collections::{BTreeMap, BTreeSet};

use crate::edge::{Edge, VertexId};
use crate::error::{Error, Result};
use crate::hypergraph::{self, MultiHypergraph};
use crate::params::Params;

/// One edge-multiset per color class plus the uncolored remainder. The
/// disjoint union of the classes and the remainder always equals the host's
/// edge multiset (enforced by [`PartialFact::new`]).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coloring {
    classes: Vec<BTreeMap<Edge, u64>>,
    uncolored: BTreeMap<Edge, u64>,
}

impl Coloring {
    pub fn new(classes: Vec<BTreeMap<Edge, u64>>, uncolored: BTreeMap<Edge, u64>) -> Coloring {
        Coloring { classes, uncolored }
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[BTreeMap<Edge, u64>] {
        &self.classes
    }

    /// Class `i` (0-based); classes beyond the stored list are empty.
    pub fn class(&self, i: usize) -> &BTreeMap<Edge, u64> {
        static EMPTY: BTreeMap<Edge, u64> = BTreeMap::new();
        self.classes.get(i).unwrap_or(&EMPTY)
    }

    pub fn uncolored(&self) -> &BTreeMap<Edge, u64> {
        &self.uncolored
    }

    pub fn class_degree(&self, i: usize, v: VertexId) -> u64 {
        self.class(i)
            .iter()
            .map(|(e, &m)| e.mult_of(v) as u64 * m)
            .sum()
    }

    /// Number of edge instances in class `i`.
    pub fn class_size(&self, i: usize) -> u64 {
        self.class(i).values().sum()
    }

    pub fn total_colored(&self) -> u64 {
        self.classes.iter().flat_map(|c| c.values()).sum()
    }

    /// Per-class filter keeping only the edges fully inside `set`
    /// (restriction to a sub-host).
    pub fn classes_within(&self, set: &BTreeSet<VertexId>) -> Vec<BTreeMap<Edge, u64>> {
        self.classes
            .iter()
            .map(|class| {
                class
                    .iter()
                    .filter(|(e, _)| e.is_inside(set))
                    .map(|(e, &m)| (e.clone(), m))
                    .collect()
            })
            .collect()
    }

    /// Per-class filter dropping the edges fully inside `set`
    /// (restriction to `K_n^h \ V`).
    pub fn classes_not_inside(&self, set: &BTreeSet<VertexId>) -> Vec<BTreeMap<Edge, u64>> {
        self.classes
            .iter()
            .map(|class| {
                class
                    .iter()
                    .filter(|(e, _)| !e.is_inside(set))
                    .map(|(e, &m)| (e.clone(), m))
                    .collect()
            })
            .collect()
    }
}

/// Which host a coloring lives on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HostKind {
    /// `K_n^h`, or `K_m^h` on `[1, m]` inside the ambient `[1, n]` when `m`
    /// is given.
    Complete { m: Option<u32> },
    /// `K_n^h \ V`: edges not fully inside `V`.
    Restrict { missing: BTreeSet<VertexId> },
    /// `K_n^h - V`: edges shrunk through `V`, empty images dropped.
    Pieces { missing: BTreeSet<VertexId> },
    /// The amalgamated host obtained by merging `n - m` vertices into `u`.
    Amalgam { m: u32 },
}

impl HostKind {
    pub fn missing(&self) -> Option<&BTreeSet<VertexId>> {
        match self {
            HostKind::Restrict { missing } | HostKind::Pieces { missing } => Some(missing),
            _ => None,
        }
    }
}

/// A (possibly partial) factorization: parameters, host and coloring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialFact {
    pub params: Params,
    pub kind: HostKind,
    pub host: MultiHypergraph,
    pub coloring: Coloring,
}

impl PartialFact {
    /// Builds the host for `kind` under `params`.
    pub fn host_for(params: Params, kind: &HostKind) -> Result<MultiHypergraph> {
        match kind {
            HostKind::Complete { m: None } => hypergraph::complete(params.n, params.h),
            HostKind::Complete { m: Some(m) } => {
                if *m > params.n {
                    return Err(Error::InvalidParameters(format!(
                        "sub-host size m={m} exceeds n={}",
                        params.n
                    )));
                }
                hypergraph::complete(*m, params.h)
            }
            HostKind::Restrict { missing } => {
                check_missing(params.n, missing)?;
                Ok(hypergraph::restrict(
                    &hypergraph::complete(params.n, params.h)?,
                    missing,
                ))
            }
            HostKind::Pieces { missing } => {
                check_missing(params.n, missing)?;
                Ok(hypergraph::shrink(
                    &hypergraph::complete(params.n, params.h)?,
                    missing,
                ))
            }
            HostKind::Amalgam { m } => hypergraph::amalgamate(params.n, *m, params.h),
        }
    }

    /// Assembles a `PartialFact` from explicit color classes; the uncolored
    /// remainder is computed. Fails when a class holds an edge not in the
    /// host or more copies than the host provides.
    pub fn new(params: Params, kind: HostKind, classes: Vec<BTreeMap<Edge, u64>>) -> Result<PartialFact> {
        let host = PartialFact::host_for(params, &kind)?;
        let mut remaining = host.edges().clone();
        for (i, class) in classes.iter().enumerate() {
            for (e, &m) in class {
                let slot = remaining.get_mut(e).ok_or_else(|| {
                    Error::Validation(format!("color {}: edge {e} is not in the host", i + 1))
                })?;
                if *slot < m {
                    return Err(Error::Validation(format!(
                        "color {}: edge {e} colored {m} times but only {} copies remain",
                        i + 1,
                        *slot
                    )));
                }
                *slot -= m;
            }
        }
        remaining.retain(|_, m| *m > 0);
        Ok(PartialFact {
            params,
            kind,
            host,
            coloring: Coloring::new(classes, remaining),
        })
    }

    /// The sub-host size for `Complete` inputs (`m`, or `n` when absent).
    pub fn sub_host_size(&self) -> u32 {
        match self.kind {
            HostKind::Complete { m: Some(m) } => m,
            _ => self.params.n,
        }
    }
}

fn check_missing(n: u32, missing: &BTreeSet<VertexId>) -> Result<()> {
    for v in missing {
        if v.is_amalgam() || v.0 > n {
            return Err(Error::InvalidParameters(format!(
                "V contains out-of-range vertex {v}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remainder_is_host_minus_classes() {
        let params = Params::new(6, 3, 1).unwrap();
        let e = Edge::from_set([VertexId(1), VertexId(2), VertexId(3)]);
        let pf = PartialFact::new(
            params,
            HostKind::Complete { m: None },
            vec![BTreeMap::from([(e.clone(), 1)])],
        )
        .unwrap();
        assert_eq!(pf.coloring.total_colored(), 1);
        assert_eq!(pf.coloring.uncolored().values().sum::<u64>(), 19);
        assert_eq!(pf.coloring.class_degree(0, VertexId(1)), 1);
        assert_eq!(pf.coloring.class_degree(0, VertexId(6)), 0);
    }

    #[test]
    fn overcoloring_is_rejected() {
        let params = Params::new(6, 3, 1).unwrap();
        let e = Edge::from_set([VertexId(1), VertexId(2), VertexId(3)]);
        let err = PartialFact::new(
            params,
            HostKind::Complete { m: None },
            vec![BTreeMap::from([(e, 2)])],
        );
        assert!(matches!(err, Err(Error::Validation(_))));
    }
}
