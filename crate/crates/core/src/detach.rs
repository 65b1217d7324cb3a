//! Detachment of a single amalgamated vertex: split `u` into `g_u`
//! subvertices so that every color class stays r-regular and the result is
//! the simple complete host.
//!
//! The split is performed one subvertex at a time. Extracting a subvertex is
//! a quota-constrained integral assignment: each color must hand the new
//! vertex exactly `r` of its edge copies through `u`, each class `(u^j, W)`
//! must hand over `M * j / s` copies in total, and each (color, class) cell
//! stays within floor/ceil of its proportional share. The assignment is
//! solved as a feasible integral flow after rounding the proportional
//! fractional solution.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::binom::binom;
use crate::edge::{Edge, VertexId};
use crate::error::{Error, Result};
use crate::flow::Dinic;

/// Aggregate ledger checks are run after every split while the instance
/// stays at desk scale.
const LEDGER_CHECK_LIMIT: u64 = 4096;

/// A colored amalgamated hypergraph handed to the detacher: the fixed
/// vertices (each with g = 1), the uniformity and regularity targets, and
/// the color classes over edges that may contain `u`.
#[derive(Clone, Debug)]
pub struct AmalgamColoring {
    pub fixed: BTreeSet<VertexId>,
    pub h: u32,
    pub r: u64,
    pub classes: Vec<BTreeMap<Edge, u64>>,
}

/// The amalgamation map restricted to one merged vertex: split `u` into
/// `labels.len()` subvertices carrying the given labels.
#[derive(Clone, Debug)]
pub struct DetachPlan {
    pub labels: Vec<VertexId>,
}

impl DetachPlan {
    pub fn g_u(&self) -> u32 {
        self.labels.len() as u32
    }
}

/// In-flight state of a detachment.
pub struct SplitState {
    r: u64,
    /// Subvertices still merged inside `u`.
    s: u32,
    fixed: BTreeSet<VertexId>,
    h: u32,
    /// Per color, the edges still containing `u`.
    u_classes: Vec<BTreeMap<Edge, u64>>,
    /// Per color, the fully detached edges.
    done: Vec<BTreeMap<Edge, u64>>,
    /// Vertices materialized so far.
    materialized: Vec<VertexId>,
}

struct SplitInfeasible;

impl SplitState {
    fn new(input: &AmalgamColoring, g_u: u32) -> SplitState {
        let mut u_classes = Vec::with_capacity(input.classes.len());
        let mut done = Vec::with_capacity(input.classes.len());
        for class in &input.classes {
            let mut us = BTreeMap::new();
            let mut rest = BTreeMap::new();
            for (e, &m) in class {
                if e.amalgam_mult() > 0 {
                    us.insert(e.clone(), m);
                } else {
                    rest.insert(e.clone(), m);
                }
            }
            u_classes.push(us);
            done.push(rest);
        }
        SplitState {
            r: input.r,
            s: g_u,
            fixed: input.fixed.clone(),
            h: input.h,
            u_classes,
            done,
            materialized: Vec::new(),
        }
    }

    pub fn remaining(&self) -> u32 {
        self.s
    }

    fn u_copy_total(&self) -> u64 {
        self.u_classes.iter().flat_map(|c| c.values()).sum()
    }

    /// Extracts one new vertex `v` from `u`. Fails only when the quota flow
    /// is infeasible; the caller restarts with a fresh seed.
    pub fn split_once(&mut self, v: VertexId, seed: u64, shuffle: bool) -> Result<()> {
        self.try_split(v, seed, shuffle)
            .map_err(|SplitInfeasible| Error::SearchExhausted {
                split_index: self.materialized.len(),
                restarts: 0,
            })
    }

    fn try_split(
        &mut self,
        v: VertexId,
        seed: u64,
        shuffle: bool,
    ) -> std::result::Result<(), SplitInfeasible> {
        let s = self.s as u64;
        assert!(s >= 2, "split requires at least two merged subvertices");

        // Class index: (j, W) keyed by the edge itself, ids assigned in
        // deterministic scan order.
        let mut class_id: HashMap<&Edge, usize> = HashMap::new();
        let mut class_total: Vec<u64> = Vec::new();
        let mut class_j: Vec<u64> = Vec::new();
        // cells: (color, class, multiplicity)
        let mut cells: Vec<(usize, usize, u64)> = Vec::new();
        for (color, class) in self.u_classes.iter().enumerate() {
            for (e, &m) in class {
                let next = class_total.len();
                let id = *class_id.entry(e).or_insert(next);
                if id == next {
                    class_total.push(0);
                    class_j.push(e.amalgam_mult() as u64);
                }
                class_total[id] += m;
                cells.push((color, id, m));
            }
        }
        let num_classes = class_total.len();
        let k = self.u_classes.len();

        // (q2) exact class quotas
        let mut class_demand = vec![0u64; num_classes];
        for c in 0..num_classes {
            let num = class_total[c] * class_j[c];
            assert!(
                num % s == 0,
                "ledger corrupt: class quota {num}/{s} not integral"
            );
            class_demand[c] = num / s;
        }

        // (q3) floor/ceil rounding of the proportional share per cell
        let mut lo = vec![0u64; cells.len()];
        let mut fractional = vec![false; cells.len()];
        let mut row_residual = vec![self.r as i64; k];
        let mut col_residual: Vec<i64> = class_demand.iter().map(|&d| d as i64).collect();
        for (idx, &(color, class, mult)) in cells.iter().enumerate() {
            let num = mult * class_j[class];
            lo[idx] = num / s;
            fractional[idx] = num % s != 0;
            row_residual[color] -= lo[idx] as i64;
            col_residual[class] -= lo[idx] as i64;
        }
        if row_residual.iter().any(|&x| x < 0) || col_residual.iter().any(|&x| x < 0) {
            return Err(SplitInfeasible);
        }

        // Feasible flow on colors x classes for the fractional residue.
        let source = k + num_classes;
        let sink = source + 1;
        let mut net = Dinic::new(sink + 1);
        let mut need = 0i64;
        for (color, &res) in row_residual.iter().enumerate() {
            if res > 0 {
                net.add_edge(source, color, res);
                need += res;
            }
        }
        for (class, &res) in col_residual.iter().enumerate() {
            if res > 0 {
                net.add_edge(k + class, sink, res);
            }
        }
        let mut order: Vec<usize> = (0..cells.len()).collect();
        if shuffle {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            order.shuffle(&mut rng);
        }
        let mut cell_arc: Vec<Option<usize>> = vec![None; cells.len()];
        for &idx in &order {
            if fractional[idx] {
                let (color, class, _) = cells[idx];
                cell_arc[idx] = Some(net.add_edge(color, k + class, 1));
            }
        }
        if net.max_flow(source, sink) < need {
            return Err(SplitInfeasible);
        }

        // Apply the chosen assignment: move n copies per cell from (u^j, W)
        // to (u^(j-1), W ∪ {v}). Cells hold class ids, not edge keys, so
        // rescan the classes in the same deterministic order used above.
        let mut cursor = 0usize;
        let mut final_moves: Vec<(usize, Edge, u64)> = Vec::new();
        for (color, class) in self.u_classes.iter().enumerate() {
            for (e, _) in class {
                let idx = cursor;
                cursor += 1;
                debug_assert_eq!(cells[idx].0, color);
                let n = lo[idx] + cell_arc[idx].map_or(0, |a| net.flow(a) as u64);
                if n > 0 {
                    final_moves.push((color, e.clone(), n));
                }
            }
        }

        for (color, e, n) in final_moves {
            let class = &mut self.u_classes[color];
            let slot = class.get_mut(&e).expect("cell edge vanished");
            assert!(*slot >= n);
            *slot -= n;
            if *slot == 0 {
                class.remove(&e);
            }
            let detached = e.replace_one(VertexId::AMALGAM, v);
            if detached.amalgam_mult() == 0 {
                *self.done[color].entry(detached).or_insert(0) += n;
            } else {
                *class.entry(detached).or_insert(0) += n;
            }
        }

        self.s -= 1;
        self.materialized.push(v);
        Ok(())
    }

    /// Verifies the aggregate ledger: for every live class `(u^j, W)` the
    /// total multiplicity over colors equals `C(s, j)`, and every expected
    /// pattern is present.
    fn check_ledger(&self) -> Result<()> {
        let s = self.s as u64;
        let mut agg: BTreeMap<&Edge, u64> = BTreeMap::new();
        for class in &self.u_classes {
            for (e, &m) in class {
                *agg.entry(e).or_insert(0) += m;
            }
        }
        let mut pattern_counts = vec![0u64; self.h as usize + 1];
        for (e, tot) in &agg {
            let j = e.amalgam_mult() as u64;
            let expect = binom(s, j);
            if *tot != expect {
                return Err(Error::Internal(format!(
                    "ledger: class {e} has total {tot}, expected C({s},{j}) = {expect}"
                )));
            }
            pattern_counts[j as usize] += 1;
        }
        let base = self.fixed.len() as u64 + self.materialized.len() as u64;
        for j in 1..=self.h as u64 {
            let expect = if binom(s, j) > 0 {
                binom(base, self.h as u64 - j)
            } else {
                0
            };
            if pattern_counts[j as usize] != expect {
                return Err(Error::Internal(format!(
                    "ledger: {} patterns of type u^{j}, expected {expect}",
                    pattern_counts[j as usize]
                )));
            }
        }
        Ok(())
    }

    /// Replaces the final remaining subvertex of `u` by `label`.
    fn finalize(mut self, label: VertexId) -> Result<Vec<BTreeMap<Edge, u64>>> {
        assert_eq!(self.s, 1);
        for (color, class) in self.u_classes.iter().enumerate() {
            for (e, &m) in class {
                if e.amalgam_mult() != 1 {
                    return Err(Error::Internal(format!(
                        "finalize: edge {e} still holds u^{}",
                        e.amalgam_mult()
                    )));
                }
                let detached = e.replace_one(VertexId::AMALGAM, label);
                *self.done[color].entry(detached).or_insert(0) += m;
            }
        }
        Ok(self.done)
    }
}

/// Checks the detachment contract: per class, degree `r` at every
/// fixed vertex and `r * g_u` at `u`; aggregated over colors,
/// `mult(u^i, W) = C(g_u, i)` for every type and pattern.
pub(crate) fn contract_check(input: &AmalgamColoring, plan: &DetachPlan) -> Result<()> {
    let g = plan.g_u() as u64;
    let r = input.r;
    for (i, class) in input.classes.iter().enumerate() {
        let mut degs: BTreeMap<VertexId, u64> = BTreeMap::new();
        for (e, &m) in class {
            if e.size() != input.h {
                return Err(Error::InvalidInput(format!(
                    "color {}: edge {e} has size {}, host is {}-uniform",
                    i + 1,
                    e.size(),
                    input.h
                )));
            }
            for &(v, c) in e.slots() {
                if !v.is_amalgam() && !input.fixed.contains(&v) {
                    return Err(Error::InvalidInput(format!(
                        "color {}: edge {e} uses unknown vertex {v}",
                        i + 1
                    )));
                }
                *degs.entry(v).or_insert(0) += c as u64 * m;
            }
        }
        for &v in &input.fixed {
            let d = degs.get(&v).copied().unwrap_or(0);
            if d != r {
                return Err(Error::InvalidInput(format!(
                    "color {}: deg({v}) = {d}, expected r = {r}",
                    i + 1
                )));
            }
        }
        let du = degs.get(&VertexId::AMALGAM).copied().unwrap_or(0);
        if du != r * g {
            return Err(Error::InvalidInput(format!(
                "color {}: deg(u) = {du}, expected r*g = {}",
                i + 1,
                r * g
            )));
        }
    }

    let mut agg: BTreeMap<&Edge, u64> = BTreeMap::new();
    for class in &input.classes {
        for (e, &m) in class {
            if e.amalgam_mult() > 0 {
                *agg.entry(e).or_insert(0) += m;
            }
        }
    }
    let mut pattern_counts = vec![0u64; input.h as usize + 1];
    for (e, tot) in &agg {
        let j = e.amalgam_mult() as u64;
        let expect = binom(g, j);
        if *tot != expect {
            return Err(Error::InvalidInput(format!(
                "mult(u^{j}, {e}) = {tot} aggregated, expected C({g},{j}) = {expect}"
            )));
        }
        pattern_counts[j as usize] += 1;
    }
    for j in 1..=input.h as u64 {
        let expect = if binom(g, j) > 0 {
            binom(input.fixed.len() as u64, input.h as u64 - j)
        } else {
            0
        };
        if pattern_counts[j as usize] != expect {
            return Err(Error::InvalidInput(format!(
                "{} patterns of type u^{j} present, expected {expect}",
                pattern_counts[j as usize]
            )));
        }
    }
    Ok(())
}

/// Splits `u` into `plan.labels`, returning the color classes of the simple
/// detached hypergraph. Per-split infeasibility triggers seeded restarts up
/// to `restart_budget` before failing with `SearchExhausted`.
pub fn detach(
    input: &AmalgamColoring,
    plan: &DetachPlan,
    seed: u64,
    restart_budget: u32,
) -> Result<Vec<BTreeMap<Edge, u64>>> {
    if plan.labels.is_empty() {
        return Err(Error::InvalidInput("detach plan has no labels".into()));
    }
    contract_check(input, plan)?;
    let g_u = plan.g_u();
    let mut state = SplitState::new(input, g_u);
    let desk_scale = state.u_copy_total() <= LEDGER_CHECK_LIMIT;

    for (idx, &label) in plan.labels.iter().enumerate().take(g_u as usize - 1) {
        let mut attempt = 0u32;
        loop {
            let split_seed = seed
                ^ (idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
                ^ ((attempt as u64) << 32);
            // try_split leaves the state untouched on failure, so retrying
            // with fresh tie-breaking needs no checkpoint.
            match state.try_split(label, split_seed, attempt > 0) {
                Ok(()) => break,
                Err(SplitInfeasible) => {
                    attempt += 1;
                    if attempt > restart_budget {
                        return Err(Error::SearchExhausted {
                            split_index: idx,
                            restarts: restart_budget,
                        });
                    }
                }
            }
        }
        if desk_scale {
            state.check_ledger()?;
        }
    }
    state.finalize(*plan.labels.last().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_detachment_relabels_only() {
        // g_u = 1: the total amalgamation of K_1^1 — one class, one copy
        // of {u}; detaching only renames u to its single label.
        let classes = vec![BTreeMap::from([(
            Edge::from_occurrences([VertexId::AMALGAM]),
            1u64,
        )])];
        let input = AmalgamColoring {
            fixed: BTreeSet::new(),
            h: 1,
            r: 1,
            classes,
        };
        let plan = DetachPlan {
            labels: vec![VertexId(1)],
        };
        let out = detach(&input, &plan, 0, 4).unwrap();
        assert_eq!(out[0].get(&Edge::from_set([VertexId(1)])), Some(&1));
    }

    #[test]
    fn contract_violations_are_rejected() {
        // deg(u) wrong: one class with a single copy of {u^3} but g = 6, r = 1
        let classes = vec![BTreeMap::from([(
            Edge::from_occurrences([VertexId::AMALGAM; 3]),
            1u64,
        )])];
        let input = AmalgamColoring {
            fixed: BTreeSet::new(),
            h: 3,
            r: 1,
            classes,
        };
        let plan = DetachPlan {
            labels: (1..=6).map(VertexId).collect(),
        };
        assert!(matches!(
            detach(&input, &plan, 0, 4),
            Err(Error::InvalidInput(_))
        ));
    }
}
