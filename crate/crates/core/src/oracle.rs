//! Exhaustive ground truth at tiny scale: a backtracking extension search
//! and a backtracking detachment. Both are complete within their budgets,
//! so "none" is a proof by exhaustion.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::coloring::{HostKind, PartialFact};
use crate::detach::{contract_check, AmalgamColoring, DetachPlan};
use crate::edge::{Edge, VertexId};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::verify::check_full;

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub time_budget: Duration,
    pub symmetry_pruning: bool,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            node_budget: 1_000_000,
            time_budget: Duration::from_secs(60),
            symmetry_pruning: true,
        }
    }
}

/// Result of an exhaustive search: a witness, a proof of non-existence, or
/// a tripped budget.
#[derive(Clone, Debug)]
pub enum SearchOutcome<T> {
    Found(T),
    None { reason: String },
    Exhausted,
}

impl<T> SearchOutcome<T> {
    pub fn is_none(&self) -> bool {
        matches!(self, SearchOutcome::None { .. })
    }
}

struct ExtendSearch {
    k: usize,
    r: u64,
    h: u32,
    quota: u64,
    classes: Vec<BTreeMap<Edge, u64>>,
    deg: Vec<Vec<u64>>,
    class_size: Vec<u64>,
    /// Uncolored instances, lexicographic; entries may reach multiplicity 0.
    remaining: BTreeMap<Edge, u64>,
    nodes: u64,
    deadline: Instant,
    cfg: SearchConfig,
}

enum Searched {
    Found,
    NoneBelow,
    Budget,
}

impl ExtendSearch {
    fn feasible(&self, color: usize, e: &Edge) -> bool {
        self.class_size[color] < self.quota
            && e.vertices().all(|v| self.deg[color][v.0 as usize] < self.r)
    }

    /// Cheap contradiction tests.  A class with exactly one free slot must
    /// take the edge formed by its degree-deficient vertices; if that edge
    /// is malformed, unavailable, or over-demanded, the branch is dead.
    /// Independently, every remaining edge needs at least one feasible
    /// color.
    fn contradiction(&self) -> bool {
        let mut demand: BTreeMap<Edge, u64> = BTreeMap::new();
        for i in 0..self.k {
            if self.quota - self.class_size[i] != 1 {
                continue;
            }
            let deficient: Vec<VertexId> = (1..self.deg[i].len())
                .filter(|&v| self.deg[i][v] < self.r)
                .map(|v| VertexId(v as u32))
                .collect();
            let total: u64 = deficient
                .iter()
                .map(|v| self.r - self.deg[i][v.0 as usize])
                .sum();
            if total != self.h as u64 || deficient.len() != self.h as usize {
                return true;
            }
            let forced = Edge::from_set(deficient);
            *demand.entry(forced).or_insert(0) += 1;
        }
        if demand
            .iter()
            .any(|(e, &c)| c > self.remaining.get(e).copied().unwrap_or(0))
        {
            return true;
        }
        self.remaining
            .iter()
            .filter(|&(_, &m)| m > 0)
            .any(|(e, _)| !(0..self.k).any(|i| self.feasible(i, e)))
    }

    fn search(&mut self) -> Searched {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget
            || (self.nodes % 1024 == 0 && Instant::now() > self.deadline)
        {
            return Searched::Budget;
        }
        let next = self
            .remaining
            .iter()
            .find(|&(_, &m)| m > 0)
            .map(|(e, _)| e.clone());
        let e = match next {
            Some(e) => e,
            None => return Searched::Found,
        };
        if self.contradiction() {
            return Searched::NoneBelow;
        }
        let mut budget_hit = false;
        let mut tried_empty = false;
        for i in 0..self.k {
            if self.class_size[i] == 0 {
                if self.cfg.symmetry_pruning && tried_empty {
                    continue;
                }
                tried_empty = true;
            }
            if !self.feasible(i, &e) {
                continue;
            }
            *self.remaining.get_mut(&e).unwrap() -= 1;
            *self.classes[i].entry(e.clone()).or_insert(0) += 1;
            self.class_size[i] += 1;
            for v in e.vertices() {
                self.deg[i][v.0 as usize] += 1;
            }
            let sub = self.search();
            match sub {
                Searched::Found => return Searched::Found,
                Searched::Budget => budget_hit = true,
                Searched::NoneBelow => {}
            }
            for v in e.vertices() {
                self.deg[i][v.0 as usize] -= 1;
            }
            self.class_size[i] -= 1;
            let slot = self.classes[i].get_mut(&e).unwrap();
            *slot -= 1;
            if *slot == 0 {
                self.classes[i].remove(&e);
            }
            *self.remaining.get_mut(&e).unwrap() += 1;
            if budget_hit {
                break;
            }
        }
        if budget_hit {
            Searched::Budget
        } else {
            Searched::NoneBelow
        }
    }
}

/// Complete backtracking search for an extension of `input` to an
/// r-factorization of `K_n^h`: lexicographically smallest uncolored edge
/// first, colors ascending, empty classes interchangeable.
pub fn oracle_extend(
    input: &PartialFact,
    n: u32,
    cfg: &SearchConfig,
) -> Result<SearchOutcome<PartialFact>> {
    let (h, r) = (input.params.h, input.params.r);
    let params = match Params::new(n, h, r) {
        Ok(p) => p,
        Err(e) => {
            return Ok(SearchOutcome::None {
                reason: format!("divisibility conditions fail: {e}"),
            })
        }
    };
    let ambient = PartialFact::new(
        params,
        HostKind::Complete { m: None },
        input.coloring.classes().to_vec(),
    )?;
    let k = params.k() as usize;
    let mut classes = ambient.coloring.classes().to_vec();
    classes.resize_with(k, BTreeMap::new);
    let mut search = ExtendSearch {
        k,
        r,
        h,
        quota: params.class_size(),
        deg: (0..k)
            .map(|i| {
                (0..=n as usize)
                    .map(|v| ambient.coloring.class_degree(i, VertexId(v as u32)))
                    .collect()
            })
            .collect(),
        class_size: (0..k).map(|i| ambient.coloring.class_size(i)).collect(),
        classes,
        remaining: ambient.coloring.uncolored().clone(),
        nodes: 0,
        deadline: Instant::now() + cfg.time_budget,
        cfg: *cfg,
    };
    if search.class_size.iter().any(|&s| s > search.quota)
        || search
            .deg
            .iter()
            .any(|row| row.iter().any(|&d| d > r))
    {
        return Ok(SearchOutcome::None {
            reason: "input already exceeds a class quota or degree cap".into(),
        });
    }
    match search.search() {
        Searched::Found => {
            let found = PartialFact::new(params, HostKind::Complete { m: None }, search.classes)?;
            let rep = check_full(&found);
            if !rep.ok() {
                return Err(Error::Internal(format!(
                    "oracle witness failed self-verification: {}",
                    rep.violations[0]
                )));
            }
            Ok(SearchOutcome::Found(found))
        }
        Searched::NoneBelow => Ok(SearchOutcome::None {
            reason: "no extension exists (search space exhausted)".into(),
        }),
        Searched::Budget => Ok(SearchOutcome::Exhausted),
    }
}

// ---------------------------------------------------------------------------
// exhaustive detachment

struct DetachSearch {
    h: u32,
    r: u64,
    nodes: u64,
    deadline: Instant,
    cfg: SearchConfig,
    budget_hit: bool,
}

impl DetachSearch {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget
            || (self.nodes % 1024 == 0 && Instant::now() > self.deadline)
        {
            self.budget_hit = true;
        }
        self.budget_hit
    }

    /// Enumerates integral split matrices: per color, distribute `r` moved
    /// copies over that color's u-edges so that each u-edge's global total
    /// equals mult·j/s, then recurse into the next split.
    fn split(
        &mut self,
        classes: &Vec<BTreeMap<Edge, u64>>,
        labels: &[VertexId],
        s: u64,
    ) -> Option<Vec<BTreeMap<Edge, u64>>> {
        if labels.len() == 1 {
            // final subvertex: rename every remaining u slot
            let mut out = Vec::with_capacity(classes.len());
            for class in classes {
                let mut new_class = BTreeMap::new();
                for (e, &m) in class {
                    let mut e2 = e.clone();
                    for _ in 0..e.amalgam_mult() {
                        e2 = e2.replace_one(VertexId::AMALGAM, labels[0]);
                    }
                    *new_class.entry(e2).or_insert(0) += m;
                }
                out.push(new_class);
            }
            return Some(out);
        }
        let v = labels[0];
        // aggregate per-edge totals to fix the column quotas
        let mut col_quota: BTreeMap<Edge, u64> = BTreeMap::new();
        for class in classes {
            for (e, &m) in class {
                if e.amalgam_mult() > 0 {
                    *col_quota.entry(e.clone()).or_insert(0) += m;
                }
            }
        }
        for (e, q) in col_quota.iter_mut() {
            let j = e.amalgam_mult() as u64;
            if (*q * j) % s != 0 {
                return None; // ledger broken; unreachable from valid states
            }
            *q = *q * j / s;
        }
        let mut col_rem = col_quota;
        let mut moves: Vec<(usize, Edge, u64)> = Vec::new();
        self.assign_colors(classes, 0, &mut col_rem, &mut moves, v, labels, s)
    }

    /// Backtracks over the moved-copy counts for color `i` onward.
    #[allow(clippy::too_many_arguments)]
    fn assign_colors(
        &mut self,
        classes: &Vec<BTreeMap<Edge, u64>>,
        i: usize,
        col_rem: &mut BTreeMap<Edge, u64>,
        moves: &mut Vec<(usize, Edge, u64)>,
        v: VertexId,
        labels: &[VertexId],
        s: u64,
    ) -> Option<Vec<BTreeMap<Edge, u64>>> {
        if i == classes.len() {
            if col_rem.values().any(|&q| q > 0) {
                return None;
            }
            // apply the matrix and recurse into the next split
            let mut next = classes.clone();
            for (ci, e, x) in moves.iter() {
                if *x == 0 {
                    continue;
                }
                let class = &mut next[*ci];
                let m = class.get_mut(e).unwrap();
                *m -= x;
                if *m == 0 {
                    class.remove(e);
                }
                *class.entry(e.replace_one(VertexId::AMALGAM, v)).or_insert(0) += x;
            }
            return self.split(&next, &labels[1..], s - 1);
        }
        let cells: Vec<(Edge, u64)> = classes[i]
            .iter()
            .filter(|(e, _)| e.amalgam_mult() > 0)
            .map(|(e, &m)| (e, m))
            .map(|(e, m)| (e.clone(), m))
            .collect();
        self.assign_cells(classes, i, &cells, 0, self.r, col_rem, moves, v, labels, s)
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_cells(
        &mut self,
        classes: &Vec<BTreeMap<Edge, u64>>,
        i: usize,
        cells: &[(Edge, u64)],
        c: usize,
        row_rem: u64,
        col_rem: &mut BTreeMap<Edge, u64>,
        moves: &mut Vec<(usize, Edge, u64)>,
        v: VertexId,
        labels: &[VertexId],
        s: u64,
    ) -> Option<Vec<BTreeMap<Edge, u64>>> {
        if self.tick() {
            return None;
        }
        if c == cells.len() {
            if row_rem != 0 {
                return None;
            }
            return self.assign_colors(classes, i + 1, col_rem, moves, v, labels, s);
        }
        let (e, m) = &cells[c];
        let col = *col_rem.get(e).unwrap();
        let tail_cap: u64 = cells[c + 1..].iter().map(|(_, m)| *m).sum();
        let hi = row_rem.min(*m).min(col);
        let lo = row_rem.saturating_sub(tail_cap);
        if lo > hi {
            return None;
        }
        for x in lo..=hi {
            *col_rem.get_mut(e).unwrap() = col - x;
            moves.push((i, e.clone(), x));
            let res =
                self.assign_cells(classes, i, cells, c + 1, row_rem - x, col_rem, moves, v, labels, s);
            moves.pop();
            *col_rem.get_mut(e).unwrap() = col;
            if res.is_some() || self.budget_hit {
                return res;
            }
        }
        None
    }

    fn verify(&self, classes: &[BTreeMap<Edge, u64>], n: u64) -> bool {
        let total_expect = crate::binom::binom(n, self.h as u64);
        let mut seen: BTreeMap<Edge, u64> = BTreeMap::new();
        for class in classes {
            let mut deg: BTreeMap<VertexId, u64> = BTreeMap::new();
            for (e, &m) in class {
                if !e.is_set() || e.contains(VertexId::AMALGAM) || e.size() != self.h {
                    return false;
                }
                *seen.entry(e.clone()).or_insert(0) += m;
                for u in e.vertices() {
                    *deg.entry(u).or_insert(0) += m;
                }
            }
            if deg.values().any(|&d| d != self.r) {
                return false;
            }
        }
        seen.values().all(|&m| m == 1) && seen.len() as u64 == total_expect
    }
}

/// Exhaustive search over quota-feasible split sequences. Complete: any
/// true detachment of a contract-satisfying input induces, for every split
/// order, per-split matrices with exactly these row and column totals.
pub fn oracle_detach(
    input: &AmalgamColoring,
    plan: &DetachPlan,
    cfg: &SearchConfig,
) -> Result<SearchOutcome<Vec<BTreeMap<Edge, u64>>>> {
    if plan.labels.is_empty() {
        return Err(Error::InvalidInput("detach plan has no labels".into()));
    }
    if contract_check(input, plan).is_err() {
        return Ok(SearchOutcome::None {
            reason: "input violates the detachment contract".into(),
        });
    }
    let mut search = DetachSearch {
        h: input.h,
        r: input.r,
        nodes: 0,
        deadline: Instant::now() + cfg.time_budget,
        cfg: *cfg,
        budget_hit: false,
    };
    let g_u = plan.g_u() as u64;
    match search.split(&input.classes, &plan.labels, g_u) {
        Some(classes) => {
            let n = input.fixed.len() as u64 + g_u;
            if !search.verify(&classes, n) {
                return Err(Error::Internal(
                    "oracle detachment failed self-verification".into(),
                ));
            }
            Ok(SearchOutcome::Found(classes))
        }
        None if search.budget_hit => Ok(SearchOutcome::Exhausted),
        None => Ok(SearchOutcome::None {
            reason: "no detachment found (search space exhausted)".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn finds_baranyai_case_from_empty() {
        let params = Params::new(6, 3, 1).unwrap();
        let empty = PartialFact::new(params, HostKind::Complete { m: None }, vec![]).unwrap();
        let out = oracle_extend(&empty, 6, &cfg()).unwrap();
        assert!(matches!(out, SearchOutcome::Found(_)));
    }

    #[test]
    fn divisibility_failure_is_immediate_none() {
        let params = Params::new(6, 3, 1).unwrap();
        let empty = PartialFact::new(params, HostKind::Complete { m: None }, vec![]).unwrap();
        let out = oracle_extend(&empty, 8, &cfg()).unwrap();
        assert!(out.is_none());
    }

    #[test]
    fn detach_oracle_finds_guaranteed_detachment() {
        // total amalgamation of K_6^3 under r = 1: ten colors, two copies
        // of {u^3} each; a valid detachment is guaranteed to exist
        let e = Edge::from_occurrences(vec![VertexId::AMALGAM; 3]);
        let input = AmalgamColoring {
            fixed: BTreeSet::new(),
            h: 3,
            r: 1,
            classes: vec![BTreeMap::from([(e, 2u64)]); 10],
        };
        let plan = DetachPlan {
            labels: (1..=6).map(VertexId).collect(),
        };
        let out = oracle_detach(&input, &plan, &cfg()).unwrap();
        assert!(matches!(out, SearchOutcome::Found(_)));
    }

    #[test]
    fn detach_oracle_rejects_broken_contract() {
        // one color, r=1, g_u=2, but deg(u) = 3 != r * g_u
        let e = Edge::from_occurrences(vec![VertexId::AMALGAM; 3]);
        let input = AmalgamColoring {
            fixed: BTreeSet::new(),
            h: 3,
            r: 1,
            classes: vec![BTreeMap::from([(e, 1)])],
        };
        let plan = DetachPlan {
            labels: vec![VertexId(1), VertexId(2)],
        };
        let out = oracle_detach(&input, &plan, &cfg()).unwrap();
        assert!(out.is_none());
    }
}
