//! The constructive pipelines: from-scratch factorization via total
//! amalgamation, staged extension of a partial r-factorization of `K_m^h`
//! into `K_n^h` (proved for h = 4 and h = 5, experimental otherwise), the
//! mixed-edge-size extension of `K_n^h - V`, and its P-friendly variant for
//! `K_n^h \ V`. Every pipeline colors an amalgamated host and finishes by
//! detaching `u`.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::binom::binom;
use crate::coloring::{HostKind, PartialFact};
use crate::detach::{detach, AmalgamColoring, DetachPlan};
use crate::edge::{Edge, VertexId};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::verify;

pub const DEFAULT_RESTART_BUDGET: u32 = 64;

/// Exact rational thresholds: n * 10^6 >= NUM * m.
const K4_THRESHOLD_NUM: u64 = 4_847_323;
const K5_THRESHOLD_NUM: u64 = 6_285_214;
const THRESHOLD_DEN: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct StageRecord {
    pub label: String,
    pub placed: u64,
}

/// Per-stage counts plus the computed last-stage vector and the degree of
/// `u` in every class just before detachment.
#[derive(Clone, Debug, Default)]
pub struct StageLog {
    pub stages: Vec<StageRecord>,
    pub final_counts: Vec<u64>,
    pub u_degrees: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct ExtendResult {
    pub factorization: PartialFact,
    pub log: StageLog,
}

/// Outcome of the experimental generic-h pipeline; getting stuck is a
/// first-class result, not an error.
#[derive(Debug)]
pub enum GenericOutcome {
    Extended(Box<ExtendResult>),
    Stuck { stage: String },
}

enum Pipeline {
    K4,
    K5,
    Generic,
}

enum StagedFailure {
    Fatal(Error),
    Stuck { stage: String },
}

impl From<Error> for StagedFailure {
    fn from(e: Error) -> Self {
        StagedFailure::Fatal(e)
    }
}

// ---------------------------------------------------------------------------
// greedy stager

struct Stager {
    r: u64,
    classes: Vec<BTreeMap<Edge, u64>>,
    /// deg[color][vertex id]; id 0 is u.
    deg: Vec<Vec<u64>>,
    class_size: Vec<u64>,
    /// type_counts[color][j] counts edges of type u^j.
    type_counts: Vec<Vec<u64>>,
    /// Colors ordered by (class size, rank): the greedy preference order.
    order: BTreeSet<(u64, u32)>,
    rank_color: Vec<u32>,
    color_rank: Vec<u32>,
}

impl Stager {
    fn new(
        k: usize,
        r: u64,
        h: u32,
        max_vertex: u32,
        mut classes: Vec<BTreeMap<Edge, u64>>,
        seed: u64,
    ) -> Stager {
        classes.resize_with(k, BTreeMap::new);
        let mut rank_color: Vec<u32> = (0..k as u32).collect();
        if seed != 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rank_color.shuffle(&mut rng);
        }
        let mut color_rank = vec![0u32; k];
        for (rank, &color) in rank_color.iter().enumerate() {
            color_rank[color as usize] = rank as u32;
        }
        let mut deg = vec![vec![0u64; max_vertex as usize + 1]; k];
        let mut class_size = vec![0u64; k];
        let mut type_counts = vec![vec![0u64; h as usize + 1]; k];
        for (i, class) in classes.iter().enumerate() {
            for (e, &m) in class {
                class_size[i] += m;
                type_counts[i][e.amalgam_mult() as usize] += m;
                for &(v, c) in e.slots() {
                    deg[i][v.0 as usize] += c as u64 * m;
                }
            }
        }
        let order = (0..k).map(|i| (class_size[i], color_rank[i])).collect();
        Stager {
            r,
            classes,
            deg,
            class_size,
            type_counts,
            order,
            rank_color,
            color_rank,
        }
    }

    fn assign(&mut self, color: usize, e: &Edge, mult: u64) {
        if mult == 0 {
            return;
        }
        let rank = self.color_rank[color];
        self.order.remove(&(self.class_size[color], rank));
        self.class_size[color] += mult;
        self.order.insert((self.class_size[color], rank));
        self.type_counts[color][e.amalgam_mult() as usize] += mult;
        for &(v, c) in e.slots() {
            self.deg[color][v.0 as usize] += c as u64 * mult;
        }
        *self.classes[color].entry(e.clone()).or_insert(0) += mult;
    }

    fn feasible(&self, color: usize, e: &Edge) -> bool {
        e.slots()
            .iter()
            .all(|&(v, _)| v.is_amalgam() || self.deg[color][v.0 as usize] < self.r)
    }

    /// Feasible color with minimum class edge-count, ties broken by rank.
    fn place_greedy(&mut self, e: &Edge) -> Option<usize> {
        let pick = self
            .order
            .iter()
            .map(|&(_, rank)| self.rank_color[rank as usize] as usize)
            .find(|&color| self.feasible(color, e));
        if let Some(color) = pick {
            self.assign(color, e, 1);
        }
        pick
    }
}

// ---------------------------------------------------------------------------
// proof-backed feasibility assertions

fn poly_k4_f(n: i128, m: i128) -> i128 {
    n * n * n - 6 * n * n - 9 * m * m * n + 27 * m * n - 7 * n + 6 * m * m * m - 9 * m * m
        - 15 * m
        + 30
}

fn poly_k4_stage2(n: i128, m: i128) -> i128 {
    n * n * n - 6 * m * n * n + 6 * m * m * n + 12 * m * n - 7 * n - 2 * m * m * m - 6 * m * m
        - 4 * m
        + 18
}

fn poly_k5_g1(n: i128, m: i128) -> i128 {
    let (n2, n3, n4) = (n * n, n * n * n, n * n * n * n);
    let (m2, m3, m4) = (m * m, m * m * m, m * m * m * m);
    n4 - 10 * n3 + 35 * n2 - 16 * m3 * n + 96 * m2 * n - 176 * m * n + 46 * n + 12 * m4 - 56 * m3
        + 36 * m2
        + 104 * m
        + 24
}

fn poly_k5_g2(n: i128, m: i128) -> i128 {
    let (n2, n3, n4) = (n * n, n * n * n, n * n * n * n);
    let (m2, m3, m4) = (m * m, m * m * m, m * m * m * m);
    n4 - 10 * n3 - 18 * m2 * n2 + 54 * m * n2 - n2 + 24 * m3 * n - 18 * m2 * n - 114 * m * n
        + 58 * n
        - 9 * m4
        - 6 * m3
        + 45 * m2
        + 42 * m
        + 24
}

/// Greedy-stage capacity bound: a vertex of `W` can block a color only when
/// saturated, so a stuck edge of arity `w` forces
/// `C(n-1,h-1) <= w * (cap - 1)` where `cap` is the maximum degree a single
/// vertex can have accumulated so far. The stage is safe iff that is false.
fn stage_bound_holds(n: u64, h: u64, w: u64, cap: u64) -> bool {
    binom(n - 1, h - 1) > w * (cap - 1)
}

fn k4_assertions(n: u64, m: u64) -> Result<()> {
    let (ni, mi) = (n as i128, m as i128);
    let s1_cap = binom(m - 1, 3) + (n - m) * binom(m - 1, 2);
    let s2_cap = s1_cap + (m - 1) * binom(n - m, 2);
    let ok = poly_k4_f(ni, mi) > 0
        && poly_k4_stage2(ni, mi) > 0
        && stage_bound_holds(n, 4, 3, s1_cap)
        && stage_bound_holds(n, 4, 2, s2_cap);
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "h=4 feasibility assertion failed for n={n}, m={m}"
        )))
    }
}

fn k5_assertions(n: u64, m: u64) -> Result<()> {
    let (ni, mi) = (n as i128, m as i128);
    let s1_cap = binom(m - 1, 4) + (n - m) * binom(m - 1, 3);
    let s2_cap = s1_cap + binom(m - 1, 2) * binom(n - m, 2);
    let s3_cap = s2_cap + (m - 1) * binom(n - m, 3);
    let ok = poly_k5_g1(ni, mi) > 0
        && poly_k5_g2(ni, mi) > 0
        && stage_bound_holds(n, 5, 4, s1_cap)
        && stage_bound_holds(n, 5, 3, s2_cap)
        && stage_bound_holds(n, 5, 2, s3_cap);
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "h=5 feasibility assertion failed for n={n}, m={m}"
        )))
    }
}

// ---------------------------------------------------------------------------
// staged pipeline for K_m^h inputs

fn staged_pipeline(
    input: &PartialFact,
    n: u32,
    seed: u64,
    restart_budget: u32,
    pipeline: Pipeline,
) -> std::result::Result<ExtendResult, StagedFailure> {
    let h = input.params.h;
    let r = input.params.r;
    if !matches!(input.kind, HostKind::Complete { .. }) {
        return Err(Error::InvalidInput("input host must be a complete K_m^h".into()).into());
    }
    let m = input.sub_host_size();
    if m < h || m >= n {
        return Err(Error::InvalidParameters(format!(
            "need h <= m < n, got h={h}, m={m}, n={n}"
        ))
        .into());
    }
    let params = Params::new(n, h, r).map_err(StagedFailure::Fatal)?;

    match pipeline {
        Pipeline::K4 => {
            if h != 4 || m < 5 {
                return Err(
                    Error::InvalidParameters(format!("h=4 pipeline needs h=4, m>=5 (m={m})"))
                        .into(),
                );
            }
            if (n as u64) * THRESHOLD_DEN < K4_THRESHOLD_NUM * m as u64 {
                return Err(Error::InvalidParameters(format!(
                    "n={n} below the 4.847323*m threshold for m={m}"
                ))
                .into());
            }
            k4_assertions(n as u64, m as u64)?;
        }
        Pipeline::K5 => {
            if h != 5 || m < 6 {
                return Err(
                    Error::InvalidParameters(format!("h=5 pipeline needs h=5, m>=6 (m={m})"))
                        .into(),
                );
            }
            if (n as u64) * THRESHOLD_DEN < K5_THRESHOLD_NUM * m as u64 {
                return Err(Error::InvalidParameters(format!(
                    "n={n} below the 6.285214*m threshold for m={m}"
                ))
                .into());
            }
            k5_assertions(n as u64, m as u64)?;
        }
        Pipeline::Generic => {
            if h < 2 {
                return Err(Error::InvalidParameters("generic pipeline needs h >= 2".into()).into());
            }
        }
    }

    // revalidate the input against the ambient parameters
    let ambient = PartialFact::new(
        params,
        HostKind::Complete { m: Some(m) },
        input.coloring.classes().to_vec(),
    )?;
    if !ambient.coloring.uncolored().is_empty() {
        return Err(Error::InvalidParameters(
            "input must color every edge of K_m^h".into(),
        )
        .into());
    }
    let rep = verify::check_partial(&ambient);
    if !rep.ok() {
        return Err(Error::InvalidParameters(format!(
            "input is not a partial r-factorization: {}",
            rep.violations[0]
        ))
        .into());
    }

    let k = params.k() as usize;
    let mut stager = Stager::new(k, r, h, m, ambient.coloring.classes().to_vec(), seed);
    let mut log = StageLog::default();

    // greedy stages: types u^1 .. u^(h-2), W in lex order, copies consecutive
    for j in 1..=h.saturating_sub(2) {
        let copies = binom((n - m) as u64, j as u64);
        let mut placed = 0u64;
        for combo in (1..=m).combinations((h - j) as usize) {
            let e = Edge::from_occurrences(
                std::iter::repeat(VertexId::AMALGAM)
                    .take(j as usize)
                    .chain(combo.into_iter().map(VertexId)),
            );
            for _ in 0..copies {
                if stager.place_greedy(&e).is_none() {
                    return Err(StagedFailure::Stuck {
                        stage: format!("greedy u^{j}"),
                    });
                }
                placed += 1;
            }
        }
        log.stages.push(StageRecord {
            label: format!("greedy u^{j}"),
            placed,
        });
    }

    // exact deficit fill: type u^(h-1) edges {x, u^(h-1)}
    let deficit_copies = binom((n - m) as u64, h as u64 - 1);
    let mut placed = 0u64;
    for x in 1..=m {
        let have: u64 = (0..k).map(|i| r - stager.deg[i][x as usize]).sum();
        if have != deficit_copies {
            return Err(Error::Internal(format!(
                "deficit of vertex {x} is {have}, expected C(n-m, h-1) = {deficit_copies}"
            ))
            .into());
        }
        let e = Edge::from_occurrences(
            std::iter::repeat(VertexId::AMALGAM)
                .take(h as usize - 1)
                .chain([VertexId(x)]),
        );
        for i in 0..k {
            let cnt = r - stager.deg[i][x as usize];
            stager.assign(i, &e, cnt);
            placed += cnt;
        }
    }
    log.stages.push(StageRecord {
        label: format!("deficit u^{}", h - 1),
        placed,
    });

    // computed counts for the type u^h edges
    let class_quota = (r * n as u64 / h as u64) as i128;
    let rm = (r * m as u64) as i128;
    let mut final_counts = vec![0u64; k];
    let mut total: i128 = 0;
    for i in 0..k {
        let weighted: i128 = (0..=h as usize - 2)
            .map(|t| (h as i128 - 1 - t as i128) * stager.type_counts[i][t] as i128)
            .sum();
        let count = class_quota - rm + weighted;
        if count < 0 {
            return Err(StagedFailure::Stuck {
                stage: format!("computed u^{h} (negative count in color {})", i + 1),
            });
        }
        final_counts[i] = count as u64;
        total += count;
    }
    if total != binom((n - m) as u64, h as u64) as i128 {
        return Err(Error::Internal(format!(
            "sum of u^{h} counts is {total}, expected C(n-m,{h}) = {}",
            binom((n - m) as u64, h as u64)
        ))
        .into());
    }
    let top = Edge::from_occurrences(std::iter::repeat(VertexId::AMALGAM).take(h as usize));
    for i in 0..k {
        stager.assign(i, &top, final_counts[i]);
    }
    log.stages.push(StageRecord {
        label: format!("computed u^{h}"),
        placed: total as u64,
    });
    log.final_counts = final_counts;

    // degree ledger: deg_i(u) = r (n - m) for every color
    let target_u = r * (n - m) as u64;
    log.u_degrees = (0..k).map(|i| stager.deg[i][0]).collect();
    if let Some(i) = log.u_degrees.iter().position(|&d| d != target_u) {
        return Err(Error::Internal(format!(
            "deg of u in color {} is {}, expected r(n-m) = {target_u}",
            i + 1,
            log.u_degrees[i]
        ))
        .into());
    }

    let amalgam = AmalgamColoring {
        fixed: (1..=m).map(VertexId).collect(),
        h,
        r,
        classes: stager.classes,
    };
    let plan = DetachPlan {
        labels: (m + 1..=n).map(VertexId).collect(),
    };
    let detached = detach(&amalgam, &plan, seed, restart_budget)?;
    let factorization = PartialFact::new(params, HostKind::Complete { m: None }, detached)?;
    Ok(ExtendResult {
        factorization,
        log,
    })
}

fn unwrap_staged(
    result: std::result::Result<ExtendResult, StagedFailure>,
) -> Result<ExtendResult> {
    match result {
        Ok(res) => Ok(res),
        Err(StagedFailure::Fatal(e)) => Err(e),
        Err(StagedFailure::Stuck { stage }) => Err(Error::Internal(format!(
            "counting bound violated: stage '{stage}' exhausted"
        ))),
    }
}

/// Extends a partial r-factorization of `K_m^4` (m >= 5) to a full
/// r-factorization of `K_n^4` for `n >= 4.847323 m`.
pub fn extend_k4(input: &PartialFact, n: u32, seed: u64) -> Result<ExtendResult> {
    unwrap_staged(staged_pipeline(
        input,
        n,
        seed,
        DEFAULT_RESTART_BUDGET,
        Pipeline::K4,
    ))
}

/// Extends a partial r-factorization of `K_m^5` (m >= 6) to a full
/// r-factorization of `K_n^5` for `n >= 6.285214 m`.
pub fn extend_k5(input: &PartialFact, n: u32, seed: u64) -> Result<ExtendResult> {
    unwrap_staged(staged_pipeline(
        input,
        n,
        seed,
        DEFAULT_RESTART_BUDGET,
        Pipeline::K5,
    ))
}

/// The same stage pattern generalized to arbitrary h, with no success
/// guarantee: supports empirical probing of the `n >= 2hm` conjecture.
pub fn extend_generic(
    input: &PartialFact,
    n: u32,
    seed: u64,
    restart_budget: u32,
) -> Result<GenericOutcome> {
    match staged_pipeline(input, n, seed, restart_budget, Pipeline::Generic) {
        Ok(res) => Ok(GenericOutcome::Extended(Box::new(res))),
        Err(StagedFailure::Stuck { stage }) => Ok(GenericOutcome::Stuck { stage }),
        Err(StagedFailure::Fatal(Error::SearchExhausted { split_index, .. })) => {
            Ok(GenericOutcome::Stuck {
                stage: format!("detach split {split_index}"),
            })
        }
        Err(StagedFailure::Fatal(e)) => Err(e),
    }
}

/// Builds an r-factorization of `K_n^h` from scratch through the total
/// amalgamation: one vertex `u`, `C(n,h)` copies of `{u^h}`, `rn/h` per
/// color, then a full detachment.
pub fn factorize(n: u32, h: u32, r: u64, seed: u64) -> Result<ExtendResult> {
    let params = Params::new(n, h, r)?;
    let k = params.k() as usize;
    let quota = params.class_size();
    let top = Edge::from_occurrences(std::iter::repeat(VertexId::AMALGAM).take(h as usize));
    let classes = vec![BTreeMap::from([(top, quota)]); k];
    let amalgam = AmalgamColoring {
        fixed: BTreeSet::new(),
        h,
        r,
        classes,
    };
    let plan = DetachPlan {
        labels: (1..=n).map(VertexId).collect(),
    };
    let detached = detach(&amalgam, &plan, seed, DEFAULT_RESTART_BUDGET)?;
    let factorization = PartialFact::new(params, HostKind::Complete { m: None }, detached)?;
    let log = StageLog {
        stages: vec![StageRecord {
            label: format!("total amalgamation u^{h}"),
            placed: quota * k as u64,
        }],
        final_counts: vec![quota; k],
        u_degrees: vec![r * n as u64; k],
    };
    Ok(ExtendResult {
        factorization,
        log,
    })
}

/// Extends a partial r-factorization of `K_n^h - V` (edges of all sizes) to
/// an r-factorization of `K_n^h`, preserving every input edge's color.
pub fn extend_pieces(input: &PartialFact, seed: u64) -> Result<ExtendResult> {
    let missing = match &input.kind {
        HostKind::Pieces { missing } => missing.clone(),
        _ => {
            return Err(Error::InvalidInput(
                "extend_pieces expects a K_n^h - V host".into(),
            ))
        }
    };
    if missing.is_empty() {
        return Err(Error::InvalidParameters("V must be non-empty".into()));
    }
    let rep = verify::check_pieces_conditions(input);
    if !rep.ok() {
        return Err(Error::InvalidParameters(format!(
            "pieces conditions violated: {}",
            rep.violations[0]
        )));
    }
    let params = input.params;
    let (n, h, r) = (params.n, params.h, params.r);
    let m = missing.len() as u64;
    let k = params.k() as usize;

    // F = ~K_{n-m}^h with u amalgamating V: size-i edges of H become type
    // u^(h-i) edges of F with the same color.
    let mut classes: Vec<BTreeMap<Edge, u64>> = vec![BTreeMap::new(); k];
    let mut type_counts = vec![vec![0u64; h as usize + 1]; k];
    for (i, class) in input.coloring.classes().iter().enumerate() {
        for (e, &mult) in class {
            let missing_slots = h - e.size();
            let f_edge = if missing_slots > 0 {
                e.with_vertex(VertexId::AMALGAM, missing_slots)
            } else {
                e.clone()
            };
            type_counts[i][missing_slots as usize] += mult;
            *classes[i].entry(f_edge).or_insert(0) += mult;
        }
    }

    // remaining edges of type u^h, with computed per-color counts
    let quota = params.class_size() as i128;
    let base = quota - (r * (n as u64 - m)) as i128;
    let mut final_counts = vec![0u64; k];
    let mut total: i128 = 0;
    for i in 0..k {
        let weighted: i128 = (1..h as usize)
            .map(|j| j as i128 * type_counts[i][h as usize - j - 1] as i128)
            .sum();
        let count = base + weighted;
        if count < 0 {
            return Err(Error::Internal(format!(
                "negative u^{h} count {count} in color {} despite valid conditions",
                i + 1
            )));
        }
        final_counts[i] = count as u64;
        total += count;
    }
    if total != binom(m, h as u64) as i128 {
        return Err(Error::Internal(format!(
            "sum of u^{h} counts is {total}, expected C(m,{h}) = {}",
            binom(m, h as u64)
        )));
    }
    let top = Edge::from_occurrences(std::iter::repeat(VertexId::AMALGAM).take(h as usize));
    let mut u_degrees = vec![0u64; k];
    for i in 0..k {
        if final_counts[i] > 0 {
            type_counts[i][h as usize] += final_counts[i];
            *classes[i].entry(top.clone()).or_insert(0) += final_counts[i];
        }
        u_degrees[i] = (1..=h as u64)
            .map(|j| j * type_counts[i][j as usize])
            .sum();
        if u_degrees[i] != r * m {
            return Err(Error::Internal(format!(
                "deg of u in color {} is {}, expected rm = {}",
                i + 1,
                u_degrees[i],
                r * m
            )));
        }
    }

    let amalgam = AmalgamColoring {
        fixed: input.host.vertices().clone(),
        h,
        r,
        classes,
    };
    let plan = DetachPlan {
        labels: missing.iter().copied().collect(),
    };
    let detached = detach(&amalgam, &plan, seed, DEFAULT_RESTART_BUDGET)?;
    let factorization = PartialFact::new(params, HostKind::Complete { m: None }, detached)?;
    Ok(ExtendResult {
        factorization,
        log: StageLog {
            stages: vec![StageRecord {
                label: "transfer + computed u^h".into(),
                placed: total as u64,
            }],
            final_counts,
            u_degrees,
        },
    })
}

/// Extension for `K_n^h \ V`: shrink the edges through `V`,
/// run the mixed-size extension, and return a full r-factorization whose
/// restriction to `K_n^h \ V` is P-friendly to the input.
pub fn extend_outside(input: &PartialFact, seed: u64) -> Result<ExtendResult> {
    let missing = match &input.kind {
        HostKind::Restrict { missing } => missing.clone(),
        _ => {
            return Err(Error::InvalidInput(
                "extend_outside expects a K_n^h \\ V host".into(),
            ))
        }
    };
    let rep = verify::check_conditions(input);
    if !rep.ok() {
        return Err(Error::InvalidParameters(format!(
            "(N1)-(N4) violated: {}",
            rep.violations[0]
        )));
    }
    let mut shrunk: Vec<BTreeMap<Edge, u64>> = vec![BTreeMap::new(); input.coloring.num_classes()];
    for (i, class) in input.coloring.classes().iter().enumerate() {
        for (e, &m) in class {
            let image = e
                .without_vertices(&missing)
                .expect("restrict-host edges never vanish under shrinking");
            *shrunk[i].entry(image).or_insert(0) += m;
        }
    }
    let pieces = PartialFact::new(
        input.params,
        HostKind::Pieces {
            missing: missing.clone(),
        },
        shrunk,
    )?;
    extend_pieces(&pieces, seed)
}
