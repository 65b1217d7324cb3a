//! Decision procedures for the definitions and necessary conditions:
//! (partial) r-factorization validity, the (N1)-(N4) conditions on
//! `K_n^h \ V`, the mixed-size conditions on `K_n^h - V`, P-friendliness and
//! per-color type profiles on amalgamated hosts.

use std::collections::BTreeMap;

use crate::binom::binom;
use crate::coloring::PartialFact;
use crate::edge::{Edge, VertexId};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Subject {
    Vertex(VertexId),
    Edge(Edge),
    Class(usize),
    Param(&'static str),
    Whole,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ViolationKind {
    TooManyColors,
    DegreeExceeded,
    DegreeMismatch,
    UncoloredRemainder,
    ClassTooLarge,
    DivisibilityH,
    DivisibilityR,
    TypeZeroColorChanged,
    TypeCountMismatch,
}

/// One failed check, with enough data to reconstruct the inequality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub kind: ViolationKind,
    /// 0-based color index, when the violation is per-class.
    pub color: Option<usize>,
    pub subject: Subject,
    pub observed: i128,
    pub expected: i128,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if let Some(c) = self.color {
            write!(f, " color {}", c + 1)?;
        }
        match &self.subject {
            Subject::Vertex(v) => write!(f, " at vertex {v}")?,
            Subject::Edge(e) => write!(f, " at edge {e}")?,
            Subject::Class(i) => write!(f, " at class {}", i + 1)?,
            Subject::Param(p) => write!(f, " on {p}")?,
            Subject::Whole => {}
        }
        write!(f, ": observed {}, expected {}", self.observed, self.expected)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(
        &mut self,
        kind: ViolationKind,
        color: Option<usize>,
        subject: Subject,
        observed: i128,
        expected: i128,
    ) {
        self.violations.push(Violation {
            kind,
            color,
            subject,
            observed,
            expected,
        });
    }
}

/// Per-color census of edge types on an amalgamated host: `per_color[i][j]`
/// counts the edges of type `u^j` in color `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeProfile {
    pub per_color: Vec<Vec<u64>>,
}

impl TypeProfile {
    /// `sum_j j * t_i[j]`, i.e. the degree of `u` in class `i`.
    pub fn u_degree(&self, i: usize) -> u64 {
        self.per_color[i]
            .iter()
            .enumerate()
            .map(|(j, &t)| j as u64 * t)
            .sum()
    }
}

fn check_class_count(pf: &PartialFact, report: &mut VerifyReport) {
    let k = pf.params.k() as usize;
    if pf.coloring.num_classes() > k {
        report.push(
            ViolationKind::TooManyColors,
            None,
            Subject::Whole,
            pf.coloring.num_classes() as i128,
            k as i128,
        );
    }
}

/// Partial r-factorization validity: at most `k` colors, and in every class
/// every vertex has degree at most `r`.
pub fn check_partial(pf: &PartialFact) -> VerifyReport {
    let mut report = VerifyReport::default();
    check_class_count(pf, &mut report);
    let r = pf.params.r;
    for i in 0..pf.coloring.num_classes() {
        for &v in pf.host.vertices() {
            let d = pf.coloring.class_degree(i, v);
            if d > r {
                report.push(
                    ViolationKind::DegreeExceeded,
                    Some(i),
                    Subject::Vertex(v),
                    d as i128,
                    r as i128,
                );
            }
        }
    }
    report
}

/// Full r-factorization validity: everything colored and every vertex has
/// degree exactly `r` in every one of the `k` classes.
pub fn check_full(pf: &PartialFact) -> VerifyReport {
    let mut report = VerifyReport::default();
    check_class_count(pf, &mut report);
    let remainder: u64 = pf.coloring.uncolored().values().sum();
    if remainder > 0 {
        report.push(
            ViolationKind::UncoloredRemainder,
            None,
            Subject::Whole,
            remainder as i128,
            0,
        );
    }
    let r = pf.params.r;
    let k = pf.params.k() as usize;
    for i in 0..k {
        let degs = class_degrees(pf, i);
        for &v in pf.host.vertices() {
            let d = degs.get(&v).copied().unwrap_or(0);
            if d != r {
                report.push(
                    ViolationKind::DegreeMismatch,
                    Some(i),
                    Subject::Vertex(v),
                    d as i128,
                    r as i128,
                );
            }
        }
    }
    report
}

fn class_degrees(pf: &PartialFact, i: usize) -> BTreeMap<VertexId, u64> {
    let mut degs: BTreeMap<VertexId, u64> = BTreeMap::new();
    for (e, &m) in pf.coloring.class(i) {
        for &(v, c) in e.slots() {
            *degs.entry(v).or_insert(0) += c as u64 * m;
        }
    }
    degs
}

/// Lemma-style necessary conditions (N1)-(N4) for a partial r-factorization
/// of `K_n^h \ V`.
pub fn check_conditions(pf: &PartialFact) -> VerifyReport {
    let mut report = VerifyReport::default();
    divisibility(pf, &mut report);
    check_class_count(pf, &mut report);
    let missing = pf.kind.missing().cloned().unwrap_or_default();
    let r = pf.params.r;
    let k = pf.params.k() as usize;
    for i in 0..k {
        for &v in pf.host.vertices() {
            if missing.contains(&v) {
                continue;
            }
            let d = pf.coloring.class_degree(i, v);
            if d != r {
                report.push(
                    ViolationKind::DegreeMismatch,
                    Some(i),
                    Subject::Vertex(v),
                    d as i128,
                    r as i128,
                );
            }
        }
        class_size_bound(pf, i, &mut report);
    }
    report
}

/// Conditions of the mixed-edge-size extension on `K_n^h - V`: divisibility,
/// degree exactly `r` at every remaining vertex in every class, and class
/// edge-count at most `rn / h`.
pub fn check_pieces_conditions(pf: &PartialFact) -> VerifyReport {
    let mut report = VerifyReport::default();
    divisibility(pf, &mut report);
    check_class_count(pf, &mut report);
    let r = pf.params.r;
    let k = pf.params.k() as usize;
    for i in 0..k {
        for &v in pf.host.vertices() {
            let d = pf.coloring.class_degree(i, v);
            if d != r {
                report.push(
                    ViolationKind::DegreeMismatch,
                    Some(i),
                    Subject::Vertex(v),
                    d as i128,
                    r as i128,
                );
            }
        }
        class_size_bound(pf, i, &mut report);
    }
    report
}

fn divisibility(pf: &PartialFact, report: &mut VerifyReport) {
    let p = pf.params;
    let rn = p.r * p.n as u64;
    if rn % p.h as u64 != 0 {
        report.push(
            ViolationKind::DivisibilityH,
            None,
            Subject::Param("h | rn"),
            (rn % p.h as u64) as i128,
            0,
        );
    }
    if p.per_vertex_total() % p.r != 0 {
        report.push(
            ViolationKind::DivisibilityR,
            None,
            Subject::Param("r | C(n-1,h-1)"),
            (p.per_vertex_total() % p.r) as i128,
            0,
        );
    }
}

fn class_size_bound(pf: &PartialFact, i: usize, report: &mut VerifyReport) {
    let bound = pf.params.class_size();
    let size = pf.coloring.class_size(i);
    if size > bound {
        report.push(
            ViolationKind::ClassTooLarge,
            Some(i),
            Subject::Class(i),
            size as i128,
            bound as i128,
        );
    }
}

/// P-friendliness of `q` with respect to `p`, both over the same
/// `K_n^h \ V` host: type-0 edges keep their exact colors, and for each
/// positive type the per-color edge counts agree.
pub fn check_p_friendly(p: &PartialFact, q: &PartialFact) -> VerifyReport {
    let mut report = VerifyReport::default();
    let missing = p.kind.missing().cloned().unwrap_or_default();
    let h = p.params.h as usize;
    let k = p.params.k() as usize;

    // (a) type-0 edges: identical colors (compared as per-edge color multisets)
    let color_sets = |pf: &PartialFact| -> BTreeMap<Edge, Vec<usize>> {
        let mut out: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (i, class) in pf.coloring.classes().iter().enumerate() {
            for (e, &m) in class {
                if e.intersection_size(&missing) == 0 {
                    out.entry(e.clone()).or_default().extend(std::iter::repeat(i).take(m as usize));
                }
            }
        }
        out
    };
    let pc = color_sets(p);
    let qc = color_sets(q);
    for (e, colors) in &pc {
        if qc.get(e) != Some(colors) {
            report.push(
                ViolationKind::TypeZeroColorChanged,
                colors.first().copied(),
                Subject::Edge(e.clone()),
                qc.get(e).and_then(|v| v.first()).map_or(-1, |&c| c as i128),
                colors.first().map_or(-1, |&c| c as i128),
            );
        }
    }
    for (e, colors) in &qc {
        if !pc.contains_key(e) {
            report.push(
                ViolationKind::TypeZeroColorChanged,
                colors.first().copied(),
                Subject::Edge(e.clone()),
                colors.first().map_or(-1, |&c| c as i128),
                -1,
            );
        }
    }

    // (b) per (type, color) counts for types 1..h-1
    let counts = |pf: &PartialFact, i: usize, t: u32| -> u64 {
        pf.coloring
            .class(i)
            .iter()
            .filter(|(e, _)| e.intersection_size(&missing) == t)
            .map(|(_, &m)| m)
            .sum()
    };
    for t in 1..h as u32 {
        for i in 0..k {
            let cp = counts(p, i, t);
            let cq = counts(q, i, t);
            if cp != cq {
                report.push(
                    ViolationKind::TypeCountMismatch,
                    Some(i),
                    Subject::Param("type count"),
                    cq as i128,
                    cp as i128,
                );
            }
        }
    }
    report
}

/// Per-color type census on an amalgamated host.
pub fn type_profile(pf: &PartialFact) -> TypeProfile {
    let h = pf.params.h as usize;
    let k = pf.params.k() as usize;
    let mut per_color = vec![vec![0u64; h + 1]; k];
    for (i, class) in pf.coloring.classes().iter().enumerate() {
        for (e, &m) in class {
            per_color[i][e.amalgam_mult() as usize] += m;
        }
    }
    TypeProfile { per_color }
}

/// Census of type-`u^j` edges over the whole amalgamated host: there are
/// `C(m, h-j) * C(n-m, j)` of each type in `~K_m^h`.
pub fn expected_type_total(n: u32, m: u32, h: u32, j: u32) -> u64 {
    binom(m as u64, (h - j) as u64) * binom((n - m) as u64, j as u64)
}
