//! Line-oriented text format for colored hypergraphs.
//!
//! Header: `hf1 kind=<complete|restrict|pieces|amalgam> n=<n> h=<h> r=<r>
//! [m=<m>] [V=<v1,v2,...>]`. Body: one colored edge instance per line,
//! `<color>: <v1> <v2> ...`, vertices 1-based and strictly ascending, the
//! amalgamated vertex written as the literal token `u` (repeated for
//! multiplicity, before the ordinary vertices). `#` starts a comment; blank
//! lines are ignored. Canonical output round-trips byte-identically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::coloring::{HostKind, PartialFact};
use crate::edge::{Edge, VertexId};
use crate::error::{Error, Result};
use crate::params::Params;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

struct Header {
    kind: String,
    n: u32,
    h: u32,
    r: u64,
    m: Option<u32>,
    v: Option<Vec<u32>>,
}

fn parse_header(line: &str, lineno: usize) -> Result<Header> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some("hf1") {
        return Err(parse_err(lineno, "expected 'hf1' format tag"));
    }
    let (mut kind, mut n, mut h, mut r, mut m, mut v) = (None, None, None, None, None, None);
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(lineno, format!("expected key=value, got '{tok}'")))?;
        let dup = match key {
            "kind" => kind.replace(value.to_string()).is_some(),
            "n" => n
                .replace(value.parse::<u32>().map_err(|_| {
                    parse_err(lineno, format!("invalid n '{value}'"))
                })?)
                .is_some(),
            "h" => h
                .replace(value.parse::<u32>().map_err(|_| {
                    parse_err(lineno, format!("invalid h '{value}'"))
                })?)
                .is_some(),
            "r" => r
                .replace(value.parse::<u64>().map_err(|_| {
                    parse_err(lineno, format!("invalid r '{value}'"))
                })?)
                .is_some(),
            "m" => m
                .replace(value.parse::<u32>().map_err(|_| {
                    parse_err(lineno, format!("invalid m '{value}'"))
                })?)
                .is_some(),
            "V" => {
                let list = value
                    .split(',')
                    .map(|s| {
                        s.parse::<u32>()
                            .map_err(|_| parse_err(lineno, format!("invalid V entry '{s}'")))
                    })
                    .collect::<Result<Vec<u32>>>()?;
                v.replace(list).is_some()
            }
            other => return Err(parse_err(lineno, format!("unknown directive '{other}'"))),
        };
        if dup {
            return Err(parse_err(lineno, format!("duplicate directive '{key}'")));
        }
    }
    Ok(Header {
        kind: kind.ok_or_else(|| parse_err(lineno, "missing kind="))?,
        n: n.ok_or_else(|| parse_err(lineno, "missing n="))?,
        h: h.ok_or_else(|| parse_err(lineno, "missing h="))?,
        r: r.ok_or_else(|| parse_err(lineno, "missing r="))?,
        m,
        v,
    })
}

fn header_kind(hd: &Header, lineno: usize) -> Result<HostKind> {
    let vset = |list: &Option<Vec<u32>>| -> Result<BTreeSet<VertexId>> {
        let list = list
            .as_ref()
            .ok_or_else(|| parse_err(lineno, format!("kind={} requires V=", hd.kind)))?;
        let set: BTreeSet<VertexId> = list.iter().map(|&x| VertexId(x)).collect();
        if set.len() != list.len() || set.iter().any(|v| v.0 == 0 || v.0 > hd.n) {
            return Err(Error::Validation(format!(
                "V must be a set of distinct vertices in [1, {}]",
                hd.n
            )));
        }
        Ok(set)
    };
    let kind = match hd.kind.as_str() {
        "complete" => {
            if hd.v.is_some() {
                return Err(parse_err(lineno, "kind=complete does not take V="));
            }
            HostKind::Complete { m: hd.m }
        }
        "restrict" => {
            if hd.m.is_some() {
                return Err(parse_err(lineno, "kind=restrict does not take m="));
            }
            HostKind::Restrict {
                missing: vset(&hd.v)?,
            }
        }
        "pieces" => {
            if hd.m.is_some() {
                return Err(parse_err(lineno, "kind=pieces does not take m="));
            }
            HostKind::Pieces {
                missing: vset(&hd.v)?,
            }
        }
        "amalgam" => {
            if hd.v.is_some() {
                return Err(parse_err(lineno, "kind=amalgam does not take V="));
            }
            HostKind::Amalgam {
                m: hd
                    .m
                    .ok_or_else(|| parse_err(lineno, "kind=amalgam requires m="))?,
            }
        }
        other => return Err(parse_err(lineno, format!("unknown kind '{other}'"))),
    };
    Ok(kind)
}

pub fn parse_hf(text: &str) -> Result<PartialFact> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hdr_line, hdr_text) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file: missing hf1 header"))?;
    let hd = parse_header(hdr_text, hdr_line)?;
    let kind = header_kind(&hd, hdr_line)?;
    let params = Params::new(hd.n, hd.h, hd.r)?;
    let k = params.k() as usize;
    let allow_u = matches!(kind, HostKind::Amalgam { .. });

    let mut classes: Vec<BTreeMap<Edge, u64>> = Vec::new();
    for (lineno, line) in lines {
        let (color_text, verts_text) = line
            .split_once(':')
            .ok_or_else(|| parse_err(lineno, "expected '<color>: <vertices>'"))?;
        let color: usize = color_text
            .trim()
            .parse()
            .map_err(|_| parse_err(lineno, format!("invalid color '{}'", color_text.trim())))?;
        if color == 0 || color > k {
            return Err(Error::Validation(format!(
                "line {lineno}: color {color} out of range [1, {k}]"
            )));
        }
        let mut occurrences: Vec<VertexId> = Vec::new();
        let mut last: Option<u32> = None;
        for tok in verts_text.split_whitespace() {
            if tok == "u" {
                if !allow_u {
                    return Err(Error::Validation(format!(
                        "line {lineno}: token 'u' only valid for kind=amalgam"
                    )));
                }
                if last.is_some() {
                    return Err(Error::Validation(format!(
                        "line {lineno}: 'u' tokens must precede ordinary vertices"
                    )));
                }
                occurrences.push(VertexId::AMALGAM);
                continue;
            }
            let x: u32 = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("invalid vertex '{tok}'")))?;
            if x == 0 || x > hd.n {
                return Err(Error::Validation(format!(
                    "line {lineno}: vertex {x} out of range [1, {}]",
                    hd.n
                )));
            }
            if last.is_some_and(|p| x <= p) {
                return Err(Error::Validation(format!(
                    "line {lineno}: vertices must be strictly ascending (saw {x} after {})",
                    last.unwrap()
                )));
            }
            last = Some(x);
            occurrences.push(VertexId(x));
        }
        if occurrences.is_empty() {
            return Err(parse_err(lineno, "edge with no vertices"));
        }
        if classes.len() < color {
            classes.resize_with(color, BTreeMap::new);
        }
        *classes[color - 1]
            .entry(Edge::from_occurrences(occurrences))
            .or_insert(0) += 1;
    }
    PartialFact::new(params, kind, classes)
}

pub fn format_hf(pf: &PartialFact) -> String {
    let mut out = String::new();
    let p = pf.params;
    write!(out, "hf1 kind=").unwrap();
    match &pf.kind {
        HostKind::Complete { m } => {
            write!(out, "complete n={} h={} r={}", p.n, p.h, p.r).unwrap();
            if let Some(m) = m {
                write!(out, " m={m}").unwrap();
            }
        }
        HostKind::Restrict { missing } => {
            let list = missing.iter().map(|v| v.0.to_string()).collect::<Vec<_>>();
            write!(
                out,
                "restrict n={} h={} r={} V={}",
                p.n,
                p.h,
                p.r,
                list.join(",")
            )
            .unwrap();
        }
        HostKind::Pieces { missing } => {
            let list = missing.iter().map(|v| v.0.to_string()).collect::<Vec<_>>();
            write!(
                out,
                "pieces n={} h={} r={} V={}",
                p.n,
                p.h,
                p.r,
                list.join(",")
            )
            .unwrap();
        }
        HostKind::Amalgam { m } => {
            write!(out, "amalgam n={} h={} r={} m={m}", p.n, p.h, p.r).unwrap();
        }
    }
    out.push('\n');
    for (i, class) in pf.coloring.classes().iter().enumerate() {
        for (e, &mult) in class {
            let mut toks: Vec<String> = Vec::new();
            for &(v, c) in e.slots() {
                for _ in 0..c {
                    toks.push(if v.is_amalgam() {
                        "u".to_string()
                    } else {
                        v.0.to_string()
                    });
                }
            }
            let line = format!("{}: {}\n", i + 1, toks.join(" "));
            for _ in 0..mult {
                out.push_str(&line);
            }
        }
    }
    out
}

pub fn read_hf(path: impl AsRef<Path>) -> Result<PartialFact> {
    parse_hf(&std::fs::read_to_string(path)?)
}

pub fn write_hf(pf: &PartialFact, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, format_hf(pf))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# a 1-factorization of the complete 2-uniform graph on 4 vertices
hf1 kind=complete n=4 h=2 r=1
1: 1 2
1: 3 4
2: 1 3
2: 2 4
3: 1 4
3: 2 3
";

    #[test]
    fn parses_and_round_trips() {
        let pf = parse_hf(SMALL).unwrap();
        assert_eq!(pf.coloring.num_classes(), 3);
        assert!(pf.coloring.uncolored().is_empty());
        let canonical = format_hf(&pf);
        let pf2 = parse_hf(&canonical).unwrap();
        assert_eq!(pf, pf2);
        assert_eq!(format_hf(&pf2), canonical);
    }

    #[test]
    fn repeated_vertex_is_a_validation_error() {
        let bad = "hf1 kind=complete n=6 h=3 r=1\n3: 1 1 2\n";
        assert!(matches!(parse_hf(bad), Err(Error::Validation(_))));
    }

    #[test]
    fn unknown_directive_rejected() {
        let bad = "hf1 kind=complete n=4 h=2 r=1 q=5\n";
        assert!(matches!(parse_hf(bad), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn color_out_of_range_is_validation() {
        let bad = "hf1 kind=complete n=4 h=2 r=1\n9: 1 2\n";
        assert!(matches!(parse_hf(bad), Err(Error::Validation(_))));
    }

    #[test]
    fn amalgam_edges_accept_u_tokens() {
        let text = "hf1 kind=amalgam n=6 h=3 r=1 m=4\n1: u u 3\n";
        let pf = parse_hf(text).unwrap();
        let class = pf.coloring.class(0);
        let (e, &m) = class.iter().next().unwrap();
        assert_eq!((e.amalgam_mult(), e.size(), m), (2, 3, 1));
        let rt = parse_hf(&format_hf(&pf)).unwrap();
        assert_eq!(pf, rt);
    }
}
