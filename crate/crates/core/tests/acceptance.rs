//! End-to-end acceptance suite. Each test prints one PASS/FAIL line.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use hyperfact::coloring::{HostKind, PartialFact};
use hyperfact::edge::{Edge, VertexId};
use hyperfact::extend::{
    extend_generic, extend_k4, extend_k5, extend_outside, extend_pieces, factorize,
    GenericOutcome,
};
use hyperfact::oracle::{oracle_extend, SearchConfig, SearchOutcome};
use hyperfact::verify::{
    check_full, check_p_friendly, check_partial, check_pieces_conditions,
};
use hyperfact::{binom, identity_checks, random_partial, Params};

fn fixture(name: &str) -> PartialFact {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    hyperfact::read_hf(path).expect("fixture parses")
}

struct Criterion(&'static str);

impl Criterion {
    fn check(&self, ok: bool) {
        println!(
            "criterion {}: {}",
            self.0,
            if ok { "PASS" } else { "FAIL" }
        );
        assert!(ok, "criterion {} failed", self.0);
    }
}

fn vset(range: impl IntoIterator<Item = u32>) -> BTreeSet<VertexId> {
    range.into_iter().map(VertexId).collect()
}

/// Shrinks a coloring's classes through V, dropping edges wholly inside V.
fn shrink_classes(
    classes: &[BTreeMap<Edge, u64>],
    v: &BTreeSet<VertexId>,
) -> Vec<BTreeMap<Edge, u64>> {
    classes
        .iter()
        .map(|class| {
            let mut out = BTreeMap::new();
            for (e, &m) in class {
                if let Some(image) = e.without_vertices(v) {
                    *out.entry(image).or_insert(0) += m;
                }
            }
            out
        })
        .collect()
}

/// The restriction invariant: the output coloring agrees with the input on
/// every edge inside [1, m].
fn restriction_holds(input: &PartialFact, output: &PartialFact, m: u32) -> bool {
    let inside = vset(1..=m);
    let restricted = output.coloring.classes_within(&inside);
    let mut expected = input.coloring.classes().to_vec();
    expected.resize_with(restricted.len(), BTreeMap::new);
    restricted == expected
}

#[test]
fn criterion_1_k6_one_factorization() {
    let pf = fixture("k6_r1.hf");
    let ok = check_full(&pf).ok()
        && pf.params.k() == 10
        && (0..10).all(|i| pf.coloring.class_size(i) == 2)
        && (0..10).all(|i| (1..=6).all(|v| pf.coloring.class_degree(i, VertexId(v)) == 1));
    Criterion("1 (K_6^3 one-factorization fixture)").check(ok);
}

#[test]
fn criterion_2_k9_four_factorization() {
    let partial = fixture("k9_r4_partial.hf");
    let full = fixture("k9_r4_full.hf");
    let ok = check_partial(&partial).ok()
        && check_full(&full).ok()
        && full.params.k() == 7
        && (0..7).all(|i| full.coloring.class_size(i) == 12);
    Criterion("2 (K_9^3 four-factorization fixtures)").check(ok);
}

#[test]
fn criterion_3_n9_nonextendable() {
    let pf = fixture("k6_r1.hf");
    let cfg = SearchConfig {
        node_budget: 1_000_000,
        time_budget: Duration::from_secs(60),
        symmetry_pruning: true,
    };
    let out = oracle_extend(&pf, 9, &cfg).unwrap();
    Criterion("3 (n=9 non-extendable, exhaustive)").check(out.is_none());
}

#[test]
fn criterion_4_baranyai_sweep() {
    let mut ok = true;
    let mut cases = 0;
    for h in 2u32..=4 {
        for n in h..=12 {
            let per_vertex = binom(n as u64 - 1, h as u64 - 1);
            for r in 1..=per_vertex {
                if per_vertex % r != 0 || (r * n as u64) % h as u64 != 0 {
                    continue;
                }
                cases += 1;
                let res = factorize(n, h, r, 0).unwrap();
                if !check_full(&res.factorization).ok() {
                    eprintln!("factorize({n},{h},{r}) failed verification");
                    ok = false;
                }
            }
        }
    }
    assert!(cases > 50, "sweep unexpectedly small: {cases}");
    Criterion("4 (Baranyai sweep)").check(ok);
}

#[test]
fn criterion_5_h4_embedding() {
    let (m, n) = (5u32, 28u32);
    let mut ok = true;
    for (r, runs) in [(1u64, 50usize), (3, 50)] {
        let params = Params::new(n, 4, r).unwrap();
        for seed in 0..runs as u64 {
            let input = random_partial(params, m, 1000 + seed).unwrap();
            let res = extend_k4(&input, n, seed).unwrap();
            let identities = res.log.final_counts.iter().sum::<u64>() == binom(23, 4)
                && res.log.u_degrees.iter().all(|&d| d == r * 23);
            if !check_full(&res.factorization).ok()
                || !restriction_holds(&input, &res.factorization, m)
                || !identities
            {
                eprintln!("h=4 embedding failed for r={r} seed={seed}");
                ok = false;
            }
        }
    }
    Criterion("5 (h=4 embedding, m=5, n=28)").check(ok);
}

#[test]
fn criterion_6_h5_embedding() {
    let (m, n, r) = (6u32, 40u32, 1u64);
    let params = Params::new(n, 5, r).unwrap();
    let mut ok = true;
    for seed in 0..10u64 {
        let input = random_partial(params, m, 2000 + seed).unwrap();
        let t = std::time::Instant::now();
        let res = extend_k5(&input, n, seed).unwrap();
        let elapsed = t.elapsed();
        assert!(
            elapsed < Duration::from_secs(300),
            "extension took {elapsed:?}, budget is 5 min"
        );
        if !check_full(&res.factorization).ok()
            || !restriction_holds(&input, &res.factorization, m)
            || res.log.final_counts.iter().sum::<u64>() != binom(34, 5)
        {
            eprintln!("h=5 embedding failed for seed={seed}");
            ok = false;
        }
    }
    Criterion("6 (h=5 embedding, m=6, n=40)").check(ok);
}

/// Divisibility-admissible (n, h, r) triples with h <= n <= 10, h in {3,4}.
fn small_admissible() -> Vec<(u32, u32, u64)> {
    let mut out = Vec::new();
    for h in 3u32..=4 {
        for n in h + 1..=10 {
            let per_vertex = binom(n as u64 - 1, h as u64 - 1);
            for r in 1..=per_vertex {
                if per_vertex % r == 0 && (r * n as u64) % h as u64 == 0 {
                    out.push((n, h, r));
                }
            }
        }
    }
    out
}

#[test]
fn criterion_7_pieces_round_trip() {
    let menu = small_admissible();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = true;
    for case in 0..50 {
        let &(n, h, r) = menu.choose(&mut rng).unwrap();
        let size = rng.gen_range(1..=(n - h).max(1));
        let mut verts: Vec<u32> = (1..=n).collect();
        verts.shuffle(&mut rng);
        let v: BTreeSet<VertexId> = verts[..size as usize].iter().map(|&x| VertexId(x)).collect();

        let known = factorize(n, h, r, case).unwrap().factorization;
        let shrunk = shrink_classes(known.coloring.classes(), &v);
        let input = PartialFact::new(
            known.params,
            HostKind::Pieces { missing: v.clone() },
            shrunk.clone(),
        )
        .unwrap();
        if !check_pieces_conditions(&input).ok() {
            eprintln!("pieces conditions failed for n={n} h={h} r={r} V={v:?}");
            ok = false;
            continue;
        }
        let res = extend_pieces(&input, case).unwrap();
        let preserved = shrink_classes(res.factorization.coloring.classes(), &v) == shrunk;
        if !check_full(&res.factorization).ok() || !preserved {
            eprintln!("pieces round-trip failed for n={n} h={h} r={r} V={v:?}");
            ok = false;
        }
    }
    Criterion("7 (pieces round-trip)").check(ok);
}

#[test]
fn criterion_8_outside_p_friendly() {
    let menu = small_admissible();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ok = true;
    for case in 0..20 {
        let &(n, h, r) = menu.choose(&mut rng).unwrap();
        let size = rng.gen_range(1..=(n - h).max(1));
        let mut verts: Vec<u32> = (1..=n).collect();
        verts.shuffle(&mut rng);
        let v: BTreeSet<VertexId> = verts[..size as usize].iter().map(|&x| VertexId(x)).collect();

        let known = factorize(n, h, r, 100 + case).unwrap().factorization;
        let p = PartialFact::new(
            known.params,
            HostKind::Restrict { missing: v.clone() },
            known.coloring.classes_not_inside(&v),
        )
        .unwrap();
        let res = extend_outside(&p, case).unwrap();
        let q = PartialFact::new(
            known.params,
            HostKind::Restrict { missing: v.clone() },
            res.factorization.coloring.classes_not_inside(&v),
        )
        .unwrap();
        if !check_full(&res.factorization).ok() || !check_p_friendly(&p, &q).ok() {
            eprintln!("outside extension failed for n={n} h={h} r={r} V={v:?}");
            ok = false;
        }
    }
    Criterion("8 (outside-vertex P-friendly)").check(ok);
}

#[test]
fn criterion_9_oracle_agreement() {
    let cfg = SearchConfig {
        node_budget: 2_000_000,
        time_budget: Duration::from_secs(10),
        symmetry_pruning: true,
    };
    // ambient n=6 is the only (N1)/(N2)-admissible target with h=3, r=1,
    // n <= 7; target n=7 exercises the divisibility-none path.
    let params = Params::new(6, 3, 1).unwrap();
    let mut ok = true;
    let mut instances = 0;
    for m in 3u32..=5 {
        for seed in 0..34u64 {
            let input = random_partial(params, m, seed).unwrap();
            for target in [6u32, 7] {
                instances += 1;
                let generic = extend_generic(&input, target, seed, 8);
                let extended = matches!(generic, Ok(GenericOutcome::Extended(_)));
                if let Ok(GenericOutcome::Extended(res)) = &generic {
                    if !check_full(&res.factorization).ok() {
                        eprintln!("generic output invalid: m={m} seed={seed} n={target}");
                        ok = false;
                    }
                }
                let oracle = oracle_extend(&input, target, &cfg).unwrap();
                if extended && oracle.is_none() {
                    eprintln!("disagreement: extend succeeded, oracle none (m={m} seed={seed} n={target})");
                    ok = false;
                }
                if matches!(oracle, SearchOutcome::Exhausted) {
                    eprintln!("oracle budget tripped (m={m} seed={seed} n={target})");
                    ok = false;
                }
            }
        }
    }
    assert!(instances >= 200, "fixture set too small: {instances}");
    Criterion("9 (oracle agreement)").check(ok);
}

#[test]
fn criterion_10_identity_suite() {
    let mut ok = true;
    for h in 1u32..=6 {
        for m in h..=30 {
            for n in m..=30 {
                let (a, b) = identity_checks(n as u64, m as u64, h as u64);
                if !(a && b) {
                    eprintln!("identity failed at n={n} m={m} h={h}");
                    ok = false;
                }
            }
        }
    }
    Criterion("10 (identity suite)").check(ok);
}
