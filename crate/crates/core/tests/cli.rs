//! Exit-code and serialization contract of the command-line binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperfact"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(format!(
        "{}/tests/fixtures/{name}",
        env!("CARGO_MANIFEST_DIR")
    ))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_fixture_a_exits_zero() {
    let out = run(&["verify", "--in", fixture("k6_r1.hf").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_partial_fixture_b() {
    let partial = fixture("k9_r4_partial.hf");
    let out = run(&["verify", "--partial", "--in", partial.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    // without --partial the same file has degree deficits: verified negative
    let out = run(&["verify", "--in", partial.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn oracle_extend_negative_exits_one() {
    let out = run(&[
        "oracle-extend",
        "--in",
        fixture("k6_r1.hf").to_str().unwrap(),
        "--n",
        "9",
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no extension exists"));
}

#[test]
fn gen_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.hf");
    let out = run(&[
        "gen", "--n", "8", "--h", "4", "--r", "1", "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    // emitted files are canonical: read + write is byte identity
    let text = std::fs::read_to_string(&path).unwrap();
    let pf = hyperfact::parse_hf(&text).unwrap();
    assert_eq!(hyperfact::format_hf(&pf), text);
}

#[test]
fn gen_is_deterministic_for_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.hf"), dir.path().join("b.hf"));
    for p in [&a, &b] {
        let out = run(&[
            "gen", "--n", "9", "--h", "3", "--r", "4", "--seed", "5", "-o",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "same seed must produce identical bytes"
    );
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.hf");
    std::fs::write(&path, "hf1 kind=complete n=6 h=3 r=1\n3: 1 1 2\n").unwrap();
    let out = run(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    // invalid parameters on gen
    let out = run(&["gen", "--n", "8", "--h", "3", "--r", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn extend_generic_stuck_exits_one() {
    // the ten-class 1-factorization of K_6^3 cannot extend to n=9
    let out = run(&[
        "extend",
        "--in",
        fixture("k6_r1.hf").to_str().unwrap(),
        "--n",
        "9",
        "--mode",
        "generic",
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("stuck"));
}

#[test]
fn extend_generic_succeeds_to_n12() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ext.hf");
    let out = run(&[
        "extend",
        "--in",
        fixture("k6_r1.hf").to_str().unwrap(),
        "--n",
        "12",
        "--mode",
        "generic",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn conditions_subcommand() {
    // restriction of a generated factorization satisfies (N1)-(N4)
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.hf");
    let out = run(&[
        "gen", "--n", "6", "--h", "3", "--r", "1", "-o",
        full.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let pf = hyperfact::read_hf(&full).unwrap();
    let v: std::collections::BTreeSet<_> = [5, 6].map(hyperfact::VertexId).into();
    let p = hyperfact::PartialFact::new(
        pf.params,
        hyperfact::HostKind::Restrict { missing: v.clone() },
        pf.coloring.classes_not_inside(&v),
    )
    .unwrap();
    let rpath = dir.path().join("restrict.hf");
    hyperfact::write_hf(&p, &rpath).unwrap();
    let out = run(&["conditions", "--in", rpath.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    // complete-host files are invalid input for conditions
    let out = run(&["conditions", "--in", full.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}
