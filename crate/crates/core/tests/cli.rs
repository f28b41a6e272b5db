//! End-to-end runs of the `mldmq` binary.

use std::path::Path;
use std::process::{Command, Output};

use mldmq::io::{parse_mld, parse_mq, parse_witness, Sidecar};
use mldmq::oracles::{verify_mld, verify_mq};
use mldmq::Assignment;

fn mldmq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mldmq")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn roundtrip_alpha_agrees() {
    let out = mldmq(&[
        "roundtrip",
        "--dir",
        "alpha",
        "--seed",
        "7",
        "--n",
        "8",
        "--m",
        "5",
        "--t",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("decisions match"));
}

#[test]
fn roundtrip_beta_agrees() {
    for planted in [true, false] {
        let mut args = vec!["roundtrip", "--dir", "beta", "--seed", "3", "--n", "3", "--m", "2"];
        if planted {
            args.push("--planted");
        }
        let out = mldmq(&args);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).contains("decisions match"));
    }
}

#[test]
fn alpha_lift_and_project_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (src, plant, red) = (
        dir.path().join("i.mld"),
        dir.path().join("v.wit"),
        dir.path().join("o.mq"),
    );
    let gen = mldmq(&[
        "gen-mld",
        "--seed",
        "5",
        "--n",
        "7",
        "--m",
        "4",
        "--t",
        "2",
        "--planted",
        "-o",
        p(&src),
        "--plant-out",
        p(&plant),
    ]);
    assert!(gen.status.success());
    assert!(mldmq(&["alpha", p(&src), "-o", p(&red)]).status.success());
    let meta = dir.path().join("o.mq.meta");
    let side = Sidecar::parse(&std::fs::read_to_string(&meta).unwrap()).unwrap();
    assert_eq!(side.get("REDUCTION"), Some("alpha"));

    let lifted = dir.path().join("a.wit");
    let out = mldmq(&[
        "lift",
        "--meta",
        p(&meta),
        "--source",
        p(&src),
        "--witness",
        p(&plant),
        "-o",
        p(&lifted),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mq = parse_mq(&std::fs::read_to_string(&red).unwrap()).unwrap();
    let a = parse_witness(&std::fs::read_to_string(&lifted).unwrap()).unwrap();
    assert!(verify_mq(&mq, &Assignment::from_bits(a)));
    assert_eq!(mldmq(&["verify", p(&red), p(&lifted)]).status.code(), Some(0));

    let back = dir.path().join("b.wit");
    let out = mldmq(&[
        "project",
        "--meta",
        p(&meta),
        "--source",
        p(&src),
        "--witness",
        p(&lifted),
        "-o",
        p(&back),
    ]);
    assert!(out.status.success());
    let inst = parse_mld(&std::fs::read_to_string(&src).unwrap()).unwrap();
    let v = parse_witness(&std::fs::read_to_string(&back).unwrap()).unwrap();
    assert!(verify_mld(&inst, &v));
}

#[test]
fn beta_lift_and_project_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (src, plant, red) = (
        dir.path().join("i.mq"),
        dir.path().join("a.wit"),
        dir.path().join("o.mld"),
    );
    let gen = mldmq(&[
        "gen-mq",
        "--seed",
        "9",
        "--n",
        "4",
        "--m",
        "2",
        "--planted",
        "-o",
        p(&src),
        "--plant-out",
        p(&plant),
    ]);
    assert!(gen.status.success());
    assert!(mldmq(&["beta", p(&src), "-o", p(&red)]).status.success());
    let meta = dir.path().join("o.mld.meta");

    let lifted = dir.path().join("v.wit");
    let out = mldmq(&[
        "lift",
        "--meta",
        p(&meta),
        "--source",
        p(&src),
        "--witness",
        p(&plant),
        "-o",
        p(&lifted),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(mldmq(&["verify", p(&red), p(&lifted)]).status.code(), Some(0));

    let back = dir.path().join("b.wit");
    let out = mldmq(&[
        "project",
        "--meta",
        p(&meta),
        "--source",
        p(&src),
        "--witness",
        p(&lifted),
        "-o",
        p(&back),
    ]);
    assert!(out.status.success());
    assert_eq!(mldmq(&["verify", p(&src), p(&back)]).status.code(), Some(0));
}

#[test]
fn mismatched_metadata_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, red) = (
        dir.path().join("a.mld"),
        dir.path().join("b.mld"),
        dir.path().join("o.mq"),
    );
    assert!(mldmq(&["gen-mld", "--seed", "1", "--n", "5", "--m", "3", "-o", p(&a)])
        .status
        .success());
    assert!(mldmq(&["gen-mld", "--seed", "2", "--n", "6", "--m", "3", "-o", p(&b)])
        .status
        .success());
    assert!(mldmq(&["alpha", p(&a), "-o", p(&red)]).status.success());
    let w = dir.path().join("w.wit");
    std::fs::write(&w, "WITNESS 6\n000000\n").unwrap();
    let meta = dir.path().join("o.mq.meta");
    let out = mldmq(&["lift", "--meta", p(&meta), "--source", p(&b), "--witness", p(&w)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let yes = dir.path().join("yes.mq");
    std::fs::write(&yes, "MQ\nn 2\nm 1\nEQ Q 1 2 ; L ; C 1\n").unwrap();
    let out = mldmq(&["solve", p(&yes)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("decision yes\n"));

    let no = dir.path().join("no.mq");
    std::fs::write(&no, "MQ\nn 1\nm 2\nEQ Q ; L 1 ; C 0\nEQ Q ; L 1 ; C 1\n").unwrap();
    let out = mldmq(&["solve", p(&no)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("decision no\n"));

    let bad = dir.path().join("bad.mq");
    std::fs::write(&bad, "MQ\nn 2\nm 1\nEQ Q 2 1 ; L ; C 0\n").unwrap();
    let out = mldmq(&["solve", p(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn witness_verification_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.mld");
    std::fs::write(&inst, "MLD\nn 3\nm 1\nt 1\nH\n110\ns 1\n").unwrap();
    let good = dir.path().join("g.wit");
    std::fs::write(&good, "WITNESS 3\n100\n").unwrap();
    let heavy = dir.path().join("h.wit");
    std::fs::write(&heavy, "WITNESS 3\n111\n").unwrap();
    assert_eq!(mldmq(&["verify", p(&inst), p(&good)]).status.code(), Some(0));
    assert_eq!(mldmq(&["verify", p(&inst), p(&heavy)]).status.code(), Some(1));
}

#[test]
fn quadratize_writes_definitions() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("q.mq");
    let out = mldmq(&["quadratize", "x1 x2 x3 x4 + 1", "-o", p(&out_path)]);
    assert!(out.status.success());
    let mq = parse_mq(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!((mq.nvars(), mq.num_equations()), (6, 3));
    let side = Sidecar::parse(&std::fs::read_to_string(dir.path().join("q.mq.meta")).unwrap()).unwrap();
    assert_eq!(side.get("DEF_1"), Some("PROD 5 1 2"));
}

#[test]
fn std_form_and_beta_on_the_result() {
    let dir = tempfile::tempdir().unwrap();
    let (src, sf, red) = (
        dir.path().join("i.mq"),
        dir.path().join("i.sf"),
        dir.path().join("o.mld"),
    );
    assert!(mldmq(&["gen-mq", "--seed", "4", "--n", "3", "--m", "2", "-o", p(&src)])
        .status
        .success());
    assert!(mldmq(&["std-form", p(&src), "-o", p(&sf)]).status.success());
    assert!(mldmq(&["beta", p(&sf), "-o", p(&red)]).status.success());
    let info = stdout(&mldmq(&["info", p(&sf)]));
    assert!(info.lines().any(|l| l == "kind SF"));
    let mld = parse_mld(&std::fs::read_to_string(&red).unwrap()).unwrap();
    assert_eq!(mld.n() % 10, 0);
}
