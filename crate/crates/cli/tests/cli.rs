use std::path::Path;
use std::process::Command;

use digitop::lattice::AdjacencyKind;
use digitop::{DigitalImage, DigitalMap, ECPath, Json, Point};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    report: Value,
}

fn run_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_digitop"))
        .current_dir(dir)
        .args(args)
        .env_remove("DIGITOP_STATE_CAP")
        .envs(env.iter().copied())
        .output()
        .expect("the binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap(), stdout, report }
}

fn run(dir: &Path, args: &[&str]) -> Run {
    run_env(dir, args, &[])
}

fn p(c: &[i64]) -> Point {
    Point::from_i64s(c)
}

fn square() -> DigitalImage {
    DigitalImage::new(AdjacencyKind::c1(2), [[0, 0], [0, 1], [1, 0], [1, 1]].map(|c| p(&c))).unwrap()
}

fn ring() -> DigitalImage {
    let pts = (0..3).flat_map(|a| (0..3).map(move |b| [a, b])).filter(|c| *c != [1, 1]);
    DigitalImage::new(AdjacencyKind::c1(2), pts.map(|c| p(&c))).unwrap()
}

/// Writes the identity and the constant map at the origin of `x`.
fn endpoints(dir: &Path, x: &DigitalImage) {
    std::fs::write(dir.join("id.json"), DigitalMap::identity(x).to_json()).unwrap();
    let c = DigitalMap::constant(x, x, x.point(0)).unwrap();
    std::fs::write(dir.join("const.json"), c.to_json()).unwrap();
}

fn status(r: &Run) -> &str {
    r.report["status"].as_str().unwrap_or("")
}

#[test]
fn identity_is_continuous() {
    let d = TempDir::new().unwrap();
    endpoints(d.path(), &square());
    let r = run(d.path(), &["check", "continuity", "--map", "id.json"]);
    assert_eq!((r.code, status(&r)), (0, "pass"), "{}", r.stdout);
}

#[test]
fn discontinuous_map_fails_with_a_clause() {
    let d = TempDir::new().unwrap();
    let x = digitop::lattice::interval(0, 2).unwrap();
    let f = DigitalMap::from_pairs(&x, &x, &[(p(&[0]), p(&[0])), (p(&[1]), p(&[2])), (p(&[2]), p(&[0]))]).unwrap();
    std::fs::write(d.path().join("f.json"), f.to_json()).unwrap();
    let r = run(d.path(), &["check", "continuity", "--map", "f.json"]);
    assert_eq!((r.code, status(&r)), (1, "fail"), "{}", r.stdout);
    assert!(r.report["clause"].is_string());
}

#[test]
fn square_contracts_and_the_witness_rechecks() {
    let d = TempDir::new().unwrap();
    endpoints(d.path(), &square());
    let args = ["search", "homotopy", "--from", "id.json", "--to", "const.json", "--max-steps", "2", "--out", "w.json"];
    let r = run(d.path(), &args);
    assert_eq!((r.code, status(&r)), (0, "pass"), "{}", r.stdout);
    assert_eq!(r.report["witness_path"], "w.json");
    let again = run(d.path(), &args);
    assert_eq!(again.stdout, r.stdout);
    let c = run(d.path(), &["check", "homotopy", "--witness", "w.json", "--from", "id.json", "--to", "const.json"]);
    assert_eq!(c.code, 0, "{}", c.stdout);
    let swapped =
        run(d.path(), &["check", "homotopy", "--witness", "w.json", "--from", "const.json", "--to", "id.json"]);
    assert_eq!(swapped.code, 1, "{}", swapped.stdout);
}

#[test]
fn ring_is_not_contracted_within_budget() {
    let d = TempDir::new().unwrap();
    endpoints(d.path(), &ring());
    let args = ["search", "homotopy", "--from", "id.json", "--to", "const.json", "--max-steps", "6"];
    let r = run(d.path(), &args);
    assert_eq!((r.code, status(&r)), (2, "not-within-budget"), "{}", r.stdout);
    assert!(r.report["budget_used"]["visited"].as_u64().unwrap() > 0, "{}", r.stdout);
    for _ in 0..3 {
        assert_eq!(run(d.path(), &args).stdout, r.stdout);
    }
}

#[test]
fn state_cap_comes_from_the_environment() {
    let d = TempDir::new().unwrap();
    endpoints(d.path(), &square());
    let args = ["search", "homotopy", "--from", "id.json", "--to", "const.json", "--max-steps", "2"];
    let capped = run_env(d.path(), &args, &[("DIGITOP_STATE_CAP", "3")]);
    assert_eq!((capped.code, status(&capped)), (2, "not-within-budget"), "{}", capped.stdout);
    let bad = run_env(d.path(), &args, &[("DIGITOP_STATE_CAP", "lots")]);
    assert_eq!(bad.code, 3, "{}", bad.stdout);
}

#[test]
fn t_image_similarity_checks_at_depth_five() {
    let d = TempDir::new().unwrap();
    let b = run(
        d.path(),
        &["build", "t-image", "--radius", "4", "--what", "similarity", "--depth", "5", "--out", "t.json"],
    );
    assert_eq!(b.code, 0, "{}", b.stdout);
    let r = run(d.path(), &["check", "similarity", "--cert", "t.json", "--depth", "5"]);
    assert_eq!((r.code, status(&r)), (0, "pass"), "{}", r.stdout);
    let eq = run(d.path(), &["check", "equivalence", "--cert", "t.json"]);
    assert_eq!(eq.code, 0, "{}", eq.stdout);
}

#[test]
fn finite_long_real_finite_round_trip() {
    let d = TempDir::new().unwrap();
    endpoints(d.path(), &square());
    let search =
        ["search", "homotopy", "--from", "id.json", "--to", "const.json", "--max-steps", "2", "--out", "h.json"];
    assert_eq!(run(d.path(), &search).code, 0);
    for (from, to, input, out) in [
        ("finite", "long", "h.json", "long.json"),
        ("long", "real", "long.json", "real.json"),
        ("real", "finite", "real.json", "back.json"),
    ] {
        let r = run(d.path(), &["convert", "--from", from, "--to", to, "--input", input, "--out", out]);
        assert_eq!(r.code, 0, "{from} to {to}: {}", r.stdout);
    }
    for (kind, file) in [("long", "long.json"), ("real", "real.json"), ("homotopy", "back.json")] {
        let r = run(d.path(), &["check", kind, "--witness", file, "--from", "id.json", "--to", "const.json"]);
        assert_eq!(r.code, 0, "{kind}: {}", r.stdout);
    }
}

#[test]
fn cube_l_homotopy_converts_to_long() {
    let d = TempDir::new().unwrap();
    assert_eq!(
        run(d.path(), &["build", "cube", "--dim", "2", "--radius", "2", "--what", "image", "--out", "x.json"]).code,
        0
    );
    assert_eq!(run(d.path(), &["build", "cube", "--dim", "2", "--radius", "2", "--out", "l.json"]).code, 0);
    let x = DigitalImage::from_json(&std::fs::read_to_string(d.path().join("x.json")).unwrap()).unwrap();
    std::fs::write(d.path().join("id.json"), DigitalMap::identity(&x).to_json()).unwrap();
    let c = DigitalMap::constant(&x, &x, &p(&[0, 0])).unwrap();
    std::fs::write(d.path().join("const.json"), c.to_json()).unwrap();
    let l = run(d.path(), &["check", "l-homotopy", "--witness", "l.json", "--from", "id.json", "--to", "const.json"]);
    assert_eq!(l.code, 0, "{}", l.stdout);
    let r = run(d.path(), &["convert", "--from", "l", "--to", "long", "--input", "l.json", "--out", "long.json"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = run(d.path(), &["check", "long", "--witness", "long.json", "--from", "id.json", "--to", "const.json"]);
    assert_eq!(v.code, 0, "{}", v.stdout);
}

#[test]
fn unproven_conversions_are_refused() {
    let d = TempDir::new().unwrap();
    endpoints(d.path(), &square());
    let search =
        ["search", "homotopy", "--from", "id.json", "--to", "const.json", "--max-steps", "2", "--out", "h.json"];
    assert_eq!(run(d.path(), &search).code, 0);
    assert_eq!(
        run(d.path(), &["convert", "--from", "finite", "--to", "real", "--input", "h.json", "--out", "r.json"]).code,
        0
    );
    let r = run(d.path(), &["convert", "--from", "real", "--to", "long", "--input", "r.json", "--out", "x.json"]);
    assert_eq!((r.code, status(&r)), (3, "error"), "{}", r.stdout);
    assert!(!d.path().join("x.json").exists());
}

#[test]
fn certificate_conversions_verify() {
    let d = TempDir::new().unwrap();
    assert_eq!(
        run(d.path(), &["build", "cube", "--dim", "2", "--radius", "1", "--what", "equivalence", "--out", "e.json"])
            .code,
        0
    );
    for (to, out) in [("long", "le.json"), ("real", "re.json"), ("similarity", "se.json")] {
        let r = run(
            d.path(),
            &["convert", "--certificate", "--from", "finite", "--to", to, "--input", "e.json", "--out", out],
        );
        assert_eq!(r.code, 0, "{to}: {}", r.stdout);
        assert_eq!(run(d.path(), &["check", "equivalence", "--cert", out]).code, 0);
    }
    let back = run(
        d.path(),
        &[
            "convert",
            "--certificate",
            "--from",
            "similarity",
            "--to",
            "finite",
            "--input",
            "se.json",
            "--out",
            "fe.json",
        ],
    );
    assert_eq!(back.code, 0, "{}", back.stdout);
    assert_eq!(
        std::fs::read_to_string(d.path().join("fe.json")).unwrap(),
        std::fs::read_to_string(d.path().join("e.json")).unwrap()
    );
}

#[test]
fn growing_similarity_is_not_stable() {
    let d = TempDir::new().unwrap();
    assert_eq!(
        run(
            d.path(),
            &[
                "build",
                "cube",
                "--dim",
                "1",
                "--radius",
                "1",
                "--what",
                "similarity",
                "--depth",
                "3",
                "--out",
                "s.json"
            ]
        )
        .code,
        0
    );
    let r = run(
        d.path(),
        &["convert", "--certificate", "--from", "similarity", "--to", "finite", "--input", "s.json", "--out", "f.json"],
    );
    assert_eq!((r.code, status(&r)), (2, "not-stable"), "{}", r.stdout);
}

#[test]
fn wedge_of_tree_certificates() {
    let d = TempDir::new().unwrap();
    let right = DigitalImage::new(AdjacencyKind::c1(2), [[0, 0], [1, 0], [2, 0], [2, 1]].map(|c| p(&c))).unwrap();
    let left = DigitalImage::new(AdjacencyKind::c1(2), [[0, 0], [-1, 0], [-1, -1]].map(|c| p(&c))).unwrap();
    std::fs::write(d.path().join("a.json"), right.to_json()).unwrap();
    std::fs::write(d.path().join("b.json"), left.to_json()).unwrap();
    for (img, out) in [("a.json", "ca.json"), ("b.json", "cb.json")] {
        let r =
            run(d.path(), &["build", "tree", "--image", img, "--root", "0,0", "--what", "equivalence", "--out", out]);
        assert_eq!(r.code, 0, "{}", r.stdout);
    }
    let w = run(d.path(), &["build", "wedge", "--certs", "ca.json", "cb.json", "--out", "w.json"]);
    assert_eq!(w.code, 0, "{}", w.stdout);
    assert_eq!(run(d.path(), &["check", "equivalence", "--cert", "w.json"]).code, 0);
}

#[test]
fn loop_queries() {
    let d = TempDir::new().unwrap();
    let x = ring();
    let cyc = [[0, 0], [1, 0], [2, 0], [2, 1], [2, 2], [1, 2], [0, 2], [0, 1]].map(|c| p(&c));
    let around = ECPath::new(&x, &cyc, &p(&[0, 0])).unwrap();
    let back = ECPath::new(&x, &[p(&[0, 0]), p(&[1, 0])], &p(&[0, 0])).unwrap();
    let e = ECPath::constant(&x, &p(&[0, 0])).unwrap();
    for (name, path) in [("around.json", &around), ("back.json", &back), ("e.json", &e)] {
        std::fs::write(d.path().join(name), path.to_json()).unwrap();
    }
    let eq = run(d.path(), &["pi1", "check-equal", "--left", "back.json", "--right", "e.json", "--out", "h.json"]);
    assert_eq!((eq.code, status(&eq)), (0, "pass"), "{}", eq.stdout);
    let h = run(d.path(), &["check", "ec-homotopy", "--witness", "h.json", "--from", "back.json", "--to", "e.json"]);
    assert_eq!(h.code, 0, "{}", h.stdout);
    let unknown = run(d.path(), &["pi1", "check-equal", "--left", "around.json", "--right", "e.json"]);
    assert_eq!((unknown.code, status(&unknown)), (2, "not-within-budget"), "{}", unknown.stdout);
    assert_eq!(
        run(d.path(), &["pi1", "check-equal", "--left", "around.json", "--right", "e.json"]).stdout,
        unknown.stdout
    );
}

#[test]
fn malformed_input_reports_a_position() {
    let d = TempDir::new().unwrap();
    std::fs::write(d.path().join("bad.json"), "{\"dim\": 2, \"u\": 1, \"points\": [[0, 0], [0, 1.5]]}").unwrap();
    let r = run(d.path(), &["build", "tree", "--image", "bad.json", "--root", "0,0", "--out", "t.json"]);
    assert_eq!(r.code, 3, "{}", r.stdout);
    let msg = r.stdout.clone();
    assert!(msg.contains("points[1][1]"), "{msg}");
    assert!(msg.contains("line"), "{msg}");
    std::fs::write(d.path().join("dup.json"), "{\"dim\": 1, \"u\": 1, \"points\": [[0], [0]]}").unwrap();
    let dup = run(d.path(), &["build", "tree", "--image", "dup.json", "--root", "0", "--out", "t.json"]);
    assert_eq!(dup.code, 3, "{}", dup.stdout);
    assert!(dup.stdout.contains("points"), "{}", dup.stdout);
}

#[test]
fn usage_errors_exit_three() {
    let d = TempDir::new().unwrap();
    assert_eq!(run(d.path(), &["frobnicate"]).code, 3);
    assert_eq!(run(d.path(), &["check", "continuity"]).code, 3);
    assert_eq!(run(d.path(), &["check", "continuity", "--map", "missing.json"]).code, 3);
}
