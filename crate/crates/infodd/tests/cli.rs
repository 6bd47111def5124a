use std::io::Cursor;
use std::path::Path;
use std::process::Command;

use infodd::catalog::CARS_JSON;
use infodd::cli::{navigate, run};
use infodd::diagram_json::deserialize;
use infodd_core::{DiagramKind, InductionConfig};

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn infodd(args: &[&str], stdin: &str) -> Outcome {
    let mut input = Cursor::new(stdin.as_bytes().to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("infodd").chain(args.iter().copied()), &mut input, &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn cars_file(dir: &Path) -> String {
    let path = dir.join("cars.json");
    std::fs::write(&path, CARS_JSON).unwrap();
    path.display().to_string()
}

#[test]
fn build_is_deterministic_and_iter_one_matches_greedy() {
    let dir = tempfile::tempdir().unwrap();
    let cars = cars_file(dir.path());
    let a = infodd(&["build", "--catalog", &cars], "");
    let b = infodd(&["build", "--catalog", &cars, "--algo", "greedy", "--structure", "dd"], "");
    let c = infodd(&["build", "--catalog", &cars, "--algo", "iter", "--iters", "1"], "");
    assert_eq!(a.code, 0, "{}", a.err);
    assert_eq!(a.out, b.out);
    assert_eq!(a.out, c.out);
    let d = deserialize(&a.out, None).unwrap();
    assert_eq!(d.kind(), DiagramKind::Reduced);
    assert_eq!(d.cost().levels, 3);

    let out = dir.path().join("tree.json");
    let t = infodd(
        &[
            "build",
            "--catalog",
            &cars,
            "--structure",
            "tree",
            "--criterion",
            "nodes,levels",
            "--out",
            out.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!((t.code, t.out.as_str()), (0, ""));
    assert!(std::fs::read_to_string(&out).unwrap().contains("\"kind\": \"tree\""));
}

#[test]
fn build_from_config_csv_and_monks() {
    let dir = tempfile::tempdir().unwrap();
    let cars = cars_file(dir.path());
    let config = dir.path().join("config.json");
    std::fs::write(&config, infodd::config::config_to_json(&InductionConfig::iter(3, DiagramKind::Tree))).unwrap();
    let r = infodd(&["build", "--catalog", &cars, "--config", config.to_str().unwrap()], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("\"kind\": \"tree\""));

    let csv = dir.path().join("cars.csv");
    std::fs::write(&csv, infodd::tabular::write_table_csv(&infodd::catalog::cars().table)).unwrap();
    let from_csv = infodd(&["build", "--csv", csv.to_str().unwrap(), "--schema", &cars], "");
    let from_catalog = infodd(&["build", "--catalog", &cars], "");
    assert_eq!(from_csv.code, 0, "{}", from_csv.err);
    assert_eq!(from_csv.out, from_catalog.out);

    let monks = dir.path().join("monks-1.test");
    std::fs::write(&monks, infodd::monks::format_monks(&infodd::monks::concept_table(1).unwrap())).unwrap();
    let m = infodd(&["build", "--monks", monks.to_str().unwrap(), "--algo", "iter", "--iters", "10"], "");
    assert_eq!(m.code, 0, "{}", m.err);
}

#[test]
fn analyze_and_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cars = cars_file(dir.path());
    let a = infodd(&["analyze", "--catalog", &cars], "");
    assert_eq!(a.code, 0);
    let v: serde_json::Value = serde_json::from_str(&a.out).unwrap();
    assert_eq!(v["ranking"][0], "price");
    assert_eq!(v["conditional"].as_object().unwrap().len(), 8);

    let diagram = dir.path().join("d.json");
    infodd(&["build", "--catalog", &cars, "--out", diagram.to_str().unwrap()], "");
    let p = infodd(&["paths", "--diagram", diagram.to_str().unwrap(), "--catalog", &cars], "");
    assert_eq!(p.code, 0, "{}", p.err);
    let lines: Vec<serde_json::Value> = p.out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 14);
    assert!(lines.iter().any(|l| l["product"] == "Nissan Primera 2.0SLX"));
    assert!(lines.iter().any(|l| l["leaf"].is_null()));
    let bare = infodd(&["paths", "--diagram", diagram.to_str().unwrap()], "");
    assert_eq!(bare.out.lines().count(), 14);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cars = cars_file(dir.path());
    assert_eq!(infodd(&[], "").code, 1);
    assert_eq!(infodd(&["frobnicate"], "").code, 1);
    assert_eq!(infodd(&["build"], "").code, 1);
    assert_eq!(infodd(&["build", "--catalog", &cars, "--algo", "anneal"], "").code, 1);
    assert_eq!(infodd(&["build", "--catalog", &cars, "--algo", "greedy", "--iters", "4"], "").code, 1);
    assert_eq!(infodd(&["build", "--catalog", &cars, "--criterion", "time"], "").code, 1);
    assert_eq!(infodd(&["bench", "--datasets", dir.path().to_str().unwrap(), "--iters", "0"], "").code, 1);

    let help = infodd(&["--help"], "");
    assert_eq!(help.code, 0);
    assert!(help.out.contains("navigate"));

    let missing = infodd(&["build", "--catalog", "/nonexistent/cars.json"], "");
    assert_eq!(missing.code, 2);
    assert!(missing.err.starts_with("error: "));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"variables\": 3}").unwrap();
    assert_eq!(infodd(&["analyze", "--catalog", bad.to_str().unwrap()], "").code, 2);
    let diagram = dir.path().join("cyclic.json");
    std::fs::write(&diagram, r#"{"kind":"tree","schema_ref":"","root":0,"nodes":[{"id":0,"var":0,"children":[0,0]}]}"#)
        .unwrap();
    assert_eq!(infodd(&["paths", "--diagram", diagram.to_str().unwrap()], "").code, 2);
}

#[test]
fn bench_writes_text_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    assert_eq!(infodd(&["fetch", "--dir", data.to_str().unwrap(), "--synthesize-tests"], "").code, 0);
    let report = dir.path().join("report.csv");
    let r = infodd(&["bench", "--datasets", data.to_str().unwrap(), "--report", report.to_str().unwrap()], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("monks3te"));
    assert!(r.out.contains("Total"));
    let csv = std::fs::read_to_string(&report).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 4);

    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let e = infodd(&["bench", "--datasets", empty.to_str().unwrap()], "");
    assert_eq!(e.code, 0);
    assert_eq!(infodd(&["bench", "--datasets", "/nonexistent"], "").code, 2);
}

#[test]
fn terminal_navigation() {
    let dir = tempfile::tempdir().unwrap();
    let cars = cars_file(dir.path());
    // price 1, gear 2, then undo, an invalid option and quit
    let r = infodd(&["navigate", "--catalog", &cars], "1\n2\nu\n9\nhello\nq\n");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("price?\n  1) less than 20,000\n"));
    assert!(r.out.contains("result: Nissan Primera 2.0SLX (#7)"));
    assert!(r.out.contains("answer 8 is not an option"));
    assert!(r.out.contains("type an option number"));

    let d = infodd_core::info_greedy(&infodd::catalog::cars().table, &InductionConfig::default()).unwrap();
    let mut out = Vec::new();
    navigate(&d, &mut Cursor::new(b"2\n1\n".to_vec()), &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("no product matches"));
    assert!(text.ends_with("> \n"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_infodd");
    let status = Command::new(bin).arg("--version").output().unwrap();
    assert!(status.status.success());
    assert_eq!(Command::new(bin).arg("bogus").output().unwrap().status.code(), Some(1));
    let data_error = Command::new(bin).args(["analyze", "--catalog", "/nonexistent"]).output().unwrap();
    assert_eq!(data_error.status.code(), Some(2));
}
