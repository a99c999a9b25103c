use std::process::Command;

use lsqmc::cli::{fmt_float, main_with_args};
use lsqmc::{sequence_prefix, LsParams};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lsqmc").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lsqmc"))
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["gen", "--params", "2,3", "-N", "500"][..],
        &["halton", "--p1", "1,1", "--p2", "4,1", "-N", "300", "--format", "svg"],
        &["disc2d", "--p1", "3,1", "--p2", "4,1", "-N", "400", "--format", "json"],
        &["scan", "--params", "1,2", "--kind", "partition", "--levels", "1,4,8"],
    ] {
        let (c1, a, _) = run(args);
        let (c2, b, _) = run(args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b, "{args:?}");
    }
    let first = bin().args(["vdc", "--params", "1,3", "-N", "64"]).output().unwrap();
    let second = bin().args(["vdc", "--params", "1,3", "-N", "64"]).output().unwrap();
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn gen_csv_round_trips() {
    let (code, out, _) = run(&["gen", "--params", "1,1", "-N", "200"]);
    assert_eq!(code, 0);
    let ps = LsParams::new(1, 1).unwrap();
    let expected = sequence_prefix(ps, 200);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["i", "index", "x", "p", "q"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 200);
    for (k, row) in rows.iter().enumerate() {
        let x: f64 = row[2].parse().unwrap();
        assert_eq!(row[2], fmt_float(x));
        assert_eq!(x, fmt_float(expected.shadow()[k]).parse::<f64>().unwrap());
        let p: num_rational::BigRational = row[3].parse().unwrap();
        let q: num_rational::BigRational = row[4].parse().unwrap();
        assert_eq!((&p, &q), (expected.points()[k].p(), expected.points()[k].q()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["i", "index", "x", "p", "q"]).unwrap();
    for r in &rows {
        w.write_record(r).unwrap();
    }
    assert_eq!(String::from_utf8(w.into_inner().unwrap()).unwrap(), out);
}

#[test]
fn partition_csv_lists_level() {
    let (code, out, _) = run(&["partition", "--params", "1,1", "-n", "2"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let kinds: Vec<String> = rdr.records().map(|r| r.unwrap()[4].to_string()).collect();
    assert_eq!(kinds, ["long", "short", "long"]);
}

#[test]
fn svg_is_valid_and_has_one_marker_per_point() {
    let dir = std::env::temp_dir().join(format!("lsqmc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig.svg");
    let (code, _, _) = run(&[
        "halton", "--p1", "1,1", "--p2", "4,1", "-N", "750", "--svg", path.to_str().unwrap(), "--grid",
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.attribute("width"), Some("600"));
    assert_eq!(root.attribute("height"), Some("600"));
    assert_eq!(root.attribute("viewBox"), Some("0 0 600 600"));
    let circles = root.descendants().filter(|n| n.has_tag_name("circle")).count();
    assert_eq!(circles, 750);
    assert_eq!(root.descendants().filter(|n| n.has_tag_name("line")).count(), 22);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn resonance_json() {
    let (code, out, _) = run(&["resonance", "--p1", "1,1", "--p2", "4,1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"related": true, "p": 3, "q": 1, "field_match": true, "count_relation": 3})
    );
    let (_, out, _) = run(&["resonance", "--p1", "3,1", "--p2", "5,1", "--format", "csv"]);
    assert_eq!(out, "related,p,q,field_match,count_relation\nfalse,,,false,\n");
}

#[test]
fn single_point_discrepancy() {
    let (code, out, _) = run(&["disc1d", "--params", "1,1", "-N", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for report in v.as_array().unwrap() {
        assert_eq!(report["D"], 1.0);
    }
    let (_, out, _) = run(&["disc1d", "--params", "1,1", "-N", "1", "--measure", "star"]);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let row = rdr.records().next().unwrap().unwrap();
    assert_eq!((&row[0], &row[2]), ("star", "1"));
}

#[test]
fn invalid_input_exits_with_one() {
    for args in [
        &["gen", "--params", "0,1", "-N", "5"][..],
        &["gen", "--params", "1", "-N", "5"],
        &["gen", "--params", "1,1", "-N", "5", "--bogus"],
        &["disc1d", "--params", "1,1", "-N", "0"],
        &["gen", "-N", "5"],
        &["gen", "--params", "1,1", "-N", "5", "--format", "svg"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 1, "{args:?}");
        assert!(!err.is_empty());
    }
    let out = bin().args(["partition", "--params", "0,2", "-n", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn resource_guard_exits_with_two() {
    let out = bin()
        .args(["partition", "--params", "1,1", "-n", "20"])
        .env("LSQMC_MAX_INTERVALS", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1000"));
    let ok = bin()
        .args(["partition", "--params", "1,1", "-n", "14"])
        .env("LSQMC_MAX_INTERVALS", "1000")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap().lines().count(), 988);
}

#[test]
fn help_lists_subcommands() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["gen", "partition", "disc1d", "disc2d", "vdc", "halton", "resonance", "scan"] {
        assert!(out.contains(sub), "{sub}");
    }
}
