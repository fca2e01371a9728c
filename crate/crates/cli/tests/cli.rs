use std::fs;
use std::path::PathBuf;

use irrhodge::format::{emit, parse_file, parse_str};
use irrhodge::run;
use irrhodge_core::connection::Connection;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.json")).display().to_string()
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("irrhodge-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn spectrum_json_output() {
    let o = run(["irrhodge", "spectrum", &corpus("trivial"), "--json"], None);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["spectrum"], serde_json::json!([{"jump": "0/1", "multiplicity": 1}]));
    assert_eq!(v["normalization"], "raw");
    let o = run(["irrhodge", "spectrum", &corpus("rank-one-tate-m2"), "--json", "--normalize", "min0", "--filtration"], None);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["spectrum"][0]["jump"], "0/1");
    assert_eq!(v["filtration"][0]["beta"], "-2/1");
}

#[test]
fn saturation_cap_from_env_and_flag() {
    let o = run(["irrhodge", "spectrum", &corpus("control-irregular")], Some("3".into()));
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("within 3 steps"));
    let o = run(["irrhodge", "spectrum", &corpus("control-irregular"), "--max-sat", "5"], Some("3".into()));
    assert!(o.stderr.contains("within 5 steps"));
    let o = run(["irrhodge", "spectrum", &corpus("trivial")], Some("x".into()));
    assert_eq!(o.code, 1);
    assert!(o.stderr.starts_with("E_PARSE"));
}

#[test]
fn transforms() {
    let d = scratch("transform");
    let out = d.join("dual.json");
    let src = corpus("hyp-0-1_3-1_2");
    assert_eq!(run(["irrhodge", "transform", "dual", &src, "-o", out.to_str().unwrap()], None).code, 0);
    let twice = run(["irrhodge", "transform", "dual", out.to_str().unwrap()], None);
    let original = parse_file(&PathBuf::from(&src)).unwrap();
    assert_eq!(parse_str(&twice.stdout, None).unwrap().action(), original.action());
    assert_eq!(twice.stdout, emit(&Connection::new(3, original.action().clone()).unwrap()));

    let t = run(["irrhodge", "transform", "tensor", &corpus("hyp-0-0"), &corpus("filtered-0-1-2")], None);
    assert_eq!(parse_str(&t.stdout, None).unwrap().rank(), 6);
    let w = run(["irrhodge", "transform", "wedge", &corpus("hyp-0-0"), "--r", "3"], None);
    assert_eq!(w.code, 1);
    assert!(w.stderr.starts_with("E_SHAPE"));
    let e = run(["irrhodge", "transform", "tate", &corpus("trivial"), "--ell", "-1"], None);
    assert_eq!(parse_str(&e.stdout, None).unwrap(), Connection::trivial(1).tate_twist(-1));
    fs::remove_dir_all(&d).unwrap();
}

#[test]
fn corpus_round_trips() {
    for e in irrhodge::corpus::objects().into_iter().chain(irrhodge::corpus::controls()) {
        let text = emit(&e.connection);
        assert_eq!(parse_str(&text, None).unwrap(), e.connection, "{}", e.name);
    }
}

#[test]
fn verify_and_hypergeom_commands() {
    let o = run(["irrhodge", "verify", "hypergeom", "--alpha", "0,0"], None);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let o = run(["irrhodge", "verify", "hypergeom", "--alpha", "0,1/2", "--json"], None);
    assert_eq!(o.code, 4);
    let o = run(["irrhodge", "verify", "wedge", "--r", "2", "--n", "3"], None);
    assert_eq!(o.code, 0);
    let o = run(["irrhodge", "verify", "dual", &corpus("hyp-0-0"), &corpus("filtered-0-1-2")], None);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("2 checks, 0 failed"));
    let o = run(["irrhodge", "hypergeom", "--alpha", "1/3,1/3"], None);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("match with sign 1, shift 0/1"));
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(run(["irrhodge", "frobnicate"], None).code, 1);
    assert_eq!(run(["irrhodge", "--help"], None).code, 0);
    let d = scratch("errors");
    let bad = d.join("bad.json");
    fs::write(&bad, "{\"rank\": 1, \"matrix\": [[[\"1/0\"]]]}").unwrap();
    let o = run(["irrhodge", "spectrum", bad.to_str().unwrap()], None);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("E_PARSE") && o.stderr.contains("matrix[0][0][0]"));
    let o = run(["irrhodge", "spectrum", d.join("missing.json").to_str().unwrap()], None);
    assert_eq!(o.code, 1);
    fs::remove_dir_all(&d).unwrap();
}
