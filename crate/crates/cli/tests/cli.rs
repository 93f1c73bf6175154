use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fbr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbr"))
        .args(args)
        .env_remove("FBR_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = fbr(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.json"));
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&raw).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{name} document violates its schema: {msgs:?}");
}

#[test]
fn documents_match_their_schemas() {
    let cases: &[(&str, &[&str])] = &[
        ("basis", &["basis", "--group", "S3", "--fiber", "2"]),
        ("multiply", &["multiply", "--group", "C4", "--fiber", "4", "--left", "1,2:-1", "--right", "3"]),
        ("species", &["species", "--group", "C4", "--fiber", "4"]),
        ("idempotents", &["idempotents", "--group", "S3", "--fiber", "6"]),
        ("spectrum", &["spectrum", "--group", "S3", "--fiber", "2"]),
        ("spectrum", &["spectrum", "--group", "A4", "--fiber", "6", "--char", "3"]),
        ("blocks", &["blocks", "--group", "A5", "--fiber", "1"]),
        ("weyl", &["weyl", "--group", "S5", "--fiber", "2", "--perfect", "A5"]),
        ("verify-all", &["verify-all", "--group", "S3", "--fiber", "2"]),
    ];
    for (name, args) in cases {
        assert_valid(name, &json(args));
    }
    let mut broken = json(&["basis", "--group", "C2", "--fiber", "2"]);
    broken.as_object_mut().unwrap().remove("orbits");
    assert!(!schema("basis").is_valid(&broken));
}

#[test]
fn documented_examples() {
    let basis = json(&["basis", "--group", "C2", "--fiber", "2"]);
    assert_eq!(basis["orbits"].as_array().unwrap().len(), 3);

    let blocks = json(&["blocks", "--group", "A5", "--fiber", "1"]);
    assert_eq!(blocks["blocks"].as_array().unwrap().len(), 2);

    let weyl = json(&["weyl", "--group", "S5", "--fiber", "2", "--perfect", "A5"]);
    assert_eq!(weyl["weyl"]["weylOrder"], 2);
    assert_eq!(weyl["weyl"]["rows"].as_array().unwrap().len(), 3);

    let s5 = json(&["basis", "--group", "perm:5:(1 2 3 4 5);(1 2)"]);
    assert_eq!(s5["groupOrder"], 120);
    assert_eq!(s5["rank"], 19);

    let trivial = fbr(&["verify-all", "--group", "C1"]);
    assert!(trivial.status.success());
    let text = String::from_utf8(trivial.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().all(|l| l.contains(": PASS")));
}

#[test]
fn exit_codes() {
    assert_eq!(fbr(&["basis", "--group", "X9"]).status.code(), Some(1));
    assert_eq!(fbr(&["basis", "--group", "S3", "--fiber", "2xq"]).status.code(), Some(1));
    assert_eq!(fbr(&["multiply", "--group", "S3", "--left", "99", "--right", "0"]).status.code(), Some(1));
    assert_eq!(fbr(&["weyl", "--group", "S4", "--perfect", "A5"]).status.code(), Some(1));
    assert_eq!(fbr(&["basis"]).status.code(), Some(1));
    assert_eq!(fbr(&["basis", "--group", "S5", "--cap-order", "100"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_stable_and_cache_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["species", "--group", "D4", "--fiber", "2", "--format", "json"];
    let plain = fbr(&args).stdout;
    let mut cached_args = args.to_vec();
    cached_args.extend(["--cache-dir", cache]);
    let first = fbr(&cached_args);
    let second = fbr(&cached_args);
    assert_eq!(plain, first.stdout);
    assert_eq!(plain, second.stdout);
    assert!(second.stderr.is_empty(), "{}", String::from_utf8_lossy(&second.stderr));

    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, "garbage").unwrap();
    let recovered = fbr(&cached_args);
    assert_eq!(plain, recovered.stdout);
    assert!(String::from_utf8_lossy(&recovered.stderr).contains("recomputing"));

    let mut sequential = args.to_vec();
    sequential.push("--sequential");
    assert_eq!(plain, fbr(&sequential).stdout);
}
