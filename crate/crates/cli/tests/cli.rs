use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::io::Write;

use serde_json::Value;

fn polylat(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polylat"))
        .args(args)
        .env("POLYLAT_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn polylat_stdin(cache: &Path, args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polylat"))
        .args(args)
        .env("POLYLAT_CACHE", cache)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let v: Value = serde_json::from_str(polylat_cli::SCHEMA).unwrap();
    jsonschema::JSONSchema::compile(&v).expect("schema compiles")
}

fn doc(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let s = schema();
    if let Err(errs) = s.validate(&v) {
        let msgs: Vec<String> = errs.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("schema: {msgs:?}");
    }
    v
}

fn status(out: &Output) -> Value {
    let line = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(line.lines().last().unwrap()).unwrap()
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn enumerate_trees() {
    let c = tmp();
    let args = [
        "enumerate", "--class", "tree", "--dim", "3", "--size", "5", "--boundary", "penetrable", "--convention",
        "contains-origin",
    ];
    let out = polylat(c.path(), &args);
    let v = doc(&out);
    assert_eq!(v["total"], "3390");
    assert_eq!(status(&out)["cache_hit"], false);
    let again = polylat(c.path(), &args);
    assert_eq!(again.stdout, out.stdout);
    assert_eq!(status(&again)["cache_hit"], true);
}

#[test]
fn odd_polygons() {
    let c = tmp();
    let v = doc(&polylat(c.path(), &["enumerate", "--class", "polygon", "--dim", "3", "--size", "7"]));
    assert_eq!(v["total"], "0");
    assert_eq!(v["visit_histogram"], Value::Array(vec![]));
}

#[test]
fn by_topology_and_threads() {
    let c = tmp();
    let base = ["enumerate", "--class", "tree", "--dim", "3", "--size", "5", "--by-topology", "--no-cache"];
    let one = polylat(c.path(), &base);
    let v = doc(&one);
    let mut sizes: Vec<u64> = v["topologies"].as_array().unwrap().iter().map(|t| t["total"].as_str().unwrap().parse().unwrap()).collect();
    sizes.sort();
    assert_eq!(sizes, [75, 1500, 1815]);
    let mut args = base.to_vec();
    args.extend(["--threads", "3"]);
    assert_eq!(polylat(c.path(), &args).stdout, one.stdout);
}

#[test]
fn output_file_is_atomic_and_stable() {
    let c = tmp();
    let f = c.path().join("out").join("walks.json");
    let fs = f.to_str().unwrap();
    let args = ["enumerate", "--class", "walk", "--dim", "3", "--size", "4", "--convention", "from-origin", "-o", fs];
    assert!(polylat(c.path(), &args).status.success());
    let first = std::fs::read(&f).unwrap();
    let out = polylat(c.path(), &args);
    assert_eq!(status(&out)["cache_hit"], true);
    assert_eq!(std::fs::read(&f).unwrap(), first);
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["total"], "726");
    let names: Vec<_> = std::fs::read_dir(f.parent().unwrap()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 1, "no temporary files left behind");
}

#[test]
fn thermo_at_zero() {
    let c = tmp();
    let args = ["thermo", "--class", "tree", "--dim", "3", "--size", "5", "--betas", "0", "--format", "json"];
    let v = doc(&polylat(c.path(), &args));
    let row = &v["rows"][0];
    assert_eq!(row["Z"], "3390");
    assert!((row["F"].as_f64().unwrap() - 3390f64.ln() / 5.0).abs() < 1e-12);
    let v = doc(&polylat(c.path(), &["quenched", "--class", "tree", "--dim", "3", "--size", "5", "--betas", "0", "--format", "json"]));
    assert!((v["rows"][0]["FQ"].as_f64().unwrap() - 1.46980).abs() < 5e-6);
    assert_eq!(v["topologies"].as_array().unwrap().len(), 3);
}

#[test]
fn csv_columns_and_zero_row() {
    let c = tmp();
    let out = polylat(c.path(), &["thermo", "--class", "walk", "--dim", "2", "--size", "6", "--boundary", "impenetrable"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "class,d,N,boundary,convention,beta,Z,F,FQ,E_sigma,EQ_sigma,dF,dFQ");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 25);
    let zero = rows.iter().find(|r| r[5] == "0").unwrap();
    assert_eq!((zero[11], zero[12]), ("0", "0"));
    assert_eq!(status_of(&c, &["thermo", "--class", "walk", "--dim", "2", "--size", "6"])["checks_pass"], true);
}

fn status_of(c: &tempfile::TempDir, args: &[&str]) -> Value {
    status(&polylat(c.path(), args))
}

#[test]
fn comb_surface_flags() {
    let c = tmp();
    for n in 1..=8 {
        let size = n.to_string();
        let args = ["thermo", "--class", "comb", "--dim", "3", "--size", &size, "--boundary", "impenetrable", "--beta-min", "0", "--beta-max", "2", "--beta-step", "0.5", "--format", "json"];
        let v = doc(&polylat(c.path(), &args));
        assert_eq!(v["checks"]["comb_surface"]["all_pass"], true, "N={n}");
        assert_eq!(v["checks"]["all_pass"], true, "N={n}");
    }
}

#[test]
fn madras_bound() {
    let c = tmp();
    let v = doc(&polylat(c.path(), &["bounds", "--madras", "--dim", "2", "--n", "15", "--count", "338158676"]));
    let x = v["value"].as_f64().unwrap();
    assert!((4.3442..4.3443).contains(&x), "{x}");
    let v = doc(&polylat(c.path(), &["bounds", "--madras", "--dim", "2", "--n", "6"]));
    assert_eq!(v["counts"][0], polylat_oracle::tree_count(2, 6).to_string());
    let v = doc(&polylat(c.path(), &["bounds", "--submultiplicative", "--counts", "4,12,36,100", "--g", "1"]));
    assert_eq!(v["kind"], "upper-submultiplicative");
}

#[test]
fn chain_into_knot() {
    let c = tmp();
    let out = polylat(c.path(), &["construct", "phi_chain", "--t", "3"]);
    assert!(out.status.success());
    let v = doc(&polylat_stdin(c.path(), &["knot"], &out.stdout));
    assert_eq!(v["determinant"], "27");
    let phi = polylat(c.path(), &["construct", "phi30"]);
    let p = polylat::Polymer::parse_line(std::str::from_utf8(&phi.stdout).unwrap()).unwrap();
    assert_eq!(p.edges().len(), 30);
    let v = doc(&polylat_stdin(c.path(), &["knot"], &phi.stdout));
    assert_eq!(v["determinant"], "3");
    assert_eq!(v["alexander"], serde_json::json!(["1", "-1", "1"]));
}

#[test]
fn decompose_writes_pieces() {
    let c = tmp();
    let w = polylat(c.path(), &["construct", "witness", "--signature", "2;1,1,1;2,2", "--dim", "2"]);
    assert!(w.status.success());
    let input = c.path().join("comb.txt");
    std::fs::write(&input, &w.stdout).unwrap();
    let dir = c.path().join("pieces");
    let v = doc(&polylat(c.path(), &["decompose", input.to_str().unwrap(), "--split", "4", "--out-dir", dir.to_str().unwrap()]));
    let mut edges = 0;
    for piece in v["pieces"].as_array().unwrap() {
        let text = std::fs::read_to_string(piece["file"].as_str().unwrap()).unwrap();
        let p = polylat::Polymer::parse_line(&text).unwrap();
        assert!(p.is_valid());
        assert_eq!(p.edges().len() as u64, piece["edges"].as_u64().unwrap());
        edges += p.edges().len();
    }
    assert_eq!(edges, 7);
    assert_eq!(v["pieces"][0]["edges"], 4);
}

#[test]
fn plus_map_recipe() {
    let c = tmp();
    let out = polylat_stdin(c.path(), &["construct", "plus_map"], b"comb 2; 0,0 1,0; 0-1; 0>1\n");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let p = polylat::Polymer::parse_line(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(p.edges().len(), 3);
}

fn error_of(out: &Output) -> Value {
    let v: Value = serde_json::from_str(String::from_utf8_lossy(&out.stderr).lines().last().unwrap()).unwrap();
    assert!(schema().is_valid(&v));
    v
}

#[test]
fn exit_codes() {
    let c = tmp();
    let out = polylat(c.path(), &["enumerate", "--class", "knot", "--dim", "3", "--size", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["error"]["category"], "validation");
    let out = polylat(c.path(), &["enumerate", "--class", "tree", "--dim", "1", "--size", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = polylat(c.path(), &["enumerate", "--class", "tree", "--dim", "3", "--size", "30"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_of(&out)["error"]["category"], "budget");
    let out = polylat(c.path(), &["enumerate", "--class", "tree", "--dim", "2", "--size", "9", "--budget", "10", "--no-cache"]);
    assert_eq!(out.status.code(), Some(3));
    let out = polylat_stdin(c.path(), &["knot"], b"not a polymer\n");
    assert_eq!(out.status.code(), Some(2));
    let out = polylat(c.path(), &["thermo", "--class", "tree", "--dim", "2", "--size", "4", "--betas", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repro_quick_rows() {
    let c = tmp();
    let v = doc(&polylat(c.path(), &["repro", "--only", "1,2,6", "--format", "json"]));
    let rows = v["criteria"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["pass"] == true));
}
