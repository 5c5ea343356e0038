//! Golden-file tests: each case runs twice (idempotence) and compares with
//! `tests/golden/<name>.json`. Set `GPTW_BLESS=1` to rewrite the files.

use std::path::PathBuf;

fn run(args: &[&str]) -> (u8, String) {
    gptw::run(std::iter::once("gptw").chain(args.iter().copied()))
}

fn golden(name: &str, args: &[&str], expected_code: u8) -> serde_json::Value {
    let (code, out) = run(args);
    let (code2, out2) = run(args);
    assert_eq!((code, &out), (code2, &out2), "{name}: output is not idempotent");
    assert_eq!(code, expected_code, "{name}: exit code; output:\n{out}");
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("GPTW_BLESS").is_some() {
        std::fs::write(&path, &out).unwrap();
    } else {
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {path:?}"));
        assert_eq!(out, expected, "{name}: output differs from golden file");
    }
    serde_json::from_str(&out).expect("output is JSON")
}

fn error_kind(v: &serde_json::Value) -> &str {
    v["error"]["kind"].as_str().expect("error object")
}

#[test]
fn build() {
    let v = golden("build_gbit", &["build", "--space", "gbit"], 0);
    assert_eq!(v["vertex_count"], 4);
    assert_eq!(v["linear_dimension"], 3);
    let v = golden("build_ball3", &["build", "--space", "ball3"], 0);
    assert_eq!(v["kind"], "ball3");
    let v = golden("build_square_file", &["build", "--space", "tests/data/square_h.json"], 0);
    assert_eq!(v["label"], "square_h");
    assert_eq!(v["vertex_count"], 4);
}

#[test]
fn vertices() {
    let v = golden("vertices_boxworld2", &["vertices", "--space", "boxworld2"], 0);
    assert_eq!(v["count"], 24);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 24);
    let v = golden("vertices_triangle_file", &["vertices", "--space", "tests/data/triangle_v.json"], 0);
    assert_eq!(v["count"], 3);
}

#[test]
fn adjacency() {
    let v = golden("adjacency_gbit", &["adjacency", "--space", "gbit"], 0);
    assert_eq!(v["degrees"], serde_json::json!([2, 2, 2, 2]));
    let v = golden("adjacency_boxworld2_summary", &["adjacency", "--space", "boxworld2", "--summary"], 0);
    assert_eq!(v, serde_json::json!({"local_degree": 17, "local_to_local": 13, "local_to_pr": 4, "pr_degree": 8}));
    let v = golden("adjacency_gbit_summary", &["adjacency", "--space", "gbit", "--summary"], 2);
    assert_eq!(error_kind(&v), "input");
}

#[test]
fn classify() {
    let v = golden("classify_canonical_pr", &["classify", "--table", "tests/data/canonical_pr.json"], 0);
    assert_eq!(v, serde_json::json!({"class": "PRBox", "index": 3}));
    let v = golden("classify_boxworld2", &["classify", "--space", "boxworld2"], 0);
    assert_eq!((v["local"].as_u64(), v["pr"].as_u64()), (Some(16), Some(8)));
    let v = golden("classify_uniform", &["classify", "--table", "tests/data/uniform.json"], 2);
    assert_eq!(error_kind(&v), "not_a_vertex");
}

#[test]
fn symmetries_and_orbits() {
    let v = golden("symmetries_gbit", &["symmetries", "--space", "gbit"], 0);
    assert_eq!(v["order"], 8);
    assert_eq!(v["elements"].as_array().unwrap().len(), 8);
    let v = golden("symmetries_boxworld2_summary", &["symmetries", "--space", "boxworld2", "--summary"], 0);
    assert_eq!(v["order"], 128);
    assert!(v.get("elements").is_none());
    let v = golden("orbits_gbit", &["orbits", "--space", "gbit"], 0);
    assert_eq!(v["classes"], serde_json::json!([[0, 1, 2, 3]]));
    let v = golden("orbits_boxworld2", &["orbits", "--space", "boxworld2"], 0);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
    let v = golden("symmetries_ball3", &["symmetries", "--space", "ball3"], 2);
    assert_eq!(error_kind(&v), "unsupported");
}

#[test]
fn chsh() {
    let v = golden("chsh_pr0", &["chsh", "--table", "tests/data/pr0.json"], 0);
    assert_eq!(v, serde_json::json!({"chsh_max": "4/1"}));
    let v = golden(
        "chsh_angles",
        &["chsh", "--angles", "0,1.5707963267948966,0.7853981633974483,-0.7853981633974483"],
        0,
    );
    assert_eq!(v["inexact"], true);
    assert!((v["chsh_max"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    let v = golden("chsh_signalling", &["chsh", "--table", "tests/data/signalling.json"], 2);
    assert_eq!(error_kind(&v), "schema");
    let v = golden("chsh_no_input", &["chsh"], 2);
    assert_eq!(error_kind(&v), "usage");
}

#[test]
fn decompose() {
    let v = golden("decompose_gbit_centre", &["decompose", "--space", "gbit", "--state", "1/2,1/2"], 0);
    assert_eq!(v["decompositions"].as_array().unwrap().len(), 2);
    let v = golden("decompose_limit", &["decompose", "--space", "gbit", "--state", "1/2,1/2", "--limit", "1"], 0);
    assert_eq!(v["decompositions"].as_array().unwrap().len(), 1);
    let v = golden("decompose_bad_rational", &["decompose", "--space", "gbit", "--state", "1/0,1"], 2);
    assert_eq!(error_kind(&v), "parse");
    let v = golden("decompose_outside", &["decompose", "--space", "gbit", "--state", "2,0"], 2);
    assert_eq!(error_kind(&v), "input");
}

#[test]
fn bloch() {
    let v = golden("bloch_x_gate", &["bloch", "--vector", "1,0,0", "--unitary", "0,0,1,0,1,0,0,0"], 0);
    assert_eq!(v["inexact"], true);
    assert_eq!(v["rotation"], serde_json::json!([[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]));
    let v = golden("bloch_outside_ball", &["bloch", "--vector", "1,1,0"], 2);
    assert_eq!(error_kind(&v), "input");
    let v = golden("bloch_not_unitary", &["bloch", "--unitary", "2,0,0,0,0,0,2,0"], 2);
    assert_eq!(error_kind(&v), "input");
}

#[test]
fn postulates() {
    let v = golden("postulates_gbit_boxworld2", &["postulates", "--space", "gbit", "--composite", "boxworld2"], 0);
    let r = &v["results"];
    assert_eq!(r["ContinuousReversibility"]["outcome"], "Fail");
    assert_eq!(r["TomographicLocality"]["outcome"], "Pass");
    assert_eq!(r["InformationUnit_Interaction"]["outcome"], "Fail");
    assert_eq!(r["NoSimultaneousEncoding"]["outcome"], "Fail");
    let v = golden("postulates_ball3", &["postulates", "--space", "ball3"], 0);
    assert_eq!(v["results"]["ContinuousReversibility"]["outcome"], "Pass");
    let v = golden("postulates_unknown", &["postulates", "--space", "qutrit"], 2);
    assert_eq!(error_kind(&v), "input");
}

#[test]
fn report() {
    let v = golden("report", &["report"], 0);
    assert_eq!(v["census"]["vertices"], 24);
    assert_eq!(v["symmetry"]["boxworld2"]["order"], 128);
    assert_eq!(v["chsh"]["canonical_pr_box"], "4/1");
    assert_eq!(v["encoding"]["joint_readout"]["status"], "Infeasible");
}

#[test]
fn file_errors() {
    let v = golden("missing_file", &["vertices", "--space", "tests/data/absent.json"], 2);
    assert_eq!(error_kind(&v), "input");
    let v = golden("bad_rational_file", &["vertices", "--space", "tests/data/bad_rational.json"], 2);
    assert_eq!(error_kind(&v), "schema");
    let v = golden("unbounded_file", &["vertices", "--space", "tests/data/half_line.json"], 2);
    assert_eq!(error_kind(&v), "unbounded");
    let v = golden("vertices_ball3", &["vertices", "--space", "ball3"], 2);
    assert_eq!(error_kind(&v), "unsupported");
    let v = golden("unknown_subcommand", &["frobnicate"], 2);
    assert_eq!(error_kind(&v), "usage");
    let v = golden("bad_format", &["vertices", "--space", "gbit", "--format", "yaml"], 2);
    assert_eq!(error_kind(&v), "usage");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let (code, stdout) = run(&["vertices", "--space", "gbit", "--out", path.to_str().unwrap()]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    let (_, direct) = run(&["vertices", "--space", "gbit"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn help_exits_zero() {
    let (code, out) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("adjacency"));
}
