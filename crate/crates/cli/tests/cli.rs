use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const QUINTIC: &str = "-1,-1,-1,-1,0,1";
const GOLDEN: &str = "-1,-1,1";
const POINT: &str = "1/(b^2-1)";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betadim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no line {key:?} in\n{text}"))
        .trim()
}

#[test]
fn pisot_exit_codes() {
    let o = run(&["pisot", "--minpoly", QUINTIC]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["certificate"]["status"], "Pisot");
    assert_eq!(v["certificate"]["is_pisot"], true);

    assert_eq!(code(&run(&["pisot", "--minpoly", "-2,1"])), 0);
    let o = run(&["pisot", "--minpoly", "-3,0,1", "--format", "table"]);
    assert_eq!(code(&o), 2);
    assert_eq!(field(&stdout(&o), "status"), "not pisot");
}

#[test]
fn invalid_input_is_64() {
    for args in [
        &["pisot", "--minpoly", "1,2"][..],
        &["pisot", "--minpoly", "x,1"],
        &["orbit", "--minpoly", GOLDEN, "-x", "1/(b"],
        &["orbit", "--minpoly", GOLDEN, "-x", "1/0"],
        &["orbit", "--minpoly", GOLDEN, "-x", "1", "-m", "0"],
        &["frobnicate"],
        &["pisot", "--minpoly", GOLDEN, "--format", "dot"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 64, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn orbit_sizes_and_errors() {
    let o = run(&["orbit", "--minpoly", QUINTIC, "-x", POINT]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().next(), Some("k = 10"));

    let o = run(&["orbit", "--minpoly", GOLDEN, "-x", "0"]);
    assert_eq!(stdout(&o).lines().next(), Some("k = 1"));

    let o = run(&["orbit", "--minpoly", GOLDEN, "-x", "1"]);
    assert_eq!(stdout(&o).lines().next(), Some("k = 4"));

    assert_eq!(code(&run(&["orbit", "--minpoly", GOLDEN, "-x", "3"])), 65);

    let o = run(&[
        "orbit",
        "--minpoly",
        "-3,0,1",
        "-m",
        "2",
        "-x",
        "1/2",
        "--state-cap",
        "40",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 4);
    let v = json(&o);
    assert_eq!(v["cap_hit"], "states");
    assert!(v["states_found"].as_u64().unwrap() >= 40);
}

#[test]
fn orbit_formats() {
    let o = run(&["orbit", "--minpoly", GOLDEN, "-x", "1", "--format", "csv"]);
    assert_eq!(stdout(&o), "0,1,1,0\n0,1,0,0\n1,0,0,1\n0,0,0,1\n");
    let o = run(&["orbit", "--minpoly", GOLDEN, "-x", "1", "--format", "dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph orbit {"));
    assert!(dot.contains("  0 -> 1 [label=\"0\"];"));
    assert!(dot.contains("  2 -> 3 [label=\"1\"];"));
}

#[test]
fn dimension_of_quintic_point() {
    let o = run(&["dimension", "--minpoly", QUINTIC, "-x", POINT, "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["k"], 10);
    assert_eq!(v["condition1"], "verified_primitive");
    let alpha = v["alpha_approx"].as_f64().unwrap();
    let dim = v["dim_approx"].as_f64().unwrap();
    assert!((alpha - 1.324_717_957).abs() < 1e-8);
    assert!((dim - 0.405_685_231).abs() < 1e-8);
    assert_eq!(v["char_poly"], serde_json::json!([1, 0, 0, 0, 0, -2, 0, 0, -1, 0, 1]));
}

#[test]
fn dimension_condition_failure_and_trivial_orbit() {
    let o = run(&["dimension", "--minpoly", GOLDEN, "-x", "1"]);
    assert_eq!(code(&o), 5);
    let out = stdout(&o);
    assert!(field(&out, "alpha").starts_with("[1.000000000000, 1.000000000000]"));
    assert_eq!(field(&out, "condition 1"), "failed_peripheral_spectrum");
    assert!(field(&out, "dimension").starts_with("<= log_2(alpha)"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("condition 1 not established"));

    let o = run(&["dimension", "--minpoly", GOLDEN, "-x", "0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["dim"], serde_json::json!(["0", "0"]));
}

#[test]
fn expansions() {
    let o = run(&["expand", "--minpoly", GOLDEN, "-x", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(field(&out, "expansion"), "11(0)");
    assert_eq!(field(&out, "sum"), "equals x exactly");

    let o = run(&["expand", "--minpoly", GOLDEN, "-x", "0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["text"], "(0)");

    let o = run(&[
        "expand",
        "--minpoly",
        GOLDEN,
        "-x",
        "1",
        "--rule",
        "lazy",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["sums_to_point"], true);

    assert_eq!(
        code(&run(&["expand", "--minpoly", GOLDEN, "-x", "1", "--rule", "sideways"])),
        64
    );
}

#[test]
fn expansion_without_period_exits_4() {
    // digit sequences of a non-Pisot base need not recur
    let o = run(&["expand", "--minpoly", "-3,0,1", "-m", "2", "-x", "1", "--steps", "30"]);
    assert_eq!(code(&o), 4);
    assert_eq!(field(&stdout(&o), "period"), "no period within 30 steps");
}

#[test]
fn interval_table_rule() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rule.json");
    // greedy for the golden mean: digit 1 on [1/b, 1/(b-1)], 0 below
    let rule = r#"[
        {"lo": {"coeffs": ["0", "0"]}, "hi": {"coeffs": ["-1", "1"]}, "lo_closed": true, "hi_closed": false, "digit": 0},
        {"lo": {"coeffs": ["-1", "1"]}, "hi": {"coeffs": ["0", "1"]}, "lo_closed": true, "hi_closed": true, "digit": 1}
    ]"#;
    std::fs::write(&path, rule).unwrap();
    let arg = format!("@{}", path.display());
    let by_table = run(&[
        "expand",
        "--minpoly",
        GOLDEN,
        "-x",
        "1",
        "--rule",
        &arg,
        "--format",
        "json",
    ]);
    let greedy = run(&["expand", "--minpoly", GOLDEN, "-x", "1", "--format", "json"]);
    assert_eq!(code(&by_table), 0);
    assert_eq!(by_table.stdout, greedy.stdout);
}

#[test]
fn count_methods_agree() {
    let o = run(&[
        "count",
        "--minpoly",
        QUINTIC,
        "-x",
        POINT,
        "-n",
        "14",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,matrix,brute"));
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1], cells[2], "{line}");
    }
    assert!(out.contains("\n10,26,26\n"));

    let o = run(&[
        "count",
        "--minpoly",
        GOLDEN,
        "-x",
        "1",
        "-n",
        "5",
        "--method",
        "matrix",
        "--format",
        "json",
    ]);
    let v = json(&o);
    assert_eq!(v[5]["matrix"], "6");
    assert!(v[5]["brute"].is_null());
}

#[test]
fn spectrum_csv() {
    let o = run(&["spectrum", "--minpoly", "-2,1", "--n-max", "3", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "level,count,min_gap_lo,min_gap_hi,max_gap_lo,max_gap_hi");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("3,8,2.000000000000,2.000000000000"));

    let o = run(&["spectrum", "--minpoly", GOLDEN, "--n-max", "8"]);
    assert_eq!(field(&stdout(&o), "stabilized"), "yes");
}

#[test]
fn orbit_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbit.json");
    let matrix = dir.path().join("matrix.csv");
    let p = path.to_str().unwrap();
    let o = run(&[
        "orbit",
        "--minpoly",
        QUINTIC,
        "-x",
        POINT,
        "--out",
        p,
        "--matrix-out",
        matrix.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(Path::new(&path.with_extension("dot")).exists());
    assert_eq!(std::fs::read_to_string(&matrix).unwrap().lines().count(), 10);

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["states"].as_array().unwrap().len(), 10);

    let direct = run(&["dimension", "--minpoly", QUINTIC, "-x", POINT, "--format", "json"]);
    let loaded = run(&["dimension", "--orbit", p, "--format", "json"]);
    assert_eq!(code(&loaded), 0);
    assert_eq!(direct.stdout, loaded.stdout);

    let counted = run(&["count", "--orbit", p, "-n", "12"]);
    assert_eq!(code(&counted), 0);

    // a point given as element JSON from a file
    let x_path = dir.path().join("x.json");
    std::fs::write(&x_path, serde_json::to_string(&doc["states"][0]).unwrap()).unwrap();
    let x_arg = format!("@{}", x_path.display());
    let again = run(&["orbit", "--minpoly", QUINTIC, "-x", &x_arg, "--format", "json"]);
    let reloaded: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(reloaded, doc);

    // tampered documents are rejected
    let mut bad = doc.clone();
    bad["edges"][0][2] = serde_json::json!(9);
    std::fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
    assert_eq!(code(&run(&["dimension", "--orbit", p])), 64);
}

#[test]
fn output_is_deterministic() {
    let args = ["orbit", "--minpoly", QUINTIC, "-x", POINT, "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["spectrum", "--minpoly", GOLDEN, "--n-max", "9", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
