use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn loja(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loja"))
        .args(args)
        .env_remove("LOJA_TOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn parse_and_eval() {
    let out = loja(&["parse", "x1 + 2*x1^2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["canonical"], "(x1 + (2 * x1^2))");
    let out = loja(&["eval", "x1 - floor(x1)", "--at", "2.25"]);
    assert_eq!(json(&out)["value"], 0.25);
}

#[test]
fn functions_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "g.fn", "piecewise{ x1 > 0 : 0 ;\n x1 == 0 : 1 }\n");
    let out = loja(&["eval", &f, "--at", "0"]);
    assert_eq!(json(&out)["value"], 1.0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(loja(&["parse", "x1 +"]).status.code(), Some(2));
    assert_eq!(loja(&["eval", "sqrt(x1)", "--at", "-1"]).status.code(), Some(2));
    assert_eq!(loja(&["hausdorff", "/no/such/a", "/no/such/b"]).status.code(), Some(2));
    assert_eq!(loja(&["paper-suite", "--only", "ex9_9"]).status.code(), Some(2));
    assert_eq!(loja(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn zeroset_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("z.csv");
    let out = loja(&[
        "zeroset", "--fn", "x1*(x1-1)", "--domain", "-1,2", "--format", "csv", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,abs_f");
    assert_eq!(lines.len(), 3);
}

#[test]
fn fit_reports_checks() {
    let out = loja(&[
        "fit", "--f", "x1^3", "--g", "x1", "--domain", "-1,1", "--samples", "2001", "--check-star",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["alpha"].as_f64().unwrap() - 3.0).abs() < 0.03);
    assert_eq!(v["star_condition"], "pass");
    assert_eq!(v["g_bounded"], "skipped");

    let out = loja(&[
        "fit", "--f", "x1", "--g", "piecewise{ x1 < 1 : 1/(1-x1) ; x1 == 1 : 1 }", "--domain",
        "0,0.99999999", "--check-bounded",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["g_bounded"], "fail");

    let out = loja(&["fit", "--f", "x1", "--g", "x1^3", "--domain", "0,1", "--reverse", "--samples", "1000"]);
    assert_eq!(json(&out)["alpha"], 3.0);
}

#[test]
fn multifunction_commands() {
    let dir = tempfile::tempdir().unwrap();
    let lines: Vec<String> = (0..=40)
        .map(|i| {
            let x = -1.0 + i as f64 * 0.05;
            format!("{{\"x\":[{x}],\"values\":[[{}],[{}]]}}", x * x, x * x + 1.0)
        })
        .collect();
    let mf = write(dir.path(), "h.jsonl", &(lines.join("\n") + "\n"));
    let out = loja(&["preimage", "--mf", &mf, "--at", "1", "--kind", "weak"]);
    let pts = json(&out)["points"].as_array().unwrap().clone();
    assert_eq!(pts.len(), 3);

    let out = loja(&["classify", "--branches", "x1,x1+1", "--grid", "-1,1", "--at", "0"]);
    assert_eq!(json(&out)["flags"], serde_json::json!(["outer", "inner", "upper", "lower", "continuous"]));

    let out = loja(&[
        "mfloja", "--branches", "x1", "--grid", "-1,1", "--at", "0", "--domain", "-1,1", "--samples", "201",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["alpha"].as_f64().unwrap() - 1.0).abs() < 0.01);
}

#[test]
fn set_distances() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "0,0\n1,0\n");
    let b = write(dir.path(), "b.csv", "# dim=2\n0,2\n");
    assert_eq!(json(&loja(&["hausdorff", &a, &b]))["distance"], 5f64.sqrt());
    let k = json(&loja(&["kuratowski", &a, &b]))["distance"].as_f64().unwrap();
    assert!(k > 0.0 && k <= 2.0);
}

#[test]
fn medial_commands() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.csv", "-1,0\n1,0\n");
    let out = loja(&["medial", "--X", &x, "--domain", "-2,2;-2,2", "--samples", "6561", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("x1,x2,multiplicity,gap"));
    assert_eq!(rows.count(), 81);

    let out = loja(&["nregion", "--X", &x, "--at", "1,0", "--domain", "-2,2;-2,2", "--samples", "25"]);
    let pts = json(&out)["points"].as_array().unwrap().clone();
    assert_eq!(pts.len(), 15);

    let x1 = write(dir.path(), "x1.csv", "0\n1\n");
    let out = loja(&["medloja", "--X", &x1, "--at", "0.5", "--kind", "m", "--domain", "0.3,0.7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["metric"], "hausdorff");
    let out = loja(&["medloja", "--X", &x1, "--at", "0", "--kind", "N", "--domain", "-1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_fixture_and_plot() {
    let out = loja(&["paper-suite", "--only", "ex3_8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["fixtures"][0]["reproduced"], true);

    let out = loja(&["paper-suite", "--only", "ex4_9", "--param", "M=8"]);
    let alpha = json(&out)["fixtures"][0]["detail"]["fit"]["alpha"].as_f64().unwrap();
    assert!(alpha >= 7.0 * 0.99);

    let out = loja(&["paper-suite", "--only", "ex3_8", "--plot", "axis"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn full_suite_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("report.json");
    let run = || {
        let out = loja(&["paper-suite", "--seed", "42", "--out", p.to_str().unwrap()]);
        let mut v: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        (out.status.code(), v)
    };
    let (code_a, a) = run();
    let (code_b, b) = run();
    assert_eq!(a, b);
    assert_eq!(code_a, code_b);
    let pass = a["pass"].as_bool().unwrap();
    assert_eq!(code_a, Some(if pass { 0 } else { 1 }));

    let out = loja(&["paper-suite", "--plot", "envelope"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,y,series\n"));
}
