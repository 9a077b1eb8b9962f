use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hcalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcalg")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|t| t.parse().unwrap()).collect()).collect()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn unit_circle_trace() {
    let out = hcalg(&["trace", "--symbol", "poly:[0,1]", "--level", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("x,y,abs_phi,curvature\n"));
    let rows = rows(&text);
    assert!(rows.len() > 600);
    for r in &rows {
        assert!(((r[0] * r[0] + r[1] * r[1]).sqrt() - 1.0).abs() < 1e-10);
        assert!((r[2] - 1.0).abs() < 1e-10);
    }
    assert!(stderr(&out).contains("Closed"));
}

#[test]
fn cos_trace_follows_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "cos.csv");
    let svg = path(dir.path(), "cos.svg");
    let out = hcalg(&["trace", "--symbol", "cos", "--seed-x", "1.5708", "--out", &csv, "--svg", &svg]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = rows(&fs::read_to_string(&csv).unwrap());
    let inside: Vec<_> = rows.iter().filter(|r| r[0] > 0.1 && r[0] < std::f64::consts::PI - 0.1).collect();
    assert!(inside.len() > 200);
    for r in inside {
        assert!((r[1] - r[0].sin().asinh()).abs() < 1e-8);
    }
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn polar_seed_on_the_imaginary_axis_is_a_named_error() {
    let out = hcalg(&["trace", "--symbol", "cos", "--level", "1", "--seed-ray", "1.5708"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("NoRootOnRay"));
}

#[test]
fn config_errors_exit_with_two() {
    assert_eq!(hcalg(&["check", "--symbol", "tan"]).status.code(), Some(2));
    assert_eq!(hcalg(&["trace", "--symbol", "cos", "--step", "-1"]).status.code(), Some(2));
    assert_eq!(hcalg(&["zeros", "--f", "cos", "--disk", "0,1"]).status.code(), Some(2));
    assert_eq!(hcalg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hcalg(&["witness", "--problem", "/nonexistent/problem.json"]).status.code(), Some(2));
}

#[test]
fn rose_trace_is_symmetric() {
    let out = hcalg(&["trace", "--symbol", "rose", "--level", "1", "--rays", "64"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("arc,x,y,abs_phi,curvature\n"));
    let arcs: std::collections::BTreeSet<u64> = rows(&text).iter().map(|r| r[0] as u64).collect();
    assert_eq!(arcs.len() % 8, 0);
}

#[test]
fn check_then_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let report = path(dir.path(), "cos.json");
    let problem = path(dir.path(), "problem.json");
    let out = hcalg(&["check", "--symbol", "cos", "--out", &report, "--problem-out", &problem, "--strict"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["report"]["verdict"], "pass");
    assert!(json["report"]["min_margin"].as_f64().unwrap() > 0.0);
    assert!(json["inflation"]["r"].as_f64().unwrap() > 1.0);

    let csv = path(dir.path(), "trace.csv");
    let out = hcalg(&["witness", "--from-report", &report, "--eps", "1e-3", "--out", &csv]);
    assert!(out.status.success(), "{}", stderr(&out));
    let trace = fs::read_to_string(&csv).unwrap();
    assert!(trace
        .starts_with("q,r_sampled,r_crude,power_1_sampled,power_1_crude,residual_sampled,residual_crude\n"));
    let last = rows(&trace).pop().unwrap();
    assert!(last[2] <= 1e-3 && last[4] <= 1e-3 && last[6] <= 1e-3);

    let again = hcalg(&["witness", "--problem", &problem, "--eps", "1e-3"]);
    assert_eq!(stdout(&again), trace);
}

#[test]
fn check_outputs_are_deterministic() {
    let a = hcalg(&["check", "--symbol", "zexp"]);
    let b = hcalg(&["check", "--symbol", "zexp"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = hcalg(&["trace", "--symbol", "exp-a:0.5", "--rays", "8"]);
    let b = hcalg(&["trace", "--symbol", "exp-a:0.5", "--rays", "8"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn strict_check_fails_for_the_rose() {
    let out = hcalg(&["check", "--symbol", "rose", "--strict"]);
    assert_eq!(out.status.code(), Some(4));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["passes"], 0);
}

#[test]
fn identity_witness() {
    let dir = tempfile::tempdir().unwrap();
    let problem = path(dir.path(), "id.json");
    fs::write(
        &problem,
        r#"{"symbol":"poly:[0,1]","m":2,"r":1.5,"lambda":["0.1"],"gamma":["1.5i"],"a":["1"],"b":["1"]}"#,
    )
    .unwrap();
    let summary = path(dir.path(), "summary.json");
    let out = hcalg(&["witness", "--problem", &problem, "--summary", &summary]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(json["q"], 72);
    assert!(json["max_decay"].as_f64().unwrap() < 1.0);
    assert_eq!(rows(&stdout(&out)).len(), 72);
}

#[test]
fn trivial_power_witness() {
    let dir = tempfile::tempdir().unwrap();
    let problem = path(dir.path(), "m1.json");
    let gamma = format!("{}i", 1.5f64.acosh());
    fs::write(
        &problem,
        format!(
            r#"{{"symbol":"cos","m":1,"r":1.5,"lambda":["0.2"],"gamma":["{gamma}"],"a":["1"],"b":["2"]}}"#
        ),
    )
    .unwrap();
    let out = hcalg(&["witness", "--problem", &problem]);
    assert!(out.status.success(), "{}", stderr(&out));
    let header = stdout(&out).lines().next().unwrap().to_string();
    assert_eq!(header, "q,r_sampled,r_crude,residual_sampled,residual_crude");
}

#[test]
fn witness_outside_the_region_is_numeric() {
    let dir = tempfile::tempdir().unwrap();
    let problem = path(dir.path(), "bad.json");
    fs::write(
        &problem,
        r#"{"symbol":"poly:[0,1]","m":2,"r":1.5,"lambda":["3"],"gamma":["1.5i"],"a":["1"],"b":["1"]}"#,
    )
    .unwrap();
    let out = hcalg(&["witness", "--problem", &problem]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("OutsideRegion"));
}

#[test]
fn zero_parity_table() {
    let out = hcalg(&[
        "zeros",
        "--f",
        "poly:[-1,1]",
        "--shift",
        "1",
        "--power",
        "2",
        "--n",
        "3",
        "--disk=-2,0.5",
        "--disk",
        "5,0.5",
        "--strict",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "center_re,center_im,radius,count,divisible\n-2,0,0.5,2,true\n5,0,0.5,0,true\n");
    let hit = hcalg(&["zeros", "--f", "poly:[-1,1]", "--n", "0", "--disk", "0,1"]);
    assert_eq!(hit.status.code(), Some(3));
    assert!(stderr(&hit).contains("ContourHitsZero"));
    let odd = hcalg(&["zeros", "--f", "poly:[-1,1]", "--power", "1", "--n", "0", "--disk", "1,0.5"]);
    assert!(odd.status.success());
}

#[test]
fn config_echo_round_trips() {
    let out = hcalg(&["--print-config", "check", "--symbol", "cos", "--grid", "50", "--m", "3"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cmd = &json["command"];
    assert_eq!(cmd["subcommand"], "check");
    assert_eq!(cmd["symbol"], "cos");
    assert_eq!(cmd["grid"], 50);
    assert_eq!(cmd["m"], 3);
    assert_eq!(cmd["level"], 1.0);
}

#[test]
fn examples_catalog_matches_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let table = path(dir.path(), "summary.csv");
    let figures = path(dir.path(), "figures");
    let out = hcalg(&["examples", "--out", &table, "--figures", &figures, "--strict"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&table).unwrap();
    assert_eq!(text.lines().count(), 14);
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
    assert!(fs::read_dir(&figures).unwrap().count() >= 12);
}
