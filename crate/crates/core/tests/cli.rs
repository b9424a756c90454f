use std::path::Path;
use std::process::{Command, Output};

use cube_entropy::io::write_function;
use cube_entropy::random::{random_nonneg, seeded_rng};
use serde_json::Value;

const SMALL: &str = "seed = 3
n_min = 3
n_max = 3
eps_grid = [0.2]
mgl_trials = 3
trials = 4
lp_trials = 2
property_trials = 5
ck_n = 2
ck_eps = [0.4]
";

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn suite_writes_a_report_array_led_by_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let out = dir.path().join("out.json");
    let o = verify(&["suite", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("PASS"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.len() > 1);
    assert_eq!(reports[0]["name"], "suite-header");
    assert_eq!(reports[0]["details"]["config"]["n_max"], 3);
    assert!(reports[0]["note"].as_str().unwrap().contains("exhaustive search"));
    assert!(reports.iter().all(|r| r["pass"] == true));
}

#[test]
fn tampered_suite_exits_with_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "tamper.toml", &format!("{SMALL}tamper = \"gerber-phi\"\n"));
    let o = verify(&["suite", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FAIL"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["pass"], false);
}

#[test]
fn config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "seed = 1\nn_min = \"x\"\n");
    let o = verify(&["suite", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error:") && err.contains("line 2"), "{err}");
    let cfg = write(dir.path(), "unknown.toml", "seed = 1\ncolour = 2\n");
    assert_eq!(verify(&["suite", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn theorem_emits_json_and_csv() {
    let o = verify(&["theorem", "mgl", "--n", "3", "--trials", "5", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert_eq!(stdout(&o), stdout(&verify(&["theorem", "mgl", "--n", "3", "--trials", "5", "--seed", "9"])));

    let o = verify(&["theorem", "smgl", "--n", "4", "--trials", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "name,n,eps,lhs,rhs,margin,mode,pass,seed,runtime_ms");

    assert_eq!(verify(&["theorem", "no-such-bound"]).status.code(), Some(2));
    assert_eq!(verify(&["theorem", "mgl", "--eps", "0.7"]).status.code(), Some(2));
}

#[test]
fn exhaustive_search_finds_dictators() {
    let o = verify(&["ck-search", "--n", "3", "--eps", "0.4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().any(|r| r["name"] == "ck-maximizers" && r["pass"] == true));
}

#[test]
fn lp_exports_the_program() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("lp.txt");
    let o = verify(&["lp", "--k", "2", "--lambda", "0.5", "--random", "--seed", "4", "--export", export.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&export).unwrap();
    assert!(text.starts_with("# k = 2 lambda = 0.5\nmaximize"));

    let f = random_nonneg(4, &mut seeded_rng(1)).unwrap();
    let path = dir.path().join("f.bin");
    write_function(&path, &f).unwrap();
    let o = verify(&["lp", "--k", "2", "--lambda", "0.5", "--from-function", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = verify(&["lp", "--k", "3", "--lambda", "0.5", "--random", "--iid", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(verify(&["lp", "--k", "9", "--lambda", "0.5"]).status.code(), Some(2));
}

#[test]
fn sweep_aggregates_cells() {
    let o = verify(&["sweep", "--bound", "mgl", "--n-range", "3..4", "--eps-grid", "0.1,0.4", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1 + 4);
    assert_eq!(verify(&["sweep", "--bound", "mgl", "--n-range", "5..3"]).status.code(), Some(2));
}
