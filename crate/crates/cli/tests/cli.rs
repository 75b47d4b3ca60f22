use std::path::Path;
use std::process::{Command, Output};

use jamsec_cli::{Format, ResultTable};

const SCENARIO: &str = r#"
name = "small"
seed = 17
trials = 5000
methods = ["closed-form", "quadrature", "monte-carlo"]
metrics = ["outage_e", "capacity_e", "capacity_r", "secrecy"]
thresholds_db = [-2.0]

[geometry]
n_bs_antennas = 2
n_jammer_antennas = 1
r_sr_m = 2.0
r_se_m = 3.0
r_je_m = 2.0
delta = 2.0
p_s_db = 10.0
p_j_db = 5.0
noise_var_r_w = 1.0
noise_var_e_w = 1.0

[[receiver]]
label = "los"
p_los = 0.8
los = { model = "gamma", m = 2 }
nlos = { model = "gamma", m = 1 }

[eve]
source = { model = "gamma", m = 1 }
jammer = { model = "gamma", m = 1 }

[sweep]
axis = "r_je_m"
grid = [0.5, 1.0, 5.0]
"#;

fn jamsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jamsec")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_clean_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ok.toml", SCENARIO);
    let o = jamsec(&["validate", &path]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "ok");
}

#[test]
fn validate_lists_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let text = SCENARIO
        .replace("p_los = 0.8", "p_los = 1.3")
        .replace("los = { model = \"gamma\", m = 2 }", "los = { model = \"dksm\", c = 1, s = 0.9, mu = 1, kappa = 1 }");
    let path = write(dir.path(), "bad.toml", &text);
    let o = jamsec(&["validate", &path]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("receiver[0].p_los: must lie in [0, 1], got 1.3"), "{out}");
    assert!(out.contains("receiver[0].los.s: s must be > 1"), "{out}");
}

#[test]
fn empty_grid_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "empty.toml", &SCENARIO.replace("grid = [0.5, 1.0, 5.0]", "grid = []"));
    let o = jamsec(&["sweep", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sweep.grid: grid is empty"));
}

#[test]
fn conflicting_units_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "units.toml", &SCENARIO.replace("p_j_db = 5.0", "p_j_db = 5.0\np_j_w = 3.0"));
    let o = jamsec(&["validate", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("geometry.p_j: give either p_j_db or p_j_w, not both"));
}

#[test]
fn sweep_round_trips_and_records_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.toml", SCENARIO);
    for (fmt, format) in [("csv", Format::Csv), ("json", Format::Json)] {
        let out = dir.path().join(format!("out.{fmt}"));
        let o = jamsec(&["sweep", &path, "--seed", "99", "--format", fmt, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(&out).unwrap();
        let table = ResultTable::parse(&text, format).unwrap();
        assert_eq!(table.metadata.seed, 99);
        assert_eq!(table.axis, "r_je_m");
        assert_eq!(table.rows.iter().map(|r| r.0).collect::<Vec<_>>(), vec![0.5, 1.0, 5.0]);
        assert_eq!(table.to_string(format).unwrap(), text);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.toml", SCENARIO);
    let a = jamsec(&["sweep", &path]);
    let b = jamsec(&["sweep", &path]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = jamsec(&["sweep", &path, "--seed", "18"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn eval_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.toml", SCENARIO);
    let o = jamsec(&["eval", &path, "--at", "3", "--methods", "closed-form", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let t = ResultTable::parse(&stdout(&o), Format::Json).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0].0, 3.0);
    assert!(t.columns.iter().all(|c| c.ends_with("@closed-form")));
    assert!(t.columns.contains(&"secrecy[case=los]@closed-form".to_string()));
}

#[test]
fn bad_method_flag() {
    let o = jamsec(&["sweep", "fig3", "--methods", "guess"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn io_failures_exit_3() {
    let o = jamsec(&["validate", "/nonexistent/scenario.toml"]);
    assert_eq!(o.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.toml", SCENARIO);
    let o = jamsec(&["sweep", &path, "--methods", "closed-form", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn lists_builtins() {
    let o = jamsec(&["list-scenarios"]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = stdout(&o).lines().map(|l| l.split('\t').next().unwrap().to_string()).collect();
    assert_eq!(names, ["fig2", "fig3", "fig4", "fig5"]);
    assert_eq!(jamsec(&["validate", "fig5"]).status.code(), Some(0));
}
