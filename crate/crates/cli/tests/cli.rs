use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use griffiths_core::lattice::{realize_potential, Grid, Kinetic, PotentialKind};
use griffiths_core::spectral::LatticeModel;
use griffiths_core::verify::{verify_momentum_distribution, Tolerances};
use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_griffiths"))
}

fn base_config(checks: &[&str]) -> Value {
    json!({
        "schema_version": 1,
        "grid": {"d": 1, "N": 63, "L": 10.0},
        "potential": {"kind": "yukawa_cutoff", "params": {"mass": 1.0, "cutoff": 4}},
        "family": {"n_lo": 2, "n_hi": 8},
        "checks": checks,
        "seed": 11,
        "samples": 10
    })
}

fn write_config(dir: &Path, name: &str, cfg: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).arg("-q").output().unwrap()
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(
        r.headers().unwrap(),
        vec![
            "check_id",
            "instance",
            "parameter",
            "value",
            "margin",
            "tolerance",
            "passed"
        ]
    );
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn momentum_distribution_writes_a_row_per_node() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", &base_config(&["momentum_distribution"]));
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("out.json");
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out-csv",
        csv.to_str().unwrap(),
        "--out-json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = rows(&csv);
    let nodes: Vec<_> = rows
        .iter()
        .filter(|r| &r[0] == "momentum_distribution.positive")
        .collect();
    assert_eq!(nodes.len(), 63);
    assert!(rows.iter().all(|r| &r[6] == "true"));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(summary["exit_code"], 0);
    assert!(summary["timestamp_unix"].as_u64().unwrap() > 0);
}

#[test]
fn csv_margins_are_the_report_margins() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", &base_config(&["momentum_distribution"]));
    let csv = dir.path().join("out.csv");
    run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out-csv",
        csv.to_str().unwrap(),
    ]);
    let rows = rows(&csv);

    let g = Grid::new(1, 63, 10.0).unwrap();
    let v = realize_potential(PotentialKind::YukawaCutoff { mass: 1.0, cutoff: 4 }, &g).unwrap();
    let m = LatticeModel::new(&g, &v, Kinetic::Lattice).unwrap();
    let reports = verify_momentum_distribution(&m, &Tolerances::default(), "").unwrap();
    let mut checked = 0;
    for r in &reports {
        let mine: Vec<_> = rows.iter().filter(|x| x[0] == r.check_id).collect();
        assert_eq!(mine.len(), r.instances.len(), "{}", r.check_id);
        for (row, inst) in mine.iter().zip(&r.instances) {
            assert_eq!(&row[1], inst.label.as_str());
            assert_eq!(row[4].parse::<f64>().unwrap().to_bits(), inst.margin.to_bits());
            checked += 1;
        }
    }
    assert!(checked > 2000);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        &base_config(&["first_inequality", "second_inequality", "positivity"]),
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&[
            "verify",
            "--config",
            cfg.to_str().unwrap(),
            "--out-csv",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn even_grid_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let mut c = base_config(&["first_inequality"]);
    c["grid"]["N"] = json!(64);
    let cfg = write_config(dir.path(), "c.json", &c);
    let out = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coordinate change requires odd N"));
}

#[test]
fn empty_or_unknown_checks_are_config_errors() {
    let dir = TempDir::new().unwrap();
    for (name, c) in [
        ("empty.json", base_config(&[])),
        ("unknown.json", base_config(&["no_such_check"])),
    ] {
        let cfg = write_config(dir.path(), name, &c);
        assert_eq!(
            run(&["verify", "--config", cfg.to_str().unwrap()]).status.code(),
            Some(2),
            "{name}"
        );
    }
    let mut c = base_config(&["first_inequality"]);
    c["schema_version"] = json!(2);
    let cfg = write_config(dir.path(), "version.json", &c);
    assert_eq!(
        run(&["verify", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["verify", "--config", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn sign_indefinite_potential_is_rejected() {
    let dir = TempDir::new().unwrap();
    let mut hat = vec![0.0; 15];
    hat[7] = 1.0;
    hat[5] = -0.2;
    hat[9] = -0.2;
    let mut c = base_config(&["first_inequality"]);
    c["grid"] = json!({"d": 1, "N": 15, "L": 5.0});
    c["potential"] = json!({"kind": "custom_fourier", "hat_values": hat});
    c.as_object_mut().unwrap().remove("family");
    let cfg = write_config(dir.path(), "c.json", &c);
    assert_eq!(
        run(&["verify", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn failing_check_exits_one() {
    // At L = 10 the gap is about 0.3, so beta = 10 leaves the finite-beta
    // trial state far from the ground state.
    let dir = TempDir::new().unwrap();
    let mut c = base_config(&["oracle"]);
    c["beta"] = json!(10.0);
    let cfg = write_config(dir.path(), "c.json", &c);
    let json = dir.path().join("out.json");
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out-json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let failed: Vec<_> = summary["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["passed"] == false)
        .map(|r| r["check_id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failed, vec!["oracle.finite_beta"]);
}

#[test]
fn lambda_sweep_is_monotone() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", &base_config(&["first_inequality"]));
    let csv = dir.path().join("out.csv");
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--param",
        "lambda",
        "--values",
        "1.5,0.5,1.0",
        "--out-csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = rows(&csv);
    let rho: Vec<_> = rows.iter().filter(|r| &r[0] == "sweep.rho_hat_monotone").collect();
    assert_eq!(rho.len(), 2 * 63);
    assert!(rho.iter().all(|r| &r[6] == "true"));
    let values: Vec<_> = rows
        .iter()
        .filter(|r| &r[0] == "first_inequality.position")
        .map(|r| r[3].to_string())
        .collect();
    assert_eq!(values.first().map(String::as_str), Some("0.5"));
    assert_eq!(values.last().map(String::as_str), Some("1.5"));
}

#[test]
fn cutoff_sweep_matches_the_family_check() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", &base_config(&["first_inequality"]));
    let sweep_csv = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--param",
        "n",
        "--values",
        "2,3,4,5,6,7,8",
        "--out-csv",
        sweep_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let family_csv = dir.path().join("family.csv");
    let cfg = write_config(dir.path(), "f.json", &base_config(&["monotone_in_n"]));
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out-csv",
        family_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let sweep: Vec<f64> = rows(&sweep_csv)
        .iter()
        .filter(|r| &r[0] == "sweep.expectation_monotone")
        .map(|r| r[4].parse().unwrap())
        .collect();
    assert_eq!(sweep.len(), 6 * 10);
    let family: Vec<f64> = rows(&family_csv)
        .iter()
        .filter(|r| &r[0] == "monotone_in_n.position")
        .map(|r| r[4].parse().unwrap())
        .collect();
    // Both are nondecreasing in n over the same sampled functions.
    assert!(sweep.iter().all(|&d| d >= -1e-10));
    assert!(family.iter().all(|&d| d >= -1e-10));
}

#[test]
fn cone_command_runs_one_size() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("cone.csv");
    let out = run(&[
        "cone",
        "--size",
        "6",
        "--seed",
        "5",
        "--instances",
        "20",
        "--out-csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&csv);
    assert!(rows.iter().any(|r| &r[0] == "cone.perron_frobenius"));
    assert!(rows.iter().all(|r| &r[6] == "true"));
    assert_eq!(run(&["cone", "--size", "1"]).status.code(), Some(2));
}

#[test]
fn unknown_sweep_parameter_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", &base_config(&["first_inequality"]));
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--param",
        "mass",
        "--values",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--param",
        "N",
        "--values",
        "31,64",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
