use std::process::{Command, Output};

use efimov_cli::output::RunManifest;

fn efimov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_efimov")).args(args).output().expect("spawn efimov")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(s: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(s.as_bytes());
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn constants_csv_has_one_row() {
    let o = efimov(&["constants", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    let s0: f64 = rows[0][0].parse().unwrap();
    assert!((s0 - 1.00624).abs() < 1e-5);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["constants", "--tol", "-1"][..],
        &["constants", "--tol", "0"],
        &["spectrum", "--levels", "0"],
        &["spectrum", "--a", "-2"],
        &["eigenfunction", "--n", "0"],
        &["verify", "nonsense"],
        &["frobnicate"],
    ] {
        assert_eq!(efimov(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(efimov(&["--help"]).status.code(), Some(0));
    assert_eq!(efimov(&["--version"]).status.code(), Some(0));
}

#[test]
fn domain_error_from_library_exits_2() {
    let o = efimov(&["eigenfunction", "--n", "1", "--rmax", "0.5", "--steps", "3", "--big-psi"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectrum_scales_with_core_radius() {
    let parse = |a: &str| -> Vec<f64> {
        let o = efimov(&["spectrum", "--a", a, "--levels", "4"]);
        assert_eq!(o.status.code(), Some(0));
        let rows = csv_rows(&stdout(&o));
        assert_eq!(rows.len(), 4);
        assert!(rows[0][3].is_empty());
        rows.iter().map(|r| r[2].parse().unwrap()).collect()
    };
    let (e1, e2) = (parse("1"), parse("2"));
    for (x, y) in e1.iter().zip(&e2) {
        assert!((y / x - 0.25).abs() < 1e-10, "{x} {y}");
    }
}

#[test]
fn json_manifest_round_trips_and_data_is_deterministic() {
    let run = || {
        let o = efimov(&["spectrum", "--levels", "3", "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let m: RunManifest = serde_json::from_str(&stdout(&o)).unwrap();
        let again: RunManifest = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(m, again);
        m
    };
    let (a, b) = (run(), run());
    assert_eq!(a.header.schema, "efimov-run-manifest/1");
    assert_eq!(a.data, b.data);
    assert_eq!(a.parameters, b.parameters);
    let levels = a.data["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    let e1: f64 = levels[0]["E_n"].as_str().unwrap().parse().unwrap();
    assert!((e1 + 4.273955628e-3).abs() < 1e-11);
}

#[test]
fn eigenfunction_grid_shape() {
    let o = efimov(&["eigenfunction", "--n", "1", "--rmax", "3", "--steps", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 36);
    // (0.5, 0.5) is inside the core
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), 0.0);
    let o = efimov(&["eigenfunction", "--n", "2", "--steps", "5", "--big-psi", "--seed", "3"]);
    assert_eq!(csv_rows(&stdout(&o)).len(), 5);
    let again = efimov(&["eigenfunction", "--n", "2", "--steps", "5", "--big-psi", "--seed", "3"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn verify_kernels_passes() {
    let o = efimov(&["verify", "kernels", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let m: RunManifest = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(m.data["passed"], serde_json::Value::Bool(true));
    assert_eq!(m.data["criteria"].as_array().unwrap().len(), 2);
}

#[test]
fn impossible_tolerance_fails_with_exit_1() {
    let o = efimov(&["verify", "specfun", "--tol", "c01.s0_vs_1.00624=1e-300", "--fail-fast"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}
