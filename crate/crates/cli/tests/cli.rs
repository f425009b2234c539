use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI, TAU};
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("geophase").chain(args.iter().copied());
    let code = geophase_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "args {args:?}: {err}\n{out}");
    out
}

type Row = HashMap<String, String>;

fn csv_rows(text: &str) -> Vec<Row> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    lines
        .map(|l| {
            header
                .iter()
                .zip(l.split(','))
                .map(|(h, v)| (h.to_string(), v.to_string()))
                .collect()
        })
        .collect()
}

fn num(row: &Row, key: &str) -> f64 {
    row[key]
        .parse()
        .unwrap_or_else(|_| panic!("{key} = {}", row[key]))
}

fn meta(text: &str, key: &str) -> String {
    let prefix = format!("# {key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no meta {key}"))
        .to_string()
}

fn s(x: f64) -> String {
    x.to_string()
}

#[test]
fn evolve_norm_column() {
    let out = ok(&[
        "evolve", "--omega1", "1", "--omega2", "2", "--theta", "0.5236", "--t-max", "6.2832",
        "--points", "100", "--format", "csv",
    ]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 100);
    for r in &rows {
        assert!((num(r, "norm") - 1.0).abs() < 1e-12);
    }
    assert_eq!(Some(num(&rows[99], "t")), "6.2832".parse().ok());
}

#[test]
fn evolve_theta_zero_keeps_lower_amplitude_empty() {
    let rows = csv_rows(&ok(&["evolve", "--theta", "0", "--points", "50"]));
    for r in &rows {
        assert_eq!(num(r, "re_amp1"), 0.0);
        assert_eq!(num(r, "im_amp1"), 0.0);
    }
}

#[test]
fn evolve_oracle_columns() {
    let rows = csv_rows(&ok(&[
        "evolve", "--oracle", "--dt", "1e-4", "--points", "20",
    ]));
    let worst = rows.iter().map(|r| num(r, "deviation")).fold(0.0, f64::max);
    assert!(worst < 1e-8, "{worst}");
    assert!(rows.iter().all(|r| (num(r, "rk4_norm") - 1.0).abs() < 1e-9));
}

#[test]
fn evolve_bad_grid_is_usage_error() {
    assert_eq!(run(&["evolve", "--points", "1"]).0, 2);
    assert_eq!(run(&["evolve", "--oracle", "--dt", "1"]).0, 2);
    assert_eq!(run(&["evolve", "--t-max", "-1"]).0, 2);
}

fn phase_rows(args: &[&str]) -> HashMap<String, Row> {
    let mut full = vec!["phase"];
    full.extend_from_slice(args);
    csv_rows(&ok(&full))
        .into_iter()
        .map(|r| (r["selector"].clone(), r))
        .collect()
}

#[test]
fn phase_at_equal_mixing() {
    let rows = phase_rows(&["--theta", &s(FRAC_PI_4)]);
    let phi = num(&rows["phi"], "geometric");
    let psi = num(&rows["psi"], "geometric");
    assert!((phi - PI).abs() < 1e-15);
    assert!((psi - PI).abs() < 1e-15);
    assert!((phi + psi - TAU).abs() < 1e-15);
}

#[test]
fn phase_numeric_matches() {
    let rows = phase_rows(&["--omega1", "1", "--omega2", "2", "--theta", &s(FRAC_PI_6)]);
    let phi = &rows["phi"];
    assert!((num(phi, "geometric") - FRAC_PI_2).abs() < 1e-15);
    assert!((num(phi, "geometric_numeric") - FRAC_PI_2).abs() < 1e-6);
    assert_eq!(phi["status"], "pass");
}

#[test]
fn phase_counts_cycles() {
    let one = phase_rows(&["--theta", "0.4", "--n", "1"]);
    let three = phase_rows(&["--theta", "0.4", "--n", "3"]);
    for sel in ["phi", "psi"] {
        assert_eq!(
            num(&three[sel], "geometric"),
            3.0 * num(&one[sel], "geometric")
        );
    }
}

#[test]
fn phase_degenerate() {
    let (code, out, err) = run(&["phase", "--omega1", "2", "--omega2", "2"]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.contains("degenerate"));
}

#[test]
fn gauge_default_passes() {
    let out = ok(&["--reproducible", "gauge-check"]);
    assert_eq!(meta(&out, "status"), "pass");
    let rows = csv_rows(&out);
    assert!(rows
        .iter()
        .all(|r| r["status"] == "pass" || r["status"] == "diagnostic"));
    for name in [
        "field_strength",
        "tilde_overlap_invariance",
        "filtered_evolution_fd",
        "filtered_evolution_analytic",
        "doublet_motion_fd",
        "transformation_law",
        "covariance",
        "covariant_motion",
    ] {
        assert!(rows.iter().any(|r| r["check"] == name), "{name}");
    }
}

#[test]
fn gauge_singular_angle_skips() {
    let (code, out, _) = run(&["gauge-check", "--theta", &s(FRAC_PI_4)]);
    assert_eq!(code, 3);
    assert_eq!(meta(&out, "status"), "skipped");
    let rows = csv_rows(&out);
    let skipped: Vec<_> = rows.iter().filter(|r| r["status"] == "skipped").collect();
    assert!(!skipped.is_empty());
    assert!(skipped
        .iter()
        .all(|r| r["note"] == "skipped: infinite coupling"));
    assert!(skipped.iter().all(|r| r["lambda"] != "none"));
    assert!(rows
        .iter()
        .filter(|r| r["lambda"] == "none")
        .all(|r| r["status"] == "pass"));
}

#[test]
fn gauge_sine_transformation_law() {
    let rows = csv_rows(&ok(&[
        "gauge-check",
        "--lambda",
        "sine",
        "--t",
        "0.2,1.7,3.1",
    ]));
    let law: Vec<_> = rows
        .iter()
        .filter(|r| r["check"] == "transformation_law")
        .collect();
    assert_eq!(law.len(), 3);
    assert!(law.iter().all(|r| num(r, "value") < 1e-10));
}

#[test]
fn gauge_tight_tolerance_fails() {
    // a central difference cannot reach 1e-7 with a coarse step
    let (code, out, _) = run(&["gauge-check", "--fd-step", "1e-2", "--omega2", "3"]);
    assert_eq!(code, 1);
    assert_eq!(meta(&out, "status"), "fail");
}

fn invariant_rows(args: &[&str]) -> Vec<Row> {
    let mut full = vec!["invariant"];
    full.extend_from_slice(args);
    csv_rows(&ok(&full))
}

fn quantity<'a>(rows: &'a [Row], name: &str) -> &'a Row {
    rows.iter().find(|r| r["quantity"] == name).unwrap()
}

#[test]
fn invariant_examples() {
    let rows = invariant_rows(&["--theta", &s(FRAC_PI_4), "--n", "1"]);
    assert!((num(quantity(&rows, "s_n"), "value") - TAU).abs() < 1e-15);

    let rows = invariant_rows(&[
        "--omega1",
        "1",
        "--omega2",
        "2",
        "--theta",
        &s(FRAC_PI_6),
        "--n",
        "2",
    ]);
    let expect = 2.0 * 3f64.sqrt() * PI;
    assert!((num(quantity(&rows, "s_n"), "value") - expect).abs() < 1e-14);
    assert!((num(quantity(&rows, "entropy_action"), "value") - expect).abs() < 1e-8);

    let rows = invariant_rows(&["--theta", "0"]);
    for r in &rows {
        if r["quantity"] != "decomposition_closure" {
            assert_eq!(num(r, "value"), 0.0, "{}", r["quantity"]);
        }
    }
}

#[test]
fn sweep_theta_beta_phi() {
    let rows = csv_rows(&ok(&[
        "sweep",
        "--param",
        "theta",
        "--start",
        "0",
        "--stop",
        &s(FRAC_PI_2),
        "--count",
        "9",
        "--quantity",
        "beta_phi",
    ]));
    assert_eq!(rows.len(), 9);
    for r in &rows {
        let th = num(r, "swept_value");
        assert!((num(r, "closed_form") - TAU * th.sin().powi(2)).abs() < 1e-14);
        assert!(num(r, "abs_error") < 1e-6);
    }
    assert_eq!(num(&rows[8], "swept_value"), FRAC_PI_2);
}

#[test]
fn sweep_omega1_closed_form_constant() {
    let rows = csv_rows(&ok(&[
        "sweep",
        "--param",
        "omega1",
        "--start",
        "-1",
        "--stop",
        "1.5",
        "--count",
        "6",
        "--quantity",
        "beta_phi",
        "--theta",
        "0.3",
    ]));
    let first = num(&rows[0], "closed_form");
    assert!(rows.iter().all(|r| num(r, "closed_form") == first));
}

#[test]
fn sweep_n_linear() {
    let rows = csv_rows(&ok(&[
        "sweep",
        "--param",
        "n",
        "--start",
        "1",
        "--stop",
        "5",
        "--count",
        "5",
        "--quantity",
        "s_n",
    ]));
    let s1 = num(&rows[0], "closed_form");
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(num(r, "swept_value"), (k + 1) as f64);
        assert!((num(r, "closed_form") - (k + 1) as f64 * s1).abs() < 1e-13);
    }
}

#[test]
fn sweep_degenerate_point_is_nan() {
    let rows = csv_rows(&ok(&[
        "sweep",
        "--param",
        "omega2",
        "--start",
        "0",
        "--stop",
        "2",
        "--count",
        "3",
        "--quantity",
        "total_phi",
    ]));
    assert_eq!(rows[1]["closed_form"], "NaN");
    assert!(num(&rows[0], "closed_form").is_finite());
}

#[test]
fn sweep_invalid_range() {
    for args in [
        &["sweep", "--start", "1", "--stop", "1"][..],
        &["sweep", "--count", "1"],
        &["sweep", "--param", "n", "--start", "0", "--stop", "3"],
        &["sweep", "--param", "n", "--start", "1.5", "--stop", "3"],
    ] {
        assert_eq!(run(args).0, 2, "{args:?}");
    }
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["phase", "--format", "xml"]).0, 2);
    assert_eq!(run(&["phase", "--theta", "x"]).0, 2);
    assert_eq!(
        run(&["phase", "--config", "/nonexistent/geophase.cfg"]).0,
        2
    );
    assert_eq!(run(&["phase", "--steps", "10"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("gauge-check"));
}

const ALL: [&[&str]; 5] = [
    &["evolve", "--oracle", "--points", "7"],
    &["phase", "--n", "2"],
    &["gauge-check"],
    &["invariant", "--t", "0.1,2.5"],
    &[
        "sweep", "--param", "omega2", "--start", "0", "--stop", "2", "--count", "3",
    ],
];

fn with(extra: &[&'static str], args: &[&'static str]) -> Vec<&'static str> {
    extra.iter().chain(args).copied().collect()
}

fn as_f64(cell: &str) -> Option<f64> {
    match cell {
        "NaN" => Some(f64::NAN),
        other => other.parse().ok(),
    }
}

#[test]
fn csv_and_json_agree() {
    for args in ALL {
        let csv = ok(&with(&["--reproducible"], args));
        let json: Value =
            serde_json::from_str(&ok(&with(&["--reproducible", "--format", "json"], args)))
                .unwrap();
        let rows = csv_rows(&csv);
        let data = json["data"].as_array().unwrap();
        assert_eq!(rows.len(), data.len());
        for (r, d) in rows.iter().zip(data) {
            for (key, cell) in r {
                let j = &d[key.as_str()];
                match (as_f64(cell), j) {
                    (Some(x), Value::Null) => assert!(x.is_nan(), "{key}"),
                    (Some(x), Value::Number(n)) => assert_eq!(x, n.as_f64().unwrap(), "{key}"),
                    (_, Value::String(t)) => assert_eq!(cell, t),
                    other => panic!("{key}: {other:?}"),
                }
            }
        }
        assert_eq!(json["meta"]["status"], meta(&csv, "status"));
        assert_eq!(json["meta"]["config"]["theta"], meta(&csv, "config.theta"));
    }
}

#[test]
fn echoed_config_reproduces_run() {
    let dir = tempfile::tempdir().unwrap();
    for args in ALL {
        let first = ok(&with(
            &[
                "--reproducible",
                "--degrees",
                "--theta",
                "22.5",
                "--omega1",
                "0.7",
            ],
            args,
        ));
        let echoed: String = first
            .lines()
            .filter_map(|l| l.strip_prefix("# config."))
            .map(|l| format!("{l}\n"))
            .collect();
        let path = dir.path().join("echo.cfg");
        std::fs::write(&path, echoed).unwrap();
        let path = path.to_str().unwrap();
        let second = ok(&[&["--config", path][..], &[args[0]]].concat());
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# fixed run\ntheta = 0.2\nn = 2\nformat = json\n").unwrap();
    let path = path.to_str().unwrap();
    let v: Value = serde_json::from_str(&ok(&["--config", path, "phase", "--n", "3"])).unwrap();
    assert_eq!(v["meta"]["config"]["theta"], "0.2");
    assert_eq!(v["meta"]["config"]["n"], "3");
    assert_eq!(v["data"][0]["n"], 3);

    std::fs::write(dir.path().join("bad.cfg"), "thetaa = 1\n").unwrap();
    let bad = dir.path().join("bad.cfg");
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "phase"]).0, 2);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phase.json");
    let (code, out, _) = run(&[
        "phase",
        "--format",
        "json",
        "--reproducible",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        written,
        ok(&["phase", "--format", "json", "--reproducible"])
    );
}

#[test]
fn timestamp_only_without_reproducible() {
    assert!(ok(&["phase"]).contains("# generated_unix = "));
    assert!(!ok(&["phase", "--reproducible"]).contains("generated_unix"));
}

fn binary(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_geophase"))
        .args(args)
        .output()
        .expect("spawn geophase");
    (out.status.code().expect("exit code"), out.stdout)
}

#[test]
fn binary_is_deterministic() {
    for args in ALL {
        for format in ["csv", "json"] {
            let full = with(&["--reproducible", "--format", format], args);
            let (c1, o1) = binary(&full);
            let (c2, o2) = binary(&full);
            assert_eq!(c1, 0);
            assert_eq!((c1, &o1), (c2, &o2));
            assert_eq!(o1, ok(&full).into_bytes());
        }
    }
}

#[test]
fn binary_exit_codes() {
    assert_eq!(binary(&["phase", "--omega1", "1", "--omega2", "1"]).0, 3);
    assert_eq!(binary(&["gauge-check", "--theta", &s(FRAC_PI_4)]).0, 3);
    assert_eq!(
        binary(&["gauge-check", "--fd-step", "1e-2", "--omega2", "3"]).0,
        1
    );
    assert_eq!(binary(&["sweep", "--count", "0"]).0, 2);
    assert_eq!(binary(&["nonsense"]).0, 2);
}
