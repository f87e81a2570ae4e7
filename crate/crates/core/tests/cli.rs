mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::{data_path, example_path};
use serde_json::Value;

fn qfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfc"))
        .args(args)
        .output()
        .unwrap()
}

fn ok_stdout(args: &[&str]) -> String {
    let out = qfc(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok_stdout(args)).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// A copy of the SFG example config pointing at another dispersion file.
fn sfg_config_with_model(dir: &Path, model: &Path) -> std::path::PathBuf {
    let text = fs::read_to_string(example_path("sfg_upconversion.toml")).unwrap();
    let text = text.replace(
        "path = \"../../data/mgo_ln_e_gayer2008.toml\"",
        &format!("path = {:?}", path_str(model)),
    );
    let cfg = dir.join("run.toml");
    fs::write(&cfg, text).unwrap();
    cfg
}

#[test]
fn design_reports_grating() {
    let cfg = example_path("sfg_upconversion.toml");
    let v = json(&["design", "--config", path_str(&cfg)]);
    let period = v["lambda_poling_um"].as_f64().unwrap();
    assert!((period - 3.75).abs() < 0.5);
    assert_eq!(v["extrapolated"], Value::Bool(true));
    assert!(v["model"].as_str().unwrap().contains("MgO"));
    assert!(v["slopes"]["dlambda_in_dt"].as_f64().unwrap() > 0.2);
}

#[test]
fn design_with_constant_index_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sfg_config_with_model(dir.path(), &data_path("constant_n2.toml"));
    let out = qfc(&["design", "--config", path_str(&cfg)]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("quasi-phase-matching"), "{err}");
}

#[test]
fn design_with_missing_model_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sfg_config_with_model(dir.path(), &dir.path().join("absent.toml"));
    let out = qfc(&["design", "--config", path_str(&cfg)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.toml"));
}

#[test]
fn curve_csv_shape_and_peak() {
    let cfg = example_path("sfg_upconversion.toml");
    let text = ok_stdout(&["curve", "--config", path_str(&cfg)]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda_in_nm,relative_efficiency"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 1001);
    let peak = rows
        .iter()
        .copied()
        .fold((0.0, -1.0), |a, r| if r.1 > a.1 { r } else { a });
    assert!((peak.1 - 1.0).abs() < 1e-6, "{peak:?}");
    assert!((peak.0 - 1547.6).abs() < 0.003);
}

#[test]
fn curve_range_override_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let cfg = example_path("sfg_upconversion.toml");
    ok_stdout(&[
        "curve",
        "--config",
        path_str(&cfg),
        "--range",
        "1547:1548:0.01",
        "--out",
        path_str(&out),
    ]);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 101);
    assert!(
        qfc(&[
            "curve",
            "--config",
            path_str(&cfg),
            "--range",
            "1548:1547:0.01"
        ])
        .status
        .code()
            != Some(0)
    );
}

#[test]
fn efficiency_prediction() {
    let cfg = example_path("sfg_upconversion.toml");
    let v = json(&["efficiency", "--config", path_str(&cfg)]);
    let pred = v["predictions"].as_array().unwrap();
    let at_120 = pred
        .iter()
        .find(|p| p["pump_mw"].as_f64() == Some(120.0))
        .unwrap();
    assert!((at_120["eta_ext"].as_f64().unwrap() - 0.063).abs() < 0.005);
}

#[test]
fn budget_round_trip() {
    let sfg = json(&[
        "budget",
        "--config",
        path_str(&example_path("sfg_upconversion.toml")),
    ]);
    assert!((sfg["eta_ext"].as_f64().unwrap() - 0.094).abs() < 1e-9);
    assert!((sfg["mu1"].as_f64().unwrap() - 0.0508).abs() < 1e-4);
    for key in ["D", "n_per_pulse", "S", "N", "SNR"] {
        assert!(sfg[key].is_number(), "{key}");
    }
    let dfg = json(&[
        "budget",
        "--config",
        path_str(&example_path("dfg_downconversion.toml")),
    ]);
    assert!((dfg["eta_ext"].as_f64().unwrap() - 0.011).abs() < 1e-9);
    assert!((dfg["mu1"].as_f64().unwrap() - 0.0185).abs() < 1e-4);
}

#[test]
fn budget_rejects_empty_counts() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "integration_s,signal_counts,noise_counts\n").unwrap();
    let cfg = example_path("sfg_upconversion.toml");
    let out = qfc(&[
        "budget",
        "--config",
        path_str(&cfg),
        "--counts",
        path_str(&empty),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));
}

#[test]
fn link_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("link.csv");
    let cfg = example_path("network_link.toml");
    ok_stdout(&["link", "--config", path_str(&cfg), "--out", path_str(&out)]);

    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("distance_km,p_case_a,p_case_b,p_case_c"));
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(first[0], 0.0);
    assert_eq!(first[3], 1.0);
    assert_eq!(csv.lines().count(), 1 + 41);

    let log = fs::read_to_string(dir.path().join("link_log10.csv")).unwrap();
    assert!(log.starts_with("distance_km,log10_p_case_a,log10_p_case_b,log10_p_case_c\n"));

    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("link_summary.json")).unwrap())
            .unwrap();
    assert!((summary["improvement_orders_at_10km"].as_f64().unwrap() - 46.8).abs() < 0.2);
    assert!((summary["crossover_km"].as_f64().unwrap() - 0.599).abs() < 1e-3);
}

#[test]
fn link_distance_override() {
    let cfg = example_path("network_link.toml");
    let text = ok_stdout(&["link", "--config", path_str(&cfg), "--distances", "0,10"]);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(2).unwrap().ends_with("e-50"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let sfg = example_path("sfg_upconversion.toml");
    let link = example_path("network_link.toml");
    for (args, name) in [
        (vec!["curve", "--config", path_str(&sfg)], "curve.csv"),
        (vec!["design", "--config", path_str(&sfg)], "design.json"),
        (vec!["budget", "--config", path_str(&sfg)], "budget.json"),
        (vec!["link", "--config", path_str(&link)], "link.csv"),
    ] {
        let runs: Vec<Vec<u8>> = (0..2)
            .map(|i| {
                let out = dir.path().join(format!("{i}_{name}"));
                let mut a = args.clone();
                a.extend(["--out", path_str(&out)]);
                ok_stdout(&a);
                fs::read(&out).unwrap()
            })
            .collect();
        assert!(!runs[0].is_empty());
        assert_eq!(runs[0], runs[1], "{name}");
    }
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(
        &cfg,
        "[link]\neta_down = 0.1\neta_up = 0.1\nlength_miles = 3\n",
    )
    .unwrap();
    assert!(!qfc(&["link", "--config", path_str(&cfg)]).status.success());
}
