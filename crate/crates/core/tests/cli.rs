use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photon-ecs")).args(args).current_dir(cwd).output().expect("binary runs")
}

#[test]
fn sweep_writes_csv_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep", "--family", "psi1", "--m", "1", "--n", "3", "--witness", "mandel_q", "--order", "2,3",
        "--gamma-start", "0.1", "--gamma-stop", "2.0", "--gamma-count", "39", "--engine", "both", "--out", "q.csv",
    ];
    let out = bin(&args, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("q.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 78);
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 12);
        assert!(cols[9].parse::<f64>().unwrap() < 1e-8);
    }
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("q.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["gamma"]["count"], 39);
    assert!(meta["assumptions"].as_array().unwrap().iter().any(|a| a.as_str().unwrap().contains("gamma")));

    // same config, byte-identical output
    let again = bin(&[&args[..args.len() - 1], &["r.csv"]].concat(), dir.path());
    assert!(again.status.success());
    assert_eq!(csv, std::fs::read_to_string(dir.path().join("r.csv")).unwrap());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.toml"),
        "family = \"psi2\"\ngamma_start = 0.5\ngamma_stop = 1.0\ngamma_count = 3\nm = 1\nn = 3\nwitness = [\"antibunching\"]\norder = 2\nformat = \"json\"\n",
    )
    .unwrap();
    let out = bin(&["sweep", "--config", "c.toml", "--gamma-count", "2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["family"], "psi2");
    assert_eq!(rows[1]["gamma"], 1.0);
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["sweep", "--family", "psi2", "--gamma-start", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma_start"));
    assert_eq!(bin(&["sweep", "--engine", "gpu"], dir.path()).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.toml"), "gamma_begin = 1\n").unwrap();
    assert_eq!(bin(&["sweep", "--config", "bad.toml"], dir.path()).status.code(), Some(2));
    assert_eq!(bin(&["sweep", "--no-such-flag"], dir.path()).status.code(), Some(2));
}

#[test]
fn failed_rows_exit_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["sweep", "--family", "psi2", "--gamma-start", "1e-6", "--gamma-count", "1", "--m", "1", "--n", "3"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with("DegenerateState")));
}

#[test]
fn witness_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["witness", "--family", "psi1", "--gamma", "1.0", "--m", "0", "--n", "0", "--order", "2", "--engine", "oracle"], dir.path());
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);
    assert!(csv.lines().skip(1).all(|l| l.contains(",oracle,")));
}

#[test]
fn verify_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["verify", "--gamma-start", "0.2", "--gamma-stop", "2.0", "--gamma-count", "4", "--out", "v.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("overall: PASS"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("v.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert!(!report["conventions"].as_array().unwrap().is_empty());
}

#[test]
fn repro_figures_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["repro-figures", "--out", "figs", "--gamma-count", "5"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let root = dir.path().join("figs");
    for d in ["fig1_mandel_q", "fig2_antibunching", "fig3_subpoissonian", "fig4_squeezing"] {
        assert!(root.join(d).is_dir());
    }
    assert!(root.join("fig4_squeezing/sign_table.csv").is_file());
    let meta = std::fs::read_to_string(root.join("metadata.json")).unwrap();
    assert!(meta.contains("psi_14"));
}
