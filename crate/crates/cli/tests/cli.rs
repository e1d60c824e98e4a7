use std::path::PathBuf;
use std::process::{Command, Output};

fn statatom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_statatom"))
        .args(args)
        .env_remove("STATATOM_XMAX")
        .output()
        .expect("run statatom")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV table (comment lines and header dropped).
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/synthetic_reference.csv")
}

#[test]
fn solve_writes_file_with_slope() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tf.csv");
    let out = statatom(&["solve", "--tol", "1e-8", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# B=1.588")));
    let sol = statatom::tf::TfSolution::read_csv(text.as_bytes()).unwrap();
    assert!((sol.b() - 1.588071022611375).abs() < 1e-9);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["energy"][..],
        &["oscillation", "--k", "50"],
        &["occupied", "--z", "54"],
        &["ion", "--q", "0.3", "--format", "json"],
    ] {
        assert_eq!(statatom(args).stdout, statatom(args).stdout, "{args:?}");
    }
}

#[test]
fn energy_table_covers_range() {
    let text = stdout(&statatom(&["energy", "--model", "tf-scott"]));
    let table = rows(&text);
    assert_eq!(table.len(), 120);
    assert_eq!(table[0][0], "1");
    assert_eq!(table[119][0], "120");
    let text = stdout(&statatom(&["energy", "--z-min", "100", "--z-max", "100"]));
    let scaled: f64 = rows(&text)[0][6].parse().unwrap();
    assert!((scaled - 6.2505).abs() < 5e-3);
}

#[test]
fn oscillation_maxima_near_inert_gases() {
    let text = stdout(&statatom(&["oscillation", "--grid-zcube", "0.005"]));
    let data: Vec<(f64, f64)> = rows(&text)
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[4].parse().unwrap()))
        .collect();
    let maxima: Vec<f64> = (1..data.len() - 1)
        .filter(|&i| data[i].1 > data[i - 1].1 && data[i].1 >= data[i + 1].1)
        .map(|i| data[i].0)
        .collect();
    for z in [2.0f64, 10.0, 18.0, 36.0, 54.0, 86.0, 118.0] {
        let near = maxima.iter().map(|m| (m - z.cbrt()).abs()).fold(f64::INFINITY, f64::min);
        assert!(near < 0.36, "Z={z}: {near}");
    }
}

#[test]
fn occupied_radium() {
    let text = stdout(&statatom(&["occupied"]));
    let labels: Vec<String> = rows(&text).iter().map(|r| r[5].clone()).collect();
    assert_eq!(labels.len(), 16);
    for l in ["1s", "7s", "6p", "5d", "4f"] {
        assert!(labels.contains(&l.to_string()), "{l}");
    }
    assert!(!labels.contains(&"6d".to_string()) && !labels.contains(&"5f".to_string()));
}

#[test]
fn json_output_parses() {
    let text = stdout(&statatom(&["nie", "--z-max", "10", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 10);
    assert!(v["comment"].is_array());
    let text = stdout(&statatom(&["solve", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["meta"]["B"], serde_json::json!(1.588071023));
    assert_eq!(v["meta"]["x0"], serde_json::json!("inf"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# sweep\nz_min = 10\nz_max=20\nmodel = tf\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let text = stdout(&statatom(&["energy", "--config", cfg, "--z-max", "12"]));
    let table = rows(&text);
    assert_eq!(table.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(), ["10", "11", "12"]);
    // tf model: only the leading column is nonzero
    assert_eq!(table[0][2], "0");
}

#[test]
fn compare_with_reference() {
    let path = fixture();
    let text = stdout(&statatom(&["compare", "--reference", path.to_str().unwrap(), "--model", "tf"]));
    assert_eq!(rows(&text).len(), 120);
    let text = stdout(&statatom(&["compare", "--reference", path.to_str().unwrap(), "--overlay"]));
    for r in rows(&text) {
        let residual: f64 = r[4].parse().unwrap();
        assert!(residual.abs() < 1e-7, "{r:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(statatom(&["--help"]).status.code(), Some(0));
    assert_eq!(statatom(&["energy", "--z-min", "abc"]).status.code(), Some(1));
    assert_eq!(statatom(&["frobnicate"]).status.code(), Some(1));
    let q1 = statatom(&["ion", "--q", "1"]);
    assert_eq!(q1.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&q1.stderr).contains("domain error"));
    assert_eq!(statatom(&["compare", "--reference", "/nonexistent.csv"]).status.code(), Some(1));
    assert_eq!(statatom(&["compare", "--reference", "x.csv", "--fit-offset"]).status.code(), Some(1));

    let diverged = Command::new(env!("CARGO_BIN_EXE_statatom"))
        .arg("solve")
        .env("STATATOM_XMAX", "900")
        .output()
        .unwrap();
    assert_eq!(diverged.status.code(), Some(2));
}

#[test]
fn x_max_from_environment_and_flag() {
    let last_x = |out: Output| -> f64 {
        let text = stdout(&out);
        rows(&text).last().unwrap()[0].parse().unwrap()
    };
    let env = Command::new(env!("CARGO_BIN_EXE_statatom"))
        .args(["solve", "--tol", "1e-8"])
        .env("STATATOM_XMAX", "80")
        .output()
        .unwrap();
    assert!((last_x(env) - 80.0).abs() < 1e-9);
    let flag = Command::new(env!("CARGO_BIN_EXE_statatom"))
        .args(["solve", "--tol", "1e-8", "--x-max", "60"])
        .env("STATATOM_XMAX", "80")
        .output()
        .unwrap();
    assert!((last_x(flag) - 60.0).abs() < 1e-9);
}
