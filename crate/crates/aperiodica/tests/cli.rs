//! Exit-code contract and artifact checks for the command-line tool.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_aperiodica"))
}

fn out_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aperiodica-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn generate_is_byte_deterministic() {
    let (d1, d2) = (out_dir("gen1"), out_dir("gen2"));
    for d in [&d1, &d2] {
        let st = bin()
            .args(["generate", "--radius", "30", "--out-dir"])
            .arg(d)
            .status()
            .unwrap();
        assert_eq!(st.code(), Some(0));
    }
    let a = fs::read(d1.join("points.csv")).unwrap();
    let b = fs::read(d2.join("points.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert!(d1.join("report.json").exists());
}

#[test]
fn generate_json_format() {
    let d = out_dir("genjson");
    let st = bin()
        .args(["generate", "--radius", "20", "--format", "json", "--out-dir"])
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let text = fs::read_to_string(d.join("points.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(parsed.get("points").is_some());
}

#[test]
fn validation_failures_exit_1() {
    let st = bin()
        .args(["generate", "--scheme", "nosuch", "--out-dir"])
        .arg(out_dir("bad1"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(1));
    let st = bin()
        .args(["generate", "--window", "/nonexistent-window.json", "--out-dir"])
        .arg(out_dir("bad2"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(1));
}

#[test]
fn diffract_writes_artifacts_and_passes() {
    let d = out_dir("diff");
    let st = bin()
        .args(["diffract", "--radius", "300", "--svg", "--out-dir"])
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    for f in ["points.csv", "spectrum.csv", "report.json", "scatter.svg", "spectrum.svg"] {
        assert!(d.join(f).exists(), "missing {f}");
    }
    let svg = fs::read_to_string(d.join("spectrum.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    // SVG output is deterministic too
    let d2 = out_dir("diff2");
    let st = bin()
        .args(["diffract", "--radius", "300", "--svg", "--out-dir"])
        .arg(&d2)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    assert_eq!(svg, fs::read_to_string(d2.join("spectrum.svg")).unwrap());
}

#[test]
fn custom_window_descriptor() {
    let d = out_dir("window");
    fs::create_dir_all(&d).unwrap();
    let wfile = d.join("w.json");
    fs::write(&wfile, r#"{ "variant": "interval", "a": "-tau/2", "b": "tau/2" }"#).unwrap();
    let st = bin()
        .args(["generate", "--radius", "30", "--out-dir"])
        .arg(&d)
        .arg("--window")
        .arg(&wfile)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let rep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("report.json")).unwrap()).unwrap();
    // same window length as the canonical one, so the same density
    assert_eq!(rep["window"]["variant"], "interval");
    assert!((rep["count"].as_u64().unwrap() as i64 - 44).abs() <= 2);
}

#[test]
fn threshold_failures_exit_2() {
    // a 40-point sample cannot match the predicted peaks to 2%
    let st = bin()
        .args(["diffract", "--radius", "40", "--out-dir"])
        .arg(out_dir("thresh"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));
}

#[test]
fn analyze_reports_diagnostics() {
    let d = out_dir("analyze");
    let st = bin()
        .args(["analyze", "--radius", "60", "--out-dir"])
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let rep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("report.json")).unwrap()).unwrap();
    assert!(rep.get("packing_radius").is_some());
    assert!(rep.get("difference_min_gap").is_some());
    assert!(rep.get("patch_classes").is_some());
}

#[test]
fn demo_robinson_runs() {
    let d = out_dir("robinson");
    let st = bin()
        .args(["demo", "robinson", "--out-dir"])
        .arg(&d)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    assert!(d.join("report.json").exists());
}
