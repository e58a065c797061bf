use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cyma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyma"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const NIL_EXAMPLE: &str = r#"{"case":"nil_yt","G":[[1,0,0,0],[0,1,0,0],[0,0,1,1],[0,0,0,1]]}"#;

#[test]
fn example_frame_validates() {
    let dir = tempfile::tempdir().unwrap();
    let frame = write(dir.path(), "nil.json", NIL_EXAMPLE);
    let out = cyma(&["validate", &frame]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["valid"], true);
}

#[test]
fn identity_frame_is_rejected_as_lagrangian() {
    let dir = tempfile::tempdir().unwrap();
    let frame = write(
        dir.path(),
        "id.json",
        r#"{"case":"nil_yt","G":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#,
    );
    let out = cyma(&["validate", &frame]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    let names: Vec<&str> = report["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["constraint"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"non-Lagrangian G³₄ ≠ 0"), "{names:?}");
}

#[test]
fn malformed_json_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let frame = write(dir.path(), "bad.json", r#"{"case":"nil_yt","G":[[1,0"#);
    assert_eq!(code(&cyma(&["validate", &frame])), 2);
    assert_eq!(code(&cyma(&["validate", "/nonexistent/frame.json"])), 2);
}

#[test]
fn coefficients_of_the_examples() {
    let nil = stdout_json(&cyma(&["coeffs", "fixture:nil-a"]));
    assert_eq!(nil["E1"], 1.0);
    assert_eq!(nil["E2"], 1.0);
    assert_eq!(nil["c_identity_defect"], 0.0);
    let sol = stdout_json(&cyma(&["coeffs", "fixture:sol-a"]));
    assert_eq!(sol["D"], -1.0);
    assert!(sol["b_identity_defect"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn vanishing_g33_points_to_the_explicit_command() {
    let out = cyma(&["coeffs", "fixture:nil-explicit"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("`explicit`"));
}

#[test]
fn zero_forcing_gives_zero_potential() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let coeffs = cyma(&["coeffs", "fixture:nil-a"]);
    let coeffs = write(dir.path(), "c.json", &String::from_utf8(coeffs.stdout).unwrap());
    let out = cyma(&["solve", &coeffs, "[]", "--grid", "16x16", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["total_newton_iterations"], 0);
    let bytes = fs::read(out_dir.join("u.f64")).unwrap();
    assert_eq!(bytes.len(), 8 * 16 * 16);
    assert!(bytes.iter().all(|&b| b == 0));
    let manifest: Value = serde_json::from_slice(&fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "solve");
    assert_eq!(manifest["exit_status"], 0);
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn forcing_file_on_another_grid_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let fdir = dir.path().join("f");
    // a 16x16 field file produced by an explicit run
    let out = cyma(&["explicit", "fixture:nil-explicit", "[]", "--grid", "16x16", "--out", fdir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let p = fdir.join("p.f64");
    let out = cyma(&["roundtrip", "fixture:nil-a", p.to_str().unwrap(), "--grid", "32x32"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid mismatch"));
}

#[test]
fn explicit_branch() {
    let zero = stdout_json(&cyma(&["explicit", "fixture:nil-explicit", "[]", "--grid", "16x16"]));
    assert_eq!(zero["mean_p"], 1.0);
    assert_eq!(zero["exact"], true);
    let cosine = stdout_json(&cyma(&[
        "explicit",
        "fixture:nil-explicit",
        r#"[{"k1":1,"k2":0,"amp":0.7}]"#,
        "--grid",
        "32x32",
    ]));
    assert!((cosine["mean_p"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(code(&cyma(&["explicit", "fixture:sol-a", "[]"])), 2);
}

#[test]
fn roundtrip_writes_the_one_form() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("rt");
    let out = cyma(&[
        "roundtrip",
        "fixture:sol-a",
        "manufactured:0.1",
        "--grid",
        "32x32",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    for key in ["r1_sup", "r2_sup", "r3_sup", "volume_ratio_error"] {
        assert!(report["residuals"][key].as_f64().unwrap() <= 1e-5, "{key}");
    }
    let manifest: Value = serde_json::from_slice(&fs::read(out_dir.join("oneform.json")).unwrap()).unwrap();
    assert_eq!(manifest["case"], "sol_r");
    assert_eq!(manifest["grid"], serde_json::json!([32, 32]));
    for a in ["a1", "a2", "a3", "a4"] {
        assert!(out_dir.join(format!("{a}.f64")).exists());
        assert!(out_dir.join(format!("{a}.meta.json")).exists());
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let d = dir.path().join(name);
        let out = cyma(&[
            "roundtrip",
            "fixture:nil-a",
            r#"[{"k1":1,"k2":0,"amp":0.3},{"k1":0,"k2":1,"amp":0.2,"phase":-1.5707963267948966}]"#,
            "--grid",
            "24x24",
            "--csv",
            "--out",
            d.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        d
    };
    let (a, b) = (run("a"), run("b"));
    for file in ["u.f64", "a1.f64", "a2.f64", "a3.f64", "a4.f64", "u.csv"] {
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{file}");
    }
}

#[test]
fn sampled_frames_validate() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("frames");
    let out = cyma(&["sample", "sol_r", "--count", "3", "--seed", "7", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    for k in 0..3 {
        let frame = out_dir.join(format!("frame_{k:04}.json"));
        assert_eq!(code(&cyma(&["validate", frame.to_str().unwrap()])), 0);
    }
    assert_eq!(code(&cyma(&["sample", "nil4"])), 2);
}

#[test]
fn csv_forcing_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("x1,x2,value\n");
    for i in 0..16 {
        for j in 0..16 {
            let (x, y) = (i as f64 / 16.0, j as f64 / 16.0);
            csv += &format!("{x},{y},{}\n", 0.2 * (2.0 * std::f64::consts::PI * x).cos() * (2.0 * std::f64::consts::PI * y).sin());
        }
    }
    let f = write(dir.path(), "f.csv", &csv);
    let out = cyma(&["roundtrip", "fixture:nil-a", &f]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["solve"]["n1"], 16);
}

#[test]
fn shipped_fixture_files() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");
    let path = |name: &str| format!("{dir}/{name}");
    for frame in ["nil_example.json", "sol_example.json", "nil_g33_zero.json"] {
        assert_eq!(code(&cyma(&["validate", &path(frame)])), 0, "{frame}");
    }
    let sol = stdout_json(&cyma(&["coeffs", &path("sol_example.json")]));
    assert_eq!(sol["D"], -1.0);
    let out = cyma(&[
        "roundtrip",
        &path("nil_example.json"),
        &path("forcing_example.json"),
        "--config",
        &path("solver.json"),
        "--grid",
        "32x32",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_json(&out)["residuals"]["r3_sup"].as_f64().unwrap() <= 1e-6);
}
