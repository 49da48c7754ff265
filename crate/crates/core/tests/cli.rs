use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const CONSTANT: &str = r#"{"width":5,"height":5,
  "cauchy":{"preset":"constant","a":[1,0],"u":1,"b":[1,0],"v":1},
  "ambients":["r3","s3"]}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lawson-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn config(dir: &Path, text: &str) -> String {
    let p = dir.join("cfg.json");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_constant_preset_writes_two_nets_and_passes() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(tmp.path(), CONSTANT);
    let out = tmp.path().join("out");
    let o = run(&["generate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&out.join("report.json"));
    assert_eq!(report["passed"], true);
    let nets = report["nets"].as_array().unwrap();
    assert_eq!(nets.len(), 2);
    for (net, h) in nets.iter().zip([1.0, 0.0]) {
        for face in net["report"]["faces"].as_array().unwrap() {
            assert!((face["h"].as_f64().unwrap() - h).abs() < 1e-8);
        }
    }
    assert!(out.join("net-r3.json").exists() && out.join("net-s3-0.json").exists());
}

#[test]
fn generate_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(
        tmp.path(),
        r#"{"width":4,"height":3,"cauchy":{"preset":"random","seed":1}}"#,
    );
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        assert_eq!(
            code(&run(&[
                "generate",
                "--config",
                &cfg,
                "--seed",
                "9",
                "--out",
                d.to_str().unwrap()
            ])),
            0
        );
    }
    for f in ["net-r3.json", "net-s3-0.json", "report.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn generate_rejects_window_without_faces() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(
        tmp.path(),
        &CONSTANT.replace("\"width\":5,\"height\":5", "\"width\":1,\"height\":1"),
    );
    let o = run(&["generate", "--config", &cfg, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no faces to verify"));
}

#[test]
fn generate_rejects_degenerate_edge_with_location() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(
        tmp.path(),
        r#"{"width":3,"height":3,"ambients":["r3"],
            "cauchy":{"preset":"explicit",
              "row0":[{"a":[1,0],"u":1},{"a":[1,0],"u":1}],
              "col0":[{"b":[0.5,0],"v":1.2},{"b":[0,0],"v":1}]}}"#,
    );
    let o = run(&["generate", "--config", &cfg, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("vertical edge"), "{err}");
}

#[test]
fn impossible_tolerance_is_a_verification_failure_with_outputs() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(tmp.path(), CONSTANT);
    let out = tmp.path().join("out");
    let o = run(&[
        "generate",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--tolerance",
        "1e-300",
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&out.join("report.json"))["passed"], false);
    assert!(out.join("net-r3.json").exists());
}

#[test]
fn lawson_family_and_limit_tables() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(
        tmp.path(),
        r#"{"width":4,"height":4,"cauchy":{"preset":"random","seed":5},
            "gammas":[0.7853981633974483,0.5235987755982988,0.2617993877991494],
            "limit_gammas":[0.2,0.1,0.05]}"#,
    );
    let out = tmp.path().join("out");
    let o = run(&["lawson", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out.join("lawson-report.json"));
    let family = r["lawson"]["family"].as_array().unwrap();
    assert_eq!(family.len(), 3);
    for row in family {
        assert!((row["h2_plus_kappa"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    }
    assert_eq!(r["lawson"]["limit"]["monotone"], true);
}

#[test]
fn lawson_single_gamma() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(tmp.path(), CONSTANT);
    let out = tmp.path().join("out");
    assert_eq!(
        code(&run(&["lawson", "--config", &cfg, "--out", out.to_str().unwrap()])),
        0
    );
    let r = json(&out.join("lawson-report.json"));
    assert_eq!(r["lawson"]["family"].as_array().unwrap().len(), 1);
    assert!(r["lawson"].get("limit").is_none());
}

#[test]
fn verify_and_reconstruct_generated_files() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(
        tmp.path(),
        r#"{"width":4,"height":4,"cauchy":{"preset":"random","seed":2},"gammas":[0.5]}"#,
    );
    let out = tmp.path().join("out");
    assert_eq!(
        code(&run(&["generate", "--config", &cfg, "--out", out.to_str().unwrap()])),
        0
    );
    for f in ["net-r3.json", "net-s3-0.json"] {
        let net = out.join(f);
        let v = run(&["verify", net.to_str().unwrap()]);
        assert_eq!(code(&v), 0);
        let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
        assert_eq!(report["faces"].as_array().unwrap().len(), 9);

        let rc = tmp.path().join(format!("rc-{f}"));
        let o = run(&["reconstruct", net.to_str().unwrap(), "--out", rc.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let r = json(&rc.join("reconstruct-report.json"));
        assert!(r["round_trip"].as_f64().unwrap() < 1e-8);
        assert!(rc.join("lax.json").exists());
    }
    let wrong = run(&["verify", out.join("net-r3.json").to_str().unwrap(), "--ambient", "s3"]);
    assert_eq!(code(&wrong), 1);
}

fn flat_grid() -> String {
    let mut vertices = Vec::new();
    for n in 0..3 {
        for m in 0..3 {
            vertices.push(format!("[{m},{n},0]"));
        }
    }
    let normals = ["[0,0,1]"; 9].join(",");
    format!(
        r#"{{"format_version":1,"ambient":"r3","width":3,"height":3,
           "vertices":[{}],
           "faces":[[0,1,4,3],[1,2,5,4],[3,4,7,6],[4,5,8,7]],
           "normals":[{normals}],
           "provenance":{{"lattice_hash":"","gamma":0}}}}"#,
        vertices.join(",")
    )
}

#[test]
fn flat_grid_is_not_cmc() {
    let tmp = TempDir::new().unwrap();
    let p = tmp.path().join("flat.json");
    fs::write(&p, flat_grid()).unwrap();
    let o = run(&[
        "reconstruct",
        p.to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("quad"));
    assert_eq!(code(&run(&["verify", p.to_str().unwrap()])), 2);
}

#[test]
fn truncated_file_is_input_error() {
    let tmp = TempDir::new().unwrap();
    let p = tmp.path().join("cut.json");
    let text = flat_grid();
    fs::write(&p, &text[..text.len() / 2]).unwrap();
    for cmd in ["reconstruct", "verify", "export"] {
        assert_eq!(code(&run(&[cmd, p.to_str().unwrap()])), 1, "{cmd}");
    }
}

#[test]
fn export_obj_and_pole_error() {
    let tmp = TempDir::new().unwrap();
    let p = tmp.path().join("flat.json");
    fs::write(&p, flat_grid()).unwrap();
    let o = run(&["export", p.to_str().unwrap(), "--format", "obj"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 9);
    assert!(text.lines().any(|l| l == "f 1 2 5 4"));

    let pole = r#"{"format_version":1,"ambient":"s3","width":2,"height":2,
        "vertices":[[0,0,0,-1],[1,0,0,0],[0,1,0,0],[0,0,1,0]],
        "faces":[[0,1,3,2]],
        "normals":[[1,0,0,0],[0,0,0,1],[0,0,0,1],[0,0,0,1]],
        "provenance":{"lattice_hash":"","gamma":0.7853981633974483}}"#;
    let q = tmp.path().join("pole.json");
    fs::write(&q, pole).unwrap();
    assert_eq!(code(&run(&["export", q.to_str().unwrap()])), 1);
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["generate"])), 1);
}
