use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_broxopt"))
}

fn write_quad(dir: &Path) -> std::path::PathBuf {
    let p = dir.join("quad.json");
    fs::write(&p, r#"{"type":"quadratic","matrix":[[1.0]],"linear":[0.0],"constant":0.0}"#)
        .unwrap();
    p
}

#[test]
fn solve_writes_a_trace_and_chained_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    write_quad(dir.path());
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"problem":"quad.json","method":"bpm",
            "schedule":{"kind":"constant","t":1.0},"x0":[5.0],
            "out":"trace.csv","verify":["CONV_LIN_II","CONV_LIN_III","COR_LIN_RATE"]}"#,
    )
    .unwrap();
    let out = bin().arg("solve").arg("--config").arg(&cfg).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.contains("# terminated=optimum_reached"));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("CONV_LIN_II: pass"));
}

#[test]
fn verify_exit_codes_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let quad = write_quad(dir.path());
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"problem":"quad.json","method":"bpm",
            "schedule":{"kind":"constant","t":1.0},"x0":[5.0],"out":"trace.csv"}"#,
    )
    .unwrap();
    assert!(bin().arg("solve").arg("--config").arg(&cfg).status().unwrap().success());
    let trace = dir.path().join("trace.csv");

    let ok = bin()
        .args(["verify", "--theorem", "CONV_LIN_II"])
        .arg("--trace")
        .arg(&trace)
        .arg("--problem")
        .arg(&quad)
        .status()
        .unwrap();
    assert_eq!(ok.code(), Some(0));

    // corrupt one iterate: the distance law must now fail with exit 1
    let text = fs::read_to_string(&trace).unwrap();
    let corrupted: String = text
        .lines()
        .map(|l| if l.starts_with("2,") { "2,40,800,1,1,40,40,40,".to_string() } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, corrupted + "\n").unwrap();
    let fail = bin()
        .args(["verify", "--theorem", "CONV_LIN_II"])
        .arg("--trace")
        .arg(&bad)
        .arg("--problem")
        .arg(&quad)
        .status()
        .unwrap();
    assert_eq!(fail.code(), Some(1));

    // unknown theorem id is a configuration error: exit 2
    let cfg_err = bin()
        .args(["verify", "--theorem", "NOT_A_THEOREM"])
        .arg("--trace")
        .arg(&trace)
        .arg("--problem")
        .arg(&quad)
        .status()
        .unwrap();
    assert_eq!(cfg_err.code(), Some(2));
}

#[test]
fn envelope_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let quad = write_quad(dir.path());
    let out_path = dir.path().join("env.csv");
    let status = bin()
        .args(["envelope", "--t", "1", "--range", "-3,3", "--steps", "7"])
        .arg("--problem")
        .arg(&quad)
        .arg("--out")
        .arg(&out_path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,envelope,grad_norm");
    assert_eq!(lines.len(), 8);
    let row = |i: usize| -> Vec<f64> {
        lines[i].split(',').map(|s| s.parse().unwrap()).collect()
    };
    // N(−3) = ½(3−1)² = 2 with |∇N| = 2
    let left = row(1);
    assert_eq!(left[0], -3.0);
    assert!((left[1] - 2.0).abs() < 1e-9 && (left[2] - 2.0).abs() < 1e-9);
    // N(0) = 0 inside the fattened minimizer set
    let mid = row(4);
    assert_eq!(mid[0], 0.0);
    assert!(mid[1].abs() < 1e-9 && mid[2].abs() < 1e-9);
}

#[test]
fn threshold_defaults_to_the_two_well() {
    let out = bin().arg("threshold").output().unwrap();
    assert!(out.status.success());
    let t: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!((t - 3.0).abs() < 1e-5);
}

#[test]
fn replicated_solves_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("camel.json"),
        r#"{"type":"camel"}"#,
    )
    .unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"problem":"camel.json","method":"bpm","blackbox_oracle":true,
            "budget":{"max_evaluations":2000,"restarts":4,"inner_tolerance":1e-10,"rng_seed":0},
            "schedule":{"kind":"constant","t":1.0},"x0":[-1.9,0.0],
            "stop":{"max_iter":30,"step_tol":1e-10},
            "seed":7,"replicates":2,"out":"run.csv"}"#,
    )
    .unwrap();
    assert!(bin().arg("solve").arg("--config").arg(&cfg).status().unwrap().success());
    let a = fs::read_to_string(dir.path().join("run_r0.csv")).unwrap();
    let b = fs::read_to_string(dir.path().join("run_r1.csv")).unwrap();
    assert_ne!(a, b, "replicates use different derived seeds");
    assert!(bin().arg("solve").arg("--config").arg(&cfg).status().unwrap().success());
    let a2 = fs::read_to_string(dir.path().join("run_r0.csv")).unwrap();
    assert_eq!(a, a2, "same config and seed give byte-identical output");
}
