use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chsh-tradeoff")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write_state(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

const PRODUCT: &str = r#"{"n":3,"amplitudes":[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#;

#[test]
fn analyze_product_state() {
    let dir = tempfile::tempdir().unwrap();
    write_state(dir.path(), "p.json", PRODUCT);
    let out = run(dir.path(), &["analyze", "--state", "p.json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["format_version"], "chsh-tradeoff/1");
    assert_eq!(v["config"]["command"], "analyze");
    assert_eq!(v["report"]["total"], 12.0);
    assert_eq!(v["report"]["class"]["tag"], "A-B-C");
}

#[test]
fn analyze_w_symmetric_point() {
    let dir = tempfile::tempdir().unwrap();
    let t = (1.0f64 / 3.0).sqrt();
    let body = format!(r#"{{"n":3,"amplitudes":[[0,0],[{t},0],[{t},0],[0,0],[{t},0],[0,0],[0,0],[0,0]]}}"#);
    write_state(dir.path(), "w.json", &body);
    let out = run(dir.path(), &["analyze", "--state", "w.json", "--out", "r.json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let total = v["report"]["total"].as_f64().unwrap();
    assert!((total - 32.0 / 3.0).abs() < 1e-8, "{total}");
    assert_eq!(v["report"]["class"]["tag"], "W");
}

#[test]
fn analyze_four_qubits() {
    let dir = tempfile::tempdir().unwrap();
    let mut amps = vec!["[0,0]"; 16];
    amps[0] = "[1,0]";
    write_state(dir.path(), "z.json", &format!(r#"{{"n":4,"amplitudes":[{}]}}"#, amps.join(",")));
    let out = run(dir.path(), &["analyze", "--state", "z.json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["total"], 3.0);
    assert_eq!(v["report"]["anchored_qubit"], "A");
    assert_eq!(v["exceeds_bound"], false);
}

#[test]
fn malformed_input_exit_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    write_state(dir.path(), "t.json", r#"{"n":3,"amplitudes":[[1,0],[0,"#);
    let out = run(dir.path(), &["analyze", "--state", "t.json", "--out", "o.json"]);
    assert_eq!(code(&out), 2);
    assert!(!dir.path().join("o.json").exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1, "no temp files left behind");

    write_state(dir.path(), "s.json", r#"{"n":3,"amplitudes":[[1,0]]}"#);
    let out = run(dir.path(), &["analyze", "--state", "s.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("amplitudes"));

    let out = run(dir.path(), &["analyze", "--state", "missing.json"]);
    assert_eq!(code(&out), 2);
    let out = run(dir.path(), &["sweep", "--family", "nope", "--grid", "a=0:1:2", "--out", "x.csv"]);
    assert_eq!(code(&out), 2);
    let out = run(dir.path(), &["frobnicate"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unnormalized_input_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    write_state(dir.path(), "u.json", r#"{"n":3,"amplitudes":[[1,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#);
    let out = run(dir.path(), &["analyze", "--state", "u.json", "--out", "o.json"]);
    assert_eq!(code(&out), 3);
    assert!(!dir.path().join("o.json").exists());
}

#[test]
fn sweep_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["sweep", "--family", "biseparable", "--grid", "delta=0.01:pi/4:50", "--out", "b.csv"]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# {\"format_version\":\"chsh-tradeoff/1\",\"config\":{\"command\":\"sweep\""));
    assert_eq!(lines[1], "family,free,delta,s_ab,s_ac,s_bc,total,closed_form_total,discrepancy");
    assert_eq!(lines.len(), 52);
    for row in &lines[2..] {
        let f: Vec<&str> = row.split(',').collect();
        let total: f64 = f[6].parse().unwrap();
        let disc: f64 = f[8].parse().unwrap();
        assert!((8.0 - 1e-9..12.0).contains(&total));
        assert!(disc < 1e-8);
        let mantissa = f[3].split('e').next().unwrap();
        let significant = mantissa.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').count();
        assert!(significant <= 12, "{}", f[3]);
    }
}

#[test]
fn sweep_skips_out_of_range_points() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        run(dir.path(), &["sweep", "--family", "w", "--grid", "a=0.1:0.5:3,b=0.1:0.5:3,c=0.1:0.5:3", "--out", "w.csv"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipped 10"));
    let text = fs::read_to_string(dir.path().join("w.csv")).unwrap();
    assert_eq!(text.lines().count(), 2 + 17);
}

#[test]
fn search_reports_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["search", "--qubits", "4", "--samples", "2000", "--restarts", "3", "--seed", "11", "--out", "s.json"];
    assert_eq!(code(&run(dir.path(), &args)), 0);
    let first = fs::read(dir.path().join("s.json")).unwrap();
    let mut one_thread = vec!["--threads", "1"];
    one_thread.extend(args);
    assert_eq!(code(&run(dir.path(), &one_thread)), 0);
    assert_eq!(first, fs::read(dir.path().join("s.json")).unwrap());

    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert!(v["best_total"].as_f64().unwrap() <= 3.0 + 1e-9);
    assert_eq!(v["histogram"].as_array().unwrap().len(), 80);
    assert_eq!(v["histogram"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum::<u64>(), 2000);
    assert_eq!(v["violation_found"], false);
}

#[test]
fn search_with_ghz_warm_start_hits_bound() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "search",
        "--qubits",
        "4",
        "--samples",
        "100",
        "--restarts",
        "0",
        "--seed",
        "1",
        "--out",
        "g.json",
        "--warm-start",
        "ghz",
    ];
    assert_eq!(code(&run(dir.path(), &args)), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("g.json")).unwrap()).unwrap();
    assert!((v["best_total"].as_f64().unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn replay_reproduces_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(dir.path(), &["random", "--qubits", "3", "--count", "4", "--seed", "5", "--out", "r.json"])),
        0
    );
    assert_eq!(code(&run(dir.path(), &["replay", "r.json"])), 0);
    assert_eq!(
        code(&run(
            dir.path(),
            &[
                "sweep",
                "--family",
                "ghz",
                "--grid",
                "delta=0.2:0.4:2,alpha=1:1:1,beta=1:1:1,gamma=pi/2:pi/2:1",
                "--out",
                "g.csv"
            ]
        )),
        0
    );
    assert_eq!(code(&run(dir.path(), &["replay", "g.csv"])), 0);

    let mut text = fs::read_to_string(dir.path().join("r.json")).unwrap();
    text = text.replacen("0.", "1.", 1);
    fs::write(dir.path().join("r.json"), text).unwrap();
    assert_eq!(code(&run(dir.path(), &["replay", "r.json"])), 1);
}

#[test]
fn random_states_follow_seed_policy() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(dir.path(), &["random", "--qubits", "2", "--count", "3", "--seed", "40", "--out", "a.json"])),
        0
    );
    assert_eq!(
        code(&run(dir.path(), &["random", "--qubits", "2", "--count", "1", "--seed", "42", "--out", "b.json"])),
        0
    );
    let a: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    let b: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(a["states"][2], b["states"][0]);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(dir.path(), &["verify", "--suite", "theorem1"]);
    assert_eq!(code(&ok), 0);
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("PASS theorem1/"));
    let fail = run(dir.path(), &["verify", "--suite", "theorem4"]);
    let stdout = String::from_utf8_lossy(&fail.stdout);
    assert!(stdout.contains("recorded: phi="));
    assert_eq!(code(&fail), if stdout.contains("FAIL") { 1 } else { 0 });
    assert_eq!(code(&run(dir.path(), &["verify", "--suite", "theorem9"])), 2);
}
