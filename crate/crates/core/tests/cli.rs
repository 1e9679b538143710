use std::path::Path;
use std::process::{Command, Output};

use christoffel_thread::config::target_christoffel;
use christoffel_thread::dynamics::read_trace;
use christoffel_thread::oracle::stuck_config;
use christoffel_thread::LineParams;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_christoffel-thread"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn simulate_reaches_target() {
    let dir = tempfile::tempdir().unwrap();
    let trace = path(dir.path(), "t.jsonl");
    let out = run(&[
        "simulate",
        "--ta",
        "3",
        "--tb",
        "2",
        "--n",
        "10",
        "--sight",
        "5",
        "--seed",
        "7",
        "--start",
        "max-nonneg",
        "--stop",
        "target",
        "--events",
        "flips",
        "--out",
        &trace,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let parsed = read_trace(std::io::BufReader::new(
        std::fs::File::open(&trace).unwrap(),
    ))
    .unwrap();
    let end = parsed.end.unwrap();
    let target = target_christoffel(LineParams::new(3, 2, 10).unwrap());
    assert_eq!(&end.word, target.word());
    assert_eq!(json(&out)["word"], target.word().to_string());
}

#[test]
fn simulate_stuck_exhausts_cap() {
    let stuck = stuck_config(3).unwrap().word().to_string();
    let out = run(&[
        "simulate",
        "--ta",
        "3",
        "--tb",
        "2",
        "--n",
        "3",
        "--sight",
        "5",
        "--start-word",
        &stuck,
        "--stop",
        "christoffel",
        "--cap",
        "100000",
        "--events",
        "none",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn simulate_usage_errors() {
    assert_eq!(code(&run(&["simulate", "--ta", "3", "--n", "2"])), 1);
    assert_eq!(
        code(&run(&[
            "simulate",
            "--ta",
            "1",
            "--tb",
            "1",
            "--n",
            "2",
            "--start-word",
            "bbba"
        ])),
        1
    );
    assert_eq!(
        code(&run(&[
            "simulate", "--ta", "1", "--tb", "1", "--n", "2", "--sight", "1"
        ])),
        1
    );
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn simulate_writes_svg_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let svg = path(dir.path(), "s.svg");
    let out = run(&[
        "simulate",
        "--ta",
        "3",
        "--tb",
        "2",
        "--n",
        "2",
        "--seed",
        "1",
        "--start",
        "random",
        "--snapshot-every",
        "10",
        "--svg",
        &svg,
        "--out",
        &path(dir.path(), "t.jsonl"),
    ]);
    assert!(code(&out) == 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml"));
    assert!(text.contains("<polyline"));
}

#[test]
fn verify_examples() {
    let out = run(&[
        "verify", "--ta", "1", "--tb", "1", "--n", "3", "--sight", "2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["passed"], true);
    assert_eq!(
        code(&run(&[
            "verify", "--ta", "3", "--tb", "2", "--n", "2", "--sight", "5"
        ])),
        0
    );
    let out = run(&[
        "verify", "--ta", "2", "--tb", "1", "--n", "2", "--sight", "2",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    for check in v["checks"].as_array().unwrap() {
        assert_eq!(check["status"], "skipped");
        assert_eq!(check["note"], "hypothesis violated: per > sight");
    }
}

#[test]
fn oracle_examples() {
    let out = run(&[
        "oracle",
        "--ta",
        "1",
        "--tb",
        "1",
        "--n",
        "2",
        "--sight",
        "2",
        "--start-word",
        "bbaa",
        "--target",
        "christoffel",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["hitting"]["expected_time"]["expected"], "3");
    assert_eq!(v["hitting"]["expected_time"]["method"], "exact-rational");

    let stuck = stuck_config(3).unwrap().word().to_string();
    let out = run(&[
        "oracle",
        "--ta",
        "3",
        "--tb",
        "2",
        "--n",
        "3",
        "--sight",
        "5",
        "--start-word",
        &stuck,
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["hitting"]["expected_time"]["expected"], "+inf");

    let out = run(&[
        "oracle",
        "--ta",
        "3",
        "--tb",
        "2",
        "--n",
        "2",
        "--topology",
        "cycle",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["all_recurrent_christoffel"], true);
}

#[test]
fn oracle_exports_edges() {
    let dir = tempfile::tempdir().unwrap();
    let edges = path(dir.path(), "g.txt");
    let out = run(&[
        "oracle", "--ta", "1", "--tb", "1", "--n", "2", "--edges", &edges,
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&edges).unwrap();
    assert!(text.lines().any(|l| l == "bbaa baba 1/3"));
}

#[test]
fn stats_sweep_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "stats".to_string(),
            "--ta".into(),
            "3".into(),
            "--tb".into(),
            "2".into(),
            "--n".into(),
            "2,4,8".into(),
            "--sight".into(),
            "5".into(),
            "--trials".into(),
            "200".into(),
            "--seed".into(),
            "9".into(),
            "--format".into(),
            "csv".into(),
            "--out".into(),
            out.to_string(),
            "--out-dir".into(),
            path(dir.path(), "sweep"),
        ]
    };
    let first = path(dir.path(), "a.csv");
    let second = path(dir.path(), "b.csv");
    for out in [&first, &second] {
        let a = args(out);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(code(&run(&a)), 0);
    }
    let a = std::fs::read_to_string(&first).unwrap();
    assert_eq!(a, std::fs::read_to_string(&second).unwrap());
    let mut lines = a.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,tot,trials,mean,median,max,bound,cap_hits,exponent"
    );
    assert_eq!(lines.count(), 3);
    let trials = std::fs::read_to_string(dir.path().join("sweep/trials_n4.csv")).unwrap();
    assert!(trials.starts_with("trial,seed,steps,terminal\n"));
    assert_eq!(trials.lines().count(), 201);
    let summary: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("sweep/summary.json")).unwrap(),
    )
    .unwrap();
    assert!(summary["exponent"].as_f64().is_some());

    let zero = run(&[
        "stats", "--ta", "3", "--tb", "2", "--n", "2", "--trials", "0",
    ]);
    assert_eq!(code(&zero), 1);
}

#[test]
fn impossibility_reports_measured_thickness() {
    let out = run(&["impossibility", "--sight", "2", "--k", "3"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["report"];
    assert_eq!(r["c_christoffel"], true);
    assert_eq!(r["c_thickness"], 3);
    assert_eq!(r["c_prime_thickness"], 5);
    assert_eq!(r["claimed_c_prime_thickness"], 4);
    assert_eq!(r["dichotomy_holds"], true);

    let out = run(&["impossibility", "--sight", "3", "--k", "2"]);
    assert_eq!(json(&out)["report"]["c_prime_thickness"], 5);

    assert_eq!(
        code(&run(&["impossibility", "--sight", "2", "--k", "1"])),
        1
    );

    // the patched rule stabilizes both members on the cycle
    let out = run(&[
        "impossibility",
        "--sight",
        "2",
        "--k",
        "3",
        "--rule",
        "patched",
        "--topology",
        "cycle",
    ]);
    let r = &json(&out)["report"];
    assert_eq!(r["c_stable"], true);
    assert_eq!(r["c_prime_stable"], true);
}

#[test]
fn render_ascii_and_svg() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fixed_trace.jsonl");
    let golden = golden.to_str().unwrap();
    let out = run(&[
        "render", "--trace", golden, "--steps", "0", "--format", "ascii",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step 0");
    assert_eq!(lines.len(), 1 + 5);
    assert!(lines[1..].iter().all(|l| l.len() == 7));

    let out = run(&["render", "--trace", golden, "--steps", "5"]);
    assert_eq!(code(&out), 1);
    let out = run(&["render", "--trace", golden, "--format", "csv"]);
    assert_eq!(code(&out), 1);
}
