//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use christoffel_thread::analysis::{
    coalescence_bound, coalescence_experiment, ExperimentConfig, StartSpec,
};
use christoffel_thread::config::target_christoffel;
use christoffel_thread::dynamics::{StartKind, StopKind};
use christoffel_thread::oracle::{
    build_graph, exact_hitting_time, impossibility_family, reachable_set, rule_stability_probe,
    stuck_config, theorem1_check, theorem3_check, verify_corpus, CheckStatus, HittingTime,
    SolveOptions, DEFAULT_STATE_CAP,
};
use christoffel_thread::rule::{delta, RuleParams, ThreadRule};
use christoffel_thread::{Letter, LineParams, Topology, Word};
use num::{BigInt, BigRational};

type Outcome = Result<String, String>;

fn p(ta: u32, tb: u32, n: u32) -> LineParams {
    LineParams::new(ta, tb, n).unwrap()
}

fn sight_per(params: &LineParams) -> RuleParams {
    RuleParams::new(params.per()).unwrap()
}

/// `(t_a, t_b)` pairs with `n <= 3` and `tot <= 15`.
fn corpus() -> Vec<LineParams> {
    let mut out = Vec::new();
    for (ta, tb) in [(1, 1), (2, 1), (3, 1), (3, 2), (4, 3), (5, 2)] {
        for n in 1..=3 {
            if (ta + tb) * n <= 15 {
                out.push(p(ta, tb, n));
            }
        }
    }
    out
}

fn corpus_check(names: &[&str]) -> Outcome {
    let mut examined = 0;
    let instances = corpus();
    for params in &instances {
        let report = verify_corpus(
            *params,
            &sight_per(params),
            Topology::Chain,
            DEFAULT_STATE_CAP,
        )
        .map_err(|e| e.to_string())?;
        for name in names {
            let check = report
                .get(name)
                .ok_or_else(|| format!("check {name} missing"))?;
            if check.status != CheckStatus::Pass {
                return Err(format!(
                    "{name} {:?} on {}: {:?}",
                    check.status, check.instance, check.counterexample
                ));
            }
            examined += check.examined;
        }
    }
    Ok(format!("{} instances, {examined} cases", instances.len()))
}

fn c01_christoffel_stable() -> Outcome {
    corpus_check(&["christoffel-stability"])
}

fn c02_monotonicity() -> Outcome {
    corpus_check(&["extremes-monotonicity", "thickness-monotonicity"])
}

fn c03_isolated_max_and_activity() -> Outcome {
    corpus_check(&["no-isolated-maximum", "extremum-activity"])
}

fn c04_drift() -> Outcome {
    let mut instances: Vec<LineParams> = (1..=4).map(|n| p(1, 1, n)).collect();
    instances.extend([p(2, 1, 1), p(2, 1, 2), p(3, 2, 2)]);
    let mut examined = 0;
    for params in &instances {
        let report = verify_corpus(
            *params,
            &sight_per(params),
            Topology::Chain,
            DEFAULT_STATE_CAP,
        )
        .map_err(|e| e.to_string())?;
        let check = report.get("energy-drift").unwrap();
        if check.status != CheckStatus::Pass {
            return Err(format!("{}: {:?}", check.instance, check.counterexample));
        }
        examined += check.examined;
    }
    Ok(format!("{examined} configurations with positive energy"))
}

fn c05_hitting_time() -> Outcome {
    let params = p(1, 1, 2);
    let rule = RuleParams::new(2).unwrap();
    let graph = build_graph(params, &rule, Topology::Chain, 100).map_err(|e| e.to_string())?;
    let start_word = Word::parse("bbaa").unwrap();
    let start = graph.index_of(&start_word).unwrap();
    let target = graph.index_of(target_christoffel(params).word()).unwrap();
    let exact = exact_hitting_time(&graph, start, &[target], &SolveOptions::default())
        .map_err(|e| e.to_string())?;
    if exact != HittingTime::Exact(BigRational::from_integer(BigInt::from(3))) {
        return Err(format!("exact hitting time {exact}"));
    }
    let report = coalescence_experiment(&ExperimentConfig {
        params,
        rule,
        topology: Topology::Chain,
        start: StartSpec::Word(start_word),
        trials: 2000,
        seed: 5,
        stop: StopKind::Target,
        cap: 10_000,
        track_energy: false,
    })
    .map_err(|e| e.to_string())?;
    let mean = report.summary.mean;
    if (mean - 3.0).abs() > 0.25 {
        return Err(format!("Monte Carlo mean {mean:.4}"));
    }
    Ok(format!(
        "exact {exact}, Monte Carlo mean {mean:.4} over 2000 trials"
    ))
}

fn c06_coalescence() -> Outcome {
    let mut notes = Vec::new();
    for n in [2u32, 4, 8] {
        let params = p(3, 2, n);
        let bound = coalescence_bound(&params);
        let report = coalescence_experiment(&ExperimentConfig {
            params,
            rule: RuleParams::new(5).unwrap(),
            topology: Topology::Chain,
            start: StartSpec::Kind(StartKind::MaxNonneg),
            trials: 200,
            seed: 11,
            stop: StopKind::Target,
            cap: 10 * bound,
            track_energy: false,
        })
        .map_err(|e| e.to_string())?;
        let s = &report.summary;
        let target = target_christoffel(params);
        if let Some(r) = report.results.iter().find(|r| &r.terminal != target.word()) {
            return Err(format!("n={n}: trial {} ended at {}", r.trial, r.terminal));
        }
        if !s.cap_hits.is_empty() || s.mean > bound as f64 {
            return Err(format!(
                "n={n}: {} cap hits, mean {:.1} vs bound {bound}",
                s.cap_hits.len(),
                s.mean
            ));
        }
        notes.push(format!("n={n} mean {:.1} <= {bound}", s.mean));
    }
    Ok(notes.join(", "))
}

fn c07_strip() -> Outcome {
    let mut classes = 0;
    for params in [p(3, 2, 2), p(1, 1, 3)] {
        let graph = build_graph(
            params,
            &sight_per(&params),
            Topology::Chain,
            DEFAULT_STATE_CAP,
        )
        .map_err(|e| e.to_string())?;
        let report = theorem1_check(&graph);
        let check = report.get("recurrent-strip").unwrap();
        if check.status != CheckStatus::Pass {
            return Err(format!("{}: {:?}", check.instance, check.counterexample));
        }
        classes += check.examined;
    }
    Ok(format!("{classes} closed classes inside the strip"))
}

fn c08_stuck() -> Outcome {
    let mut notes = Vec::new();
    for n in [2usize, 3] {
        let c = stuck_config(n).map_err(|e| e.to_string())?;
        let params = *c.params();
        let per = params.per() as i64;
        let graph = build_graph(
            params,
            &RuleParams::new(5).unwrap(),
            Topology::Chain,
            DEFAULT_STATE_CAP,
        )
        .map_err(|e| e.to_string())?;
        let start = graph.index_of(c.word()).unwrap();
        let reach = reachable_set(&graph, start);
        for &s in &reach {
            let conf = graph.config(s);
            let h = conf.height_profile();
            let tot = conf.tot();
            if h[1] != 3 || h[tot - 1] != -3 || conf.thickness() == per - 1 {
                return Err(format!("n={n}: reachable {} breaks the pin", conf.word()));
            }
        }
        notes.push(format!("n={n}: {} reachable states pinned", reach.len()));
    }
    Ok(notes.join(", "))
}

fn c09_impossibility_family() -> Outcome {
    let mut failures = Vec::new();
    for s in [2usize, 3] {
        let rule = ThreadRule::with_sight(s).unwrap();
        for k in [2usize, 3, 4] {
            let (c, c_prime) = impossibility_family(s, k).map_err(|e| e.to_string())?;
            let want = (s + k - 1) as i64;
            let mut bad = Vec::new();
            if !c.is_christoffel() {
                bad.push("c not Christoffel".to_string());
            }
            if !rule_stability_probe(&rule, &c) {
                bad.push("c not stable".to_string());
            }
            if !rule_stability_probe(&rule, &c_prime) {
                bad.push("c' not stable".to_string());
            }
            if c_prime.thickness() != want {
                bad.push(format!("thickness(c') = {} != {want}", c_prime.thickness()));
            }
            if !bad.is_empty() {
                failures.push(format!("s={s} k={k}: {}", bad.join(", ")));
            }
        }
    }
    if failures.is_empty() {
        Ok("6 family members stable with the stated thickness".into())
    } else {
        Err(failures.join("; "))
    }
}

fn c10_cycle() -> Outcome {
    let mut notes = Vec::new();
    for params in [p(3, 2, 2), p(1, 1, 3)] {
        let rule = sight_per(&params);
        let graph = build_graph(params, &rule, Topology::Cycle, DEFAULT_STATE_CAP)
            .map_err(|e| e.to_string())?;
        let report = theorem3_check(&graph);
        let check = report.get("stable-christoffel").unwrap();
        if check.status != CheckStatus::Pass {
            return Err(format!("{}: {:?}", check.instance, check.counterexample));
        }
        let mc = coalescence_experiment(&ExperimentConfig {
            params,
            rule,
            topology: Topology::Cycle,
            start: StartSpec::Kind(StartKind::Random),
            trials: 100,
            seed: 13,
            stop: StopKind::Christoffel,
            cap: 10 * coalescence_bound(&params),
            track_energy: false,
        })
        .map_err(|e| e.to_string())?;
        if !mc.summary.cap_hits.is_empty() {
            return Err(format!(
                "{params}: {} runs hit the cap",
                mc.summary.cap_hits.len()
            ));
        }
        notes.push(format!(
            "{params}: {} stable states, mean {:.1}",
            check.examined, mc.summary.mean
        ));
    }
    Ok(notes.join(", "))
}

fn words_up_to(len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Letter>| {
                [Letter::A, Letter::B].into_iter().map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn c11_symmetry() -> Outcome {
    let mut pairs = 0u64;
    for s in 2..=4 {
        let rule = RuleParams::new(s).unwrap();
        let words = words_up_to(s);
        let swap = |w: &[Letter]| w.iter().map(|l| l.swap()).collect::<Vec<_>>();
        for w in &words {
            for v in &words {
                let d = delta(w, v, &rule);
                if d != delta(v, w, &rule) || d != delta(&swap(w), &swap(v), &rule) {
                    return Err(format!("s={s}: asymmetric on ({w:?}, {v:?})"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} word pairs"))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_christoffel-thread")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn run_bin(args: &[&str]) -> Result<i32, String> {
    let status = Command::new(bin())
        .args(args)
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    status.code().ok_or_else(|| "terminated by signal".into())
}

fn c12_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut traces = Vec::new();
    for name in ["a.jsonl", "b.jsonl"] {
        let out = dir.path().join(name);
        let code = run_bin(&[
            "simulate",
            "--ta",
            "3",
            "--tb",
            "2",
            "--n",
            "4",
            "--sight",
            "5",
            "--seed",
            "42",
            "--start",
            "random",
            "--stop",
            "stable",
            "--snapshot-every",
            "50",
            "--out",
            out.to_str().unwrap(),
        ])?;
        if code != 0 {
            return Err(format!("simulate exited {code}"));
        }
        traces.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    if traces[0] != traces[1] {
        return Err("traces differ".into());
    }
    let svg = dir.path().join("fixed.svg");
    let trace = golden("fixed_trace.jsonl");
    let code = run_bin(&[
        "render",
        "--trace",
        trace.to_str().unwrap(),
        "--steps",
        "0,4,8",
        "--out",
        svg.to_str().unwrap(),
    ])?;
    if code != 0 {
        return Err(format!("render exited {code}"));
    }
    let got = std::fs::read(&svg).map_err(|e| e.to_string())?;
    let want = std::fs::read(golden("fixed_trace.svg")).map_err(|e| e.to_string())?;
    if got != want {
        return Err("SVG differs from golden file".into());
    }
    Ok(format!(
        "{} byte traces identical, SVG matches golden",
        traces[0].len()
    ))
}

fn c13_scaling() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let code = run_bin(&[
        "stats",
        "--ta",
        "3",
        "--tb",
        "2",
        "--n",
        "2,4,8,16",
        "--sight",
        "5",
        "--trials",
        "100",
        "--seed",
        "3",
        "--start",
        "max-nonneg",
        "--stop",
        "target",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ])?;
    if code != 0 {
        return Err(format!("stats exited {code}"));
    }
    let text =
        std::fs::read_to_string(dir.path().join("summary.json")).map_err(|e| e.to_string())?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let exponent = v["exponent"].as_f64().ok_or("no exponent in report")?;
    let means: Vec<String> = v["instances"]
        .as_array()
        .ok_or("no instances in report")?
        .iter()
        .map(|i| {
            format!(
                "tot={} mean={:.0}",
                i["tot"],
                i["mean"].as_f64().unwrap_or(f64::NAN)
            )
        })
        .collect();
    if !(1.5..=5.0).contains(&exponent) {
        return Err(format!("exponent {exponent:.3} outside [1.5, 5]"));
    }
    Ok(format!("exponent {exponent:.3} ({})", means.join(", ")))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        (
            "1 christoffel stability",
            Duration::from_secs(10),
            c01_christoffel_stable,
        ),
        ("2 monotonicity", Duration::from_secs(60), c02_monotonicity),
        (
            "3 no isolated maximum, extremum activity",
            Duration::from_secs(60),
            c03_isolated_max_and_activity,
        ),
        (
            "4 energy supermartingale",
            Duration::from_secs(120),
            c04_drift,
        ),
        (
            "5 exact vs Monte Carlo hitting time",
            Duration::from_secs(5),
            c05_hitting_time,
        ),
        (
            "6 nonnegative coalescence",
            Duration::from_secs(300),
            c06_coalescence,
        ),
        ("7 recurrent strip", Duration::from_secs(60), c07_strip),
        ("8 stuck configuration", Duration::from_secs(60), c08_stuck),
        (
            "9 impossibility family",
            Duration::from_secs(10),
            c09_impossibility_family,
        ),
        ("10 cyclic model", Duration::from_secs(120), c10_cycle),
        ("11 rule symmetry", Duration::from_secs(10), c11_symmetry),
        ("12 determinism", Duration::from_secs(60), c12_determinism),
        ("13 scaling report", Duration::from_secs(600), c13_scaling),
    ];
    let mut failed = 0;
    for (name, budget, f) in criteria {
        let t0 = Instant::now();
        let outcome = f();
        let elapsed = t0.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > budget => Err(format!("{msg}; took {elapsed:.1?} > {budget:?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name} ({elapsed:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
