//! Brute-force ground truth on small instances.
//!
//! Every word with the instance's letter counts is enumerated and ranked
//! lexicographically; the exact Markov chain of the process is built over
//! those ranks. On top of it sit hitting-time solves, reachability, recurrent
//! class analysis and exhaustive checks of the process's structural
//! properties.

mod enumerate;
mod families;
mod graph;
mod hitting;
mod verify;

pub use enumerate::{binomial, count_configs, enumerate_configs, rank, unrank, DEFAULT_STATE_CAP};
pub use families::{
    impossibility_family, impossibility_report, rule_stability_probe, stuck_config,
    ImpossibilityReport, PatchedRule,
};
pub use graph::{build_graph, reachable_set, TransitionGraph};
pub use hitting::{exact_hitting_time, HittingTime, SolveOptions};
pub use verify::{
    theorem1_check, theorem3_check, verify_corpus, CheckResult, CheckStatus, Counterexample, Report,
};
