use num::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{check_cap, unrank};
use super::graph::TransitionGraph;
use crate::analysis::{energies_after_pick, energy, expected_drift, EnergyContext};
use crate::config::{target_christoffel, Configuration, LineParams, Topology};
use crate::error::Result;
use crate::rule::{active_unchecked, RuleParams, ThreadRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub instance: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Configurations (or configuration/index pairs) examined.
    pub examined: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub instance: String,
    pub checks: Vec<CheckResult>,
}

impl Report {
    /// No check failed (skipped checks do not count against it).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn get(&self, check: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == check)
    }
}

fn instance_label(params: &LineParams, rule: &RuleParams, topology: Topology) -> String {
    format!(
        "ta={} tb={} n={} sight={} topology={}",
        params.ta(),
        params.tb(),
        params.n(),
        rule.sight(),
        topology
    )
}

struct Check<'a> {
    name: &'a str,
    instance: &'a str,
}

impl Check<'_> {
    fn skipped(&self, note: &str) -> CheckResult {
        CheckResult {
            check: self.name.to_string(),
            instance: self.instance.to_string(),
            status: CheckStatus::Skipped,
            counterexample: None,
            note: Some(note.to_string()),
            examined: 0,
        }
    }

    fn result(&self, examined: u64, failure: Option<Counterexample>) -> CheckResult {
        CheckResult {
            check: self.name.to_string(),
            instance: self.instance.to_string(),
            status: if failure.is_some() {
                CheckStatus::Fail
            } else {
                CheckStatus::Pass
            },
            counterexample: failure,
            note: None,
            examined,
        }
    }
}

/// Runs `probe` over every state in parallel and keeps the counterexample of
/// lowest rank, so the answer is independent of scheduling.
fn scan<F>(states: usize, probe: F) -> (u64, Option<Counterexample>)
where
    F: Fn(usize) -> (u64, Option<Counterexample>) + Sync,
{
    let (examined, first) = (0..states)
        .into_par_iter()
        .map(|r| {
            let (n, ce) = probe(r);
            (n, ce.map(|c| (r, c)))
        })
        .reduce(
            || (0, None),
            |(n1, a), (n2, b)| {
                let first = match (a, b) {
                    (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                    (x, y) => x.or(y),
                };
                (n1 + n2, first)
            },
        );
    (examined, first.map(|(_, c)| c))
}

pub const CHECK_CHRISTOFFEL_STABLE: &str = "christoffel-stability";
pub const CHECK_THICKNESS: &str = "thickness-monotonicity";
pub const CHECK_EXTREMES: &str = "extremes-monotonicity";
pub const CHECK_ISOLATED_MAX: &str = "no-isolated-maximum";
pub const CHECK_ACTIVITY: &str = "extremum-activity";
pub const CHECK_DRIFT: &str = "energy-drift";

const HYPOTHESIS_NOTE: &str = "hypothesis violated: per > sight";
const CHAIN_ONLY_NOTE: &str = "chain topology only";

/// Exhaustive structural checks over every configuration of an instance.
///
/// When the instance's period exceeds the sight, every check is reported as
/// skipped rather than run.
pub fn verify_corpus(
    params: LineParams,
    rule: &RuleParams,
    topology: Topology,
    cap: usize,
) -> Result<Report> {
    let states = check_cap(&params, cap)?;
    let instance = instance_label(&params, rule, topology);
    let names = [
        CHECK_CHRISTOFFEL_STABLE,
        CHECK_THICKNESS,
        CHECK_EXTREMES,
        CHECK_ISOLATED_MAX,
        CHECK_ACTIVITY,
        CHECK_DRIFT,
    ];
    let check = |name| Check {
        name,
        instance: &instance,
    };
    if params.per() > rule.sight() {
        return Ok(Report {
            checks: names
                .iter()
                .map(|n| check(n).skipped(HYPOTHESIS_NOTE))
                .collect(),
            instance,
        });
    }
    let ctx = Ctx {
        params,
        topology,
        rule: ThreadRule::new(*rule),
        rule_params: *rule,
    };
    let chain = topology == Topology::Chain;
    let mut checks = vec![
        {
            let (n, ce) = scan(states, |r| ctx.christoffel_stable(r));
            check(CHECK_CHRISTOFFEL_STABLE).result(n, ce)
        },
        {
            let (n, ce) = scan(states, |r| ctx.monotone(r, false));
            check(CHECK_THICKNESS).result(n, ce)
        },
    ];
    if chain {
        let (n, ce) = scan(states, |r| ctx.monotone(r, true));
        checks.push(check(CHECK_EXTREMES).result(n, ce));
        let (n, ce) = scan(states, |r| ctx.isolated_max(r));
        checks.push(check(CHECK_ISOLATED_MAX).result(n, ce));
        let (n, ce) = scan(states, |r| ctx.activity(r));
        checks.push(check(CHECK_ACTIVITY).result(n, ce));
    } else {
        for name in [CHECK_EXTREMES, CHECK_ISOLATED_MAX, CHECK_ACTIVITY] {
            checks.push(check(name).skipped(CHAIN_ONLY_NOTE));
        }
    }
    let (n, ce) = scan(states, |r| ctx.drift(r));
    checks.push(check(CHECK_DRIFT).result(n, ce));
    Ok(Report { instance, checks })
}

struct Ctx {
    params: LineParams,
    topology: Topology,
    rule: ThreadRule,
    rule_params: RuleParams,
}

impl Ctx {
    fn config(&self, r: usize) -> Configuration {
        Configuration::new(
            unrank(r as u64, self.params.a_count(), self.params.b_count()),
            self.params,
            self.topology,
        )
        .expect("unranked word has the instance's letter counts")
    }

    fn per(&self) -> i64 {
        self.params.per() as i64
    }

    fn christoffel_stable(&self, r: usize) -> (u64, Option<Counterexample>) {
        let c = self.config(r);
        if !c.is_christoffel() {
            return (0, None);
        }
        let active = c
            .selectable()
            .find(|&i| active_unchecked(&self.rule, &c, i));
        let ce = active.map(|i| Counterexample {
            word: c.word().to_string(),
            index: Some(i),
            detail: "christoffel configuration has an active site".into(),
        });
        (1, ce)
    }

    fn monotone(&self, r: usize, extremes: bool) -> (u64, Option<Counterexample>) {
        let c = self.config(r);
        let mut examined = 0;
        for i in c.selectable() {
            if !active_unchecked(&self.rule, &c, i) {
                continue;
            }
            examined += 1;
            let next = c.flip(i).expect("active index is flippable");
            let detail = if extremes {
                (next.h_min() < c.h_min() || next.h_max() > c.h_max()).then(|| {
                    format!(
                        "(h_min, h_max) went from ({}, {}) to ({}, {})",
                        c.h_min(),
                        c.h_max(),
                        next.h_min(),
                        next.h_max()
                    )
                })
            } else {
                (next.thickness() > c.thickness()).then(|| {
                    format!(
                        "thickness went from {} to {}",
                        c.thickness(),
                        next.thickness()
                    )
                })
            };
            if let Some(detail) = detail {
                return (
                    examined,
                    Some(Counterexample {
                        word: c.word().to_string(),
                        index: Some(i),
                        detail,
                    }),
                );
            }
        }
        (examined, None)
    }

    /// An active increasing flip that brings `c_i` up to `h_max` must leave a
    /// site at distance `per` already at `h_max`.
    fn isolated_max(&self, r: usize) -> (u64, Option<Counterexample>) {
        let c = self.config(r);
        let h = c.height_profile();
        let (per, h_max, tot) = (self.per(), c.h_max(), c.tot() as i64);
        let mut examined = 0;
        for i in c.selectable() {
            if h[i] + per != h_max
                || c.flip_direction(i) != Some(true)
                || !active_unchecked(&self.rule, &c, i)
            {
                continue;
            }
            examined += 1;
            let at_max = |j: i64| (0..=tot).contains(&j) && h[j as usize] == h_max;
            let i_ = i as i64;
            if !at_max(i_ + per) && !at_max(i_ - per) {
                return (
                    examined,
                    Some(Counterexample {
                        word: c.word().to_string(),
                        index: Some(i),
                        detail: format!("flip raises c_{i} to an isolated maximum {h_max}"),
                    }),
                );
            }
        }
        (examined, None)
    }

    /// A site at an extremum with a point within `per` to its left that is at
    /// least `per` away from that extremum is active, for `i <= tot - sight`.
    fn activity(&self, r: usize) -> (u64, Option<Counterexample>) {
        let c = self.config(r);
        let h = c.height_profile();
        let per = self.per();
        let (h_min, h_max) = (c.h_min(), c.h_max());
        let tot = c.tot();
        let last = tot.saturating_sub(self.rule_params.sight());
        let mut examined = 0;
        for i in 1..=last {
            let lows = (1..=per as usize).take_while(|&j| j <= i).map(|j| h[i - j]);
            let at_max = h[i] == h_max && lows.clone().any(|x| x + per <= h_max);
            let at_min = h[i] == h_min && lows.clone().any(|x| x - per >= h_min);
            if !(at_max || at_min) {
                continue;
            }
            examined += 1;
            if !active_unchecked(&self.rule, &c, i) {
                let side = if at_max { "maximum" } else { "minimum" };
                return (
                    examined,
                    Some(Counterexample {
                        word: c.word().to_string(),
                        index: Some(i),
                        detail: format!("site at the {side} is not active"),
                    }),
                );
            }
        }
        (examined, None)
    }

    /// With the energy context taken at the configuration's own `h_max`
    /// (whenever that is at least `per`): drift is non-positive and some pick
    /// changes the energy.
    fn drift(&self, r: usize) -> (u64, Option<Counterexample>) {
        let c = self.config(r);
        let h0 = c.h_max();
        if h0 < self.per() {
            return (0, None);
        }
        let ctx = EnergyContext::for_level(self.params, self.topology, h0)
            .expect("level is at least per");
        let e = energy(&c, &ctx).expect("context matches the instance");
        if e == 0 {
            return (0, None);
        }
        let drift = expected_drift(&c, &ctx, &self.rule_params).expect("energy is positive");
        let picks = energies_after_pick(&c, &ctx, &self.rule_params).expect("same instance");
        let moving = picks.iter().filter(|(_, after)| *after != e).count();
        let detail = if drift > num::rational::Ratio::zero() {
            Some(format!(
                "energy {e} has positive drift {drift} at level {h0}"
            ))
        } else if moving == 0 {
            Some(format!("energy {e} cannot change at level {h0}"))
        } else {
            None
        };
        (
            1,
            detail.map(|detail| Counterexample {
                word: c.word().to_string(),
                index: None,
                detail,
            }),
        )
    }
}

pub const CHECK_THEOREM1: &str = "nonnegative-coalescence";
pub const CHECK_STRIP: &str = "recurrent-strip";
pub const CHECK_STABLE_CHRISTOFFEL: &str = "stable-christoffel";
pub const CHECK_RECURRENT_CHRISTOFFEL: &str = "recurrent-christoffel";

/// Recurrence structure of a chain instance: every closed class containing
/// a nonnegative configuration is exactly the target, and every closed class
/// lies within the strip `-per+1 <= h_min, h_max <= per-1`.
pub fn theorem1_check(graph: &TransitionGraph) -> Report {
    let params = *graph.params();
    let rule = RuleParams::new(graph.sight()).expect("graph sight is valid");
    let instance = instance_label(&params, &rule, graph.topology());
    let check = |name| Check {
        name,
        instance: &instance,
    };
    if params.per() > graph.sight() {
        return Report {
            checks: vec![
                check(CHECK_THEOREM1).skipped(HYPOTHESIS_NOTE),
                check(CHECK_STRIP).skipped(HYPOTHESIS_NOTE),
            ],
            instance,
        };
    }
    let target = graph
        .index_of(target_christoffel(params).word())
        .expect("target belongs to the instance");
    let classes = graph.closed_classes();
    let per = params.per() as i64;
    let describe = |class: &[usize], detail: String| Counterexample {
        word: graph.word(class[0]).to_string(),
        index: None,
        detail,
    };

    let nonneg = |s: usize| graph.h_min(s) >= 0;
    let first = classes
        .iter()
        .filter(|cl| cl.iter().any(|&s| nonneg(s)))
        .find(|cl| cl.as_slice() != [target])
        .map(|cl| {
            describe(
                cl,
                format!("closed class of {} states other than the target", cl.len()),
            )
        });
    let t1 = check(CHECK_THEOREM1).result(classes.len() as u64, first);

    let strip = classes
        .iter()
        .find(|cl| {
            cl.iter()
                .any(|&s| graph.h_min(s) < 1 - per || graph.h_max(s) > per - 1)
        })
        .map(|cl| describe(cl, "closed class leaves the strip".into()));
    let t2 = check(CHECK_STRIP).result(classes.len() as u64, strip);
    Report {
        instance,
        checks: vec![t1, t2],
    }
}

/// Cyclic instance: every stable configuration and every closed class is a
/// Christoffel configuration.
pub fn theorem3_check(graph: &TransitionGraph) -> Report {
    let params = *graph.params();
    let rule = RuleParams::new(graph.sight()).expect("graph sight is valid");
    let instance = instance_label(&params, &rule, graph.topology());
    let check = |name| Check {
        name,
        instance: &instance,
    };
    if params.per() > graph.sight() {
        return Report {
            checks: vec![
                check(CHECK_STABLE_CHRISTOFFEL).skipped(HYPOTHESIS_NOTE),
                check(CHECK_RECURRENT_CHRISTOFFEL).skipped(HYPOTHESIS_NOTE),
            ],
            instance,
        };
    }
    let absorbing = graph.absorbing_states();
    let bad = absorbing
        .iter()
        .find(|&&s| !graph.is_christoffel(s))
        .map(|&s| Counterexample {
            word: graph.word(s).to_string(),
            index: None,
            detail: format!("stable with thickness {}", graph.thickness(s)),
        });
    let stable = check(CHECK_STABLE_CHRISTOFFEL).result(absorbing.len() as u64, bad);
    let classes = graph.closed_classes();
    let bad = classes
        .iter()
        .find(|cl| cl.len() != 1 || !graph.is_christoffel(cl[0]))
        .map(|cl| Counterexample {
            word: graph.word(cl[0]).to_string(),
            index: None,
            detail: format!(
                "closed class of {} states, thickness {}",
                cl.len(),
                graph.thickness(cl[0])
            ),
        });
    let recurrent = check(CHECK_RECURRENT_CHRISTOFFEL).result(classes.len() as u64, bad);
    Report {
        instance,
        checks: vec![stable, recurrent],
    }
}
