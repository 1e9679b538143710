//! Energy function, exact expected drift and coalescence statistics.
//!
//! Fix a start `c0` with `h_max(c0) = H0 >= per`. All sites at height `H0`
//! share one residue class mod `per` (the border set). For a configuration `c`
//! with `h_max(c) = H0`, `Top` is the set of sites at `H0`, `Down` the tops
//! whose `+per` neighbour is not a top, `Up` the tops whose `-per` neighbour
//! is not a top, and `E(c) = 2|Top| + |Down| + |Up|`. Any other `c` has
//! energy 0.

use std::io::Write;

use num::rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Configuration, LineParams, Topology, Word};
use crate::dynamics::{canonical_start, trial_seed, ProcessState, StartKind, StopKind};
use crate::error::{Error, Result};
use crate::rule::{active_unchecked, RuleParams, ThreadRule};

pub type Rational = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergyContext {
    h0: i64,
    border_plus: Vec<usize>,
    params: LineParams,
    topology: Topology,
}

impl EnergyContext {
    /// Context for the reference level `h0` directly. The border class is the
    /// residue `r` with `t_a r = h0 (mod per)`.
    pub fn for_level(params: LineParams, topology: Topology, h0: i64) -> Result<Self> {
        let per = params.per() as i64;
        if h0 < per {
            return Err(Error::EnergyHypothesis { h_max: h0, per });
        }
        let residue = (0..per)
            .find(|r| (params.ta() * r - h0).rem_euclid(per) == 0)
            .expect("t_a is invertible mod per") as usize;
        let tot = params.tot();
        let range = match topology {
            Topology::Chain => 1..tot,
            Topology::Cycle => 0..tot,
        };
        let border_plus = range.filter(|i| i % params.per() == residue).collect();
        Ok(EnergyContext {
            h0,
            border_plus,
            params,
            topology,
        })
    }

    pub fn h0(&self) -> i64 {
        self.h0
    }

    pub fn border_plus(&self) -> &[usize] {
        &self.border_plus
    }

    pub fn params(&self) -> &LineParams {
        &self.params
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }
}

/// Builds the context from `c0`; rejects `h_max(c0) < per`.
pub fn energy_context(c0: &Configuration) -> Result<EnergyContext> {
    let ctx = EnergyContext::for_level(*c0.params(), c0.topology(), c0.h_max())?;
    debug_assert!({
        let h = c0.height_profile();
        ctx.border_plus.iter().any(|&i| h[i] == ctx.h0)
    });
    Ok(ctx)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopDownUp {
    pub top: Vec<usize>,
    pub down: Vec<usize>,
    pub up: Vec<usize>,
}

fn top_down_up_of(heights: &[i64], ctx: &EnergyContext) -> TopDownUp {
    let tot = ctx.params.tot();
    let per = ctx.params.per();
    let at_top = |i: usize| heights[i] == ctx.h0;
    match ctx.topology {
        Topology::Chain => {
            let in_top = |i: usize| (1..tot).contains(&i) && at_top(i);
            let top: Vec<usize> = (1..tot).filter(|&i| at_top(i)).collect();
            let down = top
                .iter()
                .copied()
                .filter(|&i| i + per <= tot && !in_top(i + per))
                .collect();
            let up = top
                .iter()
                .copied()
                .filter(|&i| i >= per && !in_top(i - per))
                .collect();
            TopDownUp { top, down, up }
        }
        Topology::Cycle => {
            let top: Vec<usize> = (0..tot).filter(|&i| at_top(i)).collect();
            let down = top
                .iter()
                .copied()
                .filter(|&i| !at_top((i + per) % tot))
                .collect();
            let up = top
                .iter()
                .copied()
                .filter(|&i| !at_top((i + tot - per % tot) % tot))
                .collect();
            TopDownUp { top, down, up }
        }
    }
}

fn check_instance(c: &Configuration, ctx: &EnergyContext) -> Result<()> {
    if c.params() != &ctx.params || c.topology() != ctx.topology {
        return Err(Error::ForeignConfiguration);
    }
    Ok(())
}

pub fn top_down_up(c: &Configuration, ctx: &EnergyContext) -> Result<TopDownUp> {
    check_instance(c, ctx)?;
    Ok(top_down_up_of(&c.height_profile(), ctx))
}

fn energy_of(heights: &[i64], ctx: &EnergyContext) -> i64 {
    let sites = match ctx.topology {
        Topology::Chain => heights,
        Topology::Cycle => &heights[..heights.len() - 1],
    };
    if sites.iter().copied().max() != Some(ctx.h0) {
        return 0;
    }
    let tdu = top_down_up_of(heights, ctx);
    let mut e = 2 * tdu.top.len() + tdu.down.len() + tdu.up.len();
    if ctx.topology == Topology::Cycle && tdu.top == ctx.border_plus {
        e += 2;
    }
    e as i64
}

/// `E(c)` under `ctx`; the cycle variant adds 2 when `Top = Border`.
pub fn energy(c: &Configuration, ctx: &EnergyContext) -> Result<i64> {
    check_instance(c, ctx)?;
    Ok(energy_of(&c.height_profile(), ctx))
}

/// Energy after selecting each index: `E(delta_i(c))` for every selectable
/// `i`, where inactive picks leave `c` unchanged. A flip at `i` only moves
/// `c_i`, so heights are updated in place (on a cycle `c_0 = c_tot`).
pub fn energies_after_pick(
    c: &Configuration,
    ctx: &EnergyContext,
    rule: &RuleParams,
) -> Result<Vec<(usize, i64)>> {
    check_instance(c, ctx)?;
    let rule = ThreadRule::new(*rule);
    let heights = c.height_profile();
    let base = energy_of(&heights, ctx);
    let per = c.params().per() as i64;
    let tot = c.tot();
    let mut scratch = heights.clone();
    Ok(c.selectable()
        .map(|i| {
            if !active_unchecked(&rule, c, i) {
                return (i, base);
            }
            let delta = if c.flip_direction(i) == Some(true) {
                per
            } else {
                -per
            };
            scratch[i] += delta;
            if i == 0 {
                scratch[tot] += delta;
            }
            let e = energy_of(&scratch, ctx);
            scratch[i] = heights[i];
            scratch[tot] = heights[tot];
            (i, e)
        })
        .collect())
}

/// `E[E(delta(c)) - E(c) | c]`, exactly.
pub fn expected_drift(
    c: &Configuration,
    ctx: &EnergyContext,
    rule: &RuleParams,
) -> Result<Rational> {
    let base = energy(c, ctx)?;
    if base == 0 {
        return Err(Error::ZeroEnergy);
    }
    let picks = energies_after_pick(c, ctx, rule)?;
    let total: i64 = picks.iter().map(|&(_, e)| e - base).sum();
    Ok(Rational::new(total, picks.len() as i64))
}

/// `k E0 / eps`, the expected hitting-time bound for a nonnegative
/// supermartingale energy bounded by `k` that moves with probability `eps`.
pub fn martingale_bound(k: i64, e0: i64, eps: Rational) -> Result<Rational> {
    if e0 < 1 || k < e0 {
        return Err(Error::InvalidArgument(format!(
            "need k >= E0 >= 1 (k = {k}, E0 = {e0})"
        )));
    }
    if eps <= Rational::from_integer(0) || eps > Rational::from_integer(1) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < eps <= 1 (eps = {eps})"
        )));
    }
    Ok(Rational::from_integer(k * e0) / eps)
}

/// `(2n - 1)^3 (tot - 1)`, the coalescence bound for nonnegative starts,
/// saturating at `u64::MAX`.
pub fn coalescence_bound(params: &LineParams) -> u64 {
    let m = 2 * params.n() as u64 - 1;
    m.saturating_pow(3).saturating_mul(params.tot() as u64 - 1)
}

/// Where trials start.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartSpec {
    Kind(StartKind),
    Word(Word),
}

impl StartSpec {
    fn label(&self) -> String {
        match self {
            StartSpec::Kind(k) => k.name().to_string(),
            StartSpec::Word(w) => w.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub params: LineParams,
    pub rule: RuleParams,
    pub topology: Topology,
    pub start: StartSpec,
    pub trials: u64,
    pub seed: u64,
    pub stop: StopKind,
    pub cap: u64,
    /// Track the maximum energy seen (one `O(tot)` evaluation per flip).
    pub track_energy: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    pub seed: u64,
    pub steps: u64,
    pub terminal: Word,
    pub reached: bool,
    /// Steps spent at each `h_max` level, highest first.
    pub level_steps: Vec<(i64, u64)>,
    pub max_energy: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub ta: u32,
    pub tb: u32,
    pub n: usize,
    pub tot: usize,
    pub sight: usize,
    pub topology: Topology,
    pub start: String,
    pub stop: StopKind,
    pub cap: u64,
    pub trials: u64,
    pub mean: f64,
    pub median: f64,
    pub max: u64,
    pub bound: u64,
    pub cap_hits: Vec<u64>,
    pub max_energy: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub summary: ExperimentSummary,
    pub results: Vec<TrialResult>,
}

fn run_trial(cfg: &ExperimentConfig, trial: u64) -> Result<TrialResult> {
    let seed = trial_seed(cfg.seed, trial);
    let start = match &cfg.start {
        // the start gets its own substream so it is independent of the scheduler
        StartSpec::Kind(kind) => canonical_start(cfg.params, *kind, trial_seed(seed, u64::MAX)),
        StartSpec::Word(w) => Configuration::chain(w.clone(), cfg.params)?,
    }
    .with_topology(cfg.topology);
    let mut state = ProcessState::new(start, cfg.rule, seed);
    let mut levels: Vec<(i64, u64)> = Vec::new();
    let mut ctx: Option<EnergyContext> = None;
    let mut max_energy: Option<i64> = None;
    let mut taken = 0u64;
    let reached = loop {
        if state.satisfies(cfg.stop) {
            break true;
        }
        if taken >= cfg.cap {
            break cfg.stop == StopKind::StepLimit;
        }
        let level = state.h_max();
        match levels.last_mut() {
            Some((l, t)) if *l == level => *t += 1,
            _ => levels.push((level, 1)),
        }
        if cfg.track_energy && ctx.as_ref().map(|c| c.h0()) != Some(level) {
            // each h_max level gets a fresh context
            ctx = EnergyContext::for_level(cfg.params, cfg.topology, level).ok();
            if let Some(c) = &ctx {
                let e = energy(state.config(), c)?;
                max_energy = Some(max_energy.map_or(e, |m| m.max(e)));
            }
        }
        let ev = state.step();
        taken += 1;
        if ev.flipped && cfg.track_energy {
            if let Some(c) = &ctx {
                let e = energy(state.config(), c)?;
                max_energy = Some(max_energy.map_or(e, |m| m.max(e)));
            }
        }
    };
    Ok(TrialResult {
        trial,
        seed,
        steps: taken,
        terminal: state.config().word().clone(),
        reached,
        level_steps: levels,
        max_energy,
    })
}

fn median(sorted: &[u64]) -> f64 {
    match sorted.len() {
        0 => 0.0,
        n if n % 2 == 1 => sorted[n / 2] as f64,
        n => (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0,
    }
}

/// Independent seeded trials, run in parallel and reported in trial order.
/// Trials that hit the cap count with `steps = cap` and are listed in
/// `cap_hits`.
pub fn coalescence_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let results = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Result<Vec<_>>>()?;
    let mut steps: Vec<u64> = results.iter().map(|r| r.steps).collect();
    steps.sort_unstable();
    let mean = steps.iter().map(|&s| s as f64).sum::<f64>() / steps.len() as f64;
    let summary = ExperimentSummary {
        ta: cfg.params.ta() as u32,
        tb: cfg.params.tb() as u32,
        n: cfg.params.n(),
        tot: cfg.params.tot(),
        sight: cfg.rule.sight(),
        topology: cfg.topology,
        start: cfg.start.label(),
        stop: cfg.stop,
        cap: cfg.cap,
        trials: cfg.trials,
        mean,
        median: median(&steps),
        max: *steps.last().expect("at least one trial"),
        bound: coalescence_bound(&cfg.params),
        cap_hits: results
            .iter()
            .filter(|r| !r.reached)
            .map(|r| r.trial)
            .collect(),
        max_energy: results.iter().filter_map(|r| r.max_energy).max(),
    };
    Ok(ExperimentReport { summary, results })
}

/// Least-squares slope of `ln(mean)` against `ln(tot)`.
pub fn scaling_exponent(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub instances: Vec<ExperimentSummary>,
    pub exponent: Option<f64>,
}

/// Runs one experiment per `n` and fits the log-log scaling exponent of the
/// mean coalescence time against `tot`.
pub fn coalescence_sweep(
    base: &ExperimentConfig,
    ns: &[u32],
    cap_for: impl Fn(&LineParams) -> u64,
) -> Result<(SweepReport, Vec<ExperimentReport>)> {
    let mut reports = Vec::with_capacity(ns.len());
    for &n in ns {
        let params = LineParams::new(base.params.ta() as u32, base.params.tb() as u32, n)?;
        let cfg = ExperimentConfig {
            params,
            cap: cap_for(&params),
            ..base.clone()
        };
        reports.push(coalescence_experiment(&cfg)?);
    }
    let points: Vec<(f64, f64)> = reports
        .iter()
        .map(|r| (r.summary.tot as f64, r.summary.mean))
        .collect();
    let sweep = SweepReport {
        instances: reports.iter().map(|r| r.summary.clone()).collect(),
        exponent: scaling_exponent(&points),
    };
    Ok((sweep, reports))
}

/// CSV with header `trial,seed,steps,terminal`.
pub fn write_trials_csv<W: Write>(out: &mut W, report: &ExperimentReport) -> std::io::Result<()> {
    writeln!(out, "trial,seed,steps,terminal")?;
    for r in &report.results {
        writeln!(out, "{},{},{},{}", r.trial, r.seed, r.steps, r.terminal)?;
    }
    Ok(())
}
