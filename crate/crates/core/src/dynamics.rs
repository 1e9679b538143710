//! The random sequential process.
//!
//! At every time step one selectable index is drawn uniformly (`1..tot-1` on a
//! chain, `0..tot-1` on a cycle); the site flips if it is active, otherwise
//! nothing happens. One time unit is one scheduler pick.
//!
//! Randomness comes from ChaCha8 seeded with [`ChaCha8Rng::seed_from_u64`].
//! Parallel trials derive their seeds with [`trial_seed`], a SplitMix64 mix of
//! the master seed and the trial index.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{target_christoffel, Configuration, Letter, LineParams, Topology, Word};
use crate::error::{Error, Result};
use crate::rule::{active_unchecked, RuleParams, ThreadRule};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` under `master`: `mix(master + mix(trial))`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    splitmix64(master.wrapping_add(splitmix64(trial)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopKind {
    /// No active site left.
    Stable,
    /// Thickness `per - 1`.
    Christoffel,
    /// `-per + 1 <= h_min` and `h_max <= per - 1`.
    Strip,
    /// The configuration equals the band-`[0, per-1]` Christoffel word.
    Target,
    /// Run exactly `cap` steps.
    StepLimit,
}

impl StopKind {
    pub fn name(self) -> &'static str {
        match self {
            StopKind::Stable => "stable",
            StopKind::Christoffel => "christoffel",
            StopKind::Strip => "strip",
            StopKind::Target => "target",
            StopKind::StepLimit => "step-limit",
        }
    }
}

impl FromStr for StopKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "stable" => StopKind::Stable,
            "christoffel" => StopKind::Christoffel,
            "strip" => StopKind::Strip,
            "target" => StopKind::Target,
            "step-limit" | "none" => StopKind::StepLimit,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown stop condition {other:?}"
                )))
            }
        })
    }
}

impl fmt::Display for StopKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A stop condition always carries a step cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopCondition {
    pub kind: StopKind,
    pub cap: u64,
}

impl StopCondition {
    pub fn new(kind: StopKind, cap: u64) -> Self {
        StopCondition { kind, cap }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepEvent {
    pub step: u64,
    pub index: usize,
    pub flipped: bool,
    pub h_max: i64,
    pub h_min: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The stop condition holds at the terminal configuration.
    Satisfied,
    /// The cap was reached first.
    CapExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step: u64,
    pub word: Word,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventRecording {
    #[default]
    All,
    Flips,
    None,
}

impl FromStr for EventRecording {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(EventRecording::All),
            "flips" => Ok(EventRecording::Flips),
            "none" => Ok(EventRecording::None),
            other => Err(Error::InvalidArgument(format!(
                "unknown event recording {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub snapshot_every: Option<u64>,
    pub events: EventRecording,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<StepEvent>,
    pub snapshots: Vec<Snapshot>,
    pub terminal: Configuration,
    /// Steps taken during this run.
    pub steps: u64,
    pub flips: u64,
    pub outcome: Outcome,
}

/// Running state of one trajectory.
///
/// Heights, a height histogram and the active set are maintained
/// incrementally; a flip only changes activity within distance `s`.
#[derive(Clone, Debug)]
pub struct ProcessState {
    config: Configuration,
    rule: ThreadRule,
    step_count: u64,
    rng: ChaCha8Rng,
    heights: Vec<i64>,
    hist: Vec<u32>,
    offset: i64,
    h_min: i64,
    h_max: i64,
    active: Vec<bool>,
    active_count: usize,
}

impl ProcessState {
    pub fn new(config: Configuration, rule: RuleParams, seed: u64) -> Self {
        let params = *config.params();
        let bound = params.ta() * params.tb() * params.n() as i64;
        let mut state = ProcessState {
            rule: ThreadRule::new(rule),
            step_count: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            heights: Vec::new(),
            hist: vec![0; 2 * bound as usize + 1],
            offset: bound,
            h_min: 0,
            h_max: 0,
            active: vec![false; config.tot()],
            active_count: 0,
            config,
        };
        state.rebuild_heights();
        for i in state.config.selectable() {
            state.set_active(i);
        }
        state
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn h_min(&self) -> i64 {
        self.h_min
    }

    pub fn h_max(&self) -> i64 {
        self.h_max
    }

    pub fn thickness(&self) -> i64 {
        self.h_max - self.h_min
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn is_stable(&self) -> bool {
        self.active_count == 0
    }

    pub fn active_count(&self) -> usize {
        self.active_count
    }

    fn rebuild_heights(&mut self) {
        self.heights = self.config.height_profile();
        self.hist.iter_mut().for_each(|c| *c = 0);
        for &h in &self.heights {
            self.hist[(h + self.offset) as usize] += 1;
        }
        let (lo, hi) = crate::config::min_max(&self.heights);
        self.h_min = lo;
        self.h_max = hi;
    }

    fn set_active(&mut self, i: usize) {
        let now = active_unchecked(&self.rule, &self.config, i);
        if now != self.active[i] {
            self.active[i] = now;
            if now {
                self.active_count += 1;
            } else {
                self.active_count -= 1;
            }
        }
    }

    fn move_height(&mut self, i: usize, new: i64) {
        let old = self.heights[i];
        self.heights[i] = new;
        self.hist[(old + self.offset) as usize] -= 1;
        self.hist[(new + self.offset) as usize] += 1;
        self.h_max = self.h_max.max(new);
        self.h_min = self.h_min.min(new);
        while self.hist[(self.h_max + self.offset) as usize] == 0 {
            self.h_max -= 1;
        }
        while self.hist[(self.h_min + self.offset) as usize] == 0 {
            self.h_min += 1;
        }
    }

    fn apply_flip(&mut self, i: usize) {
        let up = self
            .config
            .flip_direction(i)
            .expect("active sites have distinct letters");
        let (p, q) = self.config.flip_positions(i);
        self.config.swap_positions(p, q);
        let per = self.config.params().per() as i64;
        if i == 0 {
            // re-rooting a cycle shifts every other site
            self.rebuild_heights();
        } else {
            let new = self.heights[i] + if up { per } else { -per };
            self.move_height(i, new);
        }

        let tot = self.config.tot();
        let s = self.rule.params().sight();
        match self.config.topology() {
            Topology::Cycle if 2 * s + 1 >= tot => {
                for j in 0..tot {
                    self.set_active(j);
                }
            }
            Topology::Cycle => {
                for d in 0..=2 * s {
                    self.set_active((i + tot + d - s) % tot);
                }
            }
            Topology::Chain => {
                let lo = i.saturating_sub(s).max(1);
                let hi = (i + s).min(tot - 1);
                for j in lo..=hi {
                    self.set_active(j);
                }
            }
        }
    }

    /// One scheduler pick.
    pub fn step(&mut self) -> StepEvent {
        let range = self.config.selectable();
        // gen_range rejects out-of-zone draws, so the pick is unbiased
        let i = self.rng.gen_range(range);
        let flipped = self.active[i];
        if flipped {
            let (lo, hi, th) = (self.h_min, self.h_max, self.thickness());
            self.apply_flip(i);
            if self.rule.params().sight() >= self.config.params().per() {
                match self.config.topology() {
                    Topology::Chain => debug_assert!(
                        self.h_min >= lo && self.h_max <= hi,
                        "h_min/h_max monotonicity violated at {}",
                        self.config
                    ),
                    Topology::Cycle => debug_assert!(self.thickness() <= th),
                }
            }
        }
        self.step_count += 1;
        StepEvent {
            step: self.step_count,
            index: i,
            flipped,
            h_max: self.h_max,
            h_min: self.h_min,
        }
    }

    pub fn satisfies(&self, kind: StopKind) -> bool {
        let per = self.config.params().per() as i64;
        match kind {
            StopKind::Stable => self.is_stable(),
            StopKind::Christoffel => self.thickness() == per - 1,
            StopKind::Strip => self.h_min > -per && self.h_max < per,
            // the band [0, per-1] pins the word down uniquely
            StopKind::Target => self.h_min == 0 && self.h_max == per - 1,
            StopKind::StepLimit => false,
        }
    }

    /// Steps until `stop` holds or `stop.cap` steps have been taken.
    pub fn run(&mut self, stop: StopCondition, opts: RunOptions) -> Trace {
        let mut events = Vec::new();
        let mut snapshots = Vec::new();
        let mut taken = 0u64;
        let mut flips = 0u64;
        let snap = |state: &Self, snapshots: &mut Vec<Snapshot>| {
            snapshots.push(Snapshot {
                step: state.step_count,
                word: state.config.word().clone(),
            })
        };
        if opts.snapshot_every.is_some() {
            snap(self, &mut snapshots);
        }
        let outcome = loop {
            if self.satisfies(stop.kind) {
                break Outcome::Satisfied;
            }
            if taken >= stop.cap {
                break if stop.kind == StopKind::StepLimit {
                    Outcome::Satisfied
                } else {
                    Outcome::CapExhausted
                };
            }
            let ev = self.step();
            taken += 1;
            flips += ev.flipped as u64;
            match opts.events {
                EventRecording::All => events.push(ev),
                EventRecording::Flips if ev.flipped => events.push(ev),
                _ => {}
            }
            if let Some(k) = opts.snapshot_every {
                if k > 0 && self.step_count.is_multiple_of(k) {
                    snap(self, &mut snapshots);
                }
            }
        };
        if opts.snapshot_every.is_some()
            && snapshots.last().map(|s| s.step) != Some(self.step_count)
        {
            snap(self, &mut snapshots);
        }
        Trace {
            events,
            snapshots,
            terminal: self.config.clone(),
            steps: taken,
            flips,
            outcome,
        }
    }
}

/// Starts a process; see [`ProcessState::new`].
pub fn new_process(config: Configuration, rule: RuleParams, seed: u64) -> ProcessState {
    ProcessState::new(config, rule, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartKind {
    /// `b^B a^A`, the highest nonnegative configuration.
    MaxNonneg,
    /// `a^A b^B`.
    MinNonpos,
    /// Uniform over all words with the instance's letter counts.
    Random,
    /// Uniform over nonnegative configurations.
    RandomNonneg,
}

impl StartKind {
    pub fn name(self) -> &'static str {
        match self {
            StartKind::MaxNonneg => "max-nonneg",
            StartKind::MinNonpos => "min-nonpos",
            StartKind::Random => "random",
            StartKind::RandomNonneg => "random-nonneg",
        }
    }
}

impl FromStr for StartKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "max-nonneg" => StartKind::MaxNonneg,
            "min-nonpos" => StartKind::MinNonpos,
            "random" => StartKind::Random,
            "random-nonneg" | "random-nonnegative" => StartKind::RandomNonneg,
            other => return Err(Error::InvalidArgument(format!("unknown start {other:?}"))),
        })
    }
}

impl fmt::Display for StartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn block_word(first: Letter, first_len: usize, second_len: usize) -> Word {
    let mut letters = vec![first; first_len];
    letters.extend(std::iter::repeat_n(first.swap(), second_len));
    Word::new(letters)
}

pub fn canonical_start(params: LineParams, kind: StartKind, seed: u64) -> Configuration {
    let (a, b) = (params.a_count(), params.b_count());
    let word = match kind {
        StartKind::MaxNonneg => block_word(Letter::B, b, a),
        StartKind::MinNonpos => block_word(Letter::A, a, b),
        StartKind::Random | StartKind::RandomNonneg => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut letters = block_word(Letter::A, a, b).into_letters();
            loop {
                letters.shuffle(&mut rng);
                if kind == StartKind::Random {
                    break;
                }
                let c = Configuration::chain(Word::new(letters.clone()), params)
                    .expect("shuffle keeps counts");
                if c.is_nonnegative() {
                    break;
                }
            }
            Word::new(letters)
        }
    };
    Configuration::chain(word, params).expect("canonical starts have the right counts")
}

/// Header line of a JSON-lines trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub ta: u32,
    pub tb: u32,
    pub n: u32,
    pub sight: usize,
    pub seed: u64,
    pub topology: Topology,
    pub stop: StopKind,
    pub cap: u64,
    pub start: Word,
    pub snapshot_every: Option<u64>,
}

impl TraceHeader {
    pub fn params(&self) -> Result<LineParams> {
        LineParams::new(self.ta, self.tb, self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEnd {
    pub steps: u64,
    pub flips: u64,
    pub outcome: Outcome,
    pub word: Word,
    pub h_min: i64,
    pub h_max: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TraceLine {
    Header { header: TraceHeader },
    End { end: TraceEnd },
    Event(StepEvent),
    Snapshot(Snapshot),
}

/// Writes header, events, snapshots (interleaved by step) and an end line.
pub fn write_trace<W: Write>(out: &mut W, header: &TraceHeader, trace: &Trace) -> Result<()> {
    let io = |e: std::io::Error| Error::TraceFormat(e.to_string());
    let line = |out: &mut W, l: &TraceLine| -> Result<()> {
        serde_json::to_writer(&mut *out, l).map_err(|e| Error::TraceFormat(e.to_string()))?;
        out.write_all(b"\n").map_err(io)
    };
    line(
        out,
        &TraceLine::Header {
            header: header.clone(),
        },
    )?;
    let mut snaps = trace.snapshots.iter().peekable();
    for ev in &trace.events {
        while let Some(s) = snaps.next_if(|s| s.step < ev.step) {
            line(out, &TraceLine::Snapshot(s.clone()))?;
        }
        line(out, &TraceLine::Event(*ev))?;
    }
    for s in snaps {
        line(out, &TraceLine::Snapshot(s.clone()))?;
    }
    let profile = trace.terminal.height_profile();
    let (h_min, h_max) = crate::config::min_max(&profile);
    line(
        out,
        &TraceLine::End {
            end: TraceEnd {
                steps: trace.steps,
                flips: trace.flips,
                outcome: trace.outcome,
                word: trace.terminal.word().clone(),
                h_min,
                h_max,
            },
        },
    )
}

/// A trace read back from JSON lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedTrace {
    pub header: TraceHeader,
    pub events: Vec<StepEvent>,
    pub snapshots: Vec<Snapshot>,
    pub end: Option<TraceEnd>,
}

pub fn read_trace<R: BufRead>(input: R) -> Result<ParsedTrace> {
    let mut header = None;
    let mut events = Vec::new();
    let mut snapshots = Vec::new();
    let mut end = None;
    for (no, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::TraceFormat(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: TraceLine = serde_json::from_str(&line)
            .map_err(|e| Error::TraceFormat(format!("line {}: {e}", no + 1)))?;
        match parsed {
            TraceLine::Header { header: h } => header = Some(h),
            TraceLine::End { end: e } => end = Some(e),
            TraceLine::Event(e) => events.push(e),
            TraceLine::Snapshot(s) => snapshots.push(s),
        }
    }
    let header = header.ok_or_else(|| Error::TraceFormat("missing header line".into()))?;
    Ok(ParsedTrace {
        header,
        events,
        snapshots,
        end,
    })
}

/// Convenience wrapper: run from `start` and report whether the target was hit.
pub fn reaches_target(start: Configuration, rule: RuleParams, seed: u64, cap: u64) -> Trace {
    let mut st = ProcessState::new(start, rule, seed);
    let trace = st.run(
        StopCondition::new(StopKind::Target, cap),
        RunOptions {
            snapshot_every: None,
            events: EventRecording::None,
        },
    );
    debug_assert!(
        trace.outcome != Outcome::Satisfied
            || trace.terminal == target_christoffel(*trace.terminal.params())
    );
    trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::{active_sites, is_stable};

    fn p(ta: u32, tb: u32, n: u32) -> LineParams {
        LineParams::new(ta, tb, n).unwrap()
    }

    fn s(n: usize) -> RuleParams {
        RuleParams::new(n).unwrap()
    }

    fn quiet() -> RunOptions {
        RunOptions {
            snapshot_every: None,
            events: EventRecording::All,
        }
    }

    #[test]
    fn determinism_and_seed_dependence() {
        let c = canonical_start(p(3, 2, 3), StartKind::MaxNonneg, 0);
        let run = |seed| {
            let mut st = new_process(c.clone(), s(5), seed);
            st.run(StopCondition::new(StopKind::StepLimit, 2000), quiet())
        };
        assert_eq!(run(0), run(0));
        assert_ne!(run(1).events, run(2).events);
    }

    #[test]
    fn stable_configuration_never_flips() {
        let t = target_christoffel(p(3, 2, 2));
        let mut st = new_process(t.clone(), s(5), 3);
        for _ in 0..500 {
            assert!(!st.step().flipped);
        }
        assert_eq!(st.config(), &t);
        assert_eq!(st.step_count(), 500);
    }

    #[test]
    fn bbaa_flips_only_at_index_two() {
        let c = Configuration::parse("bbaa", p(1, 1, 2), Topology::Chain).unwrap();
        let mut st = new_process(c, s(2), 11);
        loop {
            let ev = st.step();
            assert_eq!(ev.flipped, ev.index == 2);
            if ev.flipped {
                break;
            }
        }
        assert_eq!(st.config().word().to_string(), "baba");
    }

    #[test]
    fn index_frequencies_are_uniform() {
        // a stable start keeps the state fixed while sampling indices
        let mut st = new_process(target_christoffel(p(1, 1, 3)), s(2), 5);
        let trials = 100_000u64;
        let k = 5u64;
        let mut counts = vec![0u64; 6];
        for _ in 0..trials {
            counts[st.step().index] += 1;
        }
        assert_eq!(counts[0], 0);
        let mean = trials as f64 / k as f64;
        let sd = (trials as f64 * (1.0 / k as f64) * (1.0 - 1.0 / k as f64)).sqrt();
        for &c in &counts[1..] {
            assert!((c as f64 - mean).abs() < 3.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn cycle_picks_index_zero() {
        let t = target_christoffel(p(1, 1, 2)).with_topology(Topology::Cycle);
        let mut st = new_process(t, s(2), 9);
        let mut seen = [false; 4];
        for _ in 0..1000 {
            seen[st.step().index] = true;
        }
        assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn run_examples() {
        let c = Configuration::parse("bbaa", p(1, 1, 2), Topology::Chain).unwrap();
        let trace =
            new_process(c, s(2), 4).run(StopCondition::new(StopKind::Target, 10_000), quiet());
        assert_eq!(trace.outcome, Outcome::Satisfied);
        assert_eq!(trace.terminal.word().to_string(), "baba");

        let t = target_christoffel(p(3, 2, 4));
        let trace =
            new_process(t.clone(), s(5), 4).run(StopCondition::new(StopKind::Stable, 10), quiet());
        assert_eq!(
            (trace.outcome, trace.steps, trace.flips),
            (Outcome::Satisfied, 0, 0)
        );
        assert_eq!(trace.terminal, t);
    }

    #[test]
    fn incremental_state_matches_recomputation() {
        for topology in [Topology::Chain, Topology::Cycle] {
            let c = canonical_start(p(3, 2, 4), StartKind::Random, 17).with_topology(topology);
            let mut st = new_process(c, s(5), 99);
            for _ in 0..3000 {
                st.step();
                let cfg = st.config();
                assert_eq!(st.heights(), cfg.height_profile().as_slice());
                assert_eq!((st.h_min(), st.h_max()), (cfg.h_min(), cfg.h_max()));
                assert_eq!(st.active_count(), active_sites(cfg, &s(5)).len());
                assert_eq!(st.is_stable(), is_stable(cfg, &s(5)));
            }
        }
    }

    #[test]
    fn canonical_start_examples() {
        let q = p(1, 1, 2);
        let c = canonical_start(q, StartKind::MaxNonneg, 0);
        assert_eq!(c.word().to_string(), "bbaa");
        assert_eq!(c.h_max(), 2);
        assert_eq!(
            canonical_start(q, StartKind::MinNonpos, 0)
                .word()
                .to_string(),
            "aabb"
        );
        for seed in 0..50 {
            assert!(canonical_start(p(3, 2, 3), StartKind::RandomNonneg, seed).is_nonnegative());
        }
        assert_eq!(
            canonical_start(p(3, 2, 3), StartKind::Random, 8),
            canonical_start(p(3, 2, 3), StartKind::Random, 8)
        );
    }

    #[test]
    fn trace_round_trip() {
        let c = canonical_start(p(3, 2, 2), StartKind::MaxNonneg, 0);
        let mut st = new_process(c.clone(), s(5), 1);
        let trace = st.run(
            StopCondition::new(StopKind::Target, 100_000),
            RunOptions {
                snapshot_every: Some(50),
                events: EventRecording::All,
            },
        );
        let header = TraceHeader {
            ta: 3,
            tb: 2,
            n: 2,
            sight: 5,
            seed: 1,
            topology: Topology::Chain,
            stop: StopKind::Target,
            cap: 100_000,
            start: c.word().clone(),
            snapshot_every: Some(50),
        };
        let mut buf = Vec::new();
        write_trace(&mut buf, &header, &trace).unwrap();
        let back = read_trace(buf.as_slice()).unwrap();
        assert_eq!(back.header, header);
        assert_eq!(back.events, trace.events);
        assert_eq!(back.snapshots, trace.snapshots);
        assert_eq!(back.end.unwrap().word, *trace.terminal.word());
        let text = String::from_utf8(buf).unwrap();
        assert!(text
            .lines()
            .any(|l| l == r#"{"step":0,"word":"bbbbaaaaaa"}"#));
    }

    #[test]
    fn trial_seeds_differ() {
        let seeds: std::collections::HashSet<_> = (0..1000).map(|t| trial_seed(42, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(trial_seed(42, 3), trial_seed(42, 3));
    }
}
