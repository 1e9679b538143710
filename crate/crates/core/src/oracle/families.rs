use serde::Serialize;

use crate::config::{Configuration, Letter, LineParams, Topology, Word};
use crate::error::{Error, Result};
use crate::rule::{active_sites_with, LocalRule, RuleParams, ThreadRule};

fn a_pow_b(k: usize) -> Word {
    let mut letters = vec![Letter::A; k];
    letters.push(Letter::B);
    Word::new(letters)
}

/// `(ba^2ba)^{n-1} ba^3b` on the `(3, 2, n)` chain: pinned at height 3 on
/// `c_1` and -3 on `c_{tot-1}` forever under sight 5.
pub fn stuck_config(n: usize) -> Result<Configuration> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "stuck configuration needs n >= 2, got {n}"
        )));
    }
    let params = LineParams::new(3, 2, n as u32)?;
    let head = Word::parse("baaba")?;
    let tail = Word::parse("baaab")?;
    let word = Word::concat([&head.repeat(n - 1), &tail]);
    Configuration::new(word, params, Topology::Chain)
}

/// The two configurations of slope `1/(s+1)` used against sight `s`:
/// `c = w^{2k}` and `c' = w (w'')^{k-1} (w')^{k-1} w` with `w = a^{s+1}b`,
/// `w' = a^s b`, `w'' = a^{s+2} b`.
pub fn impossibility_family(s: usize, k: usize) -> Result<(Configuration, Configuration)> {
    if s < 2 {
        return Err(Error::SightTooSmall(s));
    }
    if k < 2 {
        return Err(Error::InvalidParams(format!(
            "impossibility family needs k >= 2, got {k}"
        )));
    }
    let params = LineParams::new(s as u32 + 1, 1, 2 * k as u32)?;
    let w = a_pow_b(s + 1);
    let w1 = a_pow_b(s);
    let w2 = a_pow_b(s + 2);
    let c = Configuration::new(w.repeat(2 * k), params, Topology::Chain)?;
    let prime = Word::concat([&w, &w2.repeat(k - 1), &w1.repeat(k - 1), &w]);
    let c_prime = Configuration::new(prime, params, Topology::Chain)?;
    Ok((c, c_prime))
}

/// The thread rule with the pair `(a^s, ba^{s-1})` made inactive, in both
/// orders and under the letter swap, so it stays totally symmetric. This is
/// the pair through which the thread rule destabilizes `w^{2k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchedRule {
    inner: ThreadRule,
    exempt: Vec<(Vec<Letter>, Vec<Letter>)>,
}

impl PatchedRule {
    pub fn new(sight: usize) -> Result<Self> {
        let inner = ThreadRule::new(RuleParams::new(sight)?);
        let flat = vec![Letter::A; sight];
        let mut bump = vec![Letter::B];
        bump.extend(std::iter::repeat_n(Letter::A, sight - 1));
        let swap = |w: &[Letter]| w.iter().map(|l| l.swap()).collect::<Vec<_>>();
        let exempt = vec![
            (flat.clone(), bump.clone()),
            (bump.clone(), flat.clone()),
            (swap(&flat), swap(&bump)),
            (swap(&bump), swap(&flat)),
        ];
        Ok(PatchedRule { inner, exempt })
    }
}

impl LocalRule for PatchedRule {
    fn sight(&self) -> usize {
        self.inner.sight()
    }

    fn decide(&self, left: &[Letter], right: &[Letter]) -> bool {
        let hit = self
            .exempt
            .iter()
            .any(|(l, r)| l.as_slice() == left && r.as_slice() == right);
        !hit && self.inner.decide(left, right)
    }
}

/// Whether `config` has no active site under an arbitrary local rule.
pub fn rule_stability_probe<R: LocalRule + ?Sized>(rule: &R, config: &Configuration) -> bool {
    active_sites_with(rule, config).is_empty()
}

/// Outcome of running a rule against the impossibility family. The
/// dichotomy holds when the rule either destabilizes `c` or stabilizes the
/// thick `c'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImpossibilityReport {
    pub sight: usize,
    pub k: usize,
    pub topology: Topology,
    pub c: String,
    pub c_prime: String,
    pub c_christoffel: bool,
    pub c_thickness: i64,
    pub c_stable: bool,
    pub c_active: Vec<usize>,
    pub c_prime_thickness: i64,
    pub claimed_c_prime_thickness: i64,
    pub c_prime_stable: bool,
    pub c_prime_active: Vec<usize>,
    pub dichotomy_holds: bool,
}

pub fn impossibility_report<R: LocalRule + ?Sized>(
    rule: &R,
    s: usize,
    k: usize,
    topology: Topology,
) -> Result<ImpossibilityReport> {
    let (c, c_prime) = impossibility_family(s, k)?;
    let (c, c_prime) = (c.with_topology(topology), c_prime.with_topology(topology));
    let c_active = active_sites_with(rule, &c);
    let c_prime_active = active_sites_with(rule, &c_prime);
    let c_stable = c_active.is_empty();
    let c_prime_stable = c_prime_active.is_empty();
    Ok(ImpossibilityReport {
        sight: s,
        k,
        topology,
        c: c.word().to_string(),
        c_prime: c_prime.word().to_string(),
        c_christoffel: c.is_christoffel(),
        c_thickness: c.thickness(),
        c_stable,
        c_active,
        c_prime_thickness: c_prime.thickness(),
        claimed_c_prime_thickness: (s + k - 1) as i64,
        c_prime_stable,
        c_prime_active,
        dichotomy_holds: !c_stable || c_prime_stable,
    })
}
