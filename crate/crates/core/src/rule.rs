//! The local transition rule.
//!
//! A site reads at most `s` letters on each side, starting from its own
//! position: the left word `w_i w_{i-1} ...` and the right word
//! `w_{i+1} w_{i+2} ...`. The rule never sees `t_a`, `t_b`, `n` or the index.
//!
//! `delta_r` fires when, after normalising the right word to start with `b`:
//!
//! 1. the right word has full length `s`;
//! 2. some left prefix `(a_j, b_j)` lies strictly above the line of slope
//!    `r_b / r_a` through the flipped position, `r_b a_j - r_a b_j >= r_a + r_b`,
//!    where `(r_a, r_b)` is the right prefix of minimal slope;
//! 3. on equality, `gcd(a_j - 1, b_j + 1) = 1` for the witness.
//!
//! `delta(w, w') = delta_r(w, w') || delta_r(w', w)`.

use num::integer::gcd;
use serde::{Deserialize, Serialize};

use crate::config::{Configuration, Letter, Topology};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleParams {
    sight: usize,
}

impl RuleParams {
    /// A sight below 2 freezes the process, so it is rejected.
    pub fn new(sight: usize) -> Result<Self> {
        if sight < 2 {
            return Err(Error::SightTooSmall(sight));
        }
        Ok(RuleParams { sight })
    }

    pub fn sight(&self) -> usize {
        self.sight
    }
}

/// Slope estimate `(r_a, r_b)` read from a right word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub ra: u64,
    pub rb: u64,
}

/// A local rule of sight `s`: a pure function of the two words a site sees.
pub trait LocalRule: Sync {
    fn sight(&self) -> usize;

    fn decide(&self, left: &[Letter], right: &[Letter]) -> bool;
}

/// The thickness-reducing rule built from [`delta`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThreadRule {
    params: RuleParams,
}

impl ThreadRule {
    pub fn new(params: RuleParams) -> Self {
        ThreadRule { params }
    }

    pub fn with_sight(sight: usize) -> Result<Self> {
        RuleParams::new(sight).map(Self::new)
    }

    pub fn params(&self) -> RuleParams {
        self.params
    }
}

impl LocalRule for ThreadRule {
    fn sight(&self) -> usize {
        self.params.sight
    }

    fn decide(&self, left: &[Letter], right: &[Letter]) -> bool {
        delta(left, right, &self.params)
    }
}

impl<F> LocalRule for (usize, F)
where
    F: Fn(&[Letter], &[Letter]) -> bool + Sync,
{
    fn sight(&self) -> usize {
        self.0
    }

    fn decide(&self, left: &[Letter], right: &[Letter]) -> bool {
        (self.1)(left, right)
    }
}

fn counts(letter: Letter, swap: bool) -> (u64, u64) {
    match (letter, swap) {
        (Letter::A, false) | (Letter::B, true) => (1, 0),
        _ => (0, 1),
    }
}

fn prefix_counts_with(word: &[Letter], swap: bool) -> impl Iterator<Item = (u64, u64)> + '_ {
    word.iter().scan((0u64, 0u64), move |acc, &l| {
        let (da, db) = counts(l, swap);
        acc.0 += da;
        acc.1 += db;
        Some(*acc)
    })
}

/// Running `(a_j, b_j)` counts for `j = 1 ..= len`.
pub fn prefix_counts(word: &[Letter]) -> Vec<(u64, u64)> {
    prefix_counts_with(word, false).collect()
}

/// `b1 / a1 < b2 / a2` with `b / 0 = +inf`, by cross-multiplication.
fn slope_less(a1: u64, b1: u64, a2: u64, b2: u64) -> bool {
    match (a1, a2) {
        (0, _) => false,
        (_, 0) => true,
        _ => b1 * a2 < b2 * a1,
    }
}

fn slope_estimate_with(right: &[Letter], swap: bool) -> SlopeEstimate {
    let mut best: Option<(u64, u64)> = None;
    for (a, b) in prefix_counts_with(right, swap) {
        match best {
            Some((ba, bb)) if !slope_less(a, b, ba, bb) => {}
            _ => best = Some((a, b)),
        }
    }
    let (ra, rb) = best.expect("slope estimate needs a nonempty word");
    SlopeEstimate { ra, rb }
}

/// Prefix of the right word minimising `b'_i / a'_i`; ties go to the lowest
/// index, so `b^s` yields `(0, 1)`.
pub fn slope_estimate(right: &[Letter]) -> SlopeEstimate {
    slope_estimate_with(right, false)
}

fn thickness_values(
    left: &[Letter],
    est: SlopeEstimate,
    swap: bool,
) -> impl Iterator<Item = (i64, u64, u64)> + '_ {
    let (ra, rb) = (est.ra as i64, est.rb as i64);
    prefix_counts_with(left, swap).map(move |(a, b)| (rb * a as i64 - ra * b as i64, a, b))
}

fn weak_with(left: &[Letter], est: SlopeEstimate, swap: bool) -> bool {
    let bound = (est.ra + est.rb) as i64;
    thickness_values(left, est, swap).any(|(v, _, _)| v >= bound)
}

fn strong_with(left: &[Letter], est: SlopeEstimate, swap: bool) -> bool {
    let bound = (est.ra + est.rb) as i64;
    thickness_values(left, est, swap)
        .any(|(v, a, b)| v > bound || (v == bound && gcd(a as i64 - 1, b as i64 + 1) == 1))
}

/// Some left prefix satisfies `r_b a_j - r_a b_j >= r_a + r_b`.
pub fn weak_thickness(left: &[Letter], est: SlopeEstimate) -> bool {
    weak_with(left, est, false)
}

/// Strict version of [`weak_thickness`], or equality with a coprime witness
/// `gcd(a_j - 1, b_j + 1) = 1` (`gcd(0, m) = m`).
pub fn strong_thickness(left: &[Letter], est: SlopeEstimate) -> bool {
    strong_with(left, est, false)
}

/// One-sided rule: the right word must have full sight.
pub fn delta_r(left: &[Letter], right: &[Letter], params: &RuleParams) -> bool {
    let (Some(&l0), Some(&r0)) = (left.first(), right.first()) else {
        return false;
    };
    if l0 == r0 || right.len() != params.sight {
        return false;
    }
    // read both words through g when the right word starts with `a`
    let swap = r0 == Letter::A;
    let est = slope_estimate_with(right, swap);
    strong_with(left, est, swap)
}

/// The totally symmetric rule `max(delta_r, delta_l)`.
pub fn delta(left: &[Letter], right: &[Letter], params: &RuleParams) -> bool {
    delta_r(left, right, params) || delta_r(right, left, params)
}

/// Left word `w_i w_{i-1} ...` and right word `w_{i+1} w_{i+2} ...`, each of
/// at most `sight` letters (exactly `sight` on a cycle).
pub fn local_words(config: &Configuration, i: usize, sight: usize) -> (Vec<Letter>, Vec<Letter>) {
    let letters = config.word().letters();
    let tot = letters.len();
    match config.topology() {
        Topology::Chain => {
            let left_len = sight.min(i);
            let right_len = sight.min(tot - i);
            let left = (0..left_len).map(|k| letters[i - 1 - k]).collect();
            let right = letters[i..i + right_len].to_vec();
            (left, right)
        }
        Topology::Cycle => {
            let i = i as i64;
            let left = (0..sight as i64).map(|k| config.letter(i - k)).collect();
            let right = (0..sight as i64)
                .map(|k| config.letter(i + 1 + k))
                .collect();
            (left, right)
        }
    }
}

/// Whether site `c_i` is active under an arbitrary local rule.
pub fn is_active_with<R: LocalRule + ?Sized>(
    rule: &R,
    config: &Configuration,
    i: usize,
) -> Result<bool> {
    config.check_index(i)?;
    Ok(active_unchecked(rule, config, i))
}

pub(crate) fn active_unchecked<R: LocalRule + ?Sized>(
    rule: &R,
    config: &Configuration,
    i: usize,
) -> bool {
    // equal adjacent letters never flip, whatever the rule says
    if config.flip_direction(i).is_none() {
        return false;
    }
    let (left, right) = local_words(config, i, rule.sight());
    rule.decide(&left, &right)
}

pub fn is_active(config: &Configuration, i: usize, params: &RuleParams) -> Result<bool> {
    is_active_with(&ThreadRule::new(*params), config, i)
}

/// Sorted list of active indices; empty iff the configuration is stable.
pub fn active_sites_with<R: LocalRule + ?Sized>(rule: &R, config: &Configuration) -> Vec<usize> {
    config
        .selectable()
        .filter(|&i| active_unchecked(rule, config, i))
        .collect()
}

pub fn active_sites(config: &Configuration, params: &RuleParams) -> Vec<usize> {
    active_sites_with(&ThreadRule::new(*params), config)
}

pub fn is_stable(config: &Configuration, params: &RuleParams) -> bool {
    let rule = ThreadRule::new(*params);
    !config
        .selectable()
        .any(|i| active_unchecked(&rule, config, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{LineParams, Word};

    fn w(s: &str) -> Vec<Letter> {
        Word::parse(s).unwrap().into_letters()
    }

    fn s(n: usize) -> RuleParams {
        RuleParams::new(n).unwrap()
    }

    fn est(ra: u64, rb: u64) -> SlopeEstimate {
        SlopeEstimate { ra, rb }
    }

    #[test]
    fn sight_below_two_rejected() {
        assert_eq!(RuleParams::new(1), Err(Error::SightTooSmall(1)));
        assert_eq!(RuleParams::new(0), Err(Error::SightTooSmall(0)));
    }

    #[test]
    fn prefix_count_examples() {
        assert_eq!(prefix_counts(&w("ba")), vec![(0, 1), (1, 1)]);
        assert_eq!(prefix_counts(&w("aab")), vec![(1, 0), (2, 0), (2, 1)]);
        assert_eq!(prefix_counts(&w("bbb")), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn slope_estimate_examples() {
        assert_eq!(slope_estimate(&w("baaba")), est(2, 1));
        assert_eq!(slope_estimate(&w("bbbaa")), est(2, 3));
        assert_eq!(slope_estimate(&w("bbbbb")), est(0, 1));
        // tie at equal ratio keeps the first prefix
        assert_eq!(slope_estimate(&w("baba")), est(1, 1));
    }

    #[test]
    fn thickness_examples() {
        assert!(weak_thickness(&w("aa"), est(0, 1)));
        assert!(!weak_thickness(&w("ab"), est(1, 1)));
        assert!(!weak_thickness(&w("bb"), est(1, 1)));
        assert!(!weak_thickness(&w("bb"), est(0, 3)));
        assert!(strong_thickness(&w("aa"), est(0, 1)));
        assert!(!strong_thickness(&w("ab"), est(1, 1)));
        // equality without a coprime witness: (a_j - 1, b_j + 1) = (2, 2)
        assert!(weak_thickness(&w("abaa"), est(1, 1)));
        assert!(!strong_thickness(&w("abaa"), est(1, 1)));
    }

    #[test]
    fn delta_examples() {
        assert!(delta_r(&w("aa"), &w("bb"), &s(2)));
        assert!(!delta_r(&w("ba"), &w("ab"), &s(2)));
        assert!(!delta_r(&w("a"), &w("b"), &s(2)));
        assert!(!delta_r(&w("ab"), &w("ab"), &s(2)));
        assert!(delta(&w("aa"), &w("bb"), &s(2)));
        assert!(!delta(&w("ba"), &w("ab"), &s(2)));
    }

    #[test]
    fn activity_examples() {
        let q = LineParams::new(1, 1, 2).unwrap();
        let chain = |t: &str| Configuration::parse(t, q, Topology::Chain).unwrap();
        assert!(is_active(&chain("aabb"), 2, &s(2)).unwrap());
        assert!(!is_active(&chain("abab"), 2, &s(2)).unwrap());
        assert!(!is_active(&chain("bbaa"), 1, &s(2)).unwrap());
        assert!(is_active(&chain("bbaa"), 0, &s(2)).is_err());
        assert_eq!(active_sites(&chain("bbaa"), &s(2)), vec![2]);
        assert!(is_stable(&chain("baba"), &s(2)));
    }

    #[test]
    fn local_word_extraction() {
        let q = LineParams::new(3, 2, 1).unwrap();
        let c = Configuration::parse("babaa", q, Topology::Chain).unwrap();
        let (l, r) = local_words(&c, 2, 3);
        assert_eq!((l, r), (w("ab"), w("baa")));
        let (l, r) = local_words(&c, 4, 3);
        assert_eq!((l, r), (w("aba"), w("a")));
        let c = c.with_topology(Topology::Cycle);
        let (l, r) = local_words(&c, 0, 3);
        assert_eq!((l, r), (w("aab"), w("bab")));
        let (l, r) = local_words(&c, 4, 3);
        assert_eq!((l, r), (w("aba"), w("aba")));
    }

    #[test]
    fn closure_rules_work_as_local_rules() {
        let always = (2usize, |_: &[Letter], _: &[Letter]| true);
        let q = LineParams::new(1, 1, 2).unwrap();
        let c = Configuration::parse("baba", q, Topology::Chain).unwrap();
        assert_eq!(active_sites_with(&always, &c), vec![1, 2, 3]);
    }
}
