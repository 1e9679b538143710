//! Configurations: monotone lattice paths from `(0,0)` to `(A,B)` written as
//! words over `{a, b}`, together with the height function that measures how
//! far each site sits from the ideal line `-t_b x + t_a y = 0`.
//!
//! Letters are 1-indexed (`w_1 .. w_tot`) and sites 0-indexed
//! (`c_0 .. c_tot`), so `w_i = c_i - c_{i-1}`.

use std::fmt;
use std::str::FromStr;

use num::integer::gcd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A unit step: `a = (1,0)`, `b = (0,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    /// The swap morphism `g` on a single letter.
    pub fn swap(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn step(self) -> (i64, i64) {
        match self {
            Letter::A => (1, 0),
            Letter::B => (0, 1),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            _ => None,
        }
    }
}

/// A finite word over `{a, b}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Parses a nonempty string of `a`/`b` characters.
    pub fn parse(text: &str) -> Result<Word> {
        if text.is_empty() {
            return Err(Error::EmptyWord);
        }
        text.chars()
            .enumerate()
            .map(|(pos, c)| Letter::from_char(c).ok_or(Error::InvalidLetter(c, pos + 1)))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    /// Letter at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> Letter {
        self.0[pos - 1]
    }

    /// Applies `g` letterwise.
    pub fn swapped(&self) -> Word {
        Word(self.0.iter().map(|l| l.swap()).collect())
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        Word(
            parts
                .into_iter()
                .flat_map(|w| w.0.iter().copied())
                .collect(),
        )
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Word::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses a word (free-function form of [`Word::parse`]).
pub fn parse_word(text: &str) -> Result<Word> {
    Word::parse(text)
}

/// The letterwise swap `g(a) = b`, `g(b) = a`.
pub fn swap_morphism(word: &Word) -> Word {
    word.swapped()
}

/// The global instance: slope `t_b / t_a` repeated `n` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineParams {
    ta: u32,
    tb: u32,
    n: u32,
}

impl LineParams {
    pub fn new(ta: u32, tb: u32, n: u32) -> Result<Self> {
        if ta == 0 || tb == 0 || n == 0 {
            return Err(Error::InvalidParams(format!(
                "t_a, t_b and n must be positive (got {ta}, {tb}, {n})"
            )));
        }
        if gcd(ta, tb) != 1 {
            return Err(Error::InvalidParams(format!(
                "gcd(t_a, t_b) must be 1 (got gcd({ta}, {tb}) = {})",
                gcd(ta, tb)
            )));
        }
        Ok(LineParams { ta, tb, n })
    }

    pub fn ta(&self) -> i64 {
        self.ta as i64
    }

    pub fn tb(&self) -> i64 {
        self.tb as i64
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Number of `a` letters, `A = n t_a`.
    pub fn a_count(&self) -> usize {
        self.n as usize * self.ta as usize
    }

    /// Number of `b` letters, `B = n t_b`.
    pub fn b_count(&self) -> usize {
        self.n as usize * self.tb as usize
    }

    /// Period `t_a + t_b`.
    pub fn per(&self) -> usize {
        (self.ta + self.tb) as usize
    }

    /// Word length `A + B = n per`.
    pub fn tot(&self) -> usize {
        self.n() * self.per()
    }

    /// `h(x, y) = -t_b x + t_a y`.
    pub fn height(&self, site: Site) -> i64 {
        -self.tb() * site.x + self.ta() * site.y
    }

    /// Height increment of a single letter.
    pub fn letter_height(&self, letter: Letter) -> i64 {
        match letter {
            Letter::A => -self.tb(),
            Letter::B => self.ta(),
        }
    }
}

impl fmt::Display for LineParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t_a={}, t_b={}, n={})", self.ta, self.tb, self.n)
    }
}

/// Height of a site, see [`LineParams::height`].
pub fn height(site: Site, params: &LineParams) -> i64 {
    params.height(site)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site {
    pub x: i64,
    pub y: i64,
}

impl Site {
    pub const ORIGIN: Site = Site { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        Site { x, y }
    }

    pub fn step(self, letter: Letter) -> Site {
        let (dx, dy) = letter.step();
        Site::new(self.x + dx, self.y + dy)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// Endpoints `c_0` and `c_tot` are fixed.
    #[default]
    Chain,
    /// `c_0` is identified with `c_tot`; every site may move.
    Cycle,
}

impl Topology {
    pub fn name(self) -> &'static str {
        match self {
            Topology::Chain => "chain",
            Topology::Cycle => "cycle",
        }
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(Topology::Chain),
            "cycle" => Ok(Topology::Cycle),
            other => Err(Error::InvalidArgument(format!(
                "unknown topology {other:?} (expected chain or cycle)"
            ))),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A full word of an instance plus its topology.
///
/// The letter counts always match `(A, B)`, so the induced path ends at
/// `(A, B)`. In cycle topology the word is rooted at letter 1 and equality is
/// literal, not up to rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    word: Word,
    params: LineParams,
    topology: Topology,
}

impl Configuration {
    pub fn new(word: Word, params: LineParams, topology: Topology) -> Result<Self> {
        let (got_a, got_b) = (word.count(Letter::A), word.count(Letter::B));
        if got_a != params.a_count() || got_b != params.b_count() {
            return Err(Error::LetterCounts {
                got_a,
                got_b,
                want_a: params.a_count(),
                want_b: params.b_count(),
            });
        }
        Ok(Configuration {
            word,
            params,
            topology,
        })
    }

    pub fn chain(word: Word, params: LineParams) -> Result<Self> {
        Self::new(word, params, Topology::Chain)
    }

    pub fn parse(text: &str, params: LineParams, topology: Topology) -> Result<Self> {
        Self::new(Word::parse(text)?, params, topology)
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn params(&self) -> &LineParams {
        &self.params
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn tot(&self) -> usize {
        self.word.len()
    }

    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.topology = topology;
        self
    }

    /// Letter `w_pos` with 1-based `pos`; in cycle topology any integer
    /// position is reduced mod `tot` (so `w_0 = w_tot`).
    pub fn letter(&self, pos: i64) -> Letter {
        let tot = self.tot() as i64;
        let idx = (pos - 1).rem_euclid(tot) as usize;
        self.word.letters()[idx]
    }

    /// The sites `c_0 .. c_tot`.
    pub fn sites(&self) -> Vec<Site> {
        let mut sites = Vec::with_capacity(self.tot() + 1);
        let mut cur = Site::ORIGIN;
        sites.push(cur);
        for &l in self.word.letters() {
            cur = cur.step(l);
            sites.push(cur);
        }
        sites
    }

    /// `h(c_0) .. h(c_tot)`.
    pub fn height_profile(&self) -> Vec<i64> {
        height_profile_of(self.word.letters(), &self.params)
    }

    pub fn h_min(&self) -> i64 {
        self.height_profile().into_iter().min().unwrap_or(0)
    }

    pub fn h_max(&self) -> i64 {
        self.height_profile().into_iter().max().unwrap_or(0)
    }

    /// `h_max - h_min`; never below `per - 1`.
    pub fn thickness(&self) -> i64 {
        let (lo, hi) = min_max(&self.height_profile());
        hi - lo
    }

    pub fn is_christoffel(&self) -> bool {
        self.thickness() == self.params.per() as i64 - 1
    }

    /// Every site is weakly above the ideal line.
    pub fn is_nonnegative(&self) -> bool {
        self.height_profile().iter().all(|&h| h >= 0)
    }

    /// Selectable site indices: `1..tot-1` on a chain, `0..tot-1` on a cycle.
    pub fn selectable(&self) -> std::ops::Range<usize> {
        match self.topology {
            Topology::Chain => 1..self.tot(),
            Topology::Cycle => 0..self.tot(),
        }
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if self.selectable().contains(&i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                tot: self.tot(),
                topology: self.topology.name(),
            })
        }
    }

    /// Zero-based positions of the two letters `w_i`, `w_{i+1}` around site `i`.
    pub(crate) fn flip_positions(&self, i: usize) -> (usize, usize) {
        let tot = self.tot();
        ((i + tot - 1) % tot, i % tot)
    }

    /// Swaps `w_i` and `w_{i+1}` (indices mod `tot` on a cycle), moving only
    /// site `c_i` by `±(b - a)`.
    pub fn flip(&self, i: usize) -> Result<Configuration> {
        self.check_index(i)?;
        let (p, q) = self.flip_positions(i);
        let letters = self.word.letters();
        if letters[p] == letters[q] {
            return Err(Error::EqualLetters(i));
        }
        let mut next = self.clone();
        next.word.0.swap(p, q);
        Ok(next)
    }

    /// `Some(true)` if a flip at `i` would be increasing (`ab -> ba`),
    /// `Some(false)` if decreasing, `None` if the letters agree.
    pub fn flip_direction(&self, i: usize) -> Option<bool> {
        let (p, q) = self.flip_positions(i);
        let letters = self.word.letters();
        match (letters[p], letters[q]) {
            (Letter::A, Letter::B) => Some(true),
            (Letter::B, Letter::A) => Some(false),
            _ => None,
        }
    }

    /// Swaps two letters in place; callers keep the letter counts intact.
    pub(crate) fn swap_positions(&mut self, p: usize, q: usize) {
        self.word.0.swap(p, q);
    }

    pub fn to_json(&self) -> ConfigurationJson {
        ConfigurationJson {
            word: self.word.clone(),
            ta: self.params.ta,
            tb: self.params.tb,
            n: self.params.n,
            topology: self.topology,
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)
    }
}

/// Serialized form `{"word": "...", "ta": .., "tb": .., "n": .., "topology": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationJson {
    pub word: Word,
    pub ta: u32,
    pub tb: u32,
    pub n: u32,
    pub topology: Topology,
}

impl TryFrom<ConfigurationJson> for Configuration {
    type Error = Error;

    fn try_from(j: ConfigurationJson) -> Result<Self> {
        let params = LineParams::new(j.ta, j.tb, j.n)?;
        Configuration::new(j.word, params, j.topology)
    }
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ConfigurationJson::deserialize(d)?;
        Configuration::try_from(j).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn height_profile_of(letters: &[Letter], params: &LineParams) -> Vec<i64> {
    let mut out = Vec::with_capacity(letters.len() + 1);
    let mut h = 0;
    out.push(h);
    for &l in letters {
        h += params.letter_height(l);
        out.push(h);
    }
    out
}

pub(crate) fn min_max(values: &[i64]) -> (i64, i64) {
    values
        .iter()
        .fold((i64::MAX, i64::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// The Christoffel configuration whose heights fill the band
/// `[low, low + per - 1]`. The band must contain 0, i.e. `-per < low <= 0`.
///
/// Built greedily: from height `h` exactly one of `h - t_b` (letter a) and
/// `h + t_a` (letter b) stays inside the band.
pub fn christoffel_in_band(params: LineParams, low: i64) -> Result<Configuration> {
    let per = params.per() as i64;
    if low > 0 || low <= -per {
        return Err(Error::InvalidArgument(format!(
            "band [{low}, {}] does not contain 0",
            low + per - 1
        )));
    }
    let high = low + per - 1;
    let mut letters = Vec::with_capacity(params.tot());
    let mut h = 0i64;
    for _ in 0..params.tot() {
        let down = h - params.tb();
        let up = h + params.ta();
        let down_ok = (low..=high).contains(&down);
        let up_ok = (low..=high).contains(&up);
        assert!(
            down_ok != up_ok,
            "greedy Christoffel step must have exactly one admissible letter"
        );
        if down_ok {
            letters.push(Letter::A);
            h = down;
        } else {
            letters.push(Letter::B);
            h = up;
        }
    }
    debug_assert_eq!(h, 0);
    Configuration::chain(Word(letters), params)
}

/// The unique Christoffel configuration with `h_min = 0` and `h_max = per - 1`.
pub fn target_christoffel(params: LineParams) -> Configuration {
    christoffel_in_band(params, 0).expect("band [0, per-1] contains 0")
}

/// The mirrored Christoffel configuration with heights in `[-per + 1, 0]`.
pub fn lower_christoffel(params: LineParams) -> Configuration {
    christoffel_in_band(params, 1 - params.per() as i64).expect("band contains 0")
}

/// All `per` Christoffel configurations through `(0,0)`, one per band.
pub fn christoffel_configs(params: LineParams) -> Vec<Configuration> {
    let per = params.per() as i64;
    (1 - per..=0)
        .map(|low| christoffel_in_band(params, low).expect("band contains 0"))
        .collect()
}
