use crate::config::{Configuration, Letter, LineParams, Topology, Word};
use crate::error::{Error, Result};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of configurations of the instance, `C(tot, A)`.
pub fn count_configs(params: &LineParams) -> u128 {
    binomial(params.tot(), params.a_count())
}

/// Lexicographic rank (`a < b`) among words with the same letter counts.
pub fn rank(word: &Word) -> u64 {
    let mut a_left = word.count(Letter::A);
    let mut len = word.len();
    let mut r: u64 = 0;
    for &l in word.letters() {
        len -= 1;
        match l {
            Letter::A => a_left -= 1,
            Letter::B => {
                if a_left > 0 {
                    r += binomial(len, a_left - 1) as u64;
                }
            }
        }
    }
    r
}

/// Inverse of [`rank`] for `a_count` a's and `b_count` b's.
pub fn unrank(mut r: u64, a_count: usize, b_count: usize) -> Word {
    let mut a_left = a_count;
    let mut len = a_count + b_count;
    let mut letters = Vec::with_capacity(len);
    while len > 0 {
        len -= 1;
        let with_a = if a_left > 0 {
            binomial(len, a_left - 1) as u64
        } else {
            0
        };
        if r < with_a {
            letters.push(Letter::A);
            a_left -= 1;
        } else {
            r -= with_a;
            letters.push(Letter::B);
        }
    }
    Word::new(letters)
}

pub(crate) fn check_cap(params: &LineParams, cap: usize) -> Result<usize> {
    let states = count_configs(params);
    if states > cap as u128 {
        return Err(Error::EnumerationCap { states, cap });
    }
    Ok(states as usize)
}

/// Every configuration of the instance in lexicographic order.
pub fn enumerate_configs(
    params: LineParams,
    topology: Topology,
    cap: usize,
) -> Result<Vec<Configuration>> {
    let states = check_cap(&params, cap)?;
    (0..states as u64)
        .map(|r| {
            Configuration::new(
                unrank(r, params.a_count(), params.b_count()),
                params,
                topology,
            )
        })
        .collect()
}
