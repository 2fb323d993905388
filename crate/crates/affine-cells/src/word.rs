//! Words in the generators: a rotation power followed by simple letters.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::AffinePerm;

/// A word `omega^k . s_{j1} . s_{j2} . ...`; never canonical, recomputed
/// from windows on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub omega: i64,
    pub letters: Vec<usize>,
}

impl Word {
    pub fn evaluate(&self, n: usize) -> AffinePerm {
        let mut w = AffinePerm::omega_pow(n, self.omega);
        for &j in &self.letters {
            w = w.mul_simple_right(j as i64);
        }
        w
    }

    /// A word is reduced when its simple-letter count equals the length of
    /// its evaluation.
    pub fn is_reduced(&self, n: usize) -> bool {
        self.letters.len() == self.evaluate(n).length()
    }
}

/// A reduced word for `w`: strips the smallest right descent until only the
/// rotation part remains.
pub fn reduced_word(w: &AffinePerm) -> Word {
    let mut letters = Vec::with_capacity(w.length());
    let mut cur = w.clone();
    loop {
        let d = cur.right_descents();
        match d.first() {
            Some(&k) => {
                letters.push(k);
                cur = cur.mul_simple_right(k as i64);
            }
            None => break,
        }
    }
    debug_assert!(cur.wprime_part().is_identity());
    letters.reverse();
    Word { omega: cur.omega_exponent(), letters }
}

/// Deterministic pseudo-random element used across the test suites: a
/// rotation power times a bounded number of simple letters.
pub fn random_element(n: usize, max_letters: usize, seed: u64) -> AffinePerm {
    // splitmix64 stream; good enough for sampling group elements.
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    let omega = (next() % 7) as i64 - 3;
    let count = (next() as usize) % (max_letters + 1);
    let mut w = AffinePerm::omega_pow(n, omega);
    for _ in 0..count {
        w = w.mul_simple_right((next() % n as u64) as i64);
    }
    w
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{}", self.omega)?;
        for j in &self.letters {
            write!(f, ".s{j}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses the format `w^k.s3.s0.s1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split('.');
        let head = parts.next().ok_or_else(|| Error::Parse("empty word".into()))?;
        let omega = head
            .strip_prefix("w^")
            .and_then(|t| t.parse::<i64>().ok())
            .ok_or_else(|| Error::Parse(format!("word must start with w^<int>: {s:?}")))?;
        let mut letters = Vec::new();
        for p in parts {
            let j = p
                .strip_prefix('s')
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("bad letter {p:?} in {s:?}")))?;
            letters.push(j);
        }
        Ok(Word { omega, letters })
    }
}
