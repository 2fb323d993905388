//! Bruhat order on the extended group: the rotation parts must agree and
//! the affine parts compare by the subword property.  The recursion below
//! uses the standard lifting along a left descent instead of enumerating
//! subwords; the subword enumeration survives in the tests as an oracle.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::perm::AffinePerm;

#[derive(Default)]
pub struct BruhatCache {
    memo: RwLock<HashMap<(AffinePerm, AffinePerm), bool>>,
}

impl BruhatCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `y <= w` in Bruhat order.
    pub fn leq(&self, y: &AffinePerm, w: &AffinePerm) -> Result<bool> {
        if y.n() != w.n() {
            return Err(Error::RankMismatch(y.n(), w.n()));
        }
        if y.omega_exponent() != w.omega_exponent() {
            return Ok(false);
        }
        Ok(self.leq_prime(&y.wprime_part(), &w.wprime_part()))
    }

    /// Both arguments must have zero rotation part.
    fn leq_prime(&self, y: &AffinePerm, w: &AffinePerm) -> bool {
        if y == w {
            return true;
        }
        if y.length() >= w.length() {
            return false;
        }
        if let Some(&hit) = self.memo.read().unwrap().get(&(y.clone(), w.clone())) {
            return hit;
        }
        // Lifting: for s with sw < w, y <= w iff (sy < y ? sy <= sw : y <= sw).
        let s = *w.left_descents().first().expect("non-identity affine part has a descent") as i64;
        let sw = w.mul_simple_left(s);
        let sy = y.mul_simple_left(s);
        let ans = if sy.length() < y.length() {
            self.leq_prime(&sy, &sw)
        } else {
            self.leq_prime(y, &sw)
        };
        self.memo.write().unwrap().insert((y.clone(), w.clone()), ans);
        ans
    }
}

/// One-off comparison without a shared cache.
pub fn bruhat_leq(y: &AffinePerm, w: &AffinePerm) -> Result<bool> {
    BruhatCache::new().leq(y, w)
}

/// All affine-part elements of length at most `max_len`, sorted by
/// (length, window).
pub fn length_ball(n: usize, max_len: usize) -> Vec<AffinePerm> {
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![AffinePerm::identity(n)];
    seen.insert(frontier[0].clone());
    let mut out = frontier.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for k in 0..n as i64 {
                if !w.is_right_descent(k) {
                    let ws = w.mul_simple_right(k);
                    if seen.insert(ws.clone()) {
                        next.push(ws);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort_by_key(|w| (w.length(), w.window().to_vec()));
    out
}
