//! Kazhdan-Lusztig polynomials for the extended group, memoized in a
//! store that also persists to disk.
//!
//! Polynomials are computed by the classical descent recursion: with a
//! left descent `s` of `w` and `v = sw`,
//!
//! `P_{y,w} = P_{sy,v} + v_var * P_{y,v} - sum mu(z,v) v_var^{(l(w)-l(z))/2} P_{y,z}`
//!
//! over `z < v` with `sz < z`, after first replacing `y` by `sy` whenever
//! `sy > y`.  The result does not depend on the descent chosen; the store
//! pivots on the smallest index, and a test compares pivot policies.

use std::collections::HashMap;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;
use std::sync::{Arc, RwLock};

use crate::bruhat::{length_ball, BruhatCache};
use crate::error::{Error, Result};
use crate::laurent::KlPoly;
use crate::perm::AffinePerm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotPolicy {
    SmallestDescent,
    LargestDescent,
}

pub struct KlStore {
    n: usize,
    max_length: usize,
    policy: PivotPolicy,
    polys: RwLock<HashMap<(AffinePerm, AffinePerm), KlPoly>>,
    intervals: RwLock<HashMap<AffinePerm, Arc<Vec<AffinePerm>>>>,
    ball: RwLock<(usize, Arc<Vec<AffinePerm>>)>,
    pub bruhat: BruhatCache,
}

impl KlStore {
    pub fn new(n: usize) -> Self {
        Self::with_limits(n, 64, PivotPolicy::SmallestDescent)
    }

    pub fn with_limits(n: usize, max_length: usize, policy: PivotPolicy) -> Self {
        KlStore {
            n,
            max_length,
            policy,
            polys: RwLock::new(HashMap::new()),
            intervals: RwLock::new(HashMap::new()),
            ball: RwLock::new((0, Arc::new(vec![AffinePerm::identity(n)]))),
            bruhat: BruhatCache::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn set_max_length(&mut self, max_length: usize) {
        self.max_length = max_length;
    }

    pub fn len(&self) -> usize {
        self.polys.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Affine-part ball of length at most `l`, grown and cached.
    pub fn ball(&self, l: usize) -> Arc<Vec<AffinePerm>> {
        {
            let b = self.ball.read().unwrap();
            if b.0 >= l {
                return b.1.clone();
            }
        }
        let fresh = Arc::new(length_ball(self.n, l));
        let mut b = self.ball.write().unwrap();
        if b.0 < l {
            *b = (l, fresh);
        }
        b.1.clone()
    }

    /// The lower Bruhat interval of an affine-part element, cached.
    pub fn interval(&self, w: &AffinePerm) -> Result<Arc<Vec<AffinePerm>>> {
        debug_assert_eq!(w.omega_exponent(), 0);
        if let Some(hit) = self.intervals.read().unwrap().get(w) {
            return Ok(hit.clone());
        }
        let ball = self.ball(w.length());
        let mut out = Vec::new();
        for y in ball.iter() {
            if y.length() <= w.length() && self.bruhat.leq(y, w)? {
                out.push(y.clone());
            }
        }
        let out = Arc::new(out);
        self.intervals.write().unwrap().insert(w.clone(), out.clone());
        Ok(out)
    }

    /// `P_{y,w}`; zero unless `y <= w` (which forces equal rotation parts).
    pub fn kl(&self, y: &AffinePerm, w: &AffinePerm) -> Result<KlPoly> {
        if y.n() != self.n || w.n() != self.n {
            return Err(Error::RankMismatch(y.n().max(w.n()), self.n));
        }
        if y.omega_exponent() != w.omega_exponent() {
            return Ok(KlPoly::zero());
        }
        self.kl_prime(&y.wprime_part(), &w.wprime_part())
    }

    /// The leading coefficient `mu(y,w)` of `P_{y,w}` at degree
    /// `(l(w)-l(y)-1)/2`; zero when the length gap is even.
    pub fn mu(&self, y: &AffinePerm, w: &AffinePerm) -> Result<i64> {
        if y == w {
            return Ok(0);
        }
        let p = self.kl(y, w)?;
        if p.is_zero() {
            return Ok(0);
        }
        let gap = w.length() - y.length();
        if gap % 2 == 0 {
            return Ok(0);
        }
        Ok(p.coeff((gap - 1) / 2))
    }

    fn kl_prime(&self, y: &AffinePerm, w: &AffinePerm) -> Result<KlPoly> {
        if y == w {
            return Ok(KlPoly::one());
        }
        if y.length() >= w.length() || !self.bruhat.leq(y, w)? {
            return Ok(KlPoly::zero());
        }
        if let Some(hit) = self.polys.read().unwrap().get(&(y.clone(), w.clone())) {
            return Ok(hit.clone());
        }
        if w.length() > self.max_length {
            return Err(Error::LimitExceeded { got: w.length(), limit: self.max_length });
        }

        let descents = w.left_descents();
        let s = match self.policy {
            PivotPolicy::SmallestDescent => descents[0],
            PivotPolicy::LargestDescent => *descents.last().unwrap(),
        } as i64;
        let sy = y.mul_simple_left(s);
        if sy.length() > y.length() {
            // P_{y,w} = P_{sy,w} when sw < w.
            let p = self.kl_prime(&sy, w)?;
            self.polys.write().unwrap().insert((y.clone(), w.clone()), p.clone());
            return Ok(p);
        }

        let v = w.mul_simple_left(s);
        let mut p = self.kl_prime(&sy, &v)?.add(&self.kl_prime(y, &v)?.shifted(1));
        for z in self.interval(&v)?.iter() {
            if z == &v || z.length() >= v.length() {
                continue;
            }
            if z.mul_simple_left(s).length() > z.length() {
                continue;
            }
            if (v.length() - z.length()) % 2 == 0 {
                continue;
            }
            if !self.bruhat.leq(y, z)? {
                continue;
            }
            let m = self.mu(z, &v)?;
            if m == 0 {
                continue;
            }
            let shift = (w.length() - z.length()) / 2;
            p = p.sub_scaled_shifted(&self.kl_prime(y, z)?, m, shift);
        }

        debug_assert!(
            2 * p.degree().unwrap_or(0) <= w.length() - y.length() - 1,
            "degree bound failed for P_{{{y},{w}}} = {p}"
        );
        debug_assert_eq!(p.constant_term(), 1);
        self.polys.write().unwrap().insert((y.clone(), w.clone()), p.clone());
        Ok(p)
    }

    /// Writes every memoized polynomial as newline-delimited records
    /// `KL n=<n> y=<window> w=<window> P=<c0,c1,...>`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut entries: Vec<((AffinePerm, AffinePerm), KlPoly)> = self
            .polys
            .read()
            .unwrap()
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| (k.clone(), p.clone()))
            .collect();
        entries.sort_by_key(|((y, w), _)| {
            (w.length(), w.window().to_vec(), y.length(), y.window().to_vec())
        });
        let mut out = BufWriter::new(std::fs::File::create(path)?);
        for ((y, w), p) in entries {
            let coeffs: Vec<String> = if p.is_zero() {
                vec!["0".into()]
            } else {
                (0..=p.degree().unwrap()).map(|k| p.coeff(k).to_string()).collect()
            };
            writeln!(out, "KL n={} y={} w={} P={}", self.n, y, w, coeffs.join(","))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Loads records saved by [`KlStore::save`], validating the degree
    /// bound and the unit constant term of every entry.
    pub fn load(&self, path: &Path) -> Result<usize> {
        let file = std::fs::File::open(path)?;
        let mut added = 0;
        for line in std::io::BufReader::new(file).lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let tag = fields.next();
            if tag != Some("KL") {
                return Err(Error::Parse(format!("bad cache line: {line:?}")));
            }
            let mut n = None;
            let mut y = None;
            let mut w = None;
            let mut p = None;
            for f in fields {
                if let Some(v) = f.strip_prefix("n=") {
                    n = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?);
                } else if let Some(v) = f.strip_prefix("y=") {
                    y = Some(v.parse::<AffinePerm>()?);
                } else if let Some(v) = f.strip_prefix("w=") {
                    w = Some(v.parse::<AffinePerm>()?);
                } else if let Some(v) = f.strip_prefix("P=") {
                    let coeffs = v
                        .split(',')
                        .map(|c| c.parse::<i64>().map_err(|e| Error::Parse(e.to_string())))
                        .collect::<Result<Vec<_>>>()?;
                    p = Some(KlPoly::from_coeffs(coeffs));
                }
            }
            let (n, y, w, p) = match (n, y, w, p) {
                (Some(n), Some(y), Some(w), Some(p)) => (n, y, w, p),
                _ => return Err(Error::Parse(format!("incomplete cache line: {line:?}"))),
            };
            if n != self.n {
                return Err(Error::Parse(format!("cache rank {n} does not match store rank {}", self.n)));
            }
            if y.omega_exponent() != 0 || w.omega_exponent() != 0 {
                return Err(Error::Parse(format!("cache entries must have zero rotation part: {line:?}")));
            }
            if y != w {
                let (ly, lw) = (y.length(), w.length());
                if ly >= lw || 2 * p.degree().unwrap_or(0) > lw - ly - 1 {
                    return Err(Error::Parse(format!("degree bound violated in cache line: {line:?}")));
                }
            }
            if p.constant_term() != 1 {
                return Err(Error::Parse(format!("constant term must be 1: {line:?}")));
            }
            self.polys.write().unwrap().insert((y, w), p);
            added += 1;
        }
        Ok(added)
    }
}
