//! The extended affine Weyl group of type A in the periodic permutation
//! model: bijections of the integers that commute with the shift by `n`,
//! stored through their window `(w(1), ..., w(n))`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An element of the extended affine Weyl group of rank `n`.
///
/// The window determines the whole permutation through the periodicity
/// rule `w(i + kn) = w(i) + kn`.  Valid windows have pairwise distinct
/// residues mod `n` and a displacement sum divisible by `n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePerm {
    n: usize,
    win: Vec<i64>,
}

impl AffinePerm {
    /// Validates a window and builds the element.
    pub fn from_window(n: usize, window: Vec<i64>) -> Result<Self> {
        assert!(n >= 2, "rank must be at least 2");
        if window.len() != n {
            return Err(Error::LengthMismatch(window.len(), n));
        }
        let sum: i64 = window.iter().enumerate().map(|(i, &a)| a - (i as i64 + 1)).sum();
        if sum.rem_euclid(n as i64) != 0 {
            return Err(Error::SumNotDivisible { n, sum });
        }
        let mut seen: Vec<Option<i64>> = vec![None; n];
        for &a in &window {
            let r = (a - 1).rem_euclid(n as i64) as usize;
            if let Some(prev) = seen[r] {
                return Err(Error::ResidueClash { n, a: prev, b: a });
            }
            seen[r] = Some(a);
        }
        Ok(AffinePerm { n, win: window })
    }

    pub fn identity(n: usize) -> Self {
        AffinePerm { n, win: (1..=n as i64).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.win.iter().enumerate().all(|(i, &a)| a == i as i64 + 1)
    }

    /// The simple reflection `s_i`; the index is taken mod `n`, with
    /// `s_0 = s_n` swapping the residue classes of `0` and `1`.
    pub fn simple(n: usize, i: i64) -> Self {
        let i = i.rem_euclid(n as i64);
        let mut win: Vec<i64> = (1..=n as i64).collect();
        if i == 0 {
            win[0] = 0;
            win[n - 1] = n as i64 + 1;
        } else {
            win.swap(i as usize - 1, i as usize);
        }
        AffinePerm { n, win }
    }

    /// The rotation `i -> i + 1` generating the extension `Omega`.
    pub fn omega(n: usize) -> Self {
        AffinePerm { n, win: (2..=n as i64 + 1).collect() }
    }

    pub fn omega_pow(n: usize, k: i64) -> Self {
        AffinePerm { n, win: (1..=n as i64).map(|j| j + k).collect() }
    }

    /// The translation `tau_i` shifting the residue class of `i` by `n`.
    pub fn tau(n: usize, i: usize) -> Result<Self> {
        if i < 1 || i > n {
            return Err(Error::IndexOutOfRange { index: i as i64, n });
        }
        let mut win: Vec<i64> = (1..=n as i64).collect();
        win[i - 1] += n as i64;
        Ok(AffinePerm { n, win })
    }

    /// The dominant generator `x_i = tau_1 tau_2 ... tau_i` (so `x_n` is the
    /// central rotation power).
    pub fn x_elem(n: usize, i: usize) -> Result<Self> {
        if i < 1 || i > n {
            return Err(Error::IndexOutOfRange { index: i as i64, n });
        }
        let win = (1..=n as i64)
            .map(|j| if j <= i as i64 { j + n as i64 } else { j })
            .collect();
        Ok(AffinePerm { n, win })
    }

    /// The translation with shift `c_j * n` on the residue class of `j`.
    pub fn translation(n: usize, shifts: &[i64]) -> Result<Self> {
        if shifts.len() != n {
            return Err(Error::LengthMismatch(shifts.len(), n));
        }
        let win = (1..=n as i64).map(|j| j + shifts[j as usize - 1] * n as i64).collect();
        Ok(AffinePerm { n, win })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> &[i64] {
        &self.win
    }

    /// Evaluates the permutation at any integer.
    pub fn apply(&self, k: i64) -> i64 {
        let n = self.n as i64;
        let i = (k - 1).rem_euclid(n);
        let c = (k - 1).div_euclid(n);
        self.win[i as usize] + c * n
    }

    /// Composition: `(a * b)(k) = a(b(k))`.
    pub fn multiply(&self, other: &AffinePerm) -> Result<AffinePerm> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        let win = other.win.iter().map(|&b| self.apply(b)).collect();
        Ok(AffinePerm { n: self.n, win })
    }

    pub fn inverse(&self) -> AffinePerm {
        let n = self.n as i64;
        let mut win = vec![0i64; self.n];
        for (i, &a) in self.win.iter().enumerate() {
            let r = (a - 1).rem_euclid(n);
            let c = (a - 1).div_euclid(n);
            win[r as usize] = i as i64 + 1 - c * n;
        }
        AffinePerm { n: self.n, win }
    }

    /// Coxeter length through the window inversion formula.
    pub fn length(&self) -> usize {
        let n = self.n as i64;
        let mut l = 0i64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                l += (self.win[j] - self.win[i]).div_euclid(n).abs();
            }
        }
        l as usize
    }

    /// Whether `s_k` (index mod `n`) is a right descent: `w(k) > w(k+1)`.
    pub fn is_right_descent(&self, k: i64) -> bool {
        self.apply(k) > self.apply(k + 1)
    }

    pub fn is_left_descent(&self, k: i64) -> bool {
        // s_k w < w  iff  k+1 occurs before k in the fiber order,
        // i.e. w^{-1}(k) > w^{-1}(k+1).
        let inv = self.inverse();
        inv.apply(k) > inv.apply(k + 1)
    }

    /// Sorted right descent indices in `0..n`.
    pub fn right_descents(&self) -> Vec<usize> {
        (0..self.n as i64).filter(|&k| self.is_right_descent(k)).map(|k| k as usize).collect()
    }

    pub fn left_descents(&self) -> Vec<usize> {
        self.inverse().right_descents()
    }

    /// The rotation exponent: `w = omega^k * w'` with `w'` in the affine
    /// Weyl group proper (zero displacement sum).
    pub fn omega_exponent(&self) -> i64 {
        let disp: i64 = self.win.iter().enumerate().map(|(i, &a)| a - (i as i64 + 1)).sum();
        disp / self.n as i64
    }

    /// The `w'` of the decomposition `w = omega^k * w'`.
    pub fn wprime_part(&self) -> AffinePerm {
        let k = self.omega_exponent();
        AffinePerm { n: self.n, win: self.win.iter().map(|&a| a - k).collect() }
    }

    pub fn mul_simple_right(&self, k: i64) -> AffinePerm {
        let n = self.n as i64;
        let k = k.rem_euclid(n);
        let mut win = self.win.clone();
        if k == 0 {
            // positions 0 and 1 wrap: swap values at window slots n and 1,
            // lifted by a period.
            let a = win[self.n - 1];
            let b = win[0];
            win[self.n - 1] = b + n;
            win[0] = a - n;
        } else {
            win.swap(k as usize - 1, k as usize);
        }
        AffinePerm { n: self.n, win }
    }

    pub fn mul_simple_left(&self, k: i64) -> AffinePerm {
        let n = self.n as i64;
        let k = k.rem_euclid(n);
        let win = self
            .win
            .iter()
            .map(|&a| {
                let r = (a - 1).rem_euclid(n);
                if r == (k - 1).rem_euclid(n) {
                    a + 1
                } else if r == k.rem_euclid(n) {
                    a - 1
                } else {
                    a
                }
            })
            .collect();
        AffinePerm { n: self.n, win }
    }
}

impl fmt::Debug for AffinePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AffinePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.win.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for AffinePerm {
    type Err = Error;

    /// Parses the window format `[a1,a2,...,an]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("window must look like [a1,a2,...]: {s:?}")))?;
        let win = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{e}: {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let n = win.len();
        if n < 2 {
            return Err(Error::Parse(format!("window needs at least 2 entries: {s:?}")));
        }
        AffinePerm::from_window(n, win)
    }
}
