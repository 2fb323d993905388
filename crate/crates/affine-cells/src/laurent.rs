//! Exact sparse Laurent polynomials over the integers in the Hecke
//! parameter `q`, plus ordinary polynomials in `v = q^2` used for the
//! Kazhdan-Lusztig coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Integer Laurent polynomial in `q`; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    c: BTreeMap<i64, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(0, 1)
    }

    pub fn q() -> Self {
        Laurent::monomial(1, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut c = BTreeMap::new();
        if coeff != 0 {
            c.insert(exp, coeff);
        }
        Laurent { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.c.get(&exp).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<i64> {
        self.c.keys().next_back().copied()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.c.keys().next().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.c.iter().map(|(&e, &a)| (e, a))
    }

    /// The bar involution `q -> q^{-1}`.
    pub fn bar(&self) -> Laurent {
        Laurent { c: self.c.iter().map(|(&e, &a)| (-e, a)).collect() }
    }

    pub fn shift(&self, by: i64) -> Laurent {
        Laurent { c: self.c.iter().map(|(&e, &a)| (e + by, a)).collect() }
    }

    pub fn scale(&self, by: i64) -> Laurent {
        if by == 0 {
            return Laurent::zero();
        }
        Laurent { c: self.c.iter().map(|(&e, &a)| (e, a * by)).collect() }
    }

    fn insert(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.c.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.c.remove(&exp);
        }
    }
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        for (&e, &a) in &rhs.c {
            self.insert(e, a);
        }
    }
}

impl SubAssign<&Laurent> for Laurent {
    fn sub_assign(&mut self, rhs: &Laurent) {
        for (&e, &a) in &rhs.c {
            self.insert(e, -a);
        }
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (&e1, &a1) in &self.c {
            for (&e2, &a2) in &rhs.c {
                out.insert(e1 + e2, a1 * a2);
            }
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.c.iter().map(|(&e, &a)| (e, a)), "q")
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Laurent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let terms = parse_terms(s, "q")?;
        let mut out = Laurent::zero();
        for (e, a) in terms {
            out.insert(e, a);
        }
        Ok(out)
    }
}

/// A Kazhdan-Lusztig polynomial: integer coefficients of powers of
/// `v = q^2`, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct KlPoly {
    c: Vec<i64>,
}

impl KlPoly {
    pub fn zero() -> Self {
        KlPoly { c: vec![] }
    }

    pub fn one() -> Self {
        KlPoly { c: vec![1] }
    }

    pub fn from_coeffs(mut c: Vec<i64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        KlPoly { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.c.get(k).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn constant_term(&self) -> i64 {
        self.coeff(0)
    }

    pub fn add(&self, rhs: &KlPoly) -> KlPoly {
        let mut c = vec![0i64; self.c.len().max(rhs.c.len())];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = self.coeff(k) + rhs.coeff(k);
        }
        KlPoly::from_coeffs(c)
    }

    /// `self - m * v^shift * rhs`.
    pub fn sub_scaled_shifted(&self, rhs: &KlPoly, m: i64, shift: usize) -> KlPoly {
        let len = self.c.len().max(rhs.c.len() + shift);
        let mut c = vec![0i64; len];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = self.coeff(k);
        }
        for (k, &a) in rhs.c.iter().enumerate() {
            c[k + shift] -= m * a;
        }
        KlPoly::from_coeffs(c)
    }

    pub fn shifted(&self, shift: usize) -> KlPoly {
        if self.is_zero() {
            return KlPoly::zero();
        }
        let mut c = vec![0i64; self.c.len() + shift];
        for (k, &a) in self.c.iter().enumerate() {
            c[k + shift] = a;
        }
        KlPoly { c }
    }

    /// Evaluates at `v = q^2` into a Laurent polynomial shifted by `q^shift`.
    pub fn to_laurent_q2(&self, shift: i64) -> Laurent {
        let mut out = Laurent::zero();
        for (k, &a) in self.c.iter().enumerate() {
            out.insert(2 * k as i64 + shift, a);
        }
        out
    }
}

impl fmt::Display for KlPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.c.iter().enumerate().filter(|(_, &a)| a != 0).map(|(e, &a)| (e as i64, a)), "v")
    }
}

impl fmt::Debug for KlPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for KlPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let terms = parse_terms(s, "v")?;
        let mut c: Vec<i64> = vec![];
        for (e, a) in terms {
            if e < 0 {
                return Err(Error::Parse(format!("negative exponent in polynomial: {s:?}")));
            }
            let e = e as usize;
            if c.len() <= e {
                c.resize(e + 1, 0);
            }
            c[e] += a;
        }
        Ok(KlPoly::from_coeffs(c))
    }
}

fn fmt_terms(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, i64)>,
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (e, a) in terms {
        if first {
            if a < 0 {
                write!(f, "-")?;
            }
        } else if a < 0 {
            write!(f, "-")?;
        } else {
            write!(f, "+")?;
        }
        first = false;
        let abs = a.abs();
        if e == 0 {
            write!(f, "{abs}")?;
        } else {
            if abs != 1 {
                write!(f, "{abs}")?;
            }
            if e == 1 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{var}^{e}")?;
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn parse_terms(s: &str, var: &str) -> Result<Vec<(i64, i64)>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    if compact == "0" {
        return Ok(vec![]);
    }
    // Split keeping signs attached to each term.
    let mut pieces: Vec<String> = vec![];
    let mut cur = String::new();
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            pieces.push(std::mem::take(&mut cur));
            if ch == '-' {
                cur.push('-');
            }
        } else {
            cur.push(ch);
        }
    }
    pieces.push(cur);
    let mut out = vec![];
    for p in pieces {
        if p.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        let (coeff_str, exp) = match p.find(var) {
            None => (p.as_str(), 0i64),
            Some(pos) => {
                let coeff = &p[..pos];
                let rest = &p[pos + var.len()..];
                let exp = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|t| t.parse::<i64>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent in {p:?}")))?
                };
                (coeff, exp)
            }
        };
        let coeff = match coeff_str {
            "" => 1,
            "-" => -1,
            t => t.parse::<i64>().map_err(|e| Error::Parse(format!("{e}: {p:?}")))?,
        };
        out.push((exp, coeff));
    }
    Ok(out)
}
