//! The rational representation ring of a product of general linear
//! groups: Pieri rules, full Littlewood-Richardson products on dominant
//! integer vectors (negative entries handled by determinant twists), and
//! the special/projective weight-lattice variants.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::canonical::DominantWeight;
use crate::cells::{Blocks, Partition};
use crate::error::{Error, Result};

/// The reductive group attached to a partition: one general linear
/// factor of size `n_i` per class, with antichain depth `r_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupShape {
    lambda: Partition,
    blocks: Blocks,
}

impl GroupShape {
    pub fn new(lambda: Partition) -> Self {
        let blocks = lambda.blocks();
        GroupShape { lambda, blocks }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn blocks(&self) -> &Blocks {
        &self.blocks
    }

    pub fn p(&self) -> usize {
        self.blocks.p()
    }

    /// Pairs `(n_i, r_i)` per class.
    pub fn classes(&self) -> Vec<(usize, usize)> {
        self.blocks.class_sizes.iter().copied().zip(self.blocks.r_idx.iter().copied()).collect()
    }
}

/// A formal sum of irreducibles of one general linear factor, keyed by
/// highest weight.
pub type GlElement = BTreeMap<Vec<i64>, i64>;

/// A formal sum of irreducibles of the full product group.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RepRingElement {
    terms: BTreeMap<DominantWeight, i64>,
}

impl RepRingElement {
    pub fn terms(&self) -> &BTreeMap<DominantWeight, i64> {
        &self.terms
    }

    pub fn multiplicity(&self, w: &DominantWeight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn from_terms(terms: BTreeMap<DominantWeight, i64>) -> Self {
        RepRingElement { terms }
    }
}

impl fmt::Display for RepRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, m) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *m != 1 {
                write!(f, "{m}*")?;
            }
            write!(f, "V{w}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for RepRingElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            weight: &'a DominantWeight,
            multiplicity: i64,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (w, &m) in &self.terms {
            seq.serialize_element(&Term { weight: w, multiplicity: m })?;
        }
        seq.end()
    }
}

fn check_dominant(x: &[i64]) -> Result<()> {
    if x.windows(2).any(|p| p[0] < p[1]) {
        return Err(Error::NotDominant(1));
    }
    Ok(())
}

/// Tensor with the `i`-th exterior power of the vector representation:
/// adds one to every entry of an `i`-subset of positions, keeping the
/// dominant results.
pub fn pieri_wedge(i: usize, x: &[i64]) -> Result<GlElement> {
    let m = x.len();
    if i < 1 || i > m {
        return Err(Error::IndexOutOfRange { index: i as i64, n: m });
    }
    check_dominant(x)?;
    let mut out = GlElement::new();
    let mut subset: Vec<usize> = (0..i).collect();
    loop {
        let mut y = x.to_vec();
        for &k in &subset {
            y[k] += 1;
        }
        if y.windows(2).all(|p| p[0] >= p[1]) {
            *out.entry(y).or_insert(0) += 1;
        }
        // next i-subset of {0..m-1}
        let mut j = i;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            if subset[j] < m - (i - j) {
                subset[j] += 1;
                for t in j + 1..i {
                    subset[t] = subset[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Tensor with the `a`-th symmetric power of the vector representation:
/// sums over compositions of `a` whose every suffix keeps the weight
/// dominant.
pub fn pieri_sym(a: i64, x: &[i64]) -> Result<GlElement> {
    if a < 0 {
        return Err(Error::NegativeDegree(a));
    }
    check_dominant(x)?;
    let m = x.len();
    let mut out = GlElement::new();
    let mut comp = vec![0i64; m];
    fn rec(out: &mut GlElement, x: &[i64], comp: &mut Vec<i64>, idx: usize, left: i64) {
        let m = x.len();
        if idx == m {
            if left != 0 {
                return;
            }
            // suffix condition: x + sum_{k >= i} comp_k e_k dominant for all i
            let mut y = x.to_vec();
            for i in (0..m).rev() {
                y[i] += comp[i];
                if y.windows(2).any(|p| p[0] < p[1]) {
                    return;
                }
            }
            *out.entry(y).or_insert(0) += 1;
            return;
        }
        for c in 0..=left {
            comp[idx] = c;
            rec(out, x, comp, idx + 1, left - c);
        }
        comp[idx] = 0;
    }
    rec(&mut out, x, &mut comp, 0, a);
    Ok(out)
}

/// Full product of two irreducibles of one general linear factor.
///
/// Entries may be negative: the common floor is split off as a power of
/// the determinant, the partition parts multiply by Littlewood-Richardson
/// tableau enumeration truncated to at most `m` rows, and the twist is
/// added back.
pub fn lr_product(x: &[i64], y: &[i64]) -> Result<GlElement> {
    let m = x.len();
    if y.len() != m {
        return Err(Error::LengthMismatch(m, y.len()));
    }
    check_dominant(x)?;
    check_dominant(y)?;
    let twist = x[m - 1] + y[m - 1];
    let alpha: Vec<usize> = x.iter().map(|&v| (v - x[m - 1]) as usize).collect();
    let beta: Vec<usize> = y.iter().map(|&v| (v - y[m - 1]) as usize).collect();
    let mut out = GlElement::new();
    for (nu, mult) in lr_partitions(&alpha, &beta, m) {
        let mut term: Vec<i64> = nu.iter().map(|&c| c as i64 + twist).collect();
        term.resize(m, twist);
        *out.entry(term).or_insert(0) += mult;
    }
    Ok(out)
}

/// Littlewood-Richardson multiplication of partition shapes, truncated
/// to `max_rows` rows: enumerates chains of horizontal strips and keeps
/// the fillings whose reverse reading word is a lattice word.
pub fn lr_partitions(alpha: &[usize], beta: &[usize], max_rows: usize) -> BTreeMap<Vec<usize>, i64> {
    let mut alpha: Vec<usize> = alpha.to_vec();
    while alpha.last() == Some(&0) {
        alpha.pop();
    }
    let mut beta: Vec<usize> = beta.to_vec();
    while beta.last() == Some(&0) {
        beta.pop();
    }
    let mut out = BTreeMap::new();
    let start = alpha.clone();
    let mut chain = vec![start.clone()];
    place_strips(&start, &beta, 0, max_rows, &mut chain, &mut out);
    out
}

fn place_strips(
    shape: &[usize],
    beta: &[usize],
    v: usize,
    max_rows: usize,
    chain: &mut Vec<Vec<usize>>,
    out: &mut BTreeMap<Vec<usize>, i64>,
) {
    if v == beta.len() {
        if lattice_word_ok(chain) {
            let mut nu = shape.to_vec();
            while nu.last() == Some(&0) {
                nu.pop();
            }
            *out.entry(nu).or_insert(0) += 1;
        }
        return;
    }
    // All horizontal strips of size beta[v] on `shape`, bounded rows.
    let rows = (shape.len() + 1).min(max_rows);
    let mut adds = vec![0usize; rows];
    fn rec(
        shape: &[usize],
        adds: &mut Vec<usize>,
        row: usize,
        left: usize,
        beta: &[usize],
        v: usize,
        max_rows: usize,
        chain: &mut Vec<Vec<usize>>,
        out: &mut BTreeMap<Vec<usize>, i64>,
    ) {
        if row == adds.len() {
            if left != 0 {
                return;
            }
            let mut next: Vec<usize> = (0..adds.len())
                .map(|r| shape.get(r).copied().unwrap_or(0) + adds[r])
                .collect();
            while next.last() == Some(&0) {
                next.pop();
            }
            chain.push(next.clone());
            place_strips(&next, beta, v + 1, max_rows, chain, out);
            chain.pop();
            return;
        }
        let cur = shape.get(row).copied().unwrap_or(0);
        // Horizontal strip: new row length at most the previous row's old
        // length (no two added cells share a column), unbounded on top.
        let cap = if row == 0 { cur + left } else { shape.get(row - 1).copied().unwrap_or(0) };
        let max_add = cap.saturating_sub(cur).min(left);
        for add in (0..=max_add).rev() {
            adds[row] = add;
            rec(shape, adds, row + 1, left - add, beta, v, max_rows, chain, out);
        }
        adds[row] = 0;
    }
    rec(shape, &mut adds, 0, beta[v], beta, v, max_rows, chain, out);
}

/// Checks the lattice condition on the reverse reading word of the skew
/// filling encoded by a chain of shapes.
fn lattice_word_ok(chain: &[Vec<usize>]) -> bool {
    let values = chain.len() - 1;
    if values == 0 {
        return true;
    }
    let rows = chain.last().map(|s| s.len()).unwrap_or(0);
    let mut counts = vec![0i64; values + 1];
    for row in 0..rows {
        // within a row read right to left: higher columns first; the cells
        // of value v in this row occupy columns (chain[v-1][row], chain[v][row]].
        let mut segs: Vec<(usize, usize, usize)> = Vec::new(); // (start_col, end_col, value)
        for v in 1..=values {
            let lo = chain[v - 1].get(row).copied().unwrap_or(0);
            let hi = chain[v].get(row).copied().unwrap_or(0);
            if hi > lo {
                segs.push((lo, hi, v));
            }
        }
        // read from the rightmost column down
        segs.sort_by(|a, b| b.1.cmp(&a.1));
        for (lo, hi, v) in segs {
            for _ in lo..hi {
                counts[v] += 1;
                if v > 1 && counts[v] > counts[v - 1] {
                    return false;
                }
            }
        }
    }
    true
}

/// Class-wise product over the full group shape.
pub fn product_flambda(
    shape: &GroupShape,
    a: &DominantWeight,
    b: &DominantWeight,
) -> Result<RepRingElement> {
    if !a.matches_shape(shape.blocks()) || !b.matches_shape(shape.blocks()) {
        return Err(Error::ShapeMismatch);
    }
    let factors: Vec<GlElement> = a
        .classes()
        .iter()
        .zip(b.classes())
        .map(|(x, y)| lr_product(x, y))
        .collect::<Result<Vec<_>>>()?;
    let mut terms: Vec<(Vec<Vec<i64>>, i64)> = vec![(Vec::new(), 1)];
    for f in &factors {
        let mut next = Vec::with_capacity(terms.len() * f.len());
        for (prefix, mult) in &terms {
            for (cls, m) in f {
                let mut p = prefix.clone();
                p.push(cls.clone());
                next.push((p, mult * m));
            }
        }
        terms = next;
    }
    let mut out = BTreeMap::new();
    for (classes, mult) in terms {
        let w = DominantWeight::new(classes)?;
        *out.entry(w).or_insert(0) += mult;
    }
    Ok(RepRingElement::from_terms(out))
}

/// The dual weight: per class, reverse and negate.
pub fn dual_weight(x: &DominantWeight) -> DominantWeight {
    x.reversed_negated()
}

/// Whether the weight lies in the sum-zero sublattice (the projective
/// quotient's weights).
pub fn is_pgl_weight(x: &DominantWeight) -> bool {
    x.sum() == 0
}

/// Two weights restrict equally to the special subgroup when they differ
/// by an integer multiple of the class-depth vector.
pub fn sl_equivalent(shape: &GroupShape, x: &DominantWeight, y: &DominantWeight) -> bool {
    if !x.matches_shape(shape.blocks()) || !y.matches_shape(shape.blocks()) {
        return false;
    }
    let mut k: Option<i64> = None;
    for (i, (cx, cy)) in x.classes().iter().zip(y.classes()).enumerate() {
        let r = shape.blocks().r_idx[i] as i64;
        for (a, b) in cx.iter().zip(cy) {
            let d = a - b;
            if d % r != 0 {
                return false;
            }
            match k {
                None => k = Some(d / r),
                Some(kk) if kk != d / r => return false,
                _ => {}
            }
        }
    }
    true
}

/// Canonical representative of the special-subgroup weight class: the
/// shift is fixed so the last component of the last class lies in
/// `[0, r_p)`.
pub fn restrict_sl(shape: &GroupShape, x: &DominantWeight) -> Result<DominantWeight> {
    if !x.matches_shape(shape.blocks()) {
        return Err(Error::ShapeMismatch);
    }
    let p = shape.p();
    let r_p = shape.blocks().r_idx[p - 1] as i64;
    let anchor = *x.classes()[p - 1].last().unwrap();
    let k = anchor.div_euclid(r_p);
    let classes = x
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let r = shape.blocks().r_idx[i] as i64;
            c.iter().map(|&v| v - k * r).collect()
        })
        .collect();
    DominantWeight::new(classes)
}
