//! Cell invariants of the group: the partition attached to an element
//! through antichains of its window, the dual chain-based oracle, star
//! operations with explicit window formulas, and bounded-ball cell
//! classes computed from Kazhdan-Lusztig mu-coefficients.
//!
//! An index set `j_1 < ... < j_k` with distinct residues is a d-antichain
//! of `w` when `j_k - n < j_1` and `w(j_k) - n < w(j_1) < ... < w(j_k)`;
//! d-chains reverse the value order instead.  Antichain searches confine
//! to a single window of `n` consecutive integers; chains do not, which
//! is why the chain computation below stays a heuristic cross-check.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kl::KlStore;
use crate::perm::AffinePerm;

/// A partition of `n`: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::Parse("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|p| p[0] < p[1]) {
            return Err(Error::Parse("partition parts must be weakly decreasing".into()));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// The conjugate partition.
    pub fn dual(&self) -> Partition {
        let mut parts = Vec::with_capacity(self.parts[0]);
        for c in 1..=self.parts[0] {
            parts.push(self.parts.iter().take_while(|&&p| p >= c).count());
        }
        Partition { parts }
    }

    /// Number of left cells in the two-sided cell of this partition:
    /// `n! / (mu_1! ... mu_r'!)` for the dual partition `mu`.
    pub fn n_mu(&self) -> u64 {
        let n = self.n() as u64;
        let mut num: u64 = (1..=n).product();
        for &m in self.dual().parts() {
            let f: u64 = (1..=m as u64).product();
            num /= f;
        }
        num
    }

    /// Block data: `e_i` prefix sums, and per class of equal parts the
    /// last row index `r_i` and the size `n_i = lambda_{r_i} - lambda_{r_{i+1}}`.
    pub fn blocks(&self) -> Blocks {
        let r = self.parts.len();
        let mut e = vec![0usize; r + 1];
        for i in 0..r {
            e[i + 1] = e[i] + self.parts[i];
        }
        let mut r_idx = Vec::new();
        for k in 1..=r {
            let next = if k < r { self.parts[k] } else { 0 };
            if self.parts[k - 1] > next {
                r_idx.push(k);
            }
        }
        let p = r_idx.len();
        let mut class_sizes = Vec::with_capacity(p);
        for (i, &ri) in r_idx.iter().enumerate() {
            let next = if i + 1 < p { self.parts[r_idx[i + 1] - 1] } else { 0 };
            class_sizes.push(self.parts[ri - 1] - next);
        }
        Blocks { e, r_idx, class_sizes }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .trim()
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{e}: {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Block bookkeeping for a partition; `e` has length `rows + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    pub e: Vec<usize>,
    pub r_idx: Vec<usize>,
    pub class_sizes: Vec<usize>,
}

impl Blocks {
    pub fn p(&self) -> usize {
        self.r_idx.len()
    }

    /// Window position of the cell `(row k, column l)`, both 1-based.
    pub fn pos(&self, k: usize, l: usize) -> usize {
        self.e[k - 1] + l
    }

    /// The class whose last row is `row`, if any.
    pub fn class_of_end_row(&self, row: usize) -> Option<usize> {
        self.r_idx.iter().position(|&r| r == row).map(|i| i + 1)
    }
}

/// Is the sorted index set `pos` (arbitrary integers, distinct residues)
/// a d-antichain of `w`?
pub fn is_d_antichain(w: &AffinePerm, pos: &[i64]) -> bool {
    let n = w.n() as i64;
    if pos.is_empty() {
        return false;
    }
    let mut sorted = pos.to_vec();
    sorted.sort_unstable();
    if sorted.len() == 1 {
        return true;
    }
    if *sorted.last().unwrap() - n >= sorted[0] {
        return false;
    }
    let vals: Vec<i64> = sorted.iter().map(|&j| w.apply(j)).collect();
    vals.windows(2).all(|p| p[0] < p[1]) && vals[vals.len() - 1] - n < vals[0]
}

/// Is the value set `vals` an r-antichain of `w`?
pub fn is_r_antichain(w: &AffinePerm, vals: &[i64]) -> bool {
    is_d_antichain(&w.inverse(), vals)
}

/// The dual invariant `mu(w)`: `mu_1 + ... + mu_q` is the largest subset
/// of the window `{1,..,n}` decomposable into `q` d-antichains, computed
/// by an exact minimum-antichain-cover dynamic program over subsets.
pub fn mu_partition(w: &AffinePerm) -> Partition {
    let n = w.n();
    let win = w.window();
    let full = (1usize << n) - 1;

    let mut antichain = vec![false; full + 1];
    for mask in 1..=full {
        let mut prev: Option<i64> = None;
        let mut min = i64::MAX;
        let mut max = i64::MIN;
        let mut ok = true;
        for (i, &v) in win.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if let Some(p) = prev {
                    if v <= p {
                        ok = false;
                        break;
                    }
                }
                prev = Some(v);
                min = min.min(v);
                max = max.max(v);
            }
        }
        antichain[mask] = ok && max - min < n as i64;
    }

    let mut cover = vec![u32::MAX; full + 1];
    cover[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        // Iterate submasks of `mask` containing the lowest bit.
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let t = sub | low;
            if antichain[t] && cover[mask ^ t] != u32::MAX {
                cover[mask] = cover[mask].min(cover[mask ^ t] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    let mut d = vec![0usize; n + 1];
    for mask in 0..=full {
        let q = cover[mask] as usize;
        if q <= n {
            d[q] = d[q].max((mask as u64).count_ones() as usize);
        }
    }
    for q in 1..=n {
        d[q] = d[q].max(d[q - 1]);
    }
    let mut parts = Vec::new();
    for q in 1..=n {
        let step = d[q] - d[q - 1];
        if step == 0 {
            break;
        }
        parts.push(step);
    }
    Partition::new(parts).expect("antichain steps are weakly decreasing")
}

/// The Greene invariant `lambda(w)`, the conjugate of `mu(w)`.
pub fn lambda_partition(w: &AffinePerm) -> Partition {
    mu_partition(w).dual()
}

/// Independent chain-based computation of `lambda(w)`.
///
/// Chains cannot be confined to one window, so representatives
/// `j + shift*n` are searched over a widening shift range until the chain
/// profile stabilizes across two consecutive widths.  The stop rule is a
/// heuristic; this function is a cross-check oracle, never load-bearing.
pub fn lambda_partition_chain_oracle(w: &AffinePerm) -> Result<Partition> {
    let n = w.n();
    let max_disp =
        w.window().iter().enumerate().map(|(i, &a)| (a - (i as i64 + 1)).unsigned_abs()).max().unwrap_or(0);
    let width_limit = 2 * ((max_disp as usize) / n + n);

    let mut prev: Option<Vec<usize>> = None;
    for width in 1..=width_limit {
        let d = chain_profile(w, width as i64);
        if prev.as_ref() == Some(&d) {
            let mut parts = Vec::new();
            for q in 1..=n {
                let step = d[q] - d[q - 1];
                if step == 0 {
                    break;
                }
                parts.push(step);
            }
            return Partition::new(parts)
                .map_err(|_| Error::NonConvergence(width));
        }
        prev = Some(d);
    }
    Err(Error::NonConvergence(width_limit))
}

/// `d[q]` = largest representative selection decomposable into `q`
/// d-chains, shifts confined to `[-width, width]`.
fn chain_profile(w: &AffinePerm, width: i64) -> Vec<usize> {
    let n = w.n();
    let mut d = vec![0usize; n + 1];
    let mut shifts = vec![-width; n];
    loop {
        // Representative of residue j+1 is (j+1) + shifts[j]*n; sort by
        // position and read values.
        let mut items: Vec<(i64, i64)> = (0..n)
            .map(|j| {
                let pos = (j as i64 + 1) + shifts[j] * n as i64;
                (pos, w.apply(pos))
            })
            .collect();
        items.sort_unstable();
        let values: Vec<i64> = items.into_iter().map(|(_, v)| v).collect();
        // Greene: the largest union of q strictly decreasing subsequences
        // is the sum of the first q columns of the insertion shape.
        let shape = rsk_shape(&values);
        let mut total = 0usize;
        for q in 1..=n {
            total += shape.iter().filter(|&&row| row >= q).count();
            d[q] = d[q].max(total);
        }
        // Odometer over shift assignments.
        let mut j = 0;
        loop {
            if j == n {
                return d;
            }
            if shifts[j] < width {
                shifts[j] += 1;
                break;
            }
            shifts[j] = -width;
            j += 1;
        }
    }
}

/// Row lengths of the patience-sorting insertion shape.
fn rsk_shape(values: &[i64]) -> Vec<usize> {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for &v in values {
        let mut x = v;
        for row in rows.iter_mut() {
            // Find the leftmost entry > x (strictly increasing rows).
            match row.iter().position(|&r| r > x) {
                Some(i) => {
                    std::mem::swap(&mut row[i], &mut x);
                }
                None => {
                    row.push(x);
                    x = i64::MIN;
                    break;
                }
            }
        }
        if x != i64::MIN {
            rows.push(vec![x]);
        }
    }
    rows.iter().map(|r| r.len()).collect()
}

/// Whether exactly one of `s_i, s_{i+1}` is a right descent of `w`.
pub fn in_dr(w: &AffinePerm, i: i64) -> Result<bool> {
    if w.n() < 3 {
        return Err(Error::RankTooSmall(w.n()));
    }
    Ok(w.is_right_descent(i) != w.is_right_descent(i + 1))
}

pub fn in_dl(w: &AffinePerm, i: i64) -> Result<bool> {
    in_dr(&w.inverse(), i)
}

/// Right star operation for the pair `{s_i, s_{i+1}}`: swaps the window
/// values at positions `i+1, i+2` when `w(i)` lies between `w(i+1)` and
/// `w(i+2)`, and at positions `i, i+1` when `w(i+2)` lies between `w(i)`
/// and `w(i+1)`.
pub fn right_star(w: &AffinePerm, i: i64) -> Result<AffinePerm> {
    if w.n() < 3 {
        return Err(Error::RankTooSmall(w.n()));
    }
    let (a, b, c) = (w.apply(i), w.apply(i + 1), w.apply(i + 2));
    let between = |x: i64, lo: i64, hi: i64| (lo < x && x < hi) || (hi < x && x < lo);
    let out = if between(a, b, c) {
        w.mul_simple_right(i + 1)
    } else if between(c, a, b) {
        w.mul_simple_right(i)
    } else {
        return Err(Error::NotInStarDomain { i, next: i + 1 });
    };
    debug_assert!(in_dr(w, i).unwrap());
    debug_assert!(in_dr(&out, i).unwrap());
    Ok(out)
}

pub fn left_star(w: &AffinePerm, i: i64) -> Result<AffinePerm> {
    Ok(right_star(&w.inverse(), i)?.inverse())
}

/// Left/right/two-sided classes of the restricted cell preorders on the
/// ball `{w : l(w) <= max_len}` of the affine part.
///
/// The elementary relation `x <= y` holds when `mu(x,y) != 0` (in either
/// order) and the corresponding descent sets satisfy `L(x) !subset L(y)`
/// (resp. `R`, resp. either).  Restriction to a ball can merge fewer
/// pairs than the true relation, so callers should only assert
/// implications that survive restriction.
pub struct CellBall {
    pub elements: Vec<AffinePerm>,
    pub left_class: Vec<usize>,
    pub right_class: Vec<usize>,
    pub two_sided_class: Vec<usize>,
}

impl CellBall {
    pub fn classes(ids: &[usize]) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (i, &c) in ids.iter().enumerate() {
            if out.len() <= c {
                out.resize(c + 1, Vec::new());
            }
            out[c].push(i);
        }
        out
    }
}

pub fn cell_ball(store: &KlStore, max_len: usize) -> Result<CellBall> {
    let elements: Vec<AffinePerm> = store.ball(max_len).iter().cloned().collect();
    let index: HashMap<AffinePerm, usize> =
        elements.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let m = elements.len();

    let rdesc: Vec<Vec<usize>> = elements.iter().map(|w| w.right_descents()).collect();
    let ldesc: Vec<Vec<usize>> = elements.iter().map(|w| w.left_descents()).collect();
    let not_subset = |a: &[usize], b: &[usize]| a.iter().any(|x| !b.contains(x));

    let mut left = vec![Vec::new(); m];
    let mut right = vec![Vec::new(); m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let (x, y) = (&elements[i], &elements[j]);
            let mu = if x.length() < y.length() {
                store.mu(x, y)?
            } else if y.length() < x.length() {
                store.mu(y, x)?
            } else {
                0
            };
            if mu == 0 {
                continue;
            }
            // x <=_L y: edge y -> x.
            if not_subset(&ldesc[i], &ldesc[j]) {
                left[j].push(i);
            }
            if not_subset(&rdesc[i], &rdesc[j]) {
                right[j].push(i);
            }
        }
    }
    let mut both = vec![Vec::new(); m];
    for i in 0..m {
        both[i].extend(left[i].iter().copied());
        both[i].extend(right[i].iter().copied());
    }

    Ok(CellBall {
        left_class: scc(&left),
        right_class: scc(&right),
        two_sided_class: scc(&both),
        elements: {
            let _ = index;
            elements
        },
    })
}

/// Strongly connected components, iterative Tarjan; returns a class id
/// per vertex.
fn scc(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0usize;
    let mut next_comp = 0usize;

    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ei < adj[v].len() {
                let w = adj[v][*ei];
                *ei += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
                call.pop();
                if let Some(&mut (u, _)) = call.last_mut() {
                    low[u] = low[u].min(low[v]);
                }
            }
        }
    }
    comp
}


#[cfg(test)]
pub(crate) use tests::all_partitions;
