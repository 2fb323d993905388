//! Products in the based ring of the canonical intersection through the
//! representation-ring route, factorization of basis elements, the
//! special/projective variants, and the verification harness comparing
//! predicted structure constants against the Hecke-algebra oracle.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::canonical::{
    epsilon, from_epsilon, is_member, CanonicalElement, DominantWeight,
};
use crate::cells::{in_dl, in_dr, left_star, right_star, Partition};
use crate::error::{Error, Result};
use crate::hecke::HeckeCtx;
use crate::perm::AffinePerm;
use crate::repring::{is_pgl_weight, product_flambda, restrict_sl, GroupShape, RepRingElement};

/// A nonnegative combination of basis elements of one canonical
/// intersection, keyed by window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedRingElement {
    lambda: Partition,
    terms: BTreeMap<AffinePerm, i64>,
}

impl BasedRingElement {
    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn terms(&self) -> &BTreeMap<AffinePerm, i64> {
        &self.terms
    }

    pub fn coefficient(&self, w: &AffinePerm) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// Terms sorted by (length, window) for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(AffinePerm, i64)> {
        let mut out: Vec<(AffinePerm, i64)> =
            self.terms.iter().map(|(w, &m)| (w.clone(), m)).collect();
        out.sort_by(|(a, _), (b, _)| {
            a.length().cmp(&b.length()).then_with(|| a.window().cmp(b.window()))
        });
        out
    }
}

impl fmt::Display for BasedRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, m) in self.sorted_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m != 1 {
                write!(f, "{m}*")?;
            }
            write!(f, "t{w}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The product `t_w t_u` computed through the weight bijection and the
/// class-wise Littlewood-Richardson product.
pub fn t_product(w: &CanonicalElement, u: &CanonicalElement) -> Result<BasedRingElement> {
    if w.lambda() != u.lambda() {
        return Err(Error::ShapeMismatch);
    }
    let shape = GroupShape::new(w.lambda().clone());
    let prod = product_flambda(&shape, &epsilon(w), &epsilon(u))?;
    let mut terms = BTreeMap::new();
    for (weight, &mult) in prod.terms() {
        debug_assert!(mult >= 0);
        let v = from_epsilon(w.lambda(), weight)?;
        terms.insert(v.perm().clone(), mult);
    }
    Ok(BasedRingElement { lambda: w.lambda().clone(), terms })
}

/// Predicted structure constant: the multiplicity of the weight of `v`
/// in the tensor product of the weights of `w` and `u`.
pub fn predicted_gamma(
    w: &CanonicalElement,
    u: &CanonicalElement,
    v: &CanonicalElement,
) -> Result<i64> {
    if w.lambda() != u.lambda() || w.lambda() != v.lambda() {
        return Err(Error::ShapeMismatch);
    }
    let shape = GroupShape::new(w.lambda().clone());
    let prod = product_flambda(&shape, &epsilon(w), &epsilon(u))?;
    Ok(prod.multiplicity(&epsilon(v)))
}

/// Splits a member into the per-class factors carrying its weight
/// components; the basis element is the product of the factors.
pub fn factorize(w: &CanonicalElement) -> Result<Vec<CanonicalElement>> {
    let eps = epsilon(w);
    let mut out = Vec::with_capacity(eps.classes().len());
    for i in 0..eps.classes().len() {
        let classes: Vec<Vec<i64>> = eps
            .classes()
            .iter()
            .enumerate()
            .map(|(k, c)| if k == i { c.clone() } else { vec![0; c.len()] })
            .collect();
        let wi = from_epsilon(w.lambda(), &DominantWeight::new(classes)?)?;
        out.push(wi);
    }
    Ok(out)
}

/// The matrix-algebra size over the intersection ring for a two-sided
/// cell: the number of left cells it contains.
pub fn n_mu_matrix_shape(lambda: &Partition) -> (u64, String) {
    let n_mu = lambda.n_mu();
    (n_mu, format!("based ring of the two-sided cell of {lambda} is a {n_mu}x{n_mu} matrix algebra over the intersection ring"))
}

/// Product inside the sum-zero sublattice (the projective quotient);
/// both arguments must have weight sum zero, and closure is checked.
pub fn pgl_product(w: &CanonicalElement, u: &CanonicalElement) -> Result<BasedRingElement> {
    for x in [w, u] {
        let s = epsilon(x).sum();
        if s != 0 {
            return Err(Error::NotInSubring(s));
        }
    }
    let out = t_product(w, u)?;
    for (v, _) in out.terms() {
        let lam = out.lambda().clone();
        let member = CanonicalElement::new(v.clone(), lam)?;
        assert!(is_pgl_weight(&epsilon(&member)), "sum-zero weights must be closed under products");
    }
    Ok(out)
}

/// A member class modulo the central rotation power, represented by the
/// canonical weight normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlClass {
    rep: CanonicalElement,
}

impl SlClass {
    pub fn new(w: &CanonicalElement) -> Result<Self> {
        let shape = GroupShape::new(w.lambda().clone());
        let norm = restrict_sl(&shape, &epsilon(w))?;
        Ok(SlClass { rep: from_epsilon(w.lambda(), &norm)? })
    }

    pub fn representative(&self) -> &CanonicalElement {
        &self.rep
    }
}

/// The product in the quotient ring: multiply representatives, then
/// normalize each term back to its class representative.  Terms never
/// collide because total weight sums are constant across a product.
pub fn sl_product(a: &SlClass, b: &SlClass) -> Result<Vec<(SlClass, i64)>> {
    let prod = t_product(&a.rep, &b.rep)?;
    let lambda = prod.lambda().clone();
    let mut out: Vec<(SlClass, i64)> = Vec::new();
    for (v, &m) in prod.terms() {
        let member = CanonicalElement::new(v.clone(), lambda.clone())?;
        let class = SlClass::new(&member)?;
        debug_assert!(
            !out.iter().any(|(c, _)| c == &class),
            "central-shift normalization must not merge product terms"
        );
        out.push((class, m));
    }
    Ok(out)
}

/// One compared triple of the verification run.
#[derive(Debug, Clone, Serialize)]
pub struct TripleRecord {
    pub w: String,
    pub u: String,
    pub v: String,
    pub gamma_oracle: i64,
    pub gamma_predicted: i64,
    pub agree: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifySummary {
    pub members: usize,
    pub pairs: usize,
    pub triples_checked: usize,
    pub oracle_nonzero: usize,
    pub disagreements: usize,
    pub degree_violations: usize,
    pub dual_checks: usize,
    pub dual_failures: usize,
    pub star_gamma_checks: usize,
    pub star_gamma_failures: usize,
    pub star_h_checks: usize,
    pub star_h_failures: usize,
}

impl VerifySummary {
    pub fn failures(&self) -> usize {
        self.disagreements
            + self.degree_violations
            + self.dual_failures
            + self.star_gamma_failures
            + self.star_h_failures
    }
}

/// The verification report.  Only triples with a nonzero side or a
/// disagreement are materialized as records; all-zero triples are
/// accounted for in the summary counts.  Wall time is kept out of the
/// serialized form so warm- and cold-cache runs serialize identically.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub lambda: String,
    pub length_bound: usize,
    pub weight_bound: i64,
    pub members: Vec<String>,
    pub records: Vec<TripleRecord>,
    pub summary: VerifySummary,
    #[serde(skip)]
    pub wall: Duration,
}

impl VerificationReport {
    pub fn all_agree(&self) -> bool {
        self.summary.failures() == 0
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub length_bound: usize,
    /// Weight entries range over `[-weight_bound, weight_bound]`.
    pub weight_bound: i64,
    pub parallel: bool,
    /// Check star-operation invariance of gamma and h (needs rank >= 3).
    pub check_stars: bool,
}

impl VerifyOptions {
    pub fn new(length_bound: usize) -> Self {
        VerifyOptions { length_bound, weight_bound: 3, parallel: true, check_stars: true }
    }
}

/// Enumerates intersection members by weight: all dominant class tuples
/// with entries in the box, built through the inverse bijection and
/// filtered by length.  The box is what keeps the set finite; members of
/// bounded length alone are infinitely many (central rotation twists
/// preserve length).
pub fn enumerate_members(
    lambda: &Partition,
    length_bound: usize,
    weight_bound: i64,
) -> Result<Vec<CanonicalElement>> {
    let blocks = lambda.blocks();
    let mut class_choices: Vec<Vec<Vec<i64>>> = Vec::new();
    for &size in &blocks.class_sizes {
        let mut choices = Vec::new();
        let mut acc = Vec::new();
        gen_dominant(size, -weight_bound, weight_bound, &mut acc, &mut choices);
        class_choices.push(choices);
    }
    let mut weights: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
    for choices in &class_choices {
        let mut next = Vec::with_capacity(weights.len() * choices.len());
        for prefix in &weights {
            for c in choices {
                let mut p = prefix.clone();
                p.push(c.clone());
                next.push(p);
            }
        }
        weights = next;
    }
    let mut out = Vec::new();
    for classes in weights {
        let eps = DominantWeight::new(classes)?;
        let m = from_epsilon(lambda, &eps)?;
        if m.perm().length() <= length_bound {
            out.push(m);
        }
    }
    out.sort_by(|a, b| {
        a.perm()
            .length()
            .cmp(&b.perm().length())
            .then_with(|| a.perm().window().cmp(b.perm().window()))
    });
    Ok(out)
}

fn gen_dominant(size: usize, lo: i64, hi: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if acc.len() == size {
        out.push(acc.clone());
        return;
    }
    let top = acc.last().copied().unwrap_or(hi);
    for v in (lo..=top).rev() {
        acc.push(v);
        gen_dominant(size, lo, hi, acc, out);
        acc.pop();
    }
}

struct PairOutcome {
    records: Vec<TripleRecord>,
    gamma: BTreeMap<AffinePerm, i64>,
    triples: usize,
    degree_violations: usize,
    star_gamma_checks: usize,
    star_gamma_failures: usize,
    star_h_checks: usize,
    star_h_failures: usize,
}

/// Compares the Hecke oracle against the representation-ring prediction
/// on every triple reachable from the enumerated members: for each pair
/// the full support of the canonical-basis product is examined, so
/// a zero-zero agreement off the support is implied rather than sampled.
/// Degree bounds, the inversion symmetry of gamma, and star invariance
/// are verified along the way.
pub fn verify_isomorphism(
    ctx: &HeckeCtx,
    lambda: &Partition,
    opts: VerifyOptions,
) -> Result<VerificationReport> {
    let start = Instant::now();
    if lambda.n() != ctx.n() {
        return Err(Error::RankMismatch(lambda.n(), ctx.n()));
    }
    let members = enumerate_members(lambda, opts.length_bound, opts.weight_bound)?;
    let shape = GroupShape::new(lambda.clone());
    let weights: HashMap<AffinePerm, DominantWeight> =
        members.iter().map(|m| (m.perm().clone(), epsilon(m))).collect();
    let member_set: HashSet<AffinePerm> = weights.keys().cloned().collect();

    let pairs: Vec<(CanonicalElement, CanonicalElement)> = members
        .iter()
        .flat_map(|w| members.iter().map(move |u| (w.clone(), u.clone())))
        .collect();

    let run_pair = |pair: &(CanonicalElement, CanonicalElement)| -> Result<PairOutcome> {
        let (w, u) = pair;
        verify_pair(ctx, &shape, lambda, w, u, opts)
    };
    let outcomes: Vec<Result<PairOutcome>> = if opts.parallel {
        crate::par::map_collect(&pairs, run_pair)
    } else {
        crate::par::map_collect_seq(&pairs, run_pair)
    };

    let mut records = Vec::new();
    let mut summary = VerifySummary { members: members.len(), pairs: pairs.len(), ..Default::default() };
    let mut tables: HashMap<(AffinePerm, AffinePerm), BTreeMap<AffinePerm, i64>> = HashMap::new();
    for (pair, outcome) in pairs.iter().zip(outcomes) {
        let outcome = outcome?;
        summary.triples_checked += outcome.triples;
        summary.degree_violations += outcome.degree_violations;
        summary.star_gamma_checks += outcome.star_gamma_checks;
        summary.star_gamma_failures += outcome.star_gamma_failures;
        summary.star_h_checks += outcome.star_h_checks;
        summary.star_h_failures += outcome.star_h_failures;
        for r in &outcome.records {
            if r.gamma_oracle != 0 {
                summary.oracle_nonzero += 1;
            }
            if !r.agree {
                summary.disagreements += 1;
            }
        }
        records.extend(outcome.records);
        tables.insert((pair.0.perm().clone(), pair.1.perm().clone()), outcome.gamma);
    }

    // Inversion symmetries across the collected tables: both inverted
    // pairs are members, so the lookups stay inside the run.
    for ((w, u), table) in &tables {
        for (v, &g) in table {
            if let Some(dual) = tables.get(&(u.inverse(), w.inverse())) {
                summary.dual_checks += 1;
                if dual.get(&v.inverse()).copied().unwrap_or(0) != g {
                    summary.dual_failures += 1;
                }
            }
            if member_set.contains(&v.inverse()) {
                if let Some(cyc) = tables.get(&(u.clone(), v.inverse())) {
                    summary.dual_checks += 1;
                    if cyc.get(&w.inverse()).copied().unwrap_or(0) != g {
                        summary.dual_failures += 1;
                    }
                }
            }
        }
    }

    records.sort_by(|a, b| (&a.w, &a.u, &a.v).cmp(&(&b.w, &b.u, &b.v)));
    Ok(VerificationReport {
        n: ctx.n(),
        lambda: lambda.to_string(),
        length_bound: opts.length_bound,
        weight_bound: opts.weight_bound,
        members: members.iter().map(|m| m.perm().to_string()).collect(),
        records,
        summary,
        wall: start.elapsed(),
    })
}

fn verify_pair(
    ctx: &HeckeCtx,
    shape: &GroupShape,
    lambda: &Partition,
    w: &CanonicalElement,
    u: &CanonicalElement,
    opts: VerifyOptions,
) -> Result<PairOutcome> {
    let h = ctx.c_product(w.perm(), u.perm())?;
    let predicted: RepRingElement = product_flambda(shape, &epsilon(w), &epsilon(u))?;
    let mut predicted_by_perm: BTreeMap<AffinePerm, i64> = BTreeMap::new();
    for (weight, &m) in predicted.terms() {
        predicted_by_perm.insert(from_epsilon(lambda, weight)?.perm().clone(), m);
    }

    let a_of = |v: &AffinePerm| ctx.a_value(v) as i64;
    let mut gamma: BTreeMap<AffinePerm, i64> = BTreeMap::new();
    let mut degree_violations = 0usize;
    for (v, coeff) in h.iter() {
        let a = a_of(v);
        if coeff.degree().map_or(false, |d| d > a) {
            degree_violations += 1;
        }
        let g = coeff.coeff(a);
        if g != 0 {
            gamma.insert(v.clone(), g);
        }
    }

    let mut keys: HashSet<AffinePerm> = gamma.keys().cloned().collect();
    keys.extend(predicted_by_perm.keys().cloned());
    let mut records = Vec::new();
    let triples = h.len().max(keys.len());
    for v in keys {
        let g = gamma.get(&v).copied().unwrap_or(0);
        let p = if is_member(&v, lambda) {
            predicted_by_perm.get(&v).copied().unwrap_or(0)
        } else {
            // Off the intersection the oracle must vanish.
            0
        };
        let agree = g == p;
        if g != 0 || p != 0 || !agree {
            records.push(TripleRecord {
                w: w.perm().to_string(),
                u: u.perm().to_string(),
                v: v.to_string(),
                gamma_oracle: g,
                gamma_predicted: p,
                agree,
            });
        }
    }

    let mut out = PairOutcome {
        records,
        gamma,
        triples,
        degree_violations,
        star_gamma_checks: 0,
        star_gamma_failures: 0,
        star_h_checks: 0,
        star_h_failures: 0,
    };

    if opts.check_stars && ctx.n() >= 3 {
        star_checks(ctx, w.perm(), u.perm(), &mut out)?;
    }
    Ok(out)
}

/// Star invariance on the nonzero triples of one pair: gamma is
/// preserved by compatible left/right star operations, and the full
/// h-coefficient is preserved by one-sided pairs.
fn star_checks(ctx: &HeckeCtx, w: &AffinePerm, u: &AffinePerm, out: &mut PairOutcome) -> Result<()> {
    let n = ctx.n() as i64;
    let triples: Vec<(AffinePerm, i64)> =
        out.gamma.iter().map(|(v, &g)| (v.clone(), g)).collect();
    for (v, g) in &triples {
        for a in 0..n {
            for c in 0..n {
                // h-invariance: w in D_L(a), u in D_R(c), v in both.
                if in_dl(w, a)? && in_dr(u, c)? && in_dl(v, a)? && in_dr(v, c)? {
                    let ws = left_star(w, a)?;
                    let us = right_star(u, c)?;
                    let vs = left_star(&right_star(v, c)?, a)?;
                    out.star_h_checks += 1;
                    let h1 = ctx.h_coeff(w, u, v)?;
                    let h2 = ctx.h_coeff(&ws, &us, &vs)?;
                    if h1 != h2 {
                        out.star_h_failures += 1;
                    }
                }
                for b in 0..n {
                    // gamma invariance for the two-sided move: w in
                    // D_L(a) cap D_R(b), u in D_L(b) cap D_R(c), v in
                    // D_L(a) cap D_R(c).
                    if in_dl(w, a)?
                        && in_dr(w, b)?
                        && in_dl(u, b)?
                        && in_dr(u, c)?
                        && in_dl(v, a)?
                        && in_dr(v, c)?
                    {
                        let ws = left_star(&right_star(w, b)?, a)?;
                        let us = left_star(&right_star(u, c)?, b)?;
                        let vs = left_star(&right_star(v, c)?, a)?;
                        out.star_gamma_checks += 1;
                        if ctx.gamma_oracle(&ws, &us, &vs)? != *g {
                            out.star_gamma_failures += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
