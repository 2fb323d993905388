//! The Hecke algebra over integer Laurent polynomials with parameter
//! `q^2`: canonical-basis products, the `h`-coefficients, the a-function
//! through the cell partition, and the leading structure constants
//! `gamma` that every prediction is checked against.
//!
//! Products expand both factors in the `T`-basis, multiply with the
//! quadratic relation `(T_s - q^2)(T_s + 1) = 0`, and convert back by
//! stripping the maximal-length surviving term.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::cells::{lambda_partition, Partition};
use crate::error::{Error, Result};
use crate::kl::KlStore;
use crate::laurent::Laurent;
use crate::perm::AffinePerm;
use crate::word::reduced_word;

/// A `T`-basis expansion: finite support with Laurent coefficients.
pub type TMap = HashMap<AffinePerm, Laurent>;

/// An `h`-table: the canonical-basis coefficients of one product, keyed
/// deterministically.
pub type HTable = BTreeMap<AffinePerm, Laurent>;

pub struct HeckeCtx {
    n: usize,
    pub kl: KlStore,
    product_budget: usize,
    c_cache: RwLock<HashMap<AffinePerm, Arc<Vec<(AffinePerm, Laurent)>>>>,
    prod_cache: RwLock<HashMap<(AffinePerm, AffinePerm), Arc<HTable>>>,
    lambda_cache: RwLock<HashMap<AffinePerm, Partition>>,
}

/// Default product budget `max l(w)+l(u)`: 20 at rank two, 14 above.
pub fn default_product_budget(n: usize) -> usize {
    if n <= 2 {
        20
    } else {
        14
    }
}

impl HeckeCtx {
    pub fn new(n: usize) -> Self {
        Self::with_budget(n, default_product_budget(n))
    }

    pub fn with_budget(n: usize, product_budget: usize) -> Self {
        HeckeCtx {
            n,
            kl: KlStore::new(n),
            product_budget,
            c_cache: RwLock::new(HashMap::new()),
            prod_cache: RwLock::new(HashMap::new()),
            lambda_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn product_budget(&self) -> usize {
        self.product_budget
    }

    /// Cell partition of `w`, memoized.
    pub fn lambda_of(&self, w: &AffinePerm) -> Partition {
        if let Some(hit) = self.lambda_cache.read().unwrap().get(w) {
            return hit.clone();
        }
        let lambda = lambda_partition(w);
        self.lambda_cache.write().unwrap().insert(w.clone(), lambda.clone());
        lambda
    }

    /// `a(w)`: the length of the block longest element of the cell
    /// partition of `w`.
    pub fn a_value(&self, w: &AffinePerm) -> usize {
        self.lambda_of(w).parts().iter().map(|&p| p * (p - 1) / 2).sum()
    }

    /// The `T`-basis expansion of the canonical basis element of `w`,
    /// sorted by (length, window) for reproducibility.
    pub fn c_expansion(&self, w: &AffinePerm) -> Result<Arc<Vec<(AffinePerm, Laurent)>>> {
        if let Some(hit) = self.c_cache.read().unwrap().get(w) {
            return Ok(hit.clone());
        }
        let k = w.omega_exponent();
        let wp = w.wprime_part();
        let l = wp.length() as i64;
        let rot = AffinePerm::omega_pow(self.n, k);
        let mut terms = Vec::new();
        for y in self.kl.interval(&wp)?.iter() {
            let p = self.kl.kl(y, &wp)?;
            if p.is_zero() {
                continue;
            }
            terms.push((rot.multiply(y)?, p.to_laurent_q2(-l)));
        }
        terms.sort_by(|(a, _), (b, _)| {
            a.length().cmp(&b.length()).then_with(|| a.window().cmp(b.window()))
        });
        let terms = Arc::new(terms);
        self.c_cache.write().unwrap().insert(w.clone(), terms.clone());
        Ok(terms)
    }

    /// Right-multiplies a `T`-expansion by `T_y`.
    fn t_mul(&self, map: &TMap, y: &AffinePerm) -> TMap {
        let k = y.omega_exponent();
        let word = reduced_word(&y.wprime_part());
        debug_assert_eq!(word.omega, 0);
        let rot = AffinePerm::omega_pow(self.n, k);
        let mut cur: TMap = map
            .iter()
            .map(|(x, c)| (x.multiply(&rot).expect("equal ranks"), c.clone()))
            .collect();
        let q2 = Laurent::monomial(2, 1);
        let q2m1 = &q2 - &Laurent::one();
        for &s in &word.letters {
            let mut next: TMap = TMap::with_capacity(cur.len() * 2);
            for (x, c) in cur {
                let xs = x.mul_simple_right(s as i64);
                if x.is_right_descent(s as i64) {
                    // T_x T_s = (q^2 - 1) T_x + q^2 T_{xs}
                    add_term(&mut next, x, &c * &q2m1);
                    add_term(&mut next, xs, &c * &q2);
                } else {
                    add_term(&mut next, xs, c);
                }
            }
            cur = next;
        }
        cur
    }

    /// The canonical-basis coefficients of `C_w C_u`.
    pub fn c_product(&self, w: &AffinePerm, u: &AffinePerm) -> Result<Arc<HTable>> {
        if w.n() != self.n || u.n() != self.n {
            return Err(Error::RankMismatch(w.n(), u.n()));
        }
        let total = w.length() + u.length();
        if total > self.product_budget {
            return Err(Error::LimitExceeded { got: total, limit: self.product_budget });
        }
        let key = (w.clone(), u.clone());
        if let Some(hit) = self.prod_cache.read().unwrap().get(&key) {
            return Ok(hit.clone());
        }

        let a = self.c_expansion(w)?;
        let b = self.c_expansion(u)?;
        let a_map: TMap = a.iter().cloned().collect();
        let mut prod: TMap = TMap::new();
        for (y, p) in b.iter() {
            for (x, c) in self.t_mul(&a_map, y) {
                add_term(&mut prod, x, &c * p);
            }
        }

        let h = self.to_c_basis(prod)?;
        let h = Arc::new(h);
        self.prod_cache.write().unwrap().insert(key, h.clone());
        Ok(h)
    }

    /// Unitriangular change of basis: repeatedly strip the
    /// maximal-length term (ties by lexicographic window).
    fn to_c_basis(&self, mut t: TMap) -> Result<HTable> {
        let mut h = HTable::new();
        loop {
            let top = t
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(x, _)| x)
                .max_by(|a, b| {
                    a.length().cmp(&b.length()).then_with(|| b.window().cmp(a.window()))
                })
                .cloned();
            let v = match top {
                Some(v) => v,
                None => break,
            };
            let coeff = t.get(&v).cloned().unwrap_or_default();
            // C_v = q^{-l(v)} T_v + lower terms, so h_v = coeff * q^{l(v)}.
            let hv = coeff.shift(v.length() as i64);
            for (y, c) in self.c_expansion(&v)?.iter() {
                let sub = &hv * c;
                match t.get_mut(y) {
                    Some(slot) => {
                        *slot -= &sub;
                    }
                    None => {
                        t.insert(y.clone(), -&sub);
                    }
                }
            }
            debug_assert!(t.get(&v).map_or(true, Laurent::is_zero));
            h.insert(v, hv);
        }
        Ok(h)
    }

    /// The single coefficient `h_{w,u,v}`.
    pub fn h_coeff(&self, w: &AffinePerm, u: &AffinePerm, v: &AffinePerm) -> Result<Laurent> {
        Ok(self.c_product(w, u)?.get(v).cloned().unwrap_or_default())
    }

    /// All gamma constants of one product: the coefficient of
    /// `q^{a(v)}` in `h_{w,u,v}`.  A higher-degree term signals an
    /// implementation bug and is reported as [`Error::DegreeViolation`].
    pub fn gamma_table(&self, w: &AffinePerm, u: &AffinePerm) -> Result<BTreeMap<AffinePerm, i64>> {
        let h = self.c_product(w, u)?;
        let mut out = BTreeMap::new();
        for (v, coeff) in h.iter() {
            let a = self.a_value(v) as i64;
            if let Some(deg) = coeff.degree() {
                if deg > a {
                    return Err(Error::DegreeViolation { deg, a });
                }
            }
            let g = coeff.coeff(a);
            if g != 0 {
                out.insert(v.clone(), g);
            }
        }
        Ok(out)
    }

    pub fn gamma_oracle(&self, w: &AffinePerm, u: &AffinePerm, v: &AffinePerm) -> Result<i64> {
        let h = self.h_coeff(w, u, v)?;
        let a = self.a_value(v) as i64;
        if let Some(deg) = h.degree() {
            if deg > a {
                return Err(Error::DegreeViolation { deg, a });
            }
        }
        Ok(h.coeff(a))
    }

    /// Distinguished-involution predicate: twice the degree of the
    /// polynomial at the identity equals `l(w) - a(w)`.
    pub fn is_distinguished(&self, w: &AffinePerm) -> Result<bool> {
        if w.omega_exponent() != 0 {
            return Ok(false);
        }
        let p = self.kl.kl(&AffinePerm::identity(self.n), w)?;
        if p.is_zero() {
            return Ok(false);
        }
        let a = self.a_value(w);
        Ok(2 * p.degree().unwrap_or(0) == w.length() - a)
    }

    /// The `T`-expansion of `(T_{x^{-1}})^{-1}`, used by the bar
    /// involution.
    fn t_inverse_of_inverse(&self, x: &AffinePerm) -> TMap {
        let xi = x.inverse();
        let word = reduced_word(&xi.wprime_part());
        let mut cur: TMap = TMap::new();
        cur.insert(AffinePerm::identity(self.n), Laurent::one());
        let qm2 = Laurent::monomial(-2, 1);
        let qm2m1 = &qm2 - &Laurent::one();
        for &s in word.letters.iter().rev() {
            // T_z T_s^{-1} = q^{-2} (T_z T_s) + (q^{-2} - 1) T_z
            let mut next: TMap = TMap::with_capacity(cur.len() * 2);
            for (z, c) in cur {
                let zs = z.mul_simple_right(s as i64);
                if z.is_right_descent(s as i64) {
                    // q^{-2}((q^2-1) T_z + q^2 T_{zs}) + (q^{-2}-1) T_z
                    // = (1 - q^{-2}) T_z + T_{zs} + (q^{-2}-1) T_z = T_{zs}
                    // (T_s is invertible along descents); expand anyway:
                    let q2 = Laurent::monomial(2, 1);
                    let part = &(&q2 - &Laurent::one()) * &qm2;
                    add_term(&mut next, z.clone(), &(&part + &qm2m1) * &c);
                    add_term(&mut next, zs, c);
                } else {
                    add_term(&mut next, zs, &c * &qm2);
                    add_term(&mut next, z, &c * &qm2m1);
                }
            }
            cur = next;
        }
        let rot = AffinePerm::omega_pow(self.n, -xi.omega_exponent());
        cur.into_iter().map(|(z, c)| (z.multiply(&rot).expect("equal ranks"), c)).collect()
    }

    /// The bar involution of a `T`-expansion.
    pub fn bar(&self, map: &TMap) -> TMap {
        let mut out = TMap::new();
        for (x, c) in map {
            let inv = self.t_inverse_of_inverse(x);
            let cb = c.bar();
            for (z, d) in inv {
                add_term(&mut out, z, &d * &cb);
            }
        }
        out
    }
}

fn add_term(map: &mut TMap, key: AffinePerm, val: Laurent) {
    if val.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(slot) => {
            *slot += &val;
            if slot.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, val);
        }
    }
}
