//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its wall time.  Every comparison is exact integer or polynomial
//! equality; run with `cargo test --test acceptance -- --nocapture` to
//! see the lines.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use affine_cells::basedring::{
    factorize, predicted_gamma, t_product, verify_isomorphism, VerificationReport, VerifyOptions,
};
use affine_cells::canonical::{
    epsilon, from_epsilon, fundamental_element, fundamental_prefix, greedy_epsilon_grid,
    m_element, w_lambda, CanonicalElement, DominantWeight,
};
use affine_cells::cells::{cell_ball, lambda_partition, mu_partition, CellBall, Partition};
use affine_cells::hecke::HeckeCtx;
use affine_cells::kl::KlStore;
use affine_cells::repring::{lr_product, pieri_sym, pieri_wedge};
use affine_cells::AffinePerm;

fn partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition::new(acc.clone()).unwrap());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            acc.push(p);
            rec(n - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn pass(criterion: &str, start: Instant) {
    println!("acceptance {criterion}: PASS in {} ms", start.elapsed().as_millis());
}

#[test]
fn acceptance_01_greedy_grid_golden() {
    let start = Instant::now();
    let lambda: Partition = "4,3,2,2".parse().unwrap();
    let rows = vec![vec![11, 7, 4, 3], vec![12, 6, 5], vec![10, 8], vec![14, 9]];
    let grid = greedy_epsilon_grid(&lambda, &rows).unwrap();
    let expect = [
        (4, 3, 1, 14),
        (3, 3, 1, 10),
        (2, 3, 1, 6),
        (1, 3, 1, 4),
        (4, 3, 2, 9),
        (3, 3, 2, 8),
        (2, 3, 2, 5),
        (1, 3, 2, 3),
        (2, 2, 1, 12),
        (1, 2, 1, 11),
        (1, 1, 1, 7),
    ];
    for (k, i, j, v) in expect {
        assert_eq!(grid.value(k, i, j), v, "eps_({k},{i},{j})");
    }
    let weight = grid.weight(11).unwrap();
    assert_eq!(weight.to_string(), "(0)(1)(1,0)");
    assert!(start.elapsed().as_secs() < 1);
    pass("01 greedy-grid golden", start);
}

#[test]
fn acceptance_02_bijection_suite() {
    let start = Instant::now();
    let mut rng = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        rng
    };
    for n in 2..=6usize {
        for lambda in partitions(n) {
            let blocks = lambda.blocks();
            for _ in 0..200 {
                let mut classes = Vec::new();
                for &size in &blocks.class_sizes {
                    let mut c: Vec<i64> = (0..size).map(|_| (next() % 7) as i64 - 3).collect();
                    c.sort_unstable_by(|a, b| b.cmp(a));
                    classes.push(c);
                }
                let eps = DominantWeight::new(classes).unwrap();
                let member = from_epsilon(&lambda, &eps).unwrap();
                // epsilon . from_epsilon = id
                assert_eq!(epsilon(&member), eps, "lambda={lambda}");
                // from_epsilon . epsilon = id on the produced member
                let again = from_epsilon(&lambda, &epsilon(&member)).unwrap();
                assert_eq!(again.perm(), member.perm());
                // duality: reverse-negate per class
                assert_eq!(epsilon(&member.inverse()), eps.reversed_negated());
            }
        }
    }
    assert!(start.elapsed().as_secs() < 120);
    pass("02 bijection suite", start);
}

#[test]
fn acceptance_03_closed_formula_rank_two() {
    let start = Instant::now();
    let ctx = HeckeCtx::with_budget(2, 20);
    let lambda: Partition = "2".parse().unwrap();
    let s0 = AffinePerm::simple(2, 0);
    let s1 = AffinePerm::simple(2, 1);
    let s1s0 = s1.multiply(&s0).unwrap();
    let s0s1 = s0.multiply(&s1).unwrap();
    for k in 1..=3usize {
        for l in 1..=3usize {
            let mut w = AffinePerm::identity(2);
            for _ in 0..k {
                w = w.multiply(&s1s0).unwrap();
            }
            let mut u = AffinePerm::identity(2);
            for _ in 0..l {
                u = u.multiply(&s0s1).unwrap();
            }
            // Oracle route: raw canonical-basis product.
            let table = ctx.gamma_table(&w, &u).unwrap();
            let mut expect = BTreeMap::new();
            for q in k.abs_diff(l)..=k + l - 1 {
                let mut v = s1.clone();
                for _ in 0..q {
                    v = v.multiply(&s0s1).unwrap();
                }
                expect.insert(v, 1i64);
            }
            assert_eq!(table, expect, "oracle route k={k} l={l}");

            // Predicted route: lift into the canonical intersection by
            // rotation twists (w -> w*rot, u -> rot^-1*u*rot^2, v -> v*rot^2)
            // and compare representation-ring multiplicities.
            let rot = AffinePerm::omega(2);
            let rot2 = rot.multiply(&rot).unwrap();
            let wl = CanonicalElement::new(w.multiply(&rot).unwrap(), lambda.clone()).unwrap();
            let ul = CanonicalElement::new(
                rot.inverse().multiply(&u).unwrap().multiply(&rot2).unwrap(),
                lambda.clone(),
            )
            .unwrap();
            assert_eq!(epsilon(&wl).classes(), &[vec![k as i64, 1 - k as i64]]);
            for q in 0..=(k + l + 1) {
                let mut v = s1.clone();
                for _ in 0..q {
                    v = v.multiply(&s0s1).unwrap();
                }
                let vl =
                    CanonicalElement::new(v.multiply(&rot2).unwrap(), lambda.clone()).unwrap();
                let expected = i64::from(k.abs_diff(l) <= q && q <= k + l - 1);
                assert_eq!(
                    predicted_gamma(&wl, &ul, &vl).unwrap(),
                    expected,
                    "predicted route k={k} l={l} q={q}"
                );
                // the two routes agree triple by triple on the lifts
                assert_eq!(
                    ctx.gamma_oracle(wl.perm(), ul.perm(), vl.perm()).unwrap(),
                    expected
                );
            }
        }
    }
    assert!(start.elapsed().as_secs() < 120);
    pass("03 closed formula at rank two", start);
}

struct DeskRuns {
    reports: Vec<VerificationReport>,
}

fn desk_runs() -> &'static DeskRuns {
    static RUNS: OnceLock<DeskRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let mut reports = Vec::new();
        for (n, lambda, bound) in [
            (2usize, "2", 8usize),
            (3, "3", 10),
            (3, "2,1", 10),
            (3, "1,1,1", 10),
        ] {
            let lambda: Partition = lambda.parse().unwrap();
            let ctx = HeckeCtx::with_budget(n, 2 * bound + 4);
            let opts = VerifyOptions::new(bound);
            let report = verify_isomorphism(&ctx, &lambda, opts).unwrap();
            reports.push(report);
        }
        DeskRuns { reports }
    })
}

#[test]
fn acceptance_04_isomorphism_desk_scale() {
    let start = Instant::now();
    for report in &desk_runs().reports {
        assert!(
            report.all_agree(),
            "disagreements for lambda={} at n={}: {:?}",
            report.lambda,
            report.n,
            report.summary
        );
        assert!(report.summary.oracle_nonzero > 0);
        println!(
            "  run n={} lambda=({}) members={} triples={} all agree",
            report.n, report.lambda, report.summary.members, report.summary.triples_checked
        );
    }
    assert!(start.elapsed().as_secs() < 900);
    pass("04 isomorphism at desk scale", start);
}

#[test]
fn acceptance_05_star_invariance() {
    let start = Instant::now();
    let mut gamma_checks = 0;
    let mut h_checks = 0;
    for report in &desk_runs().reports {
        assert_eq!(report.summary.star_gamma_failures, 0, "lambda={}", report.lambda);
        assert_eq!(report.summary.star_h_failures, 0, "lambda={}", report.lambda);
        if report.n == 3 {
            gamma_checks += report.summary.star_gamma_checks;
            h_checks += report.summary.star_h_checks;
        }
    }
    assert!(gamma_checks > 1000, "rank-3 runs must exercise the two-sided star move");
    assert!(h_checks > 1000, "rank-3 runs must exercise the one-sided star move");
    pass("05 star invariance", start);
}

#[test]
fn acceptance_06_pieri_lr_consistency() {
    let start = Instant::now();
    fn dominant_vectors(m: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
        fn rec(m: usize, lo: i64, hi: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if acc.len() == m {
                out.push(acc.clone());
                return;
            }
            let top = acc.last().copied().unwrap_or(hi);
            for v in (lo..=top).rev() {
                acc.push(v);
                rec(m, lo, hi, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, lo, hi, &mut Vec::new(), &mut out);
        out
    }
    let binom = |m: usize, i: usize| -> usize {
        (0..i).fold(1usize, |acc, t| acc * (m - t) / (t + 1))
    };
    for m in 1..=4usize {
        for x in dominant_vectors(m, 0, 3) {
            for i in 1..=m {
                let mut e = vec![0i64; m];
                for t in 0..i {
                    e[t] = 1;
                }
                assert_eq!(lr_product(&x, &e).unwrap(), pieri_wedge(i, &x).unwrap());
            }
            for a in 0..=3i64 {
                let mut s = vec![0i64; m];
                s[0] = a;
                assert_eq!(lr_product(&x, &s).unwrap(), pieri_sym(a, &x).unwrap());
            }
        }
        // fundamental term counts on strictly decreasing weights
        let x: Vec<i64> = (0..m as i64).map(|t| 3 - t).collect();
        for i in 1..=m {
            assert_eq!(pieri_wedge(i, &x).unwrap().len(), binom(m, i));
        }
    }
    assert!(start.elapsed().as_secs() < 60);
    pass("06 Pieri/LR consistency", start);
}

#[test]
fn acceptance_07_length_identities() {
    let start = Instant::now();
    for n in 2..=7usize {
        for i in 1..=n {
            assert_eq!(AffinePerm::tau(n, i).unwrap().length(), n - 1);
            assert_eq!(AffinePerm::x_elem(n, i).unwrap().length(), (n - i) * i);
        }
        for lambda in partitions(n) {
            let blocks = lambda.blocks();
            let wl = w_lambda(&lambda);
            for i in 1..=blocks.p() {
                let r = blocks.r_idx[i - 1];
                for j in 1..=blocks.class_sizes[i - 1] {
                    let u = fundamental_prefix(&lambda, i, j).unwrap();
                    assert_eq!(u.length(), (n - r * j) * j, "lambda={lambda} i={i} j={j}");
                    let uw = u.multiply(&wl).unwrap();
                    assert_eq!(uw.length(), u.length() + wl.length());
                    assert_eq!(fundamental_element(&lambda, i, j).unwrap().perm(), &uw);
                }
            }
        }
    }
    assert!(start.elapsed().as_secs() < 60);
    pass("07 length identities", start);
}

#[test]
fn acceptance_08_cell_invariants() {
    let start = Instant::now();
    // the referee window
    let w = AffinePerm::from_window(6, vec![6, 3, 10, 7, 8, 11]).unwrap();
    assert_eq!(lambda_partition(&w).to_string(), "2,2,1,1");
    // mu of the base element is the dual partition, for every shape
    for n in 2..=6usize {
        for lambda in partitions(n) {
            assert_eq!(mu_partition(&w_lambda(&lambda)), lambda.dual());
        }
    }
    // window-restricted invariant constant on restricted two-sided classes
    let store = KlStore::new(3);
    let ball = cell_ball(&store, 8).unwrap();
    let classes = CellBall::classes(&ball.two_sided_class);
    assert!(classes.iter().filter(|c| c.len() > 1).count() >= 2);
    for class in classes.iter().filter(|c| !c.is_empty()) {
        let lam0 = lambda_partition(&ball.elements[class[0]]);
        for &i in class {
            assert_eq!(
                lambda_partition(&ball.elements[i]).dual(),
                lam0.dual(),
                "two-sided class not constant at {}",
                ball.elements[i]
            );
        }
    }
    // and descent sets constant on restricted left classes
    for class in CellBall::classes(&ball.left_class).iter().filter(|c| c.len() > 1) {
        let r0 = ball.elements[class[0]].right_descents();
        for &i in class {
            assert_eq!(ball.elements[i].right_descents(), r0);
        }
    }
    assert!(start.elapsed().as_secs() < 300);
    pass("08 cell invariants", start);
}

#[test]
fn acceptance_09_distinguished_involutions() {
    let start = Instant::now();
    for n in 2..=4usize {
        let ctx = HeckeCtx::new(n);
        // every nonempty proper subset of the affine generators spans a
        // finite parabolic; its longest element must satisfy the degree
        // identity 2 deg P_{e,w_I} = l(w_I) - a(w_I).
        for mask in 1u32..(1 << n) - 1 {
            let gens: Vec<i64> = (0..n as i64).filter(|&i| mask >> i & 1 == 1).collect();
            let mut w = AffinePerm::identity(n);
            loop {
                match gens.iter().find(|&&s| !w.is_right_descent(s)) {
                    Some(&s) => w = w.mul_simple_right(s),
                    None => break,
                }
            }
            assert!(
                ctx.is_distinguished(&w).unwrap(),
                "longest element {w} of subset {gens:?} at n={n}"
            );
        }
    }
    assert!(start.elapsed().as_secs() < 120);
    pass("09 distinguished involutions", start);
}

#[test]
fn acceptance_10_m_elements() {
    let start = Instant::now();
    for n in 2..=6usize {
        for i in 1..n {
            assert_eq!(m_element(n, &[i]).unwrap(), AffinePerm::omega_pow(n, i as i64));
        }
        for mask in 1u32..1 << (n - 1) {
            let subset: Vec<usize> = (1..n).filter(|&i| mask >> (i - 1) & 1 == 1).collect();
            let m = m_element(n, &subset).unwrap();
            let l = m.left_descents();
            let r = m.right_descents();
            assert_eq!(l, r, "n={n} subset={subset:?}");
            assert!(l.iter().all(|&s| s == 0), "n={n} subset={subset:?}");
        }
    }
    assert!(start.elapsed().as_secs() < 60);
    pass("10 m-elements", start);
}

#[test]
fn acceptance_11_factorization() {
    let start = Instant::now();
    let lambda: Partition = "2,1".parse().unwrap();
    let ctx = HeckeCtx::with_budget(3, 24);
    let members =
        affine_cells::basedring::enumerate_members(&lambda, 10, 3).unwrap();
    assert!(members.len() >= 40);
    for w in &members {
        let factors = factorize(w).unwrap();
        assert_eq!(factors.len(), 2);
        // predicted route sanity: the product of the factors is t_w
        let predicted = t_product(&factors[0], &factors[1]).unwrap();
        assert_eq!(predicted.terms().len(), 1);
        assert_eq!(predicted.coefficient(w.perm()), 1);
        // Hecke oracle: gamma_{w_1,w_2,v} = [v = w]
        let table = ctx.gamma_table(factors[0].perm(), factors[1].perm()).unwrap();
        let mut expect = BTreeMap::new();
        expect.insert(w.perm().clone(), 1i64);
        assert_eq!(table, expect, "w={}", w.perm());
    }
    assert!(start.elapsed().as_secs() < 600);
    pass("11 factorization", start);
}
