//! Acceptance suite: one PASS/FAIL line per criterion, with its time limit.
//! Runs without the libtest harness so the lines always reach stdout.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hochcurve::bar::{
    bar_differential, bgs_homology_dimensions, truncated_polynomial_algebra, xn_bgs_homology, xn_cohomology,
    ChainVector, Cochain, StandardBasis,
};
use hochcurve::koszul::{
    checked_koszul_resolution, graded_cohomology, harrison_1_2, hkr_cohomology_complex, hkr_homology_complex,
    periodic_block, CompleteIntersection,
};
use hochcurve::poly::{parse_polynomial, Monomial, QuotientAlgebra};
use hochcurve::starprod::{
    harr2_representatives, triviality_solve, verify_obstruction_vanishing, DeformedRelation, StarProduct,
    TrivialityOutcome,
};
use hochcurve::symgroup::{eulerian_idempotents, GroupAlgebraElement, Permutation};
use hochcurve::{Algebra, Poly, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn poly(s: &str, vars: &[String]) -> Poly {
    parse_polynomial(s, vars).unwrap()
}

fn algebra(rel: &str, vars: &[&str], weights: Option<&[u32]>) -> Algebra {
    let v = names(vars);
    let r = vec![poly(rel, &v)];
    match weights {
        Some(w) => QuotientAlgebra::with_weights(v, r, w.to_vec()).unwrap(),
        None => QuotientAlgebra::new(v, r).unwrap(),
    }
}

fn ci(rels: &[&str], vars: &[&str], weights: Option<&[u32]>) -> CompleteIntersection<Rational> {
    let v = names(vars);
    let r = rels.iter().map(|s| poly(s, &v)).collect();
    match weights {
        Some(w) => CompleteIntersection::with_weights(v, r, w.to_vec()).unwrap(),
        None => CompleteIntersection::new(v, r).unwrap(),
    }
}

fn element(n: usize, terms: &[(&str, i64, i64)]) -> GroupAlgebraElement<Rational> {
    GroupAlgebraElement::from_terms(n, terms.iter().map(|&(p, a, b)| (p.parse::<Permutation>().unwrap(), q(a, b))))
}

fn idempotent_suite() -> Outcome {
    for n in 2..=6 {
        let e = eulerian_idempotents::<Rational>(n).map_err(|e| e.to_string())?;
        let mut sum = GroupAlgebraElement::zero(n);
        for k in 0..n {
            sum = sum.add(&e[k]);
            for l in 0..n {
                let prod = e[k].mul(&e[l]);
                if k == l {
                    ensure!(prod == e[k], "e_{n}({}) is not idempotent", k + 1);
                } else {
                    ensure!(prod.is_zero(), "e_{n}({}) e_{n}({}) != 0", k + 1, l + 1);
                }
            }
        }
        ensure!(sum == GroupAlgebraElement::identity(n), "sum of e_{n}(k) is not the identity");
    }
    let e2 = eulerian_idempotents::<Rational>(2).unwrap();
    let e3 = eulerian_idempotents::<Rational>(3).unwrap();
    ensure!(e2[0] == element(2, &[("12", 1, 2), ("21", 1, 2)]), "e_2(1) differs from the printed formula");
    ensure!(
        e3[0] == element(3, &[("123", 1, 3), ("321", -1, 3), ("132", 1, 6), ("231", -1, 6), ("213", 1, 6), ("312", -1, 6)]),
        "e_3(1) differs from the printed formula"
    );
    ensure!(e3[1] == element(3, &[("123", 1, 2), ("321", 1, 2)]), "e_3(2) differs from the printed formula");
    let signed: Vec<(String, i64, i64)> =
        Permutation::all(3).iter().map(|p| (p.to_string(), p.sign(), 6)).collect();
    let signed: Vec<(&str, i64, i64)> = signed.iter().map(|(s, a, b)| (s.as_str(), *a, *b)).collect();
    ensure!(e3[2] == element(3, &signed), "e_3(3) differs from the printed formula");
    Ok(())
}

fn random_chain(rng: &mut ChaCha8Rng, tensors: &[Vec<Monomial>]) -> ChainVector<Rational> {
    ChainVector::from_terms((0..4).map(|_| (tensors[rng.gen_range(0..tensors.len())].clone(), q(rng.gen_range(-5..=5), 1))))
}

fn differential_compatibility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cusp = algebra("y^2 - x^3", &["x", "y"], None);
    let z3 = truncated_polynomial_algebra(3).unwrap();
    let cases: [(&Algebra, u64); 2] = [(&z3, 12), (&cusp, 16)];
    let idem: Vec<Vec<GroupAlgebraElement<Rational>>> =
        (0..=6).map(|n| if n == 0 { vec![] } else { eulerian_idempotents(n).unwrap() }).collect();
    let mut chains = 0;
    let mut cochains = 0;
    for (alg, degree_max) in cases {
        let basis = StandardBasis::<Rational>::new(alg, degree_max, false).map_err(|e| e.to_string())?;
        let slice = |p: usize, rng: &mut ChaCha8Rng| -> Vec<Vec<Monomial>> {
            let lo = p as u64 * if alg.nvars() == 1 { 1 } else { 2 };
            // Factors of z^3 have degree at most 2.
            let hi = if alg.nvars() == 1 { 2 * p as u64 } else { lo + 4 };
            let d = rng.gen_range(lo + 1..=hi.min(degree_max));
            basis.tuples(p, d, 1_000_000).unwrap().iter().map(|t| basis.to_monomials(t)).collect()
        };
        for p in 2..=5 {
            for _ in 0..13 {
                let tensors = slice(p, &mut rng);
                if tensors.is_empty() {
                    continue;
                }
                let c = random_chain(&mut rng, &tensors);
                chains += 1;
                for k in 1..p {
                    let lhs = bar_differential(alg, &c.act(&idem[p][k - 1]).unwrap());
                    let rhs = bar_differential(alg, &c).act(&idem[p - 1][k - 1]).unwrap();
                    ensure!(lhs == rhs, "d e_{p}({k}) != e_{}({k}) d on {:?}", p - 1, c);
                }
                ensure!(bar_differential(alg, &c.act(&idem[p][p - 1]).unwrap()).is_zero(), "d e_{p}({p}) != 0");
            }
        }
        for p in 1..=5 {
            for _ in 0..10 {
                let args = slice(p + 1, &mut rng);
                if args.is_empty() {
                    continue;
                }
                let d: u64 = args[0].iter().map(|m| alg.degree(m)).sum();
                let mut c = Cochain::zero(p);
                for t in basis.tuples(p, d, 1_000_000).unwrap() {
                    let value: Poly = alg
                        .monomial_basis_of_degree(rng.gen_range(0..=3))
                        .unwrap()
                        .into_iter()
                        .map(|m| Poly::term(m, q(rng.gen_range(-3..=3), 1)))
                        .fold(Poly::zero(alg.nvars()), |a, b| &a + &b);
                    c.set(basis.to_monomials(&t), value);
                }
                cochains += 1;
                for _ in 0..2 {
                    let arg = ChainVector::tensor(args[rng.gen_range(0..args.len())].clone(), q(1, 1));
                    for k in 1..=p {
                        let lhs = c.act(&idem[p][k - 1]).unwrap().coboundary_on(alg, &arg);
                        let rhs = c.coboundary_on(alg, &arg.act(&idem[p + 1][k - 1]).unwrap());
                        ensure!(lhs == rhs, "δ e_{p}({k}) != e_{}({k}) δ", p + 1);
                    }
                }
            }
        }
    }
    ensure!(chains >= 100 && cochains >= 100, "only {chains} chains and {cochains} cochains were sampled");
    Ok(())
}

fn plane_curve_homology() -> Outcome {
    let cusp = algebra("y^2 - x^3", &["x", "y"], Some(&[2, 3]));
    let node = algebra("u*v", &["u", "v"], Some(&[1, 1]));
    for (name, alg) in [("cusp", cusp), ("node", node)] {
        let h = bgs_homology_dimensions(&alg, 5, 15).map_err(|e| e.to_string())?;
        let split = |p: usize| (1..=p).map(|k| h.bgs_total(p, k).unwrap()).collect::<Vec<_>>();
        for k in 1..=2usize {
            let odd = 2 * k - 1;
            let mut want = vec![0; odd];
            want[k - 1] = 2;
            ensure!(split(odd) == want, "{name}: H_{odd} splits as {:?}", split(odd));
            let even = 2 * k;
            let mut want = vec![0; even];
            want[k - 1] = 1;
            want[k] = 1;
            ensure!(split(even) == want, "{name}: H_{even} splits as {:?}", split(even));
        }
        ensure!(split(5) == vec![0, 0, 2, 0, 0], "{name}: H_5 splits as {:?}", split(5));
        ensure!(h.bgs_total(2, 1) == Some(1), "{name}: Harr_2 != 1");
        ensure!(h.bgs_total(3, 1) == Some(0), "{name}: Harr_3 != 0");
    }
    Ok(())
}

fn truncated_line() -> Outcome {
    for n in 2..=4u32 {
        let rows = xn_cohomology(n, 4).map_err(|e| e.to_string())?;
        for row in &rows {
            let want = if row.p == 0 { n as usize } else { n as usize - 1 };
            ensure!(row.dim == want, "z^{n}: dim H^{} = {}", row.p, row.dim);
        }
        ensure!(rows.len() == 5, "z^{n}: {} cohomology rows", rows.len());
        let bar = xn_bgs_homology(n, 2).map_err(|e| e.to_string())?;
        for p in 1..=5usize {
            ensure!(bar.homology.total(p) == 1, "z^{n}: dim H_{p} = {}", bar.homology.total(p));
            let k = if p % 2 == 0 { p / 2 } else { p / 2 + 1 };
            ensure!(bar.homology.bgs_total(p, k) == Some(1), "z^{n}: H_{p} not in H_{{{p},{k}}}");
        }
    }
    Ok(())
}

fn koszul_route() -> Outcome {
    for k in 2..=3u32 {
        let c = ci(&[&format!("z^{k}")], &["z"], None);
        let t = graded_cohomology(&hkr_cohomology_complex(&c, 5), 20).map_err(|e| e.to_string())?;
        let rows = xn_cohomology(k, 4).map_err(|e| e.to_string())?;
        for row in &rows {
            ensure!(t.total(row.p as i32) == row.dim, "z^{k}: T̃ H^{} = {} vs {}", row.p, t.total(row.p as i32), row.dim);
        }
        let o = graded_cohomology(&hkr_homology_complex(&c, 5), 20).map_err(|e| e.to_string())?;
        ensure!(o.total(0) == k as usize, "z^{k}: HH_0 = {}", o.total(0));
        for l in 1..=4 {
            ensure!(o.total(-l) == k as usize - 1, "z^{k}: HH_{l} = {}", o.total(-l));
        }
    }
    Ok(())
}

fn plane_curve_cohomology() -> Outcome {
    for (name, rel, w, tjurina) in [("cusp", "y^2 - x^3", [2u32, 3], 2usize), ("node", "y^2 - x^2", [1, 1], 1)] {
        let c = ci(&[rel], &["x", "y"], Some(&w));
        let t = graded_cohomology(&hkr_cohomology_complex(&c, 7), 20).map_err(|e| e.to_string())?;
        let block = periodic_block(&c, 3, 20).map_err(|e| e.to_string())?;
        for k in 1..=3usize {
            let p = 2 * k as i32;
            ensure!(t.hodge_total(p, k) == tjurina, "{name}: H^{{{p},{k}}} = {}", t.hodge_total(p, k));
            ensure!(t.hodge_total(p, k + 1) == 0, "{name}: H^{{{p},{}}} = {}", k + 1, t.hodge_total(p, k + 1));
            ensure!(block.table.hodge_total(p, k + 1) == 0, "{name}: block annihilator slot nonzero at k={k}");
        }
    }
    let c = ci(&["x^2*y^3"], &["x", "y"], Some(&[1, 1]));
    let block = periodic_block(&c, 1, 12).map_err(|e| e.to_string())?;
    let xy = poly("x*y", &names(&["x", "y"]));
    ensure!(block.annihilator_contains(&xy) == Some(true), "x^2 y^3: xy not in the annihilator slot");
    Ok(())
}

fn star_products() -> Outcome {
    let v = names(&["x", "y"]);
    let p = |s: &str| poly(s, &v);
    let minus = |f: &Poly| f.coefficient_in(1, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..100 {
        let (a, b) = (q(rng.gen_range(-6..=6), rng.gen_range(1..=3)), q(rng.gen_range(-6..=6), rng.gen_range(1..=3)));
        let ax_b = &p("x").scale(&a) + &Poly::constant(2, b);
        let sp = StarProduct::first_order(v.clone(), p("y^2 - x^3"), ax_b.clone(), 1).map_err(|e| e.to_string())?;
        let f = sp.random_element(&mut rng, 6);
        let g = sp.random_element(&mut rng, 6);
        let c1 = sp.cochain(1, &f, &g).map_err(|e| e.to_string())?;
        ensure!(c1 == &(&ax_b * &minus(&f)) * &minus(&g), "C_1 != (ax+b) f_- g_-");
    }
    let quotient = |r: &Poly| QuotientAlgebra::new(v.clone(), vec![r.clone()]).unwrap();
    let smooth = p("y^2 - x^2 - 1");
    match triviality_solve(&v, &smooth, &p("1"), None).map_err(|e| e.to_string())? {
        TrivialityOutcome::Trivial(e) => {
            ensure!(quotient(&smooth).normal_form(&(&e.apply(&smooth) - &p("1"))).is_zero(), "witness fails substitution")
        }
        other => return Err(format!("r^2 = 1: expected a witness, got {other:?}")),
    }
    match triviality_solve(&v, &p("y^2 - x^2"), &p("1"), None).map_err(|e| e.to_string())? {
        TrivialityOutcome::Obstructed(c) => ensure!(!c.class.is_zero(), "empty obstruction certificate"),
        other => return Err(format!("r^2 = 0: expected an obstruction, got {other:?}")),
    }
    let rel = DeformedRelation::new(v.clone(), p("y^2 - x^3"), vec![p("2*x + 1"), p("x*y - 3"), p("y + x^2")], 3)
        .map_err(|e| e.to_string())?;
    verify_obstruction_vanishing(&StarProduct::new(rel), 3, 100, 5, 23).map_err(|e| e.to_string())?;
    Ok(())
}

fn harrison_routes() -> Outcome {
    let v = names(&["x", "y"]);
    for (rel, golden) in [("y^2 - x^3", 2usize), ("y^2 - x^2", 1), ("y^2 - x^4", 3)] {
        let reps = harr2_representatives(&v, &poly(rel, &v), 20).map_err(|e| e.to_string())?;
        let c = ci(&[rel], &["x", "y"], None);
        let coker = harrison_1_2(&c, 20).map_err(|e| e.to_string())?.cokernel_dim();
        let t = graded_cohomology(&hkr_cohomology_complex(&c, 3), 20).map_err(|e| e.to_string())?;
        let routes = (reps.dim(), coker, t.hodge_total(2, 1));
        ensure!(routes == (Some(golden), Some(golden), golden), "{rel}: routes give {routes:?}, golden {golden}");
    }
    Ok(())
}

fn koszul_acyclicity() -> Outcome {
    // dim A_D by direct counting of the monomial bases.
    let cusp_dim = |d: i64| (0..=1).filter(|b| d - 3 * b >= 0 && (d - 3 * b) % 2 == 0).count();
    let box_dim = |d: i64| (0..2).filter(|a| (0..3).contains(&(d - a))).count();
    let cases: [(CompleteIntersection<Rational>, &dyn Fn(i64) -> usize); 2] = [
        (ci(&["y^2 - x^3"], &["x", "y"], None), &cusp_dim),
        (ci(&["x^2", "y^3"], &["x", "y"], Some(&[1, 1])), &box_dim),
    ];
    for (c, dim) in cases {
        let cx = checked_koszul_resolution(&c, 20).map_err(|e| e.to_string())?;
        let t = graded_cohomology(&cx, 20).map_err(|e| e.to_string())?;
        let negative: Vec<_> = t.degrees.iter().filter(|e| e.p < 0).collect();
        ensure!(negative.is_empty(), "H^{{<0}} != 0: {negative:?}");
        let h0: BTreeMap<i64, usize> = t.series(0, 0);
        for d in 0..=20 {
            let got = h0.get(&d).copied().unwrap_or(0);
            ensure!(got == dim(d), "H^0 in degree {d}: {got} vs {}", dim(d));
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("Eulerian idempotents n = 2..6", 10, idempotent_suite),
        ("differentials commute with idempotents", 30, differential_compatibility),
        ("plane-curve bar homology and Hodge split", 300, plane_curve_homology),
        ("z^n cochain cohomology and bar homology", 300, truncated_line),
        ("Koszul route agrees with bar cochains", 60, koszul_route),
        ("plane-curve Hodge columns and annihilator", 120, plane_curve_cohomology),
        ("star products, triviality, associativity", 60, star_products),
        ("Harrison-2 across three routes", 600, harrison_routes),
        ("Koszul resolution is acyclic", 60, koszul_acyclicity),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(())
            } else {
                Err(format!("took {elapsed:.1?}, limit {limit} s"))
            }
        });
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
