//! Cross-route validation: each check computes one invariant two ways, or
//! against a closed form, at sizes that finish in seconds.

use std::panic::{catch_unwind, AssertUnwindSafe};

use hochcurve::bar::{
    bar_differential, bgs_homology_dimensions, truncated_polynomial_algebra, xn_cohomology, ChainVector,
    StandardBasis,
};
use hochcurve::koszul::{
    checked_koszul_resolution, graded_cohomology, harrison_1_2, hkr_cohomology_complex, CompleteIntersection,
};
use hochcurve::poly::{parse_polynomial, QuotientAlgebra};
use hochcurve::starprod::{
    harr2_representatives, triviality_solve, verify_obstruction_vanishing, DeformedRelation, StarProduct,
    TrivialityOutcome,
};
use hochcurve::symgroup::{eulerian_idempotents, GroupAlgebraElement};
use hochcurve::{Algebra, Poly, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::Table;

type Outcome = Result<String, String>;
type Check = fn(usize, u64) -> Outcome;

fn xy() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn p(s: &str) -> Poly {
    parse_polynomial(s, &xy()).expect("check inputs parse")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn idempotent_laws(_: usize, _: u64) -> Outcome {
    for n in 2..=5 {
        let e = eulerian_idempotents::<Rational>(n).map_err(err)?;
        let mut sum = GroupAlgebraElement::zero(n);
        for (k, ek) in e.iter().enumerate() {
            sum = sum.add(ek);
            for (l, el) in e.iter().enumerate() {
                let prod = ek.mul(el);
                let ok = if k == l { prod == *ek } else { prod.is_zero() };
                if !ok {
                    return Err(format!("e_{n}({}) e_{n}({}) is wrong", k + 1, l + 1));
                }
            }
        }
        if sum != GroupAlgebraElement::identity(n) {
            return Err(format!("sum of e_{n}(k) is not the identity"));
        }
    }
    Ok("n = 2..5".into())
}

fn differential_commutes(samples: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cusp = QuotientAlgebra::new(xy(), vec![p("y^2 - x^3")]).map_err(err)?;
    let basis = StandardBasis::<Rational>::new(&cusp, 12, false).map_err(err)?;
    let idem: Vec<_> = (0..=4).map(|n| if n == 0 { vec![] } else { eulerian_idempotents::<Rational>(n).unwrap() }).collect();
    let mut tested = 0;
    for i in 0..samples {
        let len = 2 + i % 3;
        let d = rng.gen_range(2 * len as u64 + 1..=2 * len as u64 + 4);
        let tuples = basis.tuples(len, d, 1_000_000).map_err(err)?;
        if tuples.is_empty() {
            continue;
        }
        let c = ChainVector::from_terms((0..3).map(|_| {
            let t = &tuples[rng.gen_range(0..tuples.len())];
            (basis.to_monomials(t), Rational::from_integer(rng.gen_range(-4..=4).into()))
        }));
        for k in 1..len {
            let lhs = bar_differential(&cusp, &c.act(&idem[len][k - 1]).map_err(err)?);
            let rhs = bar_differential(&cusp, &c).act(&idem[len - 1][k - 1]).map_err(err)?;
            if lhs != rhs {
                return Err(format!("d e_{len}({k}) != e_{}({k}) d", len - 1));
            }
        }
        tested += 1;
    }
    Ok(format!("{tested} cusp chains"))
}

fn cusp_bar_homology(_: usize, _: u64) -> Outcome {
    let cusp: Algebra = QuotientAlgebra::with_weights(xy(), vec![p("y^2 - x^3")], vec![2, 3]).map_err(err)?;
    let h = bgs_homology_dimensions(&cusp, 3, 12).map_err(err)?;
    let split = |q: usize| (1..=q).map(|k| h.bgs_total(q, k).unwrap_or(0)).collect::<Vec<_>>();
    let got = (split(1), split(2), split(3));
    if got != (vec![2], vec![1, 1], vec![0, 2, 0]) {
        return Err(format!("H_1..H_3 split as {got:?}"));
    }
    Ok("H_1, H_2, H_3 split as 2 | 1+1 | 0+2+0".into())
}

fn truncated_line_routes(_: usize, _: u64) -> Outcome {
    for n in 2..=3u32 {
        let alg = truncated_polynomial_algebra(n).map_err(err)?;
        let c = CompleteIntersection::from_algebra(alg).map_err(err)?;
        let t = graded_cohomology(&hkr_cohomology_complex(&c, 4), 20).map_err(err)?;
        for row in xn_cohomology(n, 3).map_err(err)? {
            if t.total(row.p as i32) != row.dim {
                return Err(format!("z^{n}: H^{} is {} by cochains, {} by Koszul", row.p, row.dim, t.total(row.p as i32)));
            }
        }
    }
    Ok("z^2, z^3 for p <= 3".into())
}

fn harrison_routes(_: usize, _: u64) -> Outcome {
    for (rel, tjurina) in [("y^2 - x^3", 2usize), ("y^2 - x^2", 1), ("y^2 - x^4", 3)] {
        let r = p(rel);
        let reps = harr2_representatives(&xy(), &r, 20).map_err(err)?.dim();
        let c = CompleteIntersection::new(xy(), vec![r]).map_err(err)?;
        let coker = harrison_1_2(&c, 20).map_err(err)?.cokernel_dim();
        let t = graded_cohomology(&hkr_cohomology_complex(&c, 3), 20).map_err(err)?.hodge_total(2, 1);
        if (reps, coker, t) != (Some(tjurina), Some(tjurina), tjurina) {
            return Err(format!("{rel}: routes give {reps:?}, {coker:?}, {t}"));
        }
    }
    Ok("cusp, node, y^2 - x^4".into())
}

fn koszul_acyclic(_: usize, _: u64) -> Outcome {
    let c = CompleteIntersection::new(xy(), vec![p("y^2 - x^3")]).map_err(err)?;
    let t = graded_cohomology(&checked_koszul_resolution(&c, 20).map_err(err)?, 20).map_err(err)?;
    if t.degrees.iter().any(|e| e.p < 0) {
        return Err("negative cohomology".into());
    }
    Ok("cusp, internal degree <= 20".into())
}

fn star_products(samples: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q1 = p("2*x + 1");
    let sp = StarProduct::first_order(xy(), p("y^2 - x^3"), q1.clone(), 1).map_err(err)?;
    for _ in 0..samples {
        let (f, g) = (sp.random_element(&mut rng, 5), sp.random_element(&mut rng, 5));
        let want = &(&q1 * &f.coefficient_in(1, 1)) * &g.coefficient_in(1, 1);
        if sp.cochain(1, &f, &g).map_err(err)? != want {
            return Err("C_1 differs from the closed form".into());
        }
    }
    let rel = DeformedRelation::new(xy(), p("y^2 - x^3"), vec![q1, p("x*y - 3")], 2).map_err(err)?;
    verify_obstruction_vanishing(&StarProduct::new(rel), 2, samples, 4, seed).map_err(err)?;
    Ok(format!("{samples} C_1 samples, associativity to order 2"))
}

fn triviality(_: usize, _: u64) -> Outcome {
    match triviality_solve(&xy(), &p("y^2 - x^2 - 1"), &p("1"), None).map_err(err)? {
        TrivialityOutcome::Trivial(_) => {}
        other => return Err(format!("y^2 - x^2 - 1: {other:?}")),
    }
    match triviality_solve(&xy(), &p("y^2 - x^2"), &p("1"), None).map_err(err)? {
        TrivialityOutcome::Obstructed(_) => {}
        other => return Err(format!("y^2 - x^2: {other:?}")),
    }
    Ok("smooth conic trivial, node obstructed".into())
}

pub(crate) fn run_suite(samples: usize, seed: u64) -> Table {
    let checks: [(&str, Check); 8] = [
        ("idempotent laws", idempotent_laws),
        ("differential commutes with idempotents", differential_commutes),
        ("cusp bar homology Hodge split", cusp_bar_homology),
        ("z^n cochains vs Koszul", truncated_line_routes),
        ("Harrison H^2 three routes", harrison_routes),
        ("Koszul resolution acyclic", koszul_acyclic),
        ("star product cochains", star_products),
        ("triviality decisions", triviality),
    ];
    let mut t = Table::new("checks", &["check", "status", "detail"]);
    for (name, f) in checks {
        let outcome = catch_unwind(AssertUnwindSafe(|| f(samples, seed))).unwrap_or_else(|_| Err("panicked".into()));
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        t.push(vec![name.into(), status.into(), detail]);
    }
    t
}
