use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::koszul::{harrison_1_2, CompleteIntersection};
use crate::poly::{parse_polynomial, QuotientAlgebra};
use crate::Rational;

fn xy() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn p(s: &str) -> Polynomial<Rational> {
    parse_polynomial(s, &xy()).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `f_-`: the coefficient of `y` in a normal form of `y`-degree < 2.
fn minus(f: &Polynomial<Rational>) -> Polynomial<Rational> {
    f.coefficient_in(1, 1)
}

fn cusp_product(a: Rational, b: Rational, order: usize) -> StarProduct<Rational> {
    let q1 = &p("x").scale(&a) + &Polynomial::constant(2, b);
    StarProduct::first_order(xy(), p("y^2 - x^3"), q1, order).unwrap()
}

#[test]
fn cusp_relation_deforms_y_squared() {
    let sp = cusp_product(q(2, 1), q(-3, 1), 3);
    let yy = sp.star_multiply(&p("y"), &p("y")).unwrap();
    assert_eq!(yy.coeffs, vec![p("x^3"), p("2*x - 3"), p("0"), p("0")]);
}

#[test]
fn cusp_first_cochain_is_product_of_odd_parts() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..20 {
        let a = q(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let b = q(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let sp = cusp_product(a.clone(), b.clone(), 2);
        let ax_b = &p("x").scale(&a) + &Polynomial::constant(2, b);
        for _ in 0..5 {
            let f = sp.random_element(&mut rng, 6);
            let g = sp.random_element(&mut rng, 6);
            let series = sp.star_multiply(&f, &g).unwrap();
            assert_eq!(series.coeffs[1], &(&ax_b * &minus(&f)) * &minus(&g));
            assert!(series.coeffs[2].is_zero());
            assert_eq!(series.coeffs[0], sp.reduce(&(&f * &g)));
        }
    }
}

#[test]
fn hyperbola_product() {
    for r2 in [0, 1] {
        let rel = &p("y^2 - x^2") - &Polynomial::constant(2, q(r2, 1));
        let sp = StarProduct::first_order(xy(), rel, p("1"), 1).unwrap();
        assert_eq!(sp.cochain(1, &p("y"), &p("y")).unwrap(), p("1"));
        assert!(sp.c1_coboundary(&p("y"), &p("y"), &p("y")).unwrap().is_zero());
        assert!(sp.associativity_defect(1, &p("y"), &p("y"), &p("y")).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..20 {
            let f = sp.random_element(&mut rng, 4);
            let g = sp.random_element(&mut rng, 4);
            assert_eq!(sp.cochain(1, &f, &g).unwrap(), &minus(&f) * &minus(&g));
        }
    }
}

#[test]
fn cochains_vanish_against_x() {
    let sp = cusp_product(q(1, 1), q(1, 1), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert!(sp.cochain(1, &p("x"), &p("x")).unwrap().is_zero());
    for _ in 0..10 {
        let g = sp.random_element(&mut rng, 5);
        assert!(sp.cochain(1, &p("x"), &g).unwrap().is_zero());
    }
    let table = sp.first_order_cochain(3).unwrap();
    for ((a, b), c) in &table {
        assert_eq!(table.get(&(b.clone(), a.clone())), Some(c));
    }
    let y = Monomial::from_exponents(vec![0, 1]);
    assert_eq!(table[&(y.clone(), y)], p("x + 1"));
}

#[test]
fn higher_order_products_commute_and_associate() {
    let rel = DeformedRelation::new(xy(), p("y^3 - x^2"), vec![p("x*y"), p("y^2 + 1"), p("x^2")], 3).unwrap();
    let sp = StarProduct::new(rel);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let f = sp.random_element(&mut rng, 4);
        let g = sp.random_element(&mut rng, 4);
        assert_eq!(sp.star_multiply(&f, &g).unwrap(), sp.star_multiply(&g, &f).unwrap());
    }
    verify_obstruction_vanishing(&sp, 3, 30, 4, 11).unwrap();
    let first = sp.star_multiply(&p("y"), &p("y^2")).unwrap();
    assert_eq!(first.coeffs, vec![p("x^2"), p("x*y"), p("y^2 + 1"), p("x^2")]);
}

#[test]
fn series_product_is_associative() {
    let sp = cusp_product(q(1, 1), q(0, 1), 3);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut series = || HbarSeries { coeffs: (0..4).map(|_| sp.random_element(&mut rng, 3)).collect() };
    let (a, b, c) = (series(), series(), series());
    let left = sp.multiply_series(&sp.multiply_series(&a, &b).unwrap(), &c).unwrap();
    let right = sp.multiply_series(&a, &sp.multiply_series(&b, &c).unwrap()).unwrap();
    assert_eq!(left, right);
}

#[test]
fn cusp_associativity_and_fault_injection() {
    let sp = cusp_product(q(1, 1), q(0, 1), 2);
    verify_obstruction_vanishing(&sp, 2, 100, 5, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let (f, g, h) = (sp.random_element(&mut rng, 5), sp.random_element(&mut rng, 5), sp.random_element(&mut rng, 5));
        assert!(sp.c1_coboundary(&f, &g, &h).unwrap().is_zero());
    }
    assert!(sp.c1_coboundary(&p("x"), &p("y"), &p("y")).unwrap().is_zero());
    let broken = sp.with_fault(q(1, 1));
    match verify_obstruction_vanishing(&broken, 2, 100, 5, 1) {
        Err(crate::Error::AssociativityFailure { order, .. }) => assert_eq!(order, 2),
        other => panic!("expected a failure, got {other:?}"),
    }
}

#[test]
fn rejects_bad_input() {
    assert!(matches!(
        StarProduct::first_order(xy(), p("x*y - 1"), p("1"), 1),
        Err(crate::Error::NotMonic { .. })
    ));
    assert!(matches!(
        DeformedRelation::new(xy(), p("y^2 - x^3"), vec![p("y^2")], 1),
        Err(crate::Error::NotNormalForm { .. })
    ));
    let sp = cusp_product(q(1, 1), q(1, 1), 1);
    assert!(sp.star_multiply(&p("y^2"), &p("x")).is_err());
    assert!(sp.cochain(2, &p("x"), &p("y")).is_err());
    let rel = DeformedRelation::new(xy(), p("2*y^2 - x^3"), vec![], 1).unwrap();
    assert_eq!(rel.relation(), &p("y^2 - 1/2*x^3"));
}

fn substitutes(r: &Polynomial<Rational>, q1: &Polynomial<Rational>, e: &DerivationCandidate<Rational>) -> bool {
    let a = QuotientAlgebra::new(xy(), vec![r.clone()]).unwrap();
    a.normal_form(&(&e.apply(r) - q1)).is_zero()
}

#[test]
fn triviality_examples() {
    let conic = p("y^2 - x^2 - 1");
    let printed = DerivationCandidate { components: vec![p("1/2*x"), p("1/2*y")] };
    assert!(substitutes(&conic, &p("1"), &printed));
    match triviality_solve(&xy(), &conic, &p("1"), None).unwrap() {
        TrivialityOutcome::Trivial(e) => assert!(substitutes(&conic, &p("1"), &e)),
        other => panic!("{other:?}"),
    }
    match triviality_solve(&xy(), &p("y^2 - x^2"), &p("1"), None).unwrap() {
        TrivialityOutcome::Obstructed(c) => {
            assert_eq!(c.class, p("1"));
            assert_eq!(c.tjurina_basis.map(|b| b.len()), Some(1));
        }
        other => panic!("{other:?}"),
    }
    let cusp = p("y^2 - x^3");
    assert!(substitutes(&cusp, &p("x^3"), &DerivationCandidate { components: vec![p("-1/3*x"), p("0")] }));
    match triviality_solve(&xy(), &cusp, &p("x^3"), None).unwrap() {
        TrivialityOutcome::Trivial(e) => assert!(substitutes(&cusp, &p("x^3"), &e)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        triviality_solve(&xy(), &cusp, &p("x + 2"), None).unwrap(),
        TrivialityOutcome::Obstructed(_)
    ));
}

#[test]
fn first_order_classes_are_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let sp = cusp_product(q(1, 1), q(1, 1), 1);
    for r in [p("y^2 - x^3"), p("y^2 - x^2"), p("y^2 - x^4 - x")] {
        for _ in 0..5 {
            let e = DerivationCandidate { components: vec![sp.random_element(&mut rng, 2), sp.random_element(&mut rng, 2)] };
            let shift = e.apply(&r);
            match triviality_solve(&xy(), &r, &shift, None).unwrap() {
                TrivialityOutcome::Trivial(w) => assert!(substitutes(&r, &shift, &w)),
                other => panic!("{other:?}"),
            }
        }
    }
}

#[test]
fn representatives_match_koszul_cokernel() {
    let cases = [("y^2 - x^3", 2), ("y^2 - x^2", 1), ("y^2 - x^4", 3)];
    for (r, dim) in cases {
        let reps = harr2_representatives(&xy(), &p(r), 12).unwrap();
        assert_eq!(reps.dim(), Some(dim), "{r}");
        let ci = CompleteIntersection::new(xy(), vec![p(r)]).unwrap();
        let h = harrison_1_2(&ci, 20).unwrap();
        let mut from_koszul: Vec<Monomial> = h.cokernel_basis.unwrap().into_iter().map(|(_, m)| m).collect();
        let mut from_tjurina = reps.basis.unwrap();
        from_koszul.sort();
        from_tjurina.sort();
        assert_eq!(from_koszul, from_tjurina, "{r}");
    }
    let cusp = harr2_representatives(&xy(), &p("y^2 - x^3"), 12).unwrap();
    assert_eq!(cusp.basis.unwrap(), vec![Monomial::from_exponents(vec![0, 0]), Monomial::from_exponents(vec![1, 0])]);
    let smooth = harr2_representatives(&xy(), &p("y^2 - x^2 - 1"), 12).unwrap();
    assert_eq!(smooth.dim(), Some(0));
    let non_isolated = harr2_representatives(&xy(), &p("x^2*y^3"), 12).unwrap();
    assert!(non_isolated.basis.is_none());
    assert!(non_isolated.hilbert.values().sum::<usize>() > 12);
}

#[test]
fn miniversal_families() {
    let names = |n: usize| {
        let mut v = xy();
        v.extend((1..=n).map(|k| format!("t{k}")));
        v
    };
    let cases = [("y^2 - x^3", "y^2 - x^3 - t1 - t2*x", 2), ("y^2 - x^2", "y^2 - x^2 - t1", 1), ("y^2 - x^2 - 1", "y^2 - x^2 - 1", 0)];
    for (r, expected, n) in cases {
        let ci = CompleteIntersection::new(xy(), vec![p(r)]).unwrap();
        let fam = miniversal_family(&ci).unwrap();
        assert_eq!(fam.params.len(), n);
        assert_eq!(fam.generators, vec![parse_polynomial(expected, &names(n)).unwrap()], "{r}");
    }
    let ci = CompleteIntersection::new(xy(), vec![p("x^2*y^3")]).unwrap();
    assert_eq!(miniversal_family(&ci).unwrap_err(), crate::Error::NotIsolated);
}
