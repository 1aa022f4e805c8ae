use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::poly::{parse_polynomial, Polynomial, QuotientAlgebra};
use crate::symgroup::eulerian_idempotents;

type A = QuotientAlgebra<Rational>;

fn plane(rel: &str, names: [&str; 2]) -> A {
    let vars: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let r = parse_polynomial(rel, &vars).unwrap();
    A::new(vars, vec![r]).unwrap()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn chain(alg: &A, factors: &[&str]) -> ChainVector<Rational> {
    let fs: Vec<Polynomial<Rational>> = factors.iter().map(|f| parse_polynomial(f, alg.vars()).unwrap()).collect();
    ChainVector::from_factors(alg, &fs).unwrap()
}

fn random_chain(rng: &mut ChaCha8Rng, tensors: &[Vec<Monomial>]) -> ChainVector<Rational> {
    ChainVector::from_terms((0..4).map(|_| {
        let t = tensors[rng.gen_range(0..tensors.len())].clone();
        (t, q(rng.gen_range(-5..=5)))
    }))
}

#[test]
fn cusp_totals_and_hodge_split() {
    let a = plane("y^2 - x^3", ["x", "y"]);
    let h = bgs_homology_dimensions(&a, 3, 12).unwrap();
    for p in 1..=3 {
        assert_eq!(h.total(p), 2, "p={p}");
    }
    assert_eq!(h.bgs_total(1, 1), Some(2));
    assert_eq!((h.bgs_total(2, 1), h.bgs_total(2, 2)), (Some(1), Some(1)));
    assert_eq!(
        (h.bgs_total(3, 1), h.bgs_total(3, 2), h.bgs_total(3, 3)),
        (Some(0), Some(2), Some(0))
    );
}

#[test]
fn node_hodge_split() {
    let a = plane("y^2 - x^2", ["x", "y"]);
    let h = bgs_homology_dimensions(&a, 4, 7).unwrap();
    assert_eq!((1..=3).map(|k| h.bgs_total(3, k).unwrap()).collect::<Vec<_>>(), vec![0, 2, 0]);
    assert_eq!((h.bgs_total(4, 2), h.bgs_total(4, 3)), (Some(1), Some(1)));
    assert_eq!(h.total(4), 2);
}

#[test]
fn bar_differential_commutes_with_idempotents() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cusp = plane("y^2 - x^3", ["x", "y"]);
    let z3 = truncated_polynomial_algebra(3).unwrap();
    for (alg, degree) in [(&cusp, 13u64), (&z3, 8)] {
        let complex = BarComplex::new(alg, 5, degree).unwrap();
        for p in 2..=5 {
            let tensors = complex.slice_tensors(p, if alg.nvars() == 1 { p as u64 + 2 } else { degree });
            let e = eulerian_idempotents::<Rational>(p).unwrap();
            let e_low = eulerian_idempotents::<Rational>(p - 1).unwrap();
            for _ in 0..5 {
                let c = random_chain(&mut rng, &tensors);
                for k in 1..p {
                    let lhs = bar_differential(alg, &c.act(&e[k - 1]).unwrap());
                    let rhs = bar_differential(alg, &c).act(&e_low[k - 1]).unwrap();
                    assert_eq!(lhs, rhs, "p={p} k={k}");
                }
                assert!(bar_differential(alg, &c.act(&e[p - 1]).unwrap()).is_zero());
            }
        }
    }
}

#[test]
fn coboundary_commutes_with_idempotents() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let z3 = truncated_polynomial_algebra(3).unwrap();
    let complex = BarComplex::new(&z3, 5, 12).unwrap();
    let values = [
        Polynomial::one(1),
        Polynomial::var(1, 0),
        Polynomial::var(1, 0).pow(2),
    ];
    for p in 1..=4 {
        let mut c = Cochain::zero(p);
        for d in p as u64..=2 * p as u64 {
            for t in complex.slice_tensors(p, d) {
                let v = &values[rng.gen_range(0..3)];
                c.set(t, v.scale(&q(rng.gen_range(-3..=3))));
            }
        }
        let e = eulerian_idempotents::<Rational>(p).unwrap();
        let e_up = eulerian_idempotents::<Rational>(p + 1).unwrap();
        for d in p as u64 + 1..=2 * (p as u64 + 1) {
            for t in complex.slice_tensors(p + 1, d).into_iter().take(6) {
                let arg = ChainVector::tensor(t, q(1));
                for k in 1..=p {
                    let lhs = c.act(&e[k - 1]).unwrap().coboundary_on(&z3, &arg);
                    let rhs = c.coboundary_on(&z3, &arg.act(&e_up[k - 1]).unwrap());
                    assert_eq!(lhs, rhs, "p={p} k={k}");
                }
            }
        }
    }
}

#[test]
fn truncated_cohomology() {
    for n in 2..=3u32 {
        let rows = xn_cohomology(n, 3).unwrap();
        assert_eq!(rows[0].dim, n as usize);
        for row in &rows[1..] {
            assert_eq!(row.dim, n as usize - 1, "n={n} p={}", row.p);
            assert_eq!(row.hodge.iter().sum::<usize>(), row.dim);
        }
    }
}

#[test]
fn truncated_bar_homology() {
    let h = xn_bgs_homology(3, 1).unwrap();
    for p in 1..=3 {
        assert_eq!(h.homology.total(p), 1);
    }
    assert_eq!(h.homology.bgs_total(2, 1), Some(1));
    assert_eq!(h.homology.bgs_total(3, 2), Some(1));
    assert!(h.canonical_classes.iter().all(|(_, ok)| *ok));
}

#[test]
fn cusp_three_cycles_match_printed_basis() {
    let a = plane("y^2 - x^3", ["x", "y"]);
    let complex = BarComplex::new(&a, 3, 12).unwrap();
    let e32 = &eulerian_idempotents::<Rational>(3).unwrap()[1];
    let alpha1 = chain(&a, &["y", "x", "y"])
        .sub(&chain(&a, &["x", "y", "y"]))
        .sub(&chain(&a, &["y", "y", "x"]))
        .add(&chain(&a, &["x", "x^2", "x"]));
    let alpha2 = chain(&a, &["x", "y", "x^2"])
        .sub(&chain(&a, &["y", "x^2", "x"]))
        .sub(&chain(&a, &["x^2", "x", "y"]))
        .add(&chain(&a, &["y", "y", "y"]))
        .act(e32)
        .unwrap();
    let [p1, p2] = cycle_basis_pn(&a, 3).unwrap();
    assert_eq!(complex.homology_rank(&[alpha1.clone(), alpha2.clone()]).unwrap(), 2);
    assert_eq!(complex.homology_rank(&[p1.clone(), p2.clone()]).unwrap(), 2);
    assert_eq!(complex.homology_rank(&[alpha1, alpha2, p1, p2]).unwrap(), 2);
}

#[test]
fn symmetric_two_cycle_generates_harrison() {
    // x ⊗ x^2 + x^2 ⊗ x - 2 y ⊗ y for y^2 - x^3
    let a = plane("y^2 - x^3", ["x", "y"]);
    let complex = BarComplex::new(&a, 2, 8).unwrap();
    let c = chain(&a, &["x", "x^2"]).add(&chain(&a, &["x^2", "x"])).sub(&chain(&a, &["y", "y"]).scale(&q(2)));
    assert_eq!(complex.homology_rank(&[c.clone()]).unwrap(), 1);
    let e21 = &eulerian_idempotents::<Rational>(2).unwrap()[0];
    assert_eq!(c.act(e21).unwrap(), c);
}

#[test]
fn non_cycles_are_rejected() {
    let a = plane("y^2 - x^3", ["x", "y"]);
    let complex = BarComplex::new(&a, 2, 8).unwrap();
    assert!(complex.homology_rank(&[chain(&a, &["x", "y"])]).is_err());
}

#[test]
fn slice_cap_is_enforced() {
    let a = plane("y^2 - x^2", ["x", "y"]);
    let r = BarComplex::with_caps(&a, 3, 10, 100, 7);
    assert!(matches!(r, Err(crate::Error::ResourceLimit { .. })));
}

#[test]
fn ungraded_input_is_refused() {
    let a = plane("y^2 - x^2 - 1", ["x", "y"]);
    assert!(matches!(homology_dimensions(&a, 2, 5), Err(crate::Error::NotGraded)));
}
