use std::collections::BTreeMap;

use super::*;
use crate::bar::xn_cohomology;
use crate::poly::{parse_polynomial, Monomial, Polynomial};
use crate::Rational;

type Ci = CompleteIntersection<Rational>;

fn ci(rels: &[&str], names: &[&str], weights: Option<&[u32]>) -> Ci {
    let vars: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let rs: Vec<Polynomial<Rational>> = rels.iter().map(|r| parse_polynomial(r, &vars).unwrap()).collect();
    match weights {
        Some(w) => Ci::with_weights(vars, rs, w.to_vec()).unwrap(),
        None => Ci::new(vars, rs).unwrap(),
    }
}

fn cusp() -> Ci {
    ci(&["y^2 - x^3"], &["x", "y"], None)
}

fn poly(c: &Ci, s: &str) -> Polynomial<Rational> {
    parse_polynomial(s, c.algebra().vars()).unwrap()
}

/// `dim A_D` for `A = Q[x,y]/(y^2 - x^3)`, weights 2 and 3, counted as
/// `x^a y^b` with `b <= 1`.
fn cusp_dim(d: i64) -> usize {
    (0..=1).filter(|b| d - 3 * b >= 0 && (d - 3 * b) % 2 == 0).count()
}

#[test]
fn differentials_square_to_zero() {
    let cases = [
        cusp(),
        ci(&["y^2 - x^2"], &["x", "y"], Some(&[1, 1])),
        ci(&["x^2", "y^3"], &["x", "y"], None),
        ci(&["z^4"], &["z"], None),
        ci(&["x^3 + y^3 + z^3"], &["x", "y", "z"], None),
    ];
    for c in &cases {
        let complexes = [koszul_resolution(c), hkr_cohomology_complex(c, 6), hkr_homology_complex(c, 6)];
        for cx in &complexes {
            assert!(cx.d_squared_is_zero());
            assert!(cx.respects_hodge());
            assert!(cx.respects_weights());
        }
    }
}

#[test]
fn koszul_resolution_is_acyclic() {
    for c in [cusp(), ci(&["x^2", "y^3"], &["x", "y"], Some(&[1, 1]))] {
        let cx = checked_koszul_resolution(&c, 20).unwrap();
        let table = graded_cohomology(&cx, 20).unwrap();
        assert!(table.degrees.iter().all(|e| e.p == 0), "{:?}", table.degrees);
        for d in 0..=20 {
            let expected = c.algebra().monomial_basis_of_degree(d as u64).unwrap().len();
            let got: usize = table.degrees.iter().filter(|e| e.internal == Some(d)).map(|e| e.dim).sum();
            assert_eq!(got, expected, "D={d}");
        }
    }
    let cx = koszul_resolution(&cusp());
    let table = graded_cohomology(&cx, 20).unwrap();
    for d in 0..=20 {
        assert_eq!(table.get(0, 0, d), cusp_dim(d));
    }
}

#[test]
fn regular_sequences() {
    let r = regular_sequence_check(&ci(&["x^2", "y^3"], &["x", "y"], None), 20).unwrap();
    assert!(r.regular && r.exact);
    let r = regular_sequence_check(&ci(&["x*y", "x"], &["x", "y"], Some(&[1, 1])), 20).unwrap();
    assert_eq!(r.failure, Some((2, 1)));
    let r = regular_sequence_check(&ci(&["x", "x"], &["x", "y"], Some(&[1, 1])), 20).unwrap();
    assert_eq!(r.failure, Some((2, 0)));
    let err = checked_koszul_resolution(&ci(&["x*y", "x"], &["x", "y"], Some(&[1, 1])), 20).unwrap_err();
    assert_eq!(err, crate::Error::NotRegularSequence { k: 2, degree: 1 });
}

#[test]
fn truncated_line_matches_bar_cochains() {
    for n in 2..=4u32 {
        let c = ci(&[&format!("z^{n}")], &["z"], None);
        let table = graded_cohomology(&hkr_cohomology_complex(&c, 4), 20).unwrap();
        let rows = xn_cohomology(n, 3).unwrap();
        for row in &rows {
            let p = row.p as i32;
            assert_eq!(table.total(p), row.dim, "n={n} p={p}");
            for (k, &dim) in row.hodge.iter().enumerate() {
                assert_eq!(table.hodge_total(p, k + 1), dim, "n={n} p={p} k={}", k + 1);
            }
            let mut by_weight = BTreeMap::new();
            for h in 0..=p as usize {
                for (d, x) in table.series(p, h) {
                    *by_weight.entry(d).or_insert(0) += x;
                }
            }
            assert_eq!(by_weight, row.by_weight, "n={n} p={p}");
        }
    }
}

#[test]
fn truncated_line_homology() {
    for k in 2..=5usize {
        let c = ci(&[&format!("z^{k}")], &["z"], None);
        let table = graded_cohomology(&hkr_homology_complex(&c, 6), 20).unwrap();
        // d(a^j) = j k z^{k-1} ξ a^{j-1}: HH_0 = A, every other HH_l has
        // dimension dim ker(z^{k-1}) = dim A/(z^{k-1}) = k - 1.
        assert_eq!(table.total(0), k);
        for l in 1..=6 {
            assert_eq!(table.total(-l), k - 1, "k={k} l={l}");
        }
    }
}

#[test]
fn cusp_harrison_and_tjurina() {
    let c = cusp();
    let h = harrison_1_2(&c, 20).unwrap();
    assert!(h.isolated && h.exact);
    let basis = h.cokernel_basis.clone().unwrap();
    let ones: Vec<(usize, Monomial)> = vec![(0, poly(&c, "1").leading_monomial(c.algebra().order()).unwrap().clone())];
    assert_eq!(basis.len(), 2);
    assert!(basis.contains(&ones[0]));
    assert!(basis.contains(&(0, poly(&c, "x").leading_monomial(c.algebra().order()).unwrap().clone())));
    assert_eq!(h.cokernel_series, BTreeMap::from([(-6, 1), (-4, 1)]));

    let t = graded_cohomology(&hkr_cohomology_complex(&c, 6), 20).unwrap();
    assert_eq!(t.series(1, 1), h.kernel_series);
    assert_eq!(t.series(2, 1), h.cokernel_series);
    for d in 0..=20 {
        assert_eq!(t.get(0, 0, d), cusp_dim(d));
    }
    let tj = tjurina_ideal(&c).unwrap();
    assert_eq!(tj.standard_monomials().unwrap().len(), 2);
}

#[test]
fn tjurina_numbers() {
    let cases: [(&str, &[u32], usize); 3] = [("y^2 - x^3", &[2, 3], 2), ("y^2 - x^2", &[1, 1], 1), ("y^2 - x^4", &[1, 2], 3)];
    for (f, w, mu) in cases {
        let c = ci(&[f], &["x", "y"], Some(w));
        let h = harrison_1_2(&c, 20).unwrap();
        assert_eq!(h.cokernel_dim(), Some(mu), "{f}");
        assert_eq!(tjurina_ideal(&c).unwrap().standard_monomials().unwrap().len(), mu, "{f}");
    }
    for k in 2..=6usize {
        let c = ci(&[&format!("z^{k}")], &["z"], None);
        assert_eq!(harrison_1_2(&c, 20).unwrap().cokernel_dim(), Some(k - 1));
    }
}

#[test]
fn non_isolated_curve() {
    let c = ci(&["x^2*y^3"], &["x", "y"], Some(&[1, 1]));
    let h = harrison_1_2(&c, 20).unwrap();
    assert!(!h.isolated);
    assert!(h.cokernel_basis.is_none());
    let block = periodic_block(&c, 2, 12).unwrap();
    assert_eq!(block.annihilator_contains(&poly(&c, "x*y")), Some(true));
    assert_eq!(block.annihilator_contains(&poly(&c, "x")), Some(false));
    assert_eq!(block.annihilator_contains(&poly(&c, "x^2*y")), Some(true));
}

#[test]
fn periodic_block_matches_cohomology_complex() {
    let cases = [cusp(), ci(&["y^2 - x^2"], &["x", "y"], Some(&[1, 1])), ci(&["y^2 - x^5"], &["x", "y"], None)];
    for c in &cases {
        let k_max = 2;
        let block = periodic_block(c, k_max, 20).unwrap();
        let t = graded_cohomology(&hkr_cohomology_complex(c, 2 * k_max as u32 + 2), 20).unwrap();
        for k in 1..=k_max {
            for p in 2 * k as i32..=2 * k as i32 + 2 {
                assert_eq!(block.table.series(p, k + 1), t.series(p, k + 1), "p={p} h={}", k + 1);
            }
        }
    }
}

#[test]
fn filtered_node() {
    let c = ci(&["y^2 - x^3 - x^2"], &["x", "y"], None);
    assert!(!c.is_graded());
    let h = harrison_1_2(&c, 12).unwrap();
    assert!(!h.exact);
    assert_eq!(h.cokernel_dim(), Some(1));
    let t = graded_cohomology(&hkr_cohomology_complex(&c, 3), 12).unwrap();
    assert!(!t.exact);
    assert_eq!(t.hodge_total(2, 1), 1);
    assert!(t.is_stable(2));
    let multi = ci(&["y^2 - x^3 - x^2", "x*y + y"], &["x", "y"], None);
    assert!(harrison_1_2(&multi, 12).is_err());
}

#[test]
fn filtered_node_matches_graded_node_above_degree_one() {
    let filtered = ci(&["y^2 - x^3 - x^2"], &["x", "y"], None);
    let graded = ci(&["y^2 - x^2"], &["x", "y"], Some(&[1, 1]));
    let tf = graded_cohomology(&hkr_cohomology_complex(&filtered, 5), 14).unwrap();
    let tg = graded_cohomology(&hkr_cohomology_complex(&graded, 5), 14).unwrap();
    for p in 2..=5 {
        for h in 1..=3 {
            assert_eq!(tf.hodge_total(p, h), tg.hodge_total(p, h), "p={p} h={h}");
        }
    }
}
