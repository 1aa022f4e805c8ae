use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::groebner::{groebner_basis, reduce, DEFAULT_TERM_CAP};
use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Field;
use crate::Rational;

/// `P / (f_1, ..., f_m)` together with a Gröbner basis and grading data.
///
/// `weights` are the positive weights of the monomial order. When every
/// relation is homogeneous for them the algebra is *graded* and each
/// weighted-degree slice is finite-dimensional; `lattice` then holds a
/// basis of all integer gradings making the relations homogeneous, which
/// may refine the weighted degree (e.g. `u*v` is bigraded).
#[derive(Clone, Debug)]
pub struct QuotientAlgebra<F> {
    vars: Vec<String>,
    relations: Vec<Polynomial<F>>,
    order: MonomialOrder,
    groebner: Vec<Polynomial<F>>,
    weights: Vec<u32>,
    graded: bool,
    lattice: Vec<Vec<i64>>,
}

impl<F: Field> QuotientAlgebra<F> {
    /// Builds the quotient, inferring weights when the relations are
    /// quasi-homogeneous (all-ones is preferred when it works).
    pub fn new(vars: Vec<String>, relations: Vec<Polynomial<F>>) -> Result<Self> {
        let (lattice, weights) = infer_grading(vars.len(), &relations);
        match weights {
            Some(w) => Self::build(vars, relations, w, true, lattice),
            None => {
                let n = vars.len();
                Self::build(vars, relations, vec![1; n], false, vec![])
            }
        }
    }

    /// Builds the quotient with explicit order weights.
    pub fn with_weights(vars: Vec<String>, relations: Vec<Polynomial<F>>, weights: Vec<u32>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::NonPositiveWeight { var: vars[i].clone() });
        }
        let graded = relations.iter().all(|r| r.is_homogeneous(&weights));
        let lattice = if graded {
            infer_grading(vars.len(), &relations).0
        } else {
            vec![]
        };
        Self::build(vars, relations, weights, graded, lattice)
    }

    pub fn polynomial_ring(vars: Vec<String>, weights: Vec<u32>) -> Result<Self> {
        Self::with_weights(vars, vec![], weights)
    }

    fn build(
        vars: Vec<String>,
        relations: Vec<Polynomial<F>>,
        weights: Vec<u32>,
        graded: bool,
        lattice: Vec<Vec<i64>>,
    ) -> Result<Self> {
        for r in &relations {
            assert_eq!(r.nvars(), vars.len(), "relation over wrong variable count");
        }
        let order = MonomialOrder::WeightedGrevlex(weights.clone());
        let groebner = groebner_basis(&relations, &order, DEFAULT_TERM_CAP)?;
        Ok(QuotientAlgebra {
            vars,
            relations,
            order,
            groebner,
            weights,
            graded,
            lattice,
        })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn relations(&self) -> &[Polynomial<F>] {
        &self.relations
    }

    pub fn groebner(&self) -> &[Polynomial<F>] {
        &self.groebner
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn lattice(&self) -> &[Vec<i64>] {
        &self.lattice
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn degree(&self, m: &Monomial) -> u64 {
        m.weighted_degree(&self.weights)
    }

    /// Key for the finest available grading: equal keys imply equal degree
    /// under every grading that makes the relations homogeneous.
    pub fn multidegree(&self, m: &Monomial) -> Vec<i64> {
        if self.lattice.is_empty() {
            vec![self.degree(m) as i64]
        } else {
            self.lattice.iter().map(|g| m.grade(g)).collect()
        }
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Polynomial<F> {
        reduce(f, &self.groebner, &self.order)
    }

    pub fn contains(&self, f: &Polynomial<F>) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self
            .groebner
            .iter()
            .any(|g| g.leading_monomial(&self.order).unwrap().divides(m))
    }

    pub fn is_normal_form(&self, f: &Polynomial<F>) -> bool {
        f.terms().all(|(m, _)| self.is_standard(m))
    }

    pub fn mul(&self, a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
        self.normal_form(&(a * b))
    }

    /// Standard monomials of weighted degree exactly `d`.
    pub fn monomial_basis_of_degree(&self, d: u64) -> Result<Vec<Monomial>> {
        if let Some(i) = self.weights.iter().position(|&w| w == 0) {
            return Err(Error::NonPositiveWeight { var: self.vars[i].clone() });
        }
        let mut out = Vec::new();
        monomials_of_degree(&self.weights, d, &mut |m| {
            if self.is_standard(&m) {
                out.push(m);
            }
        });
        out.sort();
        Ok(out)
    }

    /// Zero-dimensional test: every variable has a pure power among the
    /// leading monomials.
    pub fn is_finite_dimensional(&self) -> bool {
        (0..self.nvars()).all(|i| {
            self.groebner.iter().any(|g| {
                let m = g.leading_monomial(&self.order).unwrap();
                m.is_pure_power_of(i)
            })
        })
    }

    /// All standard monomials when the quotient is finite-dimensional.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        if !self.is_finite_dimensional() {
            return None;
        }
        let bounds: Vec<u32> = (0..self.nvars())
            .map(|i| {
                self.groebner
                    .iter()
                    .filter_map(|g| {
                        let m = g.leading_monomial(&self.order).unwrap();
                        m.is_pure_power_of(i).then(|| m.exponent(i))
                    })
                    .min()
                    .unwrap()
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars()];
        box_monomials(&bounds, 0, &mut cur, &mut |m| {
            if self.is_standard(&m) {
                out.push(m);
            }
        });
        out.sort_by(|a, b| self.order.cmp(a, b));
        Some(out)
    }

    /// Splits `f` by powers of the variable `y` in which the (single)
    /// relation is monic of degree `n`: `f = sum_j y^j * c_j` with each
    /// `c_j` free of `y`.
    pub fn y_split(&self, f: &Polynomial<F>, y: usize) -> Result<Vec<Polynomial<F>>> {
        let n = self.monic_degree_in(y)?;
        if let Some(e) = f.degree_in(y) {
            if e >= n {
                return Err(Error::NotNormalForm {
                    reason: format!("{}-degree {} is not below {}", self.vars[y], e, n),
                });
            }
        }
        Ok((0..n).map(|j| f.coefficient_in(y, j)).collect())
    }

    /// Degree `n` of the relation in `y`, checking it is monic there.
    pub fn monic_degree_in(&self, y: usize) -> Result<u32> {
        let not_monic = || Error::NotMonic { var: self.vars[y].clone() };
        let [r] = self.relations.as_slice() else {
            return Err(not_monic());
        };
        let n = r.degree_in(y).ok_or_else(not_monic)?;
        if n == 0 || !r.coefficient_in(y, n).is_constant() {
            return Err(not_monic());
        }
        Ok(n)
    }
}

/// Calls `f` on every monomial of weighted degree `d`.
pub fn monomials_of_degree(weights: &[u32], d: u64, f: &mut impl FnMut(Monomial)) {
    fn rec(weights: &[u32], i: usize, left: u64, cur: &mut Vec<u32>, f: &mut impl FnMut(Monomial)) {
        if i == weights.len() {
            if left == 0 {
                f(Monomial::from_exponents(cur.clone()));
            }
            return;
        }
        let w = weights[i] as u64;
        let mut e = 0;
        while e * w <= left {
            cur[i] = e as u32;
            rec(weights, i + 1, left - e * w, cur, f);
            e += 1;
        }
        cur[i] = 0;
    }
    let mut cur = vec![0; weights.len()];
    rec(weights, 0, d, &mut cur, f);
}

fn box_monomials(bounds: &[u32], i: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(Monomial)) {
    if i == bounds.len() {
        f(Monomial::from_exponents(cur.clone()));
        return;
    }
    for e in 0..bounds[i] {
        cur[i] = e;
        box_monomials(bounds, i + 1, cur, f);
    }
    cur[i] = 0;
}

/// Integer gradings making every relation homogeneous, and a positive weight
/// vector among them if one exists.
pub fn infer_grading<F: Field>(nvars: usize, relations: &[Polynomial<F>]) -> (Vec<Vec<i64>>, Option<Vec<u32>>) {
    let mut diffs: Vec<Vec<Rational>> = Vec::new();
    for r in relations {
        let ms: Vec<&Monomial> = r.terms().map(|(m, _)| m).collect();
        for m in ms.iter().skip(1) {
            diffs.push(
                (0..nvars)
                    .map(|i| Rational::from_i64(m.exponent(i) as i64 - ms[0].exponent(i) as i64))
                    .collect(),
            );
        }
    }
    let basis: Vec<Vec<i64>> = if diffs.is_empty() {
        (0..nvars)
            .map(|i| (0..nvars).map(|j| (i == j) as i64).collect())
            .collect()
    } else {
        linalg::kernel(&diffs, nvars).iter().map(|v| primitive(v)).collect()
    };
    if basis.is_empty() {
        return (basis, None);
    }
    let ones_ok = diffs
        .iter()
        .all(|d| d.iter().fold(Rational::zero(), |a, b| a + b).is_zero());
    if ones_ok {
        return (basis, Some(vec![1; nvars]));
    }
    let r = basis.len();
    let mut best: Option<Vec<i64>> = None;
    let range: Vec<i64> = if r <= 4 { (-3..=3).collect() } else { vec![-1, 0, 1] };
    let mut coeffs = vec![0usize; r];
    'outer: loop {
        let v: Vec<i64> = (0..nvars)
            .map(|j| (0..r).map(|k| range[coeffs[k]] * basis[k][j]).sum())
            .collect();
        if v.iter().all(|&x| x > 0) {
            let g = v.iter().fold(0i64, |a, &b| a.gcd(&b));
            let v: Vec<i64> = v.iter().map(|x| x / g).collect();
            let better = match &best {
                None => true,
                Some(b) => v.iter().sum::<i64>() < b.iter().sum::<i64>(),
            };
            if better {
                best = Some(v);
            }
        }
        for k in 0..r {
            coeffs[k] += 1;
            if coeffs[k] < range.len() {
                continue 'outer;
            }
            coeffs[k] = 0;
        }
        break;
    }
    let weights = best.map(|v| v.iter().map(|&x| x as u32).collect());
    (basis, weights)
}

fn primitive(v: &[Rational]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::from(1), |a, x| a.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::from(0), |a, x| a.gcd(x));
    let sign = ints.iter().find(|x| !x.is_zero()).map(|x| if x.is_negative() { -1 } else { 1 }).unwrap_or(1);
    ints.iter()
        .map(|x| (x / &g).to_i64().expect("grading fits in i64") * sign)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type A = QuotientAlgebra<Rational>;
    type P = Polynomial<Rational>;

    fn vars() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }
    fn x() -> P {
        P::var(2, 0)
    }
    fn y() -> P {
        P::var(2, 1)
    }
    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }
    fn cusp() -> A {
        A::new(vars(), vec![&y().pow(2) - &x().pow(3)]).unwrap()
    }
    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn infers_cusp_weights() {
        let a = cusp();
        assert_eq!(a.weights(), &[2, 3]);
        assert!(a.is_graded());
        let node = A::new(vars(), vec![&y().pow(2) - &x().pow(2)]).unwrap();
        assert_eq!(node.weights(), &[1, 1]);
        let uv = A::new(vec!["u".into(), "v".into()], vec![&x() * &y()]).unwrap();
        assert_eq!(uv.lattice().len(), 2);
        let smooth = A::new(vars(), vec![&(&y().pow(2) - &x().pow(2)) - &P::one(2)]).unwrap();
        assert!(!smooth.is_graded());
    }

    #[test]
    fn normal_forms_from_examples() {
        let a = cusp();
        assert_eq!(a.normal_form(&y().pow(2)), x().pow(3));
        assert_eq!(a.normal_form(&(&y().pow(3) + &x())), &(&x().pow(3) * &y()) + &x());
        let smooth = A::with_weights(vars(), vec![&(&y().pow(2) - &x().pow(2)) - &P::one(2)], vec![1, 1]).unwrap();
        assert_eq!(smooth.normal_form(&(&y().pow(2) - &x().pow(2))), P::one(2));
    }

    #[test]
    fn cusp_degree_slices() {
        let a = cusp();
        assert_eq!(a.monomial_basis_of_degree(6).unwrap(), vec![mono(&[3, 0])]);
        assert_eq!(a.monomial_basis_of_degree(5).unwrap(), vec![mono(&[1, 1])]);
        assert_eq!(a.monomial_basis_of_degree(0).unwrap(), vec![mono(&[0, 0])]);
        assert!(a.monomial_basis_of_degree(1).unwrap().is_empty());
    }

    #[test]
    fn zero_weight_is_rejected() {
        let err = A::with_weights(vars(), vec![], vec![1, 0]).unwrap_err();
        assert_eq!(err, Error::NonPositiveWeight { var: "y".into() });
    }

    #[test]
    fn y_split_examples() {
        let node = A::new(vars(), vec![&y().pow(2) - &x().pow(2)]).unwrap();
        let parts = node.y_split(&(&x() + &y().scale(&q(3))), 1).unwrap();
        assert_eq!(parts, vec![x(), P::constant(2, q(3))]);
        let a = cusp();
        let parts = a.y_split(&(&x().pow(3) + &(&x() * &y())), 1).unwrap();
        assert_eq!(parts, vec![x().pow(3), x()]);
        assert!(matches!(a.y_split(&y().pow(2), 1), Err(Error::NotNormalForm { .. })));
        let not_monic = A::new(vars(), vec![&(&x() * &y().pow(2)) - &x().pow(3)]).unwrap();
        assert!(matches!(not_monic.y_split(&x(), 1), Err(Error::NotMonic { .. })));
    }

    #[test]
    fn finite_quotient_enumeration() {
        let t = A::new(vars(), vec![x().pow(2), y().pow(3)]).unwrap();
        assert_eq!(t.standard_monomials().unwrap().len(), 6);
        assert!(cusp().standard_monomials().is_none());
    }
}
