use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, QuotientAlgebra};
use crate::scalar::Field;

/// Relations `f_1, …, f_m` in `Q[z_1, …, z_n]`, with the quotient algebra
/// they define.
#[derive(Clone, Debug)]
pub struct CompleteIntersection<F> {
    algebra: QuotientAlgebra<F>,
    ambient: QuotientAlgebra<F>,
}

impl<F: Field> CompleteIntersection<F> {
    pub fn new(vars: Vec<String>, relations: Vec<Polynomial<F>>) -> Result<Self> {
        Self::from_algebra(QuotientAlgebra::new(vars, relations)?)
    }

    pub fn with_weights(vars: Vec<String>, relations: Vec<Polynomial<F>>, weights: Vec<u32>) -> Result<Self> {
        Self::from_algebra(QuotientAlgebra::with_weights(vars, relations, weights)?)
    }

    pub fn from_algebra(algebra: QuotientAlgebra<F>) -> Result<Self> {
        if algebra.relations().iter().any(|f| f.is_zero()) {
            return Err(Error::Precondition("relations must be nonzero".into()));
        }
        let ambient = QuotientAlgebra::polynomial_ring(algebra.vars().to_vec(), algebra.weights().to_vec())?;
        Ok(CompleteIntersection { algebra, ambient })
    }

    pub fn algebra(&self) -> &QuotientAlgebra<F> {
        &self.algebra
    }

    /// The polynomial ring `P` the relations live in.
    pub fn ambient(&self) -> &QuotientAlgebra<F> {
        &self.ambient
    }

    pub fn nvars(&self) -> usize {
        self.algebra.nvars()
    }

    pub fn ngens(&self) -> usize {
        self.algebra.relations().len()
    }

    pub fn relations(&self) -> &[Polynomial<F>] {
        self.algebra.relations()
    }

    pub fn weights(&self) -> &[u32] {
        self.algebra.weights()
    }

    pub fn is_graded(&self) -> bool {
        self.algebra.is_graded()
    }

    /// Weighted degree of `f_j` (the top degree when it is not homogeneous).
    pub fn relation_weight(&self, j: usize) -> i64 {
        self.relations()[j].weighted_degree(self.weights()).unwrap_or(0) as i64
    }

    /// `jacobian()[j][i] = ∂f_j/∂z_i`.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial<F>>> {
        self.relations()
            .iter()
            .map(|f| (0..self.nvars()).map(|i| f.partial_derivative(i)).collect())
            .collect()
    }
}

/// An auxiliary generator of a free graded-commutative algebra over the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperGenerator {
    pub name: String,
    pub odd: bool,
    /// Cohomological degree.
    pub degree: i32,
    /// Internal (weighted) degree.
    pub weight: i64,
}

/// Exponents over the auxiliary generators; odd ones are 0 or 1.
pub type SuperMonomial = Vec<u32>;

/// One term `c · g_out · ∂/∂g_in` of a differential.
#[derive(Clone, Debug)]
struct DerivationTerm<F> {
    coeff: Polynomial<F>,
    out: Option<usize>,
    inn: usize,
}

/// A complex of free modules `base ⊗ Λ/S[generators]` whose differential
/// is a sum of terms `c · g_out · ∂/∂g_in` and raises cohomological degree
/// by one. Summands are super-monomials; the Hodge degree of a summand is
/// its number of auxiliary factors.
#[derive(Clone, Debug)]
pub struct FreeModuleComplex<F> {
    base: QuotientAlgebra<F>,
    generators: Vec<SuperGenerator>,
    summands: BTreeMap<i32, Vec<SuperMonomial>>,
    index: HashMap<SuperMonomial, usize>,
    terms: Vec<DerivationTerm<F>>,
    range: (i32, i32),
    hodge_shift: i32,
}

impl<F: Field> FreeModuleComplex<F> {
    fn build(
        base: QuotientAlgebra<F>,
        generators: Vec<SuperGenerator>,
        terms: Vec<DerivationTerm<F>>,
        range: (i32, i32),
        hodge_shift: i32,
    ) -> Self {
        let bound = range.0.unsigned_abs().max(range.1.unsigned_abs()) + 1;
        let mut summands: BTreeMap<i32, Vec<SuperMonomial>> = BTreeMap::new();
        let mut cur = vec![0u32; generators.len()];
        fn rec(gens: &[SuperGenerator], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut BTreeMap<i32, Vec<SuperMonomial>>) {
            if i == gens.len() {
                let deg: i32 = cur.iter().zip(gens).map(|(&e, g)| e as i32 * g.degree).sum();
                out.entry(deg).or_default().push(cur.clone());
                return;
            }
            let step = gens[i].degree.unsigned_abs();
            let max_e = if gens[i].odd { 1 } else { left / step.max(1) };
            for e in 0..=max_e {
                if e * step > left {
                    break;
                }
                cur[i] = e;
                rec(gens, i + 1, left - e * step, cur, out);
            }
            cur[i] = 0;
        }
        rec(&generators, 0, bound, &mut cur, &mut summands);
        summands.retain(|&p, _| p >= range.0 - 1 && p <= range.1 + 1);
        for v in summands.values_mut() {
            v.sort_by(|a, b| b.cmp(a));
        }
        let index = summands
            .values()
            .flat_map(|v| v.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        FreeModuleComplex { base, generators, summands, index, terms, range, hodge_shift }
    }

    pub fn base(&self) -> &QuotientAlgebra<F> {
        &self.base
    }

    pub fn generators(&self) -> &[SuperGenerator] {
        &self.generators
    }

    /// Degrees in which cohomology is meaningful.
    pub fn range(&self) -> (i32, i32) {
        self.range
    }

    /// Change of Hodge degree under the differential.
    pub fn hodge_shift(&self) -> i32 {
        self.hodge_shift
    }

    pub fn summands(&self, p: i32) -> &[SuperMonomial] {
        self.summands.get(&p).map_or(&[], |v| v.as_slice())
    }

    pub fn hodge(&self, s: &SuperMonomial) -> usize {
        s.iter().sum::<u32>() as usize
    }

    pub fn weight(&self, s: &SuperMonomial) -> i64 {
        s.iter().zip(&self.generators).map(|(&e, g)| e as i64 * g.weight).sum()
    }

    pub fn summand_name(&self, s: &SuperMonomial) -> String {
        let parts: Vec<String> = s
            .iter()
            .zip(&self.generators)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// `d(s)` as `(target index, coefficient)`; targets beyond the built
    /// degrees are dropped.
    pub fn apply(&self, s: &SuperMonomial) -> Vec<(usize, Polynomial<F>)> {
        let mut acc: BTreeMap<usize, Polynomial<F>> = BTreeMap::new();
        let odd_before = |m: &SuperMonomial, k: usize| {
            (0..k).filter(|&j| self.generators[j].odd && m[j] > 0).count()
        };
        for t in &self.terms {
            if s[t.inn] == 0 {
                continue;
            }
            let mut factor: i64 = if self.generators[t.inn].odd {
                if odd_before(s, t.inn) % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                s[t.inn] as i64
            };
            let mut target = s.clone();
            target[t.inn] -= 1;
            if let Some(o) = t.out {
                if self.generators[o].odd {
                    if target[o] > 0 {
                        continue;
                    }
                    if odd_before(&target, o) % 2 == 1 {
                        factor = -factor;
                    }
                }
                target[o] += 1;
            }
            let Some(&idx) = self.index.get(&target) else {
                continue;
            };
            let c = t.coeff.scale(&F::from_i64(factor));
            let e = acc.entry(idx).or_insert_with(|| Polynomial::zero(self.base.nvars()));
            *e = &*e + &c;
        }
        acc.into_iter()
            .map(|(i, c)| (i, self.base.normal_form(&c)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// The differential out of degree `p` as a sparse matrix over the base,
    /// one column per summand.
    pub fn matrix(&self, p: i32) -> Vec<Vec<(usize, Polynomial<F>)>> {
        self.summands(p).iter().map(|s| self.apply(s)).collect()
    }

    /// `d ∘ d = 0` in the base, checked on every built summand.
    pub fn d_squared_is_zero(&self) -> bool {
        for (&p, ss) in &self.summands {
            if !self.summands.contains_key(&(p + 2)) {
                continue;
            }
            let next = self.matrix(p + 1);
            for s in ss {
                let mut acc: BTreeMap<usize, Polynomial<F>> = BTreeMap::new();
                for (i, c) in self.apply(s) {
                    for (j, c2) in &next[i] {
                        let e = acc.entry(*j).or_insert_with(|| Polynomial::zero(self.base.nvars()));
                        *e = &*e + &(&c * c2);
                    }
                }
                if acc.values().any(|v| !self.base.normal_form(v).is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Every nonzero matrix entry moves Hodge degree by [`hodge_shift`](Self::hodge_shift).
    pub fn respects_hodge(&self) -> bool {
        self.summands.iter().all(|(&p, ss)| {
            ss.iter().all(|s| {
                self.apply(s).iter().all(|(i, _)| {
                    self.hodge(&self.summands[&(p + 1)][*i]) as i32 == self.hodge(s) as i32 + self.hodge_shift
                })
            })
        })
    }

    /// Every matrix entry is homogeneous of the degree that makes `d`
    /// preserve internal degree.
    pub fn respects_weights(&self) -> bool {
        let w = self.base.weights().to_vec();
        self.summands.iter().all(|(&p, ss)| {
            ss.iter().all(|s| {
                self.apply(s).iter().all(|(i, c)| {
                    let t = &self.summands[&(p + 1)][*i];
                    let need = self.weight(s) - self.weight(t);
                    c.terms().all(|(m, _)| m.weighted_degree(&w) as i64 == need)
                })
            })
        })
    }
}

fn gen(name: String, odd: bool, degree: i32, weight: i64) -> SuperGenerator {
    SuperGenerator { name, odd, degree, weight }
}

/// `P ⊗ Λ(α_1, …, α_m)`, `α_j` in degree −1, with `d = sum_j f_j ∂/∂α_j`.
pub fn koszul_resolution<F: Field>(ci: &CompleteIntersection<F>) -> FreeModuleComplex<F> {
    let m = ci.ngens();
    let gens = (0..m)
        .map(|j| gen(format!("α{}", j + 1), true, -1, ci.relation_weight(j)))
        .collect();
    let terms = (0..m)
        .map(|j| DerivationTerm { coeff: ci.relations()[j].clone(), out: None, inn: j })
        .collect();
    FreeModuleComplex::build(ci.ambient().clone(), gens, terms, (-(m as i32), 0), -1)
}

/// `A[η_1..η_n; b_1..b_m]` with `d = sum ∂_i f_j · b_j ∂/∂η_i`, degrees `0..=max_degree`.
pub fn hkr_cohomology_complex<F: Field>(ci: &CompleteIntersection<F>, max_degree: u32) -> FreeModuleComplex<F> {
    let (n, m) = (ci.nvars(), ci.ngens());
    let mut gens: Vec<SuperGenerator> = (0..n)
        .map(|i| gen(format!("η{}", i + 1), true, 1, -(ci.weights()[i] as i64)))
        .collect();
    gens.extend((0..m).map(|j| gen(format!("b{}", j + 1), false, 2, -ci.relation_weight(j))));
    let jac = ci.jacobian();
    let mut terms = Vec::new();
    for (j, row) in jac.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            if !c.is_zero() {
                terms.push(DerivationTerm { coeff: c.clone(), out: Some(n + j), inn: i });
            }
        }
    }
    FreeModuleComplex::build(ci.algebra().clone(), gens, terms, (0, max_degree as i32), 0)
}

/// `A[ξ_1..ξ_n; a_1..a_m]` with `d = sum ∂_i f_j · ξ_i ∂/∂a_j`, degrees `-max_degree..=0`.
pub fn hkr_homology_complex<F: Field>(ci: &CompleteIntersection<F>, max_degree: u32) -> FreeModuleComplex<F> {
    let (n, m) = (ci.nvars(), ci.ngens());
    let mut gens: Vec<SuperGenerator> = (0..n)
        .map(|i| gen(format!("ξ{}", i + 1), true, -1, ci.weights()[i] as i64))
        .collect();
    gens.extend((0..m).map(|j| gen(format!("a{}", j + 1), false, -2, ci.relation_weight(j))));
    let jac = ci.jacobian();
    let mut terms = Vec::new();
    for (j, row) in jac.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            if !c.is_zero() {
                terms.push(DerivationTerm { coeff: c.clone(), out: Some(i), inn: n + j });
            }
        }
    }
    FreeModuleComplex::build(ci.algebra().clone(), gens, terms, (-(max_degree as i32), 0), 0)
}
