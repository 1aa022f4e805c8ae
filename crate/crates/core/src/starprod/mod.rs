//! Commutative star products on `A = Q[x, y]/(R)` realized by deforming the
//! relation: with `R = y^n - Q` monic in `y`, the product of two normal forms
//! is their ordinary product reduced modulo `R_ħ = R - sum_i ħ^i Q_i` in
//! `Q[x, y][ħ]/(ħ^{N+1})`. The monomials `x^a y^b`, `b < n`, stay a basis,
//! so the product is associative and commutative by construction; the
//! coefficients `C_i` of `ħ^i` are the cochains of the deformation.

mod trivial;

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Field;

pub use trivial::{
    harr2_representatives, miniversal_family, triviality_solve, DerivationCandidate, Harr2Representatives,
    MiniversalFamily, ObstructionCertificate, TrivialityOutcome, RETRY_STEPS,
};

/// Default truncation order `N` of the deformation parameter.
pub const DEFAULT_ORDER: usize = 3;

/// `R_ħ = R - sum_{i=1}^N ħ^i Q_i` with `R` monic in the variable `y`.
#[derive(Clone, Debug)]
pub struct DeformedRelation<F> {
    vars: Vec<String>,
    y: usize,
    n: u32,
    relation: Polynomial<F>,
    /// `Q = y^n - R` after making `R` monic.
    tail: Polynomial<F>,
    corrections: Vec<Polynomial<F>>,
}

impl<F: Field> DeformedRelation<F> {
    /// Uses the last variable in which `relation` is monic (up to a nonzero
    /// constant) as `y`.
    pub fn new(vars: Vec<String>, relation: Polynomial<F>, corrections: Vec<Polynomial<F>>, order: usize) -> Result<Self> {
        let y = (0..vars.len())
            .rev()
            .find(|&i| monic_degree(&relation, i).is_some())
            .ok_or_else(|| Error::NotMonic { var: vars.last().cloned().unwrap_or_default() })?;
        Self::with_variable(vars, relation, y, corrections, order)
    }

    pub fn with_variable(
        vars: Vec<String>,
        relation: Polynomial<F>,
        y: usize,
        corrections: Vec<Polynomial<F>>,
        order: usize,
    ) -> Result<Self> {
        if corrections.len() > order {
            return Err(Error::OutOfRange(format!(
                "{} corrections given for truncation order {order}",
                corrections.len()
            )));
        }
        let (n, lead) = monic_degree(&relation, y).ok_or_else(|| Error::NotMonic { var: vars[y].clone() })?;
        let relation = relation.scale(&lead.inv());
        let yn = Polynomial::term(Monomial::var(vars.len(), y).with_exponent(y, n), F::one());
        let tail = &yn - &relation;
        let mut padded = corrections;
        for q in &padded {
            if q.degree_in(y).is_some_and(|e| e >= n) {
                return Err(Error::NotNormalForm {
                    reason: format!("correction has {}-degree at least {n}", vars[y]),
                });
            }
        }
        padded.resize(order, Polynomial::zero(vars.len()));
        Ok(DeformedRelation { vars, y, n, relation, tail, corrections: padded })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Index of the variable the relation is solved for.
    pub fn y(&self) -> usize {
        self.y
    }

    /// Degree of the relation in `y`.
    pub fn y_degree(&self) -> u32 {
        self.n
    }

    pub fn relation(&self) -> &Polynomial<F> {
        &self.relation
    }

    /// `Q_1, …, Q_N`.
    pub fn corrections(&self) -> &[Polynomial<F>] {
        &self.corrections
    }

    pub fn order(&self) -> usize {
        self.corrections.len()
    }

    /// `R_ħ` as a series in `ħ`.
    pub fn deformed(&self) -> HbarSeries<F> {
        let mut coeffs = vec![self.relation.clone()];
        coeffs.extend(self.corrections.iter().map(|q| -q.clone()));
        HbarSeries { coeffs }
    }
}

/// Degree of `f` in `var` and the leading coefficient, if that coefficient
/// is a nonzero constant.
fn monic_degree<F: Field>(f: &Polynomial<F>, var: usize) -> Option<(u32, F)> {
    let n = f.degree_in(var)?;
    let c = f.coefficient_in(var, n);
    (n > 0 && c.is_constant() && !c.is_zero()).then(|| (n, c.constant_term()))
}

/// A polynomial in `ħ` truncated at a fixed order: `coeffs[i]` multiplies `ħ^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HbarSeries<F> {
    pub coeffs: Vec<Polynomial<F>>,
}

impl<F: Field> HbarSeries<F> {
    pub fn zero(nvars: usize, order: usize) -> Self {
        HbarSeries { coeffs: vec![Polynomial::zero(nvars); order + 1] }
    }

    pub fn constant(f: Polynomial<F>, order: usize) -> Self {
        let mut s = Self::zero(f.nvars(), order);
        s.coeffs[0] = f;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `ħ^i` (zero past the truncation order).
    pub fn coeff(&self, i: usize) -> Polynomial<F> {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Polynomial::zero(self.coeffs[0].nvars()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        SeriesDisplay { s: self, names }
    }
}

struct SeriesDisplay<'a, F> {
    s: &'a HbarSeries<F>,
    names: &'a [String],
}

impl<F: Field> fmt::Display for SeriesDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.s.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c.display(self.names))?,
                1 => write!(f, "ħ*({})", c.display(self.names))?,
                _ => write!(f, "ħ^{i}*({})", c.display(self.names))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The product on normal forms induced by a [`DeformedRelation`].
#[derive(Clone, Debug)]
pub struct StarProduct<F> {
    relation: DeformedRelation<F>,
    /// Test hook: `ε · c(f) c(g)` is added to `C_2`, `c` the constant term.
    fault: Option<F>,
}

impl<F: Field> StarProduct<F> {
    pub fn new(relation: DeformedRelation<F>) -> Self {
        StarProduct { relation, fault: None }
    }

    /// Shorthand for the first-order product `R_ħ = R - ħ Q_1`.
    pub fn first_order(vars: Vec<String>, relation: Polynomial<F>, q1: Polynomial<F>, order: usize) -> Result<Self> {
        Ok(Self::new(DeformedRelation::new(vars, relation, vec![q1], order)?))
    }

    /// A copy whose `C_2` is perturbed by `ε · c(f) c(g)`; it is no longer
    /// associative at order 2 when `ε ≠ 0`.
    pub fn with_fault(&self, epsilon: F) -> Self {
        StarProduct { relation: self.relation.clone(), fault: Some(epsilon) }
    }

    pub fn relation(&self) -> &DeformedRelation<F> {
        &self.relation
    }

    pub fn order(&self) -> usize {
        self.relation.order()
    }

    pub fn nvars(&self) -> usize {
        self.relation.nvars()
    }

    /// Whether `f` has `y`-degree below `n`.
    pub fn is_normal_form(&self, f: &Polynomial<F>) -> bool {
        f.degree_in(self.relation.y).is_none_or(|e| e < self.relation.n)
    }

    fn check_normal(&self, f: &Polynomial<F>) -> Result<()> {
        if self.is_normal_form(f) {
            Ok(())
        } else {
            Err(Error::NotNormalForm {
                reason: format!(
                    "{}-degree must be below {}",
                    self.relation.vars[self.relation.y], self.relation.n
                ),
            })
        }
    }

    /// Reduces every coefficient modulo `R_ħ`, replacing `y^n` by
    /// `Q + sum_k ħ^k Q_k` until all `y`-degrees are below `n`.
    pub fn normal_form(&self, s: &HbarSeries<F>) -> HbarSeries<F> {
        let (y, n) = (self.relation.y, self.relation.n);
        let order = s.order();
        let mut coeffs = s.coeffs.clone();
        for i in 0..=order {
            loop {
                let high: Vec<(Monomial, F)> = coeffs[i]
                    .terms()
                    .filter(|(m, _)| m.exponent(y) >= n)
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect();
                if high.is_empty() {
                    break;
                }
                for (m, c) in high {
                    coeffs[i].remove_term(&m);
                    let rest = m.with_exponent(y, m.exponent(y) - n);
                    coeffs[i].add_scaled(&self.relation.tail, &rest, &c);
                    for (k, q) in self.relation.corrections.iter().enumerate() {
                        if i + k < order && !q.is_zero() {
                            coeffs[i + k + 1].add_scaled(q, &rest, &c);
                        }
                    }
                }
            }
        }
        HbarSeries { coeffs }
    }

    /// Normal form of a plain polynomial in the undeformed algebra.
    pub fn reduce(&self, f: &Polynomial<F>) -> Polynomial<F> {
        self.normal_form(&HbarSeries::constant(f.clone(), 0)).coeffs.swap_remove(0)
    }

    /// `f * g` for normal forms `f`, `g`.
    pub fn star_multiply(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Result<HbarSeries<F>> {
        self.check_normal(f)?;
        self.check_normal(g)?;
        let order = self.order();
        let mut out = self.normal_form(&HbarSeries::constant(f * g, order));
        if let Some(eps) = &self.fault {
            if order >= 2 {
                let c = eps.clone() * f.constant_term() * g.constant_term();
                out.coeffs[2].add_term(Monomial::one(self.nvars()), c);
            }
        }
        Ok(out)
    }

    /// Star product of two series, extended `ħ`-bilinearly.
    pub fn multiply_series(&self, a: &HbarSeries<F>, b: &HbarSeries<F>) -> Result<HbarSeries<F>> {
        let order = self.order().min(a.order()).min(b.order());
        let mut out = HbarSeries::zero(self.nvars(), order);
        for (i, ai) in a.coeffs.iter().enumerate().take(order + 1) {
            for (j, bj) in b.coeffs.iter().enumerate().take(order + 1 - i) {
                if ai.is_zero() || bj.is_zero() {
                    continue;
                }
                let p = self.star_multiply(ai, bj)?;
                for k in 0..=order - i - j {
                    out.coeffs[i + j + k] = &out.coeffs[i + j + k] + &p.coeffs[k];
                }
            }
        }
        Ok(out)
    }

    /// `C_i(f, g)`.
    pub fn cochain(&self, i: usize, f: &Polynomial<F>, g: &Polynomial<F>) -> Result<Polynomial<F>> {
        if i > self.order() {
            return Err(Error::OutOfRange(format!("C_{i} is past the truncation order {}", self.order())));
        }
        Ok(self.star_multiply(f, g)?.coeffs.swap_remove(i))
    }

    /// The normal-form monomials `x^a y^b`, `b < n`, of total degree at most `cap`.
    pub fn basis_up_to(&self, cap: u64) -> Vec<Monomial> {
        let mut out = Vec::new();
        let nv = self.nvars();
        let ones = vec![1u32; nv];
        for d in 0..=cap {
            crate::poly::quotient::monomials_of_degree(&ones, d, &mut |m| {
                if m.exponent(self.relation.y) < self.relation.n {
                    out.push(m);
                }
            });
        }
        out
    }

    /// `C_i` on all pairs of basis monomials of total degree at most `cap`,
    /// zero values omitted.
    pub fn cochain_table(&self, i: usize, cap: u64) -> Result<BTreeMap<(Monomial, Monomial), Polynomial<F>>> {
        let basis = self.basis_up_to(cap);
        let nv = self.nvars();
        let mut table = BTreeMap::new();
        for a in &basis {
            for b in &basis {
                let c = self.cochain(i, &Polynomial::term(a.clone(), F::one()), &Polynomial::term(b.clone(), F::one()))?;
                debug_assert_eq!(c.nvars(), nv);
                if !c.is_zero() {
                    table.insert((a.clone(), b.clone()), c);
                }
            }
        }
        Ok(table)
    }

    /// The `C_1` table; needs `N >= 1`.
    pub fn first_order_cochain(&self, cap: u64) -> Result<BTreeMap<(Monomial, Monomial), Polynomial<F>>> {
        if self.order() < 1 {
            return Err(Error::Precondition("first-order cochain needs truncation order at least 1".into()));
        }
        self.cochain_table(1, cap)
    }

    /// `δC_1(f, g, h) = f C_1(g, h) - C_1(fg, h) + C_1(f, gh) - C_1(f, g) h`,
    /// products taken in the undeformed algebra.
    pub fn c1_coboundary(&self, f: &Polynomial<F>, g: &Polynomial<F>, h: &Polynomial<F>) -> Result<Polynomial<F>> {
        let c1 = |a: &Polynomial<F>, b: &Polynomial<F>| self.cochain(1, a, b);
        let fg = self.reduce(&(f * g));
        let gh = self.reduce(&(g * h));
        let sum = &(&(f * &c1(g, h)?) - &c1(&fg, h)?) + &(&c1(f, &gh)? - &(&c1(f, g)? * h));
        Ok(self.reduce(&sum))
    }

    /// `sum_{m+n=k} C_m(f, C_n(g, h)) - C_m(C_n(f, g), h)`; zero for every
    /// `k` exactly when the product is associative.
    pub fn associativity_defect(&self, k: usize, f: &Polynomial<F>, g: &Polynomial<F>, h: &Polynomial<F>) -> Result<Polynomial<F>> {
        let mut acc = Polynomial::zero(self.nvars());
        for m in 0..=k {
            let n = k - m;
            let gh = self.cochain(n, g, h)?;
            let fg = self.cochain(n, f, g)?;
            acc = &acc + &(&self.cochain(m, f, &gh)? - &self.cochain(m, &fg, h)?);
        }
        Ok(acc)
    }

    /// A random normal form of total degree at most `max_degree` with small
    /// integer coefficients.
    pub fn random_element<R: Rng>(&self, rng: &mut R, max_degree: u64) -> Polynomial<F> {
        let mut terms = Vec::new();
        for m in self.basis_up_to(max_degree) {
            if rng.gen_bool(0.5) {
                terms.push((m, F::from_i64(rng.gen_range(-3..=3))));
            }
        }
        Polynomial::from_terms(self.nvars(), terms)
    }
}

/// Result of [`verify_obstruction_vanishing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativityReport {
    pub order: usize,
    pub samples: usize,
    pub max_degree: u64,
    pub seed: u64,
}

/// Checks the order-`k` associativity identities for `k = 1..=order` on
/// `samples` random triples of normal forms.
pub fn verify_obstruction_vanishing<F: Field>(
    sp: &StarProduct<F>,
    order: usize,
    samples: usize,
    max_degree: u64,
    seed: u64,
) -> Result<AssociativityReport> {
    use rand::SeedableRng;
    if order > sp.order() {
        return Err(Error::OutOfRange(format!(
            "order {order} is past the truncation order {}",
            sp.order()
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let names = sp.relation().vars().to_vec();
    for _ in 0..samples {
        let (f, g, h) = (
            sp.random_element(&mut rng, max_degree),
            sp.random_element(&mut rng, max_degree),
            sp.random_element(&mut rng, max_degree),
        );
        for k in 1..=order {
            let defect = sp.associativity_defect(k, &f, &g, &h)?;
            if !defect.is_zero() {
                return Err(Error::AssociativityFailure {
                    order: k,
                    detail: format!(
                        "f = {}, g = {}, h = {}: defect {}",
                        f.display(&names),
                        g.display(&names),
                        h.display(&names),
                        defect.display(&names)
                    ),
                });
            }
        }
    }
    Ok(AssociativityReport { order, samples, max_degree, seed })
}

#[cfg(test)]
mod tests;
