use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, QuotientAlgebra};
use crate::scalar::Field;
use crate::symgroup::GroupAlgebraElement;

/// A rational combination of tensors `a_1 ⊗ … ⊗ a_p` of standard monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainVector<F> {
    terms: BTreeMap<Vec<Monomial>, F>,
}

impl<F: Field> Default for ChainVector<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> ChainVector<F> {
    pub fn zero() -> Self {
        ChainVector { terms: BTreeMap::new() }
    }

    pub fn tensor(factors: Vec<Monomial>, c: F) -> Self {
        let mut v = Self::zero();
        v.add_term(factors, c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<Monomial>, F)>) -> Self {
        let mut v = Self::zero();
        for (t, c) in terms {
            v.add_term(t, c);
        }
        v
    }

    /// Multilinear expansion of `f_1 ⊗ … ⊗ f_p` after reducing each factor.
    /// Factors must lie in the augmentation ideal.
    pub fn from_factors(alg: &QuotientAlgebra<F>, factors: &[Polynomial<F>]) -> Result<Self> {
        let mut acc: Vec<(Vec<Monomial>, F)> = vec![(vec![], F::one())];
        for f in factors {
            let f = alg.normal_form(f);
            if !f.constant_term().is_zero() {
                return Err(Error::Precondition("tensor factor has a constant term".into()));
            }
            let mut next = Vec::new();
            for (t, c) in &acc {
                for (m, a) in f.terms() {
                    let mut t = t.clone();
                    t.push(m.clone());
                    next.push((t, c.clone() * a.clone()));
                }
            }
            acc = next;
        }
        Ok(Self::from_terms(acc))
    }

    pub fn add_term(&mut self, t: Vec<Monomial>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(a) => {
                *a = a.clone() + c;
                if a.is_zero() {
                    self.terms.remove(&t);
                }
            }
            None => {
                self.terms.insert(t, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &F)> {
        self.terms.iter()
    }

    pub fn as_map(&self) -> &BTreeMap<Vec<Monomial>, F> {
        &self.terms
    }

    pub fn coeff(&self, t: &[Monomial]) -> F {
        self.terms.get(t).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Tensor length, if all terms agree.
    pub fn length(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|t| t.len());
        let p = it.next()?;
        it.all(|q| q == p).then_some(p)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(t, a)| (t.clone(), a.clone() * c.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    /// Appends `f` (expanded in monomials) as a new last factor.
    pub fn tensor_right(&self, f: &Polynomial<F>) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            for (m, a) in f.terms() {
                let mut t = t.clone();
                t.push(m.clone());
                out.add_term(t, c.clone() * a.clone());
            }
        }
        out
    }

    /// Slot permutation by a group-algebra element of matching degree.
    pub fn act(&self, g: &GroupAlgebraElement<F>) -> Result<Self> {
        Ok(ChainVector { terms: g.act_on_tensor(&self.terms)? })
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> ChainDisplay<'a, F> {
        ChainDisplay { chain: self, names }
    }
}

impl<F: fmt::Debug> fmt::Debug for ChainVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

pub struct ChainDisplay<'a, F> {
    chain: &'a ChainVector<F>,
    names: &'a [String],
}

impl<F: Field> fmt::Display for ChainDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chain.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.chain.terms.iter().enumerate() {
            let s = c.to_string();
            let (neg, abs) = match s.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, s),
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if abs != "1" {
                write!(f, "{abs}*")?;
            }
            let parts: Vec<String> = t.iter().map(|m| m.display(self.names).to_string()).collect();
            write!(f, "{}", parts.join("⊗"))?;
        }
        Ok(())
    }
}

/// `d(a_1 ⊗ … ⊗ a_p) = sum_{i=1}^{p-1} (-1)^{i-1} a_1 ⊗ … ⊗ a_i a_{i+1} ⊗ … ⊗ a_p`,
/// products taken in normal form. Tensors of length one are cycles.
pub fn bar_differential<F: Field>(alg: &QuotientAlgebra<F>, c: &ChainVector<F>) -> ChainVector<F> {
    let mut out = ChainVector::zero();
    for (t, a) in c.terms() {
        for i in 0..t.len().saturating_sub(1) {
            let prod = alg.normal_form(&Polynomial::term(t[i].mul(&t[i + 1]), F::one()));
            let sign = if i % 2 == 0 { a.clone() } else { -a.clone() };
            for (m, b) in prod.terms() {
                let mut s = Vec::with_capacity(t.len() - 1);
                s.extend_from_slice(&t[..i]);
                s.push(m.clone());
                s.extend_from_slice(&t[i + 2..]);
                out.add_term(s, sign.clone() * b.clone());
            }
        }
    }
    out
}

/// The splitting `R = x_1 R_1 + x_2 R_2` used by the cycle families:
/// terms divisible by `x_1` go to `R_1`, the rest to `R_2`.
pub fn relation_split<F: Field>(alg: &QuotientAlgebra<F>) -> Result<(Polynomial<F>, Polynomial<F>)> {
    let [r] = alg.relations() else {
        return Err(Error::Precondition("expected a single relation".into()));
    };
    if alg.nvars() != 2 {
        return Err(Error::Precondition("expected a plane curve".into()));
    }
    let mut r1 = Polynomial::zero(2);
    let mut r2 = Polynomial::zero(2);
    for (m, c) in r.terms() {
        if m.exponent(0) > 0 {
            r1.add_term(m.with_exponent(0, m.exponent(0) - 1), c.clone());
        } else if m.exponent(1) > 0 {
            r2.add_term(m.with_exponent(1, m.exponent(1) - 1), c.clone());
        } else {
            return Err(Error::Precondition("relation has a constant term".into()));
        }
    }
    Ok((r1, r2))
}

/// The two rows of `P^p = P^1 ⊗ M_1 ⊗ … ⊗ M_{p-1}`, where `P^1 = (x_1, x_2)`,
/// `M_odd = [[R_1, -x_2], [R_2, x_1]]` and `M_even = [[x_1, x_2], [-R_2, R_1]]`.
/// Each row is a cycle of the bar complex of `A_+`.
pub fn cycle_basis_pn<F: Field>(alg: &QuotientAlgebra<F>, p: usize) -> Result<[ChainVector<F>; 2]> {
    if p == 0 {
        return Err(Error::OutOfRange("p must be at least 1".into()));
    }
    let (r1, r2) = relation_split(alg)?;
    let (r1, r2) = (alg.normal_form(&r1), alg.normal_form(&r2));
    for f in [&r1, &r2] {
        if !f.constant_term().is_zero() {
            return Err(Error::Precondition("relation has a linear term".into()));
        }
    }
    let x1 = Polynomial::var(2, 0);
    let x2 = Polynomial::var(2, 1);
    let mut rows = [
        ChainVector::tensor(vec![Monomial::var(2, 0)], F::one()),
        ChainVector::tensor(vec![Monomial::var(2, 1)], F::one()),
    ];
    for k in 1..p {
        let m = if k % 2 == 1 {
            [[r1.clone(), -&x2], [r2.clone(), x1.clone()]]
        } else {
            [[x1.clone(), x2.clone()], [-&r2, r1.clone()]]
        };
        let next = [0, 1].map(|j| rows[0].tensor_right(&m[0][j]).add(&rows[1].tensor_right(&m[1][j])));
        rows = next;
    }
    Ok(rows)
}

/// Which of the two alternating families over `Q[z]/(z^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZFamily {
    /// `z ⊗ z^{p_1} ⊗ z ⊗ … ⊗ z^{p_k} ⊗ z`, length `2k+1`.
    Phi,
    /// `z ⊗ z^{p_1} ⊗ … ⊗ z ⊗ z^{p_k}`, length `2k`.
    Psi,
}

/// Sum over compositions `p_1 + … + p_k = k + m - 1` with `1 <= p_i <= m`
/// of the alternating tensor; factors with `p_i >= n` vanish.
pub fn phi_psi_chains<F: Field>(family: ZFamily, k: usize, m: usize, n: u32) -> Result<ChainVector<F>> {
    if k == 0 || n < 2 {
        return Err(Error::OutOfRange("need k >= 1 and n >= 2".into()));
    }
    let alpha = k * (n as usize - 2) + 1;
    if m == 0 || m > alpha {
        return Err(Error::OutOfRange(format!("m = {m} outside 1..={alpha}")));
    }
    let z = |e: usize| Monomial::from_exponents(vec![e as u32]);
    let mut out = ChainVector::zero();
    let mut parts = vec![1usize; k];
    let total = k + m - 1;
    fn rec(i: usize, left: usize, m: usize, parts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if i + 1 == parts.len() {
            if (1..=m).contains(&left) {
                parts[i] = left;
                f(parts);
            }
            return;
        }
        for v in 1..=m.min(left) {
            parts[i] = v;
            rec(i + 1, left - v, m, parts, f);
        }
    }
    rec(0, total, m, &mut parts, &mut |ps| {
        if ps.iter().any(|&e| e >= n as usize) {
            return;
        }
        let mut t = Vec::new();
        for &e in ps {
            t.push(z(1));
            t.push(z(e));
        }
        if family == ZFamily::Phi {
            t.push(z(1));
        }
        out.add_term(t, F::one());
    });
    Ok(out)
}
