//! Rational group algebras of symmetric groups and the Eulerian idempotents.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::Rational;

/// Largest `n` for which idempotents are built without raising the cap.
pub const DEFAULT_IDEMPOTENT_CAP: usize = 7;

/// A permutation of `{1..n}` in one-line notation, stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    /// From one-line notation with values `1..=n`.
    pub fn new(one_line: &[usize]) -> Result<Self> {
        Self::from_zero_based(one_line.iter().map(|&v| v.wrapping_sub(1)).collect())
    }

    pub fn from_zero_based(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > u8::MAX as usize {
            return Err(Error::OutOfRange(format!("permutation of length {n}")));
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::Precondition("not a bijection of 1..n".into()));
            }
            seen[v] = true;
        }
        Ok(Permutation(images.into_iter().map(|v| v as u8).collect()))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `σ(i)` for a 0-based position.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&v| v as usize)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.n()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Permutation(inv)
    }

    pub fn inversions(&self) -> usize {
        let s = &self.0;
        (0..s.len())
            .map(|i| (i + 1..s.len()).filter(|&j| s[i] > s[j]).count())
            .sum()
    }

    pub fn sign(&self) -> i64 {
        if self.inversions() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Number of positions `i` with `σ(i) > σ(i+1)`.
    pub fn descent_count(&self) -> usize {
        self.0.windows(2).filter(|w| w[0] > w[1]).count()
    }

    /// Lexicographic index in `S_n`.
    pub fn rank(&self) -> usize {
        let s = &self.0;
        let n = s.len();
        let mut r = 0;
        for i in 0..n {
            let smaller = (i + 1..n).filter(|&j| s[j] < s[i]).count();
            r = r * (n - i) + smaller;
        }
        r
    }

    /// All of `S_n` in lexicographic order, so that `all(n)[σ.rank()] == σ`.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v as u8);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    /// Moves the factor in slot `j` to slot `σ(j)`.
    pub fn act_on_slots<T: Clone>(&self, t: &[T]) -> Vec<T> {
        self.inverse().0.iter().map(|&j| t[j as usize].clone()).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() < 10 { "" } else { "," };
        let parts: Vec<String> = self.0.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "{}", parts.join(sep))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `"3142"` or, for `n ≥ 10`, `"3,1,4,2,..."`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("malformed permutation '{s}'"));
        let vals: Vec<usize> = if s.contains(',') {
            s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_>>()?
        };
        Permutation::new(&vals)
    }
}

/// A rational combination of permutations of a fixed `n`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement<F> {
    n: usize,
    terms: BTreeMap<Permutation, F>,
}

impl<F: Field> GroupAlgebraElement<F> {
    pub fn zero(n: usize) -> Self {
        GroupAlgebraElement { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_terms(n, [(Permutation::identity(n), F::one())])
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Permutation, F)>) -> Self {
        let mut e = Self::zero(n);
        for (p, c) in terms {
            e.add_term(p, c);
        }
        e
    }

    pub fn add_term(&mut self, p: Permutation, c: F) {
        assert_eq!(p.n(), self.n, "permutation of wrong degree");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&p) {
            Some(a) => {
                *a = a.clone() + c;
                if a.is_zero() {
                    self.terms.remove(&p);
                }
            }
            None => {
                self.terms.insert(p, c);
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.n
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

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &Permutation) -> F {
        self.terms.get(p).cloned().unwrap_or_else(F::zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(p, a)| (p.clone(), a.clone() * c.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    /// Convolution product, `(σ)(τ) = σ ∘ τ`.
    ///
    /// Terms are bucketed by coefficient so the inner loop only counts
    /// permutations with machine integers; idempotents have few distinct
    /// coefficients.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let a = bucket(&self.terms);
        let b = bucket(&other.terms);
        if a.len() * b.len() > 4096 {
            let mut out = Self::zero(self.n);
            for (s, cs) in &self.terms {
                for (t, ct) in &other.terms {
                    out.add_term(s.compose(t), cs.clone() * ct.clone());
                }
            }
            return out;
        }
        let size: usize = (1..=self.n).product();
        let perms = Permutation::all(self.n);
        let mut acc: Vec<F> = vec![F::zero(); size];
        let mut counts = vec![0i64; size];
        for (ca, pa) in &a {
            for (cb, pb) in &b {
                for s in pa {
                    for t in pb {
                        counts[s.compose(t).rank()] += 1;
                    }
                }
                let c = ca.clone() * cb.clone();
                for (i, k) in counts.iter_mut().enumerate() {
                    if *k != 0 {
                        acc[i] = acc[i].clone() + c.clone() * F::from_i64(*k);
                        *k = 0;
                    }
                }
            }
        }
        Self::from_terms(self.n, perms.into_iter().zip(acc))
    }

    /// Linear extension of slot permutation to a combination of tensors:
    /// `σ · (a_1 ⊗ … ⊗ a_p) = a_{σ⁻¹(1)} ⊗ … ⊗ a_{σ⁻¹(p)}`. This is the
    /// convention under which the idempotents commute with the bar
    /// differential; the two conventions agree for `p <= 3`.
    pub fn act_on_tensor<B: Clone + Ord>(&self, t: &BTreeMap<Vec<B>, F>) -> Result<BTreeMap<Vec<B>, F>> {
        let mut out: BTreeMap<Vec<B>, F> = BTreeMap::new();
        for (key, c) in t {
            if key.len() != self.n {
                return Err(Error::DegreeMismatch { expected: self.n, actual: key.len() });
            }
            for (p, a) in &self.terms {
                let k = p.act_on_slots(key);
                let v = a.clone() * c.clone();
                let e = out.entry(k).or_insert_with(F::zero);
                *e = e.clone() + v;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

fn bucket<F: Field>(terms: &BTreeMap<Permutation, F>) -> Vec<(F, Vec<&Permutation>)> {
    let mut out: Vec<(F, Vec<&Permutation>)> = Vec::new();
    for (p, c) in terms {
        match out.iter_mut().find(|(d, _)| d == c) {
            Some((_, v)) => v.push(p),
            None => out.push((c.clone(), vec![p])),
        }
        if out.len() > 64 {
            return terms.iter().map(|(p, c)| (c.clone(), vec![p])).collect();
        }
    }
    out
}

impl<F: Field> fmt::Display for GroupAlgebraElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("{c}*[{p}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Field> fmt::Debug for GroupAlgebraElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Coefficients of `prod_{j=0}^{n-1} (x - d + j)`, lowest degree first.
fn garsia_polynomial(n: usize, d: usize) -> Vec<i64> {
    let mut poly = vec![1i64];
    for j in 0..n {
        let shift = j as i64 - d as i64;
        let mut next = vec![0i64; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] += c * shift;
        }
        poly = next;
    }
    poly
}

/// `e_n(1), ..., e_n(n)` from Garsia's generating function
/// `sum_k x^k e_n(k) = (1/n!) sum_σ sgn(σ) (x - d_σ)(x - d_σ + 1)…(x - d_σ + n - 1) σ`.
pub fn eulerian_idempotents<F: Field>(n: usize) -> Result<Vec<GroupAlgebraElement<F>>> {
    eulerian_idempotents_capped(n, DEFAULT_IDEMPOTENT_CAP)
}

pub fn eulerian_idempotents_capped<F: Field>(n: usize, cap: usize) -> Result<Vec<GroupAlgebraElement<F>>> {
    if n == 0 {
        return Err(Error::OutOfRange("idempotents need n >= 1".into()));
    }
    if n > cap {
        return Err(Error::ResourceLimit { what: "symmetric group degree", size: n, cap });
    }
    let fact: i64 = (1..=n as i64).product();
    let by_descents: Vec<Vec<i64>> = (0..n).map(|d| garsia_polynomial(n, d)).collect();
    let mut out: Vec<GroupAlgebraElement<F>> = (0..n).map(|_| GroupAlgebraElement::zero(n)).collect();
    let inv_fact = F::from_i64(fact).inv();
    for p in Permutation::all(n) {
        let poly = &by_descents[p.descent_count()];
        let sign = p.sign();
        for k in 1..=n {
            let c = poly[k] * sign;
            if c != 0 {
                out[k - 1].add_term(p.clone(), F::from_i64(c) * inv_fact.clone());
            }
        }
    }
    Ok(out)
}

/// Process-wide cache of the rational idempotents for `n <= DEFAULT_IDEMPOTENT_CAP`.
pub fn cached_eulerian(n: usize) -> Result<Arc<Vec<GroupAlgebraElement<Rational>>>> {
    static CACHE: [OnceLock<Arc<Vec<GroupAlgebraElement<Rational>>>>; DEFAULT_IDEMPOTENT_CAP + 1] =
        [const { OnceLock::new() }; DEFAULT_IDEMPOTENT_CAP + 1];
    if n == 0 || n > DEFAULT_IDEMPOTENT_CAP {
        return eulerian_idempotents(n).map(Arc::new);
    }
    if let Some(v) = CACHE[n].get() {
        return Ok(v.clone());
    }
    let v = Arc::new(eulerian_idempotents(n)?);
    Ok(CACHE[n].get_or_init(|| v).clone())
}

/// `(1/n!) sum_σ sgn(σ) σ`.
pub fn signed_average<F: Field>(n: usize) -> GroupAlgebraElement<F> {
    let fact: i64 = (1..=n as i64).product();
    let inv = F::from_i64(fact).inv();
    GroupAlgebraElement::from_terms(
        n,
        Permutation::all(n).into_iter().map(|p| {
            let s = F::from_i64(p.sign());
            (p, s * inv.clone())
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn elem(n: usize, terms: &[(&str, i64, i64)]) -> GroupAlgebraElement<Rational> {
        GroupAlgebraElement::from_terms(n, terms.iter().map(|&(p, a, b)| (perm(p), q(a, b))))
    }

    #[test]
    fn descents() {
        assert_eq!(Permutation::identity(5).descent_count(), 0);
        assert_eq!(perm("54321").descent_count(), 4);
        assert_eq!(perm("3142").descent_count(), 2);
    }

    #[test]
    fn permutation_basics() {
        let s = perm("231");
        assert_eq!(s.compose(&s.inverse()), Permutation::identity(3));
        assert_eq!(s.sign(), 1);
        assert_eq!(perm("213").sign(), -1);
        assert_eq!(s.to_string(), "231");
        for (i, p) in Permutation::all(4).iter().enumerate() {
            assert_eq!(p.rank(), i);
        }
        assert!(Permutation::new(&[1, 1]).is_err());
        assert!("12a".parse::<Permutation>().is_err());
    }

    #[test]
    fn low_degree_idempotents() {
        let e2 = eulerian_idempotents::<Rational>(2).unwrap();
        assert_eq!(e2[0], elem(2, &[("12", 1, 2), ("21", 1, 2)]));
        assert_eq!(e2[1], elem(2, &[("12", 1, 2), ("21", -1, 2)]));
        let e3 = eulerian_idempotents::<Rational>(3).unwrap();
        assert_eq!(
            e3[0],
            elem(3, &[("123", 2, 6), ("321", -2, 6), ("132", 1, 6), ("231", -1, 6), ("213", 1, 6), ("312", -1, 6)])
        );
        assert_eq!(e3[1], elem(3, &[("123", 1, 2), ("321", 1, 2)]));
        assert_eq!(e3[2], signed_average(3));
    }

    #[test]
    fn idempotent_laws() {
        for n in 1..=5 {
            let e = eulerian_idempotents::<Rational>(n).unwrap();
            let mut sum = GroupAlgebraElement::zero(n);
            for k in 0..n {
                sum = sum.add(&e[k]);
                assert_eq!(e[k].mul(&e[k]), e[k], "n={n} k={k}");
                for l in 0..n {
                    if l != k {
                        assert!(e[k].mul(&e[l]).is_zero(), "n={n} k={k} l={l}");
                    }
                }
            }
            assert_eq!(sum, GroupAlgebraElement::identity(n));
            assert_eq!(e[n - 1], signed_average(n));
        }
    }

    #[test]
    fn product_matches_naive_convolution() {
        let a = elem(3, &[("231", 1, 2), ("213", -3, 1), ("123", 1, 1)]);
        let b = elem(3, &[("312", 2, 1), ("132", 1, 5)]);
        let mut naive = GroupAlgebraElement::zero(3);
        for (s, cs) in a.terms() {
            for (t, ct) in b.terms() {
                naive.add_term(s.compose(t), cs * ct);
            }
        }
        assert_eq!(a.mul(&b), naive);
    }

    #[test]
    fn tensor_action() {
        let e2 = eulerian_idempotents::<Rational>(2).unwrap();
        let t: BTreeMap<Vec<char>, Rational> = [(vec!['x', 'y'], q(1, 1))].into();
        let got = e2[0].act_on_tensor(&t).unwrap();
        let want: BTreeMap<Vec<char>, Rational> = [(vec!['x', 'y'], q(1, 2)), (vec!['y', 'x'], q(1, 2))].into();
        assert_eq!(got, want);
        assert_eq!(GroupAlgebraElement::identity(2).act_on_tensor(&t).unwrap(), t);
        let e3 = eulerian_idempotents::<Rational>(3).unwrap();
        let t3: BTreeMap<Vec<char>, Rational> = [(vec!['x', 'x', 'y'], q(1, 1))].into();
        assert!(e3[2].act_on_tensor(&t3).unwrap().is_empty());
        assert!(matches!(e3[0].act_on_tensor(&t), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            eulerian_idempotents::<Rational>(8),
            Err(Error::ResourceLimit { .. })
        ));
        assert_eq!(cached_eulerian(3).unwrap()[1], eulerian_idempotents(3).unwrap()[1]);
    }
}
