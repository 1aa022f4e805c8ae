use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::chain::{bar_differential, ChainVector};
use super::homology::StandardBasis;
use crate::error::{Error, Result};
use crate::linalg::{add_entry, Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial, QuotientAlgebra};
use crate::scalar::Field;
use crate::symgroup::{eulerian_idempotents_capped, GroupAlgebraElement, DEFAULT_IDEMPOTENT_CAP};
use crate::Rational;

/// A `p`-cochain `A_+^{⊗p} -> A` given on finitely many basis tensors and
/// zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain<F> {
    p: usize,
    values: BTreeMap<Vec<Monomial>, Polynomial<F>>,
}

impl<F: Field> Cochain<F> {
    pub fn zero(p: usize) -> Self {
        Cochain { p, values: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.p
    }

    pub fn set(&mut self, args: Vec<Monomial>, value: Polynomial<F>) {
        assert_eq!(args.len(), self.p, "cochain arity mismatch");
        if value.is_zero() {
            self.values.remove(&args);
        } else {
            self.values.insert(args, value);
        }
    }

    pub fn values(&self) -> impl Iterator<Item = (&Vec<Monomial>, &Polynomial<F>)> {
        self.values.iter()
    }

    /// `C(a_1, …, a_p)` on a basis tensor; `nvars` sizes the zero result.
    pub fn at(&self, args: &[Monomial], nvars: usize) -> Polynomial<F> {
        self.values.get(args).cloned().unwrap_or_else(|| Polynomial::zero(nvars))
    }

    pub fn eval(&self, alg: &QuotientAlgebra<F>, c: &ChainVector<F>) -> Polynomial<F> {
        let mut out = Polynomial::zero(alg.nvars());
        for (t, a) in c.terms() {
            if let Some(v) = self.values.get(t) {
                out = &out + &v.scale(a);
            }
        }
        out
    }

    /// `(δC)(a_1, …, a_{p+1}) = a_1 C(a_2, …) - C(d a) - (-1)^p C(a_1, …, a_p) a_{p+1}`.
    pub fn coboundary_at(&self, alg: &QuotientAlgebra<F>, args: &[Monomial]) -> Polynomial<F> {
        assert_eq!(args.len(), self.p + 1, "coboundary needs p+1 arguments");
        let n = alg.nvars();
        let mono = |m: &Monomial| Polynomial::term(m.clone(), F::one());
        let first = &mono(&args[0]) * &self.at(&args[1..], n);
        let last = &self.at(&args[..self.p], n) * &mono(&args[self.p]);
        let d = bar_differential(alg, &ChainVector::tensor(args.to_vec(), F::one()));
        let mid = self.eval(alg, &d);
        let v = if self.p % 2 == 0 { &(&first - &mid) - &last } else { &(&first - &mid) + &last };
        alg.normal_form(&v)
    }

    pub fn coboundary_on(&self, alg: &QuotientAlgebra<F>, c: &ChainVector<F>) -> Polynomial<F> {
        let mut out = Polynomial::zero(alg.nvars());
        for (t, a) in c.terms() {
            out = &out + &self.coboundary_at(alg, t).scale(a);
        }
        out
    }

    /// `(C·g)(t) = C(g·t)`.
    pub fn act(&self, g: &GroupAlgebraElement<F>) -> Result<Self> {
        if g.degree() != self.p {
            return Err(Error::DegreeMismatch { expected: self.p, actual: g.degree() });
        }
        let mut acc: BTreeMap<Vec<Monomial>, Polynomial<F>> = BTreeMap::new();
        for (s, v) in &self.values {
            for (sigma, c) in g.terms() {
                let t = sigma.inverse().act_on_slots(s);
                let e = acc.entry(t).or_insert_with(|| Polynomial::zero(v.nvars()));
                *e = &*e + &v.scale(c);
            }
        }
        let mut out = Self::zero(self.p);
        for (t, v) in acc {
            out.set(t, v);
        }
        Ok(out)
    }
}

/// Dimensions of `H^p` of the cochain complex `Hom(A_+^{⊗p}, A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyRow {
    pub p: usize,
    pub dim: usize,
    /// Per weight `deg(value) - deg(argument)`.
    pub by_weight: BTreeMap<i64, usize>,
    /// `hodge[k-1] = dim H^{p,k}`; empty for `p = 0` or when not requested.
    pub hodge: Vec<usize>,
}

type CochainBasis = (Vec<usize>, usize);

/// The full cochain complex of a finite-dimensional graded algebra, split
/// by weight, for `p <= p_max + 1`.
pub struct FiniteCochainComplex<F> {
    basis: StandardBasis<F>,
    p_max: usize,
    /// `slices[p][w]`
    slices: Vec<HashMap<i64, (Vec<CochainBasis>, HashMap<CochainBasis, usize>)>>,
    coproduct: Vec<Vec<(usize, usize, F)>>,
    positive: Vec<usize>,
    idempotent_cap: usize,
}

impl<F: Field> FiniteCochainComplex<F> {
    pub fn new(alg: &QuotientAlgebra<F>, p_max: usize, cap: usize) -> Result<Self> {
        let all = alg
            .standard_monomials()
            .ok_or_else(|| Error::Precondition("algebra is not finite-dimensional".into()))?;
        let top = all.iter().map(|m| alg.degree(m)).max().unwrap_or(0);
        let basis = StandardBasis::new(alg, 2 * top, true)?;
        let n = basis.len();
        let positive: Vec<usize> = (0..n).filter(|&i| basis.degree(i) > 0).collect();
        let mut coproduct = vec![Vec::new(); n];
        for &b in &positive {
            for &c in &positive {
                for (r, coef) in basis.product(b, c).unwrap() {
                    coproduct[*r].push((b, c, coef.clone()));
                }
            }
        }
        let mut slices = Vec::new();
        let mut size = 0usize;
        for p in 0..=p_max + 1 {
            let tuples: Vec<Vec<usize>> = if p == 0 {
                vec![vec![]]
            } else {
                let mut v = Vec::new();
                for d in p as u64..=p as u64 * top {
                    v.extend(basis.tuples(p, d, cap)?);
                }
                v
            };
            size += tuples.len() * n;
            if size > cap {
                return Err(Error::ResourceLimit { what: "cochain complex", size, cap });
            }
            let mut by_w: HashMap<i64, (Vec<CochainBasis>, HashMap<CochainBasis, usize>)> = HashMap::new();
            for t in &tuples {
                let din: u64 = t.iter().map(|&i| basis.degree(i)).sum();
                for m in 0..n {
                    let w = basis.degree(m) as i64 - din as i64;
                    let e = by_w.entry(w).or_default();
                    e.1.insert((t.clone(), m), e.0.len());
                    e.0.push((t.clone(), m));
                }
            }
            slices.push(by_w);
        }
        Ok(FiniteCochainComplex {
            basis,
            p_max,
            slices,
            coproduct,
            positive,
            idempotent_cap: DEFAULT_IDEMPOTENT_CAP,
        })
    }

    /// `δ` of the basis cochain sending `t` to `m` and every other tensor to zero.
    fn coboundary_of(&self, t: &[usize], m: usize) -> Vec<(CochainBasis, F)> {
        let p = t.len();
        let mut out = Vec::new();
        let last_sign = if p % 2 == 0 { -F::one() } else { F::one() };
        for &a in &self.positive {
            let mut u = vec![a];
            u.extend_from_slice(t);
            for (r, c) in self.basis.product(a, m).unwrap() {
                out.push(((u.clone(), *r), c.clone()));
            }
            let mut u = t.to_vec();
            u.push(a);
            for (r, c) in self.basis.product(m, a).unwrap() {
                out.push(((u.clone(), *r), last_sign.clone() * c.clone()));
            }
        }
        for i in 0..p {
            for (b, c, coef) in &self.coproduct[t[i]] {
                let mut u = Vec::with_capacity(p + 1);
                u.extend_from_slice(&t[..i]);
                u.push(*b);
                u.push(*c);
                u.extend_from_slice(&t[i + 1..]);
                let sign = if i % 2 == 0 { -coef.clone() } else { coef.clone() };
                out.push(((u, m), sign));
            }
        }
        out
    }

    fn columns(&self, p: usize, w: i64) -> Vec<SparseVec<F>> {
        let Some((src, _)) = self.slices[p].get(&w) else {
            return vec![];
        };
        let dst = self.slices.get(p + 1).and_then(|s| s.get(&w));
        src.iter()
            .map(|(t, m)| {
                let mut v = SparseVec::new();
                for (key, c) in self.coboundary_of(t, *m) {
                    let idx = dst.expect("target slice exists").1[&key];
                    add_entry(&mut v, idx, c);
                }
                v
            })
            .collect()
    }

    fn apply(&self, p: usize, w: i64, v: &SparseVec<F>) -> SparseVec<F> {
        let (src, _) = &self.slices[p][&w];
        let mut out = SparseVec::new();
        let Some((_, dst)) = self.slices[p + 1].get(&w) else {
            return out;
        };
        for (&j, a) in v {
            let (t, m) = &src[j];
            for (key, c) in self.coboundary_of(t, *m) {
                add_entry(&mut out, dst[&key], c * a.clone());
            }
        }
        out
    }

    /// `C ↦ C·g` on slice coordinates.
    fn act(&self, p: usize, w: i64, g: &GroupAlgebraElement<F>, v: &SparseVec<F>) -> SparseVec<F> {
        let (src, index) = &self.slices[p][&w];
        let mut out = SparseVec::new();
        for (&j, a) in v {
            let (s, m) = &src[j];
            for (sigma, c) in g.terms() {
                let t = sigma.inverse().act_on_slots(s);
                add_entry(&mut out, index[&(t, *m)], c.clone() * a.clone());
            }
        }
        out
    }

    fn slice_cohomology(&self, p: usize, w: i64, idem: Option<&[GroupAlgebraElement<F>]>) -> Result<(usize, Vec<usize>)> {
        let n = self.slices[p][&w].0.len();
        let mut ech = Echelon::tracking();
        let mut cocycles = Vec::new();
        for (i, col) in self.columns(p, w).into_iter().enumerate() {
            if let Some(k) = ech.insert_labelled(col, i) {
                cocycles.push(k);
            }
        }
        debug_assert_eq!(cocycles.len() + ech.rank(), n);
        let mut boundaries = Echelon::new();
        if p > 0 {
            for col in self.columns(p - 1, w) {
                boundaries.insert(col);
            }
        }
        let mut span = boundaries.clone();
        let mut reps = Vec::new();
        for mut z in cocycles {
            boundaries.reduce(&mut z);
            if span.insert(z.clone()) {
                reps.push(z);
            }
        }
        let mut hodge = Vec::new();
        if let Some(idem) = idem {
            for e in idem {
                let mut span = boundaries.clone();
                let mut count = 0;
                for z in &reps {
                    let mut img = self.act(p, w, e, z);
                    if !self.apply(p, w, &img).is_empty() {
                        return Err(Error::Precondition("idempotent does not map cocycles to cocycles".into()));
                    }
                    boundaries.reduce(&mut img);
                    if span.insert(img) {
                        count += 1;
                    }
                }
                hodge.push(count);
            }
        }
        Ok((reps.len(), hodge))
    }

    /// `H^p` for `0 <= p <= p_max`, with Hodge parts for `p >= 1` if requested.
    pub fn cohomology(&self, hodge: bool) -> Result<Vec<CohomologyRow>> {
        let mut rows = Vec::new();
        for p in 0..=self.p_max {
            let idem = if hodge && p > 0 {
                Some(eulerian_idempotents_capped::<F>(p, self.idempotent_cap)?)
            } else {
                None
            };
            let mut weights: Vec<i64> = self.slices[p].keys().copied().collect();
            weights.sort();
            let per: Vec<(i64, usize, Vec<usize>)> = weights
                .par_iter()
                .map(|&w| self.slice_cohomology(p, w, idem.as_deref()).map(|(d, h)| (w, d, h)))
                .collect::<Result<_>>()?;
            let mut row = CohomologyRow { p, dim: 0, by_weight: BTreeMap::new(), hodge: vec![0; idem.as_ref().map_or(0, |_| p)] };
            for (w, d, h) in per {
                if d > 0 {
                    row.by_weight.insert(w, d);
                    row.dim += d;
                }
                for (a, b) in row.hodge.iter_mut().zip(h) {
                    *a += b;
                }
            }
            rows.push(row);
        }
        Ok(rows)
    }
}

/// `Q[z]/(z^n)`.
pub fn truncated_polynomial_algebra(n: u32) -> Result<QuotientAlgebra<Rational>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("need n >= 2, got {n}")));
    }
    QuotientAlgebra::new(vec!["z".into()], vec![Polynomial::var(1, 0).pow(n)])
}

/// Cochain cohomology of `Q[z]/(z^n)` with Hodge parts, `p <= p_max`.
pub fn xn_cohomology(n: u32, p_max: usize) -> Result<Vec<CohomologyRow>> {
    xn_cohomology_capped(n, p_max, super::homology::DEFAULT_SLICE_CAP)
}

pub fn xn_cohomology_capped(n: u32, p_max: usize, cap: usize) -> Result<Vec<CohomologyRow>> {
    let alg = truncated_polynomial_algebra(n)?;
    FiniteCochainComplex::new(&alg, p_max, cap)?.cohomology(true)
}
