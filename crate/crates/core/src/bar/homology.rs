use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::chain::ChainVector;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial, QuotientAlgebra};
use crate::scalar::Field;
use crate::symgroup::{eulerian_idempotents_capped, GroupAlgebraElement, DEFAULT_IDEMPOTENT_CAP};

/// Largest chain slice built before giving up.
pub const DEFAULT_SLICE_CAP: usize = 200_000;

/// Positive-degree standard monomials up to a degree bound, with their
/// pairwise products in normal form.
#[derive(Clone, Debug)]
pub struct StandardBasis<F> {
    mons: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    degree: Vec<u64>,
    key: Vec<Vec<i64>>,
    by_degree: BTreeMap<u64, Vec<usize>>,
    products: HashMap<(usize, usize), Vec<(usize, F)>>,
}

impl<F: Field> StandardBasis<F> {
    /// `include_one` adds the unit (degree 0), used for cochain values.
    pub fn new(alg: &QuotientAlgebra<F>, degree_max: u64, include_one: bool) -> Result<Self> {
        if !alg.is_graded() {
            return Err(Error::NotGraded);
        }
        let mut mons: Vec<Monomial> = match alg.standard_monomials() {
            Some(all) => all.into_iter().filter(|m| alg.degree(m) <= degree_max).collect(),
            None => {
                let mut v = Vec::new();
                for d in 0..=degree_max {
                    v.extend(alg.monomial_basis_of_degree(d)?);
                }
                v
            }
        };
        mons.retain(|m| include_one || !m.is_one());
        mons.sort_by(|a, b| alg.degree(a).cmp(&alg.degree(b)).then_with(|| alg.order().cmp(a, b)));
        let index = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let degree: Vec<u64> = mons.iter().map(|m| alg.degree(m)).collect();
        let key = mons.iter().map(|m| alg.multidegree(m)).collect();
        let mut by_degree: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, &d) in degree.iter().enumerate() {
            by_degree.entry(d).or_default().push(i);
        }
        let mut basis = StandardBasis { mons, index, degree, key, by_degree, products: HashMap::new() };
        let n = basis.mons.len();
        for i in 0..n {
            for j in 0..n {
                if basis.degree[i] + basis.degree[j] > degree_max {
                    continue;
                }
                let prod = alg.normal_form(&Polynomial::term(basis.mons[i].mul(&basis.mons[j]), F::one()));
                let entry = prod
                    .into_terms()
                    .map(|(m, c)| (basis.index[&m], c))
                    .collect();
                basis.products.insert((i, j), entry);
            }
        }
        Ok(basis)
    }

    pub fn len(&self) -> usize {
        self.mons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mons.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.mons[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.degree[i]
    }

    pub fn key(&self, i: usize) -> &[i64] {
        &self.key[i]
    }

    /// Normal form of `m_i * m_j` in basis indices; `None` past the degree bound.
    pub fn product(&self, i: usize, j: usize) -> Option<&[(usize, F)]> {
        self.products.get(&(i, j)).map(|v| v.as_slice())
    }

    fn min_positive_degree(&self) -> Option<u64> {
        self.by_degree.keys().copied().find(|&d| d > 0)
    }

    /// All `p`-tuples of positive-degree basis indices with degree sum `d`.
    pub fn tuples(&self, p: usize, d: u64, cap: usize) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let Some(min) = self.min_positive_degree() else {
            return Ok(out);
        };
        let mut cur = Vec::with_capacity(p);
        self.tuples_rec(p, d, min, &mut cur, &mut out, cap)?;
        Ok(out)
    }

    fn tuples_rec(
        &self,
        p: usize,
        left: u64,
        min: u64,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        let slots = (p - cur.len()) as u64;
        if slots == 0 {
            if left == 0 {
                if out.len() >= cap {
                    return Err(Error::ResourceLimit { what: "chain slice", size: out.len() + 1, cap });
                }
                out.push(cur.clone());
            }
            return Ok(());
        }
        if left < slots * min {
            return Ok(());
        }
        let hi = left - (slots - 1) * min;
        for (&deg, idx) in self.by_degree.range(min..=hi) {
            for &i in idx {
                cur.push(i);
                self.tuples_rec(p, left - deg, min, cur, out, cap)?;
                cur.pop();
            }
        }
        Ok(())
    }

    pub fn tuple_key(&self, t: &[usize]) -> Vec<i64> {
        let mut k = vec![0i64; self.key.first().map_or(0, |v| v.len())];
        for &i in t {
            for (a, b) in k.iter_mut().zip(&self.key[i]) {
                *a += b;
            }
        }
        k
    }

    pub fn to_monomials(&self, t: &[usize]) -> Vec<Monomial> {
        t.iter().map(|&i| self.mons[i].clone()).collect()
    }

    /// Bar differential of a single basis tensor, in basis indices.
    pub fn boundary_of(&self, t: &[usize]) -> Vec<(Vec<usize>, F)> {
        let mut out = Vec::new();
        for i in 0..t.len().saturating_sub(1) {
            let prod = self.product(t[i], t[i + 1]).expect("product within degree bound");
            for (m, c) in prod {
                let mut s = Vec::with_capacity(t.len() - 1);
                s.extend_from_slice(&t[..i]);
                s.push(*m);
                s.extend_from_slice(&t[i + 2..]);
                out.push((s, if i % 2 == 0 { c.clone() } else { -c.clone() }));
            }
        }
        out
    }
}

/// One `(p, multidegree)` slice of the bar complex of `A_+`.
#[derive(Clone, Debug)]
struct Slice {
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Slice {
    fn new(tuples: Vec<Vec<usize>>) -> Self {
        let index = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Slice { tuples, index }
    }
}

/// Homology of one slice.
#[derive(Clone, Debug)]
pub struct SliceHomology<F> {
    pub p: usize,
    pub multidegree: Vec<i64>,
    pub degree: u64,
    pub chain_dim: usize,
    pub dim: usize,
    /// `bgs[k-1] = dim H_{p,k}` when the Hodge splitting was requested.
    pub bgs: Option<Vec<usize>>,
    pub representatives: Vec<ChainVector<F>>,
}

/// Degreewise homology of the bar complex of `A_+`.
#[derive(Clone, Debug)]
pub struct BarHomology<F> {
    pub p_max: usize,
    pub degree_max: u64,
    /// Nonzero slices, ordered by `(p, degree, multidegree)`.
    pub slices: Vec<SliceHomology<F>>,
}

impl<F> BarHomology<F> {
    pub fn total(&self, p: usize) -> usize {
        self.slices.iter().filter(|s| s.p == p).map(|s| s.dim).sum()
    }

    /// Total of `H_{p,k}`; `None` without the Hodge splitting.
    pub fn bgs_total(&self, p: usize, k: usize) -> Option<usize> {
        let mut sum = 0;
        for s in self.slices.iter().filter(|s| s.p == p) {
            sum += s.bgs.as_ref()?.get(k.checked_sub(1)?).copied().unwrap_or(0);
        }
        Some(sum)
    }

    pub fn by_degree(&self) -> BTreeMap<(usize, u64), usize> {
        let mut out = BTreeMap::new();
        for s in &self.slices {
            *out.entry((s.p, s.degree)).or_insert(0) += s.dim;
        }
        out
    }

    pub fn bgs_by_degree(&self) -> BTreeMap<(usize, usize, u64), usize> {
        let mut out = BTreeMap::new();
        for s in &self.slices {
            if let Some(b) = &s.bgs {
                for (k, &d) in b.iter().enumerate() {
                    if d > 0 {
                        *out.entry((s.p, k + 1, s.degree)).or_insert(0) += d;
                    }
                }
            }
        }
        out
    }
}

/// The bar complex of `A_+` for a graded algebra, cut at tensor length
/// `p_max + 1` and weighted degree `degree_max`, split into slices by the
/// finest grading of the relations.
pub struct BarComplex<F> {
    basis: StandardBasis<F>,
    p_max: usize,
    degree_max: u64,
    slices: HashMap<(usize, Vec<i64>), Slice>,
    idempotent_cap: usize,
}

impl<F: Field> BarComplex<F> {
    pub fn new(alg: &QuotientAlgebra<F>, p_max: usize, degree_max: u64) -> Result<Self> {
        Self::with_caps(alg, p_max, degree_max, DEFAULT_SLICE_CAP, DEFAULT_IDEMPOTENT_CAP)
    }

    pub fn with_caps(
        alg: &QuotientAlgebra<F>,
        p_max: usize,
        degree_max: u64,
        slice_cap: usize,
        idempotent_cap: usize,
    ) -> Result<Self> {
        if p_max == 0 {
            return Err(Error::OutOfRange("p_max must be at least 1".into()));
        }
        let basis = StandardBasis::new(alg, degree_max, false)?;
        let jobs: Vec<(usize, u64)> = (1..=p_max + 1)
            .flat_map(|p| (1..=degree_max).map(move |d| (p, d)))
            .collect();
        let groups: Vec<Vec<((usize, Vec<i64>), Slice)>> = jobs
            .par_iter()
            .map(|&(p, d)| {
                let tuples = basis.tuples(p, d, slice_cap)?;
                let mut by_key: BTreeMap<Vec<i64>, Vec<Vec<usize>>> = BTreeMap::new();
                for t in tuples {
                    by_key.entry(basis.tuple_key(&t)).or_default().push(t);
                }
                Ok(by_key.into_iter().map(|(k, ts)| ((p, k), Slice::new(ts))).collect())
            })
            .collect::<Result<_>>()?;
        let slices = groups.into_iter().flatten().collect();
        Ok(BarComplex { basis, p_max, degree_max, slices, idempotent_cap })
    }

    pub fn basis(&self) -> &StandardBasis<F> {
        &self.basis
    }

    fn slice_degree(&self, key: &[i64], p: usize) -> u64 {
        let t = &self.slices[&(p, key.to_vec())].tuples[0];
        t.iter().map(|&i| self.basis.degree(i)).sum()
    }

    /// Images of the basis of slice `(p, key)` under `d`, in slice `(p-1, key)` coordinates.
    fn boundary_columns(&self, p: usize, key: &[i64]) -> Vec<SparseVec<F>> {
        let Some(src) = self.slices.get(&(p, key.to_vec())) else {
            return vec![];
        };
        let empty = Slice::new(vec![]);
        let dst = self.slices.get(&(p - 1, key.to_vec())).unwrap_or(&empty);
        src.tuples
            .iter()
            .map(|t| {
                let mut v = SparseVec::new();
                for (s, c) in self.basis.boundary_of(t) {
                    crate::linalg::add_entry(&mut v, dst.index[&s], c);
                }
                v
            })
            .collect()
    }

    fn to_sparse(&self, slice: &Slice, c: &ChainVector<F>) -> Option<SparseVec<F>> {
        let mut v = SparseVec::new();
        for (t, a) in c.terms() {
            let idx: Option<Vec<usize>> = t.iter().map(|m| self.basis.index_of(m)).collect();
            let j = *slice.index.get(&idx?)?;
            crate::linalg::add_entry(&mut v, j, a.clone());
        }
        Some(v)
    }

    fn from_sparse(&self, slice: &Slice, v: &SparseVec<F>) -> ChainVector<F> {
        ChainVector::from_terms(v.iter().map(|(&j, c)| (self.basis.to_monomials(&slice.tuples[j]), c.clone())))
    }

    fn slice_homology(&self, p: usize, key: &[i64], bgs: Option<&[GroupAlgebraElement<F>]>) -> Result<SliceHomology<F>> {
        let slice = &self.slices[&(p, key.to_vec())];
        let n = slice.tuples.len();
        let cycles: Vec<SparseVec<F>> = if p == 1 {
            (0..n).map(|i| [(i, F::one())].into_iter().collect()).collect()
        } else {
            let mut ech = Echelon::tracking();
            let mut ker = Vec::new();
            for (i, col) in self.boundary_columns(p, key).into_iter().enumerate() {
                if let Some(k) = ech.insert_labelled(col, i) {
                    ker.push(k);
                }
            }
            ker
        };
        let mut boundaries = Echelon::new();
        for col in self.boundary_columns(p + 1, key) {
            boundaries.insert(col);
        }
        let mut span = boundaries.clone();
        let mut reps = Vec::new();
        for mut z in cycles {
            boundaries.reduce(&mut z);
            if span.insert(z.clone()) {
                reps.push(z);
            }
        }
        let dim = reps.len();
        let bgs_dims = match bgs {
            Some(idem) if dim > 0 => {
                let mut dims = Vec::with_capacity(p);
                for e in idem {
                    let mut span = boundaries.clone();
                    let mut count = 0;
                    for z in &reps {
                        let mut img = self.project(slice, e, z)?;
                        if !self.boundary_is_zero(p, key, &img) {
                            return Err(Error::Precondition(
                                "idempotent does not map cycles to cycles".into(),
                            ));
                        }
                        boundaries.reduce(&mut img);
                        if span.insert(img) {
                            count += 1;
                        }
                    }
                    dims.push(count);
                }
                Some(dims)
            }
            Some(_) => Some(vec![0; p]),
            None => None,
        };
        Ok(SliceHomology {
            p,
            multidegree: key.to_vec(),
            degree: self.slice_degree(key, p),
            chain_dim: n,
            dim,
            bgs: bgs_dims,
            representatives: reps.iter().map(|z| self.from_sparse(slice, z)).collect(),
        })
    }

    fn project(&self, slice: &Slice, e: &GroupAlgebraElement<F>, z: &SparseVec<F>) -> Result<SparseVec<F>> {
        let tensors: BTreeMap<Vec<usize>, F> = z.iter().map(|(&j, c)| (slice.tuples[j].clone(), c.clone())).collect();
        let img = e.act_on_tensor(&tensors)?;
        let mut v = SparseVec::new();
        for (t, c) in img {
            crate::linalg::add_entry(&mut v, slice.index[&t], c);
        }
        Ok(v)
    }

    fn boundary_is_zero(&self, p: usize, key: &[i64], v: &SparseVec<F>) -> bool {
        if p == 1 {
            return true;
        }
        let slice = &self.slices[&(p, key.to_vec())];
        let mut acc: HashMap<Vec<usize>, F> = HashMap::new();
        for (&j, c) in v {
            for (s, a) in self.basis.boundary_of(&slice.tuples[j]) {
                let e = acc.entry(s).or_insert_with(F::zero);
                *e = e.clone() + a * c.clone();
            }
        }
        acc.values().all(|c| c.is_zero())
    }

    /// Homology for `1 <= p <= p_max`, optionally split by the Eulerian idempotents.
    pub fn homology(&self, bgs: bool) -> Result<BarHomology<F>> {
        let idem: Vec<Option<Vec<GroupAlgebraElement<F>>>> = (0..=self.p_max)
            .map(|p| {
                if bgs && p > 0 {
                    eulerian_idempotents_capped(p, self.idempotent_cap).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        let mut keys: Vec<(usize, Vec<i64>)> = self.slices.keys().filter(|(p, _)| *p <= self.p_max).cloned().collect();
        keys.sort();
        let results: Vec<SliceHomology<F>> = keys
            .par_iter()
            .map(|(p, key)| self.slice_homology(*p, key, idem[*p].as_deref()))
            .collect::<Result<_>>()?;
        let mut slices: Vec<SliceHomology<F>> = results.into_iter().filter(|s| s.dim > 0).collect();
        slices.sort_by(|a, b| (a.p, a.degree, &a.multidegree).cmp(&(b.p, b.degree, &b.multidegree)));
        Ok(BarHomology { p_max: self.p_max, degree_max: self.degree_max, slices })
    }

    /// Dimension of the span of the given cycles in homology. Errors if a
    /// chain leaves the computed range or is not a cycle.
    pub fn homology_rank(&self, chains: &[ChainVector<F>]) -> Result<usize> {
        let mut parts: BTreeMap<(usize, Vec<i64>), Vec<Vec<(Vec<usize>, F)>>> = BTreeMap::new();
        for (ci, c) in chains.iter().enumerate() {
            for (t, a) in c.terms() {
                let idx: Vec<usize> = t
                    .iter()
                    .map(|m| self.basis.index_of(m))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::OutOfRange("chain factor outside the degree range".into()))?;
                let key = (t.len(), self.basis.tuple_key(&idx));
                let slot = parts.entry(key).or_insert_with(|| vec![vec![]; chains.len()]);
                slot[ci].push((idx, a.clone()));
            }
        }
        let mut offsets = BTreeMap::new();
        let mut total = 0usize;
        for key in parts.keys() {
            let (p, _) = key;
            if *p > self.p_max {
                return Err(Error::OutOfRange(format!("tensor length {p} above p_max")));
            }
            let slice = self
                .slices
                .get(key)
                .ok_or_else(|| Error::OutOfRange("chain outside the degree range".into()))?;
            offsets.insert(key.clone(), total);
            total += slice.tuples.len();
        }
        let mut span = Echelon::new();
        for (key, &off) in &offsets {
            for col in self.boundary_columns(key.0 + 1, &key.1) {
                span.insert(col.into_iter().map(|(j, c)| (j + off, c)).collect());
            }
        }
        let mut rank = 0;
        for ci in 0..chains.len() {
            let mut v = SparseVec::new();
            for (key, per_chain) in &parts {
                let slice = &self.slices[key];
                let mut local = SparseVec::new();
                for (t, a) in &per_chain[ci] {
                    crate::linalg::add_entry(&mut local, slice.index[t], a.clone());
                }
                if !self.boundary_is_zero(key.0, &key.1, &local) {
                    return Err(Error::Precondition("chain is not a cycle".into()));
                }
                for (j, c) in local {
                    v.insert(j + offsets[key], c);
                }
            }
            if span.insert(v) {
                rank += 1;
            }
        }
        Ok(rank)
    }

    /// Applies `d` using the cached product table.
    pub fn differential(&self, c: &ChainVector<F>) -> Result<ChainVector<F>> {
        let mut out = ChainVector::zero();
        for (t, a) in c.terms() {
            let idx: Vec<usize> = t
                .iter()
                .map(|m| self.basis.index_of(m))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::OutOfRange("chain factor outside the degree range".into()))?;
            for (s, b) in self.basis.boundary_of(&idx) {
                out.add_term(self.basis.to_monomials(&s), a.clone() * b);
            }
        }
        Ok(out)
    }

    /// Basis tensors of a slice, for sampling.
    pub fn slice_tensors(&self, p: usize, degree: u64) -> Vec<Vec<Monomial>> {
        let mut keys: Vec<&(usize, Vec<i64>)> = self
            .slices
            .keys()
            .filter(|(q, k)| *q == p && self.slice_degree(k, p) == degree)
            .collect();
        keys.sort();
        keys.into_iter()
            .flat_map(|k| self.slices[k].tuples.iter().map(|t| self.basis.to_monomials(t)))
            .collect()
    }

    #[doc(hidden)]
    pub fn to_slice_vector(&self, p: usize, key: &[i64], c: &ChainVector<F>) -> Option<SparseVec<F>> {
        self.to_sparse(self.slices.get(&(p, key.to_vec()))?, c)
    }
}

/// Homology dimensions of the bar complex of `A_+` per `(p, degree)`.
pub fn homology_dimensions<F: Field>(alg: &QuotientAlgebra<F>, p_max: usize, degree_max: u64) -> Result<BarHomology<F>> {
    BarComplex::new(alg, p_max, degree_max)?.homology(false)
}

/// As [`homology_dimensions`], with each slice split into `H_{p,k}`.
pub fn bgs_homology_dimensions<F: Field>(
    alg: &QuotientAlgebra<F>,
    p_max: usize,
    degree_max: u64,
) -> Result<BarHomology<F>> {
    BarComplex::new(alg, p_max, degree_max)?.homology(true)
}
