use std::collections::{BTreeMap, HashMap};

use super::cohomology::{DimensionEntry, GradedDimensionTable, MonomialCache};
use super::complex::CompleteIntersection;
use crate::error::{Error, Result};
use crate::linalg::{add_entry, Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial, QuotientAlgebra};
use crate::scalar::Field;

/// Kernel and cokernel of the Jacobian map `A^n → A^m`,
/// `(a_i) ↦ (sum_i a_i ∂f_j/∂z_i)_j`.
///
/// Internal degrees follow the cohomology complex: the coefficient of `η_i`
/// sits at `deg(a) - w_i` and the coefficient of `b_j` at `deg(a) - wt(f_j)`.
#[derive(Clone, Debug)]
pub struct HarrisonPresentation<F> {
    /// `dim` of the tangent fields `V_R` per internal degree (graded input).
    pub kernel_series: BTreeMap<i64, usize>,
    /// `dim` of the cokernel per internal degree (graded input) or per
    /// weighted degree of the standard monomials (filtered input).
    pub cokernel_series: BTreeMap<i64, usize>,
    /// Monomial basis `(j, m)` of the cokernel when it is finite.
    pub cokernel_basis: Option<Vec<(usize, Monomial)>>,
    /// Finite cokernel, i.e. the singularity is isolated.
    pub isolated: bool,
    pub exact: bool,
    pub cutoff: i64,
    marker: std::marker::PhantomData<F>,
}

impl<F> HarrisonPresentation<F> {
    pub fn cokernel_dim(&self) -> Option<usize> {
        self.cokernel_basis.as_ref().map(|b| b.len())
    }
}

/// Harrison `H^1` (kernel) and `H^2` (cokernel) of the Jacobian map.
pub fn harrison_1_2<F: Field>(ci: &CompleteIntersection<F>, cutoff: i64) -> Result<HarrisonPresentation<F>> {
    if ci.is_graded() {
        graded_harrison(ci, cutoff)
    } else if ci.ngens() == 1 {
        filtered_harrison(ci, cutoff)
    } else {
        Err(Error::Precondition(
            "Harrison presentation of non-quasi-homogeneous input needs a single relation".into(),
        ))
    }
}

fn graded_harrison<F: Field>(ci: &CompleteIntersection<F>, cutoff: i64) -> Result<HarrisonPresentation<F>> {
    let alg = ci.algebra();
    let mons = MonomialCache::new(alg);
    let (n, m) = (ci.nvars(), ci.ngens());
    let jac: Vec<Vec<Polynomial<F>>> = ci.jacobian().iter().map(|r| r.iter().map(|c| alg.normal_form(c)).collect()).collect();
    let w: Vec<i64> = ci.weights().iter().map(|&x| x as i64).collect();
    let wf: Vec<i64> = (0..m).map(|j| ci.relation_weight(j)).collect();
    let lo = -wf.iter().max().copied().unwrap_or(0);
    let mut kernel_series = BTreeMap::new();
    let mut cokernel_series = BTreeMap::new();
    let mut basis = Vec::new();
    for d in lo..=cutoff {
        // Target basis: largest monomials first, so non-pivots are the small ones.
        let mut target: Vec<(usize, Monomial)> = Vec::new();
        for (j, &wj) in wf.iter().enumerate() {
            let mut ms = mons.get(d + wj).as_ref().clone();
            ms.sort_by(|a, b| alg.order().cmp(b, a));
            target.extend(ms.into_iter().map(|mm| (j, mm)));
        }
        let index: HashMap<(usize, Monomial), usize> =
            target.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut ech = Echelon::new();
        let mut nsrc = 0;
        for (i, &wi) in w.iter().enumerate().take(n) {
            for a in mons.get(d + wi).iter() {
                nsrc += 1;
                let mut v = SparseVec::new();
                for (j, row) in jac.iter().enumerate() {
                    let img = alg.normal_form(&row[i].mul_term(a, &F::one()));
                    for (mm, c) in img.into_terms() {
                        add_entry(&mut v, index[&(j, mm)], c);
                    }
                }
                ech.insert(v);
            }
        }
        if nsrc > ech.rank() {
            kernel_series.insert(d, nsrc - ech.rank());
        }
        let free = ech.non_pivots(target.len());
        if !free.is_empty() {
            cokernel_series.insert(d, free.len());
            basis.extend(free.into_iter().map(|k| target[k].clone()));
        }
    }
    // The cokernel is generated in degrees <= max_j(-wt f_j); once it vanishes
    // on a run of max(w_i) consecutive degrees above that, it vanishes for good.
    let top_gen = wf.iter().map(|x| -x).max().unwrap_or(0);
    let run = w.iter().max().copied().unwrap_or(1);
    let mut zeros = 0;
    let mut isolated = false;
    for d in top_gen + 1..=cutoff {
        if cokernel_series.contains_key(&d) {
            zeros = 0;
        } else {
            zeros += 1;
            if zeros >= run {
                isolated = true;
                break;
            }
        }
    }
    Ok(HarrisonPresentation {
        kernel_series,
        cokernel_series,
        cokernel_basis: isolated.then_some(basis),
        isolated,
        exact: true,
        cutoff,
        marker: Default::default(),
    })
}

fn filtered_harrison<F: Field>(ci: &CompleteIntersection<F>, cutoff: i64) -> Result<HarrisonPresentation<F>> {
    let tj = tjurina_ideal(ci)?;
    let mut cokernel_series = BTreeMap::new();
    for d in 0..=cutoff.max(0) as u64 {
        let k = tj.monomial_basis_of_degree(d)?.len();
        if k > 0 {
            cokernel_series.insert(d as i64, k);
        }
    }
    let basis = tj.standard_monomials().map(|v| v.into_iter().map(|mm| (0, mm)).collect());
    Ok(HarrisonPresentation {
        kernel_series: BTreeMap::new(),
        cokernel_series,
        isolated: basis.is_some(),
        cokernel_basis: basis,
        exact: false,
        cutoff,
        marker: Default::default(),
    })
}

/// `P / (f, ∂f/∂z_1, …, ∂f/∂z_n)` for a single relation.
pub fn tjurina_ideal<F: Field>(ci: &CompleteIntersection<F>) -> Result<QuotientAlgebra<F>> {
    let [f] = ci.relations() else {
        return Err(Error::Precondition("the Tjurina ideal needs a single relation".into()));
    };
    let mut gens = vec![f.clone()];
    gens.extend((0..ci.nvars()).map(|i| f.partial_derivative(i)).filter(|g| !g.is_zero()));
    QuotientAlgebra::with_weights(ci.algebra().vars().to_vec(), gens, ci.weights().to_vec())
}

/// Cohomology of the plane-curve block `A → A² → A`, maps `(∂_1 f, ∂_2 f)`
/// and `(∂_2 f, -∂_1 f)`, repeated for `k = 1..=k_max`.
#[derive(Clone, Debug)]
pub struct PeriodicBlock<F> {
    /// Entries `p = 2k + slot`, Hodge `k + 1`, internal degrees as in the
    /// cohomology complex.
    pub table: GradedDimensionTable,
    /// Basis of `{a : a ∂_1 f = a ∂_2 f = 0}` by degree of `a`.
    pub annihilator: BTreeMap<i64, Vec<Polynomial<F>>>,
    algebra: QuotientAlgebra<F>,
}

impl<F: Field> PeriodicBlock<F> {
    /// Whether `a` (homogeneous) lies in the annihilator slot; `None` past
    /// the computed degrees.
    pub fn annihilator_contains(&self, a: &Polynomial<F>) -> Option<bool> {
        let a = self.algebra.normal_form(a);
        if a.is_zero() {
            return Some(true);
        }
        let w = self.algebra.weights();
        if !a.is_homogeneous(w) {
            return Some(false);
        }
        let d = a.weighted_degree(w)? as i64;
        let basis = self.annihilator.get(&d);
        if basis.is_none() && d > *self.annihilator.keys().last().unwrap_or(&-1) {
            return None;
        }
        let mut index: HashMap<Monomial, usize> = HashMap::new();
        let mut vec_of = |p: &Polynomial<F>| -> SparseVec<F> {
            p.terms()
                .map(|(m, c)| {
                    let n = index.len();
                    (*index.entry(m.clone()).or_insert(n), c.clone())
                })
                .collect()
        };
        let mut ech = Echelon::new();
        for b in basis.into_iter().flatten() {
            ech.insert(vec_of(b));
        }
        Some(!ech.insert(vec_of(&a)))
    }
}

pub fn periodic_block<F: Field>(ci: &CompleteIntersection<F>, k_max: usize, cutoff: i64) -> Result<PeriodicBlock<F>> {
    if ci.nvars() != 2 || ci.ngens() != 1 {
        return Err(Error::Precondition("the periodic block needs a plane curve".into()));
    }
    if !ci.is_graded() {
        return Err(Error::NotGraded);
    }
    let alg = ci.algebra();
    let mons = MonomialCache::new(alg);
    let f = &ci.relations()[0];
    let f1 = alg.normal_form(&f.partial_derivative(0));
    let f2 = alg.normal_form(&f.partial_derivative(1));
    let (w1, w2) = (ci.weights()[0] as i64, ci.weights()[1] as i64);
    let wf = ci.relation_weight(0);
    let shift = |h: i64| -w1 - w2 - (h - 2) * wf;
    let lo = -(2 * wf - w1 - w2);
    let hi = cutoff - shift(2);
    let mut degrees = Vec::new();
    let mut annihilator = BTreeMap::new();
    for d in lo..=hi {
        let s0 = mons.get(d);
        let s1a = mons.get(d + wf - w1);
        let s1b = mons.get(d + wf - w2);
        let s2 = mons.get(d + 2 * wf - w1 - w2);
        let idx1: HashMap<(usize, Monomial), usize> = s1a
            .iter()
            .map(|m| (0, m.clone()))
            .chain(s1b.iter().map(|m| (1, m.clone())))
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        let idx2: HashMap<Monomial, usize> = s2.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let image = |c: &Polynomial<F>, m: &Monomial| alg.normal_form(&c.mul_term(m, &F::one()));
        let mut first = Echelon::tracking();
        let mut kernel = Vec::new();
        for (i, a) in s0.iter().enumerate() {
            let mut v = SparseVec::new();
            for (slot, c) in [(0, &f1), (1, &f2)] {
                for (m, x) in image(c, a).into_terms() {
                    add_entry(&mut v, idx1[&(slot, m)], x);
                }
            }
            if let Some(k) = first.insert_labelled(v, i) {
                kernel.push(k);
            }
        }
        let mut second = Echelon::new();
        for (slot, a) in s1a.iter().map(|m| (0, m)).chain(s1b.iter().map(|m| (1, m))) {
            let img = if slot == 0 { image(&f2, a) } else { -image(&f1, a) };
            second.insert(img.into_terms().map(|(m, x)| (idx2[&m], x)).collect());
        }
        let n1 = s1a.len() + s1b.len();
        let dims = [kernel.len(), n1 - second.rank() - first.rank(), s2.len() - second.rank()];
        if !kernel.is_empty() {
            let polys = kernel
                .iter()
                .map(|k| Polynomial::from_terms(2, k.iter().map(|(&i, c)| (s0[i].clone(), c.clone()))))
                .collect();
            annihilator.insert(d, polys);
        }
        for k in 1..=k_max as i64 {
            let internal = d + shift(k + 1);
            if internal > cutoff {
                continue;
            }
            for (slot, &dim) in dims.iter().enumerate() {
                if dim > 0 {
                    degrees.push(DimensionEntry {
                        p: (2 * k + slot as i64) as i32,
                        hodge: (k + 1) as usize,
                        internal: Some(internal),
                        dim,
                        stable: true,
                    });
                }
            }
        }
    }
    degrees.sort_by_key(|e| (e.p, e.hodge, e.internal));
    Ok(PeriodicBlock {
        table: GradedDimensionTable { cutoff, exact: true, degrees },
        annihilator,
        algebra: alg.clone(),
    })
}

/// Outcome of the degreewise regular-sequence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularSequenceReport {
    pub regular: bool,
    /// `(k, degree)`: `f_k` kills a nonzero class of that degree modulo
    /// `f_1, …, f_{k-1}` (`k` is 1-based).
    pub failure: Option<(usize, i64)>,
    /// Graded input: the check is exact up to the cutoff.
    pub exact: bool,
    pub cutoff: i64,
}

/// For each `k`, multiplication by `f_k` on `P/(f_1, …, f_{k-1})` is checked
/// injective on standard monomials of degree at most `cutoff`.
pub fn regular_sequence_check<F: Field>(ci: &CompleteIntersection<F>, cutoff: i64) -> Result<RegularSequenceReport> {
    let vars = ci.algebra().vars().to_vec();
    let w = ci.weights().to_vec();
    for k in 0..ci.ngens() {
        let q = QuotientAlgebra::with_weights(vars.clone(), ci.relations()[..k].to_vec(), w.clone())?;
        let fk = &ci.relations()[k];
        let mut index: HashMap<Monomial, usize> = HashMap::new();
        let mut ech = Echelon::new();
        for d in 0..=cutoff.max(0) as u64 {
            for m in q.monomial_basis_of_degree(d)? {
                let img = q.normal_form(&fk.mul_term(&m, &F::one()));
                let v: SparseVec<F> = img
                    .into_terms()
                    .map(|(mm, c)| {
                        let n = index.len();
                        (*index.entry(mm).or_insert(n), c)
                    })
                    .collect();
                if !ech.insert(v) {
                    return Ok(RegularSequenceReport {
                        regular: false,
                        failure: Some((k + 1, d as i64)),
                        exact: ci.is_graded(),
                        cutoff,
                    });
                }
            }
        }
    }
    Ok(RegularSequenceReport { regular: true, failure: None, exact: ci.is_graded(), cutoff })
}
