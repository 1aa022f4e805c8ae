use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complex::FreeModuleComplex;
use crate::error::{Error, Result};
use crate::linalg::{add_entry, Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Field;

/// Default internal-degree cutoff.
pub const DEFAULT_CUTOFF: i64 = 20;
/// Consecutive cutoff increments over which a filtered entry must not change.
pub const STABILITY_WINDOW: i64 = 3;

/// One cohomology entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionEntry {
    pub p: i32,
    pub hodge: usize,
    /// `None` when the base is only filtered; the entry then covers all
    /// internal degrees up to the cutoff.
    pub internal: Option<i64>,
    pub dim: usize,
    pub stable: bool,
}

/// Cohomology dimensions keyed by (cohomological degree, Hodge degree,
/// internal degree).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDimensionTable {
    pub cutoff: i64,
    /// True when every entry is exact (graded input).
    pub exact: bool,
    /// Nonzero entries in `(p, hodge, internal)` order.
    pub degrees: Vec<DimensionEntry>,
}

impl GradedDimensionTable {
    pub fn total(&self, p: i32) -> usize {
        self.degrees.iter().filter(|e| e.p == p).map(|e| e.dim).sum()
    }

    pub fn hodge_total(&self, p: i32, hodge: usize) -> usize {
        self.degrees.iter().filter(|e| e.p == p && e.hodge == hodge).map(|e| e.dim).sum()
    }

    pub fn get(&self, p: i32, hodge: usize, internal: i64) -> usize {
        self.degrees
            .iter()
            .find(|e| e.p == p && e.hodge == hodge && e.internal == Some(internal))
            .map_or(0, |e| e.dim)
    }

    /// Internal degree → dimension for one `(p, hodge)` column.
    pub fn series(&self, p: i32, hodge: usize) -> BTreeMap<i64, usize> {
        self.degrees
            .iter()
            .filter(|e| e.p == p && e.hodge == hodge)
            .filter_map(|e| e.internal.map(|d| (d, e.dim)))
            .collect()
    }

    /// True when every entry for `p` is stable.
    pub fn is_stable(&self, p: i32) -> bool {
        self.degrees.iter().filter(|e| e.p == p).all(|e| e.stable)
    }
}

/// Standard monomials of the base, by weighted degree, with a cache.
pub(crate) struct MonomialCache<'a, F> {
    base: &'a crate::poly::QuotientAlgebra<F>,
    by_degree: std::sync::Mutex<HashMap<u64, std::sync::Arc<Vec<Monomial>>>>,
}

impl<'a, F: Field> MonomialCache<'a, F> {
    pub(crate) fn new(base: &'a crate::poly::QuotientAlgebra<F>) -> Self {
        MonomialCache { base, by_degree: Default::default() }
    }

    pub(crate) fn get(&self, d: i64) -> std::sync::Arc<Vec<Monomial>> {
        if d < 0 {
            return Default::default();
        }
        let d = d as u64;
        if let Some(v) = self.by_degree.lock().unwrap().get(&d) {
            return v.clone();
        }
        let v = std::sync::Arc::new(self.base.monomial_basis_of_degree(d).expect("weights are positive"));
        self.by_degree.lock().unwrap().insert(d, v.clone());
        v
    }

    /// Standard monomials of degree at most `d`.
    pub(crate) fn up_to(&self, d: i64) -> Vec<Monomial> {
        (0..=d).flat_map(|k| self.get(k).as_ref().clone()).collect()
    }
}

/// The finite piece of degree `p`, Hodge `h` of the complex used for one
/// rank computation: basis pairs (summand, base monomial).
struct Piece {
    basis: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl Piece {
    fn new(basis: Vec<(usize, Monomial)>) -> Self {
        let index = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Piece { basis, index }
    }
}

enum Window {
    Exact(i64),
    UpTo(i64),
}

fn piece<F: Field>(cx: &FreeModuleComplex<F>, mons: &MonomialCache<F>, p: i32, h: usize, w: &Window) -> Piece {
    let mut basis = Vec::new();
    for (si, s) in cx.summands(p).iter().enumerate() {
        if cx.hodge(s) != h {
            continue;
        }
        let ws = cx.weight(s);
        match w {
            Window::Exact(d) => basis.extend(mons.get(d - ws).iter().map(|m| (si, m.clone()))),
            Window::UpTo(d) => basis.extend(mons.up_to(d - ws).into_iter().map(|m| (si, m))),
        }
    }
    Piece::new(basis)
}

/// Echelon form of the images of `src` inside `dst`.
fn images<F: Field>(cx: &FreeModuleComplex<F>, p: i32, src: &Piece, dst: &Piece) -> Result<Echelon<F>> {
    let cols: HashMap<usize, Vec<(usize, Polynomial<F>)>> = src
        .basis
        .iter()
        .map(|(si, _)| *si)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .map(|si| (si, cx.apply(&cx.summands(p)[si])))
        .collect();
    let mut ech = Echelon::new();
    for (si, m) in &src.basis {
        let mut v = SparseVec::new();
        for (t, c) in &cols[si] {
            let img = cx.base().normal_form(&c.mul_term(m, &F::one()));
            for (m2, a) in img.into_terms() {
                let j = dst.index.get(&(*t, m2)).ok_or_else(|| {
                    Error::Precondition("differential leaves the truncation window".into())
                })?;
                add_entry(&mut v, *j, a);
            }
        }
        ech.insert(v);
    }
    Ok(ech)
}

fn target_hodge<F: Field>(cx: &FreeModuleComplex<F>, h: usize, step: i64) -> Option<usize> {
    let t = h as i64 + step * cx.hodge_shift() as i64;
    (t >= 0).then_some(t as usize)
}

/// Rank of `d: piece(p, h) → piece(p+1, h + shift)`.
fn rank<F: Field>(cx: &FreeModuleComplex<F>, mons: &MonomialCache<F>, p: i32, h: usize, w: &Window) -> Result<usize> {
    let src = piece(cx, mons, p, h, w);
    let Some(th) = target_hodge(cx, h, 1) else {
        return Ok(0);
    };
    if src.basis.is_empty() {
        return Ok(0);
    }
    let dst = piece(cx, mons, p + 1, th, w);
    Ok(images(cx, p, &src, &dst)?.rank())
}

fn dimension<F: Field>(cx: &FreeModuleComplex<F>, mons: &MonomialCache<F>, p: i32, h: usize, w: &Window) -> Result<usize> {
    let n = piece(cx, mons, p, h, w).basis.len();
    if n == 0 {
        return Ok(0);
    }
    let out = rank(cx, mons, p, h, w)?;
    let inc = match target_hodge(cx, h, -1) {
        Some(hin) => rank(cx, mons, p - 1, hin, w)?,
        None => 0,
    };
    Ok(n - out - inc)
}

/// `dim ker(d on F_D) - dim(d(F_{D+reach}) ∩ F_D)` in degree `p`, Hodge `h`.
///
/// The differential of a filtered base can lower the filtration, so
/// boundaries landing in `F_D` may come from sources of higher filtration.
fn filtered_dimension<F: Field>(
    cx: &FreeModuleComplex<F>,
    mons: &MonomialCache<F>,
    p: i32,
    h: usize,
    d: i64,
    reach: i64,
) -> Result<usize> {
    let low = piece(cx, mons, p, h, &Window::UpTo(d));
    if low.basis.is_empty() {
        return Ok(0);
    }
    let out = rank(cx, mons, p, h, &Window::UpTo(d))?;
    let Some(hin) = target_hodge(cx, h, -1) else {
        return Ok(low.basis.len() - out);
    };
    let src = piece(cx, mons, p - 1, hin, &Window::UpTo(d + reach));
    let mut dst = piece(cx, mons, p, h, &Window::UpTo(d + reach));
    let internal = |(si, m): &(usize, Monomial)| cx.weight(&cx.summands(p)[*si]) + cx.base().degree(m) as i64;
    // High filtration first: rows with a pivot in the low block then span
    // exactly the image intersected with F_D.
    dst.basis.sort_by_key(|k| std::cmp::Reverse(internal(k)));
    let dst = Piece::new(dst.basis);
    let first_low = dst.basis.iter().position(|k| internal(k) <= d).unwrap_or(dst.basis.len());
    let ech = images(cx, p - 1, &src, &dst)?;
    let inc = (first_low..dst.basis.len()).filter(|&c| ech.is_pivot(c)).count();
    Ok(low.basis.len() - out - inc)
}

/// Cohomology of the complex for every degree in its range, split by Hodge
/// degree and internal degree up to `cutoff`.
///
/// For a graded base each internal degree is a finite subcomplex and the
/// answer is exact. Otherwise cycles of filtration at most `D` are taken
/// modulo the boundaries that land there, for `D` in the last
/// [`STABILITY_WINDOW`] steps below the cutoff; an entry is stable when it
/// does not change across them.
pub fn graded_cohomology<F: Field>(cx: &FreeModuleComplex<F>, cutoff: i64) -> Result<GradedDimensionTable> {
    let (lo, hi) = cx.range();
    let min_weight = (lo - 1..=hi + 1)
        .flat_map(|p| cx.summands(p).iter().map(|s| cx.weight(s)))
        .min()
        .unwrap_or(0);
    if cutoff < min_weight {
        return Err(Error::OutOfRange(format!(
            "cutoff {cutoff} is below the lowest generator degree {min_weight}"
        )));
    }
    let mons = MonomialCache::new(cx.base());
    let mut jobs: Vec<(i32, usize)> = Vec::new();
    for p in lo..=hi {
        let mut hs: Vec<usize> = cx.summands(p).iter().map(|s| cx.hodge(s)).collect();
        hs.sort();
        hs.dedup();
        jobs.extend(hs.into_iter().map(|h| (p, h)));
    }
    let graded = cx.base().is_graded();
    let reach = cx.generators().iter().map(|g| g.weight.abs()).max().unwrap_or(0) * 2;
    let entries: Vec<Vec<DimensionEntry>> = if graded {
        let cells: Vec<(i32, usize, i64)> = jobs
            .iter()
            .flat_map(|&(p, h)| (min_weight..=cutoff).map(move |d| (p, h, d)))
            .collect();
        cells
            .par_iter()
            .map(|&(p, h, d)| {
                let dim = dimension(cx, &mons, p, h, &Window::Exact(d))?;
                Ok(if dim > 0 {
                    vec![DimensionEntry { p, hodge: h, internal: Some(d), dim, stable: true }]
                } else {
                    vec![]
                })
            })
            .collect::<Result<_>>()?
    } else {
        jobs.par_iter()
            .map(|&(p, h)| {
                let dims: Vec<usize> = (cutoff - STABILITY_WINDOW..=cutoff)
                    .map(|d| filtered_dimension(cx, &mons, p, h, d, reach))
                    .collect::<Result<_>>()?;
                let dim = *dims.last().unwrap();
                let stable = dims.iter().all(|&x| x == dim);
                Ok(if dim > 0 || !stable {
                    vec![DimensionEntry { p, hodge: h, internal: None, dim, stable }]
                } else {
                    vec![]
                })
            })
            .collect::<Result<_>>()?
    };
    let mut degrees: Vec<DimensionEntry> = entries.into_iter().flatten().collect();
    degrees.sort_by_key(|e| (e.p, e.hodge, e.internal));
    Ok(GradedDimensionTable { cutoff, exact: graded, degrees })
}
