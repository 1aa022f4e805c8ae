//! Exact linear algebra over a [`Field`].
//!
//! Two tools: a sparse incremental echelon form used for the large, very
//! sparse bar-complex differentials, and dense fraction-free (Bareiss)
//! elimination for the small matrices everywhere else.

use std::collections::{BTreeMap, HashMap};

use crate::scalar::Field;

pub type SparseVec<F> = BTreeMap<usize, F>;

/// `dst += c * src`, dropping cancelled entries.
pub fn axpy<F: Field>(dst: &mut SparseVec<F>, c: &F, src: &SparseVec<F>) {
    for (k, a) in src {
        add_entry(dst, *k, c.clone() * a.clone());
    }
}

pub fn add_entry<F: Field>(v: &mut SparseVec<F>, k: usize, a: F) {
    if a.is_zero() {
        return;
    }
    match v.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(a);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().clone() + a;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Row echelon form built one vector at a time.
///
/// Each stored row has its pivot as its smallest index, normalized to one.
/// With tracking enabled, every row remembers which inserted vectors it is a
/// combination of, so vectors that reduce to zero yield kernel elements.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    rows: Vec<Vec<(usize, F)>>,
    pivot_of: HashMap<usize, usize>,
    combos: Option<Vec<SparseVec<F>>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivot_of: HashMap::new(),
            combos: None,
        }
    }

    pub fn tracking() -> Self {
        Echelon {
            combos: Some(Vec::new()),
            ..Self::new()
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of.contains_key(&col)
    }

    /// Reduces `v` to the unique representative of `v + span(rows)` that
    /// vanishes on every pivot column.
    pub fn reduce(&self, v: &mut SparseVec<F>) {
        self.reduce_tracked(v, None);
    }

    fn reduce_tracked(&self, v: &mut SparseVec<F>, mut combo: Option<&mut SparseVec<F>>) {
        let mut cursor = 0usize;
        loop {
            let col = match v.range(cursor..).next() {
                Some((k, _)) => *k,
                None => break,
            };
            if let Some(&r) = self.pivot_of.get(&col) {
                let c = v[&col].clone();
                for (j, a) in &self.rows[r] {
                    add_entry(v, *j, -(c.clone() * a.clone()));
                }
                if let (Some(combo), Some(combos)) = (combo.as_deref_mut(), self.combos.as_ref()) {
                    axpy(combo, &-c, &combos[r]);
                }
            }
            cursor = col + 1;
        }
    }

    /// Inserts `v` (labelled `id` for tracking). Returns `true` if it was
    /// independent of the rows already present.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        self.insert_labelled(v, 0).is_none()
    }

    /// Like [`insert`](Self::insert); when tracking and `v` is dependent,
    /// returns the kernel relation among inserted labels.
    pub fn insert_labelled(&mut self, mut v: SparseVec<F>, id: usize) -> Option<SparseVec<F>> {
        let mut combo = SparseVec::new();
        let tracking = self.combos.is_some();
        if tracking {
            combo.insert(id, F::one());
        }
        self.reduce_tracked(&mut v, if tracking { Some(&mut combo) } else { None });
        let (&pivot, lead) = match v.iter().next() {
            Some(e) => e,
            None => return if tracking { Some(combo) } else { Some(SparseVec::new()) },
        };
        let inv = lead.inv();
        let row: Vec<(usize, F)> = v.into_iter().map(|(k, a)| (k, a * inv.clone())).collect();
        if let Some(combos) = self.combos.as_mut() {
            let scaled = combo.into_iter().map(|(k, a)| (k, a * inv.clone())).collect();
            combos.push(scaled);
        }
        self.pivot_of.insert(pivot, self.rows.len());
        self.rows.push(row);
        None
    }

    /// Indices in `0..n` that are not pivots: their unit vectors span a
    /// complement of the row space.
    pub fn non_pivots(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|c| !self.pivot_of.contains_key(c)).collect()
    }
}

/// Rank of the span of `vectors`.
pub fn sparse_rank<F: Field>(vectors: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Rank by fraction-free Gaussian elimination (Bareiss). Over integer input
/// every intermediate entry is a minor, so no fractions appear.
pub fn bareiss_rank<F: Field>(mut m: Vec<Vec<F>>) -> usize {
    let nr = m.len();
    if nr == 0 {
        return 0;
    }
    let nc = m[0].len();
    let mut prev = F::one();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..nr {
            for j in (c + 1)..nc {
                let v = (m[r][c].clone() * m[i][j].clone() - m[i][c].clone() * m[r][j].clone())
                    / prev.clone();
                m[i][j] = v;
            }
            m[i][c] = F::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let nr = m.len();
    if nr == 0 {
        return vec![];
    }
    let nc = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for j in c..nc {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..nr {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..nc {
                    let v = m[i][j].clone() - f.clone() * m[r][j].clone();
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{x : A x = 0}` of an `nr x nc` matrix.
pub fn kernel<F: Field>(a: &[Vec<F>], nc: usize) -> Vec<Vec<F>> {
    let mut m: Vec<Vec<F>> = a.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..nc).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); nc];
            x[f] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[row][f].clone();
            }
            x
        })
        .collect()
}

/// One solution of `A x = b`, if any.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F], nc: usize) -> Option<Vec<F>> {
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&nc) {
        return None;
    }
    let mut x = vec![F::zero(); nc];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][nc].clone();
    }
    Some(x)
}
