//! Buchberger completion with the coprime and chain criteria.

use std::collections::BTreeSet;

use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Default cap on the number of terms in any intermediate polynomial.
pub const DEFAULT_TERM_CAP: usize = 20_000;

/// Fully reduces `f` modulo `basis`: the result has no term divisible by a
/// leading monomial of `basis`.
pub fn reduce<F: Field>(f: &Polynomial<F>, basis: &[Polynomial<F>], order: &MonomialOrder) -> Polynomial<F> {
    let leads: Vec<(Monomial, F)> = basis
        .iter()
        .filter_map(|g| g.leading_term(order).map(|(m, c)| (m.clone(), c.clone())))
        .collect();
    let mut p = f.clone();
    let mut rem = Polynomial::zero(f.nvars());
    loop {
        let (m, c) = match p.leading_term(order) {
            Some((m, c)) => (m.clone(), c.clone()),
            None => break,
        };
        let divisor = leads
            .iter()
            .enumerate()
            .find_map(|(i, (lm, lc))| lm.quotient_of(&m).map(|q| (i, q, lc)));
        match divisor {
            Some((i, q, lc)) => {
                let factor = -(c / lc.clone());
                p.add_scaled(&basis[i], &q, &factor);
            }
            None => {
                p.remove_term(&m);
                rem.add_term(m, c);
            }
        }
    }
    rem
}

pub fn s_polynomial<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>, order: &MonomialOrder) -> Polynomial<F> {
    let (fm, fc) = f.leading_term(order).expect("nonzero");
    let (gm, gc) = g.leading_term(order).expect("nonzero");
    let l = fm.lcm(gm);
    let a = fm.quotient_of(&l).unwrap();
    let b = gm.quotient_of(&l).unwrap();
    let mut s = f.mul_term(&a, &fc.inv());
    s.add_scaled(g, &b, &-gc.inv());
    s
}

/// Reduced Gröbner basis of the ideal generated by `generators`.
pub fn groebner_basis<F: Field>(
    generators: &[Polynomial<F>],
    order: &MonomialOrder,
    term_cap: usize,
) -> Result<Vec<Polynomial<F>>> {
    let mut g: Vec<Polynomial<F>> = generators
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.monic(order))
        .collect();
    if g.is_empty() {
        return Ok(g);
    }
    let lm = |p: &Polynomial<F>| p.leading_monomial(order).unwrap().clone();
    let mut leads: Vec<Monomial> = g.iter().map(lm).collect();
    let mut pending: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let weights = order.weights(g[0].nvars());
    let pair_key = |leads: &[Monomial], i: usize, j: usize| {
        (leads[i].lcm(&leads[j]).weighted_degree(&weights), i, j)
    };
    for j in 0..g.len() {
        for i in 0..j {
            pending.insert(pair_key(&leads, i, j));
        }
    }
    let mut live: BTreeSet<(usize, usize)> = pending.iter().map(|&(_, i, j)| (i, j)).collect();

    while let Some(key) = pending.iter().next().cloned() {
        pending.remove(&key);
        let (_, i, j) = key;
        live.remove(&(i, j));
        if leads[i].is_coprime(&leads[j]) {
            continue;
        }
        let l = leads[i].lcm(&leads[j]);
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides(&l)
                && !live.contains(&(i.min(k), i.max(k)))
                && !live.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&g[i], &g[j], order);
        let r = reduce(&s, &g, order);
        if r.len() > term_cap {
            return Err(Error::ResourceLimit {
                what: "Gröbner intermediate term count",
                size: r.len(),
                cap: term_cap,
            });
        }
        if !r.is_zero() {
            let r = r.monic(order);
            let n = g.len();
            leads.push(lm(&r));
            g.push(r);
            for k in 0..n {
                pending.insert(pair_key(&leads, k, n));
                live.insert((k, n));
            }
        }
    }
    Ok(interreduce(g, order))
}

fn interreduce<F: Field>(g: Vec<Polynomial<F>>, order: &MonomialOrder) -> Vec<Polynomial<F>> {
    let mut minimal: Vec<Polynomial<F>> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let m = p.leading_monomial(order).unwrap();
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let n = q.leading_monomial(order).unwrap();
            j != i && n.divides(m) && (n != m || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial<F>> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let (m, c) = {
            let (m, c) = minimal[i].leading_term(order).unwrap();
            (m.clone(), c.clone())
        };
        let mut tail = minimal[i].clone();
        tail.remove_term(&m);
        let mut r = reduce(&tail, &others, order);
        r.add_term(m, c);
        out.push(r.monic(order));
    }
    out.sort_by(|a, b| {
        order.cmp(
            b.leading_monomial(order).unwrap(),
            a.leading_monomial(order).unwrap(),
        )
    });
    out
}

/// Whether every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis<F: Field>(basis: &[Polynomial<F>], order: &MonomialOrder) -> bool {
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j], order);
            if !reduce(&s, basis, order).is_zero() {
                return false;
            }
        }
    }
    true
}
