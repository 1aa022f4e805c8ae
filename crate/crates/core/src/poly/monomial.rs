use std::cmp::Ordering;
use std::fmt;

/// A monomial as a dense exponent vector over a fixed variable list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }

    /// Degree under an arbitrary integer grading vector.
    pub fn grade(&self, grading: &[i64]) -> i64 {
        self.0.iter().zip(grading).map(|(&e, &w)| e as i64 * w).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Is this a pure power of variable `i` (including `1`)?
    pub fn is_pure_power_of(&self, i: usize) -> bool {
        self.0.iter().enumerate().all(|(j, &e)| j == i || e == 0)
    }

    pub fn with_exponent(&self, i: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        v[i] = e;
        Monomial(v)
    }

    pub fn extend(&self, nvars: usize) -> Monomial {
        let mut v = self.0.clone();
        v.resize(nvars, 0);
        Monomial(v)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, names }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    names: &'a [String],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.mono.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.names[i])?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

/// A monomial order.
///
/// Both orders treat the *last* variable as the largest one, so that for
/// variables `[x, y]` a relation `y^n - Q(x, y)` has leading monomial `y^n`
/// and the standard monomials are `x^i y^j` with `j < n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Weighted degree first; ties broken reverse-lexicographically starting
    /// from the first variable (the smaller exponent wins).
    WeightedGrevlex(Vec<u32>),
    /// Pure lexicographic order, last variable most significant.
    Lex,
}

impl MonomialOrder {
    pub fn grevlex(nvars: usize) -> Self {
        MonomialOrder::WeightedGrevlex(vec![1; nvars])
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::WeightedGrevlex(w) => {
                let da = a.weighted_degree(w);
                let db = b.weighted_degree(w);
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.0.iter().zip(&b.0) {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
            MonomialOrder::Lex => {
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    if x != y {
                        return x.cmp(y);
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Weights used for degree bookkeeping (all ones for `Lex`).
    pub fn weights(&self, nvars: usize) -> Vec<u32> {
        match self {
            MonomialOrder::WeightedGrevlex(w) => w.clone(),
            MonomialOrder::Lex => vec![1; nvars],
        }
    }

    /// True if the order refines a positive weighted degree, so normal forms
    /// never raise that degree.
    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, MonomialOrder::WeightedGrevlex(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn cusp_order_prefers_y_squared() {
        let ord = MonomialOrder::WeightedGrevlex(vec![2, 3]);
        assert_eq!(ord.cmp(&m(&[0, 2]), &m(&[3, 0])), Ordering::Greater);
        let ord = MonomialOrder::grevlex(2);
        assert_eq!(ord.cmp(&m(&[0, 2]), &m(&[2, 0])), Ordering::Greater);
        assert_eq!(ord.cmp(&m(&[0, 2]), &m(&[1, 0])), Ordering::Greater);
    }

    #[test]
    fn lex_is_last_variable_first() {
        let ord = MonomialOrder::Lex;
        assert_eq!(ord.cmp(&m(&[0, 1]), &m(&[5, 0])), Ordering::Greater);
        assert_eq!(ord.cmp(&m(&[2, 1]), &m(&[1, 1])), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_lcm() {
        assert!(m(&[1, 0]).divides(&m(&[2, 3])));
        assert!(!m(&[0, 4]).divides(&m(&[2, 3])));
        assert_eq!(m(&[1, 0]).quotient_of(&m(&[2, 3])), Some(m(&[1, 3])));
        assert_eq!(m(&[1, 4]).lcm(&m(&[2, 3])), m(&[2, 4]));
        assert!(m(&[2, 0]).is_coprime(&m(&[0, 1])));
    }
}
