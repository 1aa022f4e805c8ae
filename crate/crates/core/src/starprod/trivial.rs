use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::koszul::{harrison_1_2, CompleteIntersection, DEFAULT_CUTOFF};
use crate::linalg::solve;
use crate::poly::{Monomial, Polynomial, QuotientAlgebra};
use crate::scalar::Field;

/// Extra degree steps tried by [`triviality_solve`] past the initial bound.
pub const RETRY_STEPS: u64 = 10;

/// A polynomial vector field `E = sum_i E_i ∂/∂z_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationCandidate<F> {
    pub components: Vec<Polynomial<F>>,
}

impl<F: Field> DerivationCandidate<F> {
    pub fn apply(&self, p: &Polynomial<F>) -> Polynomial<F> {
        self.components
            .iter()
            .enumerate()
            .fold(Polynomial::zero(p.nvars()), |acc, (i, e)| &acc + &(e * &p.partial_derivative(i)))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DerivationDisplay { e: self, names }
    }
}

struct DerivationDisplay<'a, F> {
    e: &'a DerivationCandidate<F>,
    names: &'a [String],
}

impl<F: Field> fmt::Display for DerivationDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .e
            .components
            .iter()
            .zip(self.names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| format!("({})*d/d{v}", c.display(self.names)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Q_1` is not of the form `E(R)` modulo `R`: its normal form modulo the
/// Tjurina ideal `(R, ∂R)` is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionCertificate<F> {
    pub class: Polynomial<F>,
    /// Standard monomials of the Tjurina algebra, when finite.
    pub tjurina_basis: Option<Vec<Monomial>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrivialityOutcome<F> {
    /// `E(R) ≡ Q_1 mod (R)`, checked by substitution.
    Trivial(DerivationCandidate<F>),
    Obstructed(ObstructionCertificate<F>),
    /// No witness up to `degree_bound` and no class test available.
    Inconclusive { degree_bound: u64, reason: String },
}

/// Decides whether the first-order deformation `R - ħ Q_1` is trivial,
/// i.e. whether `Q_1 ≡ E(R) mod (R)` for a vector field `E`.
///
/// Membership of `Q_1` in the Tjurina ideal decides the question; a witness
/// is then found by solving `sum_i E_i ∂_i R + h R = Q_1` with all unknowns
/// of total degree at most the bound, raising it up to [`RETRY_STEPS`]
/// times. The default bound is `deg Q_1 + deg R`.
pub fn triviality_solve<F: Field>(
    vars: &[String],
    r: &Polynomial<F>,
    q1: &Polynomial<F>,
    degree_bound: Option<u64>,
) -> Result<TrivialityOutcome<F>> {
    let start = degree_bound.unwrap_or(q1.total_degree().unwrap_or(0) + r.total_degree().unwrap_or(0));
    let class = match tjurina(vars, r) {
        Ok(tj) => {
            let class = tj.normal_form(q1);
            if !class.is_zero() {
                return Ok(TrivialityOutcome::Obstructed(ObstructionCertificate {
                    class,
                    tjurina_basis: tj.standard_monomials(),
                }));
            }
            true
        }
        Err(Error::ResourceLimit { .. }) => false,
        Err(e) => return Err(e),
    };
    let quotient = QuotientAlgebra::new(vars.to_vec(), vec![r.clone()])?;
    for bound in start..=start + RETRY_STEPS {
        if let Some(e) = solve_bounded(r, q1, bound) {
            let check = &e.apply(r) - q1;
            if !quotient.normal_form(&check).is_zero() {
                return Err(Error::Precondition("triviality witness failed substitution".into()));
            }
            return Ok(TrivialityOutcome::Trivial(e));
        }
    }
    Ok(TrivialityOutcome::Inconclusive {
        degree_bound: start + RETRY_STEPS,
        reason: if class {
            "Q_1 lies in the Tjurina ideal but no witness was found within the degree bound".into()
        } else {
            "Tjurina basis unavailable and no witness within the degree bound".into()
        },
    })
}

fn tjurina<F: Field>(vars: &[String], r: &Polynomial<F>) -> Result<QuotientAlgebra<F>> {
    let mut gens = vec![r.clone()];
    gens.extend((0..vars.len()).map(|i| r.partial_derivative(i)).filter(|g| !g.is_zero()));
    let weights = QuotientAlgebra::new(vars.to_vec(), vec![r.clone()])?.weights().to_vec();
    QuotientAlgebra::with_weights(vars.to_vec(), gens, weights)
}

/// Solves `sum_i E_i ∂_i R + h R = Q_1` with every unknown of total degree
/// at most `bound`.
fn solve_bounded<F: Field>(r: &Polynomial<F>, q1: &Polynomial<F>, bound: u64) -> Option<DerivationCandidate<F>> {
    let nv = r.nvars();
    let ones = vec![1u32; nv];
    let mut mons = Vec::new();
    for d in 0..=bound {
        crate::poly::quotient::monomials_of_degree(&ones, d, &mut |m| mons.push(m));
    }
    let mut multipliers: Vec<Polynomial<F>> = (0..nv).map(|i| r.partial_derivative(i)).collect();
    multipliers.push(r.clone());
    let mut rows: HashMap<Monomial, usize> = HashMap::new();
    let mut columns: Vec<Vec<(usize, F)>> = Vec::new();
    for mult in &multipliers {
        for m in &mons {
            let col = mult
                .mul_term(m, &F::one())
                .into_terms()
                .map(|(t, c)| {
                    let k = rows.len();
                    (*rows.entry(t).or_insert(k), c)
                })
                .collect();
            columns.push(col);
        }
    }
    let rhs: Vec<(usize, F)> = q1
        .terms()
        .map(|(t, c)| {
            let k = rows.len();
            (*rows.entry(t.clone()).or_insert(k), c.clone())
        })
        .collect();
    let nc = columns.len();
    let mut a = vec![vec![F::zero(); nc]; rows.len()];
    for (j, col) in columns.into_iter().enumerate() {
        for (i, c) in col {
            a[i][j] = c;
        }
    }
    let mut b = vec![F::zero(); rows.len()];
    for (i, c) in rhs {
        b[i] = c;
    }
    let x = solve(&a, &b, nc)?;
    let components = (0..nv)
        .map(|i| {
            Polynomial::from_terms(nv, mons.iter().enumerate().map(|(k, m)| (m.clone(), x[i * mons.len() + k].clone())))
        })
        .collect();
    Some(DerivationCandidate { components })
}

/// Monomial representatives of `Q[x, y]/(R, ∂R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Harr2Representatives {
    /// `None` when the quotient is infinite (non-isolated singularity).
    pub basis: Option<Vec<Monomial>>,
    /// Standard monomials per weighted degree up to the cutoff.
    pub hilbert: BTreeMap<u64, usize>,
    pub cutoff: u64,
}

impl Harr2Representatives {
    pub fn dim(&self) -> Option<usize> {
        self.basis.as_ref().map(|b| b.len())
    }
}

pub fn harr2_representatives<F: Field>(vars: &[String], r: &Polynomial<F>, cutoff: u64) -> Result<Harr2Representatives> {
    let tj = tjurina(vars, r)?;
    let mut hilbert = BTreeMap::new();
    for d in 0..=cutoff {
        let k = tj.monomial_basis_of_degree(d)?.len();
        if k > 0 {
            hilbert.insert(d, k);
        }
    }
    Ok(Harr2Representatives { basis: tj.standard_monomials(), hilbert, cutoff })
}

/// `f̃_j = f_j - sum_k t_k v_{jk}` over a cokernel basis `v_k`.
#[derive(Clone, Debug)]
pub struct MiniversalFamily<F> {
    /// The original variables followed by `t_1, …, t_N`.
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub generators: Vec<Polynomial<F>>,
    /// `(j, m)`: parameter `t_k` deforms relation `j` by the monomial `m`.
    pub classes: Vec<(usize, Monomial)>,
}

impl<F: Field> MiniversalFamily<F> {
    pub fn display_generators(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.display(&self.vars).to_string()).collect()
    }
}

pub fn miniversal_family<F: Field>(ci: &CompleteIntersection<F>) -> Result<MiniversalFamily<F>> {
    let h = harrison_1_2(ci, DEFAULT_CUTOFF)?;
    let classes = h.cokernel_basis.ok_or(Error::NotIsolated)?;
    let n = ci.nvars();
    let total = n + classes.len();
    let params: Vec<String> = (1..=classes.len()).map(|k| format!("t{k}")).collect();
    let mut vars = ci.algebra().vars().to_vec();
    vars.extend(params.iter().cloned());
    let mut generators: Vec<Polynomial<F>> = ci.relations().iter().map(|f| f.extend_vars(total)).collect();
    for (k, (j, m)) in classes.iter().enumerate() {
        let mut e = m.extend(total).exponents().to_vec();
        e[n + k] = 1;
        generators[*j].add_term(Monomial::from_exponents(e), -F::one());
    }
    Ok(MiniversalFamily { vars, params, generators, classes })
}
