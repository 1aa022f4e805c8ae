//! The bar complex of the augmentation ideal `A_+` and the cochain complex
//! `Hom(A_+^{⊗p}, A)`, computed degreewise over exact rationals.

mod chain;
mod cochain;
mod homology;

pub use chain::{bar_differential, cycle_basis_pn, phi_psi_chains, relation_split, ChainVector, ZFamily};
pub use cochain::{
    truncated_polynomial_algebra, xn_cohomology, xn_cohomology_capped, Cochain, CohomologyRow, FiniteCochainComplex,
};
pub use homology::{
    bgs_homology_dimensions, homology_dimensions, BarComplex, BarHomology, SliceHomology, StandardBasis,
    DEFAULT_SLICE_CAP,
};

use crate::error::Result;
use crate::poly::Monomial;
use crate::Rational;

/// Bar homology of `Q[z]/(z^n)` with its Hodge splitting.
#[derive(Clone, Debug)]
pub struct XnBarHomology {
    pub homology: BarHomology<Rational>,
    /// For each `p`, whether `(z ⊗ z^{n-1})^k` (`p = 2k`) or
    /// `(z ⊗ z^{n-1})^k ⊗ z` (`p = 2k+1`) is a nonzero class.
    pub canonical_classes: Vec<(usize, bool)>,
}

/// The alternating tensor `z ⊗ z^{n-1} ⊗ z ⊗ …` of length `p`.
pub fn xn_canonical_chain(n: u32, p: usize) -> ChainVector<Rational> {
    let t = (0..p)
        .map(|i| Monomial::from_exponents(vec![if i % 2 == 0 { 1 } else { n - 1 }]))
        .collect();
    ChainVector::tensor(t, Rational::from_integer(1.into()))
}

/// Bar homology of `Q[z]/(z^n)` for `p <= 2 k_max + 1`.
pub fn xn_bgs_homology(n: u32, k_max: usize) -> Result<XnBarHomology> {
    let alg = truncated_polynomial_algebra(n)?;
    let p_max = 2 * k_max + 1;
    let degree_max = (p_max as u64 + 1) * (n as u64 - 1);
    let complex = BarComplex::new(&alg, p_max, degree_max)?;
    let homology = complex.homology(true)?;
    let canonical_classes = (1..=p_max)
        .map(|p| Ok((p, complex.homology_rank(&[xn_canonical_chain(n, p)])? == 1)))
        .collect::<Result<_>>()?;
    Ok(XnBarHomology { homology, canonical_classes })
}

#[cfg(test)]
mod tests;
