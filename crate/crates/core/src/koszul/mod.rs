//! Free super-commutative complexes over a complete intersection: the Koszul
//! resolution of `A = P/(f_1, …, f_m)` and the two small complexes computing
//! Hochschild cohomology and homology of `A`, graded by Hodge degree.

mod cohomology;
mod complex;
mod harrison;

pub use cohomology::{graded_cohomology, DimensionEntry, GradedDimensionTable, DEFAULT_CUTOFF, STABILITY_WINDOW};
pub use complex::{
    hkr_cohomology_complex, hkr_homology_complex, koszul_resolution, CompleteIntersection, FreeModuleComplex,
    SuperGenerator, SuperMonomial,
};
pub use harrison::{
    harrison_1_2, periodic_block, regular_sequence_check, tjurina_ideal, HarrisonPresentation, PeriodicBlock,
    RegularSequenceReport,
};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// [`koszul_resolution`] after confirming the relations form a regular
/// sequence up to internal degree `cutoff`.
pub fn checked_koszul_resolution<F: Field>(ci: &CompleteIntersection<F>, cutoff: i64) -> Result<FreeModuleComplex<F>> {
    let report = regular_sequence_check(ci, cutoff)?;
    if let Some((k, degree)) = report.failure {
        return Err(Error::NotRegularSequence { k, degree });
    }
    Ok(koszul_resolution(ci))
}

#[cfg(test)]
mod tests;
