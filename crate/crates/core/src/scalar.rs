//! Exact scalar fields.
//!
//! Every computation in this crate is exact, so the scalar type is any
//! characteristic-zero field with exact arithmetic. [`BigRational`] is the
//! default (see [`crate::Rational`]); the machine-word rationals are
//! available for small experiments and panic on overflow in debug builds.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, ToPrimitive};

/// An exact field of characteristic zero.
pub trait Field:
    Num + Clone + Neg<Output = Self> + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    /// Builds `numer / denom`, or `None` if the value is not representable.
    fn from_bigint_ratio(numer: &BigInt, denom: &BigInt) -> Option<Self>;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigint_ratio(numer: &BigInt, denom: &BigInt) -> Option<Self> {
        if denom == &BigInt::from(0) {
            return None;
        }
        Some(BigRational::new(numer.clone(), denom.clone()))
    }
}

macro_rules! impl_machine_ratio {
    ($t:ty, $conv:ident) => {
        impl Field for Ratio<$t> {
            fn from_i64(n: i64) -> Self {
                Ratio::from_integer(n as $t)
            }

            fn from_bigint_ratio(numer: &BigInt, denom: &BigInt) -> Option<Self> {
                let n = numer.$conv()?;
                let d = denom.$conv()?;
                if d == 0 {
                    return None;
                }
                Some(Ratio::new(n, d))
            }
        }
    };
}

impl_machine_ratio!(i64, to_i64);
impl_machine_ratio!(i128, to_i128);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_in_lowest_terms() {
        let a = BigRational::from_bigint_ratio(&BigInt::from(6), &BigInt::from(-4)).unwrap();
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert!(BigRational::from_bigint_ratio(&BigInt::from(1), &BigInt::from(0)).is_none());
    }

    #[test]
    fn machine_ratio_rejects_overflow() {
        let huge = BigInt::from(i64::MAX) * BigInt::from(4);
        assert!(Ratio::<i64>::from_bigint_ratio(&huge, &BigInt::from(1)).is_none());
        assert!(Ratio::<i128>::from_bigint_ratio(&huge, &BigInt::from(1)).is_some());
    }
}
