//! Scalar abstraction for lattice coefficients.
//!
//! Everything in this crate is exact integer arithmetic; the theorems it
//! verifies are exact identities and admit no tolerances. All operations go
//! through checked arithmetic and surface [`OverflowError`] instead of
//! wrapping. The crate root exposes concrete aliases over [`i64`].

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{CheckedNeg, PrimInt, Signed};
use thiserror::Error;

/// Raised when a checked integer operation would wrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("integer overflow in exact lattice arithmetic")]
pub struct OverflowError;

/// Signed integer scalar used for lattice coefficients and multiplicities.
///
/// Implemented by every primitive signed integer (`i8` through `i128`).
pub trait Coeff:
    PrimInt + Signed + CheckedNeg + Hash + fmt::Display + fmt::Debug + Send + Sync + 'static
{
    /// Exact promotion into an arbitrary-precision integer, used by the
    /// rational elimination behind [`crate::lattice::IntersectionLattice::signature`].
    fn to_bigint(self) -> BigInt {
        BigInt::from(self.to_i128().expect("primitive integer fits in i128"))
    }
}

impl<T> Coeff for T where
    T: PrimInt + Signed + CheckedNeg + Hash + fmt::Display + fmt::Debug + Send + Sync + 'static
{
}

pub(crate) fn cadd<C: Coeff>(a: C, b: C) -> Result<C, OverflowError> {
    a.checked_add(&b).ok_or(OverflowError)
}

pub(crate) fn csub<C: Coeff>(a: C, b: C) -> Result<C, OverflowError> {
    a.checked_sub(&b).ok_or(OverflowError)
}

pub(crate) fn cmul<C: Coeff>(a: C, b: C) -> Result<C, OverflowError> {
    a.checked_mul(&b).ok_or(OverflowError)
}

/// Converts a count into the scalar type; counts in this crate are far below
/// any primitive bound, but the conversion is still checked.
pub(crate) fn from_usize<C: Coeff>(n: usize) -> Result<C, OverflowError> {
    C::from(n).ok_or(OverflowError)
}

pub(crate) fn is_even<C: Coeff>(x: C) -> bool {
    (x % (C::one() + C::one())).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checked_ops_surface_overflow() {
        assert_eq!(cadd(i8::MAX, 1i8), Err(OverflowError));
        assert_eq!(cmul(i64::MAX, 2i64), Err(OverflowError));
        assert_eq!(cadd(40i64, 2), Ok(42));
    }

    #[test]
    fn parity_handles_negatives() {
        assert!(is_even(-4i64));
        assert!(!is_even(-3i64));
        assert!(is_even(0i64));
    }
}
