//! Exact integer backends for the hot loops.
//!
//! Every engine is written once against [`Ring`] and instantiated twice: on
//! `i128` with checked arithmetic, and on `BigInt`. An overflow on the narrow
//! backend is reported as `None` and the caller reruns on `BigInt`, so results
//! are always exact.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::point::Scalar;

pub(crate) trait Ring: Clone + Ord + Eq + Hash + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_scalar(v: &Scalar) -> Option<Self>;

    fn add(&self, rhs: &Self) -> Option<Self>;
    fn sub(&self, rhs: &Self) -> Option<Self>;
    fn mul(&self, rhs: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Division that is known to be exact.
    fn div_exact(&self, rhs: &Self) -> Self;

    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn abs(&self) -> Option<Self>;

    /// `a * b - c * d`
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        a.mul(b)?.sub(&c.mul(d)?)
    }

    fn dot(lhs: &[Self], rhs: &[Self]) -> Option<Self> {
        let mut acc = Self::zero();
        for (a, b) in lhs.iter().zip(rhs) {
            acc = acc.add(&a.mul(b)?)?;
        }
        Some(acc)
    }
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn from_scalar(v: &Scalar) -> Option<Self> {
        v.to_i64()
            .filter(|x| x.abs() <= NARROW_COORD_LIMIT)
            .map(i128::from)
    }
    fn add(&self, rhs: &Self) -> Option<Self> {
        self.checked_add(*rhs)
    }
    fn sub(&self, rhs: &Self) -> Option<Self> {
        self.checked_sub(*rhs)
    }
    fn mul(&self, rhs: &Self) -> Option<Self> {
        self.checked_mul(*rhs)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self % rhs, 0);
        self / rhs
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs(&self) -> Option<Self> {
        self.checked_abs()
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_scalar(v: &Scalar) -> Option<Self> {
        Some(v.clone())
    }
    fn add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Option<Self> {
        Some(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % rhs)));
        self / rhs
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs(&self) -> Option<Self> {
        Some(Signed::abs(self))
    }
}

/// Largest coordinate magnitude admitted on the `i128` backend. Keeps LP
/// determinants comfortably inside 128 bits for the dimensions we care about;
/// anything that still overflows falls back to `BigInt`.
pub(crate) const NARROW_COORD_LIMIT: i64 = 1 << 24;

pub(crate) fn narrow_coords<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> Option<Vec<i128>> {
    values
        .into_iter()
        .map(<i128 as Ring>::from_scalar)
        .collect()
}
