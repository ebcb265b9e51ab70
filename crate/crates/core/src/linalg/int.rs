//! Integer backends for exact elimination: `i64` with overflow detection, and
//! `BigInt` as the fallback.

use core::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Int: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Result<Self, Overflow>;
    fn sub(&self, o: &Self) -> Result<Self, Overflow>;
    fn mul(&self, o: &Self) -> Result<Self, Overflow>;
    /// Euclidean quotient.
    fn div_floor(&self, o: &Self) -> Self;
    fn divides(&self, o: &Self) -> bool;
    fn gcd(&self, o: &Self) -> Self;
    /// Size used to pick pivots of small magnitude.
    fn magnitude(&self) -> u64;
    fn to_biguint_abs(&self) -> BigUint;
}

impl Int for i64 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
    fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_sub(*o).ok_or(Overflow)
    }
    fn mul(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_mul(*o).ok_or(Overflow)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn divides(&self, o: &Self) -> bool {
        *self != 0 && o % self == 0
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn magnitude(&self) -> u64 {
        self.unsigned_abs()
    }
    fn to_biguint_abs(&self) -> BigUint {
        BigUint::from(self.unsigned_abs())
    }
}

impl Int for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
    fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self * o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn divides(&self, o: &Self) -> bool {
        !Zero::is_zero(self) && Zero::is_zero(&(o % self))
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn magnitude(&self) -> u64 {
        BigInt::magnitude(self).to_u64().unwrap_or(u64::MAX)
    }
    fn to_biguint_abs(&self) -> BigUint {
        BigInt::magnitude(self).clone()
    }
}
