use core::fmt::Debug;

use num_traits::{One, Zero};

use super::Rational;

/// Commutative ring operations used by the dense matrix type.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Implements the `Ring` trait and the std operator traits for a type that
/// provides inherent `add_ref`, `sub_ref`, `mul_ref`, `neg_ref`.
macro_rules! ring_ops {
    ($t:ty) => {
        impl $crate::algebra::Ring for $t {
            fn zero() -> Self {
                <$t>::zero()
            }
            fn one() -> Self {
                <$t>::one()
            }
            fn is_zero(&self) -> bool {
                <$t>::is_zero(self)
            }
            fn add(&self, other: &Self) -> Self {
                self.add_ref(other)
            }
            fn sub(&self, other: &Self) -> Self {
                self.sub_ref(other)
            }
            fn mul(&self, other: &Self) -> Self {
                self.mul_ref(other)
            }
            fn neg(&self) -> Self {
                self.neg_ref()
            }
        }
        impl core::ops::Add<&$t> for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                self.add_ref(o)
            }
        }
        impl core::ops::Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                self.add_ref(&o)
            }
        }
        impl core::ops::Sub<&$t> for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                self.sub_ref(o)
            }
        }
        impl core::ops::Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                self.sub_ref(&o)
            }
        }
        impl core::ops::Mul<&$t> for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                self.mul_ref(o)
            }
        }
        impl core::ops::Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                self.mul_ref(&o)
            }
        }
        impl core::ops::Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                self.neg_ref()
            }
        }
        impl core::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.neg_ref()
            }
        }
    };
}
pub(crate) use ring_ops;
