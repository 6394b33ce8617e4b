use std::fmt::{Debug, Display};

use super::rat::Rat;
use crate::error::Result;

/// Coefficient field for dense univariate polynomials and linear algebra.
///
/// Elements of some fields (rational functions) carry an ambient context,
/// so constants are produced from an existing element rather than from
/// nothing.
pub trait Field: Clone + PartialEq + Debug + Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn rat_like(&self, c: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    fn scale_rat(&self, c: &Rat) -> Self {
        self.mul(&self.rat_like(c))
    }
}

impl Field for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn rat_like(&self, c: &Rat) -> Self {
        c.clone()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Rat::is_one(self)
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
    fn inv(&self) -> Result<Self> {
        Rat::inv(self)
    }
    fn scale_rat(&self, c: &Rat) -> Self {
        self * c
    }
}
