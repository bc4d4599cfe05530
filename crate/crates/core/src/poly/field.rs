//! Coefficient fields.
//!
//! Two fields are supported: the rationals, backed by `num_rational::BigRational`,
//! and univariate rational functions over the rationals ([`RatFunc`]). The latter
//! carries the derivation `d/dx`; on the rationals every element is a constant.
//!
//! [`RatFunc`]: super::RatFunc

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Which coefficient field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    /// The rational numbers.
    #[serde(rename = "Q")]
    Rationals,
    /// Rational functions in one variable `x`, with derivation `d/dx`.
    #[serde(rename = "Q(x)")]
    RationalFunctions,
}

impl Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldKind::Rationals => f.write_str("Q"),
            FieldKind::RationalFunctions => f.write_str("Q(x)"),
        }
    }
}

/// A computable differential field of characteristic zero.
pub trait Field: Clone + Debug + Display + PartialEq + Eq + Hash + Send + Sync + 'static {
    const KIND: FieldKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Image under the field's derivation (identically zero on `Q`).
    fn derivative(&self) -> Self;

    fn from_rational(q: BigRational) -> Self;

    fn from_int(i: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(i)))
    }

    /// The element as a rational number, if it is one.
    fn to_rational(&self) -> Option<BigRational>;

    /// An arbitrary but fixed total order, used only for deterministic tie-breaking.
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// True when printing needs parentheses to act as a product factor.
    fn needs_parens(&self) -> bool;

    /// True when the element prints with a leading minus that can be pulled
    /// out (used to print `a - b` instead of `a + -b`).
    fn prints_negative(&self) -> bool {
        self.to_rational().is_some_and(|q| q.is_negative())
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

impl Field for BigRational {
    const KIND: FieldKind = FieldKind::Rationals;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
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
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn derivative(&self) -> Self {
        Zero::zero()
    }
    fn from_rational(q: BigRational) -> Self {
        q
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn needs_parens(&self) -> bool {
        false
    }
}
