//! The differential field `Q(x)` with derivation `d/dx`.

use std::cmp::Ordering;
use std::fmt::{self, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::FieldKind;

/// Dense univariate polynomial over `Q`, coefficients in ascending degree.
///
/// Invariant: no trailing zero coefficient; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = &rem[k] * &lead_inv;
            if !c.is_zero() {
                for (i, b) in divisor.coeffs.iter().enumerate() {
                    rem[k - dd + i] -= &c * b;
                }
                quot[k - dd] = c;
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn make_monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn cmp_coeffs(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// An element of `Q(x)` kept as a fully reduced fraction.
///
/// Invariants: the denominator is monic and coprime to the numerator; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self { num, den: UniPoly::one() });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let l = den.lead().expect("nonzero").recip();
        Some(Self { num: num.scale(&l), den: den.scale(&l) })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        Self { num: p, den: UniPoly::one() }
    }

    /// The base variable `x`.
    pub fn x() -> Self {
        Self::from_poly(UniPoly::monomial(BigRational::one(), 1))
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn pow(&self, k: u32) -> Self {
        use crate::poly::Field;
        (0..k).fold(<Self as Field>::one(), |acc, _| acc.mul(self))
    }
}

impl Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

// Kept apart so the field methods do not collide with `num_traits` in scope above.
mod field_impl {
    use std::cmp::Ordering;

    use num_rational::BigRational;
    use num_traits::Signed;

    use super::{FieldKind, RatFunc, UniPoly};
    use crate::poly::Field;

    impl Field for RatFunc {
        const KIND: FieldKind = FieldKind::RationalFunctions;

        fn zero() -> Self {
            Self::from_poly(UniPoly::zero())
        }
        fn one() -> Self {
            Self::from_poly(UniPoly::one())
        }
        fn is_zero(&self) -> bool {
            self.num.is_zero()
        }
        fn is_one(&self) -> bool {
            self.is_polynomial() && self.num == UniPoly::one()
        }
        fn add(&self, other: &Self) -> Self {
            if self.den == other.den {
                return Self::new(self.num.add(&other.num), self.den.clone()).expect("nonzero den");
            }
            Self::new(
                self.num.mul(&other.den).add(&other.num.mul(&self.den)),
                self.den.mul(&other.den),
            )
            .expect("nonzero den")
        }
        fn sub(&self, other: &Self) -> Self {
            self.add(&other.neg())
        }
        fn mul(&self, other: &Self) -> Self {
            if self.is_polynomial() && other.is_polynomial() {
                return Self::from_poly(self.num.mul(&other.num));
            }
            Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero den")
        }
        fn neg(&self) -> Self {
            Self { num: self.num.neg(), den: self.den.clone() }
        }
        fn inv(&self) -> Option<Self> {
            if self.num.is_zero() {
                None
            } else {
                Self::new(self.den.clone(), self.num.clone())
            }
        }
        fn derivative(&self) -> Self {
            if self.is_polynomial() {
                return Self::from_poly(self.num.derivative());
            }
            // (n/d)' = (n'd - nd') / d^2
            let top = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
            Self::new(top, self.den.mul(&self.den)).expect("nonzero den")
        }
        fn from_rational(q: BigRational) -> Self {
            Self::from_poly(UniPoly::constant(q))
        }
        fn to_rational(&self) -> Option<BigRational> {
            if self.is_polynomial() && self.num.is_constant() {
                Some(self.num.coeffs().first().cloned().unwrap_or_else(BigRational::zero))
            } else {
                None
            }
        }
        fn total_cmp(&self, other: &Self) -> Ordering {
            self.num.cmp_coeffs(&other.num).then_with(|| self.den.cmp_coeffs(&other.den))
        }
        fn needs_parens(&self) -> bool {
            !(self.is_polynomial() && self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1)
        }
        fn prints_negative(&self) -> bool {
            !self.needs_parens() && self.num.lead().is_some_and(|c| c.is_negative())
        }
    }
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::{RatFunc, UniPoly};
    use crate::poly::Field;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(c.iter().map(|&v| q(v, 1)).collect())
    }

    #[test]
    fn fractions_are_reduced_with_monic_denominator() {
        // (x^2 - 1) / (2x - 2) = (x + 1) / 2
        let r = RatFunc::new(up(&[-1, 0, 1]), up(&[-2, 2])).unwrap();
        assert_eq!(r.denominator(), &UniPoly::one());
        assert_eq!(r.numerator(), &UniPoly::from_coeffs(vec![q(1, 2), q(1, 2)]));
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        assert!(RatFunc::from_rational(q(7, 3)).derivative().is_zero());
    }

    #[test]
    fn derivative_of_power_over_factorial() {
        // (x^3/6)''' = 1
        let a = RatFunc::from_poly(UniPoly::monomial(q(1, 6), 3));
        let d3 = a.derivative().derivative().derivative();
        assert!(d3.is_one());
    }

    #[test]
    fn leibniz_on_quotients() {
        let a = RatFunc::new(up(&[1, 1]), up(&[0, 1, 1])).unwrap();
        let b = RatFunc::new(up(&[3, 0, 2]), up(&[-1, 1])).unwrap();
        let lhs = a.mul(&b).derivative();
        let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_law() {
        let a = RatFunc::new(up(&[2, 0, 1]), up(&[5, 1])).unwrap();
        assert!(a.mul(&a.inv().unwrap()).is_one());
        assert!(RatFunc::zero().inv().is_none());
    }

    #[test]
    fn gcd_is_monic() {
        let a = up(&[-2, 0, 2]); // 2(x-1)(x+1)
        let b = up(&[3, -3]); // -3(x-1)
        assert_eq!(a.gcd(&b), up(&[-1, 1]));
    }
}
