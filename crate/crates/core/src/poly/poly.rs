use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::Field;
use super::monomial::{fmt_monomial, Monomial, VarId, VarNames};
use super::PolyError;

/// Sparse multivariate polynomial.
///
/// Terms are kept strictly descending under the storage order of [`Monomial`],
/// with no zero coefficients. The zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<K> {
    terms: Vec<(Monomial, K)>,
}

impl<K: Field> Default for Poly<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Field> Poly<K> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        Self::monomial(c, Monomial::one())
    }

    pub fn from_int(i: i64) -> Self {
        Self::constant(K::from_int(i))
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(K::one(), Monomial::var(v))
    }

    pub fn monomial(c: K, m: Monomial) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(m, c)] }
        }
    }

    /// Canonicalizes arbitrary terms: sorts, merges equal monomials, drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut map: BTreeMap<Monomial, K> = BTreeMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(acc) => *acc = acc.add(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[(Monomial, K)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, K)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// True for elements of the coefficient field (including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<K> {
        match self.terms.as_slice() {
            [] => Some(K::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Variables occurring in the polynomial, ascending.
    pub fn vars(&self) -> Vec<VarId> {
        let mut v: Vec<VarId> = self.terms.iter().flat_map(|(m, _)| m.vars()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn max_var(&self) -> Option<VarId> {
        self.terms.iter().filter_map(|(m, _)| m.pairs().last().map(|p| p.0)).max()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.iter().any(|(m, _)| m.degree_in(v) > 0)
    }

    /// Coefficient of `v^d` when viewed as a polynomial in `v`.
    pub fn coeff_of_power(&self, v: VarId, d: u32) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let (e, rest) = m.split_off(v);
            (e == d).then(|| (rest, c.clone()))
        }))
    }

    /// Coefficients `[c_0, c_1, ...]` with `self = sum c_k v^k`.
    pub fn univariate_coeffs(&self, v: VarId) -> Vec<Self> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, K)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets.into_iter().map(Self::from_terms).collect()
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect() }
    }

    pub fn mul_monomial(&self, c: &K, mono: &Monomial) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        // multiplication by a monomial preserves the storage order
        Self { terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a.mul(c))).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Leading coefficient under the storage order.
    pub fn lead_coeff(&self) -> Option<&K> {
        self.terms.first().map(|t| &t.1)
    }

    /// Scales so the storage-order leading coefficient is one.
    pub fn make_monic(&self) -> Self {
        match self.lead_coeff().and_then(|c| c.inv()) {
            Some(inv) => self.scale(&inv),
            None => Self::zero(),
        }
    }

    /// Partial derivative with respect to one variable.
    pub fn partial(&self, v: VarId) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.degree_in(v);
            (e > 0).then(|| {
                let (_, rest) = m.split_off(v);
                let mono = rest.mul(&Monomial::var_pow(v, e - 1));
                (mono, c.mul(&K::from_int(e as i64)))
            })
        }))
    }

    /// Substitutes variables through `f`; `f` must be injective on the occurring variables.
    pub fn map_vars(&self, mut f: impl FnMut(VarId) -> VarId) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&mut f), c.clone())))
    }

    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Deterministic total order: storage-order term by term, then coefficients.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let o = a.0.cmp(&b.0).then_with(|| a.1.total_cmp(&b.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }

    pub fn display<'a>(&'a self, names: &'a dyn VarNames) -> PolyDisplay<'a, K> {
        PolyDisplay { poly: self, names }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let conv = |c: &K| if negate_other { c.neg() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), conv(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), conv(c))));
        Self { terms: out }
    }
}

impl<K: Field> Add for &Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        self.merge(rhs, false)
    }
}

impl<K: Field> Sub for &Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        self.merge(rhs, true)
    }
}

impl<K: Field> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }
}

impl<K: Field> Mul for &Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let (small, big) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut acc = Poly::zero();
        for (m, c) in &small.terms {
            acc = &acc + &big.mul_monomial(c, m);
        }
        acc
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<K: Field> $tr for Poly<K> {
            type Output = Poly<K>;
            fn $method(self, rhs: Poly<K>) -> Poly<K> {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Which arithmetic operation [`poly_arith`] performs.
#[derive(Clone, Debug)]
pub enum ArithOp<K> {
    Add,
    Sub,
    Mul,
    /// Multiply the first operand by a field element; the second operand is ignored.
    Scale(K),
}

/// Exact arithmetic in canonical form.
pub fn poly_arith<K: Field>(a: &Poly<K>, b: &Poly<K>, op: ArithOp<K>) -> Poly<K> {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Scale(c) => a.scale(&c),
    }
}

/// Result of pseudo-division: `init(b, v)^exponent * g = quotient * b + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoDivision<K> {
    pub quotient: Poly<K>,
    pub remainder: Poly<K>,
    pub exponent: u32,
}

/// Pseudo-division of `g` by `b` viewed as univariate polynomials in `v`.
///
/// When the initial of `b` is a field element the division is exact and the
/// exponent is zero. Otherwise the remainder satisfies `deg_v(r) < deg_v(b)` and
/// the exponent is at most `deg_v(g) - deg_v(b) + 1`.
pub fn pseudo_divide<K: Field>(g: &Poly<K>, b: &Poly<K>, v: VarId) -> Result<PseudoDivision<K>, PolyError> {
    let db = b.degree_in(v);
    if db == 0 {
        return Err(PolyError::Usage(format!("pseudo-division by a polynomial free of variable {}", v.0)));
    }
    let init = b.coeff_of_power(v, db);
    let mut rem = g.clone();
    let mut quot = Poly::zero();
    let mut exponent = 0;
    if let Some(c) = init.constant_value() {
        let c_inv = c.inv().expect("initial is nonzero");
        loop {
            let dr = rem.degree_in(v);
            if dr < db || rem.is_zero() {
                break;
            }
            let lc = rem.coeff_of_power(v, dr);
            let t = lc.mul_monomial(&c_inv, &Monomial::var_pow(v, dr - db));
            rem = &rem - &(&t * b);
            quot = &quot + &t;
        }
    } else {
        loop {
            let dr = rem.degree_in(v);
            if dr < db || rem.is_zero() {
                break;
            }
            let lc = rem.coeff_of_power(v, dr);
            let t = lc.mul_monomial(&K::one(), &Monomial::var_pow(v, dr - db));
            rem = &(&init * &rem) - &(&t * b);
            quot = &(&init * &quot) + &t;
            exponent += 1;
        }
    }
    Ok(PseudoDivision { quotient: quot, remainder: rem, exponent })
}

pub struct PolyDisplay<'a, K> {
    poly: &'a Poly<K>,
    names: &'a dyn VarNames,
}

impl<K: Field> fmt::Display for PolyDisplay<'_, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.poly.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.prints_negative();
            let c_abs = if neg { c.neg() } else { c.clone() };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                if c_abs.needs_parens() {
                    write!(f, "({c_abs})")?;
                } else {
                    write!(f, "{c_abs}")?;
                }
                continue;
            }
            if !c_abs.is_one() {
                if c_abs.needs_parens() {
                    write!(f, "({c_abs})*")?;
                } else {
                    write!(f, "{c_abs}*")?;
                }
            }
            fmt_monomial(m, self.names, f)?;
        }
        Ok(())
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;

    type Q = BigRational;

    fn x() -> Poly<Q> {
        Poly::var(VarId(0))
    }
    fn y() -> Poly<Q> {
        Poly::var(VarId(1))
    }
    fn c(i: i64) -> Poly<Q> {
        Poly::from_int(i)
    }

    #[test]
    fn add_cancels() {
        // (x - y) + y = x
        assert_eq!(poly_arith(&(&x() - &y()), &y(), ArithOp::Add), x());
    }

    #[test]
    fn difference_of_squares() {
        let p = poly_arith(&(&x() + &c(1)), &(&x() - &c(1)), ArithOp::Mul);
        assert_eq!(p, &(&x() * &x()) - &c(1));
    }

    #[test]
    fn zero_annihilates() {
        let p = &(&x() * &y()) + &c(3);
        assert!(poly_arith(&Poly::zero(), &p, ArithOp::Mul).is_zero());
        assert!(poly_arith(&p, &p, ArithOp::Scale(Q::from_int(0))).is_zero());
    }

    #[test]
    fn pseudo_divide_univariate() {
        // y'^2 by y' - 1
        let v = VarId(1);
        let g = y().pow(2);
        let b = &y() - &c(1);
        let pd = pseudo_divide(&g, &b, v).unwrap();
        assert_eq!(pd.quotient, &y() + &c(1));
        assert_eq!(pd.remainder, c(1));
        assert!(pd.exponent <= 2);
    }

    #[test]
    fn pseudo_divide_self() {
        let b = &(&y() * &y()) - &x();
        let pd = pseudo_divide(&b, &b, VarId(1)).unwrap();
        assert_eq!(pd.quotient, c(1));
        assert!(pd.remainder.is_zero());
        assert!(pd.exponent <= 1);
    }

    #[test]
    fn pseudo_divide_nonconstant_initial() {
        // g = x v^2 + 1, b = 2 v + x with v = VarId(2), x = VarId(0)
        let v = Poly::<Q>::var(VarId(2));
        let g = &(&x() * &v.pow(2)) + &c(1);
        let b = &(&c(2) * &v) + &x();
        let pd = pseudo_divide(&g, &b, VarId(2)).unwrap();
        assert_eq!(pd.exponent, 0);
        // the initial 2 is a constant, so division is exact
        let lhs = g.clone();
        let rhs = &(&pd.quotient * &b) + &pd.remainder;
        assert_eq!(lhs, rhs);

        // force a non-constant initial: b = x v + 1
        let b2 = &(&x() * &v) + &c(1);
        let pd2 = pseudo_divide(&g, &b2, VarId(2)).unwrap();
        let init = x();
        let lhs = &init.pow(pd2.exponent) * &g;
        let rhs = &(&pd2.quotient * &b2) + &pd2.remainder;
        assert_eq!(lhs, rhs);
        assert_eq!(pd2.remainder.degree_in(VarId(2)), 0);
        assert!(pd2.exponent <= 2 - 1 + 1);
    }

    #[test]
    fn pseudo_divide_requires_variable() {
        assert!(pseudo_divide(&x(), &y(), VarId(0)).is_err());
    }

    #[test]
    fn display_uses_names() {
        let t = VarTable::new(["x", "y"]);
        let p = &(&(&x() * &x()) - &(&c(3) * &y())) + &c(1);
        assert_eq!(p.display(&t).to_string(), "x^2 - 3*y + 1");
    }
}
