//! Minimal prolongation orders `t(F, f)`: the least `h` with
//! `f ∈ √(F^{(≤h)})`, decided by Gröbner bases.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::diff::{AnySystem, DiffPoly, DiffRing, DiffSystem};
use crate::error::{usage, Result};
use crate::poly::{ideal_membership, radical_membership, Caps, Field, Poly, PolyError, RatFunc, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    InRadical,
    NotInRadical,
    InconclusiveCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub h: u32,
    pub status: Status,
}

/// Decides `f ∈ √(F^{(≤h)})`; for `f = 1` this is plain ideal membership.
pub fn radical_membership_at<K: Field>(sys: &DiffSystem<K>, h: u32, caps: &Caps) -> MembershipVerdict {
    let status = match member_at(sys, h, caps) {
        Ok(true) => Status::InRadical,
        Ok(false) => Status::NotInRadical,
        Err(_) => Status::InconclusiveCap,
    };
    MembershipVerdict { h, status }
}

fn member_at<K: Field>(sys: &DiffSystem<K>, h: u32, caps: &Caps) -> Result<bool, PolyError> {
    let gens = sys.ring.prolong(&sys.generators, h);
    if sys.f.is_constant() && !sys.f.is_zero() {
        ideal_membership(&Poly::one(), &gens, caps)
    } else {
        radical_membership(&sys.f, &gens, caps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "result")]
pub enum MinimalT {
    Found { t: u32, verdicts: Vec<MembershipVerdict> },
    NotFound { h_max: u32, verdicts: Vec<MembershipVerdict> },
}

impl MinimalT {
    pub fn t(&self) -> Option<u32> {
        match self {
            MinimalT::Found { t, .. } => Some(*t),
            MinimalT::NotFound { .. } => None,
        }
    }

    pub fn verdicts(&self) -> &[MembershipVerdict] {
        match self {
            MinimalT::Found { verdicts, .. } | MinimalT::NotFound { verdicts, .. } => verdicts,
        }
    }
}

/// Ascending scan `h = 0, 1, …, h_max`. A capped level aborts the scan,
/// so a reported `t` is always exact.
pub fn minimal_t<K: Field>(sys: &DiffSystem<K>, h_max: u32, caps: &Caps) -> Result<MinimalT> {
    let mut verdicts = Vec::new();
    for h in 0..=h_max {
        let found = member_at(sys, h, caps)?;
        verdicts.push(MembershipVerdict { h, status: if found { Status::InRadical } else { Status::NotInRadical } });
        if found {
            return Ok(MinimalT::Found { t: h, verdicts });
        }
    }
    Ok(MinimalT::NotFound { h_max, verdicts })
}

/// Checks `(∂_i a)^(2d−1) ∈ (F^{(≤d)})` after confirming `a^d ∈ (F)`.
pub fn degreelem_claim_check<K: Field>(
    ring: &DiffRing<K>,
    f: &[DiffPoly<K>],
    a: &DiffPoly<K>,
    d: u32,
    i: usize,
    caps: &Caps,
) -> Result<bool> {
    if d == 0 {
        return usage("the exponent must be positive");
    }
    if i >= ring.m() {
        return usage("derivation index out of range");
    }
    if !ideal_membership(&a.pow(d), f, caps)? {
        return usage("a^d is not in the ideal generated by F");
    }
    let da = ring.differentiate(a, i).pow(2 * d - 1);
    Ok(ideal_membership(&da, &ring.prolong(f, d), caps)?)
}

/// The four example families, by parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family", content = "param")]
pub enum Example {
    /// `{y′ − 1, y^k}`.
    Ex1(u32),
    /// `{y1′, y1 − y2′, …, y_{n−1} − y_n′, y_n − a}` over `Q(x)`, `a = x^n/n!`.
    Ex2(u32),
    /// `{y1², y1 − y2², …, y_{n−1} − y_n², 1 − y_n′}`.
    Ex3(u32),
    /// `{u_{x1}², u_{x1} − u_{x2}², …, u_{x_{m−1}} − u_{x_m}², 1 − u_{x_m x_m}}`.
    Ex4(u32),
}

impl Example {
    /// The order `t(F, 1)` claimed for the family.
    pub fn claimed_t(self) -> u32 {
        match self {
            Example::Ex1(k) => k,
            Example::Ex2(n) => n,
            Example::Ex3(n) | Example::Ex4(n) => 1 << n,
        }
    }

    pub fn param(self) -> u32 {
        match self {
            Example::Ex1(p) | Example::Ex2(p) | Example::Ex3(p) | Example::Ex4(p) => p,
        }
    }

    /// Short file-friendly name, e.g. `ex3_n2`.
    pub fn slug(self) -> String {
        match self {
            Example::Ex1(k) => format!("ex1_k{k}"),
            Example::Ex2(n) => format!("ex2_n{n}"),
            Example::Ex3(n) => format!("ex3_n{n}"),
            Example::Ex4(m) => format!("ex4_m{m}"),
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.slug())
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// The displayed generators of each family, with `f = 1`. Example 2 needs
/// rational-function coefficients.
pub fn example_family(ex: Example) -> Result<AnySystem> {
    let p = ex.param() as usize;
    if p == 0 {
        return usage("example parameters start at 1");
    }
    let one = Poly::one();
    Ok(match ex {
        Example::Ex1(k) => {
            let ring = DiffRing::new(1, vec!["y".into()])?;
            let gens = vec![&ring.der(0, &[1]) - &one, ring.y(0).pow(k)];
            AnySystem::Rational(DiffSystem::new(ring, gens))
        }
        Example::Ex2(n) => {
            let ring = DiffRing::<RatFunc>::standard(1, p)?;
            let a = RatFunc::from_poly(UniPoly::monomial(BigRational::new(1.into(), factorial(n)), p));
            let mut gens = vec![ring.der(0, &[1])];
            for j in 0..p - 1 {
                gens.push(&ring.y(j) - &ring.der(j + 1, &[1]));
            }
            gens.push(&ring.y(p - 1) - &Poly::constant(a));
            AnySystem::RationalFunctions(DiffSystem::new(ring, gens))
        }
        Example::Ex3(_) => {
            let ring = DiffRing::standard(1, p)?;
            let mut gens = vec![ring.y(0).pow(2)];
            for j in 0..p - 1 {
                gens.push(&ring.y(j) - &ring.y(j + 1).pow(2));
            }
            gens.push(&one - &ring.der(p - 1, &[1]));
            AnySystem::Rational(DiffSystem::new(ring, gens))
        }
        Example::Ex4(_) => {
            let ring = DiffRing::new(p, vec!["u".into()])?;
            let unit = |i: usize| {
                let mut op = vec![0; p];
                op[i] = 1;
                ring.der(0, &op)
            };
            let mut gens = vec![unit(0).pow(2)];
            for i in 0..p - 1 {
                gens.push(&unit(i) - &unit(i + 1).pow(2));
            }
            let mut op = vec![0; p];
            op[p - 1] = 2;
            gens.push(&one - &ring.der(0, &op));
            AnySystem::Rational(DiffSystem::new(ring, gens))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(ex: Example) -> DiffSystem<BigRational> {
        match example_family(ex).unwrap() {
            AnySystem::Rational(s) => s,
            AnySystem::RationalFunctions(_) => panic!("expected Q coefficients"),
        }
    }

    #[test]
    fn generators_print() {
        let s = rational(Example::Ex1(3));
        let txt: Vec<String> = s.generators.iter().map(|g| g.display(&s.ring).to_string()).collect();
        assert_eq!(txt, ["y[1] - 1", "y^3"]);
        let s = rational(Example::Ex3(2));
        let txt: Vec<String> = s.generators.iter().map(|g| g.display(&s.ring).to_string()).collect();
        assert_eq!(txt, ["y1^2", "-y2^2 + y1", "-y2[1] + 1"]);
        let s = rational(Example::Ex4(2));
        assert_eq!(s.ring.m(), 2);
        let txt: Vec<String> = s.generators.iter().map(|g| g.display(&s.ring).to_string()).collect();
        assert_eq!(txt, ["u[1,0]^2", "-u[0,1]^2 + u[1,0]", "-u[0,2] + 1"]);
    }

    #[test]
    fn example3_n1() {
        let s = rational(Example::Ex3(1));
        let caps = Caps::default();
        assert_eq!(radical_membership_at(&s, 1, &caps).status, Status::NotInRadical);
        assert_eq!(radical_membership_at(&s, 2, &caps).status, Status::InRadical);
        assert_eq!(minimal_t(&s, 4, &caps).unwrap().t(), Some(2));
    }

    #[test]
    fn member_of_f_at_zero() {
        let s = rational(Example::Ex1(2));
        let g = s.generators[1].clone();
        let s = s.with_f(g);
        assert_eq!(radical_membership_at(&s, 0, &Caps::default()).status, Status::InRadical);
    }

    #[test]
    fn example2_small() {
        let AnySystem::RationalFunctions(s) = example_family(Example::Ex2(2)).unwrap() else { panic!() };
        assert_eq!(minimal_t(&s, 3, &Caps::default()).unwrap().t(), Some(2));
    }

    #[test]
    fn degreelem_fixtures() {
        let ring = DiffRing::<BigRational>::standard(1, 2).unwrap();
        let y = ring.y(0);
        let caps = Caps::default();
        assert!(degreelem_claim_check(&ring, &[y.pow(2)], &y, 2, 0, &caps).unwrap());
        assert!(degreelem_claim_check(&ring, std::slice::from_ref(&y), &y, 1, 0, &caps).unwrap());
        let p = &ring.y(0) * &ring.y(1);
        assert!(degreelem_claim_check(&ring, std::slice::from_ref(&p), &p, 1, 0, &caps).unwrap());
        assert!(degreelem_claim_check(&ring, &[y.pow(2)], &ring.y(1), 1, 0, &caps).is_err());
    }
}
