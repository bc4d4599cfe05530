use super::ring::{DiffPoly, DiffRing, OrderStats};
use num_rational::BigRational;

use crate::poly::{Field, Poly, RatFunc};

/// A differential system `F` together with the polynomial `f` whose radical
/// membership is in question (`f = 1` asks for inconsistency).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSystem<K> {
    pub ring: DiffRing<K>,
    pub generators: Vec<DiffPoly<K>>,
    pub f: DiffPoly<K>,
}

impl<K: Field> DiffSystem<K> {
    pub fn new(ring: DiffRing<K>, generators: Vec<DiffPoly<K>>) -> Self {
        Self { ring, generators, f: Poly::one() }
    }

    pub fn with_f(mut self, f: DiffPoly<K>) -> Self {
        self.f = f;
        self
    }

    /// Statistics of `F` alone, with `ord f` attached.
    pub fn stats(&self) -> OrderStats {
        self.ring.order_stats(&self.generators, Some(&self.f))
    }

    /// Statistics of `F ∪ {f}`.
    pub fn stats_with_f(&self) -> OrderStats {
        self.ring.order_stats(self.generators.iter().chain(std::iter::once(&self.f)), Some(&self.f))
    }
}

/// A system over either supported coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnySystem {
    Rational(DiffSystem<BigRational>),
    RationalFunctions(DiffSystem<RatFunc>),
}

impl From<DiffSystem<BigRational>> for AnySystem {
    fn from(s: DiffSystem<BigRational>) -> Self {
        AnySystem::Rational(s)
    }
}

impl From<DiffSystem<RatFunc>> for AnySystem {
    fn from(s: DiffSystem<RatFunc>) -> Self {
        AnySystem::RationalFunctions(s)
    }
}

/// Runs `$body` with `$s` bound to the typed system inside an [`AnySystem`].
#[macro_export]
macro_rules! with_system {
    ($any:expr, $s:ident => $body:expr) => {
        match $any {
            $crate::diff::AnySystem::Rational($s) => $body,
            $crate::diff::AnySystem::RationalFunctions($s) => $body,
        }
    };
}
