use std::cmp::{Ordering, Reverse};
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::monomial::{Monomial, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    /// Graded reverse lexicographic.
    Grevlex,
    Lex,
}

/// A monomial order given by a kind and a variable priority list.
///
/// Variables earlier in `priority` are more significant. Variables not listed
/// rank below every listed one, among themselves by descending id. Because
/// that rule is global, a basis computed over some variables stays a basis
/// when polynomials in further variables show up later.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Vec<VarId>,
}

impl Default for MonomialOrder {
    fn default() -> Self {
        Self::grevlex()
    }
}

impl MonomialOrder {
    /// Grevlex with every variable ranked by descending id.
    pub fn grevlex() -> Self {
        Self { kind: OrderKind::Grevlex, priority: Vec::new() }
    }

    pub fn lex() -> Self {
        Self { kind: OrderKind::Lex, priority: Vec::new() }
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<VarId>) -> Self {
        Self { kind, priority }
    }

    /// Sort key of a variable: smaller is more significant.
    pub(crate) fn key(&self, pos: &HashMap<VarId, usize>, v: VarId) -> (u8, usize, Reverse<VarId>) {
        match pos.get(&v) {
            Some(&i) => (0, i, Reverse(v)),
            None => (1, 0, Reverse(v)),
        }
    }

    /// The given variables sorted from most to least significant.
    pub fn arrange(&self, vars: impl IntoIterator<Item = VarId>) -> Vec<VarId> {
        let pos = self.positions();
        let mut v: Vec<VarId> = vars.into_iter().collect();
        v.sort_unstable_by_key(|&x| self.key(&pos, x));
        v.dedup();
        v
    }

    pub(crate) fn positions(&self) -> HashMap<VarId, usize> {
        let mut pos = HashMap::with_capacity(self.priority.len());
        for (i, &v) in self.priority.iter().enumerate() {
            pos.entry(v).or_insert(i);
        }
        pos
    }

    /// Compares sparse monomials. Intended for tests and small inputs; the
    /// Gröbner kernel uses dense exponent vectors instead.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let vars = self.arrange(a.vars().chain(b.vars()));
        let ea: Vec<u32> = vars.iter().map(|&v| a.degree_in(v)).collect();
        let eb: Vec<u32> = vars.iter().map(|&v| b.degree_in(v)).collect();
        cmp_dense(self.kind, &ea, &eb, a.total_degree(), b.total_degree())
    }
}

/// Exponent vectors indexed from most to least significant variable.
#[inline]
pub(crate) fn cmp_dense<E: Copy + Ord>(kind: OrderKind, a: &[E], b: &[E], da: u32, db: u32) -> Ordering {
    match kind {
        OrderKind::Grevlex => da.cmp(&db).then_with(|| {
            for (x, y) in a.iter().zip(b).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        }),
        OrderKind::Lex => {
            for (x, y) in a.iter().zip(b) {
                if x != y {
                    return x.cmp(y);
                }
            }
            Ordering::Equal
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(p.iter().map(|&(v, e)| (VarId(v), e)))
    }

    #[test]
    fn grevlex_textbook() {
        // x > y > z with x = 2, y = 1, z = 0 under the default rule
        let o = MonomialOrder::grevlex();
        // x y^2 z > x^2 z^2? No: equal degree 4 vs 4; smallest var z: 1 < 2 so xy^2z is larger.
        assert_eq!(o.cmp(&m(&[(2, 1), (1, 2), (0, 1)]), &m(&[(2, 2), (0, 2)])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[(2, 1)]), &m(&[(1, 1)])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[(0, 2)]), &m(&[(2, 1)])), Ordering::Greater);
    }

    #[test]
    fn lex_and_priority() {
        let o = MonomialOrder::with_priority(OrderKind::Lex, vec![VarId(0)]);
        assert_eq!(o.cmp(&m(&[(0, 1)]), &m(&[(1, 5)])), Ordering::Greater);
        assert_eq!(o.arrange([VarId(3), VarId(0), VarId(7)]), vec![VarId(0), VarId(7), VarId(3)]);
    }

    #[test]
    fn multiplicative_on_samples() {
        let o = MonomialOrder::grevlex();
        let ms = [m(&[]), m(&[(0, 1)]), m(&[(1, 1)]), m(&[(0, 2), (1, 1)]), m(&[(2, 1), (0, 1)])];
        for a in &ms {
            for b in &ms {
                for c in &ms {
                    assert_eq!(o.cmp(a, b), o.cmp(&a.mul(c), &b.mul(c)));
                }
                assert_ne!(o.cmp(a, &m(&[])), Ordering::Less);
            }
        }
    }
}
