use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Index of an algebraic indeterminate.
///
/// Ids below [`VarId::SLACK_BASE`] are ordinary variables (derivatives in the
/// differential layer); ids at or above it are slack variables introduced by
/// saturation and radical tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub u32);

impl VarId {
    pub const SLACK_BASE: u32 = 1 << 30;

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_slack(self) -> bool {
        self.0 >= Self::SLACK_BASE
    }

    pub fn slack(k: u32) -> Self {
        VarId(Self::SLACK_BASE + k)
    }
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable.
///
/// No stored exponent is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(VarId, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarId) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: VarId, e: u32) -> Self {
        let mut s = SmallVec::new();
        if e > 0 {
            s.push((v, e));
        }
        Monomial(s)
    }

    /// Builds a monomial from arbitrary pairs; repeated variables are merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut v: SmallVec<[(VarId, u32); 4]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by_key(|p| p.0);
        let mut out: SmallVec<[(VarId, u32); 4]> = SmallVec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        match self.0.binary_search_by_key(&v, |p| p.0) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|p| p.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().all(|&(v, e)| other.degree_in(v) >= e)
    }

    /// `other / self` when `self` divides `other`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        let pairs = other.0.iter().filter_map(|&(v, e)| {
            let r = e - self.degree_in(v);
            (r > 0).then_some((v, r))
        });
        Some(Monomial(pairs.collect()))
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Monomial::from_pairs(
            self.0
                .iter()
                .map(|&(v, e)| (v, e.max(other.degree_in(v))))
                .chain(other.0.iter().filter(|p| self.degree_in(p.0) == 0).copied()),
        )
    }

    /// Removes `v` entirely, returning its exponent and the cofactor.
    pub fn split_off(&self, v: VarId) -> (u32, Monomial) {
        let e = self.degree_in(v);
        (e, Monomial(self.0.iter().filter(|p| p.0 != v).copied().collect()))
    }

    /// Replaces every variable through `f` (which must be injective on this monomial).
    pub fn map_vars(&self, mut f: impl FnMut(VarId) -> VarId) -> Self {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

impl Ord for Monomial {
    /// Storage order: degree, then reverse lexicographic with larger ids more
    /// significant. Active orders for Gröbner computations are separate
    /// ([`super::MonomialOrder`]).
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.total_degree().cmp(&other.total_degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // a has a positive exponent at the least significant differing variable
                    Ordering::Less => return Ordering::Less,
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Equal => {
                        if ea != eb {
                            return eb.cmp(&ea);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Display names for variables.
pub trait VarNames {
    fn var_name(&self, v: VarId) -> String;
}

/// A plain variable table for algebraic (non-differential) use.
#[derive(Clone, Debug, Default)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Self { names: names.into_iter().map(Into::into).collect() }
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name).map(|i| VarId(i as u32))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

impl VarNames for VarTable {
    fn var_name(&self, v: VarId) -> String {
        if v.is_slack() {
            return format!("z{}", v.0 - VarId::SLACK_BASE);
        }
        self.names.get(v.index()).cloned().unwrap_or_else(|| format!("v{}", v.0))
    }
}

pub(crate) fn fmt_monomial(m: &Monomial, names: &dyn VarNames, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    // most significant variable first
    for &(v, e) in m.pairs().iter().rev() {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(&names.var_name(v))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(p.iter().map(|&(v, e)| (VarId(v), e)))
    }

    #[test]
    fn storage_order_is_graded() {
        assert!(m(&[(0, 2)]) > m(&[(5, 1)]));
        assert!(m(&[(1, 1)]) > m(&[(0, 1)]));
        // same degree: the one with less of the least significant var is larger
        assert!(m(&[(1, 2)]) > m(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn lcm_and_div() {
        let a = m(&[(0, 2), (2, 1)]);
        let b = m(&[(0, 1), (1, 3)]);
        let l = a.lcm(&b);
        assert_eq!(l, m(&[(0, 2), (1, 3), (2, 1)]));
        assert_eq!(a.div(&l).unwrap(), m(&[(1, 3)]));
        assert!(a.div(&b).is_none());
    }

    #[test]
    fn from_pairs_merges() {
        assert_eq!(m(&[(3, 1), (1, 1), (3, 2), (2, 0)]), m(&[(1, 1), (3, 3)]));
    }
}
