use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poly::VarId;

/// A derivative operator `∂_1^{k_1} ⋯ ∂_m^{k_m}`, stored as its multi-index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DerOp(pub Vec<u32>);

impl DerOp {
    pub fn identity(m: usize) -> Self {
        DerOp(vec![0; m])
    }

    /// The single derivation `∂_i` (0-based).
    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = vec![0; m];
        v[i] = 1;
        DerOp(v)
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn compose(&self, other: &Self) -> Self {
        DerOp(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self ≤ other`: `other` is a derivative of `self`.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other - self` when `self` divides `other`.
    pub fn quotient(&self, other: &Self) -> Option<Self> {
        self.divides(other).then(|| DerOp(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect()))
    }

    /// Least common derivative operator (componentwise max).
    pub fn lcm(&self, other: &Self) -> Self {
        DerOp(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// All operators of order at most `h` in `m` derivations, by order then lex.
    pub fn all_up_to(m: usize, h: u32) -> Vec<DerOp> {
        (0..=h).flat_map(|k| compositions(m, k)).map(DerOp).collect()
    }
}

/// `θ y_j` with `j` 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Derivative {
    pub indet: usize,
    pub op: DerOp,
}

impl Derivative {
    pub fn order(&self) -> u32 {
        self.op.order()
    }

    pub fn apply(&self, theta: &DerOp) -> Self {
        Derivative { indet: self.indet, op: self.op.compose(theta) }
    }

    /// True when `other` is a derivative (possibly improper) of `self`.
    pub fn is_derived_by(&self, other: &Derivative) -> bool {
        self.indet == other.indet && self.op.divides(&other.op)
    }
}

impl fmt::Display for Derivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y{}{:?}", self.indet + 1, self.op.0)
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Number of multi-indices with `m` entries summing to exactly `k`.
fn count_exact(m: usize, k: u32) -> u64 {
    if m == 0 {
        return u64::from(k == 0);
    }
    binom(k as u64 + m as u64 - 1, m as u64 - 1)
}

/// Number of multi-indices with `m` entries summing to less than `k`.
fn count_below(m: usize, k: u32) -> u64 {
    if k == 0 {
        return 0;
    }
    binom(k as u64 - 1 + m as u64, m as u64)
}

/// Compositions of `k` into `m` parts in ascending lex order.
pub(crate) fn compositions(m: usize, k: u32) -> Vec<Vec<u32>> {
    fn go(m: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m == 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 0..=k {
            prefix.push(a);
            go(m - 1, k - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(m, k, &mut Vec::new(), &mut out);
    out
}

/// Rank of `alpha` among compositions of its order, ascending lex.
fn lex_rank(alpha: &[u32]) -> u64 {
    let m = alpha.len();
    let mut rem: u32 = alpha.iter().sum();
    let mut r = 0;
    for (i, &a) in alpha.iter().enumerate().take(m.saturating_sub(1)) {
        for v in 0..a {
            r += count_exact(m - i - 1, rem - v);
        }
        rem -= a;
    }
    r
}

fn lex_unrank(m: usize, k: u32, mut r: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(m);
    let mut rem = k;
    for i in 0..m.saturating_sub(1) {
        let mut v = 0;
        loop {
            let c = count_exact(m - i - 1, rem - v);
            if r < c {
                break;
            }
            r -= c;
            v += 1;
        }
        out.push(v);
        rem -= v;
    }
    if m > 0 {
        out.push(rem);
    }
    out
}

/// Position of a derivative in the orderly ranking (order, then indeterminate,
/// then lex on the multi-index, all ascending). Used directly as its [`VarId`],
/// so comparing ids compares derivatives.
pub(crate) fn encode(m: usize, n: usize, d: &Derivative) -> VarId {
    let k = d.order();
    let pos = n as u64 * count_below(m, k) + d.indet as u64 * count_exact(m, k) + lex_rank(&d.op.0);
    VarId(u32::try_from(pos).expect("derivative index overflows the variable space"))
}

pub(crate) fn decode(m: usize, n: usize, v: VarId) -> Derivative {
    let pos = v.0 as u64;
    let mut k = 0;
    while n as u64 * count_below(m, k + 1) <= pos {
        k += 1;
    }
    let within = pos - n as u64 * count_below(m, k);
    let per = count_exact(m, k);
    Derivative { indet: (within / per) as usize, op: DerOp(lex_unrank(m, k, within % per)) }
}
