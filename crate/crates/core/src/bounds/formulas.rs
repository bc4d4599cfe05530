use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::expr::{AckExpr, DEFAULT_BIT_CAP};
use crate::diff::OrderStats;
use crate::error::{usage, Result};

/// One named bound with the formula it instantiates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub formula: String,
    pub value: AckExpr,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn push(&mut self, name: &str, formula: &str, value: AckExpr) {
        self.entries.push(BoundEntry { name: name.into(), formula: formula.into(), value });
    }

    pub fn get(&self, name: &str) -> Option<&AckExpr> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.value)
    }

    pub fn extend(&mut self, other: BoundReport) {
        self.entries.extend(other.entries);
    }
}

fn c(v: impl Into<BigInt>) -> AckExpr {
    AckExpr::Const(v.into())
}

/// `Q(F) = max(9, n, 2^(9H), D)`.
pub fn q_of(h: u64, d: u64, n: u64) -> AckExpr {
    AckExpr::max(vec![c(9u32), c(n), AckExpr::pow(c(2u32), c(9 * h)), c(d)]).simplify(DEFAULT_BIT_CAP)
}

/// The length bound `⌈log2 A(m+7, Q−1)⌉` and the coordinate bound `A(m+7, Q−1)`.
pub fn structural_bounds(stats: &OrderStats, m: u32, n: u64) -> Result<BoundReport> {
    if m == 0 {
        return usage("structural bounds need at least one derivation");
    }
    let q = q_of(stats.max_order as u64, stats.max_degree as u64, n);
    let coord = AckExpr::ack(m + 7, AckExpr::sub(q.clone(), c(1u32))).simplify(DEFAULT_BIT_CAP);
    let mut r = BoundReport::default();
    r.push("Q", "max(9, n, 2^(9H), D)", q);
    r.push("L", "log2ceil(A(m+7, Q-1))", AckExpr::log2_ceil(coord.clone()));
    r.push("maxcor", "A(m+7, Q-1)", coord);
    Ok(r)
}

/// `(4D)^(C(2H+m, m) + 1)`, the degree growth of one complete iteration.
pub fn degree_growth_step(d: u64, h: u64, m: u64) -> AckExpr {
    let e = AckExpr::add(AckExpr::binom(c(2 * h + m), c(m)), c(1u32));
    AckExpr::pow(AckExpr::mul(c(4u32), c(d)), e).simplify(DEFAULT_BIT_CAP)
}

/// `max(0, ord f − min ord A)`: how far `f` must be prolonged against `A`.
pub fn lemma_q(ord_f: u64, orders: impl IntoIterator<Item = u64>) -> u64 {
    match orders.into_iter().min() {
        Some(lo) => ord_f.saturating_sub(lo),
        None => 0,
    }
}

/// `4^((k+1)H+1) · d`.
pub fn degree_exponent(k: AckExpr, h: u64, d: AckExpr) -> AckExpr {
    let e = AckExpr::add(AckExpr::mul(AckExpr::add(k, c(1u32)), c(h)), c(1u32));
    AckExpr::mul(AckExpr::pow(c(4u32), e), d).simplify(DEFAULT_BIT_CAP)
}

/// `n · 2^(H+m)`, the bound on the number of leaders.
pub fn p_bound(n: u64, h: u64, m: u64) -> AckExpr {
    AckExpr::mul(c(n), AckExpr::pow(c(2u32), c(h + m))).simplify(DEFAULT_BIT_CAP)
}

/// Inputs of the lifting bounds: `h`/`big_d` are `H(F)`/`D(F)`, `l_bound`
/// bounds the number of iterations and `t_bound` the order `t(G, f)`.
#[derive(Clone, Debug)]
pub struct LiftingInput {
    pub m: u64,
    pub n: u64,
    pub h: u64,
    pub big_d: u64,
    pub ord_f: u64,
    pub deg_f: u64,
    pub min_order: u64,
    pub l_bound: AckExpr,
    pub t_bound: AckExpr,
}

pub fn lifting_bounds(inp: &LiftingInput) -> BoundReport {
    let h = inp.h;
    let q = q_of(h, inp.big_d, inp.n);
    let a = AckExpr::ack(inp.m as u32 + 7, AckExpr::sub(q, c(1u32)));
    // H · 2^L
    let h_2l = AckExpr::mul(c(h), AckExpr::pow(c(2u32), inp.l_bound.clone()));
    let d_exp = AckExpr::mul(c(inp.n), AckExpr::pow(c(2u32), AckExpr::add(h_2l.clone(), c(inp.m + inp.ord_f))));
    let d = AckExpr::pow(AckExpr::max(vec![c(inp.deg_f), a]), d_exp).simplify(DEFAULT_BIT_CAP);
    // ord f + H·2^L + 4^((n·2^(H·2^L+1)+1)·t + 1) · d
    let inner = AckExpr::add(AckExpr::mul(c(inp.n), AckExpr::pow(c(2u32), AckExpr::add(h_2l.clone(), c(1u32)))), c(1u32));
    let four = AckExpr::pow(c(4u32), AckExpr::add(AckExpr::mul(inner, inp.t_bound.clone()), c(1u32)));
    let rhs = AckExpr::add(AckExpr::add(c(inp.ord_f), h_2l), AckExpr::mul(four, d.clone())).simplify(DEFAULT_BIT_CAP);

    let mut r = BoundReport::default();
    r.push("q", "max(0, ord f - min ord A)", c(lemma_q(inp.ord_f, [inp.min_order])));
    r.push("p", "n * 2^(H+m)", p_bound(inp.n, h, inp.m));
    r.push("d", "max(D(f), A(m+7, Q-1))^(n * 2^(H*2^L + m + ord f))", d.clone());
    r.push("degree-exponent", "4^((k+1)H+1) * d, k = L", degree_exponent(inp.l_bound.clone(), h, d));
    r.push("order-rhs", "ord f + H*2^L + 4^((n*2^(H*2^L+1)+1)*t + 1) * d", rhs);
    r
}

/// `A(m+8, max(n, H(F ∪ f), D(F ∪ f)))`, kept symbolic.
pub fn t_bound_closed(stats: &OrderStats, m: u32, n: u64) -> Result<AckExpr> {
    if m == 0 || n == 0 {
        return usage("closed-form bound needs m ≥ 1 and n ≥ 1");
    }
    let b = n.max(stats.max_order as u64).max(stats.max_degree as u64);
    Ok(AckExpr::ack(m + 8, c(b)))
}
