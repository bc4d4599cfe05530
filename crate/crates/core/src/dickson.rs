//! Dicksonian sequences: no tuple is componentwise ≥ an earlier one.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bounds::ack_exact;
use crate::error::{usage, Error, Result};

pub type Tuple = Vec<u64>;

fn le(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn max_coord(t: &[u64]) -> u64 {
    t.iter().copied().max().unwrap_or(0)
}

fn check_uniform(seq: &[Tuple]) -> Result<usize> {
    let n = seq.first().map_or(0, Vec::len);
    if seq.iter().any(|t| t.len() != n) {
        return usage("tuples of different lengths");
    }
    Ok(n)
}

pub fn is_dicksonian(seq: &[Tuple]) -> Result<bool> {
    check_uniform(seq)?;
    Ok(seq.iter().enumerate().all(|(j, tj)| seq[..j].iter().all(|ti| !le(ti, tj))))
}

/// An increasing growth function on `1, 2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthFn {
    /// `f(i) = a·i + b`.
    Affine { a: u64, b: u64 },
    /// `f(1), f(2), …` listed; undefined past the table.
    Table(Vec<u64>),
    /// A table continued by adding `step` at each further index.
    Extended { table: Vec<u64>, step: u64 },
}

impl GrowthFn {
    /// `f(i)` for `i ≥ 1`; `None` outside the domain.
    pub fn eval(&self, i: u64) -> Option<u64> {
        if i == 0 {
            return None;
        }
        match self {
            GrowthFn::Affine { a, b } => a.checked_mul(i)?.checked_add(*b),
            GrowthFn::Table(t) => t.get(usize::try_from(i - 1).ok()?).copied(),
            GrowthFn::Extended { table, step } => {
                let k = table.len() as u64;
                if i <= k {
                    return Some(table[(i - 1) as usize]);
                }
                table.last()?.checked_add(step.checked_mul(i - k)?)
            }
        }
    }

    /// Strictly increasing over `1..=k`.
    pub fn increasing_up_to(&self, k: u64) -> bool {
        (1..k).all(|i| matches!((self.eval(i), self.eval(i + 1)), (Some(a), Some(b)) if b > a))
    }
}

pub fn growth_bounded(seq: &[Tuple], f: &GrowthFn) -> Result<bool> {
    check_uniform(seq)?;
    for (j, t) in seq.iter().enumerate() {
        match f.eval(j as u64 + 1) {
            Some(bound) if max_coord(t) > bound => return Ok(false),
            Some(_) => {}
            None => return usage(format!("growth function undefined at {}", j + 1)),
        }
    }
    Ok(true)
}

/// Least `k ≥ 1` with `f(k) ≥ x`.
pub fn inverse_ceil(f: &GrowthFn, x: &BigInt) -> Result<u64> {
    let Some(x) = x.to_u64() else { return usage("argument too large for a growth function") };
    match f {
        GrowthFn::Affine { a, b } => {
            if b + a >= x {
                return Ok(1);
            }
            if *a == 0 {
                return usage("constant growth function never reaches the argument");
            }
            Ok((x - b).div_ceil(*a))
        }
        GrowthFn::Table(t) => match t.iter().position(|&v| v >= x) {
            Some(p) => Ok(p as u64 + 1),
            None => usage("growth table exhausted"),
        },
        GrowthFn::Extended { table, step } => {
            if let Some(p) = table.iter().position(|&v| v >= x) {
                return Ok(p as u64 + 1);
            }
            let last = *table.last().ok_or_else(|| Error::Usage("empty growth table".into()))?;
            if *step == 0 {
                return usage("growth table exhausted");
            }
            Ok(table.len() as u64 + (x - last).div_ceil(*step))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub length: u64,
    pub witness: Vec<Tuple>,
    /// False when a cap cut the search short; `length` is then only a lower bound.
    pub conclusive: bool,
}

/// Default number of search nodes before a search gives up as inconclusive.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

enum Steps<'a> {
    /// Tuples with max coordinate ≤ `f(i)`, truncated at `cap`.
    Bounded { f: &'a GrowthFn, cap: u64 },
    /// Tuples with max coordinate exactly `m + i − 1`.
    Exact { m: u64 },
}

struct Engine<'a> {
    n: usize,
    steps: Steps<'a>,
    first: Option<Tuple>,
    cands: HashMap<u64, Option<Vec<Tuple>>>,
    memo: HashMap<(u64, Vec<Tuple>), u64>,
    nodes: u64,
    budget: u64,
    conclusive: bool,
}

fn tuples_with_max(n: usize, lo: u64, hi: u64) -> Vec<Tuple> {
    // all n-tuples with entries ≤ hi and max ≥ lo, lexicographically descending
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, cur: &mut Tuple, lo: u64, hi: u64, out: &mut Vec<Tuple>) {
        if i == cur.len() {
            if max_coord(cur) >= lo {
                out.push(cur.clone());
            }
            return;
        }
        for v in (0..=hi).rev() {
            cur[i] = v;
            rec(i + 1, cur, lo, hi, out);
        }
    }
    rec(0, &mut cur, lo, hi, &mut out);
    out
}

impl Engine<'_> {
    fn candidates(&mut self, i: u64) -> Option<Vec<Tuple>> {
        if i == 1 {
            if let Some(t) = &self.first {
                return Some(vec![t.clone()]);
            }
        }
        if let Some(c) = self.cands.get(&i) {
            return c.clone();
        }
        let c = match self.steps {
            Steps::Bounded { f, cap } => f.eval(i).map(|v| {
                if v > cap {
                    self.conclusive = false;
                }
                tuples_with_max(self.n, 0, v.min(cap))
            }),
            Steps::Exact { m } => {
                let v = m + i - 1;
                Some(tuples_with_max(self.n, v, v))
            }
        };
        self.cands.insert(i, c.clone());
        c
    }

    fn child(anti: &[Tuple], t: &Tuple) -> Vec<Tuple> {
        let mut next: Vec<Tuple> = anti.iter().filter(|e| !le(t, e)).cloned().collect();
        next.push(t.clone());
        next.sort();
        next
    }

    /// Longest continuation from step `i` given the minimal elements `anti`
    /// of everything placed so far.
    fn best(&mut self, i: u64, anti: &[Tuple]) -> u64 {
        if let Some(&v) = self.memo.get(&(i, anti.to_vec())) {
            return v;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.conclusive = false;
            return 0;
        }
        let Some(cands) = self.candidates(i) else {
            // domain ends; only conclusive if nothing at all could follow
            if !anti.iter().any(|a| a.iter().all(|&x| x == 0)) {
                self.conclusive = false;
            }
            return 0;
        };
        let mut best = 0;
        for t in &cands {
            if anti.iter().any(|a| le(a, t)) {
                continue;
            }
            let v = 1 + self.best(i + 1, &Self::child(anti, t));
            best = best.max(v);
        }
        self.memo.insert((i, anti.to_vec()), best);
        best
    }

    fn run(mut self) -> SearchResult {
        let length = self.best(1, &[]);
        let mut witness = Vec::new();
        let mut anti: Vec<Tuple> = Vec::new();
        let mut remaining = length;
        let mut i = 1;
        while remaining > 0 {
            let cands = self.candidates(i).unwrap_or_default();
            let pick = cands.into_iter().find(|t| {
                if anti.iter().any(|a| le(a, t)) {
                    return false;
                }
                let next = Self::child(&anti, t);
                let rest = if remaining == 1 { 0 } else { self.memo.get(&(i + 1, next)).copied().unwrap_or(0) };
                1 + rest == remaining
            });
            let Some(t) = pick else { break };
            anti = Self::child(&anti, &t);
            witness.push(t);
            remaining -= 1;
            i += 1;
        }
        SearchResult { length: witness.len() as u64, witness, conclusive: self.conclusive }
    }
}

/// `L_{f,n}`: the longest dicksonian sequence of `n`-tuples whose `i`-th
/// tuple has max coordinate ≤ `f(i)`, exhaustively, with coordinates ≤ `coord_cap`.
pub fn search_max_length(n: usize, f: &GrowthFn, coord_cap: u64) -> SearchResult {
    search_max_length_with_budget(n, f, coord_cap, DEFAULT_NODE_BUDGET)
}

pub fn search_max_length_with_budget(n: usize, f: &GrowthFn, coord_cap: u64, budget: u64) -> SearchResult {
    Engine {
        n,
        steps: Steps::Bounded { f, cap: coord_cap },
        first: None,
        cands: HashMap::new(),
        memo: HashMap::new(),
        nodes: 0,
        budget,
        conclusive: true,
    }
    .run()
}

/// Longest dicksonian sequence of `n`-tuples whose `i`-th tuple has max
/// coordinate exactly `m + i − 1`; optionally with a fixed first tuple.
pub fn search_unit_growth(n: usize, m: u64, first: Option<Tuple>, budget: u64) -> SearchResult {
    Engine {
        n,
        steps: Steps::Exact { m },
        first,
        cands: HashMap::new(),
        memo: HashMap::new(),
        nodes: 0,
        budget,
        conclusive: true,
    }
    .run()
}

/// A dicksonian sequence of `d`-tuples of the given length, starting at
/// `(m, …, m)` with max coordinate growing by exactly one; `None` if none exists.
pub fn gen_unit_growth(d: usize, m: u64, length: u64) -> Result<Option<Vec<Tuple>>> {
    if d == 0 {
        return usage("tuples must have at least one coordinate");
    }
    if length == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut seq = vec![vec![m; d]];
    let mut nodes = 0;
    match extend_unit_growth(&mut seq, m, length, &mut nodes) {
        Some(true) => Ok(Some(seq)),
        Some(false) => Ok(None),
        None => Err(Error::Infeasible(format!("search budget exhausted looking for length {length}"))),
    }
}

/// Depth-first extension to `length` tuples; `None` once the node budget runs out.
fn extend_unit_growth(seq: &mut Vec<Tuple>, m: u64, length: u64, nodes: &mut u64) -> Option<bool> {
    if seq.len() as u64 == length {
        return Some(true);
    }
    *nodes += 1;
    if *nodes > DEFAULT_NODE_BUDGET {
        return None;
    }
    let v = m + seq.len() as u64;
    for t in tuples_with_max(seq[0].len(), v, v) {
        if seq.iter().any(|s| le(s, &t)) {
            continue;
        }
        seq.push(t);
        if extend_unit_growth(seq, m, length, nodes)? {
            return Some(true);
        }
        seq.pop();
    }
    Some(false)
}

/// Pads a dicksonian sequence bounded by `f` with `d` extra coordinates
/// and inserts filler tuples so the max coordinate grows by exactly one.
pub fn pad_construction(seq: &[Tuple], f: &GrowthFn, d: usize) -> Result<Vec<Tuple>> {
    let k = seq.len() as u64;
    if !is_dicksonian(seq)? {
        return usage("input sequence is not dicksonian");
    }
    if !growth_bounded(seq, f)? {
        return usage("input sequence outgrows the growth function");
    }
    if !f.increasing_up_to(k) {
        return usage("growth function is not increasing");
    }
    let fv = |i: u64| f.eval(i).expect("checked by growth_bounded");
    for i in 1..k {
        let (a, b) = (fv(i), fv(i + 1));
        if a >= 1 {
            if let Some(bound) = ack_exact(d as u32, &BigInt::from(a - 1), 64) {
                if BigInt::from(b - a) > bound {
                    return usage(format!("f({}) − f({i}) exceeds A(d, f({i}) − 1)", i + 1));
                }
            }
        }
    }
    let mut out = Vec::new();
    for (idx, a) in seq.iter().enumerate() {
        let i = idx as u64 + 1;
        let mut p = a.clone();
        p.extend(std::iter::repeat_n(fv(i), d));
        out.push(p);
        if i < k {
            let gap = fv(i + 1) - fv(i);
            let inner = gen_unit_growth(d, fv(i), gap)?.ok_or_else(|| {
                Error::Infeasible(format!("no unit-growth sequence of {d}-tuples from {} of length {gap}", fv(i)))
            })?;
            for tail in &inner[1..] {
                let mut t = a.clone();
                t.extend_from_slice(tail);
                out.push(t);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dicksonian_examples() {
        assert!(is_dicksonian(&[vec![2, 0], vec![1, 1], vec![0, 5]]).unwrap());
        assert!(!is_dicksonian(&[vec![1, 1], vec![2, 2]]).unwrap());
        assert!(is_dicksonian(&[vec![7]]).unwrap());
        assert!(is_dicksonian(&[vec![1], vec![1, 2]]).is_err());
    }

    #[test]
    fn growth_examples() {
        let f = GrowthFn::Affine { a: 2, b: 0 };
        assert!(growth_bounded(&[vec![2], vec![1]], &f).unwrap());
        assert!(!growth_bounded(&[vec![3]], &GrowthFn::Table(vec![2])).unwrap());
        assert!(growth_bounded(&[vec![5], vec![4]], &GrowthFn::Table(vec![1000, 2000])).unwrap());
    }

    #[test]
    fn inverse_examples() {
        let b = BigInt::from;
        assert_eq!(inverse_ceil(&GrowthFn::Affine { a: 2, b: 0 }, &b(5)).unwrap(), 3);
        assert_eq!(inverse_ceil(&GrowthFn::Affine { a: 1, b: 0 }, &b(1)).unwrap(), 1);
        assert_eq!(inverse_ceil(&GrowthFn::Table(vec![2, 4, 9]), &b(9)).unwrap(), 3);
        assert!(inverse_ceil(&GrowthFn::Table(vec![2, 4, 9]), &b(10)).is_err());
        assert_eq!(inverse_ceil(&GrowthFn::Extended { table: vec![2, 4], step: 3 }, &b(9)).unwrap(), 4);
    }

    #[test]
    fn unit_growth_examples() {
        let s = gen_unit_growth(2, 2, 3).unwrap().unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0], vec![2, 2]);
        assert!(is_dicksonian(&s).unwrap());
        for (i, t) in s.iter().enumerate() {
            assert_eq!(max_coord(t), 2 + i as u64);
        }
        assert_eq!(gen_unit_growth(1, 3, 1).unwrap(), Some(vec![vec![3]]));
        assert_eq!(gen_unit_growth(1, 3, 2).unwrap(), None);
    }

    #[test]
    fn pad_examples() {
        let out = pad_construction(&[vec![2], vec![1]], &GrowthFn::Table(vec![2, 3]), 2).unwrap();
        assert_eq!(out, vec![vec![2, 2, 2], vec![1, 3, 3]]);

        let out = pad_construction(&[vec![3], vec![1]], &GrowthFn::Table(vec![3, 6]), 2).unwrap();
        assert_eq!(out.len(), 4);
        assert_eq!(out[0], vec![3, 3, 3]);
        assert_eq!(out[3], vec![1, 6, 6]);
        assert!(is_dicksonian(&out).unwrap());
        for (i, t) in out.iter().enumerate() {
            assert_eq!(max_coord(t), 3 + i as u64);
        }

        let single = pad_construction(&[vec![1, 1]], &GrowthFn::Table(vec![1]), 3).unwrap();
        assert_eq!(single, vec![vec![1, 1, 1, 1, 1]]);
    }

    #[test]
    fn max_length_small() {
        let r = search_max_length(1, &GrowthFn::Affine { a: 1, b: 5 }, 100);
        assert!(r.conclusive);
        assert_eq!(r.length, 7);
        let r = search_max_length(1, &GrowthFn::Table(vec![0]), 10);
        assert_eq!((r.length, r.witness.clone(), r.conclusive), (1, vec![vec![0]], true));
    }
}
