//! Buchberger's algorithm with the Gebauer–Möller pair criteria.
//!
//! Public functions accept sparse [`Poly`] values; internally every computation
//! runs on dense exponent vectors laid out from most to least significant
//! variable, which makes order comparisons and divisibility tests cheap.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::monomial::{Monomial, VarId};
use super::order::{cmp_dense, MonomialOrder, OrderKind};
use super::poly::Poly;
use super::{CapExceeded, CapKind, PolyError};

/// Resource limits for Gröbner computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of polynomials in the intermediate basis.
    pub max_basis: usize,
    /// Maximum number of terms of any intermediate polynomial.
    pub max_terms: usize,
    /// Wall-clock limit in milliseconds.
    pub max_time_ms: Option<u64>,
}

impl Default for Caps {
    fn default() -> Self {
        Self { max_basis: 20_000, max_terms: 500_000, max_time_ms: None }
    }
}

impl Caps {
    pub fn unlimited() -> Self {
        Self { max_basis: usize::MAX, max_terms: usize::MAX, max_time_ms: None }
    }

    pub fn with_time_ms(mut self, ms: u64) -> Self {
        self.max_time_ms = Some(ms);
        self
    }
}

/// A Gröbner basis together with the order it was computed for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<K> {
    /// Monic generators, sorted by decreasing leading monomial.
    pub generators: Vec<Poly<K>>,
    pub order: MonomialOrder,
    pub reduced: bool,
}

impl<K: Field> GroebnerBasis<K> {
    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    /// Normal form of `g`; zero exactly when `g` lies in the ideal.
    pub fn reduce(&self, g: &Poly<K>) -> Poly<K> {
        if self.generators.is_empty() {
            return g.clone();
        }
        normal_form(g, &self.generators, &self.order).expect("non-empty basis")
    }

    pub fn contains(&self, g: &Poly<K>) -> bool {
        self.reduce(g).is_zero()
    }

    /// Leading monomial of each generator under the basis order.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        let ctx = Ctx::new(&self.order, self.generators.iter());
        self.generators.iter().map(|g| ctx.to_sparse_mono(&ctx.to_dense(g).terms[0].0)).collect()
    }
}

// ---------------------------------------------------------------------------
// dense kernel

#[derive(Clone, Debug, PartialEq, Eq)]
struct DMono {
    e: Box<[u32]>,
    deg: u32,
    mask: u64,
}

impl DMono {
    fn new(e: Box<[u32]>) -> Self {
        let deg = e.iter().sum();
        let mask = mask_of(&e);
        Self { e, deg, mask }
    }

    #[inline]
    fn divides(&self, other: &Self) -> bool {
        self.mask & !other.mask == 0 && self.deg <= other.deg && self.e.iter().zip(other.e.iter()).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Self) -> Self {
        let e: Box<[u32]> = self.e.iter().zip(other.e.iter()).map(|(a, b)| a + b).collect();
        Self { deg: self.deg + other.deg, mask: self.mask | other.mask, e }
    }

    /// `other / self`, assuming divisibility.
    fn quo(&self, other: &Self) -> Self {
        Self::new(self.e.iter().zip(other.e.iter()).map(|(a, b)| b - a).collect())
    }

    fn lcm(&self, other: &Self) -> Self {
        Self::new(self.e.iter().zip(other.e.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    fn coprime(&self, other: &Self) -> bool {
        self.e.iter().zip(other.e.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    fn is_one(&self) -> bool {
        self.deg == 0
    }
}

fn mask_of(e: &[u32]) -> u64 {
    let mut m = 0u64;
    for (i, &x) in e.iter().enumerate() {
        if x > 0 {
            m |= 1 << (i % 64);
        }
    }
    m
}

#[derive(Clone, Debug)]
struct DPoly<K> {
    terms: Vec<(DMono, K)>,
}

impl<K: Field> DPoly<K> {
    fn lm(&self) -> &DMono {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self) {
        let inv = self.terms[0].1.inv().expect("nonzero leading coefficient");
        if !inv.is_one() {
            for t in &mut self.terms {
                t.1 = t.1.mul(&inv);
            }
        }
    }
}

struct Ctx {
    kind: OrderKind,
    vars: Vec<VarId>,
    pos: HashMap<VarId, usize>,
}

impl Ctx {
    fn new<'a, K: Field>(order: &MonomialOrder, polys: impl IntoIterator<Item = &'a Poly<K>>) -> Self {
        let mut all = Vec::new();
        for p in polys {
            all.extend(p.vars());
        }
        all.sort_unstable();
        all.dedup();
        let vars = order.arrange(all);
        let pos = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Self { kind: order.kind, vars, pos }
    }

    #[inline]
    fn cmp(&self, a: &DMono, b: &DMono) -> Ordering {
        cmp_dense(self.kind, &a.e, &b.e, a.deg, b.deg)
    }

    fn to_dense_mono(&self, m: &Monomial) -> DMono {
        let mut e = vec![0u32; self.vars.len()];
        for &(v, x) in m.pairs() {
            e[self.pos[&v]] = x;
        }
        DMono::new(e.into_boxed_slice())
    }

    fn to_sparse_mono(&self, m: &DMono) -> Monomial {
        Monomial::from_pairs(self.vars.iter().zip(m.e.iter()).map(|(&v, &x)| (v, x)))
    }

    fn to_dense<K: Field>(&self, p: &Poly<K>) -> DPoly<K> {
        let mut terms: Vec<(DMono, K)> = p.terms().iter().map(|(m, c)| (self.to_dense_mono(m), c.clone())).collect();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        DPoly { terms }
    }

    fn to_sparse<K: Field>(&self, p: &DPoly<K>) -> Poly<K> {
        Poly::from_terms(p.terms.iter().map(|(m, c)| (self.to_sparse_mono(m), c.clone())))
    }

    /// `p[from..] - c * m * g[1..]`, the leading terms having cancelled.
    fn sub_mul_tail<K: Field>(&self, p: &[(DMono, K)], c: &K, m: &DMono, g: &[(DMono, K)]) -> Vec<(DMono, K)> {
        let mut out = Vec::with_capacity(p.len() + g.len());
        let (mut i, mut j) = (0, 0);
        let mut gj: Option<(DMono, K)> = g.first().map(|(gm, gc)| (m.mul(gm), gc.mul(c)));
        while i < p.len() {
            let Some((gm, gc)) = gj.as_ref() else { break };
            match self.cmp(&p[i].0, gm) {
                Ordering::Greater => {
                    out.push(p[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm.clone(), gc.neg()));
                    j += 1;
                    gj = g.get(j).map(|(gm, gc)| (m.mul(gm), gc.mul(c)));
                }
                Ordering::Equal => {
                    let s = p[i].1.sub(gc);
                    if !s.is_zero() {
                        out.push((p[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                    gj = g.get(j).map(|(gm, gc)| (m.mul(gm), gc.mul(c)));
                }
            }
        }
        out.extend_from_slice(&p[i..]);
        if let Some((gm, gc)) = gj {
            out.push((gm, gc.neg()));
            for (gm, gc) in &g[j + 1..] {
                out.push((m.mul(gm), gc.mul(c).neg()));
            }
        }
        out
    }

    /// Full reduction of `p` modulo the leading terms of `basis` (indices in `active`).
    fn reduce<K: Field>(&self, p: DPoly<K>, basis: &[DPoly<K>], active: &[usize], guard: &mut Guard) -> Result<DPoly<K>, PolyError> {
        let mut rest = p.terms;
        let mut start = 0;
        let mut out: Vec<(DMono, K)> = Vec::new();
        let mut steps = 0u32;
        while start < rest.len() {
            let (hm, hc) = &rest[start];
            let div = active.iter().map(|&i| &basis[i]).find(|g| g.lm().divides(hm));
            match div {
                Some(g) => {
                    let q = g.lm().quo(hm);
                    let c = hc.div(&g.terms[0].1).expect("nonzero leading coefficient");
                    rest = self.sub_mul_tail(&rest[start + 1..], &c, &q, &g.terms[1..]);
                    start = 0;
                    guard.check_terms(rest.len() + out.len())?;
                    steps += 1;
                    if steps.is_multiple_of(64) {
                        guard.check_time()?;
                    }
                }
                None => {
                    out.push(rest[start].clone());
                    start += 1;
                }
            }
        }
        Ok(DPoly { terms: out })
    }
}

struct Guard<'a> {
    caps: &'a Caps,
    started: Instant,
    basis_len: usize,
    pending_pairs: usize,
}

impl<'a> Guard<'a> {
    fn new(caps: &'a Caps) -> Self {
        Self { caps, started: Instant::now(), basis_len: 0, pending_pairs: 0 }
    }

    fn fail(&self, kind: CapKind) -> PolyError {
        PolyError::Capped(CapExceeded {
            kind,
            basis_len: self.basis_len,
            pending_pairs: self.pending_pairs,
            elapsed: self.started.elapsed(),
        })
    }

    fn check_terms(&self, n: usize) -> Result<(), PolyError> {
        if n > self.caps.max_terms {
            return Err(self.fail(CapKind::Terms));
        }
        Ok(())
    }

    fn check_basis(&self) -> Result<(), PolyError> {
        if self.basis_len > self.caps.max_basis {
            return Err(self.fail(CapKind::BasisSize));
        }
        Ok(())
    }

    fn check_time(&self) -> Result<(), PolyError> {
        if let Some(ms) = self.caps.max_time_ms {
            if self.started.elapsed() > Duration::from_millis(ms) {
                return Err(self.fail(CapKind::Time));
            }
        }
        Ok(())
    }
}

/// Multivariate division remainder of `g` by `basis`.
///
/// No monomial of the result is divisible by a leading monomial of `basis`,
/// and `g - r` lies in the ideal generated by `basis`.
pub fn normal_form<K: Field>(g: &Poly<K>, basis: &[Poly<K>], order: &MonomialOrder) -> Result<Poly<K>, PolyError> {
    if basis.is_empty() {
        return Err(PolyError::Usage("normal form against an empty list".into()));
    }
    let ctx = Ctx::new(order, basis.iter().chain(std::iter::once(g)));
    let dense: Vec<DPoly<K>> = basis.iter().filter(|b| !b.is_zero()).map(|b| ctx.to_dense(b)).collect();
    let active: Vec<usize> = (0..dense.len()).collect();
    let caps = Caps::unlimited();
    let mut guard = Guard::new(&caps);
    let r = ctx.reduce(ctx.to_dense(g), &dense, &active, &mut guard)?;
    Ok(ctx.to_sparse(&r))
}

struct Pair {
    i: usize,
    j: usize,
    lcm: DMono,
}

/// Reduced Gröbner basis of the ideal generated by `input`.
pub fn buchberger<K: Field>(input: &[Poly<K>], order: &MonomialOrder, caps: &Caps) -> Result<GroebnerBasis<K>, PolyError> {
    let ctx = Ctx::new(order, input.iter());
    let mut guard = Guard::new(caps);
    let unit = || GroebnerBasis { generators: vec![Poly::one()], order: order.clone(), reduced: true };

    let mut seeds: Vec<DPoly<K>> = input.iter().filter(|p| !p.is_zero()).map(|p| ctx.to_dense(p)).collect();
    if seeds.is_empty() {
        return Ok(GroebnerBasis { generators: Vec::new(), order: order.clone(), reduced: true });
    }
    // small leading monomials first keeps the early basis compact
    seeds.sort_by(|a, b| ctx.cmp(a.lm(), b.lm()).then(a.terms.len().cmp(&b.terms.len())));

    let mut basis: Vec<DPoly<K>> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for s in seeds {
        let mut h = ctx.reduce(s, &basis, &active, &mut guard)?;
        if h.is_zero() {
            continue;
        }
        if h.lm().is_one() {
            return Ok(unit());
        }
        h.make_monic();
        basis.push(h);
        update(&ctx, &basis, &mut active, &mut pairs, basis.len() - 1);
        guard.basis_len = active.len();
        guard.check_basis()?;
    }

    while !pairs.is_empty() {
        guard.basis_len = active.len();
        guard.pending_pairs = pairs.len();
        guard.check_basis()?;
        guard.check_time()?;
        // normal selection: least lcm, ties broken by pair indices
        let mut best = 0;
        for k in 1..pairs.len() {
            let o = ctx.cmp(&pairs[k].lcm, &pairs[best].lcm).then((pairs[k].i, pairs[k].j).cmp(&(pairs[best].i, pairs[best].j)));
            if o == Ordering::Less {
                best = k;
            }
        }
        let p = pairs.swap_remove(best);
        let s = spoly(&ctx, &basis[p.i], &basis[p.j], &p.lcm);
        let mut h = ctx.reduce(s, &basis, &active, &mut guard)?;
        if h.is_zero() {
            continue;
        }
        if h.lm().is_one() {
            return Ok(unit());
        }
        h.make_monic();
        basis.push(h);
        update(&ctx, &basis, &mut active, &mut pairs, basis.len() - 1);
        guard.basis_len = active.len();
        guard.check_basis()?;
    }

    // interreduce: leading monomials are already pairwise non-divisible
    let mut out: Vec<DPoly<K>> = Vec::with_capacity(active.len());
    for (k, &i) in active.iter().enumerate() {
        let others: Vec<usize> = active.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, &x)| x).collect();
        let g = &basis[i];
        let tail = DPoly { terms: g.terms[1..].to_vec() };
        let mut r = ctx.reduce(tail, &basis, &others, &mut guard)?;
        r.terms.insert(0, g.terms[0].clone());
        r.make_monic();
        out.push(r);
    }
    out.sort_by(|a, b| ctx.cmp(b.lm(), a.lm()));
    Ok(GroebnerBasis { generators: out.iter().map(|p| ctx.to_sparse(p)).collect(), order: order.clone(), reduced: true })
}

fn spoly<K: Field>(ctx: &Ctx, f: &DPoly<K>, g: &DPoly<K>, lcm: &DMono) -> DPoly<K> {
    // both are monic
    let mf = f.lm().quo(lcm);
    let mg = g.lm().quo(lcm);
    let fa: Vec<(DMono, K)> = f.terms[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    DPoly { terms: merge_sub(ctx, &fa, &mg, &g.terms[1..]) }
}

fn merge_sub<K: Field>(ctx: &Ctx, p: &[(DMono, K)], m: &DMono, g: &[(DMono, K)]) -> Vec<(DMono, K)> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < p.len() && j < g.len() {
        let gm = m.mul(&g[j].0);
        match ctx.cmp(&p[i].0, &gm) {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((gm, g[j].1.neg()));
                j += 1;
            }
            Ordering::Equal => {
                let s = p[i].1.sub(&g[j].1);
                if !s.is_zero() {
                    out.push((gm, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&p[i..]);
    for (gm, gc) in &g[j..] {
        out.push((m.mul(gm), gc.neg()));
    }
    out
}

/// Gebauer–Möller update after adding `basis[h]`.
fn update<K: Field>(ctx: &Ctx, basis: &[DPoly<K>], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lh = basis[h].lm().clone();
    let mut cand: Vec<(usize, DMono, bool)> = active
        .iter()
        .map(|&g| {
            let lg = basis[g].lm();
            (g, lg.lcm(&lh), lg.coprime(&lh))
        })
        .collect();
    // sort for determinism and so that divisibility chains are met in order
    cand.sort_by(|a, b| ctx.cmp(&a.1, &b.1).then(a.0.cmp(&b.0)));

    // chain criterion among the new pairs (coprime pairs still act as witnesses)
    let mut kept: Vec<(usize, DMono, bool)> = Vec::new();
    for k in 0..cand.len() {
        let c = &cand[k];
        let dominated = !c.2 && cand[k + 1..].iter().chain(kept.iter()).any(|d| d.1.divides(&c.1));
        if !dominated {
            kept.push(c.clone());
        }
    }
    let fresh: Vec<Pair> = kept.into_iter().filter(|c| !c.2).map(|(g, lcm, _)| Pair { i: g, j: h, lcm }).collect();

    // old pairs made redundant by the new leading monomial
    pairs.retain(|p| {
        !(lh.divides(&p.lcm) && basis[p.i].lm().lcm(&lh) != p.lcm && basis[p.j].lm().lcm(&lh) != p.lcm)
    });
    pairs.extend(fresh);

    active.retain(|&g| !lh.divides(basis[g].lm()));
    active.push(h);
}

/// Decides `f ∈ (F)`.
pub fn ideal_membership<K: Field>(f: &Poly<K>, generators: &[Poly<K>], caps: &Caps) -> Result<bool, PolyError> {
    if f.is_zero() {
        return Ok(true);
    }
    let gb = buchberger(generators, &MonomialOrder::grevlex(), caps)?;
    Ok(gb.contains(f))
}

/// Decides `f ∈ √(F)` via `1 ∈ (F, 1 - z f)` with a fresh variable `z` ranked last.
pub fn radical_membership<K: Field>(f: &Poly<K>, generators: &[Poly<K>], caps: &Caps) -> Result<bool, PolyError> {
    if f.is_zero() {
        return Ok(true);
    }
    if f.is_constant() {
        return ideal_membership(&Poly::one(), generators, caps);
    }
    let mut vars: Vec<VarId> = generators.iter().flat_map(|g| g.vars()).chain(f.vars()).collect();
    vars.sort_unstable();
    vars.dedup();
    let z = fresh_slack(&vars);
    let mut priority = MonomialOrder::grevlex().arrange(vars);
    priority.push(z);
    let order = MonomialOrder::with_priority(OrderKind::Grevlex, priority);
    let mut system = generators.to_vec();
    system.push(&Poly::one() - &(&Poly::var(z) * f));
    Ok(buchberger(&system, &order, caps)?.is_unit())
}

/// The first slack variable not among `used`.
pub fn fresh_slack(used: &[VarId]) -> VarId {
    used.iter().filter(|v| v.is_slack()).map(|v| VarId(v.0 + 1)).max().unwrap_or(VarId::slack(0))
}
