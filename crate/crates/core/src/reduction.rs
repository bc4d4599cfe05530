//! Reducedness, pseudo-reduction against triangular sets, Ritt reduction,
//! characteristic sets, Δ-polynomials and coherence.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::diff::{DerOp, DiffPoly, DiffRing, Rank};
use crate::error::{usage, Result};
use crate::poly::{buchberger, fresh_slack, pseudo_divide, Caps, Field, MonomialOrder, OrderKind, Poly, VarId};

/// Polynomials with pairwise distinct leaders, sorted by increasing rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularSet<K> {
    elements: Vec<DiffPoly<K>>,
    ranks: Vec<Rank>,
}

impl<K: Field> TriangularSet<K> {
    pub fn new(ring: &DiffRing<K>, elements: Vec<DiffPoly<K>>) -> Result<Self> {
        let mut tagged = Vec::with_capacity(elements.len());
        for e in elements {
            let Some(r) = ring.rank(&e) else {
                return usage("a triangular set cannot contain field elements");
            };
            tagged.push((r, e));
        }
        tagged.sort_by(|a, b| ring.compare_rank(a.0, b.0));
        if tagged.windows(2).any(|w| w[0].0.leader == w[1].0.leader) {
            return usage("leaders of a triangular set must be distinct");
        }
        let (ranks, elements) = tagged.into_iter().unzip();
        Ok(Self { elements, ranks })
    }

    pub fn empty() -> Self {
        Self { elements: Vec::new(), ranks: Vec::new() }
    }

    pub fn elements(&self) -> &[DiffPoly<K>] {
        &self.elements
    }

    pub fn ranks(&self) -> &[Rank] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn into_elements(self) -> Vec<DiffPoly<K>> {
        self.elements
    }
}

/// A triangular set together with its autoreducedness flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutoreducedSet<K> {
    pub set: TriangularSet<K>,
    pub algebraically: bool,
    pub fully: bool,
}

impl<K: Field> AutoreducedSet<K> {
    /// Wraps a triangular set, computing both flags.
    pub fn new(ring: &DiffRing<K>, set: TriangularSet<K>) -> Self {
        let mut algebraically = true;
        let mut fully = true;
        for (i, a) in set.elements.iter().enumerate() {
            for (j, b) in set.elements.iter().enumerate() {
                if i == j {
                    continue;
                }
                let r = reducedness(ring, a, b).expect("triangular sets hold no constants");
                algebraically &= r.algebraically;
                fully &= r.fully;
            }
        }
        Self { set, algebraically, fully }
    }

    pub fn from_elements(ring: &DiffRing<K>, elements: Vec<DiffPoly<K>>) -> Result<Self> {
        Ok(Self::new(ring, TriangularSet::new(ring, elements)?))
    }

    pub fn elements(&self) -> &[DiffPoly<K>] {
        self.set.elements()
    }

    pub fn ranks(&self) -> &[Rank] {
        self.set.ranks()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reducedness {
    pub partially: bool,
    pub algebraically: bool,
    pub fully: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RankOrder {
    Lower,
    Equal,
    Higher,
}

/// Reducedness of `f` with respect to `g`.
pub fn reducedness<K: Field>(ring: &DiffRing<K>, f: &DiffPoly<K>, g: &DiffPoly<K>) -> Result<Reducedness> {
    let Some(ug) = ring.leader(g) else {
        return usage("reducedness with respect to a field element");
    };
    let dg = g.degree_in(ug);
    let lead = ring.derivative_of(ug);
    let partially = f.vars().into_iter().all(|v| {
        let d = ring.derivative_of(v);
        v == ug || !lead.is_derived_by(&d)
    });
    let algebraically = f.degree_in(ug) < dg;
    Ok(Reducedness { partially, algebraically, fully: partially && algebraically })
}

/// One pseudo-division in an [`algrem`] chain:
/// `next = init^exponent · previous − quotient · divisor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep<K> {
    pub divisor: DiffPoly<K>,
    pub variable: VarId,
    pub multiplier: DiffPoly<K>,
    pub exponent: u32,
    pub quotient: DiffPoly<K>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Remainder<K> {
    pub remainder: DiffPoly<K>,
    pub steps: Vec<ReductionStep<K>>,
}

impl<K: Field> Remainder<K> {
    /// The product `P` of multipliers with `P·g − r` in the ideal of the divisors.
    pub fn multiplier(&self) -> DiffPoly<K> {
        self.steps.iter().fold(Poly::one(), |acc, s| &acc * &s.multiplier.pow(s.exponent))
    }

    /// Replays the chain: returns `P·g − r` written as `Σ c_i · divisor_i`.
    pub fn combination(&self) -> Vec<(DiffPoly<K>, DiffPoly<K>)> {
        // r_{k+1} = m_k^{e_k} r_k − q_k b_k, so P g − r = Σ_k (Π_{l>k} m_l^{e_l}) q_k b_k.
        let mut out = Vec::with_capacity(self.steps.len());
        let mut suffix = Poly::one();
        for s in self.steps.iter().rev() {
            out.push((&suffix * &s.quotient, s.divisor.clone()));
            suffix = &suffix * &s.multiplier.pow(s.exponent);
        }
        out.reverse();
        out
    }
}

/// Algebraic pseudo-remainder of `g` with respect to a triangular set,
/// reducing against elements by decreasing leader.
pub fn algrem<K: Field>(_ring: &DiffRing<K>, g: &DiffPoly<K>, set: &TriangularSet<K>) -> Remainder<K> {
    let mut r = g.clone();
    let mut steps = Vec::new();
    for (b, rank) in set.elements.iter().zip(&set.ranks).rev() {
        if r.degree_in(rank.leader) < rank.degree {
            continue;
        }
        let pd = pseudo_divide(&r, b, rank.leader).expect("leader occurs in its polynomial");
        let multiplier = b.coeff_of_power(rank.leader, rank.degree);
        steps.push(ReductionStep {
            divisor: b.clone(),
            variable: rank.leader,
            multiplier,
            exponent: pd.exponent,
            quotient: pd.quotient,
        });
        r = pd.remainder;
    }
    Remainder { remainder: r, steps }
}

/// Result of Ritt's partial reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialRemainder<K> {
    pub remainder: DiffPoly<K>,
    /// Largest order of a derivative operator applied to an element of the set.
    pub order_used: u32,
    pub steps: Vec<ReductionStep<K>>,
}

impl<K: Field> PartialRemainder<K> {
    /// The product of separant powers `h` with `h·f − g` in `(A^{(≤ order_used)})`.
    pub fn multiplier(&self) -> DiffPoly<K> {
        self.steps.iter().fold(Poly::one(), |acc, s| &acc * &s.multiplier.pow(s.exponent))
    }
}

/// Partial pseudo-remainder: eliminates every proper derivative of a leader of `set`.
pub fn partial_remainder<K: Field>(ring: &DiffRing<K>, f: &DiffPoly<K>, set: &AutoreducedSet<K>) -> PartialRemainder<K> {
    let leaders: Vec<_> = set.ranks().iter().map(|r| ring.derivative_of(r.leader)).collect();
    let mut r = f.clone();
    let mut order_used = 0;
    let mut steps = Vec::new();
    loop {
        // the highest-ranked proper derivative of some leader that occurs in r
        let mut target: Option<(VarId, usize, DerOp)> = None;
        for v in r.vars() {
            let d = ring.derivative_of(v);
            for (i, l) in leaders.iter().enumerate() {
                if l.is_derived_by(&d) && l.op != d.op {
                    let better = match &target {
                        None => true,
                        Some((w, _, _)) => ring.compare(v, *w) == Ordering::Greater,
                    };
                    if better {
                        target = Some((v, i, l.op.quotient(&d.op).expect("divides")));
                    }
                    break;
                }
            }
        }
        let Some((v, i, theta)) = target else { break };
        let a = &set.elements()[i];
        let ta = ring.apply_derop(a, &theta);
        order_used = order_used.max(theta.order());
        let pd = pseudo_divide(&r, &ta, v).expect("proper derivative has its leader");
        let separant = ta.coeff_of_power(v, 1);
        steps.push(ReductionStep { divisor: ta, variable: v, multiplier: separant, exponent: pd.exponent, quotient: pd.quotient });
        r = pd.remainder;
    }
    PartialRemainder { remainder: r, order_used, steps }
}

/// Partial reduction followed by algebraic pseudo-reduction.
pub fn full_remainder<K: Field>(ring: &DiffRing<K>, f: &DiffPoly<K>, set: &AutoreducedSet<K>) -> DiffPoly<K> {
    let p = partial_remainder(ring, f, set);
    algrem(ring, &p.remainder, &set.set).remainder
}

/// A least-rank triangular subset: the lowest-rank element for every leader
/// (first in input order on ties).
pub fn minimal_triangular_subset<K: Field>(ring: &DiffRing<K>, set: &[DiffPoly<K>]) -> Result<TriangularSet<K>> {
    let mut best: Vec<(Rank, &DiffPoly<K>)> = Vec::new();
    for f in set {
        let Some(r) = ring.rank(f) else {
            return usage("minimal triangular subset of a set containing field elements");
        };
        match best.iter_mut().find(|(b, _)| b.leader == r.leader) {
            Some(slot) => {
                if r.degree < slot.0.degree {
                    *slot = (r, f);
                }
            }
            None => best.push((r, f)),
        }
    }
    TriangularSet::new(ring, best.into_iter().map(|(_, f)| f.clone()).collect())
}

/// A characteristic set: greedy selection of least-rank elements reduced with
/// respect to those already chosen.
pub fn charset<K: Field>(ring: &DiffRing<K>, set: &[DiffPoly<K>]) -> Result<AutoreducedSet<K>> {
    let mut ranked = Vec::with_capacity(set.len());
    for f in set {
        let Some(r) = ring.rank(f) else {
            return usage("characteristic set of a set containing field elements");
        };
        ranked.push((r, f));
    }
    // stable: equal ranks keep input order
    ranked.sort_by(|a, b| ring.compare_rank(a.0, b.0));
    let mut chosen: Vec<DiffPoly<K>> = Vec::new();
    for (_, f) in ranked {
        if chosen.iter().all(|c| reducedness(ring, f, c).map(|r| r.fully).unwrap_or(false)) {
            chosen.push(f.clone());
        }
    }
    let out = AutoreducedSet::from_elements(ring, chosen)?;
    debug_assert!(out.fully);
    Ok(out)
}

/// Δ-polynomials `s_B·ψA − s_A·φB` over the least common derivative of the
/// leaders, for every pair of elements whose leaders are derivatives of the
/// same indeterminate and neither is a derivative of the other. Zero results
/// are dropped.
pub fn delta_set<K: Field>(ring: &DiffRing<K>, set: &TriangularSet<K>) -> Vec<DiffPoly<K>> {
    let mut out = Vec::new();
    let els = set.elements();
    for i in 0..els.len() {
        for j in i + 1..els.len() {
            if let Some(d) = delta_polynomial(ring, &els[i], &els[j]) {
                if !d.is_zero() {
                    out.push(d);
                }
            }
        }
    }
    out
}

/// The Δ-polynomial of one pair, if their leaders admit a common derivative
/// that is proper for both.
pub fn delta_polynomial<K: Field>(ring: &DiffRing<K>, a: &DiffPoly<K>, b: &DiffPoly<K>) -> Option<DiffPoly<K>> {
    let (la, lb) = (ring.leader_data(a).ok()?, ring.leader_data(b).ok()?);
    let (ua, ub) = (ring.derivative_of(la.leader), ring.derivative_of(lb.leader));
    if ua.indet != ub.indet || ua.is_derived_by(&ub) || ub.is_derived_by(&ua) {
        return None;
    }
    let v = ua.op.lcm(&ub.op);
    let psi = ua.op.quotient(&v)?;
    let phi = ub.op.quotient(&v)?;
    let pa = ring.apply_derop(a, &psi);
    let pb = ring.apply_derop(b, &phi);
    Some(&(&lb.separant * &pa) - &(&la.separant * &pb))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoherenceMode {
    /// Every Δ-polynomial has full remainder zero (sufficient condition).
    Fast,
    /// Saturation membership decided by a Gröbner basis.
    Exact,
}

/// Coherence of a fully autoreduced set.
pub fn is_coherent<K: Field>(ring: &DiffRing<K>, set: &AutoreducedSet<K>, mode: CoherenceMode, caps: &Caps) -> Result<bool> {
    let els = set.elements();
    for i in 0..els.len() {
        for j in i + 1..els.len() {
            let Some(delta) = delta_polynomial(ring, &els[i], &els[j]) else { continue };
            if delta.is_zero() {
                continue;
            }
            let ok = match mode {
                CoherenceMode::Fast => full_remainder(ring, &delta, set).is_zero(),
                CoherenceMode::Exact => {
                    let (ua, ub) = (ring.derivative_of(set.ranks()[i].leader), ring.derivative_of(set.ranks()[j].leader));
                    let v = ring.var_of(&ua.apply(&ua.op.quotient(&ua.op.lcm(&ub.op)).expect("divides")));
                    saturation_contains(ring, set, v, &delta, caps)?
                }
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Decides `g ∈ (A_v) : H_A^∞` where `A_v` holds the derivatives of elements of
/// `set` whose leaders rank below `v`, and `H_A` is the product of initials and
/// separants.
pub fn saturation_contains<K: Field>(ring: &DiffRing<K>, set: &AutoreducedSet<K>, v: VarId, g: &DiffPoly<K>, caps: &Caps) -> Result<bool> {
    let mut gens = Vec::new();
    let max_ord = ring.order_of_var(v);
    for (a, r) in set.elements().iter().zip(set.ranks()) {
        let base = ring.order_of_var(r.leader);
        if base > max_ord {
            continue;
        }
        for theta in DerOp::all_up_to(ring.m(), max_ord - base) {
            let lead = ring.var_of(&ring.derivative_of(r.leader).apply(&theta));
            if lead < v {
                gens.push(ring.apply_derop(a, &theta));
            }
        }
    }
    saturation_membership(gens, &h_product(ring, set), g, caps)
}

/// Product of all initials and separants of a set.
pub fn h_product<K: Field>(ring: &DiffRing<K>, set: &AutoreducedSet<K>) -> DiffPoly<K> {
    set.elements().iter().fold(Poly::one(), |acc, a| {
        let ld = ring.leader_data(a).expect("no constants");
        &(&acc * &ld.initial) * &ld.separant
    })
}

/// Decides `g ∈ (gens) : h^∞` via `(gens, 1 − w·h)` with a fresh slack `w`.
pub fn saturation_membership<K: Field>(
    mut gens: Vec<DiffPoly<K>>,
    h: &DiffPoly<K>,
    g: &DiffPoly<K>,
    caps: &Caps,
) -> Result<bool> {
    let mut vars: Vec<VarId> = gens.iter().flat_map(|p| p.vars()).chain(h.vars()).chain(g.vars()).collect();
    vars.sort_unstable();
    vars.dedup();
    let w = fresh_slack(&vars);
    // g ∈ I : h^∞ iff g ∈ (I, 1 − w·h) for g free of w; any order decides that
    let mut priority = MonomialOrder::grevlex().arrange(vars);
    priority.push(w);
    gens.push(&Poly::one() - &(&Poly::var(w) * h));
    let gb = buchberger(&gens, &MonomialOrder::with_priority(OrderKind::Grevlex, priority), caps)?;
    Ok(gb.contains(g))
}

/// Set-rank comparison of two rank-sorted sequences.
pub fn compare_rank_lists<K: Field>(ring: &DiffRing<K>, a: &[Rank], b: &[Rank]) -> RankOrder {
    for (x, y) in a.iter().zip(b) {
        match ring.compare_rank(*x, *y) {
            Ordering::Less => return RankOrder::Lower,
            Ordering::Greater => return RankOrder::Higher,
            Ordering::Equal => {}
        }
    }
    match a.len().cmp(&b.len()) {
        Ordering::Greater => RankOrder::Lower,
        Ordering::Equal => RankOrder::Equal,
        Ordering::Less => RankOrder::Higher,
    }
}

pub fn compare_autoreduced_rank<K: Field>(ring: &DiffRing<K>, a: &AutoreducedSet<K>, b: &AutoreducedSet<K>) -> RankOrder {
    compare_rank_lists(ring, a.ranks(), b.ranks())
}
