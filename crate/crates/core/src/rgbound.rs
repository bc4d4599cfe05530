//! The splitting characteristic-decomposition loop, instrumented with the
//! `(m+4)`-tuples that prove its termination.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bounds::{degree_growth_step, q_of, DEFAULT_BIT_CAP};
use crate::dickson::is_dicksonian;
use crate::diff::{DiffPoly, DiffRing, DiffSystem, Rank};
use crate::poly::{Caps, Field};
use crate::reduction::{
    algrem, charset, delta_set, is_coherent, minimal_triangular_subset, reducedness, CoherenceMode, TriangularSet,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RgCaps {
    pub max_iterations: u64,
    /// Largest number of terms any intermediate polynomial may have.
    pub max_terms: usize,
    pub max_time: Option<Duration>,
}

impl Default for RgCaps {
    fn default() -> Self {
        Self { max_iterations: 5000, max_terms: 200_000, max_time: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    CharacteristicCandidate,
    InconsistentWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component<K> {
    pub kind: ComponentKind,
    pub set: TriangularSet<K>,
    /// Work item that produced the component.
    pub item: u64,
    /// Fast-mode coherence of a characteristic candidate.
    pub coherent: Option<bool>,
}

/// How a work item came into being.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Root,
    /// `F ∪ {s_f}` or `F ∪ {i_f}` with the same `C`.
    Incomplete,
    /// `R ∪ F` with a new `C`.
    Complete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Outcome {
    /// Children were pushed back to the worklist.
    Split { children: Vec<u64> },
    Characteristic { component: usize, children: Vec<u64> },
    Inconsistent { component: usize, children: Vec<u64> },
    /// `F` holds a nonzero constant: the branch is the unit ideal and is dropped.
    Unit,
    /// No element of `F` is reduced with respect to `C`.
    Stuck,
}

impl Outcome {
    pub fn children(&self) -> &[u64] {
        match self {
            Outcome::Split { children }
            | Outcome::Characteristic { children, .. }
            | Outcome::Inconsistent { children, .. } => children,
            Outcome::Unit | Outcome::Stuck => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankInfo {
    pub leader: String,
    pub degree: u32,
}

/// One pass of the loop, processing work item `id`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub id: u64,
    pub parent: Option<u64>,
    pub origin: Origin,
    pub tau: Vec<u64>,
    /// Chosen `f`, if any.
    pub f: Option<String>,
    pub f_rank: Option<RankInfo>,
    pub f_len: usize,
    pub c_len: usize,
    /// `D(F ∪ C)` and `H(F ∪ C)` of the item.
    pub degree: u32,
    pub order: u32,
    /// Maximal order over `G ∪ C̄`.
    pub b: Option<u32>,
    /// Maximal total degree and order over everything computed in the pass.
    pub touched_degree: u32,
    pub touched_order: u32,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<K> {
    pub components: Vec<Component<K>>,
    pub trace: Vec<IterationRecord>,
}

impl<K: Field> Decomposition<K> {
    pub fn characteristic(&self) -> impl Iterator<Item = &Component<K>> {
        self.components.iter().filter(|c| c.kind == ComponentKind::CharacteristicCandidate)
    }

    pub fn inconsistent(&self) -> impl Iterator<Item = &Component<K>> {
        self.components.iter().filter(|c| c.kind == ComponentKind::InconsistentWitness)
    }

    pub fn record(&self, id: u64) -> Option<&IterationRecord> {
        self.trace.iter().find(|r| r.id == id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError<K> {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("resource cap exceeded: {reason}")]
    Capped { reason: String, partial: Box<Decomposition<K>> },
}

struct Item<K> {
    id: u64,
    parent: Option<u64>,
    origin: Origin,
    f: Vec<DiffPoly<K>>,
    c: Vec<DiffPoly<K>>,
    tau: Vec<u64>,
}

fn push_unique<K: Field>(v: &mut Vec<DiffPoly<K>>, p: DiffPoly<K>) {
    if !p.is_zero() && !v.contains(&p) {
        v.push(p);
    }
}

/// The least-rank element of `f` reduced w.r.t. every element of `c`;
/// ties go to the smaller polynomial in term order.
fn select<'a, K: Field>(ring: &DiffRing<K>, f: &'a [DiffPoly<K>], c: &[DiffPoly<K>]) -> Option<(&'a DiffPoly<K>, Rank)> {
    let mut best: Option<(&DiffPoly<K>, Rank)> = None;
    for p in f {
        let Some(r) = ring.rank(p) else { continue };
        if !c.iter().all(|q| reducedness(ring, p, q).map(|x| x.fully).unwrap_or(false)) {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bp, br)) => match ring.compare_rank(r, *br) {
                Ordering::Less => true,
                Ordering::Equal => p.total_cmp(bp) == Ordering::Less,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((p, r));
        }
    }
    best
}

fn stats<'a, K: Field + 'a>(ring: &DiffRing<K>, it: impl IntoIterator<Item = &'a DiffPoly<K>>) -> (u32, u32) {
    let s = ring.order_stats(it, None);
    (s.max_degree, s.max_order)
}

/// Runs the decomposition loop on `sys.generators`.
pub fn rgbound_decompose<K: Field>(sys: &DiffSystem<K>, caps: &RgCaps) -> Result<Decomposition<K>, DecomposeError<K>> {
    let ring = &sys.ring;
    let (m, n) = (ring.m(), ring.n() as u64);
    let mut f1 = Vec::new();
    for g in &sys.generators {
        push_unique(&mut f1, g.clone());
    }
    if f1.is_empty() {
        return Err(DecomposeError::Usage("the generating set is empty".into()));
    }
    let start = Instant::now();
    let (d1, _) = stats(ring, &f1);
    let mut tau0 = vec![0; m + 1];
    tau0.extend([n, n, d1 as u64]);

    let mut out = Decomposition { components: Vec::new(), trace: Vec::new() };
    let mut queue = VecDeque::from([Item { id: 0, parent: None, origin: Origin::Root, f: f1, c: Vec::new(), tau: tau0 }]);
    let mut next_id = 1;
    let names = |p: &DiffPoly<K>| p.display(ring).to_string();

    while let Some(item) = queue.pop_front() {
        let capped = |reason: String, out: Decomposition<K>| Err(DecomposeError::Capped { reason, partial: Box::new(out) });
        if out.trace.len() as u64 >= caps.max_iterations {
            return capped(format!("more than {} iterations", caps.max_iterations), out);
        }
        if caps.max_time.is_some_and(|t| start.elapsed() > t) {
            return capped(format!("time limit after {} iterations", out.trace.len()), out);
        }
        let (degree, order) = stats(ring, item.f.iter().chain(&item.c));
        let mut rec = IterationRecord {
            id: item.id,
            parent: item.parent,
            origin: item.origin,
            tau: item.tau.clone(),
            f: None,
            f_rank: None,
            f_len: item.f.len(),
            c_len: item.c.len(),
            degree,
            order,
            b: None,
            touched_degree: degree,
            touched_order: order,
            outcome: Outcome::Stuck,
        };
        if item.f.iter().any(|p| p.is_constant()) {
            rec.outcome = Outcome::Unit;
            out.trace.push(rec);
            continue;
        }
        let Some((f, rank)) = select(ring, &item.f, &item.c) else {
            out.trace.push(rec);
            continue;
        };
        let f = f.clone();
        rec.f = Some(names(&f));
        rec.f_rank = Some(RankInfo { leader: ring.derivative_name(&ring.derivative_of(rank.leader)), degree: rank.degree });
        let ld = ring.leader_data(&f).expect("f is not constant");
        let mut children = Vec::new();

        for g in [&ld.separant, &ld.initial] {
            if g.is_constant() {
                continue;
            }
            let mut fs = item.f.clone();
            push_unique(&mut fs, g.clone());
            let mut tau = item.tau.clone();
            *tau.last_mut().unwrap() = g.total_degree() as u64;
            children.push(next_id);
            queue.push_back(Item { id: next_id, parent: Some(item.id), origin: Origin::Incomplete, f: fs, c: item.c.clone(), tau });
            next_id += 1;
        }

        let lf = ring.derivative_of(rank.leader);
        let (d_set, mut c_bar): (Vec<_>, Vec<_>) = item
            .c
            .iter()
            .cloned()
            .partition(|c| ring.leader(c).is_some_and(|u| lf.is_derived_by(&ring.derivative_of(u))));
        c_bar.push(f.clone());
        let c_bar_tri = TriangularSet::new(ring, c_bar.clone()).expect("f is reduced, so leaders stay distinct");
        let mut g_set = Vec::new();
        for p in item.f.iter().cloned().chain(delta_set(ring, &c_bar_tri)).chain(d_set) {
            if p != f {
                push_unique(&mut g_set, p);
            }
        }
        let b = g_set.iter().chain(&c_bar).map(|p| ring.order(p)).max().unwrap_or(0);
        rec.b = Some(b);

        let mut prolonged = Vec::new();
        for c in &c_bar {
            for p in ring.prolong(std::slice::from_ref(c), b - ring.order(c)) {
                push_unique(&mut prolonged, p);
            }
        }
        let big_b = minimal_triangular_subset(ring, &prolonged).expect("prolongations are not constant");
        let b_bar: Vec<DiffPoly<K>> = big_b
            .elements()
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let others: Vec<_> =
                    big_b.elements().iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
                let others = TriangularSet::new(ring, others).expect("subset of a triangular set");
                algrem(ring, h, &others).remainder
            })
            .collect();
        let too_big = b_bar.iter().chain(big_b.elements()).any(|p| p.len() > caps.max_terms);
        let (td, to) = stats(ring, g_set.iter().chain(big_b.elements()).chain(&b_bar));
        rec.touched_degree = rec.touched_degree.max(td);
        rec.touched_order = rec.touched_order.max(to);
        if too_big {
            out.trace.push(rec);
            return capped(format!("polynomial with more than {} terms", caps.max_terms), out);
        }

        let same_rank = b_bar.iter().zip(big_b.ranks()).all(|(p, r)| ring.rank(p) == Some(*r));
        if !same_rank {
            out.components.push(Component { kind: ComponentKind::InconsistentWitness, set: big_b, item: item.id, coherent: None });
            rec.outcome = Outcome::Inconsistent { component: out.components.len() - 1, children };
            out.trace.push(rec);
            continue;
        }

        let mut r_set = Vec::new();
        for g in &g_set {
            let r = algrem(ring, g, &big_b).remainder;
            if r.len() > caps.max_terms {
                out.trace.push(rec);
                return capped(format!("polynomial with more than {} terms", caps.max_terms), out);
            }
            push_unique(&mut r_set, r);
        }
        let (td, to) = stats(ring, &r_set);
        rec.touched_degree = rec.touched_degree.max(td);
        rec.touched_order = rec.touched_order.max(to);
        let new_c = charset(ring, &b_bar).expect("ranks unchanged, so no constants");

        if r_set.is_empty() {
            let coherent = is_coherent(ring, &new_c, CoherenceMode::Fast, &Caps::default()).ok();
            out.components.push(Component {
                kind: ComponentKind::CharacteristicCandidate,
                set: new_c.set,
                item: item.id,
                coherent,
            });
            rec.outcome = Outcome::Characteristic { component: out.components.len() - 1, children };
        } else {
            let mut fs = r_set;
            for p in &item.f {
                push_unique(&mut fs, p.clone());
            }
            let c_elems = new_c.set.into_elements();
            let g_deg = if fs.iter().any(|p| p.is_constant()) {
                0
            } else {
                select(ring, &fs, &c_elems).map_or(0, |(g, _)| g.total_degree() as u64)
            };
            let mut tau: Vec<u64> = lf.op.0.iter().map(|&k| k as u64).collect();
            let j = lf.indet as u64 + 1;
            tau.extend([rank.degree as u64, j, n - j, g_deg]);
            children.push(next_id);
            queue.push_back(Item { id: next_id, parent: Some(item.id), origin: Origin::Complete, f: fs, c: c_elems, tau });
            next_id += 1;
            rec.outcome = Outcome::Split { children };
        }
        out.trace.push(rec);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    /// Every root-to-item τ sequence is dicksonian.
    pub dicksonian: bool,
    /// Every complete iteration obeys the degree growth bound.
    pub degree_growth: bool,
    /// Longest root-to-item chain of iterations.
    pub max_chain: u64,
    /// `Q(F₁)`; chains of length ≤ Q+1 are certified below `log2 A(m+7, Q−1)`.
    #[serde(with = "crate::bounds::decimal")]
    pub q: BigInt,
    /// `Some(true)` when certified, `None` when only the symbolic bound applies.
    pub chain_within_bound: Option<bool>,
    pub stuck: usize,
    pub violations: Vec<String>,
}

impl TraceReport {
    pub fn all_pass(&self) -> bool {
        self.dicksonian && self.degree_growth && self.chain_within_bound != Some(false) && self.stuck == 0
    }
}

pub fn verify_trace<K: Field>(res: &Decomposition<K>, sys: &DiffSystem<K>) -> TraceReport {
    let ring = &sys.ring;
    let m = ring.m() as u64;
    let by_id: HashMap<u64, &IterationRecord> = res.trace.iter().map(|r| (r.id, r)).collect();
    let mut violations = Vec::new();

    let mut dicksonian = true;
    let mut max_chain = 0;
    for r in &res.trace {
        let mut chain = vec![r.tau.clone()];
        let mut cur = r.parent;
        while let Some(p) = cur {
            let rec = by_id[&p];
            chain.push(rec.tau.clone());
            cur = rec.parent;
        }
        chain.reverse();
        max_chain = max_chain.max(chain.len() as u64);
        if !is_dicksonian(&chain).unwrap_or(false) {
            dicksonian = false;
            violations.push(format!("tau chain to item {} is not dicksonian: {chain:?}", r.id));
        }
    }

    let mut degree_growth = true;
    for r in &res.trace {
        if r.origin != Origin::Complete {
            continue;
        }
        let p = by_id[&r.parent.expect("complete items have parents")];
        let bound = degree_growth_step(p.degree as u64, p.order as u64, m);
        let ok = match bound.eval(DEFAULT_BIT_CAP) {
            Some(v) => BigInt::from(r.degree) <= v,
            // the bound is astronomically larger than any degree we can hold
            None => true,
        };
        if !ok {
            degree_growth = false;
            violations.push(format!("item {}: degree {} exceeds {bound} from parent {}", r.id, r.degree, p.id));
        }
    }

    let st = sys.stats();
    let q = q_of(st.max_order as u64, st.max_degree as u64, ring.n() as u64)
        .eval(DEFAULT_BIT_CAP)
        .unwrap_or_else(|| BigInt::from(u64::MAX));
    // log2 A(m+7, Q−1) ≥ log2 A(3, Q−1) = log2(2^(Q+2) − 3) > Q+1
    let chain_within_bound = if BigInt::from(max_chain) <= &q + 1u32 { Some(true) } else { None };
    let stuck = res.trace.iter().filter(|r| r.outcome == Outcome::Stuck).count();
    TraceReport { dicksonian, degree_growth, max_chain, q, chain_within_bound, stuck, violations }
}
