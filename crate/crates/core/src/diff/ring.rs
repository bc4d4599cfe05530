use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::marker::PhantomData;

use serde::{Deserialize, Serialize};

use super::derivative::{decode, encode, DerOp, Derivative};
use crate::error::{usage, Result};
use crate::poly::{Field, FieldKind, Monomial, Poly, VarId, VarNames};

pub type DiffPoly<K> = Poly<K>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ranking {
    /// Order, then indeterminate index, then lex on the multi-index.
    #[default]
    Orderly,
    /// Indeterminate index first, then the orderly comparison. Not orderly;
    /// kept for checking the ranking axioms.
    Elimination,
}

/// A rank `u^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rank {
    pub leader: VarId,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeaderData<K> {
    pub leader: VarId,
    pub degree: u32,
    pub initial: DiffPoly<K>,
    pub separant: DiffPoly<K>,
}

impl<K> LeaderData<K> {
    pub fn rank(&self) -> Rank {
        Rank { leader: self.leader, degree: self.degree }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStats {
    /// Highest order of a derivative of each indeterminate occurring in `F`.
    pub h: Vec<u32>,
    /// `H(F)`: maximum of `h`.
    pub max_order: u32,
    /// `D(F)`: maximal total degree.
    pub max_degree: u32,
    /// Order of the distinguished polynomial, if one was given.
    pub ord_f: Option<u32>,
}

/// The ring `k{y_1, …, y_n}` with `m` commuting derivations.
///
/// Derivatives are identified with [`VarId`]s through their position in the
/// orderly ranking, so no interning table is needed and ids agree across
/// every computation over the same `(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffRing<K> {
    m: usize,
    n: usize,
    names: Vec<String>,
    ranking: Ranking,
    _field: PhantomData<K>,
}

impl<K: Field> DiffRing<K> {
    pub fn new(m: usize, names: Vec<String>) -> Result<Self> {
        Self::with_ranking(m, names, Ranking::Orderly)
    }

    pub fn with_ranking(m: usize, names: Vec<String>, ranking: Ranking) -> Result<Self> {
        if m == 0 {
            return usage("at least one derivation is required");
        }
        if names.is_empty() {
            return usage("at least one indeterminate is required");
        }
        if K::KIND == FieldKind::RationalFunctions && m != 1 {
            return usage("Q(x) coefficients require exactly one derivation");
        }
        let mut seen = HashSet::new();
        if let Some(dup) = names.iter().find(|s| !seen.insert(s.as_str())) {
            return usage(format!("duplicate indeterminate name {dup}"));
        }
        Ok(Self { m, n: names.len(), names, ranking, _field: PhantomData })
    }

    /// Names `y1, …, yn`.
    pub fn standard(m: usize, n: usize) -> Result<Self> {
        Self::new(m, (1..=n).map(|i| format!("y{i}")).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ranking(&self) -> Ranking {
        self.ranking
    }

    pub fn field(&self) -> FieldKind {
        K::KIND
    }

    pub fn indet_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn var_of(&self, d: &Derivative) -> VarId {
        debug_assert!(d.indet < self.n && d.op.0.len() == self.m);
        encode(self.m, self.n, d)
    }

    pub fn derivative_of(&self, v: VarId) -> Derivative {
        debug_assert!(!v.is_slack());
        decode(self.m, self.n, v)
    }

    /// `θ y_j` as a variable, with `j` 0-based.
    pub fn var(&self, indet: usize, op: &[u32]) -> VarId {
        self.var_of(&Derivative { indet, op: DerOp(op.to_vec()) })
    }

    /// `θ y_j` as a polynomial.
    pub fn der(&self, indet: usize, op: &[u32]) -> DiffPoly<K> {
        Poly::var(self.var(indet, op))
    }

    /// The indeterminate `y_j` itself.
    pub fn y(&self, indet: usize) -> DiffPoly<K> {
        Poly::var(self.var(indet, &vec![0; self.m]))
    }

    pub fn order_of_var(&self, v: VarId) -> u32 {
        self.derivative_of(v).order()
    }

    pub fn compare(&self, u: VarId, v: VarId) -> Ordering {
        match self.ranking {
            Ranking::Orderly => u.cmp(&v),
            Ranking::Elimination => {
                let (du, dv) = (self.derivative_of(u), self.derivative_of(v));
                du.indet.cmp(&dv.indet).then(u.cmp(&v))
            }
        }
    }

    pub fn ranking_compare(&self, u: &Derivative, v: &Derivative) -> Ordering {
        self.compare(self.var_of(u), self.var_of(v))
    }

    pub fn compare_rank(&self, a: Rank, b: Rank) -> Ordering {
        self.compare(a.leader, b.leader).then(a.degree.cmp(&b.degree))
    }

    fn shift(&self, v: VarId, i: usize) -> VarId {
        let mut d = self.derivative_of(v);
        d.op.0[i] += 1;
        self.var_of(&d)
    }

    /// `∂_i f` with `i` 0-based.
    pub fn differentiate(&self, f: &DiffPoly<K>, i: usize) -> DiffPoly<K> {
        assert!(i < self.m, "derivation index out of range");
        let mut terms: Vec<(Monomial, K)> = Vec::new();
        for (mono, c) in f.terms() {
            let dc = c.derivative();
            if !dc.is_zero() {
                terms.push((mono.clone(), dc));
            }
            for &(v, e) in mono.pairs() {
                let (_, rest) = mono.split_off(v);
                let m = rest.mul(&Monomial::var_pow(v, e - 1)).mul(&Monomial::var(self.shift(v, i)));
                terms.push((m, c.mul(&K::from_int(e as i64))));
            }
        }
        Poly::from_terms(terms)
    }

    pub fn apply_derop(&self, f: &DiffPoly<K>, theta: &DerOp) -> DiffPoly<K> {
        let mut g = f.clone();
        for (i, &k) in theta.0.iter().enumerate() {
            for _ in 0..k {
                g = self.differentiate(&g, i);
            }
        }
        g
    }

    /// Highest-ranked derivative occurring in `f`.
    pub fn leader(&self, f: &DiffPoly<K>) -> Option<VarId> {
        match self.ranking {
            Ranking::Orderly => f.max_var(),
            Ranking::Elimination => f.vars().into_iter().max_by(|&a, &b| self.compare(a, b)),
        }
    }

    pub fn leader_data(&self, f: &DiffPoly<K>) -> Result<LeaderData<K>> {
        let Some(u) = self.leader(f) else {
            return usage("a field element has no leader");
        };
        let d = f.degree_in(u);
        Ok(LeaderData { leader: u, degree: d, initial: f.coeff_of_power(u, d), separant: f.partial(u) })
    }

    pub fn rank(&self, f: &DiffPoly<K>) -> Option<Rank> {
        self.leader(f).map(|u| Rank { leader: u, degree: f.degree_in(u) })
    }

    /// Maximal order of a derivative occurring in `f`; zero for field elements.
    pub fn order(&self, f: &DiffPoly<K>) -> u32 {
        f.vars().into_iter().map(|v| self.order_of_var(v)).max().unwrap_or(0)
    }

    pub fn order_stats<'a>(&self, set: impl IntoIterator<Item = &'a DiffPoly<K>>, f: Option<&DiffPoly<K>>) -> OrderStats {
        let mut h = vec![0; self.n];
        let mut max_degree = 0;
        for g in set {
            for v in g.vars() {
                let d = self.derivative_of(v);
                h[d.indet] = h[d.indet].max(d.order());
            }
            max_degree = max_degree.max(g.total_degree());
        }
        let max_order = h.iter().copied().max().unwrap_or(0);
        OrderStats { h, max_order, max_degree, ord_f: f.map(|f| self.order(f)) }
    }

    /// `F^{(≤h)}`: every `θg` with `g ∈ F` and `ord θ ≤ h`.
    ///
    /// Zero polynomials are dropped and duplicates keep their first
    /// occurrence; the order is by generator, then by operator order and lex.
    pub fn prolong(&self, set: &[DiffPoly<K>], h: u32) -> Vec<DiffPoly<K>> {
        let ops = DerOp::all_up_to(self.m, h);
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for g in set {
            let mut cache: HashMap<DerOp, DiffPoly<K>> = HashMap::new();
            for op in &ops {
                let p = match op.0.iter().position(|&k| k > 0) {
                    None => g.clone(),
                    Some(i) => {
                        let mut parent = op.clone();
                        parent.0[i] -= 1;
                        self.differentiate(&cache[&parent], i)
                    }
                };
                cache.insert(op.clone(), p.clone());
                if !p.is_zero() && seen.insert(p.clone()) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Token for a derivative as used by the problem-file grammar.
    pub fn derivative_name(&self, d: &Derivative) -> String {
        let base = &self.names[d.indet];
        if d.op.is_identity() {
            return base.clone();
        }
        let idx: Vec<String> = d.op.0.iter().map(|k| k.to_string()).collect();
        format!("{base}[{}]", idx.join(","))
    }
}

impl<K: Field> VarNames for DiffRing<K> {
    fn var_name(&self, v: VarId) -> String {
        if v.is_slack() {
            return format!("z{}", v.0 - VarId::SLACK_BASE);
        }
        self.derivative_name(&self.derivative_of(v))
    }
}
