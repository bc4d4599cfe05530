//! Shared helpers: random polynomials, fixtures and an independent
//! linear-algebra membership oracle.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use diffnull::diff::{AnySystem, DiffRing, DiffSystem};
use diffnull::poly::{Monomial, Poly, VarId};
use diffnull::problem::parse_problem;

pub type Q = BigRational;
pub type P = Poly<Q>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(i: i64) -> Q {
    Q::from_integer(BigInt::from(i))
}

/// Random polynomial in `vars` with total degree ≤ `max_deg`, up to
/// `max_terms` terms and coefficients in `[-c, c] \ {0}`.
pub fn rand_poly(rng: &mut impl Rng, vars: &[VarId], max_deg: u32, max_terms: usize, c: i64) -> P {
    let terms = rng.gen_range(1..=max_terms);
    let mut out = Vec::new();
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let mut pairs = Vec::new();
        for _ in 0..deg {
            pairs.push((vars[rng.gen_range(0..vars.len())], 1));
        }
        let mut coeff = 0;
        while coeff == 0 {
            coeff = rng.gen_range(-c..=c);
        }
        out.push((Monomial::from_pairs(pairs), q(coeff)));
    }
    Poly::from_terms(out)
}

pub fn nonzero_rand_poly(rng: &mut impl Rng, vars: &[VarId], max_deg: u32, max_terms: usize, c: i64) -> P {
    loop {
        let p = rand_poly(rng, vars, max_deg, max_terms, c);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn plain_vars(n: u32) -> Vec<VarId> {
    (0..n).map(VarId).collect()
}

/// All monomials in `vars` of total degree ≤ `d`.
pub fn monomials_up_to(vars: &[VarId], d: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![Monomial::one()];
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &frontier {
            for &v in vars {
                let mm = m.mul(&Monomial::var(v));
                if !next.contains(&mm) {
                    next.push(mm);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out.dedup();
    out
}

/// Sparse row echelon form over `Q`, keyed by the largest monomial of each row.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<Monomial, BTreeMap<Monomial, Q>>,
}

impl Echelon {
    fn reduce(&self, mut v: BTreeMap<Monomial, Q>) -> BTreeMap<Monomial, Q> {
        loop {
            let Some((piv, c)) = v.iter().rev().find(|(m, _)| self.rows.contains_key(*m)).map(|(m, c)| (m.clone(), c.clone()))
            else {
                return v;
            };
            let row = &self.rows[&piv];
            for (m, rc) in row {
                let e = v.entry(m.clone()).or_insert_with(Q::zero);
                *e -= &c * rc;
                if e.is_zero() {
                    v.remove(m);
                }
            }
        }
    }

    fn insert(&mut self, v: BTreeMap<Monomial, Q>) {
        let v = self.reduce(v);
        let Some((piv, lc)) = v.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) else { return };
        let inv = Q::one() / lc;
        let v = v.into_iter().map(|(m, c)| (m, c * &inv)).collect();
        self.rows.insert(piv, v);
    }
}

fn dense(p: &P) -> BTreeMap<Monomial, Q> {
    p.terms().iter().cloned().collect()
}

/// Is `f` a `Q`-linear combination of `m·g` with `deg(m·g) ≤ d`? A positive
/// answer is a membership certificate; a negative one only rules out
/// representations up to degree `d`.
pub fn macaulay_member(f: &P, gens: &[P], d: u32) -> bool {
    let mut vars: Vec<VarId> = gens.iter().flat_map(|g| g.vars()).chain(f.vars()).collect();
    vars.sort();
    vars.dedup();
    let mut ech = Echelon::default();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let dg = g.total_degree();
        if dg > d {
            continue;
        }
        for m in monomials_up_to(&vars, d - dg) {
            ech.insert(dense(&g.mul_monomial(&Q::one(), &m)));
        }
    }
    ech.reduce(dense(f)).is_empty()
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> AnySystem {
    let path = fixtures_dir().join(format!("{name}.prob"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_problem(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn rational_fixture(name: &str) -> DiffSystem<Q> {
    match fixture(name) {
        AnySystem::Rational(s) => s,
        AnySystem::RationalFunctions(_) => panic!("{name} has Q(x) coefficients"),
    }
}

/// Every `.prob` fixture name, sorted.
pub fn fixture_names() -> Vec<String> {
    let mut out: Vec<String> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "prob").then(|| p.file_stem()?.to_str().map(String::from))?
        })
        .collect();
    out.sort();
    out
}

/// Random differential polynomial in derivatives of order ≤ `max_order`.
pub fn rand_diff_poly(rng: &mut impl Rng, ring: &DiffRing<Q>, max_order: u32, max_deg: u32, max_terms: usize) -> P {
    let vars = derivative_vars(ring, max_order);
    rand_poly(rng, &vars, max_deg, max_terms, 5)
}

pub fn derivative_vars(ring: &DiffRing<Q>, max_order: u32) -> Vec<VarId> {
    let mut out = Vec::new();
    for i in 0..ring.n() {
        for op in diffnull::diff::DerOp::all_up_to(ring.m(), max_order) {
            out.push(ring.var(i, &op.0));
        }
    }
    out.sort();
    out
}
