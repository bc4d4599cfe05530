mod support;

use std::cmp::Ordering;

use diffnull::diff::{DerOp, Derivative, DiffRing};
use proptest::prelude::*;
use rand::Rng;
use support::*;

fn derivatives(ring: &DiffRing<Q>, max_order: u32) -> Vec<Derivative> {
    let mut out = Vec::new();
    for indet in 0..ring.n() {
        for op in DerOp::all_up_to(ring.m(), max_order) {
            out.push(Derivative { indet, op });
        }
    }
    out
}

#[test]
fn ranking_axioms_exhaustive() {
    for (m, n) in [(1, 2), (2, 1), (2, 2)] {
        let ring = DiffRing::<Q>::standard(m, n).unwrap();
        let ders = derivatives(&ring, 4);
        let thetas = DerOp::all_up_to(m, 2);
        for u in &ders {
            for v in &ders {
                let c = ring.ranking_compare(u, v);
                assert_eq!(c, ring.ranking_compare(v, u).reverse());
                assert_eq!(c == Ordering::Equal, u == v, "totality");
                if u.order() < v.order() {
                    assert_eq!(c, Ordering::Less, "orderly");
                }
                for th in &thetas {
                    let (tu, tv) = (u.apply(th), v.apply(th));
                    if c != Ordering::Less {
                        assert_ne!(ring.ranking_compare(&tu, &tv), Ordering::Less, "compatibility");
                    }
                }
            }
            for th in &thetas {
                let want = if th.is_identity() { Ordering::Equal } else { Ordering::Greater };
                assert_eq!(ring.ranking_compare(&u.apply(th), u), want, "θu ≥ u");
            }
        }
    }
}

fn ring_strategy() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=2, 1usize..=2, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn derivations_commute((m, n, seed) in ring_strategy()) {
        let ring = DiffRing::<Q>::standard(m, n).unwrap();
        let f = rand_diff_poly(&mut rng(seed), &ring, 2, 3, 6);
        for i in 0..m {
            for j in 0..m {
                let a = ring.differentiate(&ring.differentiate(&f, i), j);
                let b = ring.differentiate(&ring.differentiate(&f, j), i);
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn leader_of_derivative((m, n, seed) in ring_strategy(), i in 0usize..2) {
        let ring = DiffRing::<Q>::standard(m, n).unwrap();
        let f = rand_diff_poly(&mut rng(seed), &ring, 2, 3, 5);
        prop_assume!(!f.is_constant());
        let i = i % m;
        let df = ring.differentiate(&f, i);
        let ld = ring.leader_data(&f).unwrap();
        let ldd = ring.leader_data(&df).unwrap();
        let want = ring.derivative_of(ld.leader).apply(&DerOp::unit(m, i));
        prop_assert_eq!(ring.derivative_of(ldd.leader), want);
        prop_assert_eq!(ldd.degree, 1);
        prop_assert_eq!(ldd.initial, ld.separant);
    }

    #[test]
    fn order_adds((m, n, seed) in ring_strategy(), k in 0u32..3) {
        let ring = DiffRing::<Q>::standard(m, n).unwrap();
        let mut r = rng(seed);
        let f = rand_diff_poly(&mut r, &ring, 2, 3, 5);
        prop_assume!(!f.is_constant());
        let ops = DerOp::all_up_to(m, k);
        let theta = &ops[r.gen_range(0..ops.len())];
        prop_assert_eq!(ring.order(&ring.apply_derop(&f, theta)), ring.order(&f) + theta.order());
    }

    #[test]
    fn prolongations_nest((m, n, seed) in ring_strategy(), h1 in 0u32..3, dh in 0u32..2) {
        let ring = DiffRing::<Q>::standard(m, n).unwrap();
        let mut r = rng(seed);
        let fs: Vec<P> = (0..2).map(|_| rand_diff_poly(&mut r, &ring, 1, 2, 3)).collect();
        let small = ring.prolong(&fs, h1);
        let big = ring.prolong(&fs, h1 + dh);
        for p in &small {
            prop_assert!(big.contains(p));
        }
    }
}
