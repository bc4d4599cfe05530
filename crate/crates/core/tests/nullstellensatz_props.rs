mod support;

use diffnull::diff::{AnySystem, DiffRing, DiffSystem};
use diffnull::nullstellensatz::{degreelem_claim_check, minimal_t, radical_membership_at, Status};
use diffnull::poly::{Caps, Field};
use diffnull::problem::{parse_problem, print_problem};
use diffnull::{with_system, Error};
use proptest::prelude::*;
use support::*;

/// Expected `t` per fixture, `None` when no prolongation up to `h = 4` works.
/// `ex4_m2` is 2 rather than the claimed 4: the cross-derivative identity
/// closes the system one round early.
const EXPECTED: &[(&str, Option<u32>)] = &[
    ("ex1_k2", Some(2)),
    ("ex1_k3", Some(3)),
    ("ex1_k4", Some(4)),
    ("ex2_n1", Some(1)),
    ("ex2_n2", Some(2)),
    ("ex2_n3", Some(3)),
    ("ex3_n1", Some(2)),
    ("ex3_n2", Some(4)),
    ("ex3_n3", Some(8)),
    ("ex4_m1", Some(2)),
    ("ex4_m2", Some(2)),
    ("ex_unsat", None),
    ("square_root", Some(0)),
];

fn statuses<K: Field>(s: &DiffSystem<K>, upto: u32) -> Vec<Status> {
    (0..=upto).map(|h| radical_membership_at(s, h, &Caps::default()).status).collect()
}

#[test]
fn every_fixture_is_covered() {
    let mut names: Vec<&str> = EXPECTED.iter().map(|e| e.0).collect();
    names.sort();
    assert_eq!(fixture_names(), names);
}

#[test]
fn minimal_orders_and_monotonicity() {
    for &(name, want) in EXPECTED {
        let sys = fixture(name);
        let upto = want.map_or(4, |t| t + 1);
        let (t, st) = with_system!(&sys, s => (minimal_t(s, upto, &Caps::default()).unwrap().t(), statuses(s, upto)));
        assert_eq!(t, want, "{name}");
        // once in, always in; and the switch happens exactly at t
        for (h, s) in st.iter().enumerate() {
            let inside = want.is_some_and(|t| h as u32 >= t);
            assert_eq!(*s, if inside { Status::InRadical } else { Status::NotInRadical }, "{name} at h = {h}");
        }
    }
}

#[test]
fn intermediate_non_membership() {
    let s = rational_fixture("ex3_n2");
    assert_eq!(radical_membership_at(&s, 3, &Caps::default()).status, Status::NotInRadical);
    let s = rational_fixture("ex3_n1");
    assert_eq!(radical_membership_at(&s, 1, &Caps::default()).status, Status::NotInRadical);
}

#[test]
fn tiny_caps_are_reported_not_guessed() {
    let s = rational_fixture("ex3_n2");
    let caps = Caps { max_basis: 2, ..Caps::default() };
    assert_eq!(radical_membership_at(&s, 4, &caps).status, Status::InconclusiveCap);
    assert!(matches!(minimal_t(&s, 4, &caps), Err(Error::Capped(_))));
}

#[test]
fn degreelem_square() {
    let ring = DiffRing::<Q>::standard(1, 1).unwrap();
    let y = ring.y(0);
    assert!(degreelem_claim_check(&ring, &[y.pow(2)], &y, 2, 0, &Caps::default()).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `F = {s, a^d − u·s}` contains `a^d` by construction.
    #[test]
    fn degreelem_on_constructed_instances(seed in any::<u64>(), n in 1usize..=2, d in 1u32..=2) {
        let ring = DiffRing::<Q>::standard(1, n).unwrap();
        let mut r = rng(seed);
        let vars = derivative_vars(&ring, 0);
        let a = loop {
            let a = rand_poly(&mut r, &vars, 1, 2, 3);
            if !a.is_constant() {
                break a;
            }
        };
        let s = nonzero_rand_poly(&mut r, &vars, 2, 2, 3);
        let u = rand_poly(&mut r, &vars, 1, 2, 3);
        let f = vec![s.clone(), &a.pow(d) - &(&u * &s)];
        match degreelem_claim_check(&ring, &f, &a, d, 0, &Caps::default()) {
            Ok(ok) => prop_assert!(ok),
            Err(Error::Capped(_)) => prop_assume!(false),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

fn random_system(seed: u64, m: usize, n: usize, k: usize, with_f: bool) -> DiffSystem<Q> {
    let ring = DiffRing::<Q>::standard(m, n).unwrap();
    let mut r = rng(seed);
    let gens = (0..k).map(|_| rand_diff_poly(&mut r, &ring, 2, 3, 4)).collect();
    let f = rand_diff_poly(&mut r, &ring, 1, 2, 3);
    let sys = DiffSystem::new(ring, gens);
    if with_f { sys.with_f(f) } else { sys }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn problems_round_trip(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3, k in 1usize..=3, with_f in any::<bool>()) {
        let sys = AnySystem::from(random_system(seed, m, n, k, with_f));
        let text = print_problem(&sys);
        let back = parse_problem(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &sys);
        prop_assert_eq!(print_problem(&back), text);
    }
}

#[test]
fn fixtures_round_trip() {
    for name in fixture_names() {
        let sys = fixture(&name);
        let again = parse_problem(&print_problem(&sys)).unwrap();
        assert_eq!(again, sys, "{name}");
    }
}

