mod support;

use diffnull::diff::{AnySystem, DiffRing, DiffSystem};
use diffnull::poly::{Caps, Field, Poly};
use diffnull::reduction::{full_remainder, h_product, saturation_membership, AutoreducedSet};
use diffnull::rgbound::{rgbound_decompose, verify_trace, ComponentKind, DecomposeError, RgCaps};
use diffnull::with_system;
use proptest::prelude::*;
use support::*;

/// Checks the structural invariants of one decomposition; `Err` describes the
/// first violation.
fn check<K: Field>(sys: &DiffSystem<K>) -> Result<(), String> {
    let caps = RgCaps::default();
    let d = rgbound_decompose(sys, &caps).map_err(|e| e.to_string())?;
    let again = rgbound_decompose(sys, &caps).map_err(|e| e.to_string())?;
    if d != again {
        return Err("two runs differ".into());
    }
    let ring = &sys.ring;
    for c in &d.components {
        let set = AutoreducedSet::new(ring, c.set.clone());
        match c.kind {
            ComponentKind::CharacteristicCandidate => {
                for g in sys.generators.iter().filter(|g| !g.is_zero()) {
                    let r = full_remainder(ring, g, &set);
                    if !r.is_zero() {
                        return Err(format!("generator {} does not reduce to zero", g.display(ring)));
                    }
                }
            }
            ComponentKind::InconsistentWitness => {
                let h = h_product(ring, &set);
                let ok = saturation_membership(c.set.elements().to_vec(), &h, &Poly::one(), &Caps::default())
                    .map_err(|e| e.to_string())?;
                if !ok {
                    return Err(format!("witness {} is consistent", c.item));
                }
            }
        }
    }
    let v = verify_trace(&d, sys);
    if !(v.dicksonian && v.degree_growth && v.stuck == 0) {
        return Err(format!("trace check failed: {:?}", v.violations));
    }
    Ok(())
}

#[test]
fn example_fixtures() {
    for name in ["ex1_k2", "ex1_k3", "ex1_k4", "ex2_n1", "ex2_n2", "ex2_n3", "ex3_n1", "ex3_n2", "ex4_m1", "ex4_m2"] {
        let sys = fixture(name);
        let r = with_system!(&sys, s => check(s));
        assert_eq!(r, Ok(()), "{name}");
    }
}

/// Where `1` lies in the radical, no component can be a genuine
/// characteristic set; the decomposition must find only inconsistent witnesses
/// or candidates whose coherence check fails.
#[test]
fn inconsistent_examples_have_no_coherent_candidates() {
    for name in ["ex1_k3", "ex2_n2", "ex3_n2", "ex4_m1", "ex4_m2"] {
        let sys = fixture(name);
        let comps: Vec<_> = with_system!(&sys, s => {
            let d = rgbound_decompose(s, &RgCaps::default()).unwrap();
            d.components.iter().map(|c| (c.kind, c.coherent)).collect()
        });
        for (kind, coherent) in comps {
            assert!(kind == ComponentKind::InconsistentWitness || coherent != Some(true), "{name}");
        }
    }
}

#[test]
fn square_has_separant_branch() {
    let AnySystem::Rational(s) = fixture("square_root") else { panic!() };
    let d = rgbound_decompose(&s, &RgCaps::default()).unwrap();
    assert!(d.trace.iter().any(|r| r.f.as_deref() == Some("2*y")));
    assert_eq!(check(&s), Ok(()));
}

#[test]
fn iteration_cap_returns_partial_trace() {
    let s = rational_fixture("ex3_n2");
    match rgbound_decompose(&s, &RgCaps { max_iterations: 3, ..RgCaps::default() }) {
        Err(DecomposeError::Capped { partial, .. }) => assert_eq!(partial.trace.len(), 3),
        other => panic!("expected a cap, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn random_small_systems(m in 1usize..=2, n in 1usize..=2, seed in any::<u64>(), k in 1usize..=2) {
        let ring = DiffRing::<Q>::standard(m, n).unwrap();
        let mut r = rng(seed);
        let gens: Vec<P> = (0..k).map(|_| rand_diff_poly(&mut r, &ring, 1, 2, 3)).collect();
        prop_assume!(gens.iter().all(|g| !g.is_constant()));
        let sys = DiffSystem::new(ring, gens);
        match check(&sys) {
            Ok(()) => {}
            Err(e) if e.contains("cap") => prop_assume!(false),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
