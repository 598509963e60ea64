mod common;

use std::collections::BTreeMap;

use blowdown::{
    apply_duality, dual_tstructure, generating_family, glue, random_forest, tstructure_for_edge,
    tstructure_for_element, verify_duality, verify_linear_extension_independence, DistLattice,
    FiltrationSpec, GradedObject, Slot, TStructureSpec,
};
use common::{all_posets, random_poset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Direct aisle formula, independent of the peeling recursion.
fn formula_le(t: &TStructureSpec, x: &GradedObject, m: i64) -> bool {
    x.components()
        .iter()
        .all(|(s, v)| t.get(s).is_some_and(|n| v.iter().all(|&d| d <= m + n)))
}

fn formula_ge(t: &TStructureSpec, x: &GradedObject, m: i64) -> bool {
    x.components()
        .iter()
        .all(|(s, v)| t.get(s).is_some_and(|n| v.iter().all(|&d| d >= m + n)))
}

fn shift_vectors(slots: &[Slot], values: &[i64]) -> Vec<TStructureSpec> {
    let mut out = vec![BTreeMap::new()];
    for s in slots {
        out = out
            .into_iter()
            .flat_map(|m: BTreeMap<Slot, i64>| {
                values.iter().map(move |&v| {
                    let mut m = m.clone();
                    m.insert(s.clone(), v);
                    m
                })
            })
            .collect();
    }
    out.into_iter().map(|shifts| TStructureSpec { shifts }).collect()
}

#[test]
fn recursion_matches_formula_on_small_lattices() {
    for n in 0..=4 {
        for p in all_posets(n) {
            for extended in [false, true] {
                let mut f = FiltrationSpec::new(DistLattice::from_poset(p.clone()).unwrap());
                f.extended = extended;
                let slots = f.slots();
                let family = generating_family(&slots);
                for t in shift_vectors(&slots, &[-1, 0, 1]) {
                    let g = glue(&f, &t).unwrap();
                    for x in &family {
                        for m in -1..=1 {
                            assert_eq!(g.contains_le(x, m), formula_le(&t, x, m));
                            assert_eq!(g.contains_ge(x, m), formula_ge(&t, x, m));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn element_systems_are_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 0..=6 {
        let f = random_forest(&mut rng, n);
        let dec = f.dec_lattice().unwrap();
        for &a in dec.elements() {
            for &b in dec.elements() {
                let ga = f.contraction(a).unwrap();
                let gb = f.contraction(b).unwrap();
                if a.is_subset(b) {
                    let ta = tstructure_for_element(&ga);
                    let tb = tstructure_for_element(&gb);
                    assert!(ta.le(&tb));
                    assert_eq!(tstructure_for_edge(&ga, &gb).unwrap(), ta.min(&tb));
                } else {
                    assert!(tstructure_for_edge(&ga, &gb).is_err());
                }
            }
        }
    }
}

fn arb_case() -> impl Strategy<Value = (FiltrationSpec, TStructureSpec)> {
    (0usize..=6, any::<u64>(), any::<bool>()).prop_map(|(n, seed, extended)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = FiltrationSpec::new(DistLattice::from_poset(random_poset(&mut rng, n)).unwrap());
        f.extended = extended;
        let slots = f.slots();
        let shifts = slots.iter().map(|s| (s.clone(), rand::Rng::gen_range(&mut rng, -1..=1))).collect();
        (f, TStructureSpec { shifts })
    })
}

proptest! {
    #[test]
    fn random_recursion_matches_formula((f, t) in arb_case()) {
        let g = glue(&f, &t).unwrap();
        for x in generating_family(g.slots()) {
            for m in -2..=2 {
                prop_assert_eq!(g.contains_le(&x, m), formula_le(&t, &x, m));
                prop_assert_eq!(g.contains_ge(&x, m), formula_ge(&t, &x, m));
            }
        }
    }

    #[test]
    fn random_confluence((f, t) in arb_case()) {
        prop_assert!(verify_linear_extension_independence(&f, &t).unwrap());
    }

    #[test]
    fn random_duality((f, t) in arb_case()) {
        prop_assert!(verify_duality(&f, &t).unwrap());
        prop_assert_eq!(dual_tstructure(&dual_tstructure(&t)), t);
    }

    #[test]
    fn truncation_splits((f, t) in arb_case(), m in -2i64..=2) {
        let g = glue(&f, &t).unwrap();
        for x in generating_family(g.slots()) {
            let (lo, hi) = g.truncate(&x, m).unwrap();
            prop_assert!(g.contains_le(&lo, m));
            prop_assert!(g.contains_ge(&hi, m + 1));
            prop_assert_eq!(lo.union(&hi), x.clone());
            prop_assert_eq!(apply_duality(&apply_duality(&x)), x);
        }
    }

    #[test]
    fn object_text_round_trips((f, _t) in arb_case()) {
        for x in generating_family(&f.slots()) {
            prop_assert_eq!(x.to_string().parse::<GradedObject>().unwrap(), x.clone());
            let json = serde_json::to_string(&x).unwrap();
            prop_assert_eq!(serde_json::from_str::<GradedObject>(&json).unwrap(), x);
        }
    }
}
