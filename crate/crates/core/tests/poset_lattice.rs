mod common;

use blowdown::{DistLattice, Error, Poset, Subset};
use common::{all_posets, brute_lower_ideals, random_poset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn ideals_match_brute_force_exhaustively() {
    for n in 0..=5 {
        for p in all_posets(n) {
            let mut fast: Vec<Subset> = p.lower_ideals().unwrap().into_iter().map(|i| i.members()).collect();
            let mut slow = brute_lower_ideals(&p);
            assert!(fast.contains(&Subset::EMPTY) && fast.contains(&p.full()));
            fast.sort();
            slow.sort();
            assert_eq!(fast, slow);
        }
    }
}

#[test]
fn poset_counts() {
    // Unlabelled posets on n points: 1, 1, 2, 5, 16, 63. Labelled
    // naturally-ordered closures over-count, but every class is present.
    let counts: Vec<usize> = (0..=4).map(|n| all_posets(n).len()).collect();
    assert_eq!(&counts[..3], &[1, 1, 2]);
    assert!(counts[3] >= 5 && counts[4] >= 16);
}

#[test]
fn spec_style_examples() {
    let p = Poset::new(&["E1", "E2", "E3"], &[("E3", "E2"), ("E2", "E1")]).unwrap();
    assert!(p.leq(p.index_of("E3").unwrap(), p.index_of("E1").unwrap()));
    assert!(p.is_lower_ideal(p.subset(&["E3", "E2"]).unwrap()).unwrap());
    let q = Poset::new(&["E1", "E2", "E3", "E4"], &[("E3", "E2"), ("E2", "E1")]).unwrap();
    assert_eq!(q.linear_extensions().unwrap().len(), 4);
    assert!(matches!(Poset::new(&["a", "b"], &[("a", "b"), ("b", "a")]), Err(Error::Cycle(..))));
}

#[test]
fn hulls_linear_extensions_and_principal_ideals() {
    for n in 0..=5 {
        for p in all_posets(n) {
            let ideals = brute_lower_ideals(&p);
            for &i in &ideals {
                for &j in &ideals {
                    if !i.is_subset(j) {
                        continue;
                    }
                    let t = j.difference(i);
                    assert!(p.is_interval_closed(t).unwrap());
                    let (hull, below) = p.ideal_hull(t).unwrap();
                    assert_eq!(hull.members().difference(below.members()), t);
                }
            }
            for s in 0..n {
                let down = p.principal_ideal(s).unwrap().members();
                let smallest = ideals.iter().filter(|x| x.contains(s)).fold(p.full(), |acc, &x| acc.intersection(x));
                assert_eq!(down, smallest);
            }
            if n <= 4 {
                let brute = perms(n)
                    .into_iter()
                    .filter(|order| {
                        (0..n).all(|a| (a + 1..n).all(|b| !p.lt(order[b], order[a])))
                    })
                    .count();
                assert_eq!(p.linear_extensions().unwrap().len(), brute);
            }
        }
    }
    let fact = [1, 1, 2, 6, 24, 120, 720];
    for n in 0..=6 {
        let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        assert_eq!(Poset::antichain(&names).unwrap().linear_extensions().unwrap().len(), fact[n]);
    }
}

#[test]
fn lattice_laws_and_birkhoff_on_small_posets() {
    for n in 0..=4 {
        for p in all_posets(n) {
            let l = DistLattice::from_poset(p.clone()).unwrap();
            assert!(l.len() > n);
            assert!(l.is_distributive());
            let report = l.verify_birkhoff();
            assert!(report.poset_round_trip && report.lattice_round_trip);
            assert_eq!(report.join_prime_count, n);
            for &x in l.elements() {
                assert_eq!(l.meet(x, l.top()).unwrap(), x);
                assert_eq!(l.join(x, l.bottom()).unwrap(), x);
                for &y in l.elements() {
                    assert_eq!(l.meet(x, l.join(x, y).unwrap()).unwrap(), x);
                }
            }
            let op = l.opposite();
            assert_eq!(op.len(), l.len());
            assert!(op.opposite().base().same_order_by_labels(l.base()));
            let whole = l.interval(l.bottom(), l.top()).unwrap();
            assert_eq!(whole.len(), l.len());
            for &x in l.elements() {
                assert_eq!(l.interval(x, x).unwrap().len(), 1);
            }
        }
    }
}

#[test]
fn abstract_lattices_rebuild() {
    let (l, image) = DistLattice::from_order(
        &["0", "a", "b", "1"],
        &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
    )
    .unwrap();
    assert_eq!(l.len(), 4);
    assert_eq!(image.len(), 4);
    let m3 = DistLattice::from_order(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    );
    assert!(matches!(m3, Err(Error::NonDistributive(_))));
}

fn arb_poset() -> impl Strategy<Value = Poset> {
    (0usize..=8, any::<u64>()).prop_map(|(n, seed)| random_poset(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

proptest! {
    #[test]
    fn random_ideals_match_brute_force(p in arb_poset()) {
        let mut fast: Vec<Subset> = p.lower_ideals().unwrap().into_iter().map(|i| i.members()).collect();
        let mut slow = brute_lower_ideals(&p);
        fast.sort();
        slow.sort();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn random_birkhoff(p in arb_poset()) {
        let l = DistLattice::from_poset(p).unwrap();
        let r = l.verify_birkhoff();
        prop_assert!(r.poset_round_trip && r.lattice_round_trip);
    }

    #[test]
    fn intervals_are_lattices_of_differences(p in arb_poset(), a in any::<usize>(), b in any::<usize>()) {
        let l = DistLattice::from_poset(p.clone()).unwrap();
        let x = l.elements()[a % l.len()];
        let y = l.elements()[b % l.len()];
        let (lo, hi) = (x.intersection(y), x.union(y));
        let sub = l.interval(lo, hi).unwrap();
        prop_assert_eq!(sub.len(), l.interval_elements(lo, hi).unwrap().len());
        prop_assert_eq!(sub.base().len(), hi.difference(lo).len());
    }
}
