use blowdown::{
    forest_shapes, random_forest, BigExceptionalLattice, BlowupForest, Contraction, DanilovPlan,
    DivisorClass64, Error, ExceptionalLattice64, Subset, Support, Variant,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shapes_up_to(n: usize) -> Vec<BlowupForest> {
    (0..=n).flat_map(forest_shapes).collect()
}

fn arb_forest(max: usize) -> impl Strategy<Value = BlowupForest> {
    (0usize..=max, any::<u64>()).prop_map(|(n, seed)| random_forest(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

#[test]
fn shape_counts() {
    let counts: Vec<usize> = (0..=4).map(|n| forest_shapes(n).len()).collect();
    assert_eq!(&counts[..4], &[1, 1, 2, 5]);
    for f in shapes_up_to(4) {
        let back = BlowupForest::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }
}

#[test]
fn rejects_malformed_forests() {
    let cases = [
        r#"{"nodes":[{"id":"p1"},{"id":"p1"}]}"#,
        r#"{"nodes":[{"id":"p1","parent":"zz"}]}"#,
        r#"{"nodes":[{"id":"p1"},{"id":"p2","parent":"p1","proximate_to":["p1"]}]}"#,
        r#"{"nodes":[{"id":"p1"},{"id":"p2"},{"id":"p3","parent":"p2","proximate_to":["p1"]}]}"#,
        r#"{"nodes":[{"id":"p1","colour":"red"}]}"#,
        r#"not json"#,
    ];
    for c in cases {
        assert!(BlowupForest::from_json(c).is_err(), "{c}");
    }
}

#[test]
fn every_lower_ideal_has_a_blow_down_schedule() {
    for f in shapes_up_to(5) {
        let dec = f.dec_lattice().unwrap();
        for &g in dec.elements() {
            // peel leaves of g one by one
            let mut left = g;
            while !left.is_empty() {
                let leaf = left.iter().find(|&i| f.descendants(i).intersection(left) == Subset::singleton(i));
                left = left.without(leaf.expect("some contracted component is a (-1)-curve"));
            }
        }
    }
}

#[test]
fn intersection_matrices_are_negative_definite() {
    for f in shapes_up_to(5) {
        let l = ExceptionalLattice64::new(&f);
        let n = l.intersection_matrix();
        assert!(n.is_symmetric());
        assert!(n.is_negative_definite(), "{}", f.to_json());
    }
}

#[test]
fn factorization_order_is_a_linear_extension() {
    for f in shapes_up_to(5) {
        let plan = DanilovPlan::<i64>::new(&f);
        let order = plan.order();
        let irr = f.irr_poset();
        let pos: Vec<usize> = (0..f.len()).map(|i| order.iter().position(|&o| o == f.id(i)).unwrap()).collect();
        for (a, b) in irr.strict_pairs() {
            assert!(pos[a] < pos[b]);
        }
        // each prefix is an element of Dec(f)
        let mut prefix = Subset::EMPTY;
        for id in order {
            prefix = prefix.with(f.index_of(id).unwrap());
            assert!(f.contraction(prefix).is_ok());
        }
    }
}

#[test]
fn dominant_roots_exist() {
    for f in shapes_up_to(4) {
        let l = ExceptionalLattice64::new(&f);
        for root in f.danilov_center() {
            let bound = l.default_seed_bound() * 4;
            let d = l.ample_seed_with_dominant_root(root, &bound).unwrap();
            let d = d.unwrap_or_else(|| panic!("no seed for {root} in {}", f.to_json()));
            assert!(l.is_relatively_ample(&f.full(), &d).unwrap());
        }
    }
}

#[test]
fn satellite_descent_preserves_ampleness() {
    let f = BlowupForest::from_json(
        r#"{"nodes":[{"id":"p1"},{"id":"p2","parent":"p1"},{"id":"p3","parent":"p2","proximate_to":["p1"]}]}"#,
    )
    .unwrap();
    let l = ExceptionalLattice64::new(&f);
    let seed = l.find_ample_seed().unwrap();
    let mut lattice = l;
    let mut d = seed;
    while !lattice.is_empty() {
        let forest = lattice.forest().clone();
        let leaf = (0..forest.len()).find(|&i| forest.children(i).is_empty()).unwrap();
        let step = lattice.descend_ample(&forest.full(), &d, forest.id(leaf)).unwrap();
        let next = ExceptionalLattice64::new(&step.residual);
        assert!(next.is_relatively_ample(&step.residual.full(), &step.pushed).unwrap());
        assert!(lattice.component_pairings(&step.lifted).unwrap()[leaf] == 0);
        lattice = next;
        d = step.pushed;
    }
}

#[test]
fn paper_surface_example() {
    let f = BlowupForest::from_json(r#"{"nodes":[{"id":"p1","parent":null,"proximate_to":[]},{"id":"p2","parent":"p1","proximate_to":[]}]}"#).unwrap();
    let l = ExceptionalLattice64::new(&f);
    assert_eq!(l.intersection_matrix().to_rows(), vec![vec![-2, 1], vec![1, -1]]);
    let gen = l.tilting_generator(&f.full(), Variant::T).unwrap();
    let supports: Vec<String> = gen.exceptional_supports().iter().map(|d| d.display(&f).to_string()).collect();
    assert_eq!(supports, vec!["E[p1]+2*E[p2]", "E[p2]"]);
    assert!(matches!(gen.summands[0].support, Support::Whole));
}

#[test]
fn generator_identities_on_all_small_shapes() {
    for f in shapes_up_to(4) {
        let report = ExceptionalLattice64::new(&f).verify_generator_identities().unwrap();
        assert!(report.is_ok(), "{}: {:?}", f.to_json(), report.failures);
    }
}

#[test]
fn bigint_agrees_with_i64() {
    for f in shapes_up_to(4) {
        let small = ExceptionalLattice64::new(&f);
        let big = BigExceptionalLattice::new(&f);
        let s = small.relative_canonical(&f.full()).unwrap();
        let b = big.relative_canonical(&f.full()).unwrap();
        assert_eq!(b.coeffs, s.coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
        let seed = small.find_ample_seed().unwrap();
        let big_seed = blowdown::BigDivisorClass::strict(seed.coeffs.iter().map(|&c| BigInt::from(c)).collect());
        let a = small.danilov_factorize(&seed).unwrap();
        let c = big.danilov_factorize(&big_seed).unwrap();
        assert_eq!(a.len(), c.len());
        for (x, y) in a.iter().zip(&c) {
            assert_eq!(BigInt::from(x.k), y.k);
        }
    }
}

proptest! {
    #[test]
    fn random_forests_have_negative_definite_lattices(f in arb_forest(10)) {
        let l = ExceptionalLattice64::new(&f);
        prop_assert!(l.intersection_matrix().is_symmetric());
        prop_assert!(l.intersection_matrix().is_negative_definite());
    }

    #[test]
    fn basis_changes_are_inverse(f in arb_forest(10), raw in proptest::collection::vec(-20i64..=20, 10)) {
        let l = ExceptionalLattice64::new(&f);
        let d = DivisorClass64::strict(raw[..f.len()].to_vec());
        let t = l.to_total(&d).unwrap();
        prop_assert_eq!(l.to_strict(&t).unwrap(), d.clone());
        let back = DivisorClass64::total(raw[..f.len()].to_vec());
        prop_assert_eq!(l.to_total(&l.to_strict(&back).unwrap()).unwrap(), back);
        // pairing in either basis agrees with the matrix
        let direct = l.component_pairings(&d).unwrap();
        let via_total = l.component_pairings(&t).unwrap();
        prop_assert_eq!(direct, via_total);
    }

    #[test]
    fn discrepancies_are_effective_and_supported_on_g(f in arb_forest(8), pick in any::<usize>()) {
        let l = ExceptionalLattice64::new(&f);
        let dec = f.dec_lattice().unwrap();
        let g = dec.elements()[pick % dec.len()];
        let d = l.discrepancy(g).unwrap();
        prop_assert!(d.is_effective());
        prop_assert_eq!(d.support(), g);
    }

    #[test]
    fn pushforward_of_t_is_t_of_residual(f in arb_forest(6)) {
        let l = ExceptionalLattice64::new(&f);
        let gen = l.tilting_generator(&f.full(), Variant::T).unwrap();
        prop_assert!(gen.supports_effective());
        for &g in f.dec_lattice().unwrap().elements() {
            let c = Contraction::new(&f, g).unwrap();
            let (z, pushed) = l.pushforward_generator(&c, &gen).unwrap();
            prop_assert_eq!(pushed, z.tilting_generator(&z.forest().full(), Variant::T).unwrap());
        }
    }

    #[test]
    fn descent_along_random_schedules(f in arb_forest(6), choices in proptest::collection::vec(any::<usize>(), 6)) {
        let l = ExceptionalLattice64::new(&f);
        let Some(seed) = l.find_ample_seed() else { return Err(TestCaseError::fail("no seed")) };
        let mut lattice = l;
        let mut d = seed;
        for c in choices.iter().take(f.len()) {
            let forest = lattice.forest().clone();
            let leaves: Vec<usize> = (0..forest.len()).filter(|&i| forest.children(i).is_empty()).collect();
            let leaf = leaves[c % leaves.len()];
            let step = lattice.descend_ample(&forest.full(), &d, forest.id(leaf)).unwrap();
            prop_assert!(step.k > 0);
            let next = ExceptionalLattice64::new(&step.residual);
            prop_assert!(next.is_relatively_ample(&step.residual.full(), &step.pushed).unwrap());
            lattice = next;
            d = step.pushed;
        }
        prop_assert!(lattice.is_empty());
    }

    #[test]
    fn non_leaves_are_rejected(f in arb_forest(6)) {
        let l = ExceptionalLattice64::new(&f);
        let seed = l.find_ample_seed().unwrap();
        for i in 0..f.len() {
            if !f.children(i).is_empty() {
                prop_assert!(matches!(l.descend_ample(&f.full(), &seed, f.id(i)), Err(Error::NotMinimal(_))));
            }
        }
    }

    #[test]
    fn s_generator_shape(f in arb_forest(6)) {
        let l = ExceptionalLattice64::new(&f);
        let gen = l.tilting_generator(&f.full(), Variant::S).unwrap();
        prop_assert_eq!(gen.summands.len(), f.len() + 1);
        prop_assert!(gen.summands[1..].iter().all(|s| s.shift == -1 && matches!(&s.support, Support::Divisor(d) if *d == s.twist)));
        prop_assert!(gen.summands[0].twist.is_zero());
    }
}
