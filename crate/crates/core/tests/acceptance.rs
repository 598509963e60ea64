//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! elapsed time and must finish inside its pinned limit.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use blowdown::{
    check_tilt_relations, forest_shapes, glue, heart_simples, tstructure_for_element, verify_duality,
    verify_linear_extension_independence, BlowupForest, DanilovPlan, DistLattice, ExceptionalLattice64,
    FiltrationSpec, Orientation, Slot, Support, TStructureSpec, Variant,
};
use common::{all_posets, random_poset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT_EXAMPLE: Duration = Duration::from_secs(1);
const LIMIT_BIRKHOFF: Duration = Duration::from_secs(30);
const LIMIT_DEC: Duration = Duration::from_secs(60);
const LIMIT_DANILOV: Duration = Duration::from_secs(60);
const LIMIT_EXACT: Duration = Duration::from_secs(120);

const MAX_SHAPE_NODES: usize = 5;
const RANDOM_POSETS: usize = 600;
const RANDOM_POSET_MAX: usize = 8;
const RANDOM_GLUE_CASES: usize = 200;
const RANDOM_GLUE_MAX: usize = 6;
const SEED: u64 = 20_240_601;

fn shapes() -> Vec<BlowupForest> {
    (0..=MAX_SHAPE_NODES).flat_map(forest_shapes).collect()
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn criterion(number: usize, name: &str, limit: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let ok = out.ok && elapsed < limit;
    println!(
        "[{}] {number}. {name}: {} ({:.2?}, limit {:?})",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed,
        limit
    );
    ok
}

fn paper_example() -> Outcome {
    let f = BlowupForest::from_json(
        r#"{"nodes":[{"id":"p1","parent":null,"proximate_to":[]},{"id":"p2","parent":"p1","proximate_to":[]}]}"#,
    )
    .unwrap();
    let l = ExceptionalLattice64::new(&f);
    let n = l.intersection_matrix().to_rows();
    if n != vec![vec![-2, 1], vec![1, -1]] {
        return fail(format!("intersection matrix {n:?}"));
    }
    let gen = l.tilting_generator(&f.full(), Variant::T).unwrap();
    let mut supports: Vec<Vec<i64>> = gen.exceptional_supports().iter().map(|d| d.coeffs.clone()).collect();
    supports.sort();
    let whole = gen.summands.iter().filter(|s| s.support == Support::Whole).count();
    if supports != vec![vec![0, 1], vec![1, 2]] || whole != 1 {
        return fail(format!("supports {supports:?}"));
    }
    pass("N = [[-2,1],[1,-1]], supports {C2, C1+2C2}")
}

fn birkhoff() -> Outcome {
    let mut count = 0;
    let check = |p: blowdown::Poset| -> Result<(), String> {
        let l = DistLattice::from_poset(p.clone()).map_err(|e| e.to_string())?;
        let r = l.verify_birkhoff();
        if !(r.poset_round_trip && r.lattice_round_trip) {
            return Err(format!("round trip failed on {:?}", p.strict_pairs()));
        }
        if l.len() <= 64 {
            let labels: Vec<String> = l.elements().iter().map(|&x| l.element_label(x)).collect();
            let pairs: Vec<(String, String)> = l
                .hasse_edges()
                .into_iter()
                .map(|(a, b)| (labels[a].clone(), labels[b].clone()))
                .collect();
            let (rebuilt, _) = DistLattice::from_order(&labels, &pairs).map_err(|e| e.to_string())?;
            if rebuilt.len() != l.len() || rebuilt.base().len() != p.len() {
                return Err("abstract rebuild differs".into());
            }
        }
        Ok(())
    };
    for n in 0..=5 {
        for p in all_posets(n) {
            if let Err(e) = check(p) {
                return fail(e);
            }
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..RANDOM_POSETS {
        let n = rng.gen_range(0..=RANDOM_POSET_MAX);
        if let Err(e) = check(random_poset(&mut rng, n)) {
            return fail(e);
        }
    }
    pass(format!("{count} exhaustive posets on <= 5 elements, {RANDOM_POSETS} random on <= {RANDOM_POSET_MAX}"))
}

fn dec_laws(forests: &[BlowupForest]) -> Outcome {
    let mut pairs = 0usize;
    for f in forests {
        let dec = f.dec_lattice().unwrap();
        if !dec.is_distributive() {
            return fail(format!("not distributive: {}", f.to_json()));
        }
        let jp = dec.join_primes();
        if !jp.poset.same_order_by_labels(&f.irr_poset()) {
            return fail(format!("JP(Dec) differs from Irr: {}", f.to_json()));
        }
        for &a in dec.elements() {
            for &b in dec.elements() {
                let ga = f.contraction(a).unwrap();
                let gb = f.contraction(b).unwrap();
                let (u, m) = (ga.union(&gb).unwrap(), ga.meet(&gb).unwrap());
                if u.contracted() != a.union(b) || m.contracted() != a.intersection(b) {
                    return fail(format!("Irr not a lattice map on {}", f.to_json()));
                }
                pairs += 1;
            }
        }
    }
    pass(format!("{} forests, {pairs} pairs", forests.len()))
}

fn danilov(forests: &[BlowupForest]) -> Outcome {
    let mut seeds = 0usize;
    for f in forests {
        let l = ExceptionalLattice64::new(f);
        let plan = DanilovPlan::new(f);
        let mut bad = None;
        let mut found = 0usize;
        l.for_each_ample_seed(&l.default_seed_bound(), |d| {
            found += 1;
            match plan.run(d) {
                Ok(steps) if steps.len() == f.len() && steps.iter().all(|s| s.ample_after) => true,
                other => {
                    bad = Some(format!("{:?} on {}", other.map(|s| s.len()), f.to_json()));
                    false
                }
            }
        });
        if let Some(b) = bad {
            return fail(b);
        }
        if found == 0 {
            return fail(format!("no ample seed for {}", f.to_json()));
        }
        seeds += found;
    }
    pass(format!("{} forests, {seeds} ample seeds", forests.len()))
}

fn identities(forests: &[BlowupForest]) -> Outcome {
    let mut checked = 0usize;
    for f in forests {
        let l = ExceptionalLattice64::new(f);
        let report = l.verify_generator_identities().unwrap();
        if !report.is_ok() {
            return fail(format!("{:?} on {}", report.failures[0], f.to_json()));
        }
        let gen = l.tilting_generator(&f.full(), Variant::T).unwrap();
        for &g in f.dec_lattice().unwrap().elements() {
            let (z, pushed) = l.pushforward_generator(&f.contraction(g).unwrap(), &gen).unwrap();
            if pushed != z.tilting_generator(&z.forest().full(), Variant::T).unwrap() {
                return fail(format!("pushforward differs on {}", f.to_json()));
            }
            checked += 1;
        }
        checked += report.checked;
    }
    pass(format!("{checked} identities"))
}

fn binary_shifts(slots: &[Slot], values: &[i64]) -> Vec<TStructureSpec> {
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

fn random_glue_cases() -> Vec<(FiltrationSpec, TStructureSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x91);
    (0..RANDOM_GLUE_CASES)
        .map(|_| {
            let n = rng.gen_range(0..=RANDOM_GLUE_MAX);
            let f = FiltrationSpec::new(DistLattice::from_poset(random_poset(&mut rng, n)).unwrap());
            let shifts = f.slots().into_iter().map(|s| (s, rng.gen_range(-1..=1))).collect();
            (f, TStructureSpec { shifts })
        })
        .collect()
}

fn confluence(forests: &[BlowupForest]) -> Outcome {
    let mut cases = 0usize;
    for f in forests {
        let filtration = FiltrationSpec::new(f.dec_lattice().unwrap());
        for t in binary_shifts(&filtration.slots(), &[0, 1]) {
            if !verify_linear_extension_independence(&filtration, &t).unwrap() {
                return fail(format!("{t} on {}", f.to_json()));
            }
            cases += 1;
        }
    }
    for (f, t) in random_glue_cases() {
        if !verify_linear_extension_independence(&f, &t).unwrap() {
            return fail(format!("random case {t}"));
        }
        cases += 1;
    }
    pass(format!("{cases} (lattice, shift) pairs"))
}

fn tilts(forests: &[BlowupForest]) -> Outcome {
    let mut edges = 0usize;
    for f in forests {
        let r = check_tilt_relations(f).unwrap();
        if !r.is_ok() {
            return fail(format!("{:?} on {}", r.failures[0], f.to_json()));
        }
        edges += r.edges;
    }
    pass(format!("{edges} comparable pairs"))
}

fn duality(forests: &[BlowupForest]) -> Outcome {
    let mut specs = 0usize;
    for f in forests {
        let plus = FiltrationSpec::dec_plus(f).unwrap();
        for t in binary_shifts(&plus.slots(), &[0, 1]) {
            if !verify_duality(&plus, &t).unwrap() {
                return fail(format!("{t} on {}", f.to_json()));
            }
            specs += 1;
        }
    }
    for (f, t) in random_glue_cases() {
        if !verify_duality(&f, &t).unwrap() {
            return fail(format!("random case {t}"));
        }
        specs += 1;
    }
    pass(format!("{specs} specs"))
}

fn simples(forests: &[BlowupForest]) -> Outcome {
    let mut count = 0usize;
    for f in forests {
        let plus = FiltrationSpec::dec_plus(f).unwrap();
        for &g in f.dec_lattice().unwrap().elements() {
            let g = f.contraction(g).unwrap();
            let glued = glue(&plus, &tstructure_for_element(&g)).unwrap();
            for orientation in [Orientation::Standard, Orientation::LeftDual, Orientation::RightDual] {
                let s = heart_simples(&g, orientation).unwrap();
                let quotients: Vec<_> = s.iter().filter(|c| c.simple_quotient_of_structure_sheaf).collect();
                let others = s.len() - quotients.len();
                if quotients.len() != 1
                    || quotients[0].slot != Slot::Y
                    || others != g.contracted().len()
                    || !s.iter().all(|c| c.in_heart && glued.in_heart(&c.shadow))
                {
                    return fail(format!("g = {:?} on {}", g.labels(), f.to_json()));
                }
                count += 1;
            }
        }
    }
    pass(format!("{count} (forest, g, orientation) cases"))
}

#[test]
fn acceptance() {
    let forests = shapes();
    let results = [
        criterion(1, "paper example", LIMIT_EXAMPLE, paper_example),
        criterion(2, "Birkhoff duality", LIMIT_BIRKHOFF, birkhoff),
        criterion(3, "Dec(f) lattice laws", LIMIT_DEC, || dec_laws(&forests)),
        criterion(4, "Danilov factorization", LIMIT_DANILOV, || danilov(&forests)),
        criterion(5, "generator identities", LIMIT_EXACT, || identities(&forests)),
        criterion(6, "gluing confluence", LIMIT_EXACT, || confluence(&forests)),
        criterion(7, "tilt system", LIMIT_EXACT, || tilts(&forests)),
        criterion(8, "duality", LIMIT_EXACT, || duality(&forests)),
        criterion(9, "simple quotients", LIMIT_EXACT, || simples(&forests)),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
