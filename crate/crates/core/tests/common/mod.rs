#![allow(dead_code)]

use std::collections::BTreeSet;

use blowdown::{Poset, Subset};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Every poset on `n` elements up to isomorphism appears: each is the
/// closure of a set of pairs `(i, j)` with `i < j` under some labelling.
pub fn all_posets(n: usize) -> Vec<Poset> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << slots.len()) {
        let pairs: Vec<(usize, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let p = Poset::from_index_pairs(labels(n), &pairs).unwrap();
        if seen.insert(p.strict_pairs()) {
            out.push(p);
        }
    }
    out
}

/// A random poset on `n` elements with shuffled labels.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize) -> Poset {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let density = rng.gen_range(0.0..0.6);
    let mut pairs = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    Poset::from_index_pairs(labels(n), &pairs).unwrap()
}

/// Lower ideals by filtering all subsets.
pub fn brute_lower_ideals(p: &Poset) -> Vec<Subset> {
    let n = p.len();
    (0u64..(1 << n))
        .map(Subset::from_bits)
        .filter(|&s| {
            s.iter()
                .all(|i| (0..n).all(|j| !p.leq(j, i) || s.contains(j)))
        })
        .collect()
}
