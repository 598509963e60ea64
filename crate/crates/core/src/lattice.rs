//! Finite distributive lattices through their Birkhoff representation.
//!
//! A [`DistLattice`] is always stored as the family of lower ideals of a
//! base poset; meet and join are intersection and union. Join-prime elements
//! are found from the lattice order alone, so the two directions of the
//! Birkhoff correspondence can be checked against each other.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poset::{Poset, Subset, DEFAULT_IDEAL_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistLattice {
    base: Poset,
    ideals: Vec<Subset>,
    position: HashMap<Subset, usize>,
}

/// Join-prime elements of a lattice, as a poset.
#[derive(Clone, Debug)]
pub struct JoinPrimes {
    /// The induced order on the join-primes.
    pub poset: Poset,
    /// `elements[k]` is the lattice element for poset element `k`.
    pub elements: Vec<Subset>,
}

/// Outcome of both Birkhoff round trips on one lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BirkhoffReport {
    /// `JP(L)` is isomorphic to the base poset via principal ideals.
    pub poset_round_trip: bool,
    /// `I(JP(L))` maps isomorphically onto `L`.
    pub lattice_round_trip: bool,
    pub join_prime_count: usize,
    pub element_count: usize,
}

impl DistLattice {
    pub fn from_poset(base: Poset) -> Result<Self> {
        Self::from_poset_with_limit(base, DEFAULT_IDEAL_LIMIT)
    }

    pub fn from_poset_with_limit(base: Poset, limit: usize) -> Result<Self> {
        let ideals: Vec<Subset> = base
            .lower_ideals_with_limit(limit)?
            .into_iter()
            .map(|i| i.members())
            .collect();
        Ok(Self::from_parts(base, ideals))
    }

    fn from_parts(base: Poset, ideals: Vec<Subset>) -> Self {
        let position = ideals.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        DistLattice {
            base,
            ideals,
            position,
        }
    }

    /// Builds a lattice from an explicit order relation on abstract elements.
    ///
    /// The relation is closed like a [`Poset`]; it must have all meets and
    /// joins and be distributive. Returns the lattice together with, for each
    /// input element, the index of its image in [`DistLattice::elements`].
    pub fn from_order<S, T>(elements: &[S], pairs: &[(T, T)]) -> Result<(Self, Vec<usize>)>
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let order = Poset::new(elements, pairs)?;
        let n = order.len();
        if n == 0 {
            return Err(Error::NonDistributive("a lattice has at least one element".into()));
        }
        let join = |a: usize, b: usize| -> Result<usize> {
            let ub = order.up_set(a).intersection(order.up_set(b));
            let least = order.minimal_in(ub);
            if least.len() == 1 {
                Ok(least.iter().next().unwrap())
            } else {
                Err(Error::NonDistributive(format!(
                    "`{}` and `{}` have no join",
                    order.label(a),
                    order.label(b)
                )))
            }
        };
        let meet = |a: usize, b: usize| -> Result<usize> {
            let lb = order.down_set(a).intersection(order.down_set(b));
            let greatest = order.maximal_in(lb);
            if greatest.len() == 1 {
                Ok(greatest.iter().next().unwrap())
            } else {
                Err(Error::NonDistributive(format!(
                    "`{}` and `{}` have no meet",
                    order.label(a),
                    order.label(b)
                )))
            }
        };
        let mut join_table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                join_table[a][b] = join(a, b)?;
                meet(a, b)?;
            }
        }
        let bottom = order.minimal_in(order.full());
        let bottom = bottom.iter().next().unwrap();
        // join-prime: nonzero and the join of everything not above it is
        // still not above it.
        let mut primes = Vec::new();
        for j in 0..n {
            if j == bottom {
                continue;
            }
            let rest = (0..n)
                .filter(|&x| !order.leq(j, x))
                .fold(bottom, |acc, x| join_table[acc][x]);
            if !order.leq(j, rest) {
                primes.push(j);
            }
        }
        let (jp, kept) = order.restrict(Subset::from_indices(primes.iter().copied()));
        let lattice = DistLattice::from_poset_with_limit(jp, DEFAULT_IDEAL_LIMIT)?;
        if lattice.len() != n {
            return Err(Error::NonDistributive(format!(
                "{} elements but {} lower ideals of its join-primes",
                n,
                lattice.len()
            )));
        }
        // x maps to the join-primes below it.
        let mut image = Vec::with_capacity(n);
        for x in 0..n {
            let below = Subset::from_indices(
                kept.iter()
                    .enumerate()
                    .filter(|&(_, &j)| order.leq(j, x))
                    .map(|(k, _)| k),
            );
            let pos = lattice.position(below).ok_or_else(|| {
                Error::NonDistributive(format!("`{}` is not a join of join-primes", order.label(x)))
            })?;
            image.push(pos);
        }
        let mut seen = Subset::EMPTY;
        for &p in &image {
            seen = seen.with(p);
        }
        if seen.len() != n {
            return Err(Error::NonDistributive("Birkhoff map is not injective".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if order.leq(a, b) != lattice.ideals[image[a]].is_subset(lattice.ideals[image[b]]) {
                    return Err(Error::NonDistributive("Birkhoff map does not preserve order".into()));
                }
            }
        }
        Ok((lattice, image))
    }

    /// The poset whose lower ideals are the elements.
    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// Elements in canonical order (cardinality, then lexicographic).
    pub fn elements(&self) -> &[Subset] {
        &self.ideals
    }

    pub fn bottom(&self) -> Subset {
        Subset::EMPTY
    }

    pub fn top(&self) -> Subset {
        self.base.full()
    }

    pub fn position(&self, x: Subset) -> Option<usize> {
        self.position.get(&x).copied()
    }

    pub fn contains(&self, x: Subset) -> bool {
        self.position.contains_key(&x)
    }

    fn check(&self, x: Subset) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::UnknownElement(self.element_label(x)))
        }
    }

    pub fn leq(&self, x: Subset, y: Subset) -> bool {
        x.is_subset(y)
    }

    pub fn meet(&self, x: Subset, y: Subset) -> Result<Subset> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.intersection(y))
    }

    pub fn join(&self, x: Subset, y: Subset) -> Result<Subset> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.union(y))
    }

    /// Canonical name, e.g. `{a,b}`.
    pub fn element_label(&self, x: Subset) -> String {
        let names: Vec<String> = x
            .iter()
            .map(|i| {
                if i < self.base.len() {
                    self.base.label(i).to_owned()
                } else {
                    format!("#{i}")
                }
            })
            .collect();
        format!("{{{}}}", names.join(","))
    }

    /// Join-primes, determined from the lattice order alone: `j != 0` is
    /// join-prime iff the join of all elements not above `j` is not above `j`.
    ///
    /// Each join-prime is labelled by the label of its unique maximal base
    /// element.
    pub fn join_primes(&self) -> JoinPrimes {
        let mut primes = Vec::new();
        for &j in &self.ideals {
            if j.is_empty() {
                continue;
            }
            let rest = self
                .ideals
                .iter()
                .filter(|&&x| !j.is_subset(x))
                .fold(Subset::EMPTY, |acc, &x| acc.union(x));
            if !j.is_subset(rest) {
                primes.push(j);
            }
        }
        let labels: Vec<String> = primes
            .iter()
            .map(|&j| {
                let top = self.base.maximal_in(j);
                debug_assert_eq!(top.len(), 1);
                self.base.label(top.iter().next().unwrap()).to_owned()
            })
            .collect();
        let mut pairs = Vec::new();
        for (a, &x) in primes.iter().enumerate() {
            for (b, &y) in primes.iter().enumerate() {
                if a != b && x.is_subset(y) {
                    pairs.push((a, b));
                }
            }
        }
        let poset = Poset::from_index_pairs(labels, &pairs).expect("join-primes form a poset");
        JoinPrimes {
            poset,
            elements: primes,
        }
    }

    /// The interval `[lo, hi]`, rebuilt on the induced poset on `hi \ lo`.
    pub fn interval(&self, lo: Subset, hi: Subset) -> Result<DistLattice> {
        self.check(lo)?;
        self.check(hi)?;
        if !lo.is_subset(hi) {
            return Err(Error::NotComparable);
        }
        let (base, _) = self.base.restrict(hi.difference(lo));
        DistLattice::from_poset_with_limit(base, DEFAULT_IDEAL_LIMIT)
    }

    /// The elements of `[lo, hi]` as members of `self`.
    pub fn interval_elements(&self, lo: Subset, hi: Subset) -> Result<Vec<Subset>> {
        self.check(lo)?;
        self.check(hi)?;
        if !lo.is_subset(hi) {
            return Err(Error::NotComparable);
        }
        Ok(self
            .ideals
            .iter()
            .copied()
            .filter(|x| lo.is_subset(*x) && x.is_subset(hi))
            .collect())
    }

    /// Reversed order: lower ideals of the opposite poset. The element for
    /// `x` in `self` is its complement.
    pub fn opposite(&self) -> DistLattice {
        let base = self.base.opposite();
        let full = base.full();
        let mut ideals: Vec<Subset> = self.ideals.iter().map(|x| full.difference(*x)).collect();
        ideals.sort_by(|a, b| a.canonical_cmp(*b));
        Self::from_parts(base, ideals)
    }

    /// Exhaustive check of `x & (y | z) == (x & y) | (x & z)` using lattice
    /// membership for closure.
    pub fn is_distributive(&self) -> bool {
        let els = &self.ideals;
        els.iter().all(|&x| {
            els.iter().all(|&y| {
                self.contains(x.union(y))
                    && self.contains(x.intersection(y))
                    && els.iter().all(|&z| {
                        x.intersection(y.union(z))
                            == x.intersection(y).union(x.intersection(z))
                    })
            })
        })
    }

    /// Covering pairs of lattice elements (by position).
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, &x) in self.ideals.iter().enumerate() {
            for (b, &y) in self.ideals.iter().enumerate() {
                if x.is_subset(y) && y.len() == x.len() + 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Runs both Birkhoff round trips.
    pub fn verify_birkhoff(&self) -> BirkhoffReport {
        let jp = self.join_primes();
        // A: s -> principal ideal of s is an isomorphism base -> JP(L).
        let map: Option<Vec<usize>> = (0..self.base.len())
            .map(|s| {
                let principal = self.base.down_set(s);
                jp.elements.iter().position(|&e| e == principal)
            })
            .collect();
        let poset_round_trip = map
            .as_ref()
            .is_some_and(|m| self.base.is_isomorphism(&jp.poset, m));

        // B: I(JP(L)) -> L, I -> union of the join-primes in I.
        let rebuilt = DistLattice::from_poset_with_limit(jp.poset.clone(), DEFAULT_IDEAL_LIMIT);
        let lattice_round_trip = match rebuilt {
            Ok(rebuilt) if rebuilt.len() == self.len() => {
                let image: Vec<Subset> = rebuilt
                    .ideals
                    .iter()
                    .map(|ideal| {
                        ideal
                            .iter()
                            .fold(Subset::EMPTY, |acc, k| acc.union(jp.elements[k]))
                    })
                    .collect();
                let onto = image.iter().all(|x| self.contains(*x))
                    && image.iter().collect::<std::collections::HashSet<_>>().len() == self.len();
                onto && rebuilt.ideals.iter().enumerate().all(|(a, &x)| {
                    rebuilt
                        .ideals
                        .iter()
                        .enumerate()
                        .all(|(b, &y)| x.is_subset(y) == image[a].is_subset(image[b]))
                })
            }
            _ => false,
        };
        BirkhoffReport {
            poset_round_trip,
            lattice_round_trip,
            join_prime_count: jp.elements.len(),
            element_count: self.len(),
        }
    }
}
