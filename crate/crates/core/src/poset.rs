//! Finite posets, lower ideals, interval-closed subsets and linear extensions.
//!
//! Elements are addressed by their index in the label list. Subsets are
//! stored as 64-bit masks, which caps a poset at [`MAX_ELEMENTS`] elements;
//! exhaustive enumerations are bounded far below that anyway.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on the number of elements of a [`Poset`].
pub const MAX_ELEMENTS: usize = 64;
/// Default bound for [`Poset::lower_ideals`].
pub const DEFAULT_IDEAL_LIMIT: usize = 20;
/// Default bound for [`Poset::linear_extensions`].
pub const DEFAULT_EXTENSION_LIMIT: usize = 9;

/// A set of element indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Cardinality first, then lexicographic on the increasing index list.
    pub fn canonical_cmp(self, other: Subset) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A downward-closed subset of some poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LowerIdeal(Subset);

impl LowerIdeal {
    pub fn members(self) -> Subset {
        self.0
    }
}

/// A subset closed under taking elements between two of its members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntervalClosedSet(Subset);

impl IntervalClosedSet {
    pub fn members(self) -> Subset {
        self.0
    }
}

/// A finite partially ordered set with labelled elements.
///
/// The stored relation is the reflexive-transitive closure of the generating
/// pairs passed to [`Poset::new`]; the cover relation is derived from it.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    /// `down[i]` = `{ j | j <= i }`.
    down: Vec<Subset>,
    /// `up[i]` = `{ j | i <= j }`.
    up: Vec<Subset>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<_> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

impl Poset {
    /// Builds the poset generated by `pairs` (each `(a, b)` meaning `a <= b`).
    pub fn new<S, T>(elements: &[S], pairs: &[(T, T)]) -> Result<Self>
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
        let index = index_labels(&labels)?;
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let a = lookup(&index, a.as_ref())?;
            let b = lookup(&index, b.as_ref())?;
            idx_pairs.push((a, b));
        }
        Self::from_index_pairs(labels, &idx_pairs)
    }

    /// Like [`Poset::new`] with pairs given by element index.
    pub fn from_index_pairs(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::SizeLimit {
                what: "poset",
                size: n,
                limit: MAX_ELEMENTS,
            });
        }
        let index = index_labels(&labels)?;
        // up[i] starts as {i} plus direct successors, then Warshall.
        let mut up: Vec<Subset> = (0..n).map(Subset::singleton).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("#{}", a.max(b))));
            }
            up[a] = up[a].with(b);
        }
        for k in 0..n {
            for i in 0..n {
                if up[i].contains(k) {
                    up[i] = up[i].union(up[k]);
                }
            }
        }
        let mut down = vec![Subset::EMPTY; n];
        for (i, u) in up.iter().enumerate() {
            for j in u.iter() {
                down[j] = down[j].with(i);
            }
        }
        for i in 0..n {
            let both = up[i].intersection(down[i]).without(i);
            if let Some(j) = both.iter().next() {
                return Err(Error::Cycle(labels[i].clone(), labels[j].clone()));
            }
        }
        Ok(Poset {
            labels,
            index,
            down,
            up,
        })
    }

    pub fn antichain<S: AsRef<str>>(elements: &[S]) -> Result<Self> {
        Self::new::<S, &str>(elements, &[])
    }

    /// Chain `elements[0] < elements[1] < ...`.
    pub fn chain<S: AsRef<str>>(elements: &[S]) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = elements
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        Self::new(elements, &pairs)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        lookup(&self.index, label)
    }

    /// All elements.
    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// `{ j | j <= i }`.
    pub fn down_set(&self, i: usize) -> Subset {
        self.down[i]
    }

    /// `{ j | i <= j }`.
    pub fn up_set(&self, i: usize) -> Subset {
        self.up[i]
    }

    /// Cover (Hasse) pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up[a].without(a).iter() {
                let between = self.up[a].intersection(self.down[b]).without(a).without(b);
                if between.is_empty() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.up[a].without(a).iter().map(move |b| (a, b)))
            .collect()
    }

    /// Maps labels to a subset, failing on unknown labels.
    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        labels
            .iter()
            .try_fold(Subset::EMPTY, |s, l| Ok(s.with(self.index_of(l.as_ref())?)))
    }

    pub fn subset_labels(&self, s: Subset) -> Vec<&str> {
        s.iter().map(|i| self.labels[i].as_str()).collect()
    }

    fn check_subset(&self, s: Subset) -> Result<()> {
        let outside = s.difference(self.full());
        match outside.iter().next() {
            Some(i) => Err(Error::UnknownElement(format!("#{i}"))),
            None => Ok(()),
        }
    }

    /// Whether `s` is downward closed.
    pub fn is_lower_ideal(&self, s: Subset) -> Result<bool> {
        self.check_subset(s)?;
        Ok(s.iter().all(|i| self.down[i].is_subset(s)))
    }

    /// Wraps `s` as a [`LowerIdeal`] after checking it.
    pub fn lower_ideal(&self, s: Subset) -> Result<LowerIdeal> {
        if self.is_lower_ideal(s)? {
            Ok(LowerIdeal(s))
        } else {
            let bad = s
                .iter()
                .find(|&i| !self.down[i].is_subset(s))
                .expect("some member violates closure");
            Err(Error::NotLowerIdeal(self.labels[bad].clone()))
        }
    }

    /// `{ j | j <= i }` as an ideal.
    pub fn principal_ideal(&self, i: usize) -> Result<LowerIdeal> {
        if i >= self.len() {
            return Err(Error::UnknownElement(format!("#{i}")));
        }
        Ok(LowerIdeal(self.down[i]))
    }

    /// Every lower ideal exactly once, ordered by cardinality then
    /// lexicographically on the element list.
    pub fn lower_ideals(&self) -> Result<Vec<LowerIdeal>> {
        self.lower_ideals_with_limit(DEFAULT_IDEAL_LIMIT)
    }

    pub fn lower_ideals_with_limit(&self, limit: usize) -> Result<Vec<LowerIdeal>> {
        if self.len() > limit {
            return Err(Error::SizeLimit {
                what: "poset for ideal enumeration",
                size: self.len(),
                limit,
            });
        }
        // Decide membership along a linear extension: an element may join
        // only when all of its strict predecessors already have.
        let order = self.first_linear_extension();
        let mut out = Vec::new();
        let mut stack = vec![(0usize, Subset::EMPTY)];
        while let Some((depth, current)) = stack.pop() {
            if depth == order.len() {
                out.push(LowerIdeal(current));
                continue;
            }
            let i = order[depth];
            stack.push((depth + 1, current));
            if self.down[i].without(i).is_subset(current) {
                stack.push((depth + 1, current.with(i)));
            }
        }
        out.sort_by(|a, b| a.0.canonical_cmp(b.0));
        Ok(out)
    }

    /// Whether `t1, t2 in T` and `t1 <= s <= t2` force `s in T`.
    pub fn is_interval_closed(&self, t: Subset) -> Result<bool> {
        self.check_subset(t)?;
        Ok(t.iter().all(|a| {
            t.iter()
                .all(|b| self.up[a].intersection(self.down[b]).is_subset(t))
        }))
    }

    pub fn interval_closed(&self, t: Subset) -> Result<IntervalClosedSet> {
        if self.is_interval_closed(t)? {
            Ok(IntervalClosedSet(t))
        } else {
            Err(Error::NotIntervalClosed)
        }
    }

    /// `(I_T, I_{<T})`: the ideal generated by `T` and the same minus `T`.
    pub fn ideal_hull(&self, t: Subset) -> Result<(LowerIdeal, LowerIdeal)> {
        let t = self.interval_closed(t)?.members();
        let hull = t
            .iter()
            .fold(Subset::EMPTY, |acc, i| acc.union(self.down[i]));
        Ok((LowerIdeal(hull), LowerIdeal(hull.difference(t))))
    }

    /// Minimal elements of `s`, relative to the induced order.
    pub fn minimal_in(&self, s: Subset) -> Subset {
        Subset::from_indices(
            s.iter()
                .filter(|&i| self.down[i].without(i).intersection(s).is_empty()),
        )
    }

    /// Maximal elements of `s`, relative to the induced order.
    pub fn maximal_in(&self, s: Subset) -> Subset {
        Subset::from_indices(
            s.iter()
                .filter(|&i| self.up[i].without(i).intersection(s).is_empty()),
        )
    }

    /// The linear extension that always picks the smallest available index.
    pub fn first_linear_extension(&self) -> Vec<usize> {
        let mut placed = Subset::EMPTY;
        let mut out = Vec::with_capacity(self.len());
        while out.len() < self.len() {
            let next = (0..self.len())
                .find(|&i| !placed.contains(i) && self.down[i].without(i).is_subset(placed))
                .expect("a finite poset always has a minimal element");
            placed = placed.with(next);
            out.push(next);
        }
        out
    }

    /// All total orders refining the partial order, lexicographic by index.
    pub fn linear_extensions(&self) -> Result<Vec<Vec<usize>>> {
        self.linear_extensions_with_limit(DEFAULT_EXTENSION_LIMIT)
    }

    pub fn linear_extensions_with_limit(&self, limit: usize) -> Result<Vec<Vec<usize>>> {
        if self.len() > limit {
            return Err(Error::SizeLimit {
                what: "poset for linear extensions",
                size: self.len(),
                limit,
            });
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.len());
        self.extend_rec(Subset::EMPTY, &mut prefix, &mut out);
        Ok(out)
    }

    fn extend_rec(&self, placed: Subset, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == self.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..self.len() {
            if !placed.contains(i) && self.down[i].without(i).is_subset(placed) {
                prefix.push(i);
                self.extend_rec(placed.with(i), prefix, out);
                prefix.pop();
            }
        }
    }

    /// Induced sub-poset on `s`; also returns the original index of each
    /// new element.
    pub fn restrict(&self, s: Subset) -> (Poset, Vec<usize>) {
        let kept: Vec<usize> = s.iter().filter(|&i| i < self.len()).collect();
        let labels = kept.iter().map(|&i| self.labels[i].clone()).collect();
        let mut pairs = Vec::new();
        for (a, &i) in kept.iter().enumerate() {
            for (b, &j) in kept.iter().enumerate() {
                if i != j && self.leq(i, j) {
                    pairs.push((a, b));
                }
            }
        }
        let poset = Poset::from_index_pairs(labels, &pairs).expect("restriction of a poset");
        (poset, kept)
    }

    /// Same elements, reversed order.
    pub fn opposite(&self) -> Poset {
        Poset {
            labels: self.labels.clone(),
            index: self.index.clone(),
            down: self.up.clone(),
            up: self.down.clone(),
        }
    }

    /// Whether `map` (index in `self` to index in `other`) is an order
    /// isomorphism.
    pub fn is_isomorphism(&self, other: &Poset, map: &[usize]) -> bool {
        if self.len() != other.len() || map.len() != self.len() {
            return false;
        }
        let image = Subset::from_indices(map.iter().copied());
        if image != other.full() {
            return false;
        }
        (0..self.len())
            .all(|a| (0..self.len()).all(|b| self.leq(a, b) == other.leq(map[a], map[b])))
    }

    /// Label-respecting isomorphism test.
    pub fn same_order_by_labels(&self, other: &Poset) -> bool {
        let map: Option<Vec<usize>> = self
            .labels
            .iter()
            .map(|l| other.index.get(l).copied())
            .collect();
        map.is_some_and(|m| self.is_isomorphism(other, &m))
    }
}

fn index_labels(labels: &[String]) -> Result<BTreeMap<String, usize>> {
    let mut index = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

fn lookup(index: &BTreeMap<String, usize>, label: &str) -> Result<usize> {
    index
        .get(label)
        .copied()
        .ok_or_else(|| Error::UnknownElement(label.to_owned()))
}
