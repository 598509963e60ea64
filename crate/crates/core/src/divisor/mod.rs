//! Exact intersection theory on the exceptional lattice of a blow-up forest.
//!
//! Two bases are used. The total transforms `e_i` are pairwise orthogonal
//! with `e_i^2 = -1`. The strict transform of node `j` is
//! `E_j = e_j - sum { e_k : k proximate to j }`, which is column `j` of the
//! proximity matrix `P`. Hence a strict coefficient vector `c` has total
//! coordinates `P c`, and the intersection matrix of strict transforms is
//! `-P^T P`. `P` is unitriangular, so every change of basis is integral.

mod generator;
mod matrix;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{BlowupForest, Contraction};
use crate::poset::Subset;
use crate::scalar::Scalar;

pub use generator::{
    FormalGenerator, IdentityFailure, IdentityReport, Summand, Support, Variant,
    DEFAULT_IDENTITY_LIMIT,
};
pub use matrix::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Strict,
    Total,
}

impl std::str::FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Basis::Strict),
            "total" => Ok(Basis::Total),
            other => Err(Error::Parse(format!("unknown basis `{other}`"))),
        }
    }
}

/// An integer combination of exceptional classes in one of the two bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass<T> {
    pub coeffs: Vec<T>,
    pub basis: Basis,
}

impl<T: Scalar> DivisorClass<T> {
    pub fn zero(n: usize, basis: Basis) -> Self {
        DivisorClass {
            coeffs: vec![T::zero(); n],
            basis,
        }
    }

    pub fn strict(coeffs: Vec<T>) -> Self {
        DivisorClass {
            coeffs,
            basis: Basis::Strict,
        }
    }

    pub fn total(coeffs: Vec<T>) -> Self {
        DivisorClass {
            coeffs,
            basis: Basis::Total,
        }
    }

    /// Indicator vector of `s` in `basis`.
    pub fn indicator(n: usize, s: Subset, basis: Basis) -> Self {
        DivisorClass {
            coeffs: (0..n)
                .map(|i| if s.contains(i) { T::one() } else { T::zero() })
                .collect(),
            basis,
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(T::is_zero)
    }

    /// All coefficients non-negative.
    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Nodes with a nonzero coefficient.
    pub fn support(&self) -> Subset {
        Subset::from_indices((0..self.len()).filter(|&i| !self.coeffs[i].is_zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.basis, other.basis, "adding classes in different bases");
        DivisorClass {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            basis: self.basis,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, k: &T) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|a| a.clone() * k.clone()).collect(),
            basis: self.basis,
        }
    }

    /// Text form over component labels, e.g. `E[p1]+2*E[p2]`.
    pub fn display<'a>(&'a self, forest: &'a BlowupForest) -> DisplayClass<'a, T> {
        DisplayClass {
            class: self,
            forest,
        }
    }

    /// Parses a signed integer combination of `E[id]` terms, e.g.
    /// `-2*E[p1]-3*E[p2]`. `0` denotes the zero class.
    pub fn parse(text: &str, forest: &BlowupForest, basis: Basis) -> Result<Self> {
        let mut coeffs = vec![T::zero(); forest.len()];
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty divisor expression".into()));
        }
        if s == "0" {
            return Ok(DivisorClass { coeffs, basis });
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut negative = false;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                negative = bytes[pos] == b'-';
                pos += 1;
            } else if pos != 0 {
                return Err(Error::Parse(format!("expected `+` or `-` at offset {pos} in `{s}`")));
            }
            let digits_start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let mut coeff = if pos > digits_start {
                let c = s[digits_start..pos]
                    .parse::<T>()
                    .map_err(|_| Error::Parse(format!("bad coefficient in `{s}`")))?;
                if pos < bytes.len() && bytes[pos] == b'*' {
                    pos += 1;
                } else if pos < bytes.len() {
                    return Err(Error::Parse(format!("expected `*` after coefficient in `{s}`")));
                } else {
                    return Err(Error::Parse(format!("constant term in `{s}`")));
                }
                c
            } else {
                T::one()
            };
            if !s[pos..].starts_with("E[") {
                return Err(Error::Parse(format!("expected `E[` at offset {pos} in `{s}`")));
            }
            let close = s[pos..]
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unclosed `E[` in `{s}`")))?;
            let id = &s[pos + 2..pos + close];
            pos += close + 1;
            let i = forest.index_of(id)?;
            if negative {
                coeff = -coeff;
            }
            coeffs[i] = coeffs[i].clone() + coeff;
        }
        Ok(DivisorClass { coeffs, basis })
    }
}

pub struct DisplayClass<'a, T> {
    class: &'a DivisorClass<T>,
    forest: &'a BlowupForest,
}

impl<T: Scalar> fmt::Display for DisplayClass<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.class.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", self.forest.component_label(i))?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// The exceptional lattice of a forest with its cached matrices.
#[derive(Clone, Debug)]
pub struct ExceptionalLattice<T> {
    forest: BlowupForest,
    proximity: IntMatrix<T>,
    intersection: IntMatrix<T>,
}

/// One ample descent across a single blow-down.
#[derive(Clone, Debug)]
pub struct Descent<T> {
    /// Node id of the contracted `(-1)`-curve.
    pub component: String,
    /// `D . E_leaf` before the step.
    pub k: T,
    /// `D + k E_leaf`, strict basis on the current forest.
    pub lifted: DivisorClass<T>,
    /// Forest after contracting the leaf.
    pub residual: BlowupForest,
    /// Pushforward of `lifted`, strict basis on `residual`.
    pub pushed: DivisorClass<T>,
}

/// One step of a Danilov factorization, with the ampleness check made after
/// the step.
#[derive(Clone, Debug)]
pub struct BlowDownStep<T> {
    pub component: String,
    pub k: T,
    pub pushed: DivisorClass<T>,
    pub ample_after: bool,
}

impl<T: Scalar> ExceptionalLattice<T> {
    pub fn new(forest: &BlowupForest) -> Self {
        let proximity = proximity_matrix(forest);
        let intersection = proximity.transpose().mul(&proximity).neg();
        ExceptionalLattice {
            forest: forest.clone(),
            proximity,
            intersection,
        }
    }

    pub fn forest(&self) -> &BlowupForest {
        &self.forest
    }

    pub fn len(&self) -> usize {
        self.forest.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forest.is_empty()
    }

    pub fn proximity_matrix(&self) -> &IntMatrix<T> {
        &self.proximity
    }

    /// Pairing of strict transforms, `-P^T P`.
    pub fn intersection_matrix(&self) -> &IntMatrix<T> {
        &self.intersection
    }

    fn check_len(&self, d: &DivisorClass<T>) -> Result<()> {
        if d.len() == self.len() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.len(),
                got: d.len(),
            })
        }
    }

    pub fn to_total(&self, d: &DivisorClass<T>) -> Result<DivisorClass<T>> {
        self.check_len(d)?;
        Ok(match d.basis {
            Basis::Total => d.clone(),
            Basis::Strict => DivisorClass::total(self.proximity.mul_vec(&d.coeffs)),
        })
    }

    pub fn to_strict(&self, d: &DivisorClass<T>) -> Result<DivisorClass<T>> {
        self.check_len(d)?;
        Ok(match d.basis {
            Basis::Strict => d.clone(),
            Basis::Total => {
                // Forward substitution with the unit lower triangular P.
                let n = self.len();
                let mut c: Vec<T> = Vec::with_capacity(n);
                for i in 0..n {
                    let mut v = d.coeffs[i].clone();
                    for (j, cj) in c.iter().enumerate() {
                        let p = self.proximity.get(i, j);
                        if !p.is_zero() {
                            v = v - p.clone() * cj.clone();
                        }
                    }
                    c.push(v);
                }
                DivisorClass::strict(c)
            }
        })
    }

    /// Intersection number of two classes.
    pub fn pairing(&self, a: &DivisorClass<T>, b: &DivisorClass<T>) -> Result<T> {
        let a = self.to_total(a)?;
        let b = self.to_total(b)?;
        Ok(a.coeffs
            .iter()
            .zip(&b.coeffs)
            .fold(T::zero(), |acc, (x, y)| acc - x.clone() * y.clone()))
    }

    /// `D . E_j` for every strict component `j`.
    pub fn component_pairings(&self, d: &DivisorClass<T>) -> Result<Vec<T>> {
        Ok(match d.basis {
            Basis::Strict => {
                self.check_len(d)?;
                self.intersection.mul_vec(&d.coeffs)
            }
            Basis::Total => {
                self.check_len(d)?;
                // -(P^T t)_j
                (0..self.len())
                    .map(|j| {
                        (0..self.len()).fold(T::zero(), |acc, k| {
                            acc - self.proximity.get(k, j).clone() * d.coeffs[k].clone()
                        })
                    })
                    .collect()
            }
        })
    }

    /// Discrepancy divisor `D_g`: the sum of the total transforms of the
    /// contracted components, in the strict basis.
    pub fn relative_canonical(&self, g: &Contraction<'_>) -> Result<DivisorClass<T>> {
        self.check_contraction(g)?;
        self.to_strict(&DivisorClass::indicator(self.len(), g.contracted(), Basis::Total))
    }

    /// `D_g` for `g` given by its contracted node set.
    pub fn discrepancy(&self, contracted: Subset) -> Result<DivisorClass<T>> {
        let g = Contraction::new(&self.forest, contracted)?;
        self.relative_canonical(&g)
    }

    fn check_contraction(&self, g: &Contraction<'_>) -> Result<()> {
        if std::ptr::eq(g.forest(), &self.forest) || *g.forest() == self.forest {
            Ok(())
        } else {
            Err(Error::ForestMismatch)
        }
    }

    /// Numerical criterion: `D . E_i > 0` for every contracted `i`.
    pub fn is_relatively_ample(&self, g: &Contraction<'_>, d: &DivisorClass<T>) -> Result<bool> {
        self.check_contraction(g)?;
        let pairings = self.component_pairings(d)?;
        Ok(g.contracted().iter().all(|i| pairings[i].is_positive()))
    }

    /// `nu_y = sum of a_j` over the tree rooted at `y`, for `L = O(-sum a_j E_j)`.
    pub fn multiplicity(&self, root: &str, a: &[T]) -> Result<T> {
        let r = self
            .forest
            .index_of(root)
            .map_err(|_| Error::UnknownRoot(root.to_owned()))?;
        if self.forest.parent(r).is_some() {
            return Err(Error::UnknownRoot(root.to_owned()));
        }
        if a.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got: a.len(),
            });
        }
        Ok(self
            .forest
            .descendants(r)
            .iter()
            .fold(T::zero(), |acc, j| acc + a[j].clone()))
    }

    /// Pushes a class forward along the contraction of `contracted`:
    /// delete those coordinates in the total basis.
    pub fn pushforward(
        &self,
        contracted: Subset,
        d: &DivisorClass<T>,
        residual: &ExceptionalLattice<T>,
    ) -> Result<DivisorClass<T>> {
        let t = self.to_total(d)?;
        let kept: Vec<T> = (0..self.len())
            .filter(|&i| !contracted.contains(i))
            .map(|i| t.coeffs[i].clone())
            .collect();
        residual.to_strict(&DivisorClass::total(kept))
    }

    /// Pulls a class on the residual forest back along the contraction of
    /// `contracted`: total transforms pull back to total transforms.
    pub fn pullback(
        &self,
        contracted: Subset,
        residual: &ExceptionalLattice<T>,
        d: &DivisorClass<T>,
    ) -> Result<DivisorClass<T>> {
        let t = residual.to_total(d)?;
        let mut coeffs = vec![T::zero(); self.len()];
        let kept = self.forest.all().difference(contracted);
        if kept.len() != residual.len() {
            return Err(Error::Dimension {
                expected: kept.len(),
                got: residual.len(),
            });
        }
        for (k, i) in kept.iter().enumerate() {
            coeffs[i] = t.coeffs[k].clone();
        }
        self.to_strict(&DivisorClass::total(coeffs))
    }

    /// Ample descent across the blow-down of `leaf`, a minimal component of
    /// `g`: `D' = D + (D . E_leaf) E_leaf` is trivial on `E_leaf` and its
    /// pushforward is ample for the rest of `g`.
    pub fn descend_ample(
        &self,
        g: &Contraction<'_>,
        d: &DivisorClass<T>,
        leaf: &str,
    ) -> Result<Descent<T>> {
        self.check_contraction(g)?;
        let l = self.forest.index_of(leaf)?;
        if !g.contracted().contains(l) || self.forest.descendants(l) != Subset::singleton(l) {
            return Err(Error::NotMinimal(leaf.to_owned()));
        }
        let d = self.to_strict(d)?;
        if !self.is_relatively_ample(g, &d)? {
            return Err(Error::NotAmple(format!(
                "{} is not ample for the contraction of {:?}",
                d.display(&self.forest),
                g.labels()
            )));
        }
        let k = self.component_pairings(&d)?[l].clone();
        let mut lifted = d.clone();
        lifted.coeffs[l] = lifted.coeffs[l].clone() + k.clone();
        let residual_forest = self.forest.induced(self.forest.all().without(l));
        let residual = ExceptionalLattice::new(&residual_forest);
        let pushed = self.pushforward(Subset::singleton(l), &lifted, &residual)?;
        Ok(Descent {
            component: self.forest.id(l).to_owned(),
            k,
            lifted,
            residual: residual_forest,
            pushed,
        })
    }

    /// Contracts every component of `f`, one `(-1)`-curve at a time,
    /// transporting the ample class `d` along.
    pub fn danilov_factorize(&self, d: &DivisorClass<T>) -> Result<Vec<BlowDownStep<T>>> {
        DanilovPlan::new(&self.forest).run(d)
    }

    /// `M = -N^{-1} = P^{-1} P^{-T}`; entrywise non-negative.
    fn inverse_gram(&self) -> IntMatrix<T> {
        let n = self.len();
        let cols: Vec<Vec<T>> = (0..n)
            .map(|i| {
                self.to_strict(&DivisorClass::indicator(n, Subset::singleton(i), Basis::Total))
                    .expect("dimension matches")
                    .coeffs
            })
            .collect();
        // cols[i] = P^{-1} e_i, i.e. column i of Q = P^{-1}.
        let q = IntMatrix::from_rows(cols).transpose();
        q.mul(&q.transpose())
    }

    /// Every `f`-ample class whose strict coefficients lie in
    /// `[-bound, bound]`, in lexicographic order of `(D . E_1, ..., D . E_n)`.
    ///
    /// `N` is unimodular, so ample classes correspond one-to-one to positive
    /// integer pairing vectors `v`, with `D = N^{-1} v`.
    pub fn ample_seeds(&self, bound: &T) -> Vec<DivisorClass<T>> {
        let mut out = Vec::new();
        self.for_each_ample_seed(bound, |d| {
            out.push(d.clone());
            true
        });
        out
    }

    /// Visits ample seeds in the order of [`ExceptionalLattice::ample_seeds`]
    /// until `visit` returns `false`.
    pub fn for_each_ample_seed<F>(&self, bound: &T, mut visit: F)
    where
        F: FnMut(&DivisorClass<T>) -> bool,
    {
        let n = self.len();
        let m = self.inverse_gram();
        // partial[k] = sum_i M[k][i] v_i with unassigned v_i counted as 1.
        let mut partial: Vec<T> = (0..n)
            .map(|k| (0..n).fold(T::zero(), |acc, i| acc + m.get(k, i).clone()))
            .collect();
        let mut v = vec![T::one(); n];
        fn rec<T: Scalar, F: FnMut(&DivisorClass<T>) -> bool>(
            i: usize,
            m: &IntMatrix<T>,
            bound: &T,
            v: &mut Vec<T>,
            partial: &mut Vec<T>,
            visit: &mut F,
        ) -> bool {
            let n = v.len();
            if partial.iter().any(|p| p > bound) {
                return true;
            }
            if i == n {
                let d = DivisorClass::strict(partial.iter().map(|p| -p.clone()).collect());
                return visit(&d);
            }
            loop {
                if !rec(i + 1, m, bound, v, partial, visit) {
                    return false;
                }
                // raise v_i by one
                v[i] = v[i].clone() + T::one();
                let mut over = false;
                for k in 0..n {
                    partial[k] = partial[k].clone() + m.get(k, i).clone();
                    over |= partial[k] > *bound;
                }
                if over {
                    break;
                }
            }
            // restore v_i to 1
            let extra = v[i].clone() - T::one();
            for k in 0..n {
                partial[k] = partial[k].clone() - m.get(k, i).clone() * extra.clone();
            }
            v[i] = T::one();
            true
        }
        rec(0, &m, bound, &mut v, &mut partial, &mut visit);
    }

    /// The default seed search box: `4 n`, widened when needed so that it
    /// contains the smallest ample class `-M (1, ..., 1)`.
    pub fn default_seed_bound(&self) -> T {
        let m = self.inverse_gram();
        let n = self.len();
        (0..n)
            .map(|k| (0..n).fold(T::zero(), |acc, i| acc + m.get(k, i).clone()))
            .fold(T::from_int(4 * n as i64), |acc, x| acc.max(x))
    }

    /// First ample seed in the default box.
    pub fn find_ample_seed(&self) -> Option<DivisorClass<T>> {
        let mut found = None;
        self.for_each_ample_seed(&self.default_seed_bound(), |d| {
            found = Some(d.clone());
            false
        });
        found
    }

    /// First ample seed in the box whose multiplicity at `root` strictly
    /// exceeds the multiplicity at every other root.
    pub fn ample_seed_with_dominant_root(
        &self,
        root: &str,
        bound: &T,
    ) -> Result<Option<DivisorClass<T>>> {
        let r = self
            .forest
            .index_of(root)
            .map_err(|_| Error::UnknownRoot(root.to_owned()))?;
        if self.forest.parent(r).is_some() {
            return Err(Error::UnknownRoot(root.to_owned()));
        }
        let roots: Vec<String> = self.forest.danilov_center().iter().map(|s| s.to_string()).collect();
        let mut found = None;
        self.for_each_ample_seed(bound, |d| {
            let a: Vec<T> = d.coeffs.iter().map(|c| -c.clone()).collect();
            let mine = self.multiplicity(root, &a).expect("root checked");
            let dominant = roots
                .iter()
                .filter(|y| y.as_str() != root)
                .all(|y| self.multiplicity(y, &a).expect("roots are roots") < mine);
            if dominant {
                found = Some(d.clone());
                false
            } else {
                true
            }
        });
        Ok(found)
    }
}

/// The proximity matrix: `P[i][i] = 1`, `P[i][j] = -1` iff `i` is
/// proximate to `j`.
pub fn proximity_matrix<T: Scalar>(forest: &BlowupForest) -> IntMatrix<T> {
    let mut p = IntMatrix::identity(forest.len());
    for i in 0..forest.len() {
        for j in forest.proximate_targets(i) {
            p.set(i, j, -T::one());
        }
    }
    p
}

/// A Danilov factorization schedule for one forest.
///
/// The order of blow-downs does not depend on the ample class: at each step
/// the current leaf with the smallest id is contracted. The plan caches the
/// residual lattices so that many classes can be factored cheaply.
#[derive(Clone, Debug)]
pub struct DanilovPlan<T> {
    stages: Vec<(ExceptionalLattice<T>, usize)>,
    last: ExceptionalLattice<T>,
}

impl<T: Scalar> DanilovPlan<T> {
    pub fn new(forest: &BlowupForest) -> Self {
        let mut stages = Vec::with_capacity(forest.len());
        let mut current = forest.clone();
        while !current.is_empty() {
            let leaf = (0..current.len())
                .filter(|&i| current.children(i).is_empty())
                .min_by(|&a, &b| current.id(a).cmp(current.id(b)))
                .expect("a nonempty forest has a leaf");
            let next = current.induced(current.all().without(leaf));
            stages.push((ExceptionalLattice::new(&current), leaf));
            current = next;
        }
        DanilovPlan {
            stages,
            last: ExceptionalLattice::new(&current),
        }
    }

    /// Component ids in contraction order.
    pub fn order(&self) -> Vec<&str> {
        self.stages.iter().map(|(l, i)| l.forest().id(*i)).collect()
    }

    pub fn run(&self, d: &DivisorClass<T>) -> Result<Vec<BlowDownStep<T>>> {
        let Some((first, _)) = self.stages.first() else {
            self.last.check_len(d)?;
            return Ok(Vec::new());
        };
        let mut current = first.to_strict(d)?;
        if !first.is_relatively_ample(&first.forest.full(), &current)? {
            return Err(Error::NotAmple(format!(
                "{} is not ample for f",
                current.display(first.forest())
            )));
        }
        let mut steps = Vec::with_capacity(self.stages.len());
        for (s, (lattice, leaf)) in self.stages.iter().enumerate() {
            let k = lattice.component_pairings(&current)?[*leaf].clone();
            if !k.is_positive() {
                return Err(Error::NotAmple(format!(
                    "pairing with {} is {k}",
                    lattice.forest.component_label(*leaf)
                )));
            }
            let mut lifted = current;
            lifted.coeffs[*leaf] = lifted.coeffs[*leaf].clone() + k.clone();
            let next = self.stages.get(s + 1).map_or(&self.last, |(l, _)| l);
            let pushed = lattice.pushforward(Subset::singleton(*leaf), &lifted, next)?;
            let ample_after = next.is_relatively_ample(&next.forest.full(), &pushed)?;
            if !ample_after {
                return Err(Error::NotAmple(format!(
                    "descent across {} lost ampleness",
                    lattice.forest.component_label(*leaf)
                )));
            }
            steps.push(BlowDownStep {
                component: lattice.forest.id(*leaf).to_owned(),
                k,
                pushed: pushed.clone(),
                ample_after,
            });
            current = pushed;
        }
        Ok(steps)
    }
}
