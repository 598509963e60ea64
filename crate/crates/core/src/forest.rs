//! Blow-up forests: a contraction `f: X -> Y` of a smooth surface written as
//! a sequence of point blow-ups.
//!
//! Node `q` with parent `p` is a point on the exceptional curve of `p`; a
//! root is a point of `Y`. Every non-root is proximate to its parent and may
//! carry one extra (satellite) proximity to a point its parent is itself
//! proximate to.
//!
//! The exceptional component `E(q)` must be contracted before `E(p)` whenever
//! `p` is an ancestor of `q`, so the order on components is reversed forest
//! ancestry and contractions through smooth surfaces are its lower ideals,
//! i.e. descendant-closed node sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::DistLattice;
use crate::poset::{Poset, Subset, DEFAULT_IDEAL_LIMIT, MAX_ELEMENTS};

/// JSON form of one node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDocument {
    pub id: String,
    #[serde(default)]
    pub parent: Option<String>,
    #[serde(default)]
    pub proximate_to: Vec<String>,
}

/// JSON form of a forest: `{"nodes": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForestDocument {
    pub nodes: Vec<NodeDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    id: String,
    parent: Option<usize>,
    satellite: Option<usize>,
}

/// A validated blow-up forest. Nodes are kept in blow-up order.
#[derive(Clone, PartialEq, Eq)]
pub struct BlowupForest {
    nodes: Vec<Node>,
    index: BTreeMap<String, usize>,
    /// Descendants including the node itself.
    below: Vec<Subset>,
}

impl fmt::Debug for BlowupForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(&self.to_document()).unwrap())
    }
}

impl BlowupForest {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ForestDocument =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &ForestDocument) -> Result<Self> {
        if doc.nodes.len() > MAX_ELEMENTS {
            return Err(Error::SizeLimit {
                what: "forest",
                size: doc.nodes.len(),
                limit: MAX_ELEMENTS,
            });
        }
        let mut index = BTreeMap::new();
        for (i, node) in doc.nodes.iter().enumerate() {
            if node.id.is_empty() {
                return Err(Error::Schema("node id must be non-empty".into()));
            }
            if index.insert(node.id.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(node.id.clone()));
            }
        }
        let find = |id: &str, ctx: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::Schema(format!("{ctx} refers to unknown node `{id}`")))
        };
        let mut parents = Vec::with_capacity(doc.nodes.len());
        for node in &doc.nodes {
            parents.push(match &node.parent {
                Some(p) => Some(find(p, &format!("parent of `{}`", node.id))?),
                None => None,
            });
        }
        // Cycles first, then blow-up order.
        for start in 0..parents.len() {
            let mut cur = start;
            for _ in 0..=parents.len() {
                match parents[cur] {
                    Some(p) if p == start => {
                        return Err(Error::Cycle(doc.nodes[start].id.clone(), doc.nodes[cur].id.clone()))
                    }
                    Some(p) => cur = p,
                    None => break,
                }
            }
        }
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= i {
                    return Err(Error::Schema(format!(
                        "parent `{}` must precede `{}`",
                        doc.nodes[p].id, doc.nodes[i].id
                    )));
                }
            }
        }
        let mut nodes: Vec<Node> = Vec::with_capacity(doc.nodes.len());
        for (i, node) in doc.nodes.iter().enumerate() {
            let invalid = |reason: String| Error::InvalidProximity {
                node: node.id.clone(),
                reason,
            };
            let satellite = match node.proximate_to.as_slice() {
                [] => None,
                [target] => {
                    let t = find(target, &format!("proximity of `{}`", node.id))?;
                    let parent = parents[i]
                        .ok_or_else(|| invalid("a root cannot be proximate to another point".into()))?;
                    if t == parent {
                        return Err(invalid("parent must not be repeated in proximate_to".into()));
                    }
                    let pnode: &Node = &nodes[parent];
                    if pnode.parent != Some(t) && pnode.satellite != Some(t) {
                        return Err(invalid(format!(
                            "parent `{}` is not proximate to `{}`",
                            pnode.id, target
                        )));
                    }
                    Some(t)
                }
                _ => return Err(invalid("at most one extra proximity is allowed".into())),
            };
            nodes.push(Node {
                id: node.id.clone(),
                parent: parents[i],
                satellite,
            });
        }
        Ok(Self::from_nodes(nodes, index))
    }

    fn from_nodes(nodes: Vec<Node>, index: BTreeMap<String, usize>) -> Self {
        let n = nodes.len();
        let mut below: Vec<Subset> = (0..n).map(Subset::singleton).collect();
        for i in (0..n).rev() {
            if let Some(p) = nodes[i].parent {
                below[p] = below[p].union(below[i]);
            }
        }
        BlowupForest {
            nodes,
            index,
            below,
        }
    }

    pub fn to_document(&self) -> ForestDocument {
        ForestDocument {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDocument {
                    id: n.id.clone(),
                    parent: n.parent.map(|p| self.nodes[p].id.clone()),
                    proximate_to: n.satellite.iter().map(|&s| self.nodes[s].id.clone()).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("forest documents serialize")
    }

    pub fn empty() -> Self {
        Self::from_nodes(Vec::new(), BTreeMap::new())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn id(&self, i: usize) -> &str {
        &self.nodes[i].id
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|n| n.id.as_str())
    }

    /// `E[id]`, the label of the exceptional component of node `i`.
    pub fn component_label(&self, i: usize) -> String {
        format!("E[{}]", self.nodes[i].id)
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        let id = strip_component(id);
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_owned()))
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.nodes[i].parent
    }

    pub fn satellite(&self, i: usize) -> Option<usize> {
        self.nodes[i].satellite
    }

    /// Points `i` is proximate to: its parent and its satellite target.
    pub fn proximate_targets(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.nodes[i].parent.into_iter().chain(self.nodes[i].satellite)
    }

    pub fn is_proximate(&self, i: usize, j: usize) -> bool {
        self.proximate_targets(i).any(|t| t == j)
    }

    pub fn roots(&self) -> Subset {
        Subset::from_indices((0..self.len()).filter(|&i| self.nodes[i].parent.is_none()))
    }

    pub fn children(&self, i: usize) -> Subset {
        Subset::from_indices((0..self.len()).filter(|&j| self.nodes[j].parent == Some(i)))
    }

    /// `i` and everything infinitely near to it.
    pub fn descendants(&self, i: usize) -> Subset {
        self.below[i]
    }

    /// Root of the tree containing `i`.
    pub fn root_of(&self, mut i: usize) -> usize {
        while let Some(p) = self.nodes[i].parent {
            i = p;
        }
        i
    }

    /// Resolves a list of node ids (or `E[id]` labels) to a node set.
    pub fn node_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<Subset> {
        ids.iter()
            .try_fold(Subset::EMPTY, |s, id| Ok(s.with(self.index_of(id.as_ref())?)))
    }

    /// Whether `s` is closed under descendants (a lower ideal of Irr).
    pub fn is_contractible(&self, s: Subset) -> bool {
        s.is_subset(self.all()) && s.iter().all(|i| self.below[i].is_subset(s))
    }

    /// Induced forest on `keep`. Nodes whose parent is dropped become roots;
    /// proximities to dropped nodes are forgotten.
    pub fn induced(&self, keep: Subset) -> BlowupForest {
        let kept: Vec<usize> = keep.iter().filter(|&i| i < self.len()).collect();
        let remap: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut nodes = Vec::with_capacity(kept.len());
        let mut index = BTreeMap::new();
        for (k, &i) in kept.iter().enumerate() {
            let n = &self.nodes[i];
            let parent = n.parent.and_then(|p| remap.get(&p).copied());
            let satellite = if parent.is_some() {
                n.satellite.and_then(|s| remap.get(&s).copied())
            } else {
                None
            };
            nodes.push(Node {
                id: n.id.clone(),
                parent,
                satellite,
            });
            index.insert(n.id.clone(), k);
        }
        Self::from_nodes(nodes, index)
    }

    /// Order on exceptional components: `E(q) <= E(p)` iff `p` is an
    /// ancestor of `q` or equal to it. Labels are node ids.
    pub fn irr_poset(&self) -> Poset {
        let labels = self.nodes.iter().map(|n| n.id.clone()).collect();
        let pairs: Vec<(usize, usize)> = (0..self.len())
            .filter_map(|i| self.nodes[i].parent.map(|p| (i, p)))
            .collect();
        Poset::from_index_pairs(labels, &pairs).expect("parent edges precede children")
    }

    /// Lattice of intermediate smooth contractions.
    pub fn dec_lattice(&self) -> Result<DistLattice> {
        DistLattice::from_poset_with_limit(self.irr_poset(), DEFAULT_IDEAL_LIMIT)
    }

    pub fn contraction(&self, contracted: Subset) -> Result<Contraction<'_>> {
        Contraction::new(self, contracted)
    }

    /// The identity of `X`.
    pub fn identity(&self) -> Contraction<'_> {
        Contraction {
            forest: self,
            contracted: Subset::EMPTY,
        }
    }

    /// `f` itself.
    pub fn full(&self) -> Contraction<'_> {
        Contraction {
            forest: self,
            contracted: self.all(),
        }
    }

    /// Contractions whose first blow-down has irreducible exceptional
    /// locus: one principal ideal per node, in node order.
    pub fn conn(&self) -> Vec<Contraction<'_>> {
        (0..self.len())
            .map(|i| Contraction {
                forest: self,
                contracted: self.below[i],
            })
            .collect()
    }

    /// Points of `Y` blown up by `f`.
    pub fn danilov_center(&self) -> Vec<&str> {
        self.roots().iter().map(|i| self.id(i)).collect()
    }

    /// Canonical string of the decorated shape; equal for isomorphic forests.
    pub fn shape_key(&self) -> String {
        fn key(f: &BlowupForest, i: usize) -> String {
            let depth = f.nodes[i]
                .satellite
                .map(|s| {
                    let mut d = 0;
                    let mut cur = i;
                    while cur != s {
                        cur = f.nodes[cur].parent.unwrap();
                        d += 1;
                    }
                    d
                })
                .unwrap_or(0);
            let mut kids: Vec<String> = f.children(i).iter().map(|c| key(f, c)).collect();
            kids.sort();
            format!("{}({})", depth, kids.join(""))
        }
        let mut trees: Vec<String> = self.roots().iter().map(|r| key(self, r)).collect();
        trees.sort();
        trees.join("")
    }
}

/// `E[p1]` and `p1` both name node `p1`.
fn strip_component(label: &str) -> &str {
    label
        .strip_prefix("E[")
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(label)
}

/// An intermediate contraction `X -> Z -> Y`, identified with its set of
/// contracted components.
#[derive(Clone, Copy, Debug)]
pub struct Contraction<'f> {
    forest: &'f BlowupForest,
    contracted: Subset,
}

impl PartialEq for Contraction<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.contracted == other.contracted
            && (std::ptr::eq(self.forest, other.forest) || self.forest == other.forest)
    }
}

impl Eq for Contraction<'_> {}

impl<'f> Contraction<'f> {
    pub fn new(forest: &'f BlowupForest, contracted: Subset) -> Result<Self> {
        if !contracted.is_subset(forest.all()) {
            return Err(Error::UnknownElement(format!("{contracted:?}")));
        }
        if let Some(bad) = contracted
            .iter()
            .find(|&i| !forest.below[i].is_subset(contracted))
        {
            return Err(Error::NotLowerIdeal(forest.id(bad).to_owned()));
        }
        Ok(Contraction { forest, contracted })
    }

    /// Parses a comma-separated list of ids or `E[id]` labels.
    pub fn parse(forest: &'f BlowupForest, text: &str) -> Result<Self> {
        let ids: Vec<&str> = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        Self::new(forest, forest.node_set(&ids)?)
    }

    pub fn forest(&self) -> &'f BlowupForest {
        self.forest
    }

    /// `Irr(g)`.
    pub fn contracted(&self) -> Subset {
        self.contracted
    }

    pub fn is_identity(&self) -> bool {
        self.contracted.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.contracted
            .iter()
            .map(|i| self.forest.component_label(i))
            .collect()
    }

    fn same_forest(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.forest, other.forest) || self.forest == other.forest {
            Ok(())
        } else {
            Err(Error::ForestMismatch)
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_forest(other)?;
        Ok(Contraction {
            forest: self.forest,
            contracted: self.contracted.union(other.contracted),
        })
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.same_forest(other)?;
        Ok(Contraction {
            forest: self.forest,
            contracted: self.contracted.intersection(other.contracted),
        })
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.contracted.is_subset(other.contracted)
    }

    /// `Conn(g)`: principal ideals contained in `Irr(g)`, by node.
    pub fn conn_nodes(&self) -> Subset {
        self.contracted
    }

    /// Splits `f` as `X -> Z -> Y`: the forest of `g` and the residual
    /// forest of `h` on the remaining nodes.
    pub fn factor(&self) -> (BlowupForest, BlowupForest) {
        let f = self.forest;
        (
            f.induced(self.contracted),
            f.induced(f.all().difference(self.contracted)),
        )
    }

    /// `gamma_g`: sends `g'` in `Conn(f) \ Conn(g)`, given by its generating
    /// node, to the principal ideal of the same node in the residual forest.
    ///
    /// Keys are node ids of `f`; values are contracted node sets of the
    /// residual forest returned by [`Contraction::factor`].
    pub fn gamma(&self, residual: &BlowupForest) -> BTreeMap<String, Subset> {
        let f = self.forest;
        let mut out = BTreeMap::new();
        for p in f.all().difference(self.contracted).iter() {
            let k = residual
                .index_of(f.id(p))
                .expect("residual forest keeps uncontracted nodes");
            out.insert(f.id(p).to_owned(), residual.descendants(k));
        }
        out
    }
}

/// Every forest on `n` nodes with every legal satellite decoration, one per
/// isomorphism class, with nodes named `p1, p2, ...` in blow-up order.
pub fn forest_shapes(n: usize) -> Vec<BlowupForest> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut nodes: Vec<Node> = Vec::with_capacity(n);
    shapes_rec(n, &mut nodes, &mut seen, &mut out);
    out
}

fn shapes_rec(
    n: usize,
    nodes: &mut Vec<Node>,
    seen: &mut BTreeSet<String>,
    out: &mut Vec<BlowupForest>,
) {
    if nodes.len() == n {
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, node)| (node.id.clone(), i))
            .collect();
        let forest = BlowupForest::from_nodes(nodes.clone(), index);
        if seen.insert(forest.shape_key()) {
            out.push(forest);
        }
        return;
    }
    let i = nodes.len();
    let id = format!("p{}", i + 1);
    let mut options: Vec<(Option<usize>, Option<usize>)> = vec![(None, None)];
    for p in 0..i {
        options.push((Some(p), None));
        let pn = &nodes[p];
        for t in pn.parent.into_iter().chain(pn.satellite) {
            options.push((Some(p), Some(t)));
        }
    }
    for (parent, satellite) in options {
        nodes.push(Node {
            id: id.clone(),
            parent,
            satellite,
        });
        shapes_rec(n, nodes, seen, out);
        nodes.pop();
    }
}

/// A random legal forest on `n` nodes named `p1, p2, ...`.
pub fn random_forest<R: rand::Rng>(rng: &mut R, n: usize) -> BlowupForest {
    let mut nodes: Vec<Node> = Vec::with_capacity(n);
    let mut index = BTreeMap::new();
    for i in 0..n {
        let parent = if i == 0 || rng.gen_bool(0.25) {
            None
        } else {
            Some(rng.gen_range(0..i))
        };
        let satellite = parent.and_then(|p| {
            let targets: Vec<usize> = nodes[p].parent.into_iter().chain(nodes[p].satellite).collect();
            if targets.is_empty() || rng.gen_bool(0.5) {
                None
            } else {
                Some(targets[rng.gen_range(0..targets.len())])
            }
        });
        let id = format!("p{}", i + 1);
        index.insert(id.clone(), i);
        nodes.push(Node {
            id,
            parent,
            satellite,
        });
    }
    BlowupForest::from_nodes(nodes, index)
}
