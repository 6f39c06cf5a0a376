//! Rooted pseudoDAGs, X-networks, phylogenetic networks and trees, MUL-trees.
//!
//! Every graph value is immutable from the outside: edit operations such as
//! [`subdivide`] and [`suppress`] return a new value. Vertex ids are dense
//! integer handles that are never reused inside one graph value, so maps that
//! cache ids (un-fold bookkeeping, X-set embeddings) never dangle.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::validate::{validate, Claim, ValidationReport};

/// Taxon label. Labels are opaque strings.
pub type Label = String;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A directed arc. `key` tells parallel arcs apart and is `0` unless the
/// graph carries more than one arc from `tail` to `head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub key: u32,
}

impl Arc {
    pub fn new(tail: VertexId, head: VertexId) -> Self {
        Arc { tail, head, key: 0 }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key == 0 {
            write!(f, "({},{})", self.tail, self.head)
        } else {
            write!(f, "({},{})#{}", self.tail, self.head, self.key)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown arc {0}")]
    UnknownArc(Arc),
    #[error("cannot suppress {vertex}: indegree {indegree}, outdegree {outdegree}")]
    SuppressDegree {
        vertex: VertexId,
        indegree: usize,
        outdegree: usize,
    },
    #[error("last common ancestor needs at least two leaves, got {0}")]
    LcaTooFew(usize),
    #[error("{0} is not a leaf")]
    NotALeaf(VertexId),
    #[error("graph is not a rooted tree")]
    NotATree,
    #[error("unknown taxon {0:?}")]
    UnknownLabel(Label),
    #[error("invalid {claim}: {report}")]
    Invalid {
        claim: Claim,
        report: ValidationReport,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Node {
    // Sorted by id; a repeated id is a parallel arc.
    children: Vec<VertexId>,
    parents: Vec<VertexId>,
}

/// A rooted directed pseudo-graph. Parallel arcs are allowed; acyclicity,
/// a single source and connectivity are checked by [`validate`], not by
/// construction, so that invalid inputs can be reported in full.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoDag {
    nodes: Vec<Option<Node>>,
    root: VertexId,
}

impl PseudoDag {
    /// Builds a graph on vertices `0..vertex_count` from `(tail, head)` pairs.
    /// Repeated pairs become parallel arcs.
    pub fn from_arcs<I>(vertex_count: usize, root: u32, arcs: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut g = PseudoDag {
            nodes: vec![Some(Node::default()); vertex_count],
            root: VertexId(root),
        };
        for (t, h) in arcs {
            g.add_arc(VertexId(t), VertexId(h));
        }
        g
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub(crate) fn set_root(&mut self, v: VertexId) {
        self.root = v;
    }

    pub fn contains(&self, v: VertexId) -> bool {
        matches!(self.nodes.get(v.index()), Some(Some(_)))
    }

    /// Upper bound (exclusive) on vertex indices, including deleted slots.
    pub fn id_bound(&self) -> usize {
        self.nodes.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_some())
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_some()).count()
    }

    pub fn arc_count(&self) -> usize {
        self.nodes.iter().flatten().map(|n| n.children.len()).sum()
    }

    fn node(&self, v: VertexId) -> &Node {
        self.nodes[v.index()]
            .as_ref()
            .unwrap_or_else(|| panic!("vertex {v} is not in the graph"))
    }

    fn node_mut(&mut self, v: VertexId) -> &mut Node {
        self.nodes[v.index()]
            .as_mut()
            .unwrap_or_else(|| panic!("vertex {v} is not in the graph"))
    }

    /// Children of `v` in ascending id order, repeated once per parallel arc.
    ///
    /// Panics if `v` is not a vertex of the graph.
    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.node(v).children
    }

    pub fn parents(&self, v: VertexId) -> &[VertexId] {
        &self.node(v).parents
    }

    pub fn indegree(&self, v: VertexId) -> usize {
        self.node(v).parents.len()
    }

    pub fn outdegree(&self, v: VertexId) -> usize {
        self.node(v).children.len()
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.outdegree(v) == 0
    }

    pub fn is_hybrid(&self, v: VertexId) -> bool {
        self.indegree(v) >= 2
    }

    pub fn is_tree_vertex(&self, v: VertexId) -> bool {
        self.indegree(v) <= 1
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(move |&v| self.is_leaf(v))
    }

    /// Distinct children of `v`, each with the number of arcs leading to it.
    pub fn child_multiplicities(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        let mut out: Vec<(VertexId, u32)> = Vec::new();
        for &c in self.children(v) {
            match out.last_mut() {
                Some((last, k)) if *last == c => *k += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    /// All arcs, ordered by `(tail, head, key)`.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut out = Vec::with_capacity(self.arc_count());
        for t in self.vertices() {
            out.extend(self.out_arcs(t));
        }
        out
    }

    pub fn out_arcs(&self, t: VertexId) -> Vec<Arc> {
        let mut out = Vec::with_capacity(self.outdegree(t));
        for (h, k) in self.child_multiplicities(t) {
            for key in 0..k {
                out.push(Arc { tail: t, head: h, key });
            }
        }
        out
    }

    pub fn in_arcs(&self, h: VertexId) -> Vec<Arc> {
        let mut out = Vec::new();
        let mut parents = self.parents(h).to_vec();
        parents.sort();
        parents.dedup();
        for t in parents {
            let k = self.children(t).iter().filter(|&&c| c == h).count() as u32;
            for key in 0..k {
                out.push(Arc { tail: t, head: h, key });
            }
        }
        out
    }

    pub fn has_arc(&self, a: Arc) -> bool {
        self.contains(a.tail)
            && self.contains(a.head)
            && (self.children(a.tail).iter().filter(|&&c| c == a.head).count() as u32) > a.key
    }

    pub fn parallel_arcs(&self) -> Vec<Arc> {
        self.arcs().into_iter().filter(|a| a.key > 0).collect()
    }

    pub fn has_parallel_arcs(&self) -> bool {
        self.vertices()
            .any(|v| self.children(v).windows(2).any(|w| w[0] == w[1]))
    }

    pub(crate) fn add_vertex(&mut self) -> VertexId {
        self.nodes.push(Some(Node::default()));
        VertexId((self.nodes.len() - 1) as u32)
    }

    pub(crate) fn add_arc(&mut self, t: VertexId, h: VertexId) {
        let bound = t.index().max(h.index()) + 1;
        if self.nodes.len() < bound {
            self.nodes.resize(bound, Some(Node::default()));
        }
        insert_sorted(&mut self.node_mut(t).children, h);
        insert_sorted(&mut self.node_mut(h).parents, t);
    }

    /// Removes one arc from `t` to `h`; returns false if there is none.
    pub(crate) fn remove_one_arc(&mut self, t: VertexId, h: VertexId) -> bool {
        let ch = &mut self.node_mut(t).children;
        match ch.iter().position(|&c| c == h) {
            Some(i) => {
                ch.remove(i);
                let pa = &mut self.node_mut(h).parents;
                let j = pa.iter().position(|&p| p == t).expect("arc lists out of sync");
                pa.remove(j);
                true
            }
            None => false,
        }
    }

    /// Deletes `v` with all incident arcs.
    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        let node = self.nodes[v.index()].take().expect("vertex already removed");
        for c in node.children {
            if c != v {
                let pa = &mut self.node_mut(c).parents;
                if let Some(j) = pa.iter().position(|&p| p == v) {
                    pa.remove(j);
                }
            }
        }
        for p in node.parents {
            if p != v {
                let ch = &mut self.node_mut(p).children;
                if let Some(j) = ch.iter().position(|&c| c == v) {
                    ch.remove(j);
                }
            }
        }
    }

    /// Topological order from the sources, or `None` if there is a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let mut indeg: Vec<usize> = vec![0; self.nodes.len()];
        for v in self.vertices() {
            indeg[v.index()] = self.indegree(v);
        }
        let mut queue: VecDeque<VertexId> = self.vertices().filter(|&v| indeg[v.index()] == 0).collect();
        let mut order = Vec::with_capacity(self.vertex_count());
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in self.children(v) {
                indeg[c.index()] -= 1;
                if indeg[c.index()] == 0 {
                    queue.push_back(c);
                }
            }
        }
        (order.len() == self.vertex_count()).then_some(order)
    }

    /// Vertices reachable from `from` (including `from`), as a membership mask.
    pub fn reachable_mask(&self, from: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![from];
        seen[from.index()] = true;
        while let Some(v) = stack.pop() {
            for &c in self.children(v) {
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    stack.push(c);
                }
            }
        }
        seen
    }

    /// Breadth-first order from the root, children visited by ascending id.
    pub fn bfs_order(&self) -> Vec<VertexId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::with_capacity(self.vertex_count());
        let mut queue = VecDeque::from([self.root]);
        seen[self.root.index()] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in self.children(v) {
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    queue.push_back(c);
                }
            }
        }
        order
    }

    /// Renumbers the vertices reachable from the root densely in BFS order.
    /// Returns the new graph and the map old id -> new id.
    pub fn compacted(&self) -> (PseudoDag, BTreeMap<VertexId, VertexId>) {
        let order = self.bfs_order();
        let map: BTreeMap<VertexId, VertexId> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, VertexId(i as u32)))
            .collect();
        let mut out = PseudoDag {
            nodes: vec![Some(Node::default()); order.len()],
            root: VertexId(0),
        };
        for &v in &order {
            for &c in self.children(v) {
                out.add_arc(map[&v], map[&c]);
            }
        }
        (out, map)
    }

    /// Is `v` below `u`, i.e. is there a directed path from `u` to `v`?
    /// Every vertex is below itself.
    pub fn is_below(&self, v: VertexId, u: VertexId) -> bool {
        if u == v {
            return true;
        }
        self.reachable_mask(u)[v.index()]
    }

    /// True when the underlying graph is a rooted tree: every vertex other
    /// than the root has exactly one parent and everything is reachable.
    pub fn is_rooted_tree(&self) -> bool {
        self.indegree(self.root) == 0
            && self
                .vertices()
                .all(|v| v == self.root || self.indegree(v) == 1)
            && self.reachable_mask(self.root).iter().filter(|&&b| b).count() == self.vertex_count()
    }
}

fn insert_sorted(v: &mut Vec<VertexId>, x: VertexId) {
    let i = v.partition_point(|&y| y <= x);
    v.insert(i, x);
}

/// Is `v` below `u` in `g`? (`below(g, g.root(), v)` holds for every `v`.)
pub fn below(g: &PseudoDag, u: VertexId, v: VertexId) -> bool {
    g.is_below(v, u)
}

/// Last common ancestor of a set of at least two leaves of a rooted tree.
pub fn lca(tree: &PseudoDag, leaves: &[VertexId]) -> Result<VertexId, ModelError> {
    if leaves.len() < 2 {
        return Err(ModelError::LcaTooFew(leaves.len()));
    }
    if !tree.is_rooted_tree() {
        return Err(ModelError::NotATree);
    }
    for &l in leaves {
        if !tree.contains(l) {
            return Err(ModelError::UnknownVertex(l));
        }
        if !tree.is_leaf(l) {
            return Err(ModelError::NotALeaf(l));
        }
    }
    Ok(lca_unchecked(tree, leaves))
}

/// LCA of arbitrary vertices of a tree; no validation.
pub(crate) fn lca_unchecked(tree: &PseudoDag, vs: &[VertexId]) -> VertexId {
    let path = |v: VertexId| {
        let mut p = vec![v];
        let mut cur = v;
        while let Some(&par) = tree.parents(cur).first() {
            p.push(par);
            cur = par;
        }
        p.reverse();
        p
    };
    let mut common = path(vs[0]);
    for &v in &vs[1..] {
        let p = path(v);
        let k = common.iter().zip(&p).take_while(|(a, b)| a == b).count();
        common.truncate(k);
    }
    *common.last().expect("vertices share the root")
}

/// Replaces arc `a` by the path `tail(a), w, head(a)` and returns the new
/// graph with the subdivision vertex `w`.
pub fn subdivide(g: &PseudoDag, a: Arc) -> Result<(PseudoDag, VertexId), ModelError> {
    if !g.has_arc(a) {
        return Err(ModelError::UnknownArc(a));
    }
    let mut out = g.clone();
    out.remove_one_arc(a.tail, a.head);
    let w = out.add_vertex();
    out.add_arc(a.tail, w);
    out.add_arc(w, a.head);
    Ok((out, w))
}

/// Deletes a vertex of indegree and outdegree one together with its two
/// arcs and joins its parent to its child. The new arc may be parallel to
/// an existing one.
pub fn suppress(g: &PseudoDag, v: VertexId) -> Result<PseudoDag, ModelError> {
    if !g.contains(v) {
        return Err(ModelError::UnknownVertex(v));
    }
    let (i, o) = (g.indegree(v), g.outdegree(v));
    if i != 1 || o != 1 {
        return Err(ModelError::SuppressDegree {
            vertex: v,
            indegree: i,
            outdegree: o,
        });
    }
    let mut out = g.clone();
    out.suppress_in_place(v);
    Ok(out)
}

impl PseudoDag {
    pub(crate) fn suppress_in_place(&mut self, v: VertexId) {
        let p = self.parents(v)[0];
        let c = self.children(v)[0];
        self.remove_vertex(v);
        self.add_arc(p, c);
    }
}

/// A rooted connected pseudoDAG whose leaves are bijectively labelled by the
/// taxa. Non-leaf tree vertices have outdegree two, hybrid vertices outdegree
/// one, leaves degree one. Parallel arcs are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XNetwork {
    graph: PseudoDag,
    leaf_of: BTreeMap<Label, VertexId>,
    label_of: BTreeMap<VertexId, Label>,
}

impl XNetwork {
    pub fn new(graph: PseudoDag, label_of: BTreeMap<VertexId, Label>) -> Result<Self, ModelError> {
        let report = validate(&graph, &label_of, Claim::XNetwork);
        if !report.is_valid() {
            return Err(ModelError::Invalid {
                claim: Claim::XNetwork,
                report,
            });
        }
        Ok(Self::new_unchecked(graph, label_of))
    }

    pub(crate) fn new_unchecked(graph: PseudoDag, label_of: BTreeMap<VertexId, Label>) -> Self {
        let leaf_of = label_of.iter().map(|(v, l)| (l.clone(), *v)).collect();
        XNetwork {
            graph,
            leaf_of,
            label_of,
        }
    }

    /// Convenience constructor from `(tail, head)` pairs and `(vertex, label)` pairs.
    pub fn from_arcs<I, L, S>(vertex_count: usize, root: u32, arcs: I, labels: L) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (u32, u32)>,
        L: IntoIterator<Item = (u32, S)>,
        S: Into<Label>,
    {
        let g = PseudoDag::from_arcs(vertex_count, root, arcs);
        let labels = labels.into_iter().map(|(v, s)| (VertexId(v), s.into())).collect();
        XNetwork::new(g, labels)
    }

    pub fn graph(&self) -> &PseudoDag {
        &self.graph
    }

    pub fn root(&self) -> VertexId {
        self.graph.root()
    }

    pub fn taxa(&self) -> impl Iterator<Item = &Label> + '_ {
        self.leaf_of.keys()
    }

    pub fn taxa_set(&self) -> BTreeSet<Label> {
        self.leaf_of.keys().cloned().collect()
    }

    pub fn taxon_count(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn leaf(&self, x: &str) -> Option<VertexId> {
        self.leaf_of.get(x).copied()
    }

    pub fn label(&self, v: VertexId) -> Option<&Label> {
        self.label_of.get(&v)
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, Label> {
        &self.label_of
    }

    pub fn leaf_map(&self) -> &BTreeMap<Label, VertexId> {
        &self.leaf_of
    }

    pub fn is_phylogenetic(&self) -> bool {
        !self.graph.has_parallel_arcs()
    }

    pub fn is_tree(&self) -> bool {
        self.graph.vertices().all(|v| !self.graph.is_hybrid(v))
    }

    /// Every hybrid vertex has indegree exactly two.
    pub fn is_binary(&self) -> bool {
        self.graph.vertices().all(|v| self.graph.indegree(v) <= 2)
    }

    pub fn hybrids(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| self.graph.is_hybrid(v)).collect()
    }

    pub fn tree_vertices(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| self.graph.is_tree_vertex(v)).collect()
    }

    pub fn interior_vertices(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| !self.graph.is_leaf(v)).collect()
    }

    /// Same network with vertices renumbered densely in BFS order.
    pub fn compacted(&self) -> XNetwork {
        let (g, map) = self.graph.compacted();
        let labels = self.label_of.iter().map(|(v, l)| (map[v], l.clone())).collect();
        XNetwork::new_unchecked(g, labels)
    }

    /// Applies a permutation of vertex ids (`perm[old] = new`).
    pub fn relabelled(&self, perm: &[u32]) -> XNetwork {
        let arcs = self
            .graph
            .arcs()
            .into_iter()
            .map(|a| (perm[a.tail.index()], perm[a.head.index()]));
        let g = PseudoDag::from_arcs(self.graph.id_bound(), perm[self.root().index()], arcs);
        let labels = self
            .label_of
            .iter()
            .map(|(v, l)| (VertexId(perm[v.index()]), l.clone()))
            .collect();
        XNetwork::new_unchecked(g, labels)
    }
}

/// An X-network without parallel arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhyloNetwork(XNetwork);

impl PhyloNetwork {
    pub fn into_inner(self) -> XNetwork {
        self.0
    }

    pub fn as_xnetwork(&self) -> &XNetwork {
        &self.0
    }
}

impl TryFrom<XNetwork> for PhyloNetwork {
    type Error = ModelError;

    fn try_from(n: XNetwork) -> Result<Self, ModelError> {
        let report = validate(n.graph(), n.labels(), Claim::PhyloNetwork);
        if report.is_valid() {
            Ok(PhyloNetwork(n))
        } else {
            Err(ModelError::Invalid {
                claim: Claim::PhyloNetwork,
                report,
            })
        }
    }
}

impl Deref for PhyloNetwork {
    type Target = XNetwork;
    fn deref(&self) -> &XNetwork {
        &self.0
    }
}

/// A phylogenetic network without hybrid vertices (hence binary).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhyloTree(PhyloNetwork);

impl PhyloTree {
    pub fn into_inner(self) -> XNetwork {
        self.0 .0
    }

    pub fn as_network(&self) -> &PhyloNetwork {
        &self.0
    }

    /// Leaf-label sets of all vertices (the clusters of the tree).
    pub fn clusters(&self) -> BTreeSet<BTreeSet<Label>> {
        let g = self.graph();
        let mut below: BTreeMap<VertexId, BTreeSet<Label>> = BTreeMap::new();
        let order = g.topological_order().expect("tree is acyclic");
        for &v in order.iter().rev() {
            let mut s = BTreeSet::new();
            if let Some(l) = self.label(v) {
                s.insert(l.clone());
            }
            for &c in g.children(v) {
                s.extend(below[&c].iter().cloned());
            }
            below.insert(v, s);
        }
        below.into_values().collect()
    }
}

impl TryFrom<XNetwork> for PhyloTree {
    type Error = ModelError;

    fn try_from(n: XNetwork) -> Result<Self, ModelError> {
        let report = validate(n.graph(), n.labels(), Claim::PhyloTree);
        if report.is_valid() {
            Ok(PhyloTree(PhyloNetwork(n)))
        } else {
            Err(ModelError::Invalid {
                claim: Claim::PhyloTree,
                report,
            })
        }
    }
}

impl TryFrom<PhyloNetwork> for PhyloTree {
    type Error = ModelError;

    fn try_from(n: PhyloNetwork) -> Result<Self, ModelError> {
        PhyloTree::try_from(n.0)
    }
}

impl Deref for PhyloTree {
    type Target = PhyloNetwork;
    fn deref(&self) -> &PhyloNetwork {
        &self.0
    }
}

/// A multi-labelled tree: a rooted tree whose leaves each carry exactly one
/// taxon, with taxa allowed to label several leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulTree {
    tree: PseudoDag,
    label_of: BTreeMap<VertexId, Label>,
    mu: BTreeMap<Label, BTreeSet<VertexId>>,
}

impl MulTree {
    pub fn new(tree: PseudoDag, label_of: BTreeMap<VertexId, Label>) -> Result<Self, ModelError> {
        let report = validate(&tree, &label_of, Claim::MulTree);
        if !report.is_valid() {
            return Err(ModelError::Invalid {
                claim: Claim::MulTree,
                report,
            });
        }
        Ok(Self::new_unchecked(tree, label_of))
    }

    pub(crate) fn new_unchecked(tree: PseudoDag, label_of: BTreeMap<VertexId, Label>) -> Self {
        let mut mu: BTreeMap<Label, BTreeSet<VertexId>> = BTreeMap::new();
        for (v, l) in &label_of {
            mu.entry(l.clone()).or_default().insert(*v);
        }
        MulTree { tree, label_of, mu }
    }

    pub fn from_arcs<I, L, S>(vertex_count: usize, root: u32, arcs: I, labels: L) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (u32, u32)>,
        L: IntoIterator<Item = (u32, S)>,
        S: Into<Label>,
    {
        let g = PseudoDag::from_arcs(vertex_count, root, arcs);
        let labels = labels.into_iter().map(|(v, s)| (VertexId(v), s.into())).collect();
        MulTree::new(g, labels)
    }

    /// A phylogenetic tree viewed as a MUL-tree with singleton label sets.
    pub fn from_tree(t: &PhyloTree) -> MulTree {
        MulTree::new_unchecked(t.graph().clone(), t.labels().clone())
    }

    pub fn tree(&self) -> &PseudoDag {
        &self.tree
    }

    pub fn root(&self) -> VertexId {
        self.tree.root()
    }

    pub fn taxa(&self) -> impl Iterator<Item = &Label> + '_ {
        self.mu.keys()
    }

    pub fn taxa_set(&self) -> BTreeSet<Label> {
        self.mu.keys().cloned().collect()
    }

    pub fn mu(&self, x: &str) -> Option<&BTreeSet<VertexId>> {
        self.mu.get(x)
    }

    pub fn mu_map(&self) -> &BTreeMap<Label, BTreeSet<VertexId>> {
        &self.mu
    }

    pub fn label(&self, v: VertexId) -> Option<&Label> {
        self.label_of.get(&v)
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, Label> {
        &self.label_of
    }

    pub fn leaf_count(&self) -> usize {
        self.label_of.len()
    }

    /// Parent of a non-root vertex.
    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.tree.parents(v).first().copied()
    }

    /// Vertices of the subtree rooted at `v`, in preorder.
    pub fn subtree(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            for &c in self.tree.children(u).iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// The MUL-tree rooted at `v` (labels restricted to the leaves below `v`).
    pub fn subtree_at(&self, v: VertexId) -> MulTree {
        let verts = self.subtree(v);
        let idx: BTreeMap<VertexId, u32> = verts.iter().enumerate().map(|(i, &u)| (u, i as u32)).collect();
        let arcs = verts
            .iter()
            .flat_map(|&u| self.tree.children(u).iter().map(move |&c| (u, c)))
            .map(|(u, c)| (idx[&u], idx[&c]))
            .collect::<Vec<_>>();
        let g = PseudoDag::from_arcs(verts.len(), 0, arcs);
        let labels = verts
            .iter()
            .filter_map(|u| self.label_of.get(u).map(|l| (VertexId(idx[u]), l.clone())))
            .collect();
        MulTree::new_unchecked(g, labels)
    }

    /// Same MUL-tree with vertices renumbered densely in BFS order.
    pub fn compacted(&self) -> MulTree {
        let (g, map) = self.tree.compacted();
        let labels = self.label_of.iter().map(|(v, l)| (map[v], l.clone())).collect();
        MulTree::new_unchecked(g, labels)
    }

    /// Applies a permutation of vertex ids (`perm[old] = new`).
    pub fn relabelled(&self, perm: &[u32]) -> MulTree {
        let arcs = self
            .tree
            .arcs()
            .into_iter()
            .map(|a| (perm[a.tail.index()], perm[a.head.index()]));
        let g = PseudoDag::from_arcs(self.tree.id_bound(), perm[self.root().index()], arcs);
        let labels = self
            .label_of
            .iter()
            .map(|(v, l)| (VertexId(perm[v.index()]), l.clone()))
            .collect();
        MulTree::new_unchecked(g, labels)
    }

    /// Returns a copy where the children of every vertex are visited in a
    /// different order, expressed by renumbering the vertices in a preorder
    /// that follows `order(v, children)`.
    pub fn reordered<F>(&self, mut order: F) -> MulTree
    where
        F: FnMut(VertexId, &mut Vec<VertexId>),
    {
        let mut perm = vec![0u32; self.tree.id_bound()];
        let mut next = 0u32;
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            perm[v.index()] = next;
            next += 1;
            let mut ch = self.tree.children(v).to_vec();
            order(v, &mut ch);
            for c in ch.into_iter().rev() {
                stack.push(c);
            }
        }
        self.relabelled(&perm)
    }
}
