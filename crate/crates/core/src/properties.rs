//! Deciders for stable networks phrased through the un-fold: displayed trees,
//! base trees, tree-based, tree-child and reticulation-visible. Structural
//! versions of the last two are included for comparison, as is a
//! path-counting test for vertex-stable ancestors.

use std::cell::OnceCell;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::canonical::{canon_code, equiv_partition, xnetwork_isomorphic, CanonCode, ClassId, EquivPartition};
use crate::foldup::{fold_up, Kappa, KappaError};
use crate::model::{Arc, Label, MulTree, PhyloNetwork, PhyloTree, PseudoDag, VertexId, XNetwork};
use crate::unfold::{unfold_with_cap, UnfoldError, Unfolding, DEFAULT_PATH_CAP};
use crate::xsets::{collect_xsets, restrict_to_xset, v_m_c_classes, XSet, XSetError, XSetMaps};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PropertyError {
    #[error("network is not stable")]
    NotStable,
    #[error("input is an X-network with parallel arcs; enable allow_xnetwork to accept it")]
    NotPhylogenetic,
    #[error("the root is the tail of two parallel arcs")]
    RootParallelArcs,
    #[error("network is not tree-child")]
    NotTreeChild,
    #[error("taxa differ: network {network:?}, tree {tree:?}")]
    TaxaMismatch {
        network: BTreeSet<Label>,
        tree: BTreeSet<Label>,
    },
    #[error("{0} is not an interior vertex")]
    NotInterior(VertexId),
    #[error("{0} is not an interior tree vertex")]
    NotTreeVertex(VertexId),
    #[error("unknown taxon {0}")]
    UnknownLabel(String),
    #[error(transparent)]
    Unfold(#[from] UnfoldError),
    #[error(transparent)]
    XSet(#[from] XSetError),
    #[error(transparent)]
    Kappa(#[from] KappaError),
}

/// What a verdict points at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Evidence {
    XSet(XSet),
    /// An X-set together with a vertex of the un-fold.
    XSetVertex { xset: XSet, vertex: VertexId },
    Vertex(VertexId),
    Vertices(BTreeSet<VertexId>),
    Arc(Arc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub witness: Option<Evidence>,
    pub counterexample: Option<Evidence>,
}

impl PropertyVerdict {
    pub fn yes(witness: Option<Evidence>) -> Self {
        PropertyVerdict {
            holds: true,
            witness,
            counterexample: None,
        }
    }

    pub fn no(counterexample: Option<Evidence>) -> Self {
        PropertyVerdict {
            holds: false,
            witness: None,
            counterexample,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DeciderOptions {
    /// Accept X-networks (parallel arcs allowed).
    pub allow_xnetwork: bool,
    pub path_cap: usize,
    /// Refuse un-folds with more X-sets than this.
    pub xset_limit: Option<usize>,
}

impl Default for DeciderOptions {
    fn default() -> Self {
        DeciderOptions {
            allow_xnetwork: false,
            path_cap: DEFAULT_PATH_CAP,
            xset_limit: None,
        }
    }
}

/// One X-set of the un-fold with its maps, the code of `M_C` and the image
/// of `ξ̄⁺_C`.
#[derive(Clone, Debug)]
pub struct XSetEntry {
    pub maps: XSetMaps,
    pub code: CanonCode,
    pub image: BTreeSet<ClassId>,
}

impl XSetEntry {
    pub fn xset(&self) -> &XSet {
        &self.maps.xset
    }

    pub fn is_injective(&self) -> bool {
        self.image.len() == self.maps.xi_plus.len()
    }
}

/// A network checked to be stable, with its un-fold, the partition of the
/// un-fold into isomorphism classes and `κ_N`. The X-set table is built on
/// first use.
#[derive(Clone, Debug)]
pub struct StableNetwork {
    net: XNetwork,
    unfolding: Unfolding,
    partition: EquivPartition,
    kappa: Kappa,
    xset_limit: Option<usize>,
    table: OnceCell<Vec<XSetEntry>>,
}

impl StableNetwork {
    pub fn new(n: &PhyloNetwork) -> Result<Self, PropertyError> {
        Self::with_options(n.as_xnetwork(), &DeciderOptions::default())
    }

    pub fn with_options(n: &XNetwork, opts: &DeciderOptions) -> Result<Self, PropertyError> {
        if !n.is_phylogenetic() && !opts.allow_xnetwork {
            return Err(PropertyError::NotPhylogenetic);
        }
        let unfolding = unfold_with_cap(n, opts.path_cap)?;
        let (folded, _) = fold_up(&unfolding.multree).map_err(|_| PropertyError::NotStable)?;
        if !xnetwork_isomorphic(n, &folded) {
            return Err(PropertyError::NotStable);
        }
        let partition = equiv_partition(&unfolding.multree);
        let kappa = Kappa::build(n, &unfolding, &partition)?;
        Ok(StableNetwork {
            net: n.clone(),
            unfolding,
            partition,
            kappa,
            xset_limit: opts.xset_limit,
            table: OnceCell::new(),
        })
    }

    pub fn network(&self) -> &XNetwork {
        &self.net
    }

    pub fn unfolding(&self) -> &Unfolding {
        &self.unfolding
    }

    pub fn multree(&self) -> &MulTree {
        &self.unfolding.multree
    }

    pub fn partition(&self) -> &EquivPartition {
        &self.partition
    }

    pub fn kappa(&self) -> &Kappa {
        &self.kappa
    }

    /// Every X-set of the un-fold, in enumeration order.
    pub fn entries(&self) -> Result<&[XSetEntry], PropertyError> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let m = self.multree();
        let mut table = Vec::new();
        for c in collect_xsets(m, self.xset_limit)? {
            let maps = restrict_to_xset(m, &c)?;
            let mt = MulTree::from_tree(&maps.m_c);
            let code = canon_code(&mt, mt.root()).expect("root");
            let image = maps.image(&self.partition);
            table.push(XSetEntry { maps, code, image });
        }
        Ok(self.table.get_or_init(|| table))
    }

    pub fn xsets(&self) -> Result<Vec<XSet>, PropertyError> {
        Ok(self.entries()?.iter().map(|e| e.xset().clone()).collect())
    }

    pub fn maps(&self, c: &XSet) -> Result<XSetMaps, PropertyError> {
        Ok(restrict_to_xset(self.multree(), c)?)
    }

    fn endorsing(&self, t: &PhyloTree) -> Result<Vec<&XSetEntry>, PropertyError> {
        if self.net.taxa_set() != t.taxa_set() {
            return Err(PropertyError::TaxaMismatch {
                network: self.net.taxa_set(),
                tree: t.taxa_set(),
            });
        }
        let mt = MulTree::from_tree(t);
        let want = canon_code(&mt, mt.root()).expect("root");
        Ok(self.entries()?.iter().filter(|e| e.code == want).collect())
    }
}

/// No arc joins two hybrid vertices.
pub fn is_compressed(n: &XNetwork) -> PropertyVerdict {
    let g = n.graph();
    match g.arcs().into_iter().find(|a| g.is_hybrid(a.tail) && g.is_hybrid(a.head)) {
        Some(a) => PropertyVerdict::no(Some(Evidence::Arc(a))),
        None => PropertyVerdict::yes(None),
    }
}

/// `t` is displayed iff some endorsing X-set has injective `ξ̄⁺_C`.
pub fn displays_stable(s: &StableNetwork, t: &PhyloTree) -> Result<PropertyVerdict, PropertyError> {
    Ok(match s.endorsing(t)?.into_iter().find(|e| e.is_injective()) {
        Some(e) => PropertyVerdict::yes(Some(Evidence::XSet(e.xset().clone()))),
        None => PropertyVerdict::no(None),
    })
}

fn root_guard(s: &StableNetwork) -> Result<(), PropertyError> {
    let g = s.network().graph();
    let root = g.root();
    if g.child_multiplicities(root).iter().any(|&(_, k)| k > 1) {
        return Err(PropertyError::RootParallelArcs);
    }
    Ok(())
}

/// `t` is a base tree iff some endorsing X-set has bijective `ξ̄⁺_C`.
pub fn is_base_tree(s: &StableNetwork, t: &PhyloTree) -> Result<PropertyVerdict, PropertyError> {
    root_guard(s)?;
    let classes = s.partition().class_count();
    Ok(match s.endorsing(t)?.into_iter().find(|e| e.is_injective() && e.image.len() == classes) {
        Some(e) => PropertyVerdict::yes(Some(Evidence::XSet(e.xset().clone()))),
        None => PropertyVerdict::no(None),
    })
}

/// Tree-based iff some X-set has bijective `ξ̄⁺_C`; its `M_C` is then a base
/// tree.
pub fn is_tree_based_stable(s: &StableNetwork) -> Result<PropertyVerdict, PropertyError> {
    root_guard(s)?;
    let classes = s.partition().class_count();
    for e in s.entries()? {
        if e.is_injective() && e.image.len() == classes {
            return Ok(PropertyVerdict::yes(Some(Evidence::XSet(e.xset().clone()))));
        }
    }
    Ok(PropertyVerdict::no(None))
}

/// Base tree found by `is_tree_based_stable`, if any.
pub fn base_tree_of(s: &StableNetwork) -> Result<Option<PhyloTree>, PropertyError> {
    match is_tree_based_stable(s)?.witness {
        Some(Evidence::XSet(c)) => Ok(Some(s.maps(&c)?.m_c)),
        _ => Ok(None),
    }
}

fn counts_from(g: &PseudoDag, order: &[VertexId]) -> Vec<Option<u128>> {
    let mut c = vec![Some(0u128); g.id_bound()];
    c[g.root().index()] = Some(1);
    for &v in order {
        for &ch in g.children(v) {
            c[ch.index()] = match (c[ch.index()], c[v.index()]) {
                (Some(a), Some(b)) => a.checked_add(b),
                _ => None,
            };
        }
    }
    c
}

fn counts_to(g: &PseudoDag, order: &[VertexId], x: VertexId) -> Vec<Option<u128>> {
    let mut c = vec![Some(0u128); g.id_bound()];
    c[x.index()] = Some(1);
    for &v in order.iter().rev() {
        if v == x {
            continue;
        }
        let mut sum = Some(0u128);
        for &ch in g.children(v) {
            sum = match (sum, c[ch.index()]) {
                (Some(a), Some(b)) => a.checked_add(b),
                _ => None,
            };
        }
        c[v.index()] = sum;
    }
    c
}

fn avoids(g: &PseudoDag, v: VertexId, x: VertexId) -> bool {
    // is x reachable from the root without passing through v?
    let mut seen = vec![false; g.id_bound()];
    let mut stack = vec![g.root()];
    seen[g.root().index()] = true;
    while let Some(u) = stack.pop() {
        if u == x {
            return true;
        }
        for &c in g.children(u) {
            if c != v && !seen[c.index()] {
                seen[c.index()] = true;
                stack.push(c);
            }
        }
    }
    false
}

/// For every vertex, the leaves it is a vertex-stable ancestor of. A vertex
/// `v` lies on every root path to `x` exactly when the number of such paths
/// through `v` equals the total.
pub fn stable_ancestry(n: &XNetwork) -> BTreeMap<VertexId, BTreeSet<Label>> {
    let g = n.graph();
    let order = g.topological_order().expect("acyclic");
    let from = counts_from(g, &order);
    let mut out: BTreeMap<VertexId, BTreeSet<Label>> = g.vertices().map(|v| (v, BTreeSet::new())).collect();
    for (x, &leaf) in n.leaf_map() {
        let to = counts_to(g, &order, leaf);
        for v in g.vertices() {
            let through = match (from[v.index()], to[v.index()]) {
                (Some(a), Some(b)) => a.checked_mul(b),
                _ => None,
            };
            let on_all = match (through, from[leaf.index()]) {
                (Some(a), Some(b)) => a == b,
                _ => to[v.index()] != Some(0) && !avoids(g, v, leaf),
            };
            if on_all {
                out.get_mut(&v).expect("vertex").insert(x.clone());
            }
        }
    }
    out
}

/// `v` lies on every directed path from the root to the leaf `x`.
pub fn vertex_stable_ancestor(n: &XNetwork, v: VertexId, x: &str) -> Result<bool, PropertyError> {
    let g = n.graph();
    if !g.contains(v) || g.is_leaf(v) {
        return Err(PropertyError::NotInterior(v));
    }
    let leaf = n.leaf(x).ok_or_else(|| PropertyError::UnknownLabel(x.to_string()))?;
    if v == g.root() {
        return Ok(true);
    }
    let order = g.topological_order().expect("acyclic");
    let from = counts_from(g, &order);
    let to = counts_to(g, &order, leaf);
    Ok(match (from[v.index()], to[v.index()], from[leaf.index()]) {
        (Some(a), Some(b), Some(t)) if a.checked_mul(b).is_some() => a * b == t,
        _ => to[v.index()] != Some(0) && !avoids(g, v, leaf),
    })
}

/// Every interior vertex has a child of indegree one.
pub fn is_tree_child_structural(n: &XNetwork) -> PropertyVerdict {
    let g = n.graph();
    let bad = g
        .vertices()
        .find(|&v| !g.is_leaf(v) && !g.children(v).iter().any(|&c| g.indegree(c) <= 1));
    match bad {
        Some(v) => PropertyVerdict::no(Some(Evidence::Vertex(v))),
        None => PropertyVerdict::yes(None),
    }
}

/// Every interior vertex is a vertex-stable ancestor of some leaf.
pub fn is_tree_child_by_ancestry(n: &XNetwork) -> PropertyVerdict {
    let g = n.graph();
    let anc = stable_ancestry(n);
    match g.vertices().find(|&v| !g.is_leaf(v) && anc[&v].is_empty()) {
        Some(v) => PropertyVerdict::no(Some(Evidence::Vertex(v))),
        None => PropertyVerdict::yes(None),
    }
}

/// Compressed, and every interior tree vertex is a vertex-stable ancestor of
/// some leaf.
pub fn is_tree_child_compressed_form(n: &XNetwork) -> PropertyVerdict {
    let compressed = is_compressed(n);
    if !compressed.holds {
        return compressed;
    }
    let g = n.graph();
    let anc = stable_ancestry(n);
    let bad = g
        .vertices()
        .find(|&v| !g.is_leaf(v) && g.is_tree_vertex(v) && anc[&v].is_empty());
    match bad {
        Some(v) => PropertyVerdict::no(Some(Evidence::Vertex(v))),
        None => PropertyVerdict::yes(None),
    }
}

/// The image test: `ξ̄⁺_C(V(M_C⁺)) = V(M)^C/~` for every X-set `C`.
///
/// Not equivalent to tree-child. The stable network
/// `((((1,((((2,3),5))#H2,4)))#H1,#H2),#H1);` passes it, yet the parent of
/// `H1` and `H2` has no tree-vertex child. Use [`is_tree_child_on_path`] for
/// a test that agrees with [`is_tree_child_structural`].
pub fn is_tree_child_stable(s: &StableNetwork) -> Result<PropertyVerdict, PropertyError> {
    let m = s.multree();
    let p = s.partition();
    for e in s.entries()? {
        if e.image != v_m_c_classes(m, p, e.maps.r_c) {
            return Ok(PropertyVerdict::no(Some(Evidence::XSet(e.xset().clone()))));
        }
    }
    Ok(PropertyVerdict::yes(None))
}

/// Classes of `r_C` and its ancestors in the un-fold; these are the tree
/// vertices on the root path `Ψ⁻¹(r_C)`.
fn root_path_classes(m: &MulTree, p: &EquivPartition, r_c: VertexId) -> BTreeSet<ClassId> {
    let mut out = BTreeSet::new();
    let mut v = Some(r_c);
    while let Some(u) = v {
        out.insert(p.class_of(u));
        v = m.parent(u);
    }
    out
}

/// Tree-child iff for every X-set `C`, each class lies in the image of
/// `ξ̄⁺_C` or on the root path to `r_C`.
pub fn is_tree_child_on_path(s: &StableNetwork) -> Result<PropertyVerdict, PropertyError> {
    let m = s.multree();
    let p = s.partition();
    for e in s.entries()? {
        let mut covered = e.image.clone();
        covered.extend(root_path_classes(m, p, e.maps.r_c));
        if covered.len() != p.class_count() {
            return Ok(PropertyVerdict::no(Some(Evidence::XSet(e.xset().clone()))));
        }
    }
    Ok(PropertyVerdict::yes(None))
}

/// Every hybrid is a vertex-stable ancestor of some leaf; the counterexample
/// is an invisible hybrid.
pub fn is_reticulation_visible_structural(n: &XNetwork) -> PropertyVerdict {
    let anc = stable_ancestry(n);
    match n.hybrids().into_iter().find(|h| anc[h].is_empty()) {
        Some(h) => PropertyVerdict::no(Some(Evidence::Vertex(h))),
        None => PropertyVerdict::yes(None),
    }
}

fn growing_vertices(m: &MulTree, p: &EquivPartition) -> Vec<VertexId> {
    m.tree()
        .vertices()
        .filter(|&v| m.parent(v).is_some_and(|u| p.size_of(u) < p.size_of(v)))
        .collect()
}

/// The class-size test: for every X-set `C` and every non-root `v` of the
/// un-fold whose class is larger than its parent's, the class of `v` lies in
/// the image of `ξ̄⁺_C`.
///
/// Not equivalent to reticulation-visible: X-sets whose `r_C` sits below the
/// hybrid are not exempted. The stable, reticulation-visible network
/// `((((((1,3))#H2,((#H2,2),(4)#H3)))#H1,(#H1,#H3)),#H1);` fails it. See
/// [`is_reticulation_visible_on_path`].
pub fn is_reticulation_visible_stable(s: &StableNetwork) -> Result<PropertyVerdict, PropertyError> {
    let p = s.partition();
    let growing = growing_vertices(s.multree(), p);
    for e in s.entries()? {
        if let Some(&v) = growing.iter().find(|&&v| !e.image.contains(&p.class_of(v))) {
            let xset = e.xset().clone();
            return Ok(PropertyVerdict::no(Some(Evidence::XSetVertex { xset, vertex: v })));
        }
    }
    Ok(PropertyVerdict::yes(None))
}

/// As [`is_reticulation_visible_stable`], but a class on the root path to
/// `r_C` also counts as covered.
pub fn is_reticulation_visible_on_path(s: &StableNetwork) -> Result<PropertyVerdict, PropertyError> {
    let m = s.multree();
    let p = s.partition();
    let growing = growing_vertices(m, p);
    for e in s.entries()? {
        let mut covered = e.image.clone();
        covered.extend(root_path_classes(m, p, e.maps.r_c));
        if let Some(&v) = growing.iter().find(|&&v| !covered.contains(&p.class_of(v))) {
            let xset = e.xset().clone();
            return Ok(PropertyVerdict::no(Some(Evidence::XSetVertex { xset, vertex: v })));
        }
    }
    Ok(PropertyVerdict::yes(None))
}

/// How each X-set satisfies the two alternatives for a tree vertex `v`:
/// (i) `κ(v)` is in the image of `ξ̄⁺_C`, (ii) `v` is an ancestor of
/// `κ⁻¹(r̄_C)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AlternativesReport {
    pub holds: bool,
    pub by_image: Vec<XSet>,
    /// X-sets failing (i) but satisfying (ii).
    pub by_ancestry: Vec<XSet>,
    /// First X-set satisfying neither.
    pub failing: Option<XSet>,
}

/// What alternative (ii) asks of `v` and `r_C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AncestorReading {
    /// `κ⁻¹(r̄_C)` is below `v` in `N`.
    #[default]
    Below,
    /// `v` lies on the root path `Ψ⁻¹(r_C)`.
    OnRootPath,
}

/// Alternatives (i) or (ii) for every X-set, with (ii) read as
/// [`AncestorReading::Below`]. That reading holds for some tree vertices
/// that are no vertex-stable ancestor of any leaf, such as the parent of
/// `H1` and `H2` in `((((1,((((2,3),5))#H2,4)))#H1,#H2),#H1);`.
pub fn tree_vertex_alternatives(s: &StableNetwork, v: VertexId) -> Result<AlternativesReport, PropertyError> {
    tree_vertex_alternatives_with(s, v, AncestorReading::Below)
}

pub fn tree_vertex_alternatives_with(s: &StableNetwork, v: VertexId, reading: AncestorReading) -> Result<AlternativesReport, PropertyError> {
    let g = s.network().graph();
    if !g.contains(v) || g.is_leaf(v) || !g.is_tree_vertex(v) {
        return Err(PropertyError::NotTreeVertex(v));
    }
    let m = s.multree();
    let p = s.partition();
    let kv = s.kappa().apply(v);
    let below_v = g.reachable_mask(v);
    let mut report = AlternativesReport::default();
    for e in s.entries()? {
        let c = e.xset().clone();
        if e.image.contains(&kv) {
            report.by_image.push(c);
            continue;
        }
        let second = match reading {
            AncestorReading::Below => below_v[s.kappa().inverse(e.maps.r_c_class(p)).index()],
            AncestorReading::OnRootPath => root_path_classes(m, p, e.maps.r_c).contains(&kv),
        };
        if second {
            report.by_ancestry.push(c);
        } else if report.failing.is_none() {
            report.failing = Some(c);
        }
    }
    report.holds = report.failing.is_none();
    Ok(report)
}

/// Displayed with the root of `t` at the root of the network: some endorsing
/// X-set has injective `ξ̄⁺_C` and `r_C` at the root of the un-fold.
pub fn strongly_displays(s: &StableNetwork, t: &PhyloTree) -> Result<PropertyVerdict, PropertyError> {
    let root = s.multree().root();
    Ok(match s.endorsing(t)?.into_iter().find(|e| e.maps.r_c == root && e.is_injective()) {
        Some(e) => PropertyVerdict::yes(Some(Evidence::XSet(e.xset().clone()))),
        None => PropertyVerdict::no(None),
    })
}

/// The trees `M_C` over X-sets with injective `ξ̄⁺_C` rooted at the root of
/// the un-fold, one per shape.
pub fn strongly_displayed_trees(s: &StableNetwork) -> Result<Vec<(XSet, PhyloTree)>, PropertyError> {
    let root = s.multree().root();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for e in s.entries()? {
        if e.maps.r_c == root && e.is_injective() && seen.insert(&e.code) {
            out.push((e.xset().clone(), e.maps.m_c.clone()));
        }
    }
    Ok(out)
}

/// Every strongly displayed tree is a base tree. No precondition; the
/// counterexample is the X-set of a strongly displayed tree that is not.
pub fn strongly_displayed_are_base_trees(s: &StableNetwork) -> Result<PropertyVerdict, PropertyError> {
    for (c, t) in strongly_displayed_trees(s)? {
        if !is_base_tree(s, &t)?.holds {
            return Ok(PropertyVerdict::no(Some(Evidence::XSet(c))));
        }
    }
    Ok(PropertyVerdict::yes(None))
}

/// For stable tree-child networks every strongly displayed tree is a base
/// tree; checks it.
pub fn strongly_displayed_check(s: &StableNetwork) -> Result<PropertyVerdict, PropertyError> {
    if !is_tree_child_structural(s.network()).holds {
        return Err(PropertyError::NotTreeChild);
    }
    strongly_displayed_are_base_trees(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_enewick;

    fn stable(s: &str) -> StableNetwork {
        StableNetwork::new(&PhyloNetwork::try_from(parse_enewick(s).unwrap()).unwrap()).unwrap()
    }

    fn tree(s: &str) -> PhyloTree {
        PhyloTree::try_from(parse_enewick(s).unwrap()).unwrap()
    }

    const FIG1: &str = "(((((2)#H2,(3)#H3))#H1,(1,#H2)),(#H1,(4,#H3)));";
    const FIG2_III: &str = "((((1,2))#H1,3),#H1);";

    #[test]
    fn unstable_input_is_rejected() {
        let n = PhyloNetwork::try_from(parse_enewick("((((1)#H1,(2)#H2),3),(#H1,#H2));").unwrap()).unwrap();
        assert_eq!(StableNetwork::new(&n).unwrap_err(), PropertyError::NotStable);
    }

    #[test]
    fn dashed_and_dotted_trees() {
        let s = stable(FIG1);
        let dashed = tree("((1,2),(3,4));");
        let dotted = tree("((1,3),(2,4));");
        assert!(displays_stable(&s, &dashed).unwrap().holds);
        assert!(is_base_tree(&s, &dashed).unwrap().holds);
        assert!(!displays_stable(&s, &dotted).unwrap().holds);
        assert!(is_tree_based_stable(&s).unwrap().holds);
    }

    #[test]
    fn fig1_not_tree_child_nor_visible() {
        let s = stable(FIG1);
        let n = s.network();
        assert!(is_compressed(n).holds);
        assert!(!is_tree_child_structural(n).holds);
        assert!(!is_tree_child_by_ancestry(n).holds);
        assert!(!is_tree_child_compressed_form(n).holds);
        assert!(!is_tree_child_stable(&s).unwrap().holds);
        assert!(!is_reticulation_visible_structural(n).holds);
        assert!(!is_reticulation_visible_stable(&s).unwrap().holds);
    }

    #[test]
    fn root_alternatives_split() {
        let s = stable(FIG2_III);
        let r = tree_vertex_alternatives(&s, s.network().root()).unwrap();
        assert!(r.holds);
        assert_eq!(r.by_image.len(), 3);
        assert_eq!(r.by_ancestry.len(), 1);
    }

    #[test]
    fn hybrid_chain_is_not_compressed() {
        let n = XNetwork::from_arcs(
            9,
            0,
            [(0, 1), (0, 2), (1, 4), (1, 7), (2, 4), (2, 3), (3, 5), (3, 8), (4, 5), (5, 6)],
            [(6, "1"), (7, "2"), (8, "3")],
        )
        .unwrap();
        let v = is_compressed(&n);
        assert!(!v.holds);
        assert_eq!(v.counterexample, Some(Evidence::Arc(Arc::new(VertexId(4), VertexId(5)))));
        assert!(is_compressed(&parse_enewick(FIG2_III).unwrap()).holds);
    }

    #[test]
    fn path_counting_matches_deletion() {
        let n = parse_enewick(FIG1).unwrap();
        let g = n.graph();
        for v in n.interior_vertices() {
            for (x, &leaf) in n.leaf_map() {
                let expect = v == g.root() || !avoids(g, v, leaf);
                assert_eq!(vertex_stable_ancestor(&n, v, x).unwrap(), expect, "{v} {x}");
            }
        }
    }
}
