//! Leaf removal for networks and MUL-trees, induced subnetworks, trinets,
//! triplets and MUL-triplets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::canonical::{canon_code, multree_isomorphic, CanonCode};
use crate::model::{lca_unchecked, Label, ModelError, MulTree, PhyloTree, PseudoDag, VertexId, XNetwork};
use crate::oracles::{oracle_displays, Budget, BudgetExceeded};
use crate::unfold::{unfold_with_cap, UnfoldError, DEFAULT_PATH_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubnetError {
    #[error("unknown taxon {0}")]
    UnknownLabel(String),
    #[error("removing {0} would leave no taxa")]
    LastTaxon(String),
    #[error("need at least {need} taxa, got {got}")]
    TooFewTaxa { need: usize, got: usize },
    #[error("leaf removal produced an invalid network: {0}")]
    Degenerate(ModelError),
    #[error(transparent)]
    Unfold(#[from] UnfoldError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// Deletes every unlabelled vertex of outdegree zero other than the root and
/// suppresses every vertex of indegree and outdegree one, until neither
/// applies. A root of outdegree one is replaced by its child.
fn clean(g: &mut PseudoDag, labels: &BTreeMap<VertexId, Label>) {
    loop {
        let mut changed = false;
        let vs: Vec<VertexId> = g.vertices().collect();
        for v in vs {
            if !g.contains(v) {
                continue;
            }
            if v != g.root() && g.outdegree(v) == 0 && !labels.contains_key(&v) {
                g.remove_vertex(v);
                changed = true;
            } else if g.indegree(v) == 1 && g.outdegree(v) == 1 {
                g.suppress_in_place(v);
                changed = true;
            } else if v == g.root() && g.outdegree(v) == 1 {
                let c = g.children(v)[0];
                g.remove_vertex(v);
                g.set_root(c);
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Removes the leaf `l`, then deletes dangling vertices and suppresses
/// vertices of indegree and outdegree one until the result is an
/// `(X - {l})`-network.
pub fn remove_leaf(n: &XNetwork, l: &str) -> Result<XNetwork, SubnetError> {
    let leaf = n.leaf(l).ok_or_else(|| SubnetError::UnknownLabel(l.to_string()))?;
    if n.taxon_count() < 2 {
        return Err(SubnetError::LastTaxon(l.to_string()));
    }
    let mut g = n.graph().clone();
    let mut labels = n.labels().clone();
    labels.remove(&leaf);
    g.remove_vertex(leaf);
    clean(&mut g, &labels);
    let out = XNetwork::new(g, labels).map_err(SubnetError::Degenerate)?;
    Ok(out.compacted())
}

/// `N_Y`: all taxa outside `y` removed, in sorted order.
pub fn induced_subnetwork(n: &XNetwork, y: &BTreeSet<Label>) -> Result<XNetwork, SubnetError> {
    if y.len() < 3 {
        return Err(SubnetError::TooFewTaxa { need: 3, got: y.len() });
    }
    if let Some(x) = y.iter().find(|x| n.leaf(x).is_none()) {
        return Err(SubnetError::UnknownLabel(x.clone()));
    }
    let mut out = n.clone();
    for x in n.taxa().filter(|x| !y.contains(*x)) {
        out = remove_leaf(&out, x)?;
    }
    Ok(out)
}

fn three_subsets(taxa: &[Label]) -> Vec<BTreeSet<Label>> {
    let mut out = Vec::new();
    for i in 0..taxa.len() {
        for j in i + 1..taxa.len() {
            for k in j + 1..taxa.len() {
                out.push([taxa[i].clone(), taxa[j].clone(), taxa[k].clone()].into_iter().collect());
            }
        }
    }
    out
}

/// `N_Y` for every 3-subset `Y` of the taxa.
pub fn trinets(n: &XNetwork) -> Result<BTreeMap<BTreeSet<Label>, XNetwork>, SubnetError> {
    let taxa: Vec<Label> = n.taxa().cloned().collect();
    if taxa.len() < 3 {
        return Err(SubnetError::TooFewTaxa { need: 3, got: taxa.len() });
    }
    three_subsets(&taxa)
        .into_iter()
        .map(|y| induced_subnetwork(n, &y).map(|t| (y, t)))
        .collect()
}

/// The rooted triplet `ab|c`; `pair` is sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triplet {
    pub pair: [Label; 2],
    pub outgroup: Label,
}

impl Triplet {
    pub fn new(a: &str, b: &str, c: &str) -> Self {
        let mut pair = [a.to_string(), b.to_string()];
        pair.sort();
        Triplet {
            pair,
            outgroup: c.to_string(),
        }
    }

    pub fn tree(&self) -> PhyloTree {
        let [a, b] = &self.pair;
        let net = XNetwork::from_arcs(
            5,
            0,
            [(0, 1), (0, 2), (1, 3), (1, 4)],
            [(3, a.as_str()), (4, b.as_str()), (2, self.outgroup.as_str())],
        )
        .expect("triplet shape");
        PhyloTree::try_from(net).expect("triplet is a tree")
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = &self.pair;
        if a.chars().count() == 1 && b.chars().count() == 1 && self.outgroup.chars().count() == 1 {
            write!(f, "{a}{b}|{}", self.outgroup)
        } else {
            write!(f, "{a},{b}|{}", self.outgroup)
        }
    }
}

/// Triplets displayed by `n`, by embedding search.
pub fn triplets(n: &XNetwork, budget: &mut Budget) -> Result<BTreeSet<Triplet>, SubnetError> {
    let taxa: Vec<Label> = n.taxa().cloned().collect();
    let mut out = BTreeSet::new();
    for y in three_subsets(&taxa) {
        let v: Vec<&Label> = y.iter().collect();
        for t in [
            Triplet::new(v[0], v[1], v[2]),
            Triplet::new(v[0], v[2], v[1]),
            Triplet::new(v[1], v[2], v[0]),
        ] {
            if oracle_displays(n, t.tree().as_xnetwork(), budget)? {
                out.insert(t);
            }
        }
    }
    Ok(out)
}

/// Triplets of a phylogenetic tree, read off last common ancestors.
pub fn tree_triplets(t: &PhyloTree) -> BTreeSet<Triplet> {
    let g = t.graph();
    let taxa: Vec<Label> = t.taxa().cloned().collect();
    let depth = depths(g);
    let lca = |a: &str, b: &str| lca_unchecked(g, &[t.leaf(a).expect("taxon"), t.leaf(b).expect("taxon")]);
    let mut out = BTreeSet::new();
    for y in three_subsets(&taxa) {
        let v: Vec<&Label> = y.iter().collect();
        let cands = [(v[0], v[1], v[2]), (v[0], v[2], v[1]), (v[1], v[2], v[0])];
        let (a, b, c) = cands
            .into_iter()
            .max_by_key(|(a, b, _)| depth[lca(a, b).index()])
            .expect("three candidates");
        out.insert(Triplet::new(a, b, c));
    }
    out
}

fn depths(g: &PseudoDag) -> Vec<usize> {
    let mut depth = vec![0usize; g.id_bound()];
    for v in g.bfs_order() {
        for &c in g.children(v) {
            depth[c.index()] = depth[v.index()] + 1;
        }
    }
    depth
}

/// `M_Y`: every leaf labelled outside `y` removed, then the same clean-up as
/// for networks.
pub fn restrict_multree(m: &MulTree, y: &BTreeSet<Label>) -> Result<MulTree, SubnetError> {
    if y.is_empty() {
        return Err(SubnetError::TooFewTaxa { need: 1, got: 0 });
    }
    if let Some(x) = y.iter().find(|x| m.mu(x).is_none()) {
        return Err(SubnetError::UnknownLabel(x.clone()));
    }
    let mut g = m.tree().clone();
    let mut labels = m.labels().clone();
    for (v, x) in m.labels() {
        if !y.contains(x) {
            labels.remove(v);
            g.remove_vertex(*v);
        }
    }
    clean(&mut g, &labels);
    let out = MulTree::new(g, labels).map_err(SubnetError::Degenerate)?;
    Ok(out.compacted())
}

/// The subtree spanned by `leaves` with unary vertices suppressed.
fn spanned(m: &MulTree, leaves: &[VertexId]) -> MulTree {
    let g = m.tree();
    let top = lca_unchecked(g, leaves);
    let mut keep = BTreeSet::new();
    for &l in leaves {
        let mut v = l;
        while keep.insert(v) && v != top {
            v = g.parents(v)[0];
        }
    }
    let mut sub = PseudoDag::from_arcs(g.id_bound(), top.0, std::iter::empty());
    for &v in &keep {
        for &c in g.children(v) {
            if keep.contains(&c) {
                sub.add_arc(v, c);
            }
        }
    }
    for v in g.vertices().filter(|v| !keep.contains(v)) {
        sub.remove_vertex(v);
    }
    let labels = leaves.iter().map(|&l| (l, m.label(l).expect("leaf").clone())).collect();
    clean(&mut sub, &labels);
    MulTree::new_unchecked(sub, labels).compacted()
}

/// Canonical codes of all MUL-triplets displayed by `m`: one per choice of
/// three leaves.
pub fn mul_triplets(m: &MulTree) -> BTreeSet<CanonCode> {
    let leaves: Vec<VertexId> = m.labels().keys().copied().collect();
    let mut out = BTreeSet::new();
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            for k in j + 1..leaves.len() {
                let t = spanned(m, &[leaves[i], leaves[j], leaves[k]]);
                out.insert(canon_code(&t, t.root()).expect("root"));
            }
        }
    }
    out
}

/// Does `m` display the MUL-tree `tau` on three leaves?
pub fn displays_mul_triplet(m: &MulTree, tau: &MulTree) -> bool {
    if tau.leaf_count() != 3 {
        return false;
    }
    let want = canon_code(tau, tau.root()).expect("root");
    let mut by_label: BTreeMap<&Label, Vec<VertexId>> = BTreeMap::new();
    for (v, x) in tau.labels() {
        by_label.entry(x).or_default().push(*v);
    }
    // only leaves carrying the labels of tau can take part
    let leaves: Vec<VertexId> = m
        .labels()
        .iter()
        .filter(|(_, x)| by_label.contains_key(x))
        .map(|(v, _)| *v)
        .collect();
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            for k in j + 1..leaves.len() {
                let t = spanned(m, &[leaves[i], leaves[j], leaves[k]]);
                if canon_code(&t, t.root()).expect("root") == want {
                    return true;
                }
            }
        }
    }
    false
}

/// `U(N_Y) ≅ U(N)_Y`.
pub fn unfold_commutes_with_restriction(n: &XNetwork, y: &BTreeSet<Label>) -> Result<bool, SubnetError> {
    let left = unfold_with_cap(&induced_subnetwork(n, y)?, DEFAULT_PATH_CAP)?.multree;
    let right = restrict_multree(&unfold_with_cap(n, DEFAULT_PATH_CAP)?.multree, y)?;
    Ok(multree_isomorphic(&left, &right).holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::xnetwork_isomorphic;
    use crate::io::{parse_enewick, parse_mulnewick};

    fn set(xs: &[&str]) -> BTreeSet<Label> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn cherry_leaf_removal() {
        let n = parse_enewick("((1,2),(3,4));").unwrap();
        let r = remove_leaf(&n, "4").unwrap();
        assert!(xnetwork_isomorphic(&r, &parse_enewick("((1,2),3);").unwrap()));
    }

    #[test]
    fn root_child_removal_identifies_root() {
        let n = parse_enewick("(1,(2,3));").unwrap();
        let r = remove_leaf(&n, "1").unwrap();
        assert!(xnetwork_isomorphic(&r, &parse_enewick("(2,3);").unwrap()));
    }

    #[test]
    fn hybrid_leaf_removal_drops_the_hybrid() {
        let n = parse_enewick("(((1)#H1,2),(#H1,3));").unwrap();
        let r = remove_leaf(&n, "1").unwrap();
        assert!(xnetwork_isomorphic(&r, &parse_enewick("(2,3);").unwrap()));
        assert_eq!(r.graph().vertex_count(), 3);
    }

    #[test]
    fn unknown_and_small() {
        let n = parse_enewick("((1,2),3);").unwrap();
        assert!(matches!(remove_leaf(&n, "9"), Err(SubnetError::UnknownLabel(_))));
        assert!(matches!(
            induced_subnetwork(&n, &set(&["1", "2"])),
            Err(SubnetError::TooFewTaxa { .. })
        ));
    }

    #[test]
    fn quartet_triplets() {
        let t = PhyloTree::try_from(parse_enewick("((a,b),(c,d));").unwrap()).unwrap();
        let want: BTreeSet<Triplet> = [
            Triplet::new("a", "b", "c"),
            Triplet::new("a", "b", "d"),
            Triplet::new("c", "d", "a"),
            Triplet::new("c", "d", "b"),
        ]
        .into_iter()
        .collect();
        assert_eq!(tree_triplets(&t), want);
        assert_eq!(triplets(t.as_xnetwork(), &mut Budget::default()).unwrap(), want);
        assert_eq!(Triplet::new("b", "a", "c").to_string(), "ab|c");
    }

    #[test]
    fn multree_restriction() {
        let m = parse_mulnewick("(((1,(2,3)),(1,2)),4);").unwrap();
        let r = restrict_multree(&m, &set(&["1", "2", "4"])).unwrap();
        assert!(multree_isomorphic(&r, &parse_mulnewick("(((1,2),(1,2)),4);").unwrap()).holds());
    }

    #[test]
    fn mul_triplets_of_tree_are_triplets() {
        let m = parse_mulnewick("((a,b),(c,d));").unwrap();
        assert_eq!(mul_triplets(&m).len(), 4);
        let tau = parse_mulnewick("((1,2),1);").unwrap();
        assert!(displays_mul_triplet(&parse_mulnewick("((1,2),(1,3));").unwrap(), &tau));
        assert!(!displays_mul_triplet(&parse_mulnewick("((1,1),2);").unwrap(), &tau));
    }
}
