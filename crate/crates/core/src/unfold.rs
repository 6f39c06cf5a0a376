//! The un-fold `U(N)` of an X-network: one MUL-tree vertex per directed path
//! from the root that ends in a tree vertex, with the bookkeeping maps that
//! relate the two (`Ψ_N`, `ψ_N`, `φ_N` and `f = end ∘ Ψ_N⁻¹`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{Arc, Label, MulTree, PseudoDag, VertexId, XNetwork};

/// Default bound on the number of root paths an un-fold may enumerate.
pub const DEFAULT_PATH_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnfoldError {
    #[error("network has {count} root paths, more than the cap of {cap}")]
    PathCapExceeded { count: u128, cap: usize },
    #[error("unknown taxon {0:?}")]
    UnknownLabel(Label),
    #[error("not a root path: {0}")]
    NotARootPath(String),
    #[error("path ends in hybrid vertex {0}")]
    EndsInHybrid(VertexId),
}

/// A directed path starting at the root, given by its arcs. The empty path
/// is the trivial path at the root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootPath {
    arcs: Vec<Arc>,
    end: VertexId,
}

impl RootPath {
    /// Checks that `arcs` is a directed path of `n` starting at the root.
    pub fn new(n: &XNetwork, arcs: Vec<Arc>) -> Result<Self, UnfoldError> {
        let g = n.graph();
        let mut at = g.root();
        for a in &arcs {
            if a.tail != at || !g.has_arc(*a) {
                return Err(UnfoldError::NotARootPath(format!("arc {a} does not continue the path at {at}")));
            }
            at = a.head;
        }
        Ok(RootPath { arcs, end: at })
    }

    /// Builds a path from its vertex sequence, always using the arc with key 0.
    pub fn from_vertices(n: &XNetwork, vs: &[VertexId]) -> Result<Self, UnfoldError> {
        match vs.first() {
            Some(&r) if r == n.root() => {}
            _ => return Err(UnfoldError::NotARootPath("must start at the root".into())),
        }
        let arcs = vs.windows(2).map(|w| Arc::new(w[0], w[1])).collect();
        RootPath::new(n, arcs)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Vertex sequence, root first.
    pub fn vertices(&self, root: VertexId) -> Vec<VertexId> {
        let mut out = vec![root];
        out.extend(self.arcs.iter().map(|a| a.head));
        out
    }

    /// Does the path pass through `v` (including its endpoints)?
    pub fn crosses(&self, root: VertexId, v: VertexId) -> bool {
        root == v || self.arcs.iter().any(|a| a.head == v)
    }

    fn extended(&self, a: Arc) -> RootPath {
        let mut arcs = self.arcs.clone();
        arcs.push(a);
        RootPath { arcs, end: a.head }
    }
}

impl fmt::Display for RootPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.arcs.first() {
            None => write!(f, "[{}]", self.end),
            Some(first) => {
                write!(f, "[{}", first.tail)?;
                for a in &self.arcs {
                    if a.key == 0 {
                        write!(f, "→{}", a.head)?;
                    } else {
                        write!(f, "→{}#{}", a.head, a.key)?;
                    }
                }
                f.write_str("]")
            }
        }
    }
}

/// Which family of root paths to enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathMode {
    /// `π(N)`: every root path.
    All,
    /// `π_x(N)`: paths ending at the leaf labelled `x`.
    ToTaxon(Label),
    /// `π⁻(N)`: paths ending at a tree vertex (leaves included).
    ToTreeVertices,
    /// `π₀(N)`: paths ending at a leaf.
    ToLeaves,
}

/// Number of root paths of `n` (all of `π(N)`), saturating.
pub fn count_paths(n: &XNetwork) -> u128 {
    let g = n.graph();
    let order = g.topological_order().expect("X-networks are acyclic");
    let mut into = vec![0u128; g.id_bound()];
    into[g.root().index()] = 1;
    let mut total = 0u128;
    for v in order {
        let k = into[v.index()];
        total = total.saturating_add(k);
        for &c in g.children(v) {
            into[c.index()] = into[c.index()].saturating_add(k);
        }
    }
    total
}

/// Enumerates the requested path family in lexicographic order of the arc
/// sequences (a path precedes its extensions).
pub fn enumerate_paths(n: &XNetwork, mode: &PathMode, cap: usize) -> Result<Vec<RootPath>, UnfoldError> {
    let count = count_paths(n);
    if count > cap as u128 {
        return Err(UnfoldError::PathCapExceeded { count, cap });
    }
    let g = n.graph();
    let target = match mode {
        PathMode::ToTaxon(x) => Some(n.leaf(x).ok_or_else(|| UnfoldError::UnknownLabel(x.clone()))?),
        _ => None,
    };
    let useful = match target {
        Some(t) => reaches(g, t),
        None => vec![true; g.id_bound()],
    };
    let keep = |v: VertexId| match mode {
        PathMode::All => true,
        PathMode::ToTaxon(_) => Some(v) == target,
        PathMode::ToTreeVertices => !g.is_hybrid(v),
        PathMode::ToLeaves => g.is_leaf(v),
    };
    let mut out = Vec::new();
    let mut stack = vec![RootPath {
        arcs: Vec::new(),
        end: g.root(),
    }];
    while let Some(p) = stack.pop() {
        if !useful[p.end.index()] {
            continue;
        }
        for a in g.out_arcs(p.end).into_iter().rev() {
            stack.push(p.extended(a));
        }
        if keep(p.end) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Vertices from which `t` can be reached.
fn reaches(g: &PseudoDag, t: VertexId) -> Vec<bool> {
    let mut seen = vec![false; g.id_bound()];
    let mut stack = vec![t];
    seen[t.index()] = true;
    while let Some(v) = stack.pop() {
        for &p in g.parents(v) {
            if !seen[p.index()] {
                seen[p.index()] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// The intermediate tree `U*(N)`: one vertex per root path, path `P·a` a
/// child of `P`. Vertex `i` is the `i`-th path in lexicographic order.
#[derive(Clone, Debug)]
pub struct UnfoldStar {
    pub graph: PseudoDag,
    pub paths: Vec<RootPath>,
    pub labels: BTreeMap<VertexId, Label>,
}

pub fn unfold_star(n: &XNetwork, cap: usize) -> Result<UnfoldStar, UnfoldError> {
    let paths = enumerate_paths(n, &PathMode::All, cap)?;
    let index: BTreeMap<&[Arc], u32> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.arcs.as_slice(), i as u32))
        .collect();
    let arcs = paths.iter().enumerate().skip(1).map(|(i, p)| {
        let parent = index[&p.arcs[..p.arcs.len() - 1]];
        (parent, i as u32)
    });
    let graph = PseudoDag::from_arcs(paths.len(), 0, arcs.collect::<Vec<_>>());
    let labels = paths
        .iter()
        .enumerate()
        .filter_map(|(i, p)| n.label(p.end).map(|l| (VertexId(i as u32), l.clone())))
        .collect();
    Ok(UnfoldStar { graph, paths, labels })
}

/// `Ψ_N` and the maps derived from it, indexed by the vertices of `U(N)`.
#[derive(Clone, Debug)]
pub struct PathIndex {
    paths: Vec<RootPath>,
    psi: BTreeMap<Vec<Arc>, VertexId>,
    phi: BTreeMap<Label, BTreeSet<VertexId>>,
    end_of: Vec<VertexId>,
}

impl PathIndex {
    /// `Ψ_N⁻¹(v)`.
    pub fn path(&self, v: VertexId) -> &RootPath {
        &self.paths[v.index()]
    }

    /// `Ψ_N(p)`, if `p` ends in a tree vertex.
    pub fn vertex_of(&self, p: &RootPath) -> Option<VertexId> {
        self.psi.get(&p.arcs).copied()
    }

    /// `φ_N(x)`.
    pub fn phi(&self, x: &str) -> Option<&BTreeSet<VertexId>> {
        self.phi.get(x)
    }

    /// `f(v) = end(Ψ_N⁻¹(v))`.
    pub fn end_of(&self, v: VertexId) -> VertexId {
        self.end_of[v.index()]
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Vertices of `U(N)` whose path ends at `w`.
    pub fn fibre(&self, w: VertexId) -> Vec<VertexId> {
        (0..self.end_of.len())
            .filter(|&i| self.end_of[i] == w)
            .map(|i| VertexId(i as u32))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Unfolding {
    pub multree: MulTree,
    pub index: PathIndex,
}

/// `U(N)` with the default path cap.
pub fn unfold(n: &XNetwork) -> Result<Unfolding, UnfoldError> {
    unfold_with_cap(n, DEFAULT_PATH_CAP)
}

/// `U(N)`: build `U*(N)`, suppress the vertices for paths ending in hybrid
/// vertices, then number the vertices breadth-first.
pub fn unfold_with_cap(n: &XNetwork, cap: usize) -> Result<Unfolding, UnfoldError> {
    let star = unfold_star(n, cap)?;
    let mut g = star.graph.clone();
    for (i, p) in star.paths.iter().enumerate() {
        if n.graph().is_hybrid(p.end) {
            g.suppress_in_place(VertexId(i as u32));
        }
    }
    let (g, map) = g.compacted();
    let mut paths = vec![None; g.id_bound()];
    for (old, new) in &map {
        paths[new.index()] = Some(star.paths[old.index()].clone());
    }
    let paths: Vec<RootPath> = paths.into_iter().map(|p| p.expect("every vertex has a path")).collect();
    let labels: BTreeMap<VertexId, Label> = star
        .labels
        .iter()
        .map(|(v, l)| (map[v], l.clone()))
        .collect();
    let multree = MulTree::new_unchecked(g, labels);
    let psi = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.arcs.clone(), VertexId(i as u32)))
        .collect();
    let end_of = paths.iter().map(|p| p.end).collect();
    let phi = multree.mu_map().clone();
    Ok(Unfolding {
        multree,
        index: PathIndex {
            paths,
            psi,
            phi,
            end_of,
        },
    })
}

/// Two arc-disjoint directed paths with a common start and a common end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReticulationCycle {
    pub start: VertexId,
    pub end: VertexId,
    pub p1: Vec<Arc>,
    pub p2: Vec<Arc>,
}

/// Looks for a reticulation cycle inside the union of two paths of `π⁻(N)`.
pub fn find_reticulation_cycle(
    n: &XNetwork,
    p1: &RootPath,
    p2: &RootPath,
) -> Result<Option<ReticulationCycle>, UnfoldError> {
    for p in [p1, p2] {
        RootPath::new(n, p.arcs.clone())?;
        if n.graph().is_hybrid(p.end) {
            return Err(UnfoldError::EndsInHybrid(p.end));
        }
    }
    let fork = p1.arcs.iter().zip(&p2.arcs).take_while(|(a, b)| a == b).count();
    if fork == p1.len() || fork == p2.len() {
        return Ok(None);
    }
    let start = p1.arcs[fork].tail;
    let (q1, q2) = (&p1.arcs[fork..], &p2.arcs[fork..]);
    let on_q2: BTreeMap<VertexId, usize> = q2.iter().enumerate().map(|(i, a)| (a.head, i)).collect();
    for (i, a) in q1.iter().enumerate() {
        if let Some(&j) = on_q2.get(&a.head) {
            return Ok(Some(ReticulationCycle {
                start,
                end: a.head,
                p1: q1[..=i].to_vec(),
                p2: q2[..=j].to_vec(),
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(n: usize, arcs: &[(u32, u32)], labels: &[(u32, &str)]) -> XNetwork {
        XNetwork::from_arcs(n, 0, arcs.iter().copied(), labels.iter().map(|&(v, l)| (v, l))).unwrap()
    }

    // ((a,b),c)
    fn tree() -> XNetwork {
        net(5, &[(0, 1), (0, 2), (1, 3), (1, 4)], &[(2, "c"), (3, "a"), (4, "b")])
    }

    // root 0 -> 1, 0 -> 2; 1 -> 3 (hybrid), 2 -> 3; 1 -> 4 (a), 2 -> 5 (c); 3 -> 6 (b)
    fn one_hybrid() -> XNetwork {
        net(
            7,
            &[(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 6)],
            &[(4, "a"), (5, "c"), (6, "b")],
        )
    }

    #[test]
    fn tree_has_one_path_per_vertex() {
        let t = tree();
        assert_eq!(count_paths(&t), 5);
        let ps = enumerate_paths(&t, &PathMode::All, 100).unwrap();
        assert_eq!(ps.len(), 5);
        let ends: BTreeSet<VertexId> = ps.iter().map(|p| p.end()).collect();
        assert_eq!(ends.len(), 5);
    }

    #[test]
    fn paths_are_sorted_and_distinct() {
        let n = one_hybrid();
        let ps = enumerate_paths(&n, &PathMode::All, 100).unwrap();
        assert!(ps.windows(2).all(|w| w[0].arcs < w[1].arcs));
        assert_eq!(ps.len() as u128, count_paths(&n));
    }

    #[test]
    fn cap_reports_count() {
        let n = one_hybrid();
        assert_eq!(
            enumerate_paths(&n, &PathMode::All, 3),
            Err(UnfoldError::PathCapExceeded { count: 9, cap: 3 })
        );
    }

    #[test]
    fn unfolding_a_tree_is_the_tree() {
        let u = unfold(&tree()).unwrap();
        assert_eq!(u.multree.tree().vertex_count(), 5);
        assert!(u.multree.mu_map().values().all(|s| s.len() == 1));
        for v in u.multree.tree().vertices() {
            assert_eq!(u.index.vertex_of(u.index.path(v)), Some(v));
        }
    }

    #[test]
    fn hybrid_leaf_is_duplicated() {
        let n = one_hybrid();
        let u = unfold(&n).unwrap();
        assert_eq!(u.multree.mu("b").unwrap().len(), 2);
        assert_eq!(u.multree.leaf_count(), 4);
        assert_eq!(u.index.len(), u.multree.tree().vertex_count());
        let leaves = enumerate_paths(&n, &PathMode::ToLeaves, 100).unwrap();
        assert_eq!(leaves.len(), u.multree.leaf_count());
        let to_b = enumerate_paths(&n, &PathMode::ToTaxon("b".into()), 100).unwrap();
        let phi: BTreeSet<VertexId> = to_b.iter().map(|p| u.index.vertex_of(p).unwrap()).collect();
        assert_eq!(&phi, u.index.phi("b").unwrap());
    }

    #[test]
    fn cycle_through_hybrid() {
        let n = one_hybrid();
        let v = |i| VertexId(i);
        let p1 = RootPath::from_vertices(&n, &[v(0), v(1), v(3), v(6)]).unwrap();
        let p2 = RootPath::from_vertices(&n, &[v(0), v(2), v(3), v(6)]).unwrap();
        let c = find_reticulation_cycle(&n, &p1, &p2).unwrap().unwrap();
        assert_eq!((c.start, c.end), (v(0), v(3)));
        let p3 = RootPath::from_vertices(&n, &[v(0), v(1), v(4)]).unwrap();
        assert_eq!(find_reticulation_cycle(&n, &p1, &p3).unwrap(), None);
        let hyb = RootPath::from_vertices(&n, &[v(0), v(1), v(3)]).unwrap();
        assert_eq!(find_reticulation_cycle(&n, &hyb, &p1), Err(UnfoldError::EndsInHybrid(v(3))));
    }
}
