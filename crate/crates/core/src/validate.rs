//! Report-style structural validation of graphs against the axioms of the
//! type they claim to be.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Label, PseudoDag, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    PseudoDag,
    XNetwork,
    PhyloNetwork,
    BinaryPhyloNetwork,
    PhyloTree,
    MulTree,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Claim::PseudoDag => "rooted pseudoDAG",
            Claim::XNetwork => "X-network",
            Claim::PhyloNetwork => "phylogenetic network",
            Claim::BinaryPhyloNetwork => "binary phylogenetic network",
            Claim::PhyloTree => "phylogenetic tree",
            Claim::MulTree => "MUL-tree",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    MissingRoot { root: VertexId },
    RootHasParent { root: VertexId },
    ExtraSource { vertex: VertexId },
    Cycle { vertex: VertexId },
    Unreachable { vertex: VertexId },
    TreeVertexOutdegree { vertex: VertexId, outdegree: usize },
    HybridOutdegree { vertex: VertexId, outdegree: usize },
    LeafDegree { vertex: VertexId, indegree: usize },
    UnlabelledLeaf { vertex: VertexId },
    LabelOnNonLeaf { vertex: VertexId, label: Label },
    LabelOnMissingVertex { vertex: VertexId, label: Label },
    DuplicateLabel { label: Label, vertices: Vec<VertexId> },
    ParallelArc { tail: VertexId, head: VertexId },
    HybridIndegree { vertex: VertexId, indegree: usize },
    HybridInTree { vertex: VertexId },
    UnaryVertex { vertex: VertexId },
    NoTaxa,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            MissingRoot { root } => write!(f, "root {root} is not a vertex"),
            RootHasParent { root } => write!(f, "root {root} has indegree > 0"),
            ExtraSource { vertex } => write!(f, "{vertex} has indegree 0 but is not the root"),
            Cycle { vertex } => write!(f, "{vertex} lies on a directed cycle"),
            Unreachable { vertex } => write!(f, "{vertex} is not reachable from the root"),
            TreeVertexOutdegree { vertex, outdegree } => {
                write!(f, "tree vertex {vertex} has outdegree {outdegree} ≠ 2")
            }
            HybridOutdegree { vertex, outdegree } => {
                write!(f, "hybrid outdegree ≠ 1 at {vertex} (outdegree {outdegree})")
            }
            LeafDegree { vertex, indegree } => write!(f, "leaf {vertex} has indegree {indegree} ≠ 1"),
            UnlabelledLeaf { vertex } => write!(f, "leaf {vertex} carries no taxon"),
            LabelOnNonLeaf { vertex, label } => write!(f, "taxon {label:?} labels non-leaf {vertex}"),
            LabelOnMissingVertex { vertex, label } => write!(f, "taxon {label:?} labels missing vertex {vertex}"),
            DuplicateLabel { label, vertices } => write!(f, "taxon {label:?} labels {} leaves", vertices.len()),
            ParallelArc { tail, head } => write!(f, "parallel arcs from {tail} to {head}"),
            HybridIndegree { vertex, indegree } => write!(f, "hybrid {vertex} has indegree {indegree} ≠ 2"),
            HybridInTree { vertex } => write!(f, "{vertex} is a hybrid vertex"),
            UnaryVertex { vertex } => write!(f, "{vertex} has indegree and outdegree one"),
            NoTaxa => write!(f, "no taxa"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks `g` (with leaf labelling `labels`) against the axioms of `claim`.
/// The report is empty iff the value is a valid instance of the claimed type.
pub fn validate(g: &PseudoDag, labels: &BTreeMap<VertexId, Label>, claim: Claim) -> ValidationReport {
    let mut r = ValidationReport::default();
    let root = g.root();
    if !g.contains(root) {
        r.push(Violation::MissingRoot { root });
        return r;
    }
    if g.indegree(root) != 0 {
        r.push(Violation::RootHasParent { root });
    }
    for v in g.vertices() {
        if v != root && g.indegree(v) == 0 {
            r.push(Violation::ExtraSource { vertex: v });
        }
    }
    match g.topological_order() {
        Some(_) => {}
        None => {
            // report every vertex left over by Kahn's algorithm
            let mut indeg: BTreeMap<VertexId, usize> = g.vertices().map(|v| (v, g.indegree(v))).collect();
            let mut stack: Vec<VertexId> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
            let mut done = BTreeSet::new();
            while let Some(v) = stack.pop() {
                done.insert(v);
                for &c in g.children(v) {
                    let d = indeg.get_mut(&c).unwrap();
                    *d -= 1;
                    if *d == 0 {
                        stack.push(c);
                    }
                }
            }
            for v in g.vertices().filter(|v| !done.contains(v)) {
                r.push(Violation::Cycle { vertex: v });
            }
        }
    }
    let reach = g.reachable_mask(root);
    for v in g.vertices() {
        if !reach[v.index()] {
            r.push(Violation::Unreachable { vertex: v });
        }
    }
    if claim == Claim::PseudoDag {
        return r;
    }

    if labels.is_empty() {
        r.push(Violation::NoTaxa);
    }
    for (v, l) in labels {
        if !g.contains(*v) {
            r.push(Violation::LabelOnMissingVertex {
                vertex: *v,
                label: l.clone(),
            });
        } else if !g.is_leaf(*v) {
            r.push(Violation::LabelOnNonLeaf {
                vertex: *v,
                label: l.clone(),
            });
        }
    }
    for v in g.leaves() {
        if !labels.contains_key(&v) {
            r.push(Violation::UnlabelledLeaf { vertex: v });
        }
    }

    if claim == Claim::MulTree {
        for v in g.vertices() {
            if g.indegree(v) > 1 {
                r.push(Violation::HybridInTree { vertex: v });
            }
            if g.indegree(v) == 1 && g.outdegree(v) == 1 {
                r.push(Violation::UnaryVertex { vertex: v });
            }
        }
        return r;
    }

    let mut by_label: BTreeMap<&Label, Vec<VertexId>> = BTreeMap::new();
    for (v, l) in labels {
        by_label.entry(l).or_default().push(*v);
    }
    for (l, vs) in by_label {
        if vs.len() > 1 {
            r.push(Violation::DuplicateLabel {
                label: l.clone(),
                vertices: vs,
            });
        }
    }
    for v in g.vertices() {
        let (i, o) = (g.indegree(v), g.outdegree(v));
        if o == 0 {
            if i != 1 {
                r.push(Violation::LeafDegree { vertex: v, indegree: i });
            }
            continue;
        }
        if i <= 1 {
            if o != 2 {
                r.push(Violation::TreeVertexOutdegree { vertex: v, outdegree: o });
            }
        } else if o != 1 {
            r.push(Violation::HybridOutdegree { vertex: v, outdegree: o });
        }
    }
    if matches!(claim, Claim::PhyloNetwork | Claim::BinaryPhyloNetwork | Claim::PhyloTree) {
        for a in g.parallel_arcs() {
            if a.key == 1 {
                r.push(Violation::ParallelArc {
                    tail: a.tail,
                    head: a.head,
                });
            }
        }
    }
    if claim == Claim::BinaryPhyloNetwork {
        for v in g.vertices() {
            if g.indegree(v) > 2 {
                r.push(Violation::HybridIndegree {
                    vertex: v,
                    indegree: g.indegree(v),
                });
            }
        }
    }
    if claim == Claim::PhyloTree {
        for v in g.vertices() {
            if g.is_hybrid(v) {
                r.push(Violation::HybridInTree { vertex: v });
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(pairs: &[(u32, &str)]) -> BTreeMap<VertexId, Label> {
        pairs.iter().map(|&(v, l)| (VertexId(v), l.to_string())).collect()
    }

    #[test]
    fn cherry_is_a_tree() {
        let g = PseudoDag::from_arcs(3, 0, [(0, 1), (0, 2)]);
        let r = validate(&g, &labels(&[(1, "a"), (2, "b")]), Claim::PhyloTree);
        assert!(r.is_valid(), "{r}");
    }

    #[test]
    fn hybrid_with_two_children_is_reported() {
        // root 0 -> 1, 0 -> 2, 1 -> 3, 2 -> 3, 3 -> 4, 3 -> 5, 1 -> 6, 2 -> 7
        let g = PseudoDag::from_arcs(8, 0, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (1, 6), (2, 7)]);
        let r = validate(&g, &labels(&[(4, "a"), (5, "b"), (6, "c"), (7, "d")]), Claim::XNetwork);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::HybridOutdegree { vertex, outdegree: 2 } if *vertex == VertexId(3))));
        assert!(r.to_string().contains("hybrid outdegree ≠ 1"));
    }

    #[test]
    fn cycle_and_unreachable() {
        let g = PseudoDag::from_arcs(4, 0, [(0, 1), (2, 3), (3, 2)]);
        let r = validate(&g, &BTreeMap::new(), Claim::PseudoDag);
        assert!(r.violations.contains(&Violation::Cycle { vertex: VertexId(2) }));
        assert!(r.violations.contains(&Violation::Unreachable { vertex: VertexId(3) }));
    }

    #[test]
    fn parallel_arcs_allowed_only_in_xnetworks() {
        // root 0 -> h 1 twice, h -> 2 ... not valid anyway (root outdeg 2 ok, 1 hybrid out 1, leaf 2)
        let g = PseudoDag::from_arcs(3, 0, [(0, 1), (0, 1), (1, 2)]);
        let l = labels(&[(2, "a")]);
        assert!(validate(&g, &l, Claim::XNetwork).is_valid());
        let r = validate(&g, &l, Claim::PhyloNetwork);
        assert_eq!(
            r.violations,
            vec![Violation::ParallelArc {
                tail: VertexId(0),
                head: VertexId(1)
            }]
        );
    }

    #[test]
    fn multree_rejects_unary_and_accepts_repeated_labels() {
        let g = PseudoDag::from_arcs(3, 0, [(0, 1), (0, 2)]);
        assert!(validate(&g, &labels(&[(1, "a"), (2, "a")]), Claim::MulTree).is_valid());
        let g = PseudoDag::from_arcs(4, 0, [(0, 1), (1, 2), (0, 3)]);
        let r = validate(&g, &labels(&[(2, "a"), (3, "b")]), Claim::MulTree);
        assert_eq!(r.violations, vec![Violation::UnaryVertex { vertex: VertexId(1) }]);
    }
}
