//! The fold-up `F(M)` of a MUL-tree, soundness, stability and the map
//! `κ_N` from tree vertices of a stable network to `V(U(N))/~`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::canonical::{equiv_partition, xnetwork_isomorphic, CanonCode, ClassId, EquivPartition, Interner};
use crate::model::{Arc, Label, ModelError, MulTree, PseudoDag, VertexId, XNetwork};
use crate::unfold::{unfold_with_cap, UnfoldError, Unfolding, DEFAULT_PATH_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoldError {
    #[error("{vertex} has outdegree {outdegree}; fold-up of a non-binary MUL-tree is not an X-network")]
    NotBinary { vertex: VertexId, outdegree: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Order in which simultaneously available maximal inextendible classes are
/// folded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FoldOrder {
    /// Smallest canonical code first.
    #[default]
    Canonical,
    /// A pseudo-random choice driven by the seed.
    Seeded(u64),
}

/// One inextendible class: the roots of its isomorphic subMUL-trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtreeClass {
    pub code: CanonCode,
    pub roots: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldStep {
    pub class: CanonCode,
    /// Incoming arcs of the members' roots, in the working graph.
    pub subdivided: Vec<Arc>,
    /// The member whose subtree is kept.
    pub kept: VertexId,
    /// The hybrid vertex created by identifying the subdivision vertices.
    pub merged: VertexId,
}

/// Record of a fold-up. Vertex ids in `steps` refer to the working graph,
/// which starts as a copy of the MUL-tree; `vertex_map` sends the surviving
/// working vertices to the vertices of `result`.
#[derive(Clone, Debug)]
pub struct FoldTrace {
    pub steps: Vec<FoldStep>,
    pub vertex_map: BTreeMap<VertexId, VertexId>,
}

/// Working state: a labelled rooted pseudoDAG.
#[derive(Clone, Debug)]
struct Working {
    g: PseudoDag,
    labels: BTreeMap<VertexId, Label>,
}

impl Working {
    /// Roots of subMUL-trees: vertices entered by a single arc below which
    /// everything is a tree hanging off that arc.
    fn tree_roots(&self) -> Vec<bool> {
        let g = &self.g;
        let mut ok = vec![false; g.id_bound()];
        let order = g.topological_order().expect("acyclic");
        for &v in order.iter().rev() {
            ok[v.index()] = g.indegree(v) == 1 && g.children(v).iter().all(|c| ok[c.index()]);
        }
        ok
    }

    fn inextendible_classes(&self) -> (Vec<SubtreeClass>, Vec<bool>) {
        let ok = self.tree_roots();
        let g = &self.g;
        let mut interner = Interner::default();
        let mut ids = vec![u32::MAX; g.id_bound()];
        let order = g.topological_order().expect("acyclic");
        for &v in order.iter().rev() {
            if !ok[v.index()] {
                continue;
            }
            ids[v.index()] = if g.is_leaf(v) {
                interner.leaf(self.labels.get(&v).map(String::as_str).unwrap_or(""))
            } else {
                interner.node(g.children(v).iter().map(|c| ids[c.index()]).collect())
            };
        }
        let mut groups: BTreeMap<u32, Vec<VertexId>> = BTreeMap::new();
        for v in g.vertices().filter(|v| ok[v.index()]) {
            groups.entry(ids[v.index()]).or_default().push(v);
        }
        let mut in_class = vec![false; g.id_bound()];
        let mut classes: Vec<SubtreeClass> = groups
            .into_iter()
            .filter(|(_, vs)| vs.len() > 1)
            .map(|(id, roots)| {
                for r in &roots {
                    in_class[r.index()] = true;
                }
                SubtreeClass {
                    code: interner.code(id).clone(),
                    roots,
                }
            })
            .collect();
        classes.sort_by(|a, b| a.code.cmp(&b.code));
        (classes, in_class.iter().zip(&ok).map(|(a, b)| *a && *b).collect())
    }

    fn maximal_inextendible(&self) -> Vec<SubtreeClass> {
        let (classes, inext) = self.inextendible_classes();
        let ok = self.tree_roots();
        classes
            .into_iter()
            .filter(|c| {
                c.roots.iter().all(|&r| {
                    // walk up through the tree region containing r
                    let mut v = r;
                    loop {
                        let p = self.g.parents(v)[0];
                        if !ok[p.index()] {
                            return true;
                        }
                        if inext[p.index()] {
                            return false;
                        }
                        v = p;
                    }
                })
            })
            .collect()
    }

    fn fold(&mut self, class: &SubtreeClass) -> FoldStep {
        let kept = class.roots[0];
        let s = self.g.add_vertex();
        let mut subdivided = Vec::new();
        for &r in &class.roots {
            let t = self.g.parents(r)[0];
            subdivided.push(Arc::new(t, r));
            self.g.remove_one_arc(t, r);
            self.g.add_arc(t, s);
        }
        self.g.add_arc(s, kept);
        for &r in &class.roots[1..] {
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                stack.extend_from_slice(self.g.children(v));
                self.labels.remove(&v);
                self.g.remove_vertex(v);
            }
        }
        FoldStep {
            class: class.code.clone(),
            subdivided,
            kept,
            merged: s,
        }
    }
}

/// All maximal inextendible classes of a MUL-tree, by canonical code.
pub fn maximal_inextendible_classes(m: &MulTree) -> Vec<SubtreeClass> {
    Working {
        g: m.tree().clone(),
        labels: m.labels().clone(),
    }
    .maximal_inextendible()
}

/// All inextendible classes (maximal or not), by canonical code.
pub fn inextendible_classes(m: &MulTree) -> Vec<SubtreeClass> {
    Working {
        g: m.tree().clone(),
        labels: m.labels().clone(),
    }
    .inextendible_classes()
    .0
}

fn fold_raw(m: &MulTree, order: FoldOrder) -> (Working, Vec<FoldStep>) {
    let mut w = Working {
        g: m.tree().clone(),
        labels: m.labels().clone(),
    };
    let mut rng = match order {
        FoldOrder::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        FoldOrder::Canonical => None,
    };
    let mut steps = Vec::new();
    loop {
        let classes = w.maximal_inextendible();
        if classes.is_empty() {
            break;
        }
        let pick = match rng.as_mut() {
            Some(r) => r.gen_range(0..classes.len()),
            None => 0,
        };
        steps.push(w.fold(&classes[pick]));
    }
    (w, steps)
}

/// `F(M)`. The MUL-tree must be binary, otherwise the result would violate
/// the outdegree axiom of X-networks.
pub fn fold_up(m: &MulTree) -> Result<(XNetwork, FoldTrace), FoldError> {
    fold_up_ordered(m, FoldOrder::Canonical)
}

pub fn fold_up_ordered(m: &MulTree, order: FoldOrder) -> Result<(XNetwork, FoldTrace), FoldError> {
    for v in m.tree().vertices() {
        let o = m.tree().outdegree(v);
        if o != 0 && o != 2 {
            return Err(FoldError::NotBinary { vertex: v, outdegree: o });
        }
    }
    let (w, steps) = fold_raw(m, order);
    let (g, map) = w.g.compacted();
    let labels = w.labels.iter().map(|(v, l)| (map[v], l.clone())).collect();
    let n = XNetwork::new(g, labels)?;
    Ok((
        n,
        FoldTrace {
            steps,
            vertex_map: map,
        },
    ))
}

/// Soundness by the structural criterion: no two isomorphic subMUL-trees
/// whose roots share a parent.
pub fn is_sound(m: &MulTree) -> bool {
    isomorphic_siblings(m).is_none()
}

/// A pair of siblings with isomorphic subMUL-trees, if any.
pub fn isomorphic_siblings(m: &MulTree) -> Option<(VertexId, VertexId)> {
    let p = equiv_partition(m);
    for v in m.tree().vertices() {
        let ch = m.tree().children(v);
        for (i, &a) in ch.iter().enumerate() {
            for &b in &ch[i + 1..] {
                if p.same(a, b) {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

/// Soundness by folding: the fold-up has no parallel arcs. Works for
/// non-binary MUL-trees as well.
pub fn is_sound_by_folding(m: &MulTree) -> bool {
    !fold_raw(m, FoldOrder::Canonical).0.g.has_parallel_arcs()
}

/// `F(U(N))` with the default path cap.
pub fn stabilize(n: &XNetwork) -> Result<XNetwork, UnfoldError> {
    stabilize_with_cap(n, DEFAULT_PATH_CAP)
}

pub fn stabilize_with_cap(n: &XNetwork, cap: usize) -> Result<XNetwork, UnfoldError> {
    let u = unfold_with_cap(n, cap)?;
    Ok(fold_up(&u.multree).expect("un-folds of X-networks are binary").0)
}

/// `N ≅ F(U(N))`.
pub fn is_stable(n: &XNetwork) -> Result<bool, UnfoldError> {
    is_stable_with_cap(n, DEFAULT_PATH_CAP)
}

pub fn is_stable_with_cap(n: &XNetwork, cap: usize) -> Result<bool, UnfoldError> {
    Ok(xnetwork_isomorphic(n, &stabilize_with_cap(n, cap)?))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KappaError {
    #[error("paths ending at {vertex} fall into {classes} different classes")]
    NotWellDefined { vertex: VertexId, classes: usize },
    #[error("tree vertices {first} and {second} share the class {class}")]
    NotInjective {
        first: VertexId,
        second: VertexId,
        class: ClassId,
    },
    #[error(transparent)]
    Unfold(#[from] UnfoldError),
}

/// `κ_N`: tree vertex of `N` ↦ class of the un-fold vertices whose paths end
/// there. Verified well-defined and bijective on construction.
#[derive(Clone, Debug)]
pub struct Kappa {
    forward: BTreeMap<VertexId, ClassId>,
    backward: BTreeMap<ClassId, VertexId>,
}

impl Kappa {
    pub fn build(n: &XNetwork, u: &Unfolding, p: &EquivPartition) -> Result<Kappa, KappaError> {
        let mut fibres: BTreeMap<VertexId, BTreeSet<ClassId>> = BTreeMap::new();
        for v in u.multree.tree().vertices() {
            fibres.entry(u.index.end_of(v)).or_default().insert(p.class_of(v));
        }
        let mut forward = BTreeMap::new();
        let mut backward: BTreeMap<ClassId, VertexId> = BTreeMap::new();
        for w in n.graph().vertices().filter(|&w| !n.graph().is_hybrid(w)) {
            let cs = &fibres[&w];
            if cs.len() != 1 {
                return Err(KappaError::NotWellDefined {
                    vertex: w,
                    classes: cs.len(),
                });
            }
            let c = *cs.iter().next().expect("one class");
            if let Some(&other) = backward.get(&c) {
                return Err(KappaError::NotInjective {
                    first: other,
                    second: w,
                    class: c,
                });
            }
            backward.insert(c, w);
            forward.insert(w, c);
        }
        Ok(Kappa { forward, backward })
    }

    pub fn apply(&self, w: VertexId) -> ClassId {
        self.forward[&w]
    }

    pub fn inverse(&self, c: ClassId) -> VertexId {
        self.backward[&c]
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, ClassId)> + '_ {
        self.forward.iter().map(|(&w, &c)| (w, c))
    }
}

/// `κ_N` for `N`, computed from a fresh un-fold.
pub fn kappa(n: &XNetwork) -> Result<Kappa, KappaError> {
    let u = unfold_with_cap(n, DEFAULT_PATH_CAP)?;
    let p = equiv_partition(&u.multree);
    Kappa::build(n, &u, &p)
}
