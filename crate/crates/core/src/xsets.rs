//! X-sets of a MUL-tree and the maps attached to them: the trees `M_C⁺` and
//! `M_C`, the embeddings `ξ_C`, `ξ⁺_C`, their projections `ξ̄_C`, `ξ̄⁺_C`
//! into `V(M)/~`, and the set `V(M)^C`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::canonical::{canon_code, ClassId, EquivPartition};
use crate::model::{lca_unchecked, Label, ModelError, MulTree, PhyloTree, PseudoDag, VertexId, XNetwork};
use crate::oracles::{oracle_display_embeddings, Budget, BudgetExceeded};
use crate::unfold::{RootPath, Unfolding};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum XSetError {
    #[error("{count} X-sets, more than the limit of {limit}")]
    LimitExceeded { count: u128, limit: usize },
    #[error("not an X-set: {0}")]
    Invalid(String),
    #[error("M_C needs at least two taxa")]
    TooFewTaxa,
}

/// One leaf chosen from `μ(x)` for every taxon `x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct XSet {
    chosen: BTreeMap<Label, VertexId>,
}

impl XSet {
    pub fn new(m: &MulTree, chosen: BTreeMap<Label, VertexId>) -> Result<Self, XSetError> {
        if chosen.len() != m.mu_map().len() {
            return Err(XSetError::Invalid(format!(
                "{} taxa chosen, MUL-tree has {}",
                chosen.len(),
                m.mu_map().len()
            )));
        }
        for (x, v) in &chosen {
            match m.mu(x) {
                Some(s) if s.contains(v) => {}
                Some(_) => return Err(XSetError::Invalid(format!("{v} is not labelled {x}"))),
                None => return Err(XSetError::Invalid(format!("unknown taxon {x}"))),
            }
        }
        Ok(XSet { chosen })
    }

    pub fn leaf(&self, x: &str) -> Option<VertexId> {
        self.chosen.get(x).copied()
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.chosen.values().copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Label, VertexId)> + '_ {
        self.chosen.iter().map(|(l, v)| (l, *v))
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }
}

impl fmt::Display for XSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, v)) in self.chosen.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}:{v}")?;
        }
        f.write_str("}")
    }
}

/// `∏_x |μ(x)|`, saturating.
pub fn xset_count(m: &MulTree) -> u128 {
    m.mu_map()
        .values()
        .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
}

/// All X-sets in lexicographic order: by taxon, then by leaf id.
pub struct XSetIter {
    taxa: Vec<Label>,
    options: Vec<Vec<VertexId>>,
    index: Vec<usize>,
    done: bool,
}

impl Iterator for XSetIter {
    type Item = XSet;

    fn next(&mut self) -> Option<XSet> {
        if self.done {
            return None;
        }
        let chosen = self
            .taxa
            .iter()
            .zip(&self.index)
            .zip(&self.options)
            .map(|((x, &i), opts)| (x.clone(), opts[i]))
            .collect();
        let mut k = self.index.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.index[k] += 1;
            if self.index[k] < self.options[k].len() {
                break;
            }
            self.index[k] = 0;
        }
        Some(XSet { chosen })
    }
}

pub fn enumerate_xsets(m: &MulTree) -> XSetIter {
    let taxa: Vec<Label> = m.mu_map().keys().cloned().collect();
    let options: Vec<Vec<VertexId>> = m.mu_map().values().map(|s| s.iter().copied().collect()).collect();
    XSetIter {
        index: vec![0; taxa.len()],
        done: options.iter().any(|o| o.is_empty()),
        taxa,
        options,
    }
}

/// All X-sets, or an error if there are more than `limit`.
pub fn collect_xsets(m: &MulTree, limit: Option<usize>) -> Result<Vec<XSet>, XSetError> {
    let count = xset_count(m);
    if let Some(limit) = limit {
        if count > limit as u128 {
            return Err(XSetError::LimitExceeded { count, limit });
        }
    }
    Ok(enumerate_xsets(m).collect())
}

/// `M_C⁺`, `M_C` and the maps between them and `M`.
#[derive(Clone, Debug)]
pub struct XSetMaps {
    pub xset: XSet,
    /// `r_C = lca_M(C)`.
    pub r_c: VertexId,
    /// `M_C⁺`, numbered breadth-first from its root; may have unary vertices.
    pub m_c_plus: PseudoDag,
    pub m_c_plus_labels: BTreeMap<VertexId, Label>,
    /// `ξ⁺_C`, indexed by the vertices of `M_C⁺`.
    pub xi_plus: Vec<VertexId>,
    /// `M_C`: `M_C⁺` with unary vertices suppressed.
    pub m_c: PhyloTree,
    /// `ι₁`, indexed by the vertices of `M_C`.
    pub iota1: Vec<VertexId>,
}

impl XSetMaps {
    /// `ξ_C = ξ⁺_C ∘ ι₁`.
    pub fn xi(&self, v: VertexId) -> VertexId {
        self.xi_plus[self.iota1[v.index()].index()]
    }

    /// `ξ̄⁺_C` as a vector indexed by the vertices of `M_C⁺`.
    pub fn xi_bar_plus(&self, p: &EquivPartition) -> Vec<ClassId> {
        self.xi_plus.iter().map(|&v| p.class_of(v)).collect()
    }

    /// `ξ̄_C` as a vector indexed by the vertices of `M_C`.
    pub fn xi_bar(&self, p: &EquivPartition) -> Vec<ClassId> {
        (0..self.iota1.len()).map(|i| p.class_of(self.xi(VertexId(i as u32)))).collect()
    }

    /// `r̄_C`.
    pub fn r_c_class(&self, p: &EquivPartition) -> ClassId {
        p.class_of(self.r_c)
    }

    /// The image `ξ̄⁺_C(V(M_C⁺))`.
    pub fn image(&self, p: &EquivPartition) -> BTreeSet<ClassId> {
        self.xi_plus.iter().map(|&v| p.class_of(v)).collect()
    }

    pub fn is_injective(&self, p: &EquivPartition) -> bool {
        self.image(p).len() == self.xi_plus.len()
    }

    /// Injective and onto `V(M)/~`.
    pub fn is_bijective(&self, p: &EquivPartition) -> bool {
        self.is_injective(p) && self.xi_plus.len() == p.class_count()
    }

    /// Two vertices of `M_C⁺` that `ξ̄⁺_C` identifies, if any.
    pub fn collision(&self, p: &EquivPartition) -> Option<(VertexId, VertexId)> {
        let mut seen: BTreeMap<ClassId, VertexId> = BTreeMap::new();
        for (i, &v) in self.xi_plus.iter().enumerate() {
            if let Some(&j) = seen.get(&p.class_of(v)) {
                return Some((j, VertexId(i as u32)));
            }
            seen.insert(p.class_of(v), VertexId(i as u32));
        }
        None
    }
}

/// Builds `M_C⁺` (the vertices of `M` on a path from `r_C` to a leaf of `C`)
/// and `M_C`.
pub fn restrict_to_xset(m: &MulTree, c: &XSet) -> Result<XSetMaps, XSetError> {
    XSet::new(m, c.chosen.clone())?;
    if c.len() < 2 {
        return Err(XSetError::TooFewTaxa);
    }
    let tree = m.tree();
    let leaves: Vec<VertexId> = c.leaves().collect();
    let r_c = lca_unchecked(tree, &leaves);
    let mut keep = vec![false; tree.id_bound()];
    for &l in &leaves {
        let mut v = l;
        while !keep[v.index()] {
            keep[v.index()] = true;
            if v == r_c {
                break;
            }
            v = tree.parents(v)[0];
        }
    }
    // breadth-first numbering from r_C
    let mut xi_plus = vec![r_c];
    let mut arcs = Vec::new();
    let mut head = 0;
    while head < xi_plus.len() {
        let v = xi_plus[head];
        for &ch in tree.children(v) {
            if keep[ch.index()] {
                arcs.push((head as u32, xi_plus.len() as u32));
                xi_plus.push(ch);
            }
        }
        head += 1;
    }
    let m_c_plus = PseudoDag::from_arcs(xi_plus.len(), 0, arcs);
    let m_c_plus_labels: BTreeMap<VertexId, Label> = xi_plus
        .iter()
        .enumerate()
        .filter_map(|(i, v)| m.label(*v).map(|l| (VertexId(i as u32), l.clone())))
        .collect();

    // M_C: keep the root, the leaves and the branching vertices
    let kept: Vec<VertexId> = m_c_plus
        .bfs_order()
        .into_iter()
        .filter(|&v| v == m_c_plus.root() || m_c_plus.outdegree(v) != 1)
        .collect();
    let pos: BTreeMap<VertexId, u32> = kept.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    let mut mc_arcs = Vec::new();
    for &v in &kept {
        for &ch in m_c_plus.children(v) {
            let mut w = ch;
            while m_c_plus.outdegree(w) == 1 {
                w = m_c_plus.children(w)[0];
            }
            mc_arcs.push((pos[&v], pos[&w]));
        }
    }
    let mc_labels: Vec<(u32, Label)> = kept
        .iter()
        .filter_map(|v| m_c_plus_labels.get(v).map(|l| (pos[v], l.clone())))
        .collect();
    let m_c = XNetwork::from_arcs(kept.len(), 0, mc_arcs, mc_labels)
        .and_then(PhyloTree::try_from)
        .map_err(|e: ModelError| XSetError::Invalid(e.to_string()))?;
    Ok(XSetMaps {
        xset: c.clone(),
        r_c,
        m_c_plus,
        m_c_plus_labels,
        xi_plus,
        m_c,
        iota1: kept,
    })
}

/// X-sets `C` with `M_C ≅ T`, compared by canonical code.
pub fn endorsing_xsets(m: &MulTree, t: &PhyloTree) -> Result<Vec<XSet>, XSetError> {
    endorsing_xsets_limited(m, t, None)
}

pub fn endorsing_xsets_limited(m: &MulTree, t: &PhyloTree, limit: Option<usize>) -> Result<Vec<XSet>, XSetError> {
    if m.taxa_set() != t.taxa_set() {
        return Ok(Vec::new());
    }
    let mt = MulTree::from_tree(t);
    let want = canon_code(&mt, mt.root()).expect("root");
    let mut out = Vec::new();
    for c in collect_xsets(m, limit)? {
        let maps = restrict_to_xset(m, &c)?;
        let got = MulTree::from_tree(&maps.m_c);
        if canon_code(&got, got.root()).expect("root") == want {
            out.push(c);
        }
    }
    Ok(out)
}

/// `V(M)^C`: `r_C` together with every vertex that has no vertex `~ r_C`
/// below it (itself included).
pub fn v_m_c(m: &MulTree, p: &EquivPartition, r_c: VertexId) -> BTreeSet<VertexId> {
    let tree = m.tree();
    let target = p.class_of(r_c);
    let mut hit = vec![false; tree.id_bound()];
    for &v in tree.topological_order().expect("tree").iter().rev() {
        hit[v.index()] = p.class_of(v) == target || tree.children(v).iter().any(|c| hit[c.index()]);
    }
    let mut out: BTreeSet<VertexId> = tree.vertices().filter(|v| !hit[v.index()]).collect();
    out.insert(r_c);
    out
}

/// `V(M)^C/~`.
pub fn v_m_c_classes(m: &MulTree, p: &EquivPartition, r_c: VertexId) -> BTreeSet<ClassId> {
    v_m_c(m, p, r_c).into_iter().map(|v| p.class_of(v)).collect()
}

/// A subgraph of `N` realising a subdivision of `T`, together with the path
/// map `P_T: V(T) → π⁻(N)` and the X-set of `U(N)` it picks out.
#[derive(Clone, Debug)]
pub struct DisplayWitness {
    pub xset: XSet,
    pub p_map: BTreeMap<VertexId, RootPath>,
    pub embedding: BTreeMap<VertexId, VertexId>,
    pub subgraph: BTreeSet<crate::model::Arc>,
}

impl DisplayWitness {
    /// Checks `Ψ_N ∘ P_T = ξ_C` on `V(T)`, matching vertices of `T` and
    /// `M_C` by their clusters.
    pub fn path_identity_holds(&self, t: &PhyloTree, u: &Unfolding) -> bool {
        let Ok(maps) = restrict_to_xset(&u.multree, &self.xset) else {
            return false;
        };
        let by_cluster: BTreeMap<BTreeSet<Label>, VertexId> = clusters_by_vertex(&maps.m_c)
            .into_iter()
            .map(|(v, s)| (s, maps.xi(v)))
            .collect();
        clusters_by_vertex(t).into_iter().all(|(v, s)| {
            let psi = u.index.vertex_of(&self.p_map[&v]);
            psi.is_some() && by_cluster.get(&s).copied() == psi
        })
    }
}

fn clusters_by_vertex(t: &PhyloTree) -> BTreeMap<VertexId, BTreeSet<Label>> {
    let g = t.graph();
    let mut below: BTreeMap<VertexId, BTreeSet<Label>> = BTreeMap::new();
    for &v in g.topological_order().expect("tree").iter().rev() {
        let mut s: BTreeSet<Label> = t.label(v).into_iter().cloned().collect();
        for c in g.children(v) {
            s.extend(below[c].iter().cloned());
        }
        below.insert(v, s);
    }
    below
}

/// Up to `max` display witnesses of `t` in `n`, found by the brute-force
/// embedding search. Each path of `P_T` starts with the lexicographically
/// first root path to the image of the root of `t`.
pub fn display_witnesses(
    n: &XNetwork,
    t: &PhyloTree,
    u: &Unfolding,
    max: usize,
    budget: &mut Budget,
) -> Result<Vec<DisplayWitness>, BudgetExceeded> {
    let embeddings = oracle_display_embeddings(n, t, false, max, budget)?;
    let tg = t.graph();
    let mut out = Vec::new();
    for e in embeddings {
        let top = e.vertex_map[&t.root()];
        let prefix = u
            .index
            .fibre(top)
            .into_iter()
            .map(|v| u.index.path(v).clone())
            .min()
            .expect("every tree vertex is reached");
        let mut p_map: BTreeMap<VertexId, RootPath> = BTreeMap::new();
        p_map.insert(t.root(), prefix);
        for v in tg.bfs_order().into_iter().skip(1) {
            let parent = tg.parents(v)[0];
            let mut arcs = p_map[&parent].arcs().to_vec();
            arcs.extend_from_slice(&e.arc_paths[&v]);
            let p = RootPath::new(n, arcs).expect("embedding paths compose");
            p_map.insert(v, p);
        }
        let chosen = t
            .labels()
            .iter()
            .map(|(v, x)| (x.clone(), u.index.vertex_of(&p_map[v]).expect("leaf paths end in tree vertices")))
            .collect();
        out.push(DisplayWitness {
            xset: XSet { chosen },
            p_map,
            subgraph: e.arcs(),
            embedding: e.vertex_map,
        });
    }
    Ok(out)
}

/// The first display witness, if `t` is displayed.
pub fn display_witness(
    n: &XNetwork,
    t: &PhyloTree,
    u: &Unfolding,
    budget: &mut Budget,
) -> Result<Option<DisplayWitness>, BudgetExceeded> {
    Ok(display_witnesses(n, t, u, 1, budget)?.into_iter().next())
}
