//! Canonical encodings of labelled rooted (MUL-)trees, the relation `~` that
//! identifies vertices with isomorphic subtrees, and isomorphism tests for
//! MUL-trees and X-networks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Label, MulTree, PseudoDag, VertexId, XNetwork};

/// Byte encoding of a rooted labelled tree. A leaf is `L`, a big-endian
/// length and the label bytes; an internal vertex is `(`, the sorted codes of
/// its children, `)`. Equal codes iff isomorphic subtrees.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonCode(Vec<u8>);

impl CanonCode {
    pub fn leaf(label: &str) -> Self {
        let mut b = Vec::with_capacity(label.len() + 5);
        b.push(b'L');
        b.extend_from_slice(&(label.len() as u32).to_be_bytes());
        b.extend_from_slice(label.as_bytes());
        CanonCode(b)
    }

    /// Code of an internal vertex; the children need not be sorted.
    pub fn node(mut children: Vec<&CanonCode>) -> Self {
        children.sort();
        let len = children.iter().map(|c| c.0.len()).sum::<usize>() + 2;
        let mut b = Vec::with_capacity(len);
        b.push(b'(');
        for c in children {
            b.extend_from_slice(&c.0);
        }
        b.push(b')');
        CanonCode(b)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Newick-style rendering, e.g. `((1,2),3)`.
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        render(&self.0, &mut i, &mut out);
        out
    }
}

fn render(b: &[u8], i: &mut usize, out: &mut String) {
    match b[*i] {
        b'L' => {
            let n = u32::from_be_bytes([b[*i + 1], b[*i + 2], b[*i + 3], b[*i + 4]]) as usize;
            out.push_str(&String::from_utf8_lossy(&b[*i + 5..*i + 5 + n]));
            *i += 5 + n;
        }
        b'(' => {
            *i += 1;
            out.push('(');
            let mut first = true;
            while b[*i] != b')' {
                if !first {
                    out.push(',');
                }
                first = false;
                render(b, i, out);
            }
            *i += 1;
            out.push(')');
        }
        _ => unreachable!("malformed canonical code"),
    }
}

impl fmt::Debug for CanonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonCode({})", self.to_newick())
    }
}

impl fmt::Display for CanonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_newick())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
}

/// Interns labelled rooted subtrees: isomorphic subtrees get the same id.
#[derive(Default)]
pub(crate) struct Interner {
    leaves: HashMap<Label, u32>,
    nodes: HashMap<Vec<u32>, u32>,
    codes: Vec<CanonCode>,
}

impl Interner {
    pub(crate) fn leaf(&mut self, label: &str) -> u32 {
        if let Some(&id) = self.leaves.get(label) {
            return id;
        }
        let id = self.codes.len() as u32;
        self.codes.push(CanonCode::leaf(label));
        self.leaves.insert(label.to_string(), id);
        id
    }

    pub(crate) fn node(&mut self, mut children: Vec<u32>) -> u32 {
        children.sort_unstable();
        if let Some(&id) = self.nodes.get(&children) {
            return id;
        }
        let id = self.codes.len() as u32;
        let code = CanonCode::node(children.iter().map(|&c| &self.codes[c as usize]).collect());
        self.codes.push(code);
        self.nodes.insert(children, id);
        id
    }

    pub(crate) fn code(&self, id: u32) -> &CanonCode {
        &self.codes[id as usize]
    }
}

/// Interned subtree ids for every vertex of a tree-shaped region of `g`,
/// indexed by vertex index. `labels` labels the leaves.
pub(crate) fn subtree_ids(
    g: &PseudoDag,
    labels: &BTreeMap<VertexId, Label>,
    interner: &mut Interner,
) -> Vec<u32> {
    let mut ids = vec![u32::MAX; g.id_bound()];
    let order = g.topological_order().expect("tree is acyclic");
    for &v in order.iter().rev() {
        ids[v.index()] = if g.is_leaf(v) {
            interner.leaf(labels.get(&v).map(String::as_str).unwrap_or(""))
        } else {
            interner.node(g.children(v).iter().map(|c| ids[c.index()]).collect())
        };
    }
    ids
}

/// Canonical code of the subMUL-tree rooted at `v`.
pub fn canon_code(m: &MulTree, v: VertexId) -> Result<CanonCode, CanonError> {
    if !m.tree().contains(v) {
        return Err(CanonError::UnknownVertex(v));
    }
    Ok(code_below(m.tree(), m.labels(), v))
}

fn code_below(g: &PseudoDag, labels: &BTreeMap<VertexId, Label>, v: VertexId) -> CanonCode {
    if g.is_leaf(v) {
        return CanonCode::leaf(labels.get(&v).map(String::as_str).unwrap_or(""));
    }
    let kids: Vec<CanonCode> = g.children(v).iter().map(|&c| code_below(g, labels, c)).collect();
    CanonCode::node(kids.iter().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(pub u32);

impl ClassId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// The quotient `V(M)/~` with the projection `p_M`. Classes are numbered in
/// increasing order of their canonical code, so numbering does not depend on
/// vertex ids.
#[derive(Clone, Debug)]
pub struct EquivPartition {
    classes: Vec<Vec<VertexId>>,
    class_of: Vec<Option<ClassId>>,
    codes: Vec<CanonCode>,
}

impl EquivPartition {
    pub fn classes(&self) -> &[Vec<VertexId>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// The projection `p_M(v)`.
    pub fn class_of(&self, v: VertexId) -> ClassId {
        self.class_of[v.index()].unwrap_or_else(|| panic!("{v} is not a vertex of the MUL-tree"))
    }

    pub fn class_size(&self, c: ClassId) -> usize {
        self.classes[c.index()].len()
    }

    /// `|p_M(v)|`.
    pub fn size_of(&self, v: VertexId) -> usize {
        self.class_size(self.class_of(v))
    }

    pub fn members(&self, c: ClassId) -> &[VertexId] {
        &self.classes[c.index()]
    }

    pub fn code(&self, c: ClassId) -> &CanonCode {
        &self.codes[c.index()]
    }

    pub fn same(&self, u: VertexId, v: VertexId) -> bool {
        self.class_of(u) == self.class_of(v)
    }

    pub fn all_classes(&self) -> impl Iterator<Item = ClassId> {
        (0..self.classes.len() as u32).map(ClassId)
    }
}

/// Builds `V(M)/~`: two vertices share a class iff their subMUL-trees are
/// isomorphic.
pub fn equiv_partition(m: &MulTree) -> EquivPartition {
    let mut interner = Interner::default();
    let ids = subtree_ids(m.tree(), m.labels(), &mut interner);
    let mut by_id: BTreeMap<u32, Vec<VertexId>> = BTreeMap::new();
    for v in m.tree().vertices() {
        by_id.entry(ids[v.index()]).or_default().push(v);
    }
    let mut entries: Vec<(CanonCode, Vec<VertexId>)> = by_id
        .into_iter()
        .map(|(id, vs)| (interner.code(id).clone(), vs))
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let mut class_of = vec![None; m.tree().id_bound()];
    let mut classes = Vec::with_capacity(entries.len());
    let mut codes = Vec::with_capacity(entries.len());
    for (i, (code, vs)) in entries.into_iter().enumerate() {
        for &v in &vs {
            class_of[v.index()] = Some(ClassId(i as u32));
        }
        classes.push(vs);
        codes.push(code);
    }
    EquivPartition {
        classes,
        class_of,
        codes,
    }
}

/// Outcome of comparing two MUL-trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic,
    NotIsomorphic,
    TaxaMismatch {
        left_only: BTreeSet<Label>,
        right_only: BTreeSet<Label>,
    },
}

impl IsoOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic)
    }
}

/// Label-preserving rooted isomorphism of two MUL-trees.
pub fn multree_isomorphic(a: &MulTree, b: &MulTree) -> IsoOutcome {
    let (ta, tb) = (a.taxa_set(), b.taxa_set());
    if ta != tb {
        return IsoOutcome::TaxaMismatch {
            left_only: ta.difference(&tb).cloned().collect(),
            right_only: tb.difference(&ta).cloned().collect(),
        };
    }
    let ca = canon_code(a, a.root()).expect("root exists");
    let cb = canon_code(b, b.root()).expect("root exists");
    if ca == cb {
        IsoOutcome::Isomorphic
    } else {
        IsoOutcome::NotIsomorphic
    }
}

/// Whether a digraph isomorphism fixing every taxon exists between two
/// X-networks. Colour refinement seeded with taxa and degrees, then
/// backtracking over the cells refinement cannot split.
pub fn xnetwork_isomorphic(a: &XNetwork, b: &XNetwork) -> bool {
    xnetwork_isomorphism(a, b).is_some()
}

/// Like [`xnetwork_isomorphic`] but returns the vertex map `a -> b`.
pub fn xnetwork_isomorphism(a: &XNetwork, b: &XNetwork) -> Option<BTreeMap<VertexId, VertexId>> {
    let (ga, gb) = (a.graph(), b.graph());
    if ga.vertex_count() != gb.vertex_count() || ga.arc_count() != gb.arc_count() {
        return None;
    }
    if a.taxa_set() != b.taxa_set() {
        return None;
    }
    let joint = Joint::new(a, b);
    let colors = joint.initial_colors();
    let colors = joint.refine(colors);
    joint.search(colors)
}

struct Joint<'a> {
    a: &'a XNetwork,
    b: &'a XNetwork,
    // combined index space: a's vertices first, then b's
    verts: Vec<(bool, VertexId)>,
    index: [HashMap<VertexId, usize>; 2],
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    split: usize,
}

impl<'a> Joint<'a> {
    fn new(a: &'a XNetwork, b: &'a XNetwork) -> Self {
        let mut verts = Vec::new();
        let mut index = [HashMap::new(), HashMap::new()];
        for (side, n) in [(false, a), (true, b)] {
            for v in n.graph().vertices() {
                index[side as usize].insert(v, verts.len());
                verts.push((side, v));
            }
        }
        let split = a.graph().vertex_count();
        let mut children = vec![Vec::new(); verts.len()];
        let mut parents = vec![Vec::new(); verts.len()];
        for (i, &(side, v)) in verts.iter().enumerate() {
            let g = if side { b.graph() } else { a.graph() };
            children[i] = g.children(v).iter().map(|c| index[side as usize][c]).collect();
            parents[i] = g.parents(v).iter().map(|p| index[side as usize][p]).collect();
        }
        Joint {
            a,
            b,
            verts,
            index,
            children,
            parents,
            split,
        }
    }

    fn net(&self, side: bool) -> &XNetwork {
        if side {
            self.b
        } else {
            self.a
        }
    }

    fn initial_colors(&self) -> Vec<u32> {
        let mut keys: Vec<(Option<&str>, usize, usize, bool)> = Vec::with_capacity(self.verts.len());
        for &(side, v) in &self.verts {
            let n = self.net(side);
            let g = n.graph();
            keys.push((n.label(v).map(String::as_str), g.indegree(v), g.outdegree(v), v == g.root()));
        }
        let mut uniq = keys.clone();
        uniq.sort();
        uniq.dedup();
        keys.iter()
            .map(|k| uniq.binary_search(k).expect("present") as u32)
            .collect()
    }

    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut count = distinct(&colors);
        loop {
            let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..colors.len())
                .map(|i| {
                    let mut ch: Vec<u32> = self.children[i].iter().map(|&c| colors[c]).collect();
                    let mut pa: Vec<u32> = self.parents[i].iter().map(|&p| colors[p]).collect();
                    ch.sort_unstable();
                    pa.sort_unstable();
                    (colors[i], ch, pa)
                })
                .collect();
            let mut uniq = sigs.clone();
            uniq.sort();
            uniq.dedup();
            colors = sigs
                .iter()
                .map(|s| uniq.binary_search(s).expect("present") as u32)
                .collect();
            let c = uniq.len();
            if c == count {
                return colors;
            }
            count = c;
        }
    }

    fn balanced(&self, colors: &[u32]) -> bool {
        let mut diff: HashMap<u32, i64> = HashMap::new();
        for (i, &c) in colors.iter().enumerate() {
            *diff.entry(c).or_default() += if i < self.split { 1 } else { -1 };
        }
        diff.values().all(|&d| d == 0)
    }

    fn search(&self, colors: Vec<u32>) -> Option<BTreeMap<VertexId, VertexId>> {
        if !self.balanced(&colors) {
            return None;
        }
        let mut cells: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for i in 0..self.split {
            cells.entry(colors[i]).or_default().push(i);
        }
        let ambiguous = cells.iter().filter(|(_, vs)| vs.len() > 1).min_by_key(|(_, vs)| vs.len());
        match ambiguous {
            None => {
                let mut of_color: HashMap<u32, usize> = HashMap::new();
                for i in self.split..colors.len() {
                    of_color.insert(colors[i], i);
                }
                let map: BTreeMap<VertexId, VertexId> = (0..self.split)
                    .map(|i| (self.verts[i].1, self.verts[of_color[&colors[i]]].1))
                    .collect();
                self.verify(&map).then_some(map)
            }
            Some((&color, members)) => {
                let v = members[0];
                let fresh = colors.iter().max().copied().unwrap_or(0) + 1;
                for w in self.split..colors.len() {
                    if colors[w] != color {
                        continue;
                    }
                    let mut next = colors.clone();
                    next[v] = fresh;
                    next[w] = fresh;
                    let next = self.refine(next);
                    if let Some(map) = self.search(next) {
                        return Some(map);
                    }
                }
                None
            }
        }
    }

    fn verify(&self, map: &BTreeMap<VertexId, VertexId>) -> bool {
        let (a, b) = (self.a, self.b);
        let image: BTreeSet<VertexId> = map.values().copied().collect();
        if image.len() != map.len() || map[&a.root()] != b.root() {
            return false;
        }
        for (&v, &w) in map {
            if a.label(v) != b.label(w) {
                return false;
            }
            let mut ch: Vec<VertexId> = a.graph().children(v).iter().map(|c| map[c]).collect();
            ch.sort();
            if ch != b.graph().children(w) {
                return false;
            }
        }
        let _ = &self.index;
        true
    }
}

fn distinct(colors: &[u32]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}
