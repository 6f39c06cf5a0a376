//! Brute-force reference implementations and random instance generators.
//!
//! The `oracle_*` functions work directly from the definitions (embeddings
//! of subdivisions, spanning switchings, vertex deletion) and use nothing
//! but the graph model. They are meant for cross-checking the deciders on
//! small inputs, and each search is bounded by a step budget.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{subdivide, Arc, Label, MulTree, PhyloNetwork, PhyloTree, PseudoDag, VertexId, XNetwork};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("search budget of {limit} steps exceeded")]
pub struct BudgetExceeded {
    pub limit: u64,
}

#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.used += 1;
        if self.used > self.limit {
            Err(BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// Taxon bitmasks. Oracles support up to 128 taxa.
fn taxon_bits(n: &XNetwork) -> BTreeMap<Label, u128> {
    assert!(n.taxon_count() <= 128, "oracles support at most 128 taxa");
    n.taxa().enumerate().map(|(i, l)| (l.clone(), 1u128 << i)).collect()
}

fn reach_bits(n: &XNetwork, bits: &BTreeMap<Label, u128>) -> Vec<u128> {
    let g = n.graph();
    let mut reach = vec![0u128; g.id_bound()];
    for &v in g.topological_order().expect("acyclic").iter().rev() {
        let mut r = n.label(v).and_then(|l| bits.get(l)).copied().unwrap_or(0);
        for &c in g.children(v) {
            r |= reach[c.index()];
        }
        reach[v.index()] = r;
    }
    reach
}

/// A subgraph of `N` that is a subdivision of `T`: where each vertex of `T`
/// goes, and the path of `N` each arc of `T` becomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    /// Keyed by the head of the tree arc.
    pub arc_paths: BTreeMap<VertexId, Vec<Arc>>,
}

impl Embedding {
    pub fn arcs(&self) -> BTreeSet<Arc> {
        self.arc_paths.values().flatten().copied().collect()
    }
}

struct EmbedSearch<'a> {
    n: &'a XNetwork,
    t: &'a XNetwork,
    reach: Vec<u128>,
    cluster: Vec<u128>,
    target: Vec<Option<VertexId>>,
    used: Vec<bool>,
    img: Vec<Option<VertexId>>,
    paths: Vec<Vec<Arc>>,
    budget: &'a mut Budget,
    found: Vec<Embedding>,
    max: usize,
}

impl EmbedSearch<'_> {
    fn done(&self) -> bool {
        self.found.len() >= self.max
    }

    fn step(&mut self, pending: &mut Vec<VertexId>) -> Result<(), BudgetExceeded> {
        let Some(w) = pending.pop() else {
            let vertex_map = self
                .t
                .graph()
                .vertices()
                .map(|v| (v, self.img[v.index()].expect("all placed")))
                .collect();
            let arc_paths = self
                .t
                .graph()
                .vertices()
                .filter(|&v| v != self.t.root())
                .map(|v| (v, self.paths[v.index()].clone()))
                .collect();
            self.found.push(Embedding { vertex_map, arc_paths });
            return Ok(());
        };
        let u = self.t.graph().parents(w)[0];
        let src = self.img[u.index()].expect("parent placed");
        let mut path = Vec::new();
        self.extend(src, w, pending, &mut path)?;
        pending.push(w);
        Ok(())
    }

    fn extend(
        &mut self,
        x: VertexId,
        w: VertexId,
        pending: &mut Vec<VertexId>,
        path: &mut Vec<Arc>,
    ) -> Result<(), BudgetExceeded> {
        let g = self.n.graph();
        let need = self.cluster[w.index()];
        for a in g.out_arcs(x) {
            if self.done() {
                return Ok(());
            }
            self.budget.tick()?;
            let y = a.head;
            if self.used[y.index()] || self.reach[y.index()] & need != need {
                continue;
            }
            path.push(a);
            let leaf_target = self.target[w.index()];
            if let Some(l) = leaf_target {
                if y == l {
                    self.place(w, y, path, pending)?;
                }
            } else if g.is_tree_vertex(y) && g.outdegree(y) == 2 {
                self.place(w, y, path, pending)?;
            }
            if !g.is_leaf(y) {
                self.used[y.index()] = true;
                self.extend(y, w, pending, path)?;
                self.used[y.index()] = false;
            }
            path.pop();
        }
        Ok(())
    }

    fn place(
        &mut self,
        w: VertexId,
        y: VertexId,
        path: &[Arc],
        pending: &mut Vec<VertexId>,
    ) -> Result<(), BudgetExceeded> {
        self.img[w.index()] = Some(y);
        self.used[y.index()] = true;
        self.paths[w.index()] = path.to_vec();
        let kids = self.t.graph().children(w).to_vec();
        let before = pending.len();
        pending.extend(kids.iter().rev());
        self.step(pending)?;
        pending.truncate(before);
        self.used[y.index()] = false;
        self.img[w.index()] = None;
        Ok(())
    }
}

/// Up to `max` distinct subgraphs of `n` that are subdivisions of `t`, whose
/// taxa must be among those of `n`. With `rooted`, the root of `t` must go to
/// the root of `n`.
pub fn oracle_display_embeddings(
    n: &XNetwork,
    t: &XNetwork,
    rooted: bool,
    max: usize,
    budget: &mut Budget,
) -> Result<Vec<Embedding>, BudgetExceeded> {
    if !t.taxa_set().is_subset(&n.taxa_set()) || t.taxon_count() < 2 {
        return Ok(Vec::new());
    }
    let bits = taxon_bits(n);
    let reach = reach_bits(n, &bits);
    let cluster = reach_bits(t, &bits);
    let target = (0..t.graph().id_bound())
        .map(|i| t.label(VertexId(i as u32)).and_then(|l| n.leaf(l)))
        .collect();
    let all = cluster[t.root().index()];
    let g = n.graph();
    let roots: Vec<VertexId> = if rooted {
        vec![g.root()]
    } else {
        g.vertices()
            .filter(|&z| g.is_tree_vertex(z) && g.outdegree(z) == 2 && reach[z.index()] & all == all)
            .collect()
    };
    let mut s = EmbedSearch {
        n,
        t,
        reach,
        cluster,
        target,
        used: vec![false; g.id_bound()],
        img: vec![None; t.graph().id_bound()],
        paths: vec![Vec::new(); t.graph().id_bound()],
        budget,
        found: Vec::new(),
        max,
    };
    for z in roots {
        if s.done() {
            break;
        }
        s.budget.tick()?;
        let tr = t.root();
        s.img[tr.index()] = Some(z);
        s.used[z.index()] = true;
        let mut pending: Vec<VertexId> = t.graph().children(tr).iter().rev().copied().collect();
        s.step(&mut pending)?;
        s.used[z.index()] = false;
        s.img[tr.index()] = None;
    }
    Ok(s.found)
}

/// Is `t` displayed by `n`, i.e. does `n` contain a subdivision of `t`?
pub fn oracle_displays(n: &XNetwork, t: &XNetwork, budget: &mut Budget) -> Result<bool, BudgetExceeded> {
    Ok(!oracle_display_embeddings(n, t, false, 1, budget)?.is_empty())
}

/// Displayed with the root of `t` at the root of `n`.
pub fn oracle_strongly_displays(n: &XNetwork, t: &XNetwork, budget: &mut Budget) -> Result<bool, BudgetExceeded> {
    Ok(!oracle_display_embeddings(n, t, true, 1, budget)?.is_empty())
}

/// Clusters of the trees obtainable by the subdivide / join / suppress
/// construction, one per admissible switching. A switching keeps one
/// incoming arc per hybrid vertex; it is admissible when the kept arcs leave
/// no vertex other than a taxon without children, and every dropped arc
/// joins two vertices that have indegree and outdegree one in the kept
/// subgraph.
pub fn oracle_base_tree_clusters(
    n: &XNetwork,
    budget: &mut Budget,
) -> Result<Vec<BTreeSet<BTreeSet<Label>>>, BudgetExceeded> {
    let g = n.graph();
    let hybrids: Vec<VertexId> = g.vertices().filter(|&v| g.is_hybrid(v)).collect();
    let options: Vec<Vec<Arc>> = hybrids.iter().map(|&h| g.in_arcs(h)).collect();
    let mut choice = vec![0usize; hybrids.len()];
    let mut out = Vec::new();
    loop {
        budget.tick()?;
        let mut dropped: BTreeSet<Arc> = BTreeSet::new();
        for (i, opts) in options.iter().enumerate() {
            for (j, a) in opts.iter().enumerate() {
                if j != choice[i] {
                    dropped.insert(*a);
                }
            }
        }
        if let Some(cl) = switching_clusters(n, &dropped) {
            out.push(cl);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn switching_clusters(n: &XNetwork, dropped: &BTreeSet<Arc>) -> Option<BTreeSet<BTreeSet<Label>>> {
    let g = n.graph();
    let kept_out = |v: VertexId| g.out_arcs(v).into_iter().filter(|a| !dropped.contains(a)).count();
    for v in g.vertices() {
        if n.label(v).is_none() && kept_out(v) == 0 {
            return None;
        }
    }
    for a in dropped {
        if a.tail == g.root() || kept_out(a.tail) != 1 || g.indegree(a.tail) != 1 {
            return None;
        }
        if kept_out(a.head) != 1 {
            return None;
        }
    }
    let mut below: BTreeMap<VertexId, BTreeSet<Label>> = BTreeMap::new();
    for &v in g.topological_order().expect("acyclic").iter().rev() {
        let mut s = BTreeSet::new();
        if let Some(l) = n.label(v) {
            s.insert(l.clone());
        }
        for a in g.out_arcs(v) {
            if !dropped.contains(&a) {
                s.extend(below[&a.head].iter().cloned());
            }
        }
        below.insert(v, s);
    }
    Some(below.into_values().collect())
}

/// Is `t` a base tree of `n`?
pub fn oracle_base_tree(n: &XNetwork, t: &PhyloTree, budget: &mut Budget) -> Result<bool, BudgetExceeded> {
    let want = t.clusters();
    Ok(oracle_base_tree_clusters(n, budget)?.contains(&want))
}

/// Does `n` have any base tree?
pub fn oracle_tree_based(n: &XNetwork, budget: &mut Budget) -> Result<bool, BudgetExceeded> {
    Ok(!oracle_base_tree_clusters(n, budget)?.is_empty())
}

/// Does every path from the root to the leaf `x` pass through `v`? Decided
/// by deleting `v` and testing reachability.
pub fn oracle_vertex_stable_ancestor(n: &XNetwork, v: VertexId, x: &str) -> bool {
    let g = n.graph();
    let Some(leaf) = n.leaf(x) else { return false };
    if v == g.root() || v == leaf {
        return true;
    }
    let mut seen = vec![false; g.id_bound()];
    seen[v.index()] = true;
    seen[g.root().index()] = true;
    let mut stack = vec![g.root()];
    while let Some(u) = stack.pop() {
        for &c in g.children(u) {
            if !seen[c.index()] {
                seen[c.index()] = true;
                stack.push(c);
            }
        }
    }
    !seen[leaf.index()] || leaf == v
}

/// Is `v` a vertex-stable ancestor of some taxon?
pub fn oracle_visible(n: &XNetwork, v: VertexId) -> bool {
    n.taxa().any(|x| oracle_vertex_stable_ancestor(n, v, x))
}

/// Pairwise isomorphism of the subMUL-trees at `u` in `a` and `v` in `b`,
/// by trying every matching of children.
pub fn oracle_subtrees_isomorphic(a: &MulTree, u: VertexId, b: &MulTree, v: VertexId) -> bool {
    let (ga, gb) = (a.tree(), b.tree());
    if a.label(u) != b.label(v) || ga.outdegree(u) != gb.outdegree(v) {
        return false;
    }
    let ca = ga.children(u).to_vec();
    let cb = gb.children(v).to_vec();
    let mut taken = vec![false; cb.len()];
    fn matching(a: &MulTree, b: &MulTree, ca: &[VertexId], cb: &[VertexId], taken: &mut [bool], i: usize) -> bool {
        if i == ca.len() {
            return true;
        }
        for j in 0..cb.len() {
            if !taken[j] && oracle_subtrees_isomorphic(a, ca[i], b, cb[j]) {
                taken[j] = true;
                if matching(a, b, ca, cb, taken, i + 1) {
                    return true;
                }
                taken[j] = false;
            }
        }
        false
    }
    matching(a, b, &ca, &cb, &mut taken, 0)
}

/// Isomorphism of X-networks by plain backtracking over vertices in
/// topological order.
pub fn oracle_xnetwork_isomorphic(a: &XNetwork, b: &XNetwork, budget: &mut Budget) -> Result<bool, BudgetExceeded> {
    let (ga, gb) = (a.graph(), b.graph());
    if ga.vertex_count() != gb.vertex_count() || ga.arc_count() != gb.arc_count() || a.taxa_set() != b.taxa_set() {
        return Ok(false);
    }
    let order = ga.topological_order().expect("acyclic");
    let mut map: Vec<Option<VertexId>> = vec![None; ga.id_bound()];
    let mut used = vec![false; gb.id_bound()];
    fn go(
        a: &XNetwork,
        b: &XNetwork,
        order: &[VertexId],
        i: usize,
        map: &mut Vec<Option<VertexId>>,
        used: &mut Vec<bool>,
        budget: &mut Budget,
    ) -> Result<bool, BudgetExceeded> {
        let Some(&v) = order.get(i) else { return Ok(true) };
        let (ga, gb) = (a.graph(), b.graph());
        let mut want: Vec<VertexId> = ga.parents(v).iter().map(|p| map[p.index()].expect("parents first")).collect();
        want.sort();
        for w in gb.vertices() {
            budget.tick()?;
            if used[w.index()]
                || ga.indegree(v) != gb.indegree(w)
                || ga.outdegree(v) != gb.outdegree(w)
                || a.label(v) != b.label(w)
                || gb.parents(w) != want.as_slice()
            {
                continue;
            }
            map[v.index()] = Some(w);
            used[w.index()] = true;
            if go(a, b, order, i + 1, map, used, budget)? {
                return Ok(true);
            }
            used[w.index()] = false;
            map[v.index()] = None;
        }
        Ok(false)
    }
    go(a, b, &order, 0, &mut map, &mut used, budget)
}

/// Parameters of the random generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub taxa_count: usize,
    pub reticulation_count: usize,
    pub seed: u64,
    pub ensure_stable: bool,
}

impl GenConfig {
    pub fn new(taxa_count: usize, reticulation_count: usize, seed: u64) -> Self {
        GenConfig {
            taxa_count,
            reticulation_count,
            seed,
            ensure_stable: false,
        }
    }

    pub fn stable(mut self) -> Self {
        self.ensure_stable = true;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("need at least 3 taxa, got {0}")]
    TooFewTaxa(usize),
    #[error("no valid instance after {0} attempts")]
    Exhausted(usize),
}

const ATTEMPTS: usize = 1000;

fn taxon_names(k: usize) -> Vec<Label> {
    (1..=k).map(|i| i.to_string()).collect()
}

/// Random binary tree whose leaves carry `labels` (repetitions allowed),
/// built by merging random pairs.
fn random_binary(labels: &[Label], rng: &mut ChaCha8Rng) -> (PseudoDag, BTreeMap<VertexId, Label>) {
    let k = labels.len();
    let mut arcs = Vec::new();
    let mut pool: Vec<u32> = (0..k as u32).collect();
    let mut next = k as u32;
    while pool.len() > 1 {
        let i = rng.gen_range(0..pool.len());
        let a = pool.swap_remove(i);
        let j = rng.gen_range(0..pool.len());
        let b = pool.swap_remove(j);
        arcs.push((next, a));
        arcs.push((next, b));
        pool.push(next);
        next += 1;
    }
    let g = PseudoDag::from_arcs(next as usize, pool[0], arcs);
    let l = labels
        .iter()
        .enumerate()
        .map(|(i, x)| (VertexId(i as u32), x.clone()))
        .collect();
    (g, l)
}

/// Random phylogenetic tree on the taxa `1..=k`.
pub fn random_tree(k: usize, rng: &mut ChaCha8Rng) -> PhyloTree {
    let (g, l) = random_binary(&taxon_names(k), rng);
    let n = XNetwork::new(g, l).expect("random tree is valid").compacted();
    PhyloTree::try_from(n).expect("no hybrids")
}

/// Adds one reticulation: subdivide two distinct arcs and join the new
/// vertices, the first to the second. `None` if that would close a cycle.
fn add_reticulation(g: &PseudoDag, rng: &mut ChaCha8Rng) -> Option<PseudoDag> {
    let arcs = g.arcs();
    let a1 = *arcs.choose(rng)?;
    let a2 = *arcs.choose(rng)?;
    if a1 == a2 || g.is_below(a1.tail, a2.head) {
        return None;
    }
    let (g1, s) = subdivide(g, a1).ok()?;
    let (mut g2, h) = subdivide(&g1, a2).ok()?;
    g2.add_arc(s, h);
    Some(g2)
}

fn draw_network(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Option<XNetwork> {
    let (mut g, labels) = random_binary(&taxon_names(cfg.taxa_count), rng);
    for _ in 0..cfg.reticulation_count {
        let mut done = false;
        for _ in 0..100 {
            if let Some(next) = add_reticulation(&g, rng) {
                g = next;
                done = true;
                break;
            }
        }
        if !done {
            return None;
        }
    }
    XNetwork::new(g, labels).ok().map(|n| n.compacted())
}

/// Random binary phylogenetic network: a random tree plus
/// `reticulation_count` arcs between subdivision vertices. With
/// `ensure_stable`, the draw is replaced by `F(U(draw))` and redrawn until
/// that is a phylogenetic network.
pub fn gen_network(cfg: &GenConfig) -> Result<PhyloNetwork, GenError> {
    if cfg.taxa_count < 3 {
        return Err(GenError::TooFewTaxa(cfg.taxa_count));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..ATTEMPTS {
        let Some(n) = draw_network(cfg, &mut rng) else { continue };
        let n = if cfg.ensure_stable {
            match crate::foldup::stabilize(&n) {
                Ok(s) => s,
                Err(_) => continue,
            }
        } else {
            n
        };
        if let Ok(p) = PhyloNetwork::try_from(n) {
            return Ok(p);
        }
    }
    Err(GenError::Exhausted(ATTEMPTS))
}

/// Random binary MUL-tree on `1..=k` with `reticulation_count` extra leaves
/// carrying randomly repeated taxa.
pub fn gen_multree(cfg: &GenConfig) -> Result<MulTree, GenError> {
    if cfg.taxa_count < 3 {
        return Err(GenError::TooFewTaxa(cfg.taxa_count));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut labels = taxon_names(cfg.taxa_count);
    for _ in 0..cfg.reticulation_count {
        let x = labels[rng.gen_range(0..cfg.taxa_count)].clone();
        labels.push(x);
    }
    labels.shuffle(&mut rng);
    let (g, l) = random_binary(&labels, &mut rng);
    Ok(MulTree::new(g, l).expect("random MUL-tree is valid").compacted())
}
