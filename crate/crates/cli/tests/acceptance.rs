//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Checks listed in `KNOWN_RED` are expected to fail; the run aborts if one
//! of them starts passing, or if any other check fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stablenet::canonical::{canon_code, equiv_partition, multree_isomorphic, xnetwork_isomorphic};
use stablenet::foldup::{fold_up, fold_up_ordered, is_sound, is_sound_by_folding, is_stable, FoldOrder};
use stablenet::io::{multree_to_dot, network_to_dot, parse_enewick, parse_mulnewick, print_enewick, print_mulnewick, DotStyle};
use stablenet::model::{Label, MulTree, PhyloTree, XNetwork};
use stablenet::oracles::{
    gen_multree, gen_network, oracle_base_tree, oracle_displays, oracle_strongly_displays, oracle_tree_based,
    oracle_vertex_stable_ancestor, oracle_visible, random_tree, Budget, GenConfig,
};
use stablenet::properties::{
    displays_stable, is_base_tree, is_compressed, is_reticulation_visible_on_path, is_reticulation_visible_stable,
    is_reticulation_visible_structural, is_tree_based_stable, is_tree_child_by_ancestry, is_tree_child_compressed_form,
    is_tree_child_on_path, is_tree_child_stable, is_tree_child_structural, tree_vertex_alternatives_with, strongly_displayed_check,
    strongly_displays, vertex_stable_ancestor, AncestorReading, StableNetwork,
};
use stablenet::subnetworks::{
    displays_mul_triplet, induced_subnetwork, mul_triplets, remove_leaf, restrict_multree, triplets, unfold_commutes_with_restriction,
};
use stablenet::unfold::unfold;
use stablenet::xsets::{display_witnesses, endorsing_xsets, enumerate_xsets, v_m_c_classes};

use common::*;

/// Checks that fail, with the reason.
const KNOWN_RED: &[(&str, &str)] = &[
    (
        "tree-child: image form agrees with structural",
        "image(xi_C^+) = V(M)^C/~ for all X-sets also holds on some stable networks that are not \
         tree-child (fixture image-test-gap.enwk); the repaired form that adds the classes on the \
         root path of r_C agrees everywhere",
    ),
    (
        "reticulation-visible: class-size form agrees with structural",
        "an X-set whose r_C lies strictly below a hybrid's child misses that class, so the form \
         rejects some reticulation-visible networks (fixture size-test-gap.enwk); the repaired form \
         agrees everywhere",
    ),
    (
        "tree-vertex criterion (ancestor as reachability) agrees with the visibility oracle",
        "reading 'ancestor of r_C' as 'has a directed path to r_C' accepts tree vertices that are \
         no vertex-stable ancestor of any leaf; reading it as 'on the root path of r_C' agrees everywhere",
    ),
];

#[derive(Default)]
struct Check {
    runs: usize,
    failures: Vec<String>,
}

#[derive(Default)]
struct Sheet {
    checks: BTreeMap<String, Check>,
}

impl Sheet {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let c = self.checks.entry(name.to_string()).or_default();
        c.runs += 1;
        if !ok && c.failures.len() < 3 {
            c.failures.push(detail());
        } else if !ok {
            c.failures.push(String::new());
        }
    }

    fn at_least(&mut self, name: &str, n: usize) {
        let runs = self.checks.get(name).map(|c| c.runs).unwrap_or(0);
        self.check(&format!("{name}: at least {n} instances"), runs >= n, || format!("only {runs}"));
    }
}

fn known_red(name: &str) -> Option<&'static str> {
    KNOWN_RED.iter().find(|(n, _)| *n == name).map(|(_, r)| *r)
}

/// Prints the criterion line and the failing checks; returns whether the
/// outcome is as expected.
fn report(label: &str, sheet: &Sheet, elapsed: Duration) -> bool {
    let red: Vec<(&String, &Check)> = sheet.checks.iter().filter(|(_, c)| !c.failures.is_empty()).collect();
    let runs: usize = sheet.checks.values().map(|c| c.runs).sum();
    let verdict = if red.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "criterion {label}: {verdict} ({} checks, {runs} assertions, {} failing, {:.1}s)",
        sheet.checks.len(),
        red.len(),
        elapsed.as_secs_f64()
    );
    let mut expected = true;
    for (name, c) in &red {
        let tag = if known_red(name).is_some() { "known" } else { "UNEXPECTED" };
        println!("    [{tag}] {name}: {} of {} failed", c.failures.len(), c.runs);
        for d in c.failures.iter().filter(|d| !d.is_empty()) {
            println!("        {d}");
        }
        if let Some(reason) = known_red(name) {
            println!("        reason: {reason}");
        } else {
            expected = false;
        }
    }
    for (name, _) in KNOWN_RED {
        if let Some(c) = sheet.checks.get(*name) {
            if c.failures.is_empty() {
                println!("    [STALE] {name} passed {} times; update KNOWN_RED", c.runs);
                expected = false;
            }
        }
    }
    expected
}

fn set(xs: &[&str]) -> BTreeSet<Label> {
    xs.iter().map(|s| s.to_string()).collect()
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

fn criterion_fixtures() -> Sheet {
    let mut s = Sheet::default();
    let start = Instant::now();

    // Un-fold and fold-up of an unstable network.
    let unstable = net("unstable.enwk");
    let u = unfold(&unstable).unwrap();
    s.check("unfold(unstable) matches unstable.unfold", multree_isomorphic(&u.multree, &mul("unstable.unfold.mnwk")).holds(), || {
        print_mulnewick(&u.multree)
    });
    let (f, _) = fold_up(&mul("unstable.unfold.mnwk")).unwrap();
    s.check("fold_up(unstable.unfold) matches unstable.folded", xnetwork_isomorphic(&f, &net("unstable.folded.enwk")), || {
        print_enewick(&f)
    });
    s.check("unstable is not stable", !is_stable(&unstable).unwrap(), String::new);
    s.check("unstable.folded is stable", is_stable(&net("unstable.folded.enwk")).unwrap(), String::new);

    // The four-taxon network.
    let four = phylo("four-taxa.enwk");
    let st = StableNetwork::new(&four);
    s.check("four-taxa is stable", st.is_ok(), || format!("{:?}", st.as_ref().err()));
    let st = st.unwrap();
    s.check(
        "four-taxa un-fold matches four-taxa.unfold",
        multree_isomorphic(st.multree(), &mul("four-taxa.unfold.mnwk")).holds(),
        || print_mulnewick(st.multree()),
    );
    let p = st.partition();
    let g = st.multree().tree();
    let leaf_classes = p.all_classes().filter(|&c| g.is_leaf(p.members(c)[0])).count();
    s.check("four-taxa has 10 classes", p.class_count() == 10, || p.class_count().to_string());
    s.check("four-taxa has 4 leaf classes", leaf_classes == 4, || leaf_classes.to_string());
    let size = |v: u32| p.class_size(st.kappa().apply(stablenet::model::VertexId(v)));
    s.check("class sizes at v6 and v4 are 2 and 1", size(6) == 2 && size(4) == 1, || format!("{} {}", size(6), size(4)));
    let base = tree("four-taxa-base.nwk");
    let endorsed = tree("four-taxa-endorsed.nwk");
    let mut b = Budget::new(u64::MAX);
    s.check("four-taxa-base is displayed", displays_stable(&st, &base).unwrap().holds, String::new);
    s.check("four-taxa-base is displayed (oracle)", oracle_displays(&four, &base, &mut b).unwrap(), String::new);
    s.check("four-taxa-base is a base tree", is_base_tree(&st, &base).unwrap().holds, String::new);
    s.check("four-taxa-base is a base tree (oracle)", oracle_base_tree(&four, &base, &mut b).unwrap(), String::new);
    s.check("four-taxa-endorsed is endorsed", !endorsing_xsets(st.multree(), &endorsed).unwrap().is_empty(), String::new);
    s.check("four-taxa-endorsed is not displayed", !displays_stable(&st, &endorsed).unwrap().holds, String::new);
    s.check("four-taxa-endorsed is not displayed (oracle)", !oracle_displays(&four, &endorsed, &mut b).unwrap(), String::new);
    s.check("four-taxa is not tree-child", !is_tree_child_structural(&four).holds, String::new);
    s.check("four-taxa is not tree-child (X-set form)", !is_tree_child_on_path(&st).unwrap().holds, String::new);
    s.check("four-taxa is not reticulation-visible", !is_reticulation_visible_structural(&four).holds, String::new);
    s.check(
        "four-taxa is not reticulation-visible (X-set form)",
        !is_reticulation_visible_stable(&st).unwrap().holds && !is_reticulation_visible_on_path(&st).unwrap().holds,
        String::new,
    );
    let plus5 = phylo("four-taxa-plus5.enwk");
    let st5 = StableNetwork::new(&plus5);
    s.check("four-taxa-plus5 is stable", st5.is_ok(), String::new);
    s.check("four-taxa-plus5 is reticulation-visible", is_reticulation_visible_structural(&plus5).holds, String::new);
    if let Ok(st5) = &st5 {
        s.check(
            "four-taxa-plus5 is reticulation-visible (X-set forms)",
            is_reticulation_visible_stable(st5).unwrap().holds && is_reticulation_visible_on_path(st5).unwrap().holds,
            String::new,
        );
    }

    // X-sets and displayed triplets.
    let n_xsets = enumerate_xsets(&u.multree).count();
    s.check("un-fold of unstable has 4 X-sets", n_xsets == 4, || n_xsets.to_string());
    let folded = phylo("unstable.folded.enwk");
    let uf = unfold(&folded).unwrap();
    let t312 = tree("triplet-3-12.nwk");
    let ws = display_witnesses(&folded, &t312, &uf, 16, &mut b).unwrap();
    let xsets: BTreeSet<_> = ws.iter().map(|w| w.xset.clone()).collect();
    s.check("12|3 displayed by unstable.folded in at least 2 ways", ws.len() >= 2 && xsets.len() >= 2, || {
        format!("{} witnesses, {} X-sets", ws.len(), xsets.len())
    });
    s.check("witness paths compose to xi_C", ws.iter().all(|w| w.path_identity_holds(&t312, &uf)), String::new);
    let t231 = tree("triplet-23-1.nwk");
    s.check("23|1 is a base tree of unstable (oracle)", oracle_base_tree(&unstable, &t231, &mut b).unwrap(), String::new);
    let sf = StableNetwork::new(&folded).unwrap();
    s.check("23|1 is not a base tree of unstable.folded", !is_base_tree(&sf, &t231).unwrap().holds, String::new);
    s.check(
        "23|1 is not a base tree of unstable.folded (oracle)",
        !oracle_base_tree(&folded, &t231, &mut b).unwrap(),
        String::new,
    );

    // MUL-trees not determined by their MUL-triplets.
    let (m, mp) = (mul("pair-left.mnwk"), mul("pair-right.mnwk"));
    s.check("pair-left and pair-right are not isomorphic", !multree_isomorphic(&m, &mp).holds(), String::new);
    s.check("pair trees are sound", is_sound(&m) && is_sound(&mp), String::new);
    for y in three_subsets(&["1", "2", "3", "4"].map(String::from)) {
        let (a, b2) = (restrict_multree(&m, &y).unwrap(), restrict_multree(&mp, &y).unwrap());
        s.check("pair restrictions to 3 taxa are isomorphic", multree_isomorphic(&a, &b2).holds(), || {
            format!("{y:?}: {} vs {}", print_mulnewick(&a), print_mulnewick(&b2))
        });
    }
    let (tm, tmp) = (mul_triplets(&m), mul_triplets(&mp));
    s.check("pair MUL-triplet sets are equal", tm == tmp, String::new);
    s.check("pair MUL-triplet set has 21 elements", tm.len() == 21, || tm.len().to_string());
    let tau = mul("mul-triplet.mnwk");
    s.check("mul-triplet is in both", displays_mul_triplet(&m, &tau) && displays_mul_triplet(&mp, &tau), String::new);
    let (fm, fmp) = (fold_up(&m).unwrap().0, fold_up(&mp).unwrap().0);
    s.check("pair fold-ups are not isomorphic", !xnetwork_isomorphic(&fm, &fmp), String::new);
    let (tf, tfp) = (triplets(&fm, &mut b).unwrap(), triplets(&fmp, &mut b).unwrap());
    s.check("pair fold-ups display the same triplets", tf == tfp, || format!("{tf:?} vs {tfp:?}"));

    // Restriction does not commute with fold-up.
    let r = mul("restrict.mnwk");
    let y = set(&["1", "2", "4"]);
    let fr = fold_up(&r).unwrap().0;
    let fold_then_remove = induced_subnetwork(&fr, &y).unwrap();
    let remove_then_fold = fold_up(&restrict_multree(&r, &y).unwrap()).unwrap().0;
    s.check(
        "fold-then-remove matches its fixture",
        xnetwork_isomorphic(&fold_then_remove, &net("restrict.fold-then-remove.enwk")),
        || print_enewick(&fold_then_remove),
    );
    s.check(
        "remove-then-fold matches its fixture",
        xnetwork_isomorphic(&remove_then_fold, &net("restrict.remove-then-fold.enwk")),
        || print_enewick(&remove_then_fold),
    );
    s.check("fold-then-remove differs from remove-then-fold", !xnetwork_isomorphic(&fold_then_remove, &remove_then_fold), String::new);

    let elapsed = start.elapsed();
    s.check("fixture suite under 5 s", elapsed < Duration::from_secs(5), || format!("{:.1}s", elapsed.as_secs_f64()));
    s
}

/// One network of the campaign: every decider against its oracle.
fn campaign_network(s: &mut Sheet, n: &stablenet::model::PhyloNetwork, seed: u64) {
    let x: &XNetwork = n;
    let st = StableNetwork::new(n).expect("generated networks are stable");
    let nw = print_enewick(x);
    let mut b = Budget::new(u64::MAX);
    let mut trees: Vec<PhyloTree> = Vec::new();
    let mut seen = BTreeSet::new();
    for e in st.entries().unwrap() {
        let t = e.maps.m_c.clone();
        if seen.insert(e.code.clone()) {
            trees.push(t);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..2 {
        let t = random_tree(x.taxon_count(), &mut rng);
        let mt = MulTree::from_tree(&t);
        if seen.insert(canon_code(&mt, mt.root()).unwrap()) {
            trees.push(t);
        }
    }
    for t in &trees {
        let tw = || format!("{nw} / {}", print_enewick(t));
        let d = displays_stable(&st, t).unwrap().holds;
        s.check("displays agrees with the embedding oracle", d == oracle_displays(x, t, &mut b).unwrap(), tw);
        let bt = is_base_tree(&st, t).unwrap().holds;
        s.check("base tree agrees with the spanning-subdivision oracle", bt == oracle_base_tree(x, t, &mut b).unwrap(), tw);
        let sd = strongly_displays(&st, t).unwrap().holds;
        s.check("strongly displays agrees with the rooted embedding oracle", sd == oracle_strongly_displays(x, t, &mut b).unwrap(), tw);
    }
    let w = || nw.clone();
    s.check(
        "tree-based agrees with the spanning-subdivision oracle",
        is_tree_based_stable(&st).unwrap().holds == oracle_tree_based(x, &mut b).unwrap(),
        w,
    );
    let tc = is_tree_child_structural(x).holds;
    s.check("tree-child: ancestry form agrees with structural", tc == is_tree_child_by_ancestry(x).holds, w);
    s.check("tree-child: compressed form agrees with structural", tc == is_tree_child_compressed_form(x).holds, w);
    s.check("tree-child: image form agrees with structural", tc == is_tree_child_stable(&st).unwrap().holds, w);
    s.check("tree-child: image form with root path agrees with structural", tc == is_tree_child_on_path(&st).unwrap().holds, w);
    let vis = x.hybrids().into_iter().all(|h| oracle_visible(x, h));
    s.check("reticulation-visible: structural agrees with the oracle", vis == is_reticulation_visible_structural(x).holds, w);
    s.check("reticulation-visible: class-size form agrees with structural", vis == is_reticulation_visible_stable(&st).unwrap().holds, w);
    s.check(
        "reticulation-visible: class-size form with root path agrees with structural",
        vis == is_reticulation_visible_on_path(&st).unwrap().holds,
        w,
    );
    let g = x.graph();
    for v in g.vertices().filter(|&v| !g.is_leaf(v)) {
        for t in x.taxa() {
            let o = oracle_vertex_stable_ancestor(x, v, t);
            s.check("vertex-stable ancestor agrees with the deletion oracle", vertex_stable_ancestor(x, v, t).unwrap() == o, || {
                format!("{nw} {v} {t}")
            });
        }
        if !g.is_tree_vertex(v) {
            continue;
        }
        let o = x.taxa().any(|t| oracle_vertex_stable_ancestor(x, v, t));
        let vw = || format!("{nw} at {v}");
        s.check(
            "tree-vertex criterion (ancestor as reachability) agrees with the visibility oracle",
            tree_vertex_alternatives_with(&st, v, AncestorReading::Below).unwrap().holds == o,
            vw,
        );
        s.check(
            "tree-vertex criterion (ancestor on root path) agrees with the visibility oracle",
            tree_vertex_alternatives_with(&st, v, AncestorReading::OnRootPath).unwrap().holds == o,
            vw,
        );
    }
}

fn criterion_campaign() -> Sheet {
    let mut s = Sheet::default();
    let mut networks = 0;
    for seed in 0..560u64 {
        let k = 4 + (seed % 7) as usize;
        let r = (seed / 7 % 5) as usize;
        let n = gen_network(&GenConfig::new(k, r, seed).stable()).expect("generator succeeds");
        campaign_network(&mut s, &n, seed);
        networks += 1;
    }
    for name in ["image-test-gap.enwk", "size-test-gap.enwk", "four-taxa.enwk", "four-taxa-plus5.enwk", "unstable.folded.enwk"] {
        campaign_network(&mut s, &phylo(name), 0);
        networks += 1;
    }
    s.check("at least 500 networks", networks >= 500, || networks.to_string());
    s
}

fn criterion_invariants() -> Sheet {
    let mut s = Sheet::default();
    for seed in 0..1400u64 {
        let k = 3 + (seed % 6) as usize;
        let extra = (seed / 6 % 7) as usize;
        let m = gen_multree(&GenConfig::new(k, extra, seed)).unwrap();
        let mw = || print_mulnewick(&m);
        let (f0, _) = fold_up(&m).unwrap();
        for salt in 1..3 {
            let (f, _) = fold_up_ordered(&m, FoldOrder::Seeded(seed * 7 + salt)).unwrap();
            s.check("fold-up is independent of the order", xnetwork_isomorphic(&f0, &f), mw);
        }
        s.check("soundness agrees with fold-up having no parallel arcs", is_sound(&m) == is_sound_by_folding(&m), mw);
        if !is_sound(&m) {
            continue;
        }
        let u = unfold(&f0).unwrap();
        s.check("U(F(M)) matches M for sound M", multree_isomorphic(&u.multree, &m).holds(), mw);
        let p = equiv_partition(&u.multree);
        let vs: Vec<_> = u.multree.tree().vertices().collect();
        let ok = vs
            .iter()
            .all(|&a| vs.iter().all(|&b| p.same(a, b) == (u.index.end_of(a) == u.index.end_of(b))));
        s.check("equivalent vertices are exactly the paths with a common end", ok, mw);
        s.check("F(M) is stable for sound M", is_stable(&f0).unwrap(), mw);
    }
    for seed in 0..1200u64 {
        let k = 3 + (seed % 6) as usize;
        let r = (seed / 6 % 6) as usize;
        for stable in [false, true] {
            let cfg = GenConfig::new(k, r, seed);
            let n = gen_network(&if stable { cfg.stable() } else { cfg }).expect("generator succeeds");
            let x: &XNetwork = &n;
            let nw = || print_enewick(x);
            let tc = is_tree_child_structural(x).holds;
            if tc {
                s.check("tree-child implies reticulation-visible", is_reticulation_visible_structural(x).holds, nw);
            }
            let taxa: Vec<Label> = x.taxa().cloned().collect();
            for y in three_subsets(&taxa) {
                s.check("U(N_Y) matches U(N)_Y on every 3 taxa", unfold_commutes_with_restriction(x, &y).unwrap(), || format!("{} {y:?}", nw()));
            }
            if taxa.len() >= 5 {
                let a = remove_leaf(&remove_leaf(x, &taxa[0]).unwrap(), &taxa[1]).unwrap();
                let b = remove_leaf(&remove_leaf(x, &taxa[1]).unwrap(), &taxa[0]).unwrap();
                s.check("leaf removal is independent of the order", xnetwork_isomorphic(&a, &b), nw);
            }
            if !stable {
                continue;
            }
            s.check("stable implies compressed", is_compressed(x).holds, nw);
            let st = StableNetwork::new(&n).unwrap();
            let (m, p) = (st.multree(), st.partition());
            for e in st.entries().unwrap() {
                let vc = v_m_c_classes(m, p, e.maps.r_c);
                s.check("image of every X-set lies in V(M)^C", e.image.is_subset(&vc), || format!("{} {}", nw(), e.xset()));
            }
            if tc {
                s.check(
                    "strongly displayed trees of tree-child networks are base trees",
                    strongly_displayed_check(&st).unwrap().holds,
                    nw,
                );
            }
        }
    }
    for name in [
        "fold-up is independent of the order",
        "tree-child implies reticulation-visible",
        "U(N_Y) matches U(N)_Y on every 3 taxa",
        "stable implies compressed",
        "image of every X-set lies in V(M)^C",
        "U(F(M)) matches M for sound M",
        "equivalent vertices are exactly the paths with a common end",
    ] {
        s.at_least(name, 1000);
    }
    s
}

fn roundtrip_network(s: &mut Sheet, n: &XNetwork, what: &str) {
    let text = print_enewick(n);
    match parse_enewick(&text) {
        Ok(back) => {
            s.check("parse(print(N)) matches N", xnetwork_isomorphic(n, &back), || format!("{what}: {text}"));
            s.check("printing is deterministic", print_enewick(&back) == text, || format!("{what}: {text}"));
        }
        Err(e) => s.check("parse(print(N)) matches N", false, || format!("{what}: {text}: {e}")),
    }
    let dot = network_to_dot(n, &DotStyle::default());
    s.check("DOT has one edge per arc", dot.matches(" -> ").count() == n.graph().arc_count(), || what.to_string());
}

fn roundtrip_multree(s: &mut Sheet, m: &MulTree, what: &str) {
    let text = print_mulnewick(m);
    match parse_mulnewick(&text) {
        Ok(back) => {
            s.check("parse(print(M)) matches M", multree_isomorphic(m, &back).holds(), || format!("{what}: {text}"));
            s.check("printing is deterministic", print_mulnewick(&back) == text, || format!("{what}: {text}"));
        }
        Err(e) => s.check("parse(print(M)) matches M", false, || format!("{what}: {text}: {e}")),
    }
    let dot = multree_to_dot(m, &DotStyle::default());
    s.check("DOT has one edge per arc", dot.matches(" -> ").count() == m.tree().arc_count(), || what.to_string());
}

fn criterion_io() -> Sheet {
    let mut s = Sheet::default();
    for name in corpus() {
        if name.ends_with(".mnwk") {
            roundtrip_multree(&mut s, &mul(&name), &name);
        } else {
            roundtrip_network(&mut s, &net(&name), &name);
        }
    }
    for seed in 0..400u64 {
        let k = 3 + (seed % 8) as usize;
        let r = (seed / 8 % 6) as usize;
        let n = gen_network(&GenConfig::new(k, r, seed)).unwrap();
        roundtrip_network(&mut s, &n, &format!("random network {seed}"));
        let n = gen_network(&GenConfig::new(k, r, seed).stable()).unwrap();
        roundtrip_network(&mut s, &n, &format!("random stable network {seed}"));
        let m = gen_multree(&GenConfig::new(k, r, seed)).unwrap();
        roundtrip_multree(&mut s, &m, &format!("random MUL-tree {seed}"));
    }

    let f = |n: &str| fixture(n).to_string_lossy().into_owned();
    let cases: Vec<(Vec<String>, i32, &str)> = vec![
        (vec!["is-stable".into(), f("four-taxa.enwk")], 0, "stable network"),
        (vec!["is-stable".into(), f("unstable.enwk")], 1, "unstable network"),
        (vec!["is-tree-child".into(), f("four-taxa.enwk")], 1, "not tree-child"),
        (vec!["displays".into(), "--both".into(), f("unstable.folded.enwk"), f("triplet-3-12.nwk")], 0, "displayed triplet"),
        (vec!["displays".into(), f("four-taxa.enwk"), f("four-taxa-endorsed.nwk")], 1, "endorsed, not displayed"),
        (vec!["displays".into(), f("unstable.enwk"), f("triplet-3-12.nwk")], 2, "decider on unstable input"),
        (vec!["is-stable".into(), f("no-such-file.enwk")], 2, "missing file"),
        (vec!["foldup".into(), f("four-taxa.enwk")], 2, "network given as MUL-tree"),
        (vec!["unfold".into(), "--path-cap".into(), "3".into(), f("four-taxa.enwk")], 3, "path cap"),
        (vec!["is-tree-based".into(), "--limit-xsets".into(), "2".into(), f("four-taxa.enwk")], 3, "X-set limit"),
        (
            vec!["displays".into(), "--oracle".into(), "--budget".into(), "1".into(), f("four-taxa.enwk"), f("four-taxa-base.nwk")],
            3,
            "oracle budget",
        ),
        (vec!["no-such-command".into()], 2, "unknown subcommand"),
    ];
    for (args, want, what) in cases {
        let args: Vec<&str> = args.iter().map(|a| a.as_str()).collect();
        let got = code(&cli(&args));
        s.check("CLI exit code", got == want, || format!("{what}: got {got}, want {want}"));
    }
    let o = cli(&["displays", "--both", &f("unstable.folded.enwk"), &f("triplet-3-12.nwk")]);
    s.check("displays --both reports at least 2 embeddings", stdout(&o).contains("embeddings: 2"), || stdout(&o));
    let o = cli(&["is-tree-child", &f("four-taxa.enwk")]);
    s.check("is-tree-child names a counterexample vertex", stdout(&o).contains("counterexample: vertex v"), || stdout(&o));
    let env_cap = std::process::Command::new(env!("CARGO_BIN_EXE_stablenet"))
        .args(["unfold", &f("four-taxa.enwk")])
        .env("STABLENET_PATH_CAP", "3")
        .output()
        .unwrap();
    s.check("STABLENET_PATH_CAP is honoured", code(&env_cap) == 3, || code(&env_cap).to_string());

    // --both on the corpus with the default methods.
    for name in corpus().iter().filter(|n| n.ends_with(".enwk")) {
        let file = f(name);
        for cmd in ["is-stable", "is-tree-child", "is-reticulation-visible", "is-tree-based"] {
            let o = cli(&[cmd, "--both", &file]);
            let c = code(&o);
            // Exit 2: the decider needs a stable network, or the oracle a phylogenetic one.
            let refused = c == 2 && (cmd == "is-tree-based" || net(name).graph().has_parallel_arcs());
            let acceptable = c == 0 || c == 1 || refused;
            s.check("--both finds no disagreement on the corpus", acceptable, || format!("{cmd} {name}: exit {c}"));
        }
    }
    s
}

fn main() {
    let mut expected = true;
    let t = Instant::now();
    let sheet = criterion_fixtures();
    expected &= report("1 (fixture suite)", &sheet, t.elapsed());
    let t = Instant::now();
    let sheet = criterion_campaign();
    expected &= report("2 (decider/oracle campaign)", &sheet, t.elapsed());
    let t = Instant::now();
    let sheet = criterion_invariants();
    expected &= report("3 (structural invariants)", &sheet, t.elapsed());
    let t = Instant::now();
    let sheet = criterion_io();
    expected &= report("4 (I/O and CLI)", &sheet, t.elapsed());
    if !expected {
        eprintln!("acceptance: unexpected results");
        std::process::exit(1);
    }
}
