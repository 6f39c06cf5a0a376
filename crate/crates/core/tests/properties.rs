use std::collections::BTreeSet;

use proptest::prelude::*;

use stablenet::canonical::{equiv_partition, multree_isomorphic, xnetwork_isomorphic};
use stablenet::foldup::{fold_up, fold_up_ordered, is_sound, is_sound_by_folding, is_stable, stabilize, FoldOrder};
use stablenet::io::{parse_enewick, parse_mulnewick, print_enewick, print_mulnewick};
use stablenet::model::{Label, MulTree, PhyloNetwork};
use stablenet::oracles::{
    gen_multree, gen_network, oracle_base_tree, oracle_displays, oracle_vertex_stable_ancestor, oracle_visible, Budget,
    GenConfig,
};
use stablenet::properties::*;
use stablenet::subnetworks::{remove_leaf, unfold_commutes_with_restriction};
use stablenet::unfold::{count_paths, unfold};
use stablenet::xsets::{restrict_to_xset, v_m_c_classes, xset_count};

fn network(stable: bool) -> impl Strategy<Value = PhyloNetwork> {
    (3usize..8, 0usize..5, any::<u64>()).prop_map(move |(k, r, seed)| {
        let cfg = GenConfig::new(k, r, seed);
        gen_network(&if stable { cfg.stable() } else { cfg }).unwrap()
    })
}

fn multree() -> impl Strategy<Value = MulTree> {
    (3usize..8, 0usize..6, any::<u64>()).prop_map(|(k, extra, seed)| gen_multree(&GenConfig::new(k, extra, seed)).unwrap())
}

fn perm(k: usize, seed: u64) -> Vec<u32> {
    let mut p: Vec<u32> = (0..k as u32).collect();
    let mut s = seed;
    for i in (1..p.len()).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        p.swap(i, (s >> 33) as usize % (i + 1));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn enewick_round_trip(n in network(false)) {
        let text = print_enewick(&n);
        let back = parse_enewick(&text).unwrap();
        prop_assert!(xnetwork_isomorphic(&n, &back));
        prop_assert_eq!(print_enewick(&back), text);
    }

    #[test]
    fn mulnewick_round_trip(m in multree()) {
        let text = print_mulnewick(&m);
        let back = parse_mulnewick(&text).unwrap();
        prop_assert!(multree_isomorphic(&m, &back).holds());
        prop_assert_eq!(print_mulnewick(&back), text);
    }

    #[test]
    fn fold_up_ignores_order(m in multree(), seed in any::<u64>()) {
        let (a, _) = fold_up(&m).unwrap();
        let (b, _) = fold_up_ordered(&m, FoldOrder::Seeded(seed)).unwrap();
        prop_assert!(xnetwork_isomorphic(&a, &b));
    }

    #[test]
    fn soundness_two_ways(m in multree()) {
        prop_assert_eq!(is_sound(&m), is_sound_by_folding(&m));
    }

    #[test]
    fn sound_multrees_come_back(m in multree()) {
        prop_assume!(is_sound(&m));
        let (f, _) = fold_up(&m).unwrap();
        let u = unfold(&f).unwrap();
        prop_assert!(multree_isomorphic(&u.multree, &m).holds());
        prop_assert!(is_stable(&f).unwrap());
        let p = equiv_partition(&u.multree);
        let vs: Vec<_> = u.multree.tree().vertices().collect();
        for &a in &vs {
            for &b in &vs {
                prop_assert_eq!(p.same(a, b), u.index.end_of(a) == u.index.end_of(b));
            }
        }
    }

    #[test]
    fn stabilize_is_idempotent(n in network(false)) {
        let s = stabilize(&n).unwrap();
        prop_assert!(is_stable(&s).unwrap());
        prop_assert!(xnetwork_isomorphic(&stabilize(&s).unwrap(), &s));
    }

    #[test]
    fn unfold_sizes(n in network(false)) {
        let u = unfold(&n).unwrap();
        let g = n.graph();
        let leaves = u.multree.leaf_count();
        prop_assert_eq!(u.multree.taxa_set(), n.taxa_set());
        prop_assert!(leaves >= n.taxon_count());
        prop_assert!(u.multree.tree().vertex_count() as u128 <= count_paths(&n));
        let m = &u.multree;
        let product: u128 = n.taxa().map(|x| m.mu(x).unwrap().len() as u128).product();
        prop_assert_eq!(xset_count(m), product);
        prop_assert!(g.vertices().filter(|&v| g.is_tree_vertex(v)).all(|v| !u.index.fibre(v).is_empty()));
    }

    #[test]
    fn stability_survives_renumbering(n in network(true), seed in any::<u64>()) {
        let r = n.relabelled(&perm(n.graph().id_bound(), seed));
        prop_assert!(is_stable(&r).unwrap());
    }

    #[test]
    fn stable_networks_are_compressed(n in network(true)) {
        prop_assert!(is_compressed(&n).holds);
    }

    #[test]
    fn tree_child_is_visible(n in network(false)) {
        if is_tree_child_structural(&n).holds {
            prop_assert!(is_reticulation_visible_structural(&n).holds);
        }
        prop_assert_eq!(is_tree_child_structural(&n).holds, is_tree_child_by_ancestry(&n).holds);
        prop_assert_eq!(is_tree_child_structural(&n).holds, is_tree_child_compressed_form(&n).holds);
        let visible = n.hybrids().into_iter().all(|h| oracle_visible(&n, h));
        prop_assert_eq!(visible, is_reticulation_visible_structural(&n).holds);
    }

    #[test]
    fn stable_ancestors_agree(n in network(false)) {
        let g = n.graph();
        for v in g.vertices().filter(|&v| !g.is_leaf(v)) {
            for x in n.taxa() {
                prop_assert_eq!(vertex_stable_ancestor(&n, v, x).unwrap(), oracle_vertex_stable_ancestor(&n, v, x));
            }
        }
    }

    #[test]
    fn image_lies_in_v_m_c(n in network(true)) {
        let s = StableNetwork::new(&n).unwrap();
        for e in s.entries().unwrap() {
            let vc = v_m_c_classes(s.multree(), s.partition(), e.maps.r_c);
            prop_assert!(e.image.is_subset(&vc));
        }
    }

    #[test]
    fn restricting_before_or_after_unfold(n in network(false), pick in any::<u64>()) {
        let taxa: Vec<Label> = n.taxa().cloned().collect();
        let k = taxa.len();
        let i = (pick % k as u64) as usize;
        let j = (i + 1 + (pick / 7 % (k as u64 - 1)) as usize) % k;
        let l = (0..k).find(|&l| l != i && l != j).unwrap();
        let y: BTreeSet<Label> = [taxa[i].clone(), taxa[j].clone(), taxa[l].clone()].into_iter().collect();
        prop_assert!(unfold_commutes_with_restriction(&n, &y).unwrap());
    }

    #[test]
    fn leaf_removal_order(n in network(false)) {
        let taxa: Vec<Label> = n.taxa().cloned().collect();
        prop_assume!(taxa.len() >= 5);
        let a = remove_leaf(&remove_leaf(&n, &taxa[0]).unwrap(), &taxa[2]).unwrap();
        let b = remove_leaf(&remove_leaf(&n, &taxa[2]).unwrap(), &taxa[0]).unwrap();
        prop_assert!(xnetwork_isomorphic(&a, &b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn deciders_match_oracles(n in network(true)) {
        let s = StableNetwork::new(&n).unwrap();
        let mut b = Budget::new(u64::MAX);
        for c in s.xsets().unwrap().into_iter().take(40) {
            let t = restrict_to_xset(s.multree(), &c).unwrap().m_c;
            prop_assert_eq!(displays_stable(&s, &t).unwrap().holds, oracle_displays(&n, &t, &mut b).unwrap());
            prop_assert_eq!(is_base_tree(&s, &t).unwrap().holds, oracle_base_tree(&n, &t, &mut b).unwrap());
        }
        prop_assert_eq!(is_tree_child_structural(&n).holds, is_tree_child_on_path(&s).unwrap().holds);
        prop_assert_eq!(
            is_reticulation_visible_structural(&n).holds,
            is_reticulation_visible_on_path(&s).unwrap().holds
        );
        if is_tree_child_structural(&n).holds {
            prop_assert!(strongly_displayed_check(&s).unwrap().holds);
        }
    }
}
