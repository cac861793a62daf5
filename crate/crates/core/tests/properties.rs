use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kempe_core::coloring::{is_proper, Coloring};
use kempe_core::degenerate::minimal_degree_bound;
use kempe_core::gen::{connected_gnp, random_coloring};
use kempe_core::graph::Graph;
use kempe_core::io::{format_dimacs, parse_dimacs};
use kempe_core::kempe::{apply_move, invert_moves, kempe_chain, replay, verify_sequence, KempeMove};
use kempe_core::oracle::{build_reconf, is_frozen};
use kempe_core::{lvm_sequence, RecolorSetting, Recolorer};

/// A connected graph, a palette size and two proper colorings drawn from one seed.
fn instance(seed: u64, n: usize, p: f64, extra: usize) -> Option<(Graph, usize, Coloring, Coloring)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = connected_gnp(&mut rng, n, p);
    let k = minimal_degree_bound(&g).0 + extra;
    let a = random_coloring(&mut rng, &g, k, None)?;
    let b = random_coloring(&mut rng, &g, k, None)?;
    Some((g, k, a, b))
}

fn partition(col: &Coloring) -> BTreeSet<Vec<usize>> {
    col.partition().into_iter().filter(|c| !c.is_empty()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn a_move_is_undone_by_the_move_back(seed in any::<u64>(), n in 2usize..12, v in 0usize..12, c in 1usize..5) {
        let Some((g, k, a, _)) = instance(seed, n, 0.3, 1) else { return Ok(()) };
        let (v, c) = (v % n, (c - 1) % k + 1);
        prop_assume!(a.get(v) != c);
        let moved = apply_move(&g, &a, KempeMove::new(v, c)).unwrap();
        prop_assert!(is_proper(&g, &moved, None));
        let back = apply_move(&g, &moved, KempeMove::new(v, a.get(v))).unwrap();
        prop_assert_eq!(back.colors(), a.colors());
    }

    #[test]
    fn chains_partition_two_color_classes(seed in any::<u64>(), n in 2usize..14, c1 in 1usize..5, c2 in 1usize..5) {
        let Some((g, k, a, _)) = instance(seed, n, 0.25, 1) else { return Ok(()) };
        let (c1, c2) = ((c1 - 1) % k + 1, (c2 - 1) % k + 1);
        prop_assume!(c1 != c2);
        let members: Vec<usize> = g.vertices().filter(|&v| a.get(v) == c1 || a.get(v) == c2).collect();
        let mut seen = vec![false; n];
        for &v in &members {
            let other = if a.get(v) == c1 { c2 } else { c1 };
            let chain = kempe_chain(&g, &a, v, other).unwrap();
            prop_assert!(chain.contains(&v));
            if !seen[v] {
                for &x in &chain {
                    prop_assert!(!seen[x]);
                    seen[x] = true;
                }
            }
        }
        prop_assert!(members.iter().all(|&v| seen[v]));
    }

    #[test]
    fn inverse_sequences_return_home(seed in any::<u64>(), n in 2usize..10) {
        let Some((g, k, a, b)) = instance(seed, n, 0.3, 1) else { return Ok(()) };
        let seq = lvm_sequence(&g, &a, &b, k).unwrap();
        let inverse = invert_moves(&g, &a, &seq.moves).unwrap();
        prop_assert_eq!(replay(&g, &b, &inverse).unwrap(), a);
    }

    #[test]
    fn lvm_reaches_the_target(seed in any::<u64>(), n in 1usize..12) {
        let Some((g, k, a, b)) = instance(seed, n, 0.3, 1) else { return Ok(()) };
        let seq = lvm_sequence(&g, &a, &b, k).unwrap();
        prop_assert_eq!(verify_sequence(&g, &a, &seq, None).unwrap(), b);
    }

    #[test]
    fn degenerate_recoloring_is_quadratic(seed in any::<u64>(), n in 1usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = connected_gnp(&mut rng, n, 0.3);
        let (d, ord) = minimal_degree_bound(&g);
        let Some(a) = random_coloring(&mut rng, &g, d, None) else { return Ok(()) };
        let Some(b) = random_coloring(&mut rng, &g, d, None) else { return Ok(()) };
        let rec = Recolorer::new(&g, &ord, RecolorSetting::Degree { k: d, d }).unwrap();
        let seq = rec.equalize(&a, &b).unwrap().combined;
        prop_assert!(seq.len() <= 4 * n * n);
        prop_assert_eq!(verify_sequence(&g, &a, &seq, None).unwrap(), b);
    }

    #[test]
    fn dimacs_round_trips(seed in any::<u64>(), n in 1usize..20) {
        let g = connected_gnp(&mut ChaCha8Rng::seed_from_u64(seed), n, 0.2);
        let back = parse_dimacs(&format_dimacs(&g)).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reconfiguration_graph_is_symmetric_and_classes_are_components(seed in any::<u64>(), n in 2usize..7, k in 2usize..4) {
        let g = connected_gnp(&mut ChaCha8Rng::seed_from_u64(seed), n, 0.4);
        let rg = build_reconf(&g, k).unwrap();
        for (i, nb) in rg.adjacency.iter().enumerate() {
            for &j in nb {
                prop_assert!(rg.adjacency[j].contains(&i));
                prop_assert_eq!(rg.class_of[i], rg.class_of[j]);
            }
        }
        for s in 0..rg.nodes.len().min(4) {
            let dist = rg.distances_from(s);
            for (t, &d) in dist.iter().enumerate() {
                prop_assert_eq!(d != usize::MAX, rg.class_of[s] == rg.class_of[t]);
            }
        }
    }

    #[test]
    fn moves_from_frozen_colorings_only_rename_classes(seed in any::<u64>(), n in 2usize..7, k in 2usize..4) {
        let g = connected_gnp(&mut ChaCha8Rng::seed_from_u64(seed), n, 0.5);
        let rg = build_reconf(&g, k).unwrap();
        for col in rg.nodes.iter().filter(|c| is_frozen(&g, c)) {
            for v in g.vertices() {
                for c in (1..=k).filter(|&c| c != col.get(v)) {
                    let next = apply_move(&g, col, KempeMove::new(v, c)).unwrap();
                    prop_assert_eq!(partition(&next), partition(col));
                }
            }
        }
    }
}
