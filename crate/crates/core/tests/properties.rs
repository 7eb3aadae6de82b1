//! Randomized invariants over small graphs.

use gluecount::{
    automorphism_count, canonical_key, count_copies, count_decompositions, count_embeddings,
    enumerate_gluings, enumerate_set_partitions, total_variation, DistributionSpec, Graph,
    Histogram,
};
use proptest::prelude::*;

/// A graph on `2..=6` vertices with an arbitrary edge set.
fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..=6).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (Just(n), 0u32..(1 << pairs)).prop_map(|(n, mask)| {
            let mut edges = Vec::new();
            let mut bit = 0;
            for v in 1..n {
                for u in 0..v {
                    if mask >> bit & 1 == 1 {
                        edges.push((u, v));
                    }
                    bit += 1;
                }
            }
            Graph::new(n, edges).unwrap()
        })
    })
}

fn graph_with_permutation() -> impl Strategy<Value = (Graph, Vec<usize>)> {
    arb_graph().prop_flat_map(|g| {
        let n = g.order();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

/// A connected pattern small enough that embedding counts stay cheap.
fn arb_connected_pattern() -> impl Strategy<Value = Graph> {
    arb_graph().prop_filter("pattern must be connected", |g| {
        g.is_connected() && g.order() <= 4
    })
}

proptest! {
    /// The canonical key cannot see vertex labels.
    #[test]
    fn canonical_key_is_label_blind((g, perm) in graph_with_permutation()) {
        prop_assert_eq!(canonical_key(&g), canonical_key(&g.relabel(&perm)));
    }

    /// Copy counts depend only on the host's isomorphism class.
    #[test]
    fn copy_counts_are_label_blind((host, perm) in graph_with_permutation()) {
        let pattern = Graph::path(2);
        prop_assert_eq!(
            count_copies(&pattern, &host),
            count_copies(&pattern, &host.relabel(&perm))
        );
    }

    /// Labelled and unlabelled counts differ by exactly the pattern's
    /// automorphisms.
    #[test]
    fn embeddings_factor_through_automorphisms(
        pattern in arb_connected_pattern(),
        host in arb_graph(),
    ) {
        prop_assert_eq!(
            count_embeddings(&pattern, &host),
            count_copies(&pattern, &host) * automorphism_count(&pattern)
        );
    }

    /// Total variation is a probability distance.
    #[test]
    fn total_variation_stays_in_unit_interval(
        counts in proptest::collection::vec(0u64..500, 2..=6),
    ) {
        prop_assume!(counts.iter().sum::<u64>() > 0);
        let q = counts.len() as u64;
        let h = Histogram::from_counts(q, counts).unwrap();
        let tv = total_variation(&h, &DistributionSpec::uniform(q).unwrap()).unwrap();
        prop_assert!((0.0..=1.0).contains(&tv));
    }

    /// Every enumerated set partition covers the ground set exactly once.
    #[test]
    fn set_partitions_cover_the_ground_set(n in 1usize..=6) {
        for partition in enumerate_set_partitions(n).unwrap() {
            let mut seen = vec![0u8; n];
            for block in partition.blocks() {
                prop_assert!(!block.is_empty());
                for &x in block {
                    seen[x] += 1;
                }
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
        }
    }
}

#[test]
fn gluing_records_respect_order_bounds() {
    let components = [Graph::cycle(3), Graph::path(2)];
    let lower = components.iter().map(Graph::order).max().unwrap();
    let upper = components.iter().map(Graph::order).sum::<usize>() - 1;
    let records = enumerate_gluings(&components).unwrap();
    assert!(!records.is_empty());
    for record in &records {
        let n = record.host.order();
        assert!((lower..=upper).contains(&n), "gluing on {n} vertices");
        assert!(record.s >= 1);
        assert_eq!(record.s, count_decompositions(&record.host, &components).unwrap());
    }
}
