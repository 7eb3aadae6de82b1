//! Census of small graphs up to isomorphism.

use std::collections::BTreeMap;

use crate::canon::{canonical_key, CanonicalKey};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order [`enumerate_graphs`] accepts. At order 7 the census
/// already holds 1044 graphs (853 connected); past that exhaustive
/// cross-checks stop being cheap.
pub const MAX_ENUMERATION_ORDER: usize = 7;

/// All graphs on exactly `n` vertices up to isomorphism, canonically
/// ordered, built by augmenting the census one vertex at a time.
pub fn enumerate_graphs(n: usize, connected_only: bool) -> Result<Vec<Graph>> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::TooLarge {
            what: "enumeration order",
            limit: MAX_ENUMERATION_ORDER,
            actual: n,
        });
    }
    let mut reps = vec![Graph::empty(0)];
    for k in 1..=n {
        let mut next: BTreeMap<CanonicalKey, Graph> = BTreeMap::new();
        for g in &reps {
            for mask in 0u64..(1 << (k - 1)) {
                let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
                for i in 0..k - 1 {
                    if mask >> i & 1 == 1 {
                        edges.push((i, k - 1));
                    }
                }
                let candidate = Graph::new(k, edges).unwrap();
                next.entry(canonical_key(&candidate)).or_insert(candidate);
            }
        }
        reps = next.into_values().collect();
    }
    if connected_only {
        reps.retain(|g| g.is_connected());
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_isomorphic;

    #[test]
    fn census_sizes() {
        let all: Vec<usize> = (1..=7)
            .map(|n| enumerate_graphs(n, false).unwrap().len())
            .collect();
        assert_eq!(all, vec![1, 2, 4, 11, 34, 156, 1044]);
        let connected: Vec<usize> = (1..=7)
            .map(|n| enumerate_graphs(n, true).unwrap().len())
            .collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112, 853]);
    }

    #[test]
    fn guard() {
        assert!(matches!(
            enumerate_graphs(8, false),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn entries_are_pairwise_nonisomorphic_and_ordered() {
        let graphs = enumerate_graphs(5, false).unwrap();
        for (i, a) in graphs.iter().enumerate() {
            for b in &graphs[i + 1..] {
                assert!(!brute_force_isomorphic(a, b));
            }
        }
        let keys: Vec<_> = graphs.iter().map(canonical_key).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn matches_direct_edge_subset_enumeration() {
        // Independent route: every edge subset of K_n, deduplicated by
        // brute-force isomorphism.
        for n in 1..=5usize {
            let full: Vec<(usize, usize)> = Graph::complete(n).edges().to_vec();
            let mut reps: Vec<Graph> = Vec::new();
            for mask in 0u64..(1 << full.len()) {
                let edges = full
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e);
                let g = Graph::new(n, edges).unwrap();
                if !reps.iter().any(|r| brute_force_isomorphic(r, &g)) {
                    reps.push(g);
                }
            }
            assert_eq!(reps.len(), enumerate_graphs(n, false).unwrap().len());
            let connected = reps.iter().filter(|g| g.is_connected()).count();
            assert_eq!(connected, enumerate_graphs(n, true).unwrap().len());
        }
    }
}
