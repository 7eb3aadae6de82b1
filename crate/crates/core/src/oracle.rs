//! Reference counter used to arbitrate the fast paths.
//!
//! Everything here is deliberately naive and shares no search machinery
//! with [`crate::count`]: copies of each pattern component are found by
//! enumerating vertex subsets and edge subsets of the host and testing
//! isomorphism by exhaustive permutation, then disjoint combinations are
//! counted slot by slot. Hosts are guarded to stay inside exhaustive
//! range.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default host-order guard for [`oracle_count`].
pub const DEFAULT_ORACLE_GUARD: usize = 12;

/// Isomorphism by trying every degree-compatible bijection.
pub(crate) fn brute_force_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.order() != b.order() || a.size() != b.size() {
        return false;
    }
    if a.degree_sequence() != b.degree_sequence() {
        return false;
    }
    let n = a.order();
    let mut image = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    fn place(a: &Graph, b: &Graph, v: usize, image: &mut [usize], taken: &mut [bool]) -> bool {
        if v == a.order() {
            return true;
        }
        for w in 0..b.order() {
            if taken[w] || a.degree(v) != b.degree(w) {
                continue;
            }
            let consistent = (0..v).all(|u| a.has_edge(u, v) == b.has_edge(image[u], w));
            if !consistent {
                continue;
            }
            image[v] = w;
            taken[w] = true;
            if place(a, b, v + 1, image, taken) {
                return true;
            }
            taken[w] = false;
        }
        false
    }
    place(a, b, 0, &mut image, &mut taken)
}

fn combinations(pool: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(pool: usize, k: usize, start: usize, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if chosen.len() == k {
            visit(chosen);
            return;
        }
        let needed = k - chosen.len();
        for i in start..=pool.saturating_sub(needed) {
            chosen.push(i);
            rec(pool, k, i + 1, chosen, visit);
            chosen.pop();
        }
    }
    if k <= pool {
        rec(pool, k, 0, &mut Vec::with_capacity(k), &mut visit);
    }
}

/// Every copy of a connected `component` in `host`, as
/// (vertex mask, edge mask) pairs. Each placement is generated once.
fn component_copies(component: &Graph, host: &Graph) -> Vec<(u64, u128)> {
    let c = component.order();
    let m = component.size();
    let comp_degrees = component.degree_sequence();
    let mut found = Vec::new();
    combinations(host.order(), c, |subset| {
        let inside: Vec<usize> = (0..host.size())
            .filter(|&ei| {
                let (u, v) = host.edges()[ei];
                subset.contains(&u) && subset.contains(&v)
            })
            .collect();
        combinations(inside.len(), m, |picked| {
            let edge_ids: Vec<usize> = picked.iter().map(|&i| inside[i]).collect();
            let edges: Vec<(usize, usize)> = edge_ids.iter().map(|&ei| host.edges()[ei]).collect();
            let candidate = Graph::part(subset, &edges).unwrap();
            if candidate.degree_sequence() != comp_degrees {
                return;
            }
            if brute_force_isomorphic(&candidate, component) {
                let vmask = subset.iter().fold(0u64, |acc, &v| acc | 1 << v);
                let emask = edge_ids.iter().fold(0u128, |acc, &ei| acc | 1 << ei);
                found.push((vmask, emask));
            }
        });
    });
    found
}

/// Copy count with an explicit host-order guard.
pub fn oracle_count_guarded(pattern: &Graph, host: &Graph, guard: usize) -> Result<u64> {
    if host.order() > guard {
        return Err(Error::TooLarge {
            what: "oracle host order",
            limit: guard,
            actual: host.order(),
        });
    }
    if host.order() > 64 || host.size() > 128 {
        return Err(Error::TooLarge {
            what: "oracle host size",
            limit: 128,
            actual: host.size().max(host.order()),
        });
    }
    if pattern.order() == 0 {
        return Ok(1);
    }

    // Group pattern components into isomorphism classes; isomorphic
    // slots share one copy list and overcount unordered copies by the
    // product of the class factorials.
    let components = pattern.component_parts();
    let mut classes: Vec<(Graph, u64)> = Vec::new();
    let mut slots: Vec<usize> = Vec::new();
    for comp in components {
        match classes
            .iter()
            .position(|(rep, _)| brute_force_isomorphic(rep, &comp))
        {
            Some(i) => {
                classes[i].1 += 1;
                slots.push(i);
            }
            None => {
                classes.push((comp, 1));
                slots.push(classes.len() - 1);
            }
        }
    }
    let copy_lists: Vec<Vec<(u64, u128)>> = classes
        .iter()
        .map(|(rep, _)| component_copies(rep, host))
        .collect();
    // Fewest-copies-first keeps the tuple search shallow.
    slots.sort_by_key(|&cls| copy_lists[cls].len());

    fn tuples(slots: &[usize], lists: &[Vec<(u64, u128)>], used: u64) -> u64 {
        match slots.split_first() {
            None => 1,
            Some((&cls, rest)) => lists[cls]
                .iter()
                .filter(|&&(vmask, _)| vmask & used == 0)
                .map(|&(vmask, _)| tuples(rest, lists, used | vmask))
                .sum(),
        }
    }
    let ordered = tuples(&slots, &copy_lists, 0);
    let repeat: u64 = classes.iter().map(|&(_, m)| (1..=m).product::<u64>()).product();
    assert_eq!(ordered % repeat, 0, "slot tuples not divisible by class factorials");
    Ok(ordered / repeat)
}

/// Same contract as [`crate::count::count_copies`], computed by subset
/// placement enumeration and direct isomorphism tests. Host order is
/// guarded to [`DEFAULT_ORACLE_GUARD`].
pub fn oracle_count(pattern: &Graph, host: &Graph) -> Result<u64> {
    oracle_count_guarded(pattern, host, DEFAULT_ORACLE_GUARD)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_copies;

    #[test]
    fn brute_iso_basics() {
        assert!(brute_force_isomorphic(&Graph::cycle(4), &Graph::cycle(4)));
        let relabeled = Graph::new(4, [(2, 0), (0, 3), (3, 1), (1, 2)]).unwrap();
        assert!(brute_force_isomorphic(&Graph::cycle(4), &relabeled));
        assert!(!brute_force_isomorphic(&Graph::cycle(4), &Graph::path(3)));
        assert!(!brute_force_isomorphic(
            &Graph::cycle(6),
            &Graph::disjoint_union(&[Graph::cycle(3), Graph::cycle(3)])
        ));
    }

    #[test]
    fn matches_known_counts() {
        assert_eq!(oracle_count(&Graph::cycle(3), &Graph::complete(5)).unwrap(), 10);
        assert_eq!(oracle_count(&Graph::cycle(4), &Graph::complete(5)).unwrap(), 15);
        let pat = Graph::disjoint_union(&[Graph::path(1), Graph::path(1)]);
        assert_eq!(oracle_count(&pat, &Graph::cycle(5)).unwrap(), 5);
    }

    #[test]
    fn guard_is_enforced() {
        let big = Graph::complete(13);
        assert!(matches!(
            oracle_count(&Graph::cycle(3), &big),
            Err(Error::TooLarge { .. })
        ));
        assert!(oracle_count_guarded(&Graph::cycle(3), &big, 13).is_ok());
    }

    #[test]
    fn agrees_with_fast_path_on_seeded_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let np = rng.random_range(1..=5);
            let nh = rng.random_range(1..=9);
            let pattern = random_graph(&mut rng, np, 0.5);
            let host = random_graph(&mut rng, nh, 0.5);
            assert_eq!(
                oracle_count(&pattern, &host).unwrap(),
                count_copies(&pattern, &host),
                "pattern {:?} host {:?}",
                pattern,
                host
            );
        }
    }

    fn random_graph(rng: &mut impl rand::Rng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, edges).unwrap()
    }
}
