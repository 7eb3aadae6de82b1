//! Gluings and their decompositions.
//!
//! A gluing of connected graphs `G_1, .., G_k` is a connected graph `H`
//! carrying subgraph copies `H_i` isomorphic to `G_i` whose edge sets
//! cover `E(H)`. An ordered tuple `(H_1, .., H_k)` of such copies is a
//! decomposition, `s(H)` counts them, and `H` is uniquely decomposable
//! when `s(H) = 1`. Everything below works from these definitions:
//! candidate gluings come from identifying vertices across fresh copies
//! of the components, and `s` is recomputed by exhaustive search rather
//! than trusted from the construction.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::canon::{canonical_key, CanonicalKey};
use crate::count::for_each_embedding;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{enumerate_set_partitions, SetPartition};

/// Default cap on the total vertex count of the components handed to
/// [`enumerate_gluings`]; candidate generation is exponential in it.
pub const DEFAULT_GLUING_BUDGET: usize = 12;

/// A subgraph copy inside a host: the vertices it uses and the host
/// edges it claims.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// One gluing of a fixed component list.
#[derive(Clone, Debug)]
pub struct GluingRecord {
    /// The glued graph.
    pub host: Graph,
    /// Canonical keys of the components, in input order.
    pub components: Vec<CanonicalKey>,
    /// Number of ordered decompositions.
    pub s: u64,
    /// One decomposition; `witness[i]` is the copy of component `i`.
    pub witness: Vec<Part>,
}

/// Intersection pattern of the unique decomposition of a gluing:
/// vertex `i` stands for component `i`, with an edge when the copies
/// share a host vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureGraph(Graph);

impl StructureGraph {
    pub fn as_graph(&self) -> &Graph {
        &self.0
    }

    pub fn is_tree(&self) -> bool {
        self.0.is_connected() && self.0.size() + 1 == self.0.order()
    }
}

fn check_host_and_patterns(host: &Graph, patterns: &[Graph]) -> Result<()> {
    if patterns.is_empty() {
        return Err(Error::InvalidArgument("empty pattern list".into()));
    }
    if !host.is_connected() {
        return Err(Error::Disconnected { role: "gluing host" });
    }
    for p in patterns {
        if !p.is_connected() {
            return Err(Error::Disconnected { role: "component" });
        }
    }
    if host.order() > 64 || host.size() > 128 {
        return Err(Error::TooLarge {
            what: "decomposition host size",
            limit: 128,
            actual: host.size().max(host.order()),
        });
    }
    Ok(())
}

/// All copies of `pattern` in `host` as (vertex mask, edge mask) pairs,
/// sorted for determinism.
fn copy_masks(pattern: &Graph, host: &Graph) -> Vec<(u64, u128)> {
    let mut edge_id: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, &e) in host.edges().iter().enumerate() {
        edge_id.insert(e, i);
    }
    let mut seen: HashSet<(u64, u128)> = HashSet::new();
    for_each_embedding(pattern, host, |map| {
        let vmask = map.iter().fold(0u64, |acc, &v| acc | 1 << v);
        let emask = pattern.edges().iter().fold(0u128, |acc, &(a, b)| {
            let (u, v) = (map[a].min(map[b]), map[a].max(map[b]));
            acc | 1 << edge_id[&(u, v)]
        });
        seen.insert((vmask, emask));
    });
    let mut copies: Vec<(u64, u128)> = seen.into_iter().collect();
    copies.sort_unstable();
    copies
}

/// Walks every ordered decomposition of `host` into copies of the
/// patterns; `visit` receives one (vertex mask, edge mask) per pattern.
fn for_each_decomposition(
    host: &Graph,
    patterns: &[Graph],
    mut visit: impl FnMut(&[(u64, u128)]),
) -> Result<()> {
    check_host_and_patterns(host, patterns)?;
    let lists: Vec<Vec<(u64, u128)>> = patterns.iter().map(|p| copy_masks(p, host)).collect();
    let target: u128 = if host.size() == 0 {
        0
    } else {
        (1u128 << host.size()) - 1
    };
    // What the tail of the pattern list can still cover.
    let mut tail_cover = vec![0u128; lists.len() + 1];
    for i in (0..lists.len()).rev() {
        tail_cover[i] = tail_cover[i + 1] | lists[i].iter().fold(0, |acc, &(_, e)| acc | e);
    }
    fn rec(
        lists: &[Vec<(u64, u128)>],
        tail_cover: &[u128],
        idx: usize,
        chosen: &mut Vec<(u64, u128)>,
        covered: u128,
        target: u128,
        visit: &mut impl FnMut(&[(u64, u128)]),
    ) {
        if target & !(covered | tail_cover[idx]) != 0 {
            return;
        }
        if idx == lists.len() {
            if covered == target {
                visit(chosen);
            }
            return;
        }
        for &(vmask, emask) in &lists[idx] {
            chosen.push((vmask, emask));
            rec(lists, tail_cover, idx + 1, chosen, covered | emask, target, visit);
            chosen.pop();
        }
    }
    rec(&lists, &tail_cover, 0, &mut Vec::new(), 0, target, &mut visit);
    Ok(())
}

fn masks_to_part(host: &Graph, vmask: u64, emask: u128) -> Part {
    let vertices: Vec<usize> = (0..host.order()).filter(|&v| vmask >> v & 1 == 1).collect();
    let edges: Vec<(usize, usize)> = host
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| emask >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    Part { vertices, edges }
}

/// `s(H)` for the given pattern list: the number of ordered tuples of
/// copies whose edge sets cover `E(H)`. The patterns may repeat.
pub fn count_decompositions(host: &Graph, patterns: &[Graph]) -> Result<u64> {
    let mut count = 0u64;
    for_each_decomposition(host, patterns, |_| count += 1)?;
    Ok(count)
}

/// Every ordered decomposition, materialized.
pub fn decompositions(host: &Graph, patterns: &[Graph]) -> Result<Vec<Vec<Part>>> {
    let mut out = Vec::new();
    for_each_decomposition(host, patterns, |chosen| {
        out.push(
            chosen
                .iter()
                .map(|&(v, e)| masks_to_part(host, v, e))
                .collect(),
        );
    })?;
    Ok(out)
}

/// True when `s(host) = 1` for this pattern list.
pub fn is_uniquely_decomposable(host: &Graph, patterns: &[Graph]) -> Result<bool> {
    Ok(count_decompositions(host, patterns)? == 1)
}

/// All graphs obtained by identifying the vertices of `add` with
/// vertices of `base` along every injective partial map (including the
/// empty one). Labeled duplicates are removed; isomorphic duplicates
/// are left to the caller.
fn identifications(base: &Graph, add: &Graph) -> Vec<Graph> {
    let b = base.order();
    let a = add.order();
    let mut out = HashSet::new();
    let mut image = vec![usize::MAX; a];
    let mut taken = vec![false; b];
    fn rec(
        base: &Graph,
        add: &Graph,
        v: usize,
        image: &mut Vec<usize>,
        taken: &mut Vec<bool>,
        out: &mut HashSet<Graph>,
    ) {
        let a = add.order();
        if v == a {
            let b = base.order();
            let mut fresh = b;
            let map: Vec<usize> = image
                .iter()
                .map(|&im| {
                    if im == usize::MAX {
                        fresh += 1;
                        fresh - 1
                    } else {
                        im
                    }
                })
                .collect();
            let mut edges: HashSet<(usize, usize)> = base.edges().iter().copied().collect();
            for &(x, y) in add.edges() {
                let (u, w) = (map[x].min(map[y]), map[x].max(map[y]));
                edges.insert((u, w));
            }
            out.insert(Graph::new(fresh, edges).unwrap());
            return;
        }
        rec(base, add, v + 1, image, taken, out);
        for w in 0..base.order() {
            if taken[w] {
                continue;
            }
            image[v] = w;
            taken[w] = true;
            rec(base, add, v + 1, image, taken, out);
            image[v] = usize::MAX;
            taken[w] = false;
        }
    }
    rec(base, add, 0, &mut image, &mut taken, &mut out);
    out.into_iter().collect()
}

/// Candidate generation plus definitional `s`: shared by the public
/// enumeration and the calculus, which also needs repeated components.
pub(crate) fn gluings_unchecked(components: &[Graph], budget: usize) -> Result<Vec<GluingRecord>> {
    let total: usize = components.iter().map(|g| g.order()).sum();
    if total > budget {
        return Err(Error::TooLarge {
            what: "gluing vertex budget",
            limit: budget,
            actual: total,
        });
    }
    // Candidate dedup runs through canonical keys, so raising the
    // budget cannot outrun the canonical-form guard.
    if total > crate::canon::MAX_CANONICAL_ORDER {
        return Err(Error::TooLarge {
            what: "gluing total order (canonical-form guard)",
            limit: crate::canon::MAX_CANONICAL_ORDER,
            actual: total,
        });
    }
    for g in components {
        if !g.is_connected() {
            return Err(Error::Disconnected { role: "component" });
        }
        if g.order() == 0 {
            return Err(Error::InvalidArgument("empty component".into()));
        }
    }

    // Fold the components in, one partial identification at a time.
    // Intermediate unions may be disconnected (components do not have
    // to meet their list neighbors), so connectivity is only required
    // at the end.
    let mut partial: Vec<Graph> = vec![components[0].clone()];
    for comp in &components[1..] {
        let mut seen: BTreeMap<CanonicalKey, Graph> = BTreeMap::new();
        for base in &partial {
            for candidate in identifications(base, comp) {
                seen.entry(canonical_key(&candidate)).or_insert(candidate);
            }
        }
        partial = seen.into_values().collect();
    }

    let mut records = Vec::new();
    for host in partial {
        if !host.is_connected() {
            continue;
        }
        let mut s = 0u64;
        let mut witness: Option<Vec<Part>> = None;
        for_each_decomposition(&host, components, |chosen| {
            if witness.is_none() {
                witness = Some(
                    chosen
                        .iter()
                        .map(|&(v, e)| masks_to_part(&host, v, e))
                        .collect(),
                );
            }
            s += 1;
        })?;
        debug_assert!(s >= 1, "constructed candidate lost its decomposition");
        let components_keys = components.iter().map(canonical_key).collect();
        records.push(GluingRecord {
            witness: witness.unwrap(),
            components: components_keys,
            s,
            host,
        });
    }
    records.sort_by_cached_key(|r| (r.host.order(), r.host.size(), canonical_key(&r.host)));
    Ok(records)
}

/// Every gluing of the listed components, up to isomorphism, with its
/// decomposition count `s` and one witness decomposition. Components
/// must be connected and pairwise non-isomorphic, and their total order
/// must stay within `budget`.
pub fn enumerate_gluings_with_budget(
    components: &[Graph],
    budget: usize,
) -> Result<Vec<GluingRecord>> {
    if components.len() < 2 {
        return Err(Error::InvalidArgument(
            "gluing needs at least two components".into(),
        ));
    }
    let keys: Vec<CanonicalKey> = components.iter().map(canonical_key).collect();
    for i in 0..keys.len() {
        for j in i + 1..keys.len() {
            if keys[i] == keys[j] {
                return Err(Error::DuplicateComponents);
            }
        }
    }
    gluings_unchecked(components, budget)
}

/// [`enumerate_gluings_with_budget`] at [`DEFAULT_GLUING_BUDGET`].
pub fn enumerate_gluings(components: &[Graph]) -> Result<Vec<GluingRecord>> {
    enumerate_gluings_with_budget(components, DEFAULT_GLUING_BUDGET)
}

/// The intersection pattern of the unique decomposition. Errors unless
/// `s(host) = 1` for this component list.
pub fn structure_graph(host: &Graph, patterns: &[Graph]) -> Result<StructureGraph> {
    let decomps = decompositions(host, patterns)?;
    if decomps.len() != 1 {
        return Err(Error::NotUniquelyDecomposable {
            s: decomps.len() as u64,
        });
    }
    let parts = &decomps[0];
    let k = parts.len();
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if parts[i].vertices.iter().any(|v| parts[j].vertices.contains(v)) {
                edges.push((i, j));
            }
        }
    }
    Ok(StructureGraph(Graph::new(k, edges).unwrap()))
}

/// Uniquely decomposable with a tree intersection pattern.
pub fn is_tree_like(host: &Graph, patterns: &[Graph]) -> Result<bool> {
    if count_decompositions(host, patterns)? != 1 {
        return Ok(false);
    }
    Ok(structure_graph(host, patterns)?.is_tree())
}

/// Partitions of the component indices whose blocks induce connected
/// unions inside the unique decomposition of `host`.
pub fn h_good_partitions(host: &Graph, patterns: &[Graph]) -> Result<Vec<SetPartition>> {
    let decomps = decompositions(host, patterns)?;
    if decomps.len() != 1 {
        return Err(Error::NotUniquelyDecomposable {
            s: decomps.len() as u64,
        });
    }
    let parts = &decomps[0];
    let good = enumerate_set_partitions(patterns.len())?
        .into_iter()
        .filter(|p| {
            p.blocks().iter().all(|block| {
                let mut vertices: Vec<usize> = block
                    .iter()
                    .flat_map(|&i| parts[i].vertices.iter().copied())
                    .collect();
                vertices.sort_unstable();
                vertices.dedup();
                let mut edges: Vec<(usize, usize)> = block
                    .iter()
                    .flat_map(|&i| parts[i].edges.iter().copied())
                    .collect();
                edges.sort_unstable();
                edges.dedup();
                Graph::part(&vertices, &edges).unwrap().is_connected()
            })
        })
        .collect();
    Ok(good)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::isomorphic;

    fn c3() -> Graph {
        Graph::cycle(3)
    }

    fn c4() -> Graph {
        Graph::cycle(4)
    }

    fn diamond() -> Graph {
        Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap()
    }

    /// Three triangles sharing one edge; equivalently the diamond with
    /// an extra vertex joined to both ends of the chord.
    fn triangle_book() -> Graph {
        Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (0, 4), (2, 4)]).unwrap()
    }

    fn vertex_glued_c3_c4() -> Graph {
        Graph::new(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 2)]).unwrap()
    }

    fn edge_glued_c3_c4() -> Graph {
        Graph::new(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 2)]).unwrap()
    }

    #[test]
    fn decomposition_counts_for_c3_c4() {
        let comps = [c3(), c4()];
        assert_eq!(count_decompositions(&vertex_glued_c3_c4(), &comps).unwrap(), 1);
        assert_eq!(count_decompositions(&edge_glued_c3_c4(), &comps).unwrap(), 1);
        assert_eq!(count_decompositions(&diamond(), &comps).unwrap(), 2);
        assert_eq!(count_decompositions(&triangle_book(), &comps).unwrap(), 3);
        // C5 is covered by neither component pair.
        assert_eq!(count_decompositions(&Graph::cycle(5), &comps).unwrap(), 0);
    }

    #[test]
    fn s_of_a_host_that_is_itself_a_component() {
        // P2 decomposes into (edge, P2) two ways.
        let comps = [Graph::path(1), Graph::path(2)];
        assert_eq!(count_decompositions(&Graph::path(2), &comps).unwrap(), 2);
        assert_eq!(count_decompositions(&Graph::cycle(3), &comps).unwrap(), 3);
        assert_eq!(count_decompositions(&Graph::star(3), &comps).unwrap(), 3);
        assert_eq!(count_decompositions(&Graph::path(3), &comps).unwrap(), 2);
    }

    #[test]
    fn repeated_patterns_are_allowed_definitionally() {
        // (H_1, H_2) both copies of K2 covering P1: only (e, e).
        let comps = [Graph::path(1), Graph::path(1)];
        assert_eq!(count_decompositions(&Graph::path(1), &comps).unwrap(), 1);
        assert_eq!(count_decompositions(&Graph::path(2), &comps).unwrap(), 2);
    }

    #[test]
    fn k1_components_decompose_by_vertex_choice() {
        let comps = [Graph::single_vertex(), c3()];
        assert_eq!(count_decompositions(&c3(), &comps).unwrap(), 3);
    }

    #[test]
    fn census_c3_c4() {
        let records = enumerate_gluings(&[c3(), c4()]).unwrap();
        assert_eq!(records.len(), 4);
        let mut s: Vec<u64> = records.iter().map(|r| r.s).collect();
        s.sort_unstable();
        assert_eq!(s, vec![1, 1, 2, 3]);
        // The four shapes, identified explicitly.
        for (expected, s_expected) in [
            (vertex_glued_c3_c4(), 1),
            (edge_glued_c3_c4(), 1),
            (diamond(), 2),
            (triangle_book(), 3),
        ] {
            let hit = records
                .iter()
                .find(|r| isomorphic(&r.host, &expected))
                .expect("census missing a shape");
            assert_eq!(hit.s, s_expected);
        }
    }

    #[test]
    fn census_p1_p2() {
        let records = enumerate_gluings(&[Graph::path(1), Graph::path(2)]).unwrap();
        let mut s: Vec<u64> = records.iter().map(|r| r.s).collect();
        s.sort_unstable();
        assert_eq!(s, vec![2, 2, 3, 3]);
        let shapes = [Graph::path(2), Graph::path(3), Graph::star(3), c3()];
        for shape in &shapes {
            assert!(records.iter().any(|r| isomorphic(&r.host, shape)));
        }
    }

    #[test]
    fn census_p1_p3() {
        let records = enumerate_gluings(&[Graph::path(1), Graph::path(3)]).unwrap();
        let mut s: Vec<u64> = records.iter().map(|r| r.s).collect();
        s.sort_unstable();
        assert_eq!(s, vec![2, 2, 2, 3, 4]);
        let chair = Graph::new(5, [(0, 1), (1, 2), (2, 3), (2, 4)]).unwrap();
        let paw = Graph::new(4, [(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        for shape in [Graph::path(3), Graph::path(4), chair, c4(), paw] {
            assert!(records.iter().any(|r| isomorphic(&r.host, &shape)));
        }
    }

    #[test]
    fn census_k1_c3() {
        // A single vertex glued anywhere into C3 is C3 itself, s = 3.
        let records = enumerate_gluings(&[Graph::single_vertex(), c3()]).unwrap();
        assert_eq!(records.len(), 1);
        assert!(isomorphic(&records[0].host, &c3()));
        assert_eq!(records[0].s, 3);
    }

    #[test]
    fn witnesses_are_valid() {
        for records in [
            enumerate_gluings(&[c3(), c4()]).unwrap(),
            enumerate_gluings(&[Graph::path(1), Graph::path(3)]).unwrap(),
        ] {
            for r in records {
                let mut covered: HashSet<(usize, usize)> = HashSet::new();
                for (part, key) in r.witness.iter().zip(&r.components) {
                    let piece = Graph::part(&part.vertices, &part.edges).unwrap();
                    assert_eq!(canonical_key(&piece), *key);
                    covered.extend(part.edges.iter().copied());
                }
                assert_eq!(covered.len(), r.host.size());
                assert_eq!(r.s, count_decompositions(&r.host, &[
                    r.components[0].to_graph(),
                    r.components[1].to_graph(),
                ]).unwrap());
            }
        }
    }

    #[test]
    fn duplicate_components_rejected() {
        assert!(matches!(
            enumerate_gluings(&[c3(), c3()]),
            Err(Error::DuplicateComponents)
        ));
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(
            enumerate_gluings(&[Graph::cycle(6), Graph::cycle(7)]),
            Err(Error::TooLarge { .. })
        ));
        // Raising the budget cannot outrun the canonical-form guard.
        assert!(matches!(
            enumerate_gluings_with_budget(&[Graph::cycle(6), Graph::cycle(7)], 13),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            enumerate_gluings_with_budget(&[c3(), c4()], 6),
            Err(Error::TooLarge { .. })
        ));
        assert!(enumerate_gluings_with_budget(&[c3(), c4()], 7).is_ok());
    }

    #[test]
    fn completeness_against_census() {
        // Every connected graph small enough to be a gluing of the pair
        // appears in the enumeration exactly when its s is positive.
        let comps = [Graph::path(1), Graph::path(3)];
        let records = enumerate_gluings(&comps).unwrap();
        for n in 1..=6 {
            for g in crate::enumerate::enumerate_graphs(n, true).unwrap() {
                let s = count_decompositions(&g, &comps).unwrap();
                let listed = records.iter().find(|r| isomorphic(&r.host, &g));
                match listed {
                    Some(r) => assert_eq!(r.s, s),
                    None => assert_eq!(s, 0),
                }
            }
        }
    }

    #[test]
    fn structure_graph_of_unique_gluings() {
        let sg = structure_graph(&vertex_glued_c3_c4(), &[c3(), c4()]).unwrap();
        assert_eq!(sg.as_graph().edges(), &[(0, 1)]);
        assert!(sg.is_tree());
        assert!(matches!(
            structure_graph(&diamond(), &[c3(), c4()]),
            Err(Error::NotUniquelyDecomposable { s: 2 })
        ));
    }

    #[test]
    fn tree_likeness() {
        assert!(is_tree_like(&vertex_glued_c3_c4(), &[c3(), c4()]).unwrap());
        assert!(!is_tree_like(&diamond(), &[c3(), c4()]).unwrap());
    }
}
