//! Simple undirected graphs on vertex set `0..order`.
//!
//! Graphs here are immutable after construction: no loops, no parallel
//! edges, every edge stored as `(u, v)` with `u < v` in sorted order.
//! "Subgraph" always means an arbitrary (not necessarily induced)
//! subgraph; a copy of a pattern keeps both its vertex set and edge set.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Graph {
    order: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl std::hash::Hash for Graph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        self.edges.hash(state);
    }
}

impl Graph {
    /// Builds a graph from an edge list, validating endpoints and
    /// rejecting loops and duplicate edges.
    pub fn new(order: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a >= order || b >= order {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) out of range for order {order}"
                )));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("loop at vertex {a}")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate edge".into()));
        }
        let mut adj = vec![Vec::new(); order];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            order,
            edges: norm,
            adj,
        })
    }

    /// Graph with `order` vertices and no edges.
    pub fn empty(order: usize) -> Graph {
        Graph::new(order, []).unwrap()
    }

    /// The single vertex `K_1`.
    pub fn single_vertex() -> Graph {
        Graph::empty(1)
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).unwrap()
    }

    /// Cycle `C_n`, `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges = (0..n).map(|u| (u, (u + 1) % n));
        Graph::new(n, edges).unwrap()
    }

    /// Path with `edge_count` edges, so `edge_count + 1` vertices.
    /// `P_i` throughout this crate is the path with `i` edges.
    pub fn path(edge_count: usize) -> Graph {
        let edges = (0..edge_count).map(|u| (u, u + 1));
        Graph::new(edge_count + 1, edges).unwrap()
    }

    /// Star `K_{1,leaves}` with the center at vertex 0.
    pub fn star(leaves: usize) -> Graph {
        let edges = (1..=leaves).map(|v| (0, v));
        Graph::new(leaves + 1, edges).unwrap()
    }

    /// Disjoint union with vertices relabelled blockwise in order.
    pub fn disjoint_union(parts: &[Graph]) -> Graph {
        let order = parts.iter().map(|g| g.order).sum();
        let mut edges = Vec::new();
        let mut base = 0;
        for g in parts {
            edges.extend(g.edges.iter().map(|&(u, v)| (base + u, base + v)));
            base += g.order;
        }
        Graph::new(order, edges).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.order).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Degree sequence sorted descending.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.order).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Applies a permutation, `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.order);
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v]));
        Graph::new(self.order, edges).unwrap()
    }

    /// The subgraph spanned by `vertices` (relabelled to `0..len`) and
    /// exactly the listed `edges`, which must join listed vertices.
    pub fn part(vertices: &[usize], edges: &[(usize, usize)]) -> Result<Graph> {
        let mut map = std::collections::HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            if map.insert(v, i).is_some() {
                return Err(Error::InvalidArgument(format!("repeated vertex {v}")));
            }
        }
        let mapped: Result<Vec<(usize, usize)>> = edges
            .iter()
            .map(|&(u, v)| match (map.get(&u), map.get(&v)) {
                (Some(&a), Some(&b)) => Ok((a, b)),
                _ => Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) leaves the vertex list"
                ))),
            })
            .collect();
        Graph::new(vertices.len(), mapped?)
    }

    fn component_ids(&self) -> (usize, Vec<usize>) {
        let mut id = vec![usize::MAX; self.order];
        let mut count = 0;
        for start in 0..self.order {
            if id[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            id[start] = count;
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if id[w] == usize::MAX {
                        id[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, id)
    }

    /// Number of connected components (0 for the empty graph).
    pub fn component_count(&self) -> usize {
        self.component_ids().0
    }

    /// True when there is exactly one component.
    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Connected components as graphs, each relabelled to `0..len`.
    /// Components within the canonical-form guard are listed in
    /// canonical order (see [`crate::canon::CanonicalKey`]); larger
    /// ones fall back to a deterministic but labelling-dependent order.
    pub fn connected_components(&self) -> Vec<Graph> {
        let mut comps = self.component_parts();
        comps.sort_by_cached_key(|g| {
            let tail = if g.order() <= crate::canon::MAX_CANONICAL_ORDER {
                crate::canon::canonical_key(g).into_bits()
            } else {
                g.edges.iter().map(|&(u, v)| (u as u64) << 32 | v as u64).collect()
            };
            (g.order(), g.size(), g.degree_sequence(), tail)
        });
        comps
    }

    /// Components in discovery order, without the canonical sort.
    pub(crate) fn component_parts(&self) -> Vec<Graph> {
        let (count, id) = self.component_ids();
        let mut verts: Vec<Vec<usize>> = vec![Vec::new(); count];
        for v in 0..self.order {
            verts[id[v]].push(v);
        }
        verts
            .into_iter()
            .map(|vs| {
                let es: Vec<(usize, usize)> = self
                    .edges
                    .iter()
                    .copied()
                    .filter(|&(u, _)| vs.contains(&u))
                    .collect();
                Graph::part(&vs, &es).unwrap()
            })
            .collect()
    }

    /// Block degree of every vertex, `b(v) = c(G - v) - c(G)`, together
    /// with its maximum `B(G)`, the block-leaves (`b(v) = 0`), and the
    /// set attaining the maximum.
    pub fn block_profile(&self) -> Result<BlockProfile> {
        if !self.is_connected() {
            return Err(Error::Disconnected { role: "graph" });
        }
        let base = 1;
        let mut per_vertex = Vec::with_capacity(self.order);
        for v in 0..self.order {
            let rest: Vec<usize> = (0..self.order).filter(|&w| w != v).collect();
            let es: Vec<(usize, usize)> = self
                .edges
                .iter()
                .copied()
                .filter(|&(a, b)| a != v && b != v)
                .collect();
            let removed = Graph::part(&rest, &es).unwrap();
            per_vertex.push(removed.component_count().saturating_sub(base));
        }
        let max = per_vertex.iter().copied().max().unwrap_or(0);
        let block_leaves = (0..self.order).filter(|&v| per_vertex[v] == 0).collect();
        let max_set = (0..self.order).filter(|&v| per_vertex[v] == max).collect();
        Ok(BlockProfile {
            per_vertex,
            max,
            block_leaves,
            max_set,
        })
    }

    /// Connected, at least 3 vertices, and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        self.order >= 3
            && self
                .block_profile()
                .map(|p| p.max == 0)
                .unwrap_or(false)
    }

    /// BFS distance from `v` to the nearest vertex of `set`.
    pub fn distance_to_set(&self, v: usize, set: &[usize]) -> Result<usize> {
        if set.is_empty() {
            return Err(Error::InvalidArgument("distance to an empty set".into()));
        }
        if v >= self.order || set.iter().any(|&s| s >= self.order) {
            return Err(Error::InvalidArgument("vertex out of range".into()));
        }
        let mut dist = vec![usize::MAX; self.order];
        let mut queue = std::collections::VecDeque::new();
        for &s in set {
            if dist[s] == usize::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            if u == v {
                return Ok(dist[u]);
            }
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        Err(Error::InvalidArgument(format!(
            "vertex {v} unreachable from the set"
        )))
    }

    /// Edge distance `d'({u, v}, S) = d(u, S) + d(v, S)`.
    pub fn edge_distance_to_set(&self, e: (usize, usize), set: &[usize]) -> Result<usize> {
        if !self.has_edge(e.0, e.1) {
            return Err(Error::InvalidArgument(format!(
                "({}, {}) is not an edge",
                e.0, e.1
            )));
        }
        Ok(self.distance_to_set(e.0, set)? + self.distance_to_set(e.1, set)?)
    }
}

/// Output of [`Graph::block_profile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockProfile {
    /// `b(v)` indexed by vertex.
    pub per_vertex: Vec<usize>,
    /// `B(G) = max_v b(v)`.
    pub max: usize,
    /// Vertices with `b(v) = 0`.
    pub block_leaves: Vec<usize>,
    /// Vertices attaining the maximum.
    pub max_set: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_validates() {
        assert!(Graph::new(3, [(0, 1), (1, 2)]).is_ok());
        assert!(Graph::new(2, [(0, 2)]).is_err());
        assert!(Graph::new(2, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn edges_are_normalized() {
        let g = Graph::new(4, [(3, 1), (2, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 3)]);
        assert!(g.has_edge(1, 3) && g.has_edge(3, 1));
    }

    #[test]
    fn components_of_empty_graph() {
        assert_eq!(Graph::empty(0).component_count(), 0);
        assert!(!Graph::empty(0).is_connected());
        assert!(Graph::single_vertex().is_connected());
    }

    #[test]
    fn component_split() {
        let g = Graph::disjoint_union(&[Graph::cycle(3), Graph::path(1), Graph::single_vertex()]);
        let comps = g.connected_components();
        assert_eq!(comps.len(), 3);
        let mut orders: Vec<usize> = comps.iter().map(|c| c.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 3]);
    }

    #[test]
    fn block_profile_of_a_path() {
        // P3: endpoints are block-leaves, interior vertices are cut.
        let p = Graph::path(3).block_profile().unwrap();
        assert_eq!(p.per_vertex, vec![0, 1, 1, 0]);
        assert_eq!(p.max, 1);
        assert_eq!(p.block_leaves, vec![0, 3]);
        assert_eq!(p.max_set, vec![1, 2]);
    }

    #[test]
    fn block_profile_of_a_star() {
        let p = Graph::star(3).block_profile().unwrap();
        assert_eq!(p.per_vertex, vec![2, 0, 0, 0]);
        assert_eq!(p.max, 2);
        assert_eq!(p.block_leaves, vec![1, 2, 3]);
        assert_eq!(p.max_set, vec![0]);
    }

    #[test]
    fn every_two_vertex_graph_has_two_block_leaves() {
        // Spot checks of a fact used by the constructions: connected
        // graphs on >= 2 vertices have at least two block-leaves.
        for g in [Graph::path(4), Graph::cycle(5), Graph::star(4), Graph::complete(4)] {
            assert!(g.block_profile().unwrap().block_leaves.len() >= 2);
        }
    }

    #[test]
    fn single_vertex_block_profile_is_flat() {
        let p = Graph::single_vertex().block_profile().unwrap();
        assert_eq!(p.per_vertex, vec![0]);
        assert_eq!(p.max, 0);
    }

    #[test]
    fn two_connectivity() {
        assert!(Graph::cycle(4).is_two_connected());
        assert!(Graph::complete(3).is_two_connected());
        assert!(!Graph::path(3).is_two_connected());
        assert!(!Graph::path(1).is_two_connected());
        assert!(!Graph::single_vertex().is_two_connected());
    }

    #[test]
    fn distances() {
        let g = Graph::path(4);
        assert_eq!(g.distance_to_set(4, &[0]).unwrap(), 4);
        assert_eq!(g.distance_to_set(2, &[0, 4]).unwrap(), 2);
        assert_eq!(g.edge_distance_to_set((2, 3), &[0]).unwrap(), 5);
        assert!(g.distance_to_set(0, &[]).is_err());
        let split = Graph::disjoint_union(&[Graph::path(1), Graph::path(1)]);
        assert!(split.distance_to_set(3, &[0]).is_err());
    }
}
