//! Exact embedding and copy counts.
//!
//! An embedding is an injective, edge-preserving map from pattern to
//! host; a copy is a subgraph of the host isomorphic to the pattern.
//! Embeddings of a fixed copy form one orbit of the pattern's
//! automorphism group acting freely by precomposition, so
//! `copies = embeddings / |Aut|` with exact division. Disconnected
//! patterns embed component by component under one global injectivity
//! constraint, which is the default (and fastest) evaluation route for
//! disjoint patterns everywhere in this crate.

use crate::graph::Graph;

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD).max(1)
}

/// Assignment order for pattern vertices: components largest first,
/// each traversed breadth-first from a vertex of maximum degree so that
/// every vertex after the first in its component has a mapped neighbor.
fn assignment_order(pattern: &Graph) -> Vec<usize> {
    let n = pattern.order();
    let mut comp_lists: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            for &w in pattern.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp_lists.push(comp);
    }
    for comp in &mut comp_lists {
        let &root = comp
            .iter()
            .max_by_key(|&&v| pattern.degree(v))
            .unwrap();
        let mut order = vec![root];
        let mut in_order = vec![false; n];
        in_order[root] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            let mut next: Vec<usize> = pattern
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| !in_order[w])
                .collect();
            next.sort_unstable_by_key(|&w| std::cmp::Reverse(pattern.degree(w)));
            for w in next {
                in_order[w] = true;
                order.push(w);
            }
            i += 1;
        }
        *comp = order;
    }
    comp_lists.sort_by_key(|c| std::cmp::Reverse(c.len()));
    comp_lists.concat()
}

struct Matcher {
    words: usize,
    host_adj: Vec<u64>,      // row-major, host.order() rows
    eligible: Vec<u64>,      // per pattern position, degree-feasible hosts
    earlier: Vec<Vec<usize>>, // earlier-neighbor positions per position
    order: Vec<usize>,       // pattern vertex at each position
    map: Vec<usize>,
    used: Vec<u64>,
    scratch: Vec<u64>,       // per-depth candidate buffers, row-major
    depth_count: usize,
}

impl Matcher {
    fn new(pattern: &Graph, host: &Graph) -> Option<Matcher> {
        let np = pattern.order();
        let nh = host.order();
        if np > nh {
            return None;
        }
        let words = words_for(nh);
        let mut host_adj = vec![0u64; nh * words];
        for &(u, v) in host.edges() {
            host_adj[u * words + v / WORD] |= 1 << (v % WORD);
            host_adj[v * words + u / WORD] |= 1 << (u % WORD);
        }
        let order = assignment_order(pattern);
        let mut pos_of = vec![usize::MAX; np];
        for (i, &v) in order.iter().enumerate() {
            pos_of[v] = i;
        }
        let mut earlier = vec![Vec::new(); np];
        let mut eligible = vec![0u64; np * words];
        for (i, &v) in order.iter().enumerate() {
            for &w in pattern.neighbors(v) {
                if pos_of[w] < i {
                    earlier[i].push(pos_of[w]);
                }
            }
            let need = pattern.degree(v);
            for h in 0..nh {
                if host.degree(h) >= need {
                    eligible[i * words + h / WORD] |= 1 << (h % WORD);
                }
            }
        }
        Some(Matcher {
            words,
            host_adj,
            eligible,
            earlier,
            order,
            map: vec![0; np],
            used: vec![0u64; words],
            scratch: vec![0u64; np * words],
            depth_count: np,
        })
    }

    fn fill_candidates(&mut self, depth: usize) {
        let w = self.words;
        for k in 0..w {
            let mut acc = self.eligible[depth * w + k] & !self.used[k];
            for &e in &self.earlier[depth] {
                acc &= self.host_adj[self.map[e] * w + k];
            }
            self.scratch[depth * w + k] = acc;
        }
    }

    fn count(&mut self, depth: usize) -> u64 {
        self.fill_candidates(depth);
        let w = self.words;
        if depth + 1 == self.depth_count {
            return (0..w)
                .map(|k| u64::from(self.scratch[depth * w + k].count_ones()))
                .sum();
        }
        let mut total = 0;
        for k in 0..w {
            let mut bits = self.scratch[depth * w + k];
            while bits != 0 {
                let v = k * WORD + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                self.map[depth] = v;
                self.used[k] |= 1 << (v % WORD);
                total += self.count(depth + 1);
                self.used[k] &= !(1 << (v % WORD));
            }
        }
        total
    }

    fn enumerate(&mut self, depth: usize, visit: &mut impl FnMut(&[usize], &[usize])) {
        self.fill_candidates(depth);
        let w = self.words;
        let last = depth + 1 == self.depth_count;
        for k in 0..w {
            let mut bits = self.scratch[depth * w + k];
            while bits != 0 {
                let v = k * WORD + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                self.map[depth] = v;
                if last {
                    visit(&self.order, &self.map);
                } else {
                    self.used[k] |= 1 << (v % WORD);
                    self.enumerate(depth + 1, visit);
                    self.used[k] &= !(1 << (v % WORD));
                }
            }
        }
    }

    fn exists(&mut self, depth: usize) -> bool {
        self.fill_candidates(depth);
        let w = self.words;
        if depth + 1 == self.depth_count {
            return (0..w).any(|k| self.scratch[depth * w + k] != 0);
        }
        for k in 0..w {
            let mut bits = self.scratch[depth * w + k];
            while bits != 0 {
                let v = k * WORD + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                self.map[depth] = v;
                self.used[k] |= 1 << (v % WORD);
                let hit = self.exists(depth + 1);
                self.used[k] &= !(1 << (v % WORD));
                if hit {
                    return true;
                }
            }
        }
        false
    }
}

/// Number of injective edge-preserving maps from `pattern` into `host`.
pub fn count_embeddings(pattern: &Graph, host: &Graph) -> u64 {
    if pattern.order() == 0 {
        return 1;
    }
    match Matcher::new(pattern, host) {
        Some(mut m) => m.count(0),
        None => 0,
    }
}

/// Calls `visit(vertex_map)` once per embedding, where
/// `vertex_map[pattern_vertex] = host_vertex`.
pub(crate) fn for_each_embedding(
    pattern: &Graph,
    host: &Graph,
    mut visit: impl FnMut(&[usize]),
) {
    if pattern.order() == 0 {
        visit(&[]);
        return;
    }
    let Some(mut m) = Matcher::new(pattern, host) else {
        return;
    };
    let mut by_vertex = vec![0usize; pattern.order()];
    m.enumerate(0, &mut |order, map| {
        for (pos, &pv) in order.iter().enumerate() {
            by_vertex[pv] = map[pos];
        }
        visit(&by_vertex);
    });
}

/// `|Aut(g)|`, counted as embeddings of `g` into itself.
pub fn automorphism_count(g: &Graph) -> u64 {
    count_embeddings(g, g)
}

/// Number of subgraphs of `host` isomorphic to `pattern` (unlabelled
/// copies). Connected and disconnected patterns are both supported.
pub fn count_copies(pattern: &Graph, host: &Graph) -> u64 {
    let emb = count_embeddings(pattern, host);
    let aut = automorphism_count(pattern);
    assert_eq!(
        emb % aut,
        0,
        "embedding count {emb} not divisible by automorphism count {aut}"
    );
    emb / aut
}

/// True when `pattern` is isomorphic to some subgraph of `host`.
pub fn is_subgraph_of(pattern: &Graph, host: &Graph) -> bool {
    if pattern.order() == 0 {
        return true;
    }
    match Matcher::new(pattern, host) {
        Some(mut m) => m.exists(0),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Graph {
        // C4 plus one chord.
        Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap()
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphism_count(&Graph::complete(4)), 24);
        assert_eq!(automorphism_count(&Graph::cycle(5)), 10);
        assert_eq!(automorphism_count(&Graph::path(3)), 2);
        assert_eq!(automorphism_count(&Graph::star(3)), 6);
        assert_eq!(automorphism_count(&Graph::single_vertex()), 1);
        // Swapping the two isomorphic halves doubles the group.
        let two_triangles = Graph::disjoint_union(&[Graph::cycle(3), Graph::cycle(3)]);
        assert_eq!(automorphism_count(&two_triangles), 72);
    }

    #[test]
    fn triangle_counts_in_complete_graphs() {
        assert_eq!(count_copies(&Graph::cycle(3), &Graph::complete(5)), 10);
        assert_eq!(count_copies(&Graph::cycle(3), &Graph::complete(7)), 35);
        assert_eq!(count_copies(&Graph::cycle(4), &Graph::complete(5)), 15);
    }

    #[test]
    fn triangles_in_diamond() {
        assert_eq!(count_copies(&Graph::cycle(3), &diamond()), 2);
        assert_eq!(count_copies(&Graph::cycle(4), &diamond()), 1);
    }

    #[test]
    fn disconnected_pattern_with_isolated_vertex() {
        // K1 + K2 in a triangle: 3 edges, and one of the remaining
        // vertices for the isolated part.
        let pat = Graph::disjoint_union(&[Graph::single_vertex(), Graph::path(1)]);
        assert_eq!(count_copies(&pat, &Graph::cycle(3)), 3);
        // In P2 (3 vertices, 2 edges): edge ab leaves c, edge bc leaves a.
        assert_eq!(count_copies(&pat, &Graph::path(2)), 2);
    }

    #[test]
    fn disjoint_edges_in_a_cycle() {
        // Pairs of disjoint edges in C5: 5 edges, each disjoint from 2.
        let pat = Graph::disjoint_union(&[Graph::path(1), Graph::path(1)]);
        assert_eq!(count_copies(&pat, &Graph::cycle(5)), 5);
    }

    #[test]
    fn empty_and_oversized_patterns() {
        assert_eq!(count_copies(&Graph::empty(0), &Graph::cycle(3)), 1);
        assert_eq!(count_copies(&Graph::complete(4), &Graph::cycle(3)), 0);
        assert_eq!(count_embeddings(&Graph::single_vertex(), &Graph::empty(0)), 0);
    }

    #[test]
    fn subgraph_relation() {
        assert!(is_subgraph_of(&Graph::path(1), &Graph::path(2)));
        assert!(is_subgraph_of(&Graph::path(3), &Graph::cycle(4)));
        assert!(!is_subgraph_of(&Graph::cycle(3), &Graph::cycle(4)));
        assert!(!is_subgraph_of(&Graph::cycle(4), &Graph::cycle(6)));
        assert!(is_subgraph_of(&Graph::single_vertex(), &Graph::cycle(3)));
    }
}
