//! Canonical forms for small graphs.
//!
//! The canonical form of a graph is the labelling that maximizes the
//! adjacency bit string read column by column over the upper triangle,
//! restricted to labellings compatible with a vertex invariant (degree,
//! then sorted neighbor degrees). The search is exhaustive with prefix
//! pruning and twin elimination, which is entirely adequate at the
//! orders this crate works with; [`MAX_CANONICAL_ORDER`] keeps it honest.

use crate::graph::Graph;

/// Largest order accepted by [`canonical_key`].
pub const MAX_CANONICAL_ORDER: usize = 12;

/// A total, bit-exact encoding of an unlabelled graph. Two graphs are
/// isomorphic exactly when their keys are equal, and `Ord` gives the
/// fixed ordering used whenever records or components are listed
/// "canonically".
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    order: usize,
    bits: Vec<u64>,
}

impl CanonicalKey {
    pub fn order(&self) -> usize {
        self.order
    }

    /// The packed adjacency bits, for callers building sort keys.
    pub fn into_bits(self) -> Vec<u64> {
        self.bits
    }

    /// Reconstructs the canonical representative.
    pub fn to_graph(&self) -> Graph {
        let mut edges = Vec::new();
        let mut idx = 0;
        for j in 1..self.order {
            for i in 0..j {
                if self.bits[idx / 64] >> (idx % 64) & 1 == 1 {
                    edges.push((i, j));
                }
                idx += 1;
            }
        }
        Graph::new(self.order, edges).unwrap()
    }
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    // required invariant class per position, non-increasing
    required: Vec<usize>,
    class_of: Vec<usize>,
    twin_class: Vec<usize>,
    assigned: Vec<usize>,
    columns: Vec<u64>,
    best: Option<(Vec<u64>, Vec<usize>)>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph) -> Search<'a> {
        let n = g.order();
        // Invariant: (degree, sorted neighbor degrees), ranked descending.
        let mut invariants: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
                nd.sort_unstable_by(|a, b| b.cmp(a));
                (g.degree(v), nd)
            })
            .collect();
        let mut distinct = invariants.clone();
        distinct.sort_unstable_by(|a, b| b.cmp(a));
        distinct.dedup();
        let class_of: Vec<usize> = (0..n)
            .map(|v| distinct.binary_search_by(|probe| invariants[v].cmp(probe)).unwrap())
            .collect();
        invariants.sort_unstable_by(|a, b| b.cmp(a));
        let required: Vec<usize> = invariants
            .iter()
            .map(|inv| distinct.binary_search_by(|probe| inv.cmp(probe)).unwrap())
            .collect();

        // Twins (vertices whose neighborhoods agree away from the pair)
        // are interchangeable everywhere, so only one representative per
        // class needs trying at any depth.
        let mut twin_class: Vec<usize> = (0..n).collect();
        for u in 0..n {
            for v in u + 1..n {
                if twin_class[v] != v {
                    continue;
                }
                let nu: Vec<usize> =
                    g.neighbors(u).iter().copied().filter(|&w| w != v).collect();
                let nv: Vec<usize> =
                    g.neighbors(v).iter().copied().filter(|&w| w != u).collect();
                if nu == nv {
                    twin_class[v] = twin_class[u];
                }
            }
        }

        Search {
            g,
            n,
            required,
            class_of,
            twin_class,
            assigned: Vec::with_capacity(n),
            columns: Vec::with_capacity(n),
            best: None,
        }
    }

    fn run(mut self) -> (Vec<u64>, Vec<usize>) {
        self.dfs();
        self.best.unwrap()
    }

    fn dfs(&mut self) {
        let depth = self.assigned.len();
        if let Some((best_cols, _)) = &self.best {
            match self.columns.as_slice().cmp(&best_cols[..depth]) {
                std::cmp::Ordering::Less => return,
                std::cmp::Ordering::Equal | std::cmp::Ordering::Greater => {}
            }
        }
        if depth == self.n {
            let better = match &self.best {
                None => true,
                Some((best_cols, _)) => self.columns > *best_cols,
            };
            if better {
                self.best = Some((self.columns.clone(), self.assigned.clone()));
            }
            return;
        }

        let mut candidates: Vec<(u64, usize)> = Vec::new();
        let mut seen_twins: Vec<(usize, u64)> = Vec::new();
        for v in 0..self.n {
            if self.class_of[v] != self.required[depth] || self.assigned.contains(&v) {
                continue;
            }
            let mut col = 0u64;
            for (i, &u) in self.assigned.iter().enumerate() {
                if self.g.has_edge(u, v) {
                    col |= 1 << i;
                }
            }
            let twin = self.twin_class[v];
            if seen_twins.contains(&(twin, col)) {
                continue;
            }
            seen_twins.push((twin, col));
            candidates.push((col, v));
        }
        candidates.sort_unstable_by(|a, b| b.cmp(a));

        for (col, v) in candidates {
            if let Some((best_cols, _)) = &self.best {
                if self.columns.as_slice() == &best_cols[..depth] && col < best_cols[depth] {
                    break;
                }
            }
            self.assigned.push(v);
            self.columns.push(col);
            self.dfs();
            self.assigned.pop();
            self.columns.pop();
        }
    }
}

fn search(g: &Graph) -> (CanonicalKey, Vec<usize>) {
    let n = g.order();
    assert!(
        n <= MAX_CANONICAL_ORDER,
        "canonical form guarded to order {MAX_CANONICAL_ORDER}, got {n}"
    );
    if n == 0 {
        return (CanonicalKey { order: 0, bits: Vec::new() }, Vec::new());
    }
    let (columns, assignment) = Search::new(g).run();
    let total_bits = n * (n - 1) / 2;
    let mut bits = vec![0u64; total_bits.div_ceil(64)];
    let mut idx = 0;
    for (j, col) in columns.iter().enumerate() {
        for i in 0..j {
            if col >> i & 1 == 1 {
                bits[idx / 64] |= 1 << (idx % 64);
            }
            idx += 1;
        }
    }
    // assignment[position] = original vertex; invert to a relabelling.
    let mut labels = vec![0usize; n];
    for (pos, &v) in assignment.iter().enumerate() {
        labels[v] = pos;
    }
    (CanonicalKey { order: n, bits }, labels)
}

/// Canonical key of `g`. Panics above [`MAX_CANONICAL_ORDER`]; inputs
/// that large signal a misuse of the small-graph machinery.
pub fn canonical_key(g: &Graph) -> CanonicalKey {
    search(g).0
}

/// Canonical position of every vertex, `labels[v] = position`. Used for
/// deterministic tie-breaking among otherwise arbitrary vertex choices.
pub fn canonical_labels(g: &Graph) -> Vec<usize> {
    search(g).1
}

/// Isomorphism through canonical keys, with cheap invariant cutoffs.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order()
        && a.size() == b.size()
        && a.degree_sequence() == b.degree_sequence()
        && canonical_key(a) == canonical_key(b)
}
