//! Constructing uniquely decomposable gluings.
//!
//! Two connected graphs can always be glued so that the result
//! decomposes only one way, except for a handful of degenerate pairs.
//! The construction splits on the block-degree profile of the inputs:
//! roughly, attach the more loosely connected graph at a spot that is
//! far from everything that could absorb a second copy. Every
//! certificate returned here is verified against the decomposition
//! definition rather than trusted from the case analysis.
//!
//! For longer component lists, pairwise-incomparable components chain
//! end to end into a tree-like gluing.

use num::rational::Ratio;

use crate::canon::{canonical_key, isomorphic};
use crate::count::is_subgraph_of;
use crate::error::{Error, Result};
use crate::gluing::{count_decompositions, structure_graph};
use crate::graph::Graph;

/// Which branch of the construction produced a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompositionCase {
    A,
    B,
    C,
    D,
    E,
    Chain,
}

impl std::fmt::Display for CompositionCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CompositionCase::A => write!(f, "A"),
            CompositionCase::B => write!(f, "B"),
            CompositionCase::C => write!(f, "C"),
            CompositionCase::D => write!(f, "D"),
            CompositionCase::E => write!(f, "E"),
            CompositionCase::Chain => write!(f, "CHAIN"),
        }
    }
}

/// Where two graphs were attached: vertices or edge endpoints, in the
/// labelling of the *inputs* as handed to the primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlueSites {
    Vertices { v1: usize, v2: usize },
    Edges { e1: (usize, usize), e2: (usize, usize), crossed: bool },
    ChainJoints(Vec<usize>),
}

/// A constructed gluing together with the evidence that it decomposes
/// uniquely.
#[derive(Clone, Debug)]
pub struct CompositionCertificate {
    pub result: Graph,
    pub case_used: CompositionCase,
    pub glue_sites: GlueSites,
    /// True when the inputs were exchanged by the normalization.
    pub swapped: bool,
    pub s_value: u64,
    pub uniqueness_verified: bool,
}

/// Identifies `v1 ∈ G1` with `v2 ∈ G2`. The result keeps `G1`'s
/// labels, the shared vertex sits at `v1`, and `G2`'s remaining
/// vertices follow in order.
pub fn glue_at_vertices(g1: &Graph, v1: usize, g2: &Graph, v2: usize) -> Result<Graph> {
    if v1 >= g1.order() || v2 >= g2.order() {
        return Err(Error::InvalidArgument(format!(
            "glue vertex out of range: {v1} in order {}, {v2} in order {}",
            g1.order(),
            g2.order()
        )));
    }
    let order = g1.order() + g2.order() - 1;
    // Map of G2's vertices into the result.
    let mut offset = g1.order();
    let map2: Vec<usize> = (0..g2.order())
        .map(|v| {
            if v == v2 {
                v1
            } else {
                offset += 1;
                offset - 1
            }
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = g1.edges().to_vec();
    edges.extend(g2.edges().iter().map(|&(u, v)| (map2[u], map2[v])));
    Graph::new(order, edges)
}

/// Identifies edge `e1 ∈ G1` with edge `e2 ∈ G2` endpoint by endpoint.
/// `crossed` swaps which endpoints are matched.
pub fn glue_at_edges(
    g1: &Graph,
    e1: (usize, usize),
    g2: &Graph,
    e2: (usize, usize),
    crossed: bool,
) -> Result<Graph> {
    let e1 = (e1.0.min(e1.1), e1.0.max(e1.1));
    let e2 = (e2.0.min(e2.1), e2.0.max(e2.1));
    if !g1.has_edge(e1.0, e1.1) {
        return Err(Error::InvalidArgument(format!("{e1:?} is not an edge of G1")));
    }
    if !g2.has_edge(e2.0, e2.1) {
        return Err(Error::InvalidArgument(format!("{e2:?} is not an edge of G2")));
    }
    let (a2, b2) = if crossed { (e2.1, e2.0) } else { (e2.0, e2.1) };
    let order = g1.order() + g2.order() - 2;
    let mut offset = g1.order();
    let map2: Vec<usize> = (0..g2.order())
        .map(|v| {
            if v == a2 {
                e1.0
            } else if v == b2 {
                e1.1
            } else {
                offset += 1;
                offset - 1
            }
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = g1.edges().to_vec();
    edges.extend(g2.edges().iter().map(|&(u, v)| {
        let (x, y) = (map2[u], map2[v]);
        (x.min(y), x.max(y))
    }));
    edges.sort_unstable();
    edges.dedup();
    Graph::new(order, edges)
}

fn is_path_graph(g: &Graph) -> bool {
    isomorphic(g, &Graph::path(g.order().saturating_sub(1)))
}

/// Deterministic candidate order: vertices are tried by their position
/// in the canonical labelling, so isomorphic inputs pick isomorphic
/// sites.
fn canonical_rank(g: &Graph) -> Vec<usize> {
    let labels = crate::canon::canonical_labels(g);
    let mut order: Vec<usize> = (0..g.order()).collect();
    order.sort_by_key(|&v| labels[v]);
    order
}

/// Keeps the first occurrence of each vertex in a candidate list.
fn dedup_keep_first(candidates: &mut Vec<usize>, order: usize) {
    let mut seen = vec![false; order];
    candidates.retain(|&v| !std::mem::replace(&mut seen[v], true));
}

/// Builds a uniquely decomposable gluing of two connected graphs.
///
/// The pair is normalized so that the second graph has the larger
/// maximum block degree (ties broken towards the larger order, then
/// canonically), the case analysis picks attachment sites, and the
/// certificate is accepted only after `s = 1` is re-verified from the
/// definition. Single vertices, isomorphic pairs, and the pairs
/// {K2, P2} and {K2, P3} admit no such gluing and are rejected.
pub fn compose_pair(g1: &Graph, g2: &Graph) -> Result<CompositionCertificate> {
    for g in [g1, g2] {
        if !g.is_connected() {
            return Err(Error::Disconnected { role: "composition input" });
        }
        if g.order() < 2 {
            return Err(Error::Unsupported(
                "single-vertex components admit no uniquely decomposable gluing".into(),
            ));
        }
    }
    if isomorphic(g1, g2) {
        return Err(Error::DuplicateComponents);
    }
    let excluded = [
        (Graph::path(1), Graph::path(2)),
        (Graph::path(1), Graph::path(3)),
    ];
    for (a, b) in &excluded {
        if (isomorphic(g1, a) && isomorphic(g2, b)) || (isomorphic(g1, b) && isomorphic(g2, a)) {
            return Err(Error::Unsupported(format!(
                "the pair {{P{}, P{}}} has no uniquely decomposable gluing",
                a.size(),
                b.size()
            )));
        }
    }

    // Normalize: B(G2) ≥ B(G1); on equal block degree the larger graph
    // is second; the final tie falls back to canonical order.
    let p1 = g1.block_profile()?;
    let p2 = g2.block_profile()?;
    let swapped = match p2.max.cmp(&p1.max) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => match g2.order().cmp(&g1.order()) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => canonical_key(g2) < canonical_key(g1),
        },
    };
    let (first, second) = if swapped { (g2, g1) } else { (g1, g2) };
    let (prof1, prof2) = if swapped { (p2, p1) } else { (p1, p2) };

    let mut certificate = dispatch(first, second, &prof1, &prof2)?;
    certificate.swapped = swapped;
    Ok(certificate)
}

fn dispatch(
    g1: &Graph,
    g2: &Graph,
    prof1: &crate::graph::BlockProfile,
    prof2: &crate::graph::BlockProfile,
) -> Result<CompositionCertificate> {
    let b1 = prof1.max;
    let b2 = prof2.max;
    let g1_is_edge = g1.order() == 2;

    if g1_is_edge && is_path_graph(g2) && g2.size() > 3 {
        return case_e(g1, g2);
    }
    if g1_is_edge && b2 == 1 && g2.max_degree() > 2 {
        return case_d(g1, g2, prof2);
    }
    if b2 == 1 && b1 == 0 && !g1_is_edge {
        return case_c(g1, g2, prof2);
    }
    if b2 == b1 {
        return case_b(g1, g2, prof1, prof2);
    }
    if b2 > b1 && b2 > 1 {
        return case_a(g1, g2, prof1, prof2);
    }
    // Unreachable given the preconditions: B2 > B1 with B2 = 1 forces
    // G1 block-degree 0, and the earlier arms cover every such shape.
    Err(Error::Unsupported(format!(
        "no construction case applies (B1={b1}, B2={b2})"
    )))
}

/// Verifies a candidate and assembles the certificate; `None` when the
/// candidate is not uniquely decomposable.
fn certify(
    g1: &Graph,
    g2: &Graph,
    candidate: Graph,
    case_used: CompositionCase,
    glue_sites: GlueSites,
) -> Result<Option<CompositionCertificate>> {
    if isomorphic(&candidate, g1) || isomorphic(&candidate, g2) {
        return Ok(None);
    }
    let s = count_decompositions(&candidate, &[g1.clone(), g2.clone()])?;
    if s != 1 {
        return Ok(None);
    }
    Ok(Some(CompositionCertificate {
        result: candidate,
        case_used,
        glue_sites,
        swapped: false,
        s_value: s,
        uniqueness_verified: true,
    }))
}

/// Tries vertex gluings `(v1, v2)` in the given candidate order until
/// one verifies.
fn first_verified_vertex_gluing(
    g1: &Graph,
    g2: &Graph,
    candidates1: &[usize],
    candidates2: &[usize],
    case_used: CompositionCase,
) -> Result<CompositionCertificate> {
    for &v2 in candidates2 {
        for &v1 in candidates1 {
            let candidate = glue_at_vertices(g1, v1, g2, v2)?;
            if let Some(cert) = certify(
                g1,
                g2,
                candidate,
                case_used,
                GlueSites::Vertices { v1, v2 },
            )? {
                return Ok(cert);
            }
        }
    }
    Err(Error::Inconsistent(format!(
        "case {case_used} exhausted its candidates without a unique gluing"
    )))
}

/// B2 > B1, B2 > 1: attach a block-leaf of G2 that lies as far as
/// possible from the max-block-degree set to any block-leaf of G1.
fn case_a(
    g1: &Graph,
    g2: &Graph,
    prof1: &crate::graph::BlockProfile,
    prof2: &crate::graph::BlockProfile,
) -> Result<CompositionCertificate> {
    let rank2 = canonical_rank(g2);
    let position2: Vec<usize> = {
        let mut pos = vec![0; g2.order()];
        for (i, &v) in rank2.iter().enumerate() {
            pos[v] = i;
        }
        pos
    };
    let mut leaves2 = prof2.block_leaves.clone();
    leaves2.sort_by_key(|&v| {
        (
            std::cmp::Reverse(g2.distance_to_set(v, &prof2.max_set).unwrap_or(0)),
            position2[v],
        )
    });
    leaves2.extend(rank2.iter().copied());
    dedup_keep_first(&mut leaves2, g2.order());
    let mut leaves1: Vec<usize> = canonical_rank(g1)
        .into_iter()
        .filter(|v| prof1.block_leaves.contains(v))
        .collect();
    leaves1.extend(canonical_rank(g1));
    dedup_keep_first(&mut leaves1, g1.order());
    first_verified_vertex_gluing(g1, g2, &leaves1, &leaves2, CompositionCase::A)
}

/// B2 = B1: attach a block-leaf of G2 to a vertex of G1 attaining the
/// maximum block degree.
fn case_b(
    g1: &Graph,
    g2: &Graph,
    prof1: &crate::graph::BlockProfile,
    prof2: &crate::graph::BlockProfile,
) -> Result<CompositionCertificate> {
    let rank2 = canonical_rank(g2);
    let mut leaves2: Vec<usize> = rank2
        .iter()
        .copied()
        .filter(|v| prof2.block_leaves.contains(v))
        .collect();
    leaves2.extend(rank2);
    dedup_keep_first(&mut leaves2, g2.order());
    let rank1 = canonical_rank(g1);
    let mut targets1: Vec<usize> = rank1
        .iter()
        .copied()
        .filter(|v| prof1.max_set.contains(v))
        .collect();
    targets1.extend(rank1);
    dedup_keep_first(&mut targets1, g1.order());
    first_verified_vertex_gluing(g1, g2, &targets1, &leaves2, CompositionCase::B)
}

/// B2 = 1, G1 two-connected: identify an edge of G1 with an edge of G2
/// at maximum edge-distance from the max-block-degree set, trying both
/// orientations, then the remaining edges in decreasing distance. If no
/// edge gluing verifies — a two-edge path, say, always leaves a pendant
/// edge that pairs with every edge at the shared endpoint — fall back
/// to verified vertex gluings, farthest from that set first.
fn case_c(
    g1: &Graph,
    g2: &Graph,
    prof2: &crate::graph::BlockProfile,
) -> Result<CompositionCertificate> {
    let mut edges2: Vec<(usize, usize)> = g2.edges().to_vec();
    edges2.sort_by_key(|&e| {
        std::cmp::Reverse(g2.edge_distance_to_set(e, &prof2.max_set).unwrap_or(0))
    });
    let edges1: Vec<(usize, usize)> = g1.edges().to_vec();
    for &e2 in &edges2 {
        for &e1 in &edges1 {
            for crossed in [false, true] {
                let candidate = glue_at_edges(g1, e1, g2, e2, crossed)?;
                if let Some(cert) = certify(
                    g1,
                    g2,
                    candidate,
                    CompositionCase::C,
                    GlueSites::Edges { e1, e2, crossed },
                )? {
                    return Ok(cert);
                }
            }
        }
    }
    let rank2 = canonical_rank(g2);
    let position2: Vec<usize> = {
        let mut pos = vec![0; g2.order()];
        for (i, &v) in rank2.iter().enumerate() {
            pos[v] = i;
        }
        pos
    };
    let mut verts2: Vec<usize> = (0..g2.order()).collect();
    verts2.sort_by_key(|&v| {
        (
            std::cmp::Reverse(g2.distance_to_set(v, &prof2.max_set).unwrap_or(0)),
            position2[v],
        )
    });
    first_verified_vertex_gluing(g1, g2, &canonical_rank(g1), &verts2, CompositionCase::C)
}

/// B2 = 1, G2 has max degree > 2, G1 = K2: attach to a leaf furthest
/// from the max-degree vertices when G2 has leaves, otherwise anywhere.
fn case_d(
    g1: &Graph,
    g2: &Graph,
    _prof2: &crate::graph::BlockProfile,
) -> Result<CompositionCertificate> {
    let max_degree = g2.max_degree();
    let hubs: Vec<usize> = (0..g2.order()).filter(|&v| g2.degree(v) == max_degree).collect();
    let leaves: Vec<usize> = (0..g2.order()).filter(|&v| g2.degree(v) == 1).collect();
    let rank2 = canonical_rank(g2);
    let position2: Vec<usize> = {
        let mut pos = vec![0; g2.order()];
        for (i, &v) in rank2.iter().enumerate() {
            pos[v] = i;
        }
        pos
    };
    let mut candidates2 = leaves;
    candidates2.sort_by_key(|&v| {
        (
            std::cmp::Reverse(g2.distance_to_set(v, &hubs).unwrap_or(0)),
            position2[v],
        )
    });
    candidates2.extend(rank2);
    dedup_keep_first(&mut candidates2, g2.order());
    first_verified_vertex_gluing(g1, g2, &[0, 1], &candidates2, CompositionCase::D)
}

/// G2 a path on more than three edges, G1 = K2: attach a pendant edge
/// to the third vertex along the path.
fn case_e(g1: &Graph, g2: &Graph) -> Result<CompositionCertificate> {
    // Endpoints of the path have degree one; the candidate vertices at
    // distance 2 from either endpoint come first.
    let ends: Vec<usize> = (0..g2.order()).filter(|&v| g2.degree(v) == 1).collect();
    let mut thirds: Vec<usize> = (0..g2.order())
        .filter(|&v| ends.iter().any(|&e| g2.distance_to_set(v, &[e]).unwrap_or(0) == 2))
        .collect();
    thirds.extend(canonical_rank(g2));
    dedup_keep_first(&mut thirds, g2.order());
    first_verified_vertex_gluing(g1, g2, &[0, 1], &thirds, CompositionCase::E)
}

/// Chains pairwise-incomparable components into one tree-like gluing:
/// each component is attached at a fresh vertex of the previous one,
/// so the copies meet in cut vertices along a path.
pub fn compose_chain(components: &[Graph]) -> Result<CompositionCertificate> {
    if components.len() < 2 {
        return Err(Error::InvalidArgument(
            "chain composition needs at least two components".into(),
        ));
    }
    for g in components {
        if !g.is_connected() {
            return Err(Error::Disconnected { role: "composition input" });
        }
        if g.order() < 2 {
            return Err(Error::Unsupported(
                "single-vertex components admit no uniquely decomposable gluing".into(),
            ));
        }
    }
    for i in 0..components.len() {
        for j in 0..components.len() {
            if i != j && is_subgraph_of(&components[i], &components[j]) {
                return Err(Error::Unsupported(format!(
                    "component {i} embeds into component {j}; chain requires incomparable components"
                )));
            }
        }
    }

    // Glue v_i (the running graph's last-added vertex bundle) to
    // u_{i+1} = vertex 0 of the next component. Vertex `order-1` of the
    // running graph is always a vertex of the newest component only.
    let mut result = components[0].clone();
    let mut joints = Vec::new();
    for comp in &components[1..] {
        let attach = result.order() - 1;
        joints.push(attach);
        result = glue_at_vertices(&result, attach, comp, 0)?;
    }

    let s = count_decompositions(&result, components)?;
    if s != 1 {
        return Err(Error::Inconsistent(format!(
            "chain gluing unexpectedly has {s} decompositions"
        )));
    }
    let sg = structure_graph(&result, components)?;
    let path_edges: Vec<(usize, usize)> = (0..components.len() - 1).map(|i| (i, i + 1)).collect();
    if sg.as_graph().edges() != path_edges.as_slice() {
        return Err(Error::Inconsistent(
            "chain gluing does not have path structure".into(),
        ));
    }

    Ok(CompositionCertificate {
        result,
        case_used: CompositionCase::Chain,
        glue_sites: GlueSites::ChainJoints(joints),
        swapped: false,
        s_value: s,
        uniqueness_verified: true,
    })
}

/// The limiting residue distribution of the copy count of `G1 ⊔ G2`
/// modulo `q` in large random hosts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionSpec {
    q: u64,
    mass: Vec<Ratio<i64>>,
}

impl DistributionSpec {
    /// Uniform over residues `0..q`.
    pub fn uniform(q: u64) -> Result<DistributionSpec> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("modulus {q} < 2")));
        }
        let mass = vec![Ratio::new(1, q as i64); q as usize];
        Ok(DistributionSpec { q, mass })
    }

    /// An arbitrary exact mass vector; must sum to one.
    pub fn from_mass(q: u64, mass: Vec<Ratio<i64>>) -> Result<DistributionSpec> {
        if q < 2 || mass.len() != q as usize {
            return Err(Error::InvalidArgument(format!(
                "mass vector length {} does not match modulus {q}",
                mass.len()
            )));
        }
        if mass.iter().any(|m| *m < Ratio::new(0, 1)) {
            return Err(Error::InvalidArgument("negative mass".into()));
        }
        let total: Ratio<i64> = mass.iter().sum();
        if total != Ratio::new(1, 1) {
            return Err(Error::InvalidArgument(format!("masses sum to {total}, not 1")));
        }
        Ok(DistributionSpec { q, mass })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Exact probability of residue `r`.
    pub fn mass(&self, r: usize) -> Ratio<i64> {
        self.mass[r]
    }

    pub fn masses(&self) -> &[Ratio<i64>] {
        &self.mass
    }

    /// Residues with positive predicted probability.
    pub fn support(&self) -> Vec<usize> {
        (0..self.mass.len()).filter(|&r| self.mass[r] > Ratio::new(0, 1)).collect()
    }
}

/// Predicts the mod-`q` distribution of `N(G1 ⊔ G2)` in `G(n, p)` for
/// fixed `p` and large `n`.
///
/// Generic pairs and {K2, P2} are uniform; {K2, P3} skews towards even
/// residues when `q` is even; a single-vertex component concentrates
/// the count on multiples of `gcd(q, n − |V(G2)|)`.
pub fn classify_pair_distribution(
    g1: &Graph,
    g2: &Graph,
    q: u64,
    n: usize,
) -> Result<DistributionSpec> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("modulus {q} < 2")));
    }
    for g in [g1, g2] {
        if !g.is_connected() {
            return Err(Error::Disconnected { role: "classified component" });
        }
    }
    if isomorphic(g1, g2) {
        return Err(Error::DuplicateComponents);
    }
    // Normalize the single-vertex component to the front.
    let (a, b) = if g2.order() == 1 { (g2, g1) } else { (g1, g2) };
    if a.order() == 1 {
        if n < b.order() {
            return Err(Error::InvalidArgument(format!(
                "host order {n} smaller than the {}-vertex component",
                b.order()
            )));
        }
        let l = num::integer::gcd(q, (n - b.order()) as u64);
        let mass = (0..q)
            .map(|r| {
                if r % l == 0 {
                    Ratio::new(l as i64, q as i64)
                } else {
                    Ratio::new(0, 1)
                }
            })
            .collect();
        return DistributionSpec::from_mass(q, mass);
    }
    let is_pair = |x: &Graph, y: &Graph, ex: usize, ey: usize| {
        (isomorphic(x, &Graph::path(ex)) && isomorphic(y, &Graph::path(ey)))
            || (isomorphic(x, &Graph::path(ey)) && isomorphic(y, &Graph::path(ex)))
    };
    if is_pair(a, b, 1, 3) {
        if q % 2 == 0 {
            let mass = (0..q)
                .map(|r| {
                    if r % 2 == 0 {
                        Ratio::new(3, 2 * q as i64)
                    } else {
                        Ratio::new(1, 2 * q as i64)
                    }
                })
                .collect();
            return DistributionSpec::from_mass(q, mass);
        }
        return DistributionSpec::uniform(q);
    }
    // {P1, P2} and every pair meeting the construction hypotheses.
    DistributionSpec::uniform(q)
}
