//! Counting identities for disconnected patterns.
//!
//! The number of copies of `A = G_1 ⊔ .. ⊔ G_k` in a host equals the
//! product of the component counts minus correction terms, one per way
//! the components can collide. Collisions are organised by set
//! partitions of the component indices: each non-singleton block
//! contributes a gluing of its components, weighted by the gluing's
//! decomposition count. Expanding the recursion symbolically yields an
//! integer polynomial in connected-subgraph counts — the
//! [`CoefficientTable`].
//!
//! One wrinkle the blockwise picture glosses over: when two blocks of a
//! partition receive isomorphic gluings, a copy of their disjoint union
//! no longer determines which block produced which part, so the
//! correction term picks up the multiplicity factor `Π m_c!` (`m_c` the
//! repetition counts among the block images). The factor is 1 whenever
//! the images are pairwise non-isomorphic, which is the only situation
//! the blockwise story needs; with it, the recursion matches brute
//! force on every host we can afford to check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num::{BigInt, BigRational, One, Zero};

use crate::canon::{canonical_key, CanonicalKey};
use crate::count::count_copies;
use crate::error::{Error, Result};
use crate::gluing::{count_decompositions, gluings_unchecked, DEFAULT_GLUING_BUDGET};
use crate::graph::Graph;
use crate::partition::enumerate_set_partitions;

/// A multiset of connected graphs, as a sorted key list.
type Monomial = Vec<CanonicalKey>;

/// `N(A)` as an integer polynomial in connected-subgraph counts:
/// `N(A) = Σ c_M · Π_{J∈M} N(J)` over multisets `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    pattern: Vec<CanonicalKey>,
    terms: BTreeMap<Monomial, i64>,
}

impl CoefficientTable {
    /// Canonical keys of the pattern components, sorted.
    pub fn pattern(&self) -> &[CanonicalKey] {
        &self.pattern
    }

    /// All terms with nonzero coefficient, keyed by sorted multiset.
    pub fn terms(&self) -> &BTreeMap<Monomial, i64> {
        &self.terms
    }

    /// Evaluates the polynomial on a host by counting each connected
    /// factor directly.
    pub fn evaluate(&self, host: &Graph) -> Result<u64> {
        let mut factor_counts: HashMap<&CanonicalKey, i128> = HashMap::new();
        let mut total: i128 = 0;
        for (monomial, &c) in &self.terms {
            let mut product = i128::from(c);
            for key in monomial {
                let count = match factor_counts.get(key) {
                    Some(&n) => n,
                    None => {
                        let n = i128::from(count_copies(&key.to_graph(), host));
                        factor_counts.insert(key, n);
                        n
                    }
                };
                product = product.checked_mul(count).ok_or(Error::Inconsistent(
                    "coefficient table evaluation overflowed".into(),
                ))?;
            }
            total = total.checked_add(product).ok_or(Error::Inconsistent(
                "coefficient table evaluation overflowed".into(),
            ))?;
        }
        u64::try_from(total)
            .map_err(|_| Error::Inconsistent(format!("table evaluated to {total}, not a count")))
    }

    /// Coefficient of the singleton multiset `{H}`; zero when absent.
    pub fn connected_coefficient(&self, h: &Graph) -> Result<i64> {
        if !h.is_connected() {
            return Err(Error::Disconnected { role: "coefficient lookup" });
        }
        Ok(self
            .terms
            .get(&vec![canonical_key(h)])
            .copied()
            .unwrap_or(0))
    }
}

/// What the recursion had to step around: sub-patterns with repeated
/// components are counted directly rather than recursed into.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CalculusDiagnostics {
    pub duplicate_subpatterns: BTreeSet<Monomial>,
}

/// Reusable counting session. Gluing enumerations and symbolic
/// expansions are cached across calls, so batches over many hosts pay
/// the enumeration cost once.
pub struct Calculus {
    budget: usize,
    gluings: HashMap<Monomial, Vec<(Graph, u64)>>,
    expansions: HashMap<Monomial, BTreeMap<Monomial, i128>>,
}

impl Default for Calculus {
    fn default() -> Self {
        Self::new()
    }
}

impl Calculus {
    pub fn new() -> Self {
        Self::with_budget(DEFAULT_GLUING_BUDGET)
    }

    pub fn with_budget(budget: usize) -> Self {
        Calculus {
            budget,
            gluings: HashMap::new(),
            expansions: HashMap::new(),
        }
    }

    fn records(&mut self, parts: &[Graph]) -> Result<Vec<(Graph, u64)>> {
        let key = sorted_keys(parts);
        if let Some(hit) = self.gluings.get(&key) {
            return Ok(hit.clone());
        }
        let records = gluings_unchecked(parts, self.budget)?
            .into_iter()
            .map(|r| (r.host, r.s))
            .collect::<Vec<_>>();
        self.gluings.insert(key, records.clone());
        Ok(records)
    }

    /// `N(G1 ⊔ G2)` on `host` via the two-component identity
    /// `N(G1)N(G2) − Σ_H s(H)·N(H)` over all gluings `H`.
    pub fn two_component_count(&mut self, g1: &Graph, g2: &Graph, host: &Graph) -> Result<u64> {
        validate_components(&[g1.clone(), g2.clone()])?;
        let product = i128::from(count_copies(g1, host)) * i128::from(count_copies(g2, host));
        let mut total = product;
        for (h, s) in self.records(&[g1.clone(), g2.clone()])? {
            total -= i128::from(s) * i128::from(count_copies(&h, host));
        }
        u64::try_from(total)
            .map_err(|_| Error::Inconsistent(format!("identity evaluated to {total}")))
    }

    /// `N(⊔ components)` on `host` by the partition recursion.
    pub fn multi_component_count(&mut self, components: &[Graph], host: &Graph) -> Result<u64> {
        Ok(self.multi_component_count_with_diagnostics(components, host)?.0)
    }

    /// As [`Self::multi_component_count`], also reporting which
    /// duplicate sub-patterns were counted directly.
    pub fn multi_component_count_with_diagnostics(
        &mut self,
        components: &[Graph],
        host: &Graph,
    ) -> Result<(u64, CalculusDiagnostics)> {
        validate_components(components)?;
        let mut memo: HashMap<Monomial, i128> = HashMap::new();
        let mut diags = CalculusDiagnostics::default();
        let total = self.numeric(components, host, &mut memo, &mut diags)?;
        let count = u64::try_from(total)
            .map_err(|_| Error::Inconsistent(format!("recursion evaluated to {total}")))?;
        Ok((count, diags))
    }

    fn numeric(
        &mut self,
        parts: &[Graph],
        host: &Graph,
        memo: &mut HashMap<Monomial, i128>,
        diags: &mut CalculusDiagnostics,
    ) -> Result<i128> {
        if parts.len() == 1 {
            return Ok(i128::from(count_copies(&parts[0], host)));
        }
        let key = sorted_keys(parts);
        if let Some(&hit) = memo.get(&key) {
            return Ok(hit);
        }
        let value = if has_duplicates(&key) {
            // The identity is only stated for pairwise non-isomorphic
            // components; repeated sub-patterns fall back to direct
            // counting and are surfaced to the caller.
            diags.duplicate_subpatterns.insert(key.clone());
            i128::from(count_copies(&Graph::disjoint_union(parts), host))
        } else {
            let mut total: i128 = parts
                .iter()
                .map(|g| i128::from(count_copies(g, host)))
                .product();
            let mut corrections: Vec<(i128, Vec<Graph>)> = Vec::new();
            self.for_each_collision_term(parts, &mut |weight, images| {
                corrections.push((weight, images.to_vec()));
                Ok(())
            })?;
            for (s_product, images) in corrections {
                // A copy of the disjoint union with repeated parts can
                // be assigned to the blocks in Π m_c! ways.
                let weight = s_product * multiplicity_factor(&images);
                total -= weight * self.numeric(&images, host, memo, diags)?;
            }
            total
        };
        memo.insert(key, value);
        Ok(value)
    }

    /// Walks the correction terms of the recursion: every non-discrete
    /// partition of the component indices, every assignment of a gluing
    /// to each non-singleton block. `visit` receives `Π s` over the
    /// blocks and the block images.
    fn for_each_collision_term(
        &mut self,
        parts: &[Graph],
        visit: &mut impl FnMut(i128, &[Graph]) -> Result<()>,
    ) -> Result<()> {
        let k = parts.len();
        for partition in enumerate_set_partitions(k)? {
            if partition.is_discrete() {
                continue;
            }
            // Per-block choices: singleton blocks keep their component,
            // larger blocks range over gluings.
            let mut options: Vec<Vec<(Graph, u64)>> = Vec::with_capacity(partition.blocks().len());
            for block in partition.blocks() {
                if block.len() == 1 {
                    options.push(vec![(parts[block[0]].clone(), 1)]);
                } else {
                    let members: Vec<Graph> =
                        block.iter().map(|&i| parts[i].clone()).collect();
                    options.push(self.records(&members)?);
                }
            }
            let mut images: Vec<Graph> = Vec::with_capacity(options.len());
            let mut chosen: Vec<usize> = vec![0; options.len()];
            let mut depth = 0usize;
            // Iterative cartesian product over the per-block choices.
            loop {
                if depth == options.len() {
                    let s_product: i128 = (0..options.len())
                        .map(|b| i128::from(options[b][chosen[b]].1))
                        .product();
                    visit(s_product, &images)?;
                    depth -= 1;
                    images.pop();
                    chosen[depth] += 1;
                    continue;
                }
                if chosen[depth] == options[depth].len() {
                    if depth == 0 {
                        break;
                    }
                    chosen[depth] = 0;
                    depth -= 1;
                    images.pop();
                    chosen[depth] += 1;
                    continue;
                }
                images.push(options[depth][chosen[depth]].0.clone());
                depth += 1;
            }
        }
        Ok(())
    }

    /// The full symbolic expansion of `N(⊔ components)`. Components
    /// must be pairwise non-isomorphic; the expansion of repeated
    /// sub-multisets (where the table would be rational) stays
    /// internal, scaled by `Π m_c!` to keep every intermediate integer.
    pub fn coefficient_table(&mut self, components: &[Graph]) -> Result<CoefficientTable> {
        validate_components(components)?;
        let total: usize = components.iter().map(|g| g.order()).sum();
        if total > self.budget {
            return Err(Error::TooLarge {
                what: "coefficient table vertex budget",
                limit: self.budget,
                actual: total,
            });
        }
        let pattern = sorted_keys(components);
        let scaled = self.scaled_expansion(components)?;
        let mut terms = BTreeMap::new();
        for (monomial, c) in scaled {
            if c == 0 {
                continue;
            }
            let c = i64::try_from(c)
                .map_err(|_| Error::Inconsistent("coefficient exceeds i64".into()))?;
            terms.insert(monomial, c);
        }
        if terms.get(&pattern) != Some(&1) {
            return Err(Error::Inconsistent(
                "pattern multiset must carry coefficient +1".into(),
            ));
        }
        let table = CoefficientTable { pattern, terms };
        self.validate_table(&table, components)?;
        Ok(table)
    }

    /// `(Π m_c!)·N(⊔ parts)` as a polynomial over connected counts.
    /// The scaling makes the recursion closed over integers even when
    /// `parts` repeats a graph; for distinct parts it is `N` itself.
    fn scaled_expansion(&mut self, parts: &[Graph]) -> Result<BTreeMap<Monomial, i128>> {
        let key = sorted_keys(parts);
        if let Some(hit) = self.expansions.get(&key) {
            return Ok(hit.clone());
        }
        let mut terms: BTreeMap<Monomial, i128> = BTreeMap::new();
        terms.insert(key.clone(), 1);
        if parts.len() > 1 {
            let mut contributions: Vec<(i128, Vec<Graph>)> = Vec::new();
            self.for_each_collision_term(parts, &mut |weight, images| {
                contributions.push((weight, images.to_vec()));
                Ok(())
            })?;
            for (s_product, images) in contributions {
                // The numeric weight would be Π s · Π m_c!, but the
                // child expansion is itself scaled by Π m_c!, so only
                // Π s remains here.
                for (monomial, c) in self.scaled_expansion(&images)? {
                    let slot = terms.entry(monomial).or_insert(0);
                    *slot = slot
                        .checked_sub(s_product.checked_mul(c).ok_or_else(overflow)?)
                        .ok_or_else(overflow)?;
                }
            }
        }
        terms.retain(|_, c| *c != 0);
        self.expansions.insert(key, terms.clone());
        Ok(terms)
    }

    /// Spot-checks a freshly built table against direct counting on a
    /// fixed host family. Cheap, and catches any drift between the
    /// symbolic expansion and the definition.
    fn validate_table(&self, table: &CoefficientTable, components: &[Graph]) -> Result<()> {
        let pattern = Graph::disjoint_union(components);
        for host in validation_hosts() {
            let direct = count_copies(&pattern, &host);
            let via_table = table.evaluate(&host)?;
            if direct != via_table {
                return Err(Error::Inconsistent(format!(
                    "table disagrees with direct counting on a {}-vertex host: {} vs {}",
                    host.order(),
                    via_table,
                    direct
                )));
            }
        }
        Ok(())
    }
}

fn overflow() -> Error {
    Error::Inconsistent("coefficient expansion overflowed".into())
}

/// Hosts used by the internal table validation: dense enough to make
/// every fixture-sized pattern show up, small enough to count quickly.
fn validation_hosts() -> Vec<Graph> {
    let circulant = |n: usize, jumps: &[usize]| {
        let mut edges = BTreeSet::new();
        for v in 0..n {
            for &j in jumps {
                let w = (v + j) % n;
                edges.insert((v.min(w), v.max(w)));
            }
        }
        Graph::new(n, edges).unwrap()
    };
    vec![
        Graph::complete(7),
        circulant(13, &[1, 2, 3]),
        circulant(14, &[1, 2, 5]),
    ]
}

fn sorted_keys(parts: &[Graph]) -> Monomial {
    let mut keys: Monomial = parts.iter().map(canonical_key).collect();
    keys.sort();
    keys
}

fn has_duplicates(sorted: &Monomial) -> bool {
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// `Π m_c!` over the isomorphism classes of `images`.
fn multiplicity_factor(images: &[Graph]) -> i128 {
    let mut counts: BTreeMap<CanonicalKey, i128> = BTreeMap::new();
    for g in images {
        *counts.entry(canonical_key(g)).or_insert(0) += 1;
    }
    counts.values().map(|&m| (1..=m).product::<i128>()).product()
}

fn validate_components(components: &[Graph]) -> Result<()> {
    if components.is_empty() {
        return Err(Error::InvalidArgument("empty component list".into()));
    }
    for g in components {
        if !g.is_connected() {
            return Err(Error::Disconnected { role: "component" });
        }
    }
    let keys = sorted_keys(components);
    if has_duplicates(&keys) {
        return Err(Error::DuplicateComponents);
    }
    Ok(())
}

/// One-shot [`Calculus::two_component_count`].
pub fn two_component_count(g1: &Graph, g2: &Graph, host: &Graph) -> Result<u64> {
    Calculus::new().two_component_count(g1, g2, host)
}

/// One-shot [`Calculus::multi_component_count`].
pub fn multi_component_count(components: &[Graph], host: &Graph) -> Result<u64> {
    Calculus::new().multi_component_count(components, host)
}

/// One-shot [`Calculus::coefficient_table`].
pub fn coefficient_table(components: &[Graph]) -> Result<CoefficientTable> {
    Calculus::new().coefficient_table(components)
}

/// Coefficient of the connected graph `h` in the expansion of
/// `N(⊔ components)`.
pub fn connected_coefficient(components: &[Graph], h: &Graph) -> Result<i64> {
    coefficient_table(components)?.connected_coefficient(h)
}

/// Searches the expansion for a connected term `H` whose coefficient is
/// coprime to `q` and which is not a gluing of any proper non-empty
/// subset of the components. Such a term forces the copy count of the
/// pattern to be near-uniform modulo `q` in large random hosts.
pub fn uniformity_witness(components: &[Graph], q: u64) -> Result<Option<CanonicalKey>> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("modulus {q} < 2")));
    }
    let table = coefficient_table(components)?;
    // Proper non-empty index subsets, deduplicated by multiset.
    let k = components.len();
    let mut subsets: BTreeSet<Monomial> = BTreeSet::new();
    let mut subset_graphs: Vec<Vec<Graph>> = Vec::new();
    for mask in 1u32..(1 << k) - 1 {
        let chosen: Vec<Graph> = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| components[i].clone())
            .collect();
        if subsets.insert(sorted_keys(&chosen)) {
            subset_graphs.push(chosen);
        }
    }
    for (monomial, &c) in table.terms() {
        if monomial.len() != 1 || c == 0 {
            continue;
        }
        if num::integer::gcd(c.unsigned_abs(), q) != 1 {
            continue;
        }
        let h = monomial[0].to_graph();
        let mut covered = false;
        for subset in &subset_graphs {
            let needed: usize = subset.iter().map(|g| g.order()).sum();
            if h.order() > needed {
                continue;
            }
            if count_decompositions(&h, subset)? > 0 {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(Some(monomial[0].clone()));
        }
    }
    Ok(None)
}

/// Recovers the coefficient table by linear algebra instead of the
/// recursion: the candidate monomials and the pattern are evaluated on
/// the given hosts and the resulting exact system is solved. Errors if
/// the host family does not pin the coefficients down uniquely or the
/// solution is not integral.
pub fn fit_coefficient_table(components: &[Graph], hosts: &[Graph]) -> Result<CoefficientTable> {
    validate_components(components)?;
    let mut session = Calculus::new();
    // Candidate monomials straight from the partition structure, not
    // from the recursion's output: all block-image multisets.
    let mut monomials: BTreeSet<Monomial> = BTreeSet::new();
    monomials.insert(sorted_keys(components));
    session.for_each_collision_term(components, &mut |_, images| {
        monomials.insert(sorted_keys(images));
        Ok(())
    })?;
    let monomials: Vec<Monomial> = monomials.into_iter().collect();

    let pattern = Graph::disjoint_union(components);
    let mut matrix: Vec<Vec<BigRational>> = Vec::with_capacity(hosts.len());
    let mut rhs: Vec<BigRational> = Vec::with_capacity(hosts.len());
    for host in hosts {
        let mut cache: HashMap<&CanonicalKey, BigInt> = HashMap::new();
        let row = monomials
            .iter()
            .map(|monomial| {
                let mut product = BigInt::one();
                for key in monomial {
                    let n = cache
                        .entry(key)
                        .or_insert_with(|| BigInt::from(count_copies(&key.to_graph(), host)));
                    product *= &*n;
                }
                BigRational::from(product)
            })
            .collect();
        matrix.push(row);
        rhs.push(BigRational::from(BigInt::from(count_copies(&pattern, host))));
    }

    let solution = solve_exact(matrix, rhs, monomials.len())?;
    let mut terms = BTreeMap::new();
    for (monomial, value) in monomials.into_iter().zip(solution) {
        if !value.is_integer() {
            return Err(Error::Inconsistent(format!(
                "fitted coefficient {value} is not an integer"
            )));
        }
        let value = value.to_integer();
        if value.is_zero() {
            continue;
        }
        let c = i64::try_from(value)
            .map_err(|_| Error::Inconsistent("fitted coefficient exceeds i64".into()))?;
        terms.insert(monomial, c);
    }
    Ok(CoefficientTable {
        pattern: sorted_keys(components),
        terms,
    })
}

/// Gaussian elimination over the rationals. Requires the system to
/// have a unique solution (full column rank, consistent).
fn solve_exact(
    mut matrix: Vec<Vec<BigRational>>,
    mut rhs: Vec<BigRational>,
    unknowns: usize,
) -> Result<Vec<BigRational>> {
    let rows = matrix.len();
    if rows < unknowns {
        return Err(Error::InvalidArgument(format!(
            "{rows} hosts cannot determine {unknowns} coefficients"
        )));
    }
    let mut pivot_row = 0usize;
    let mut pivots: Vec<usize> = Vec::with_capacity(unknowns);
    for col in 0..unknowns {
        let Some(best) = (pivot_row..rows).find(|&r| !matrix[r][col].is_zero()) else {
            return Err(Error::Inconsistent(
                "host family leaves a coefficient free; add hosts".into(),
            ));
        };
        matrix.swap(pivot_row, best);
        rhs.swap(pivot_row, best);
        let inv = matrix[pivot_row][col].recip();
        for c in col..unknowns {
            let scaled = &matrix[pivot_row][c] * &inv;
            matrix[pivot_row][c] = scaled;
        }
        let scaled = &rhs[pivot_row] * &inv;
        rhs[pivot_row] = scaled;
        for r in 0..rows {
            if r == pivot_row || matrix[r][col].is_zero() {
                continue;
            }
            let factor = matrix[r][col].clone();
            for c in col..unknowns {
                let delta = &factor * &matrix[pivot_row][c];
                matrix[r][c] -= delta;
            }
            let delta = &factor * &rhs[pivot_row];
            rhs[r] -= delta;
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    // Leftover rows must be consistent with the solution.
    for r in pivot_row..rows {
        if !rhs[r].is_zero() {
            return Err(Error::Inconsistent(
                "host evaluations are inconsistent with the monomial basis".into(),
            ));
        }
    }
    Ok(rhs.into_iter().take(unknowns).collect())
}
