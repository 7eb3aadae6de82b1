//! Random-host residue experiments.
//!
//! Samples G(n, p) hosts, reduces the copy count of a disconnected
//! pattern modulo q across many samples, and compares the resulting
//! histogram against a predicted residue law — uniform, the
//! two-component classifier, or a caller-supplied distribution.
//!
//! Each sample's generator seed is a fixed mix of the master seed and
//! the sample index, so histograms are identical regardless of how the
//! samples are scheduled across threads.

use num::rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{coefficient_table, CoefficientTable};
use crate::compose::{classify_pair_distribution, DistributionSpec};
use crate::count::count_copies;
use crate::error::{Error, Result};
use crate::format::to_graph6;
use crate::graph::Graph;

/// Passing verdicts require the empirical distance to stay below this
/// unless the config overrides it.
pub const DEFAULT_TV_THRESHOLD: f64 = 0.05;

/// Name of the pinned generator, echoed in reports.
pub const GENERATOR_ID: &str = "ChaCha8";

/// One G(n, p) draw: every unordered pair becomes an edge independently
/// with probability `p`, scanned in lexicographic order, so the result
/// is fully determined by `(n, p, seed)`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// splitmix64 round over the pair, decoupling per-sample seeds from the
/// execution order.
fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Empirical residue counts modulo a fixed q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Histogram {
    q: u64,
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    /// Wraps raw counts; the modulus must match the vector length.
    pub fn from_counts(q: u64, counts: Vec<u64>) -> Result<Histogram> {
        if q < 2 || counts.len() != q as usize {
            return Err(Error::InvalidArgument(format!(
                "count vector length {} does not match modulus {q}",
                counts.len()
            )));
        }
        let total = counts.iter().sum();
        Ok(Histogram { q, counts, total })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Observed frequency of residue `r` as an exact fraction.
    pub fn frequency(&self, r: usize) -> Ratio<i64> {
        if self.total == 0 {
            return Ratio::new(0, 1);
        }
        Ratio::new(self.counts[r] as i64, self.total as i64)
    }
}

/// How each sampled host is counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CountingMethod {
    /// One backtracking count of the disjoint pattern per host.
    #[default]
    Direct,
    /// Evaluate the coefficient table — slower, but exercises the
    /// expansion identity on every sample.
    Formula,
}

impl std::fmt::Display for CountingMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CountingMethod::Direct => write!(f, "direct"),
            CountingMethod::Formula => write!(f, "formula"),
        }
    }
}

/// Everything a residue experiment depends on.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub components: Vec<Graph>,
    pub n: usize,
    pub p: f64,
    pub q: u64,
    pub samples: u64,
    pub seed: u64,
    /// Worker threads for the sample loop; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub method: CountingMethod,
    /// Largest total-variation distance that still passes.
    pub tv_threshold: f64,
}

impl ExperimentConfig {
    pub fn new(
        components: Vec<Graph>,
        n: usize,
        p: f64,
        q: u64,
        samples: u64,
        seed: u64,
    ) -> ExperimentConfig {
        ExperimentConfig {
            components,
            n,
            p,
            q,
            samples,
            seed,
            jobs: None,
            method: CountingMethod::default(),
            tv_threshold: DEFAULT_TV_THRESHOLD,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::Config("no pattern components".into()));
        }
        for g in &self.components {
            if !g.is_connected() {
                return Err(Error::Config("pattern components must be connected".into()));
            }
        }
        let pattern_order: usize = self.components.iter().map(|g| g.order()).sum();
        if self.n < pattern_order {
            return Err(Error::Config(format!(
                "host order {} smaller than the pattern's {pattern_order} vertices",
                self.n
            )));
        }
        if !(self.p.is_finite() && 0.0 < self.p && self.p < 1.0) {
            return Err(Error::Config(format!(
                "edge probability {} outside (0, 1)",
                self.p
            )));
        }
        if self.q < 2 {
            return Err(Error::Config(format!("modulus {} < 2", self.q)));
        }
        if self.samples == 0 {
            return Err(Error::Config("at least one sample required".into()));
        }
        Ok(())
    }
}

enum SampleCounter {
    Direct(Graph),
    Formula(Box<CoefficientTable>),
}

impl SampleCounter {
    fn build(config: &ExperimentConfig) -> Result<SampleCounter> {
        match config.method {
            CountingMethod::Direct => Ok(SampleCounter::Direct(Graph::disjoint_union(
                &config.components,
            ))),
            CountingMethod::Formula => Ok(SampleCounter::Formula(Box::new(coefficient_table(
                &config.components,
            )?))),
        }
    }

    fn count(&self, host: &Graph) -> Result<u64> {
        match self {
            SampleCounter::Direct(pattern) => Ok(count_copies(pattern, host)),
            SampleCounter::Formula(table) => table.evaluate(host),
        }
    }
}

fn residue_counts(config: &ExperimentConfig) -> Result<Vec<u64>> {
    config.validate()?;
    let counter = SampleCounter::build(config)?;
    let q = config.q;
    let zero = || vec![0u64; q as usize];
    let run = || {
        (0..config.samples)
            .into_par_iter()
            .try_fold(zero, |mut acc, i| {
                let host = sample_gnp(config.n, config.p, mix_seed(config.seed, i))?;
                let count = counter.count(&host)?;
                acc[(count % q) as usize] += 1;
                Ok(acc)
            })
            .try_reduce(zero, |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            })
    };
    match config.jobs {
        None => run(),
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?
            .install(run),
    }
}

/// Residue histogram of the pattern's copy count over `samples` hosts.
pub fn mod_q_histogram(
    components: &[Graph],
    n: usize,
    p: f64,
    q: u64,
    samples: u64,
    seed: u64,
) -> Result<Histogram> {
    let config = ExperimentConfig::new(components.to_vec(), n, p, q, samples, seed);
    Histogram::from_counts(q, residue_counts(&config)?)
}

fn check_modulus(h: &Histogram, spec: &DistributionSpec) -> Result<()> {
    if h.q() != spec.q() {
        return Err(Error::ModulusMismatch {
            histogram: h.q() as usize,
            spec: spec.q() as usize,
        });
    }
    Ok(())
}

/// Exact total-variation distance between observed frequencies and the
/// predicted masses: `½ Σ_r |counts[r]/total − mass[r]|`.
pub fn total_variation_exact(h: &Histogram, spec: &DistributionSpec) -> Result<Ratio<i64>> {
    check_modulus(h, spec)?;
    if h.total() == 0 {
        return Err(Error::InvalidArgument("empty histogram".into()));
    }
    let mut sum = Ratio::new(0, 1);
    for r in 0..h.q() as usize {
        let diff = h.frequency(r) - spec.mass(r);
        sum += if diff < Ratio::new(0, 1) { -diff } else { diff };
    }
    Ok(sum / 2)
}

/// [`total_variation_exact`] rounded into a float for reporting.
pub fn total_variation(h: &Histogram, spec: &DistributionSpec) -> Result<f64> {
    let tv = total_variation_exact(h, spec)?;
    Ok(*tv.numer() as f64 / *tv.denom() as f64)
}

/// Chi-square statistic over the residues with positive predicted mass,
/// with `support − 1` degrees of freedom. Observed counts outside the
/// support are a contract violation, not evidence.
pub fn chi_square(h: &Histogram, spec: &DistributionSpec) -> Result<(f64, usize)> {
    check_modulus(h, spec)?;
    let support = spec.support();
    let mut stat = 0.0;
    for r in 0..h.q() as usize {
        let observed = h.counts()[r];
        if spec.mass(r) == Ratio::new(0, 1) {
            if observed > 0 {
                return Err(Error::InvalidArgument(format!(
                    "{observed} samples landed on residue {r}, which has predicted mass 0"
                )));
            }
            continue;
        }
        let mass = *spec.mass(r).numer() as f64 / *spec.mass(r).denom() as f64;
        let expected = h.total() as f64 * mass;
        let delta = observed as f64 - expected;
        stat += delta * delta / expected;
    }
    Ok((stat, support.len().saturating_sub(1)))
}

/// Where the predicted distribution comes from.
#[derive(Clone, Debug)]
pub enum Prediction {
    /// Two components only: ask the pair classifier.
    Auto,
    /// Uniform over residues.
    Uniform,
    /// Caller-supplied law.
    Spec(DistributionSpec),
}

fn resolve_prediction(config: &ExperimentConfig, predicted: &Prediction) -> Result<DistributionSpec> {
    match predicted {
        Prediction::Auto => {
            if config.components.len() != 2 {
                return Err(Error::Config(format!(
                    "auto prediction needs exactly 2 components, got {}",
                    config.components.len()
                )));
            }
            classify_pair_distribution(
                &config.components[0],
                &config.components[1],
                config.q,
                config.n,
            )
        }
        Prediction::Uniform => DistributionSpec::uniform(config.q),
        Prediction::Spec(spec) => {
            if spec.q() != config.q {
                return Err(Error::ModulusMismatch {
                    histogram: config.q as usize,
                    spec: spec.q() as usize,
                });
            }
            Ok(spec.clone())
        }
    }
}

/// Echo of the inputs inside a report; graphs travel as graph6.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportConfig {
    pub components: Vec<String>,
    pub n: usize,
    pub p: f64,
    pub q: u64,
    pub samples: u64,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub method: String,
}

/// Full outcome of one experiment, serializable as JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub tool_version: String,
    pub generator: String,
    pub config: ReportConfig,
    pub counts: Vec<u64>,
    pub predicted: Vec<String>,
    pub predicted_float: Vec<f64>,
    pub tv_distance: f64,
    pub chi_square: f64,
    pub chi_square_df: usize,
    pub tv_threshold: f64,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Runs the whole pipeline: histogram, prediction, distances, verdict.
pub fn run_experiment(
    config: &ExperimentConfig,
    predicted: &Prediction,
) -> Result<ExperimentReport> {
    config.validate()?;
    let spec = resolve_prediction(config, predicted)?;
    let histogram = Histogram::from_counts(config.q, residue_counts(config)?)?;
    let tv = total_variation(&histogram, &spec)?;
    let (chi, df) = chi_square(&histogram, &spec)?;
    let components = config
        .components
        .iter()
        .map(to_graph6)
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        generator: GENERATOR_ID.to_string(),
        config: ReportConfig {
            components,
            n: config.n,
            p: config.p,
            q: config.q,
            samples: config.samples,
            seed: config.seed,
            jobs: config.jobs,
            method: config.method.to_string(),
        },
        counts: histogram.counts().to_vec(),
        predicted: spec.masses().iter().map(|m| m.to_string()).collect(),
        predicted_float: spec
            .masses()
            .iter()
            .map(|m| *m.numer() as f64 / *m.denom() as f64)
            .collect(),
        tv_distance: tv,
        chi_square: chi,
        chi_square_df: df,
        tv_threshold: config.tv_threshold,
        pass: tv <= config.tv_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> Graph {
        Graph::cycle(n)
    }

    #[test]
    fn gnp_extremes_and_determinism() {
        let empty = sample_gnp(6, 0.0, 7).unwrap();
        assert_eq!(empty.size(), 0);
        let full = sample_gnp(6, 1.0, 7).unwrap();
        assert_eq!(full.size(), 15);
        let a = sample_gnp(12, 0.4, 99).unwrap();
        let b = sample_gnp(12, 0.4, 99).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = sample_gnp(12, 0.4, 100).unwrap();
        assert_ne!(a.edges(), c.edges());
        assert!(sample_gnp(5, 1.5, 0).is_err());
    }

    #[test]
    fn seed_mixing_separates_neighbouring_indices() {
        let seeds: Vec<u64> = (0..64).map(|i| mix_seed(42, i)).collect();
        let mut uniq = seeds.clone();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), seeds.len());
        assert_ne!(mix_seed(42, 0), mix_seed(43, 0));
    }

    #[test]
    fn histogram_totals_match_samples() {
        let h = mod_q_histogram(&[c(3)], 10, 0.5, 2, 40, 1).unwrap();
        assert_eq!(h.total(), 40);
        assert_eq!(h.counts().iter().sum::<u64>(), 40);
    }

    #[test]
    fn direct_and_formula_methods_agree() {
        let mut config =
            ExperimentConfig::new(vec![c(3), c(4)], 12, 0.5, 3, 25, 2024);
        let direct = residue_counts(&config).unwrap();
        config.method = CountingMethod::Formula;
        let formula = residue_counts(&config).unwrap();
        assert_eq!(direct, formula);
    }

    #[test]
    fn isolated_vertex_concentrates_on_multiples() {
        // With an isolated vertex, every count is divisible by
        // l = gcd(q, n − |V(G2)|) exactly, not just in distribution.
        let pattern = [Graph::single_vertex(), c(3)];
        let h = mod_q_histogram(&pattern, 23, 0.5, 4, 60, 5).unwrap();
        assert_eq!(&h.counts()[1..], &[0, 0, 0]);
        let h = mod_q_histogram(&pattern, 21, 0.5, 4, 60, 5).unwrap();
        assert_eq!((h.counts()[1], h.counts()[3]), (0, 0));
    }

    #[test]
    fn distance_hand_values() {
        let uniform = DistributionSpec::uniform(2).unwrap();
        let h = Histogram::from_counts(2, vec![60, 40]).unwrap();
        assert_eq!(
            total_variation_exact(&h, &uniform).unwrap(),
            Ratio::new(1, 10)
        );
        let (stat, df) = chi_square(&h, &uniform).unwrap();
        assert!((stat - 4.0).abs() < 1e-12);
        assert_eq!(df, 1);

        let exact = Histogram::from_counts(2, vec![50, 50]).unwrap();
        assert_eq!(total_variation(&exact, &uniform).unwrap(), 0.0);

        let point = DistributionSpec::from_mass(
            2,
            vec![Ratio::new(0, 1), Ratio::new(1, 1)],
        )
        .unwrap();
        let opposite = Histogram::from_counts(2, vec![100, 0]).unwrap();
        assert_eq!(total_variation(&opposite, &point).unwrap(), 1.0);
        // Samples outside the predicted support invalidate chi-square.
        assert!(chi_square(&opposite, &point).is_err());

        let three = DistributionSpec::uniform(3).unwrap();
        assert!(matches!(
            total_variation(&h, &three),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn experiment_report_shape_and_determinism() {
        let mut config = ExperimentConfig::new(
            vec![Graph::path(1), Graph::path(3)],
            12,
            0.5,
            2,
            150,
            77,
        );
        let report = run_experiment(&config, &Prediction::Auto).unwrap();
        assert_eq!(report.predicted, vec!["3/4", "1/4"]);
        assert_eq!(report.generator, GENERATOR_ID);
        assert_eq!(report.config.components, vec!["A_", "Ch"]);
        assert_eq!(report.counts.iter().sum::<u64>(), 150);

        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert!(value["tv_distance"].is_number());
        assert_eq!(value["config"]["samples"], 150);

        // Same seed, different parallelism → identical report.
        config.jobs = Some(2);
        let parallel = run_experiment(&config, &Prediction::Auto).unwrap();
        assert_eq!(parallel.counts, report.counts);
        assert_eq!(parallel.tv_distance, report.tv_distance);
    }

    #[test]
    fn prediction_resolution_rules() {
        let config = ExperimentConfig::new(vec![c(3), c(4), c(5)], 12, 0.5, 2, 5, 1);
        assert!(matches!(
            run_experiment(&config, &Prediction::Auto),
            Err(Error::Config(_))
        ));
        let report = run_experiment(&config, &Prediction::Uniform).unwrap();
        assert_eq!(report.predicted, vec!["1/2", "1/2"]);

        let wrong_q = DistributionSpec::uniform(3).unwrap();
        assert!(matches!(
            run_experiment(&config, &Prediction::Spec(wrong_q)),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn config_validation_rules() {
        let ok = ExperimentConfig::new(vec![c(3)], 8, 0.5, 2, 1, 0);
        assert!(ok.validate().is_ok());
        let mut bad = ok.clone();
        bad.components.clear();
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.n = 2;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.p = 0.0;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.q = 1;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.samples = 0;
        assert!(bad.validate().is_err());
        let mut bad = ok;
        bad.components = vec![Graph::disjoint_union(&[c(3), c(4)])];
        assert!(bad.validate().is_err());
    }
}
