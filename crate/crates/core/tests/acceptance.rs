//! The release gate: ten checks, each printing one PASS line with its
//! runtime (visible under `--nocapture`), each failing loudly otherwise.
//!
//! Exact checks compare the calculus against the brute-force oracle on
//! complete small-host sweeps plus seeded random hosts; statistical
//! checks pin the sampler seed and test empirical residue laws at fixed
//! tolerances, with sample sizes chosen so the tolerances hold with
//! overwhelming probability.

use std::time::{Duration, Instant};

use gluecount::{
    coefficient_table, compose_chain, compose_pair, connected_coefficient, count_copies,
    enumerate_gluings, enumerate_graphs, fit_coefficient_table, h_good_partitions,
    mod_q_histogram, oracle_count, run_experiment, sample_gnp, total_variation, Calculus,
    CountingMethod, DistributionSpec, Error, ExperimentConfig, Graph, Histogram, Prediction,
};

fn c(n: usize) -> Graph {
    Graph::cycle(n)
}

fn p(edges: usize) -> Graph {
    Graph::path(edges)
}

fn s_multiset(components: &[Graph]) -> Vec<u64> {
    let mut s: Vec<u64> = enumerate_gluings(components)
        .unwrap()
        .iter()
        .map(|r| r.s)
        .collect();
    s.sort_unstable();
    s
}

fn finish(number: u32, what: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "criterion {number} overran its {budget:?} budget: {elapsed:?}"
    );
    println!("criterion {number:2} PASS — {what} ({elapsed:.2?})");
}

#[test]
fn criterion_01_cycle_pair_census() {
    let t = Instant::now();
    assert_eq!(s_multiset(&[c(3), c(4)]), vec![1, 1, 2, 3]);
    finish(
        1,
        "[C3,C4] census has 4 records with s = {1,1,2,3}",
        t,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_02_path_pair_censuses() {
    let t = Instant::now();
    assert_eq!(s_multiset(&[p(1), p(2)]), vec![2, 2, 3, 3]);
    assert_eq!(s_multiset(&[p(1), p(3)]), vec![2, 2, 2, 3, 4]);
    finish(
        2,
        "[P1,P2] census s = {2,2,3,3}; [P1,P3] census s = {2,2,2,3,4}",
        t,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_03_formula_equals_oracle_on_pairs() {
    let t = Instant::now();
    let mut hosts = enumerate_graphs(7, false).unwrap();
    assert_eq!(hosts.len(), 1044);
    hosts.extend((0..100).map(|seed| sample_gnp(10, 0.5, seed).unwrap()));

    let fixtures = [
        vec![c(3), c(4)],
        vec![p(1), p(2)],
        vec![p(1), p(3)],
    ];
    let mut session = Calculus::new();
    for components in &fixtures {
        let table = session.coefficient_table(components).unwrap();
        let pattern = Graph::disjoint_union(components);
        for host in &hosts {
            let expected = oracle_count(&pattern, host).unwrap();
            let direct = session
                .two_component_count(&components[0], &components[1], host)
                .unwrap();
            assert_eq!(direct, expected, "recursion mismatch on a host");
            assert_eq!(
                table.evaluate(host).unwrap(),
                expected,
                "table mismatch on a host"
            );
        }
    }
    finish(
        3,
        "pair recursion and tables match the oracle on 1144 hosts × 3 patterns",
        t,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_04_three_component_recursion() {
    let t = Instant::now();
    let components = [c(3), c(4), c(5)];
    let pattern = Graph::disjoint_union(&components);
    let mut session = Calculus::new();
    for seed in 0..25 {
        let host = sample_gnp(12, 0.5, seed).unwrap();
        assert_eq!(
            session.multi_component_count(&components, &host).unwrap(),
            oracle_count(&pattern, &host).unwrap(),
            "k=3 mismatch at seed {seed}"
        );
    }
    finish(
        4,
        "[C3,C4,C5] recursion matches the oracle on 25 random 12-vertex hosts",
        t,
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_05_tree_like_coefficients() {
    let t = Instant::now();
    let chain2 = compose_chain(&[c(3), c(4)]).unwrap();
    assert_eq!(chain2.s_value, 1);
    assert_eq!(
        connected_coefficient(&[c(3), c(4)], &chain2.result).unwrap(),
        -1
    );

    let family = [c(3), c(4), c(5)];
    let chain3 = compose_chain(&family).unwrap();
    assert_eq!(chain3.s_value, 1);
    assert_eq!(connected_coefficient(&family, &chain3.result).unwrap(), 1);

    let mut by_blocks = [0usize; 3];
    for partition in h_good_partitions(&chain3.result, &family).unwrap() {
        by_blocks[partition.blocks().len() - 1] += 1;
    }
    assert_eq!(by_blocks, [1, 2, 1]);
    finish(
        5,
        "chain coefficients are ±1 and the 3-chain good-partition census is (1,2,1)",
        t,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_06_composer_totality() {
    let t = Instant::now();
    let mut pool = Vec::new();
    for n in 2..=5 {
        pool.extend(enumerate_graphs(n, true).unwrap());
    }
    assert_eq!(pool.len(), 30);

    let mut composed = 0;
    let mut excluded = 0;
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            match compose_pair(&pool[i], &pool[j]) {
                Ok(cert) => {
                    assert_eq!(cert.s_value, 1);
                    assert!(cert.uniqueness_verified);
                    composed += 1;
                }
                Err(Error::Unsupported(_)) => excluded += 1,
                Err(e) => panic!("unexpected failure: {e}"),
            }
        }
    }
    // 30 connected graphs on 2–5 vertices give 435 unordered pairs;
    // only the two path pairs without unique gluings bow out.
    assert_eq!((composed, excluded), (433, 2));
    finish(
        6,
        "compose_pair builds verified s=1 gluings for all 433 admissible pairs",
        t,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_07_parity_skew() {
    let t = Instant::now();
    let mut config =
        ExperimentConfig::new(vec![p(1), p(3)], 20, 0.5, 2, 10_000, 20_260_815);
    config.method = CountingMethod::Formula;
    let report = run_experiment(&config, &Prediction::Auto).unwrap();
    assert_eq!(report.predicted, vec!["3/4", "1/4"]);
    let even = report.counts[0] as f64 / 10_000.0;
    assert!(
        (0.73..=0.77).contains(&even),
        "even residue fraction {even} outside 0.75 ± 0.02"
    );
    assert!(report.pass);
    finish(
        7,
        "[P1,P3] mod 2 lands on 3/4 even within ±0.02 over 10000 hosts",
        t,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_08_uniformity() {
    let t = Instant::now();
    let mut config =
        ExperimentConfig::new(vec![c(3), c(4)], 18, 0.5, 3, 2_000, 18_033);
    config.method = CountingMethod::Formula;
    let report = run_experiment(&config, &Prediction::Uniform).unwrap();
    assert!(
        report.tv_distance < 0.05,
        "TV to uniform mod 3 was {}",
        report.tv_distance
    );

    // Joint residues of two separate counts, binned over [2]².
    let (c3, p2) = (c(3), p(2));
    let mut cells = vec![0u64; 4];
    for i in 0..10_000u64 {
        let host = sample_gnp(18, 0.5, 4_000_000 + i).unwrap();
        let a = count_copies(&c3, &host) % 2;
        let b = count_copies(&p2, &host) % 2;
        cells[(2 * a + b) as usize] += 1;
    }
    let joint = Histogram::from_counts(4, cells).unwrap();
    let tv = total_variation(&joint, &DistributionSpec::uniform(4).unwrap()).unwrap();
    assert!(tv < 0.05, "joint TV over 4 cells was {tv}");
    finish(
        8,
        "[C3,C4] mod 3 and joint (N(C3),N(P2)) mod 2 are near-uniform",
        t,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_09_isolated_vertex_law() {
    let t = Instant::now();
    let pattern = [Graph::single_vertex(), c(3)];
    // n − |V(C3)| = 20 ≡ 0 (mod 4): the count is 4·(something), always.
    let locked = mod_q_histogram(&pattern, 23, 0.5, 4, 5_000, 9).unwrap();
    assert_eq!(&locked.counts()[1..], &[0, 0, 0]);
    assert_eq!(locked.counts()[0], 5_000);

    // n − 3 = 19 is coprime to 4: residues spread out uniformly.
    let spread = mod_q_histogram(&pattern, 22, 0.5, 4, 5_000, 9).unwrap();
    let tv = total_variation(&spread, &DistributionSpec::uniform(4).unwrap()).unwrap();
    assert!(tv < 0.05, "TV to uniform mod 4 was {tv}");
    finish(
        9,
        "[K1,C3] mod 4 is constant 0 at n=23 and uniform at n=22",
        t,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_10_expansion_uniqueness() {
    let t = Instant::now();
    let mut hosts: Vec<Graph> = Vec::new();
    for n in 3..=6 {
        hosts.extend(enumerate_graphs(n, false).unwrap());
    }
    hosts.push(Graph::complete(7));
    hosts.extend((0..2).map(|seed| sample_gnp(8, 0.5, seed).unwrap()));

    let fixtures = [
        vec![c(3), c(4)],
        vec![p(1), p(2)],
        vec![p(1), p(3)],
    ];
    for components in &fixtures {
        assert_eq!(
            fit_coefficient_table(components, &hosts).unwrap(),
            coefficient_table(components).unwrap()
        );
    }
    finish(
        10,
        "linear-solve tables equal recursion tables for all 3 fixtures",
        t,
        Duration::from_secs(300),
    );
}
