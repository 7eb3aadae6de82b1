//! `gluecount` — one subcommand per library capability.
//!
//! Graphs are passed as file paths (graph6 or edge-list, sniffed) or
//! inline with a `g6:` prefix. Exit codes are a stable contract:
//! 0 success, 1 verification failure, 2 usage or parse error.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::Ratio;

use gluecount::{
    classify_pair_distribution, coefficient_table, compose_chain, compose_pair, count_copies,
    enumerate_gluings, enumerate_graphs, mod_q_histogram, multi_component_count, oracle_count,
    parse_graph6, parse_graph_text, run_experiment, sample_gnp, to_graph6, Calculus,
    CompositionCertificate, CountingMethod, DistributionSpec, ExperimentConfig, GlueSites, Graph,
    Prediction, DEFAULT_TV_THRESHOLD,
};

#[derive(Parser)]
#[command(
    name = "gluecount",
    version,
    about = "Exact copy counts of disconnected patterns via gluing decompositions"
)]
struct Cli {
    /// Emit machine-readable JSON instead of human tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count copies of a pattern graph inside a host graph.
    Count(CountArgs),
    /// List every gluing of the component family with its multiplicity.
    Gluings(ComponentsArg),
    /// Print the expansion of the pattern count into connected counts.
    Coeffs(ComponentsArg),
    /// Build a uniquely decomposable gluing of the components.
    Compose(ComponentsArg),
    /// Predict the mod-q residue law of a two-component copy count.
    Classify(ClassifyArgs),
    /// Sample G(n, p) hosts and compare count residues to a prediction.
    Experiment(ExperimentArgs),
    /// Run the built-in consistency checks.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct CountArgs {
    /// Pattern graph: a file path or `g6:<graph6>`; may be disconnected.
    #[arg(long)]
    pattern: String,
    /// Host graph: a file path or `g6:<graph6>`.
    #[arg(long)]
    host: String,
    #[arg(long, value_enum, default_value_t = Method::Direct)]
    method: Method,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// One backtracking search over the whole pattern.
    Direct,
    /// Expand into connected counts and evaluate the table.
    Formula,
    /// Brute-force reference count (small hosts only).
    Oracle,
}

#[derive(Args)]
struct ComponentsArg {
    /// Comma-separated component graphs (paths or `g6:` literals).
    #[arg(long, value_delimiter = ',', required = true)]
    components: Vec<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// First component (path or `g6:`).
    #[arg(long)]
    g1: String,
    /// Second component (path or `g6:`).
    #[arg(long)]
    g2: String,
    /// Residue modulus.
    #[arg(long)]
    q: u64,
    /// Host order the law is asymptotic in.
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Comma-separated component graphs (paths or `g6:` literals).
    #[arg(long, value_delimiter = ',', required = true)]
    components: Vec<String>,
    /// Host order.
    #[arg(long)]
    n: usize,
    /// Edge probability, strictly between 0 and 1.
    #[arg(long)]
    p: f64,
    /// Residue modulus.
    #[arg(long)]
    q: u64,
    /// Number of sampled hosts.
    #[arg(long)]
    samples: u64,
    /// Master seed; each sample derives its own stream from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to the global pool).
    #[arg(long)]
    jobs: Option<usize>,
    /// How to count each host.
    #[arg(long, value_enum, default_value_t = ExperimentMethod::Direct)]
    method: ExperimentMethod,
    /// `auto`, `uniform`, or a JSON file with exact masses like ["3/4","1/4"].
    #[arg(long, default_value = "auto")]
    predict: String,
    /// Largest total-variation distance that still passes.
    #[arg(long, default_value_t = DEFAULT_TV_THRESHOLD)]
    tv_threshold: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExperimentMethod {
    Direct,
    Formula,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, value_enum, default_value_t = Level::Quick)]
    level: Level,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    /// Censuses, small oracle sweeps, composer, format round-trips.
    Quick,
    /// Quick plus larger hosts, the k=3 recursion, and determinism.
    Full,
}

/// Anything that should stop the run, tagged with its exit code.
enum CliError {
    /// Bad inputs: unreadable files, malformed graphs, invalid flags.
    Usage(anyhow::Error),
    /// The computation itself failed or a verification did not hold.
    Failure(anyhow::Error),
}

fn usage<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Usage(e.into())
}

fn fail<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Failure(e.into())
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    // Die quietly when the reader hangs up (`gluecount … | head`), like
    // any other Unix filter, instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Count(args) => count(args, cli.json),
        Command::Gluings(args) => gluings(args, cli.json),
        Command::Coeffs(args) => coeffs(args, cli.json),
        Command::Compose(args) => compose(args, cli.json),
        Command::Classify(args) => classify(args, cli.json),
        Command::Experiment(args) => experiment(args, cli.json),
        Command::Selftest(args) => selftest(args, cli.json),
    }
}

/// Loads a graph from `g6:<literal>` or from a file in either format.
fn load_graph(spec: &str) -> Result<Graph, CliError> {
    if let Some(literal) = spec.strip_prefix("g6:") {
        return parse_graph6(literal)
            .with_context(|| format!("inline graph {literal:?}"))
            .map_err(usage);
    }
    let text = std::fs::read_to_string(spec)
        .with_context(|| format!("reading {spec}"))
        .map_err(usage)?;
    parse_graph_text(&text)
        .with_context(|| format!("parsing {spec}"))
        .map_err(usage)
}

fn load_components(specs: &[String]) -> Result<Vec<Graph>, CliError> {
    specs.iter().map(|s| load_graph(s)).collect()
}

fn graph6_of(g: &Graph) -> Result<String, CliError> {
    to_graph6(g).map_err(fail)
}

fn component_names(components: &[Graph]) -> Result<String, CliError> {
    let names: Vec<String> = components
        .iter()
        .map(graph6_of)
        .collect::<Result<_, _>>()?;
    Ok(format!("[{}]", names.join(", ")))
}

fn count(args: CountArgs, json: bool) -> CliResult {
    let pattern = load_graph(&args.pattern)?;
    let host = load_graph(&args.host)?;
    let (method, count) = match args.method {
        Method::Direct => ("direct", count_copies(&pattern, &host)),
        Method::Formula => {
            let parts = pattern.connected_components();
            ("formula", multi_component_count(&parts, &host).map_err(fail)?)
        }
        Method::Oracle => ("oracle", oracle_count(&pattern, &host).map_err(fail)?),
    };
    if json {
        println!(
            "{}",
            serde_json::json!({
                "pattern": graph6_of(&pattern)?,
                "host": graph6_of(&host)?,
                "method": method,
                "count": count,
            })
        );
    } else {
        println!(
            "pattern: {} vertices, {} edges ({} component{})",
            pattern.order(),
            pattern.size(),
            pattern.component_count(),
            if pattern.component_count() == 1 { "" } else { "s" },
        );
        println!("host: {} vertices, {} edges", host.order(), host.size());
        println!("method: {method}");
        println!("count: {count}");
    }
    Ok(())
}

fn gluings(args: ComponentsArg, json: bool) -> CliResult {
    let components = load_components(&args.components)?;
    let records = enumerate_gluings(&components).map_err(fail)?;
    if json {
        let rows: Vec<serde_json::Value> = records
            .iter()
            .map(|r| {
                Ok(serde_json::json!({
                    "graph6": graph6_of(&r.host)?,
                    "order": r.host.order(),
                    "size": r.host.size(),
                    "s": r.s,
                }))
            })
            .collect::<Result<_, CliError>>()?;
        println!("{}", serde_json::Value::Array(rows));
    } else {
        println!(
            "{} gluings of {}",
            records.len(),
            component_names(&components)?
        );
        println!("{:>4}  {:<14} {:>8} {:>6} {:>4}", "#", "graph6", "vertices", "edges", "s");
        for (i, r) in records.iter().enumerate() {
            println!(
                "{:>4}  {:<14} {:>8} {:>6} {:>4}",
                i + 1,
                graph6_of(&r.host)?,
                r.host.order(),
                r.host.size(),
                r.s
            );
        }
    }
    Ok(())
}

fn coeffs(args: ComponentsArg, json: bool) -> CliResult {
    let components = load_components(&args.components)?;
    let table = coefficient_table(&components).map_err(fail)?;
    if json {
        let rows: Vec<serde_json::Value> = table
            .terms()
            .iter()
            .map(|(monomial, c)| {
                let factors: Vec<String> = monomial
                    .iter()
                    .map(|k| graph6_of(&k.to_graph()))
                    .collect::<Result<_, _>>()?;
                Ok(serde_json::json!({ "coefficient": c, "factors": factors }))
            })
            .collect::<Result<_, CliError>>()?;
        println!("{}", serde_json::Value::Array(rows));
    } else {
        println!(
            "expansion of the {} count into connected counts — {} terms",
            component_names(&components)?,
            table.terms().len()
        );
        for (monomial, c) in table.terms() {
            let mut product = String::new();
            for key in monomial {
                if !product.is_empty() {
                    product.push_str(" · ");
                }
                write!(product, "N({})", graph6_of(&key.to_graph())?).unwrap();
            }
            println!("{c:>+4} · {product}");
        }
    }
    Ok(())
}

fn compose(args: ComponentsArg, json: bool) -> CliResult {
    let components = load_components(&args.components)?;
    let cert: CompositionCertificate = match components.len() {
        0 | 1 => {
            return Err(usage(anyhow!(
                "compose needs at least two components, got {}",
                components.len()
            )))
        }
        2 => compose_pair(&components[0], &components[1]).map_err(fail)?,
        _ => compose_chain(&components).map_err(fail)?,
    };
    let sites = match &cert.glue_sites {
        GlueSites::Vertices { v1, v2 } => format!("vertex {v1} of G1 onto vertex {v2} of G2"),
        GlueSites::Edges { e1, e2, crossed } => format!(
            "edge {e1:?} of G1 onto edge {e2:?} of G2{}",
            if *crossed { " (crossed)" } else { "" }
        ),
        GlueSites::ChainJoints(joints) => format!("chain joints at {joints:?}"),
    };
    if json {
        println!(
            "{}",
            serde_json::json!({
                "graph6": graph6_of(&cert.result)?,
                "order": cert.result.order(),
                "size": cert.result.size(),
                "case": cert.case_used.to_string(),
                "swapped": cert.swapped,
                "sites": sites,
                "s": cert.s_value,
                "verified": cert.uniqueness_verified,
            })
        );
    } else {
        println!(
            "composed {} into {} — {} vertices, {} edges",
            component_names(&components)?,
            graph6_of(&cert.result)?,
            cert.result.order(),
            cert.result.size()
        );
        println!(
            "case {}{}; {}",
            cert.case_used,
            if cert.swapped { " (inputs swapped)" } else { "" },
            sites
        );
        println!(
            "s(H) = {}{}",
            cert.s_value,
            if cert.uniqueness_verified {
                " — uniqueness verified"
            } else {
                ""
            }
        );
    }
    Ok(())
}

fn classify(args: ClassifyArgs, json: bool) -> CliResult {
    let g1 = load_graph(&args.g1)?;
    let g2 = load_graph(&args.g2)?;
    let spec = classify_pair_distribution(&g1, &g2, args.q, args.n).map_err(fail)?;
    print_distribution(&spec, args.q, args.n, json)
}

fn print_distribution(spec: &DistributionSpec, q: u64, n: usize, json: bool) -> CliResult {
    if json {
        let mass: Vec<String> = spec.masses().iter().map(|m| m.to_string()).collect();
        println!("{}", serde_json::json!({ "q": q, "n": n, "mass": mass }));
    } else {
        println!("predicted residue law mod {q} at n = {n}");
        println!("{:>8}  {:<8} {}", "residue", "mass", "float");
        for r in 0..q as usize {
            let m = spec.mass(r);
            println!(
                "{r:>8}  {:<8} {:.6}",
                m.to_string(),
                *m.numer() as f64 / *m.denom() as f64
            );
        }
    }
    Ok(())
}

fn parse_mass_file(path: &str, q: u64) -> Result<DistributionSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {path}"))
        .map_err(usage)?;
    let entries: Vec<String> = serde_json::from_str(&text)
        .with_context(|| format!("parsing {path} as a JSON array of fractions"))
        .map_err(usage)?;
    let mass: Vec<Ratio<i64>> = entries
        .iter()
        .map(|s| {
            s.parse::<Ratio<i64>>()
                .map_err(|e| usage(anyhow!("mass {s:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    DistributionSpec::from_mass(q, mass).map_err(usage)
}

fn experiment(args: ExperimentArgs, json: bool) -> CliResult {
    let components = load_components(&args.components)?;
    let mut config = ExperimentConfig::new(
        components, args.n, args.p, args.q, args.samples, args.seed,
    );
    config.jobs = args.jobs;
    config.method = match args.method {
        ExperimentMethod::Direct => CountingMethod::Direct,
        ExperimentMethod::Formula => CountingMethod::Formula,
    };
    config.tv_threshold = args.tv_threshold;
    config.validate().map_err(usage)?;

    let predicted = match args.predict.as_str() {
        "auto" => Prediction::Auto,
        "uniform" => Prediction::Uniform,
        path => Prediction::Spec(parse_mass_file(path, args.q)?),
    };
    let report = run_experiment(&config, &predicted).map_err(fail)?;
    if json {
        println!("{}", report.to_json());
    } else {
        println!(
            "residues of the {} count mod {} over {} samples of G({}, {})",
            component_names(&config.components)?,
            config.q,
            config.samples,
            config.n,
            config.p
        );
        println!("counts: {:?}", report.counts);
        println!("predicted: {}", report.predicted.join(", "));
        println!(
            "TV distance: {:.6} (threshold {})",
            report.tv_distance, report.tv_threshold
        );
        println!(
            "chi-square: {:.4} on {} df",
            report.chi_square, report.chi_square_df
        );
        println!("{}", if report.pass { "PASS" } else { "FAIL" });
    }
    if report.pass {
        Ok(())
    } else {
        Err(fail(anyhow!(
            "TV distance {:.6} exceeded the threshold {}",
            report.tv_distance,
            report.tv_threshold
        )))
    }
}

fn selftest(args: SelftestArgs, json: bool) -> CliResult {
    let mut checks: Vec<(&str, fn() -> Result<(), String>)> = vec![
        ("gluing censuses", check_censuses),
        ("pair formulas vs oracle, hosts ≤ 5", check_small_oracle),
        ("composer on 2–4 vertex pairs", check_composer),
        ("graph6 round-trip on 5-vertex graphs", check_format),
    ];
    if args.level == Level::Full {
        checks.push(("pair formulas vs oracle, larger hosts", check_large_oracle));
        checks.push(("three-component recursion vs oracle", check_k3));
        checks.push(("experiment determinism", check_determinism));
    }

    let mut results = Vec::new();
    let mut failures = 0;
    for (name, check) in checks {
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        if !json {
            match &outcome {
                Ok(()) => println!("ok      {name} ({elapsed:.2?})"),
                Err(msg) => println!("FAILED  {name}: {msg}"),
            }
        }
        if outcome.is_err() {
            failures += 1;
        }
        results.push(serde_json::json!({
            "check": name,
            "ok": outcome.is_ok(),
            "detail": outcome.err(),
        }));
    }
    if json {
        println!(
            "{}",
            serde_json::json!({ "checks": results, "failures": failures })
        );
    } else if failures == 0 {
        println!("selftest: all {} checks passed", results.len());
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(fail(anyhow!("{failures} selftest check(s) failed")))
    }
}

fn s_multiset(components: &[Graph]) -> Result<Vec<u64>, String> {
    let records = enumerate_gluings(components).map_err(|e| e.to_string())?;
    let mut s: Vec<u64> = records.iter().map(|r| r.s).collect();
    s.sort_unstable();
    Ok(s)
}

fn check_censuses() -> Result<(), String> {
    let cases: [(&[Graph], &[u64]); 3] = [
        (&[Graph::cycle(3), Graph::cycle(4)], &[1, 1, 2, 3]),
        (&[Graph::path(1), Graph::path(2)], &[2, 2, 3, 3]),
        (&[Graph::path(1), Graph::path(3)], &[2, 2, 2, 3, 4]),
    ];
    for (components, expected) in cases {
        let got = s_multiset(components)?;
        if got != expected {
            return Err(format!("multiset {got:?}, expected {expected:?}"));
        }
    }
    Ok(())
}

fn fixture_patterns() -> Vec<Vec<Graph>> {
    vec![
        vec![Graph::cycle(3), Graph::cycle(4)],
        vec![Graph::path(1), Graph::path(2)],
        vec![Graph::path(1), Graph::path(3)],
    ]
}

fn sweep_against_oracle(hosts: &[Graph]) -> Result<(), String> {
    let mut session = Calculus::new();
    for components in fixture_patterns() {
        let pattern = Graph::disjoint_union(&components);
        for host in hosts {
            let expected = oracle_count(&pattern, host).map_err(|e| e.to_string())?;
            let got = session
                .two_component_count(&components[0], &components[1], host)
                .map_err(|e| e.to_string())?;
            if got != expected {
                return Err(format!(
                    "recursion gave {got}, oracle {expected} on a {}-vertex host",
                    host.order()
                ));
            }
        }
    }
    Ok(())
}

fn check_small_oracle() -> Result<(), String> {
    let mut hosts = Vec::new();
    for n in 1..=5 {
        hosts.extend(enumerate_graphs(n, false).map_err(|e| e.to_string())?);
    }
    sweep_against_oracle(&hosts)
}

fn check_large_oracle() -> Result<(), String> {
    let mut hosts = enumerate_graphs(6, false).map_err(|e| e.to_string())?;
    for seed in 0..20 {
        hosts.push(sample_gnp(9, 0.5, seed).map_err(|e| e.to_string())?);
    }
    sweep_against_oracle(&hosts)
}

fn check_composer() -> Result<(), String> {
    let mut pool = Vec::new();
    for n in 2..=4 {
        pool.extend(enumerate_graphs(n, true).map_err(|e| e.to_string())?);
    }
    let mut composed = 0;
    let mut excluded = 0;
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            match compose_pair(&pool[i], &pool[j]) {
                Ok(cert) if cert.s_value == 1 && cert.uniqueness_verified => composed += 1,
                Ok(cert) => return Err(format!("s = {} on an admissible pair", cert.s_value)),
                Err(gluecount::Error::Unsupported(_)) => excluded += 1,
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    if (composed, excluded) != (34, 2) {
        return Err(format!("swept ({composed}, {excluded}), expected (34, 2)"));
    }
    Ok(())
}

fn check_format() -> Result<(), String> {
    for g in enumerate_graphs(5, false).map_err(|e| e.to_string())? {
        let line = to_graph6(&g).map_err(|e| e.to_string())?;
        let back = parse_graph6(&line).map_err(|e| e.to_string())?;
        if back.edges() != g.edges() {
            return Err(format!("round-trip changed {line}"));
        }
    }
    Ok(())
}

fn check_k3() -> Result<(), String> {
    let components = [Graph::cycle(3), Graph::cycle(4), Graph::cycle(5)];
    let pattern = Graph::disjoint_union(&components);
    let mut session = Calculus::new();
    for seed in 0..3 {
        let host = sample_gnp(10, 0.5, seed).map_err(|e| e.to_string())?;
        let got = session
            .multi_component_count(&components, &host)
            .map_err(|e| e.to_string())?;
        let expected = oracle_count(&pattern, &host).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("recursion gave {got}, oracle {expected}"));
        }
    }
    Ok(())
}

fn check_determinism() -> Result<(), String> {
    let components = [Graph::path(1), Graph::path(2)];
    let run = || mod_q_histogram(&components, 10, 0.5, 2, 40, 7).map_err(|e| e.to_string());
    let (a, b) = (run()?, run()?);
    if a != b {
        return Err("identical configs produced different histograms".into());
    }
    Ok(())
}
