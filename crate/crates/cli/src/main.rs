use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mcsc_core::coverage::{random_instance, RandomCoverageSpec};
use mcsc_core::harness::verify::verify_instance;
use mcsc_core::harness::{
    load_snap_graph, read_instance, run_experiment, write_instance, Algorithm, DeltaSetting,
    ExperimentConfig, InstanceSource,
};
use mcsc_core::influence::{generate_rr_sets, random_graph, write_rr_cache, CacheKey};

#[derive(Parser)]
#[command(
    name = "mcsc",
    version,
    about = "Minimum cost submodular cover solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config; flags override it.
    Run(RunArgs),
    /// Check the approximation guarantees on a small coverage instance.
    Verify(VerifyArgs),
    /// Generate a random weighted-coverage instance as JSON.
    Gen(GenArgs),
    /// Precompute RR sets for a graph into a binary cache.
    Rrcache(RrcacheArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML).
    config: PathBuf,
    /// Replace the config's source with a coverage instance file.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    algorithm: Option<Algorithm>,
    #[arg(long, conflicts_with = "tau_fraction")]
    tau: Option<f64>,
    #[arg(long)]
    tau_fraction: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// A number in (0, 1) or `auto`.
    #[arg(long)]
    delta: Option<DeltaSetting>,
    #[arg(long, conflicts_with = "budget_factor")]
    iterations: Option<u64>,
    #[arg(long)]
    budget_factor: Option<f64>,
    #[arg(long)]
    repetitions: Option<usize>,
    /// Comma-separated seeds, one per repetition.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    #[arg(long)]
    trace_stride: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Coverage instance (JSON).
    instance: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.25")]
    epsilons: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// EASC runs stop after this multiple of the expected iteration bound.
    #[arg(long, default_value_t = 10.0)]
    limit_factor: f64,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    #[arg(long, default_value_t = 10.0)]
    cost_spread: f64,
    #[arg(long, default_value_t = 0.8)]
    tau_fraction: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct RrcacheArgs {
    /// SNAP edge list.
    #[arg(
        long,
        required_unless_present = "vertices",
        conflicts_with = "vertices"
    )]
    graph: Option<PathBuf>,
    /// Use a random graph with this many vertices instead.
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long, default_value_t = 10.0)]
    mean_out_degree: f64,
    #[arg(long, default_value_t = 1)]
    graph_seed: u64,
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, short)]
    output: PathBuf,
}

fn run(args: RunArgs) -> Result<()> {
    let mut config = ExperimentConfig::load(&args.config)
        .with_context(|| format!("loading {}", args.config.display()))?;
    if let Some(path) = args.instance {
        config.source = InstanceSource::CoverageFile { path };
    }
    if let Some(a) = args.algorithm {
        config.algorithm = a;
        if a != Algorithm::Easc && args.delta.is_none() {
            config.delta = None;
        }
        if a == Algorithm::Greedy {
            config.iterations = None;
            config.budget_factor = None;
        }
    }
    if args.tau.is_some() || args.tau_fraction.is_some() {
        config.tau = args.tau;
        config.tau_fraction = args.tau_fraction;
    }
    if let Some(e) = args.epsilon {
        config.epsilon = e;
    }
    if args.delta.is_some() {
        config.delta = args.delta;
    }
    if args.iterations.is_some() || args.budget_factor.is_some() {
        config.iterations = args.iterations;
        config.budget_factor = args.budget_factor;
    }
    if let Some(r) = args.repetitions {
        config.repetitions = r;
        if args.seeds.is_none() {
            config.seeds = None;
        }
    }
    if args.seeds.is_some() {
        config.seeds = args.seeds;
    }
    if let Some(s) = args.trace_stride {
        config.trace_stride = s;
    }
    if let Some(o) = args.output {
        config.output = o;
    }
    if args.no_normalize {
        config.normalize = false;
    }

    let report = run_experiment(&config)?;
    println!(
        "{}: n = {}, tau = {}, f(S) = {}",
        report.algorithm, report.n, report.tau, report.full_value
    );
    if let Some(g) = &report.cost_bound {
        println!("greedy (eps = 0): |G| = {}, c(G) = {}", g.size, g.cost);
    }
    if let Some(d) = report.delta {
        println!("delta = {d}");
    }
    if let Some(g) = &report.greedy {
        println!(
            "greedy (eps = {}): |G| = {}, c(G) = {}, f(G) = {}",
            g.epsilon, g.size, g.cost, g.value
        );
    }
    if report.algorithm != Algorithm::Greedy {
        println!("iterations per run = {}", report.iterations);
        for run in &report.runs {
            match run.final_cost() {
                Some(c) => println!("seed {}: best feasible cost {c}", run.seed),
                None => println!("seed {}: no feasible solution", run.seed),
            }
        }
    }
    for file in &report.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let instance = read_instance(&args.instance)?;
    let report = verify_instance(&instance, &args.epsilons, args.seed, args.limit_factor)?;
    println!(
        "optimum: cost {} with {} elements {:?}",
        report.optimum.cost,
        report.optimum.subset.len(),
        report.optimum.subset.to_vec()
    );
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    for g in &report.greedy {
        println!(
            "{} greedy eps={}: cost {} (bound {}), f {}",
            verdict(g.passed),
            g.epsilon,
            g.cost,
            g.cost_bound,
            g.value
        );
    }
    for e in &report.easc {
        match &e.hit {
            Some(h) => println!(
                "{} easc eps={} delta={}: cost {} f {} after {} iterations (limit {})",
                verdict(e.passed),
                e.epsilon,
                e.delta,
                h.cost,
                h.value,
                h.iterations,
                e.iteration_limit
            ),
            None => println!(
                "FAIL easc eps={} delta={}: no cost-effective final-bin entry within {} iterations",
                e.epsilon, e.delta, e.iteration_limit
            ),
        }
    }
    Ok(report.passed())
}

fn gen(args: GenArgs) -> Result<()> {
    let instance = random_instance(&RandomCoverageSpec {
        n: args.n,
        m: args.m,
        density: args.density,
        cost_spread: args.cost_spread,
        tau_fraction: args.tau_fraction,
        seed: args.seed,
    })?;
    write_instance(&args.output, &instance)?;
    println!(
        "wrote {} (n = {}, tau = {})",
        args.output.display(),
        instance.n(),
        instance.tau()
    );
    Ok(())
}

fn rrcache(args: RrcacheArgs) -> Result<()> {
    let graph = match (&args.graph, args.vertices) {
        (Some(path), _) => load_snap_graph(path, args.p)?.graph,
        (None, Some(v)) => random_graph(v, args.mean_out_degree, args.p, args.graph_seed)?,
        (None, None) => bail!("one of --graph or --vertices is required"),
    };
    let index = generate_rr_sets(&graph, args.samples, args.seed)?;
    let key = CacheKey::for_graph(&graph, args.samples, args.seed);
    write_rr_cache(&args.output, &key, &index)?;
    println!(
        "wrote {} ({} RR sets, {} vertices, mean size {:.3})",
        args.output.display(),
        index.sample_count(),
        index.vertex_count(),
        index.total_size() as f64 / index.sample_count() as f64
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a).map(|()| true),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a).map(|()| true),
        Command::Rrcache(a) => rrcache(a).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
