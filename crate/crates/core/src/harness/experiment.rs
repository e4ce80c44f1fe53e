//! Runs an [`ExperimentConfig`]: builds the instance, resolves `δ`, runs all
//! repetitions in parallel and writes the trace CSVs.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use super::config::{Algorithm, DeltaSetting, ExperimentConfig, InfluenceSettings, InstanceSource};
use super::instance_io::read_instance;
use super::output::{
    average_traces, greedy_trace, normalize, write_averaged_csv, write_normalized_csv,
    write_trace_csv,
};
use super::snap::load_snap_graph;
use crate::coverage::{random_instance, RandomCoverageSpec};
use crate::easc::{choose_delta, run_easc, EascConfig};
use crate::error::{Error, Result};
use crate::greedy::{run_greedy, GreedyResult};
use crate::influence::{
    degree_noise_costs, generate_rr_sets, load_or_generate, random_graph, DirectedGraph, RisOracle,
};
use crate::oracle::{Instance, SubmodularOracle};
use crate::pom::{run_pom, PomConfig};
use crate::trace::TraceRow;

/// The greedy reference solution used for `δ = auto`, budgets and normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedySummary {
    pub epsilon: f64,
    pub size: usize,
    pub cost: f64,
    pub value: f64,
    pub evaluations: u64,
}

impl GreedySummary {
    fn of(result: &GreedyResult, epsilon: f64) -> Self {
        GreedySummary {
            epsilon,
            size: result.order.len(),
            cost: result.cost,
            value: result.f_value,
            evaluations: result.evaluations,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub seed: u64,
    pub trace: Vec<TraceRow>,
    pub evaluations: u64,
    pub max_population: usize,
}

impl RunSummary {
    pub fn final_cost(&self) -> Option<f64> {
        self.trace.last().and_then(|r| r.best_feasible_cost)
    }

    /// Evaluations at the first checkpoint whose best feasible cost is at
    /// most `cost`.
    pub fn evaluations_to_reach(&self, cost: f64) -> Option<u64> {
        self.trace
            .iter()
            .find(|r| r.best_feasible_cost.is_some_and(|c| c <= cost))
            .map(|r| r.evaluations)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub algorithm: Algorithm,
    pub n: usize,
    pub tau: f64,
    pub full_value: f64,
    pub c_min: f64,
    pub delta: Option<f64>,
    /// Greedy with `ε = 0`, when `δ = auto`.
    pub cost_bound: Option<GreedySummary>,
    /// Greedy with the configured `ε`.
    pub greedy: Option<GreedySummary>,
    pub iterations: u64,
    pub runs: Vec<RunSummary>,
    pub files: Vec<PathBuf>,
}

impl ExperimentReport {
    /// Mean of the final best feasible cost, if every run found one.
    pub fn mean_final_cost(&self) -> Option<f64> {
        let costs: Option<Vec<f64>> = self.runs.iter().map(RunSummary::final_cost).collect();
        costs
            .filter(|c| !c.is_empty())
            .map(|c| c.iter().sum::<f64>() / c.len() as f64)
    }
}

/// An influence instance together with its graph.
pub struct InfluenceInstance {
    pub graph: DirectedGraph,
    pub instance: Instance<RisOracle>,
}

fn build_influence(
    graph: DirectedGraph,
    settings: &InfluenceSettings,
) -> Result<InfluenceInstance> {
    let graph = graph.with_edge_probability(settings.p)?;
    let index = match &settings.rr_cache {
        Some(path) => load_or_generate(&graph, settings.rr_samples, settings.rr_seed, path)?,
        None => generate_rr_sets(&graph, settings.rr_samples, settings.rr_seed)?,
    };
    let costs = degree_noise_costs(&graph, settings.sigma, settings.cost_seed)?.costs;
    let instance = Instance::new(RisOracle::new(Arc::new(index)), costs, 0.0)?;
    Ok(InfluenceInstance { graph, instance })
}

/// Builds the influence instance of a graph source (with `τ = 0`).
pub fn influence_instance(source: &InstanceSource) -> Result<InfluenceInstance> {
    match source {
        InstanceSource::Graph { path, influence } => {
            build_influence(load_snap_graph(path, influence.p)?.graph, influence)
        }
        InstanceSource::RandomGraph {
            vertices,
            mean_out_degree,
            graph_seed,
            influence,
        } => build_influence(
            random_graph(*vertices, *mean_out_degree, influence.p, *graph_seed)?,
            influence,
        ),
        _ => Err(Error::Config("not a graph source".into())),
    }
}

fn resolve_tau<O: SubmodularOracle>(
    instance: Instance<O>,
    config: &ExperimentConfig,
) -> Result<Instance<O>> {
    match (config.tau, config.tau_fraction) {
        (Some(tau), _) => instance.with_tau(tau),
        (None, Some(frac)) => {
            let tau = (frac * instance.full_value()).min(instance.full_value());
            instance.with_tau(tau)
        }
        (None, None) => Ok(instance),
    }
}

/// Validates `config`, runs it and writes the output files. On failure every
/// file written so far is removed.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    match &config.source {
        InstanceSource::CoverageFile { path } => {
            run_on_instance(&resolve_tau(read_instance(path)?, config)?, config)
        }
        InstanceSource::RandomCoverage {
            n,
            m,
            density,
            cost_spread,
            seed,
        } => {
            let inst = random_instance(&RandomCoverageSpec {
                n: *n,
                m: *m,
                density: *density,
                cost_spread: *cost_spread,
                tau_fraction: 0.0,
                seed: *seed,
            })?;
            run_on_instance(&resolve_tau(inst, config)?, config)
        }
        source => {
            let built = influence_instance(source)?;
            run_on_instance(&resolve_tau(built.instance, config)?, config)
        }
    }
}

/// Runs `config` on an already built instance; `config.source` and the
/// threshold settings are ignored.
pub fn run_on_instance<O: SubmodularOracle>(
    instance: &Instance<O>,
    config: &ExperimentConfig,
) -> Result<ExperimentReport> {
    config.validate()?;
    let mut written = Vec::new();
    let result = execute(instance, config, &mut written);
    if result.is_err() {
        for path in &written {
            let _ = std::fs::remove_file(path);
        }
    }
    result
}

/// Picks `δ = 1 - c_min / B` from a greedy cost bound `B >= c(A*)`. When
/// `B = c_min` that formula gives 0, so half of `1 - c_min / c(S)` is used.
pub fn auto_delta<O: SubmodularOracle>(instance: &Instance<O>, bound: f64) -> Result<f64> {
    if bound > instance.c_min() {
        return choose_delta(instance, bound);
    }
    let spread = 1.0 - instance.c_min() / instance.total_cost();
    if spread > 0.0 {
        Ok(spread / 2.0)
    } else {
        Err(Error::Domain(
            "all costs lie in a single element; no admissible delta".into(),
        ))
    }
}

fn execute<O: SubmodularOracle>(
    instance: &Instance<O>,
    config: &ExperimentConfig,
    written: &mut Vec<PathBuf>,
) -> Result<ExperimentReport> {
    let n = instance.n();
    let out = config.output.as_path();
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let mut write = |name: String, f: &dyn Fn(&Path) -> Result<()>| -> Result<()> {
        let path = out.join(name);
        written.push(path.clone());
        f(&path)
    };

    let needs_greedy =
        config.algorithm == Algorithm::Greedy || config.normalize || config.budget_factor.is_some();
    let greedy = if needs_greedy {
        Some(run_greedy(instance, config.epsilon, n)?)
    } else {
        None
    };
    let greedy_summary = greedy
        .as_ref()
        .map(|g| GreedySummary::of(g, config.epsilon));

    let mut report = ExperimentReport {
        algorithm: config.algorithm,
        n,
        tau: instance.tau(),
        full_value: instance.full_value(),
        c_min: instance.c_min(),
        delta: None,
        cost_bound: None,
        greedy: greedy_summary.clone(),
        iterations: 0,
        runs: Vec::new(),
        files: Vec::new(),
    };

    if config.algorithm == Algorithm::Greedy {
        let g = greedy.as_ref().expect("greedy ran");
        let target = (1.0 - config.epsilon) * instance.tau();
        let trace = greedy_trace(g, target);
        write("greedy.csv".into(), &|p| write_trace_csv(p, &trace))?;
        report.runs.push(RunSummary {
            seed: 0,
            trace,
            evaluations: g.evaluations,
            max_population: 1,
        });
        report.files = written.clone();
        return Ok(report);
    }

    report.iterations = match (config.iterations, config.budget_factor) {
        (Some(t), _) => t,
        (None, Some(factor)) => {
            let size = greedy_summary.as_ref().map_or(0, |g| g.size);
            (factor * (n * size.max(1)) as f64).ceil() as u64
        }
        (None, None) => unreachable!("validated"),
    };

    if config.algorithm == Algorithm::Easc {
        report.delta = Some(match config.delta {
            Some(DeltaSetting::Fixed(d)) => d,
            Some(DeltaSetting::Auto) => {
                let bound = run_greedy(instance, 0.0, n)?;
                report.cost_bound = Some(GreedySummary::of(&bound, 0.0));
                auto_delta(instance, bound.cost)?
            }
            None => unreachable!("validated"),
        });
    }

    let seeds = config.seeds();
    let runs: Vec<RunSummary> = seeds
        .par_iter()
        .map(|&seed| run_one(instance, config, report.delta, report.iterations, seed))
        .collect::<Result<_>>()?;

    let alg = config.algorithm.name();
    for run in &runs {
        write(format!("{alg}_seed{}.csv", run.seed), &|p| {
            write_trace_csv(p, &run.trace)
        })?;
    }
    let traces: Vec<Vec<TraceRow>> = runs.iter().map(|r| r.trace.clone()).collect();
    let averaged = average_traces(&traces)?;
    write(format!("{alg}_mean.csv"), &|p| {
        write_averaged_csv(p, &averaged)
    })?;
    if config.normalize {
        let g = greedy_summary.as_ref().expect("greedy ran");
        let rows = normalize(&averaged, n, g.size, g.cost)?;
        write(format!("{alg}_normalized.csv"), &|p| {
            write_normalized_csv(p, &rows)
        })?;
    }
    report.runs = runs;
    report.files = written.clone();
    Ok(report)
}

fn run_one<O: SubmodularOracle>(
    instance: &Instance<O>,
    config: &ExperimentConfig,
    delta: Option<f64>,
    iterations: u64,
    seed: u64,
) -> Result<RunSummary> {
    match config.algorithm {
        Algorithm::Easc => {
            let mut cfg = EascConfig::new(
                config.epsilon,
                delta.expect("delta resolved"),
                iterations,
                seed,
            );
            cfg.trace_stride = config.trace_stride;
            let run = run_easc(instance, &cfg)?;
            let max_population = run
                .trace
                .iter()
                .map(|r| r.population_size)
                .max()
                .unwrap_or(1);
            Ok(RunSummary {
                seed,
                evaluations: run.evaluations,
                trace: run.trace,
                max_population,
            })
        }
        Algorithm::Pom => {
            let mut cfg = PomConfig::new((1.0 - config.epsilon) * instance.tau(), iterations, seed);
            cfg.trace_stride = config.trace_stride;
            let run = run_pom(instance, &cfg)?;
            Ok(RunSummary {
                seed,
                evaluations: run.evaluations,
                trace: run.trace,
                max_population: run.max_population,
            })
        }
        Algorithm::Greedy => unreachable!("greedy has no repetitions"),
    }
}
