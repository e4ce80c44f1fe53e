//! Guarantee checks on instances small enough for exhaustive search.

use crate::easc::{Easc, EascConfig};
use crate::error::{Error, Result};
use crate::greedy::run_greedy;
use crate::oracle::{Instance, SubmodularOracle};
use crate::subset::Subset;
use crate::verify::{brute_force_optimum, OptimalSolution};

use super::experiment::auto_delta;

/// Absolute slack used when comparing against a bound `b`: `1e-9 (1 + b)`.
pub fn slack(bound: f64) -> f64 {
    1e-9 * (1.0 + bound.abs())
}

/// The bicriteria cost factor `ln(1/ε) + 1`.
pub fn cost_factor(epsilon: f64) -> f64 {
    (1.0 / epsilon).ln() + 1.0
}

/// Expected iterations until the final bin holds a cost-effective entry,
/// bounded by `e·n·r·(r + 1)`.
pub fn iteration_bound(n: usize, last_bin: usize) -> f64 {
    std::f64::consts::E * n as f64 * last_bin as f64 * (last_bin as f64 + 1.0)
}

/// `δ = 1 - c_min / c(A*)`, falling back to [`auto_delta`] when that is 0.
pub fn delta_for_optimum<O: SubmodularOracle>(
    instance: &Instance<O>,
    optimal_cost: f64,
) -> Result<f64> {
    auto_delta(instance, optimal_cost)
}

/// First moment an EASC run holds a cost-effective entry in its final bin.
#[derive(Debug, Clone, PartialEq)]
pub struct CostEffectiveHit {
    pub iterations: u64,
    pub evaluations: u64,
    pub set: Subset,
    pub cost: f64,
    pub value: f64,
    pub last_bin: usize,
}

/// Steps EASC until the final bin holds an entry with
/// `c <= (ln(1/ε) + 1)·optimal_cost`. Returns `None` if that does not happen
/// within `max_iterations`.
pub fn run_easc_until_cost_effective<O: SubmodularOracle>(
    instance: &Instance<O>,
    epsilon: f64,
    delta: f64,
    seed: u64,
    optimal_cost: f64,
    max_iterations: u64,
) -> Result<Option<CostEffectiveHit>> {
    let bound = cost_factor(epsilon) * optimal_cost;
    let mut run = Easc::new(
        instance,
        &EascConfig::new(epsilon, delta, max_iterations, seed),
    )?;
    let last_bin = run.layout().last_bin();
    loop {
        if let Some(e) = run.population().get(last_bin) {
            if e.score.cost <= bound + slack(bound) {
                return Ok(Some(CostEffectiveHit {
                    iterations: run.iteration(),
                    evaluations: run.evaluations(),
                    set: e.set.clone(),
                    cost: e.score.cost,
                    value: e.score.value,
                    last_bin,
                }));
            }
        }
        if run.iteration() >= max_iterations {
            return Ok(None);
        }
        run.step();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyCheck {
    pub epsilon: f64,
    pub cost: f64,
    pub value: f64,
    pub cost_bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EascCheck {
    pub epsilon: f64,
    pub delta: f64,
    pub last_bin: usize,
    pub iteration_limit: u64,
    pub hit: Option<CostEffectiveHit>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub optimum: OptimalSolution,
    pub greedy: Vec<GreedyCheck>,
    /// Empty when `τ = 0`, where EASC is undefined.
    pub easc: Vec<EascCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.greedy.iter().all(|g| g.passed) && self.easc.iter().all(|e| e.passed)
    }
}

/// Certifies `c(A*)` by exhaustive search, then checks for each `ε` that
/// greedy and EASC (with `δ = 1 - c_min / c(A*)`) meet the bicriteria
/// guarantee. EASC runs are capped at `limit_factor` times the expected
/// iteration bound.
pub fn verify_instance<O: SubmodularOracle>(
    instance: &Instance<O>,
    epsilons: &[f64],
    seed: u64,
    limit_factor: f64,
) -> Result<VerifyReport> {
    if let Some(&bad) = epsilons.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(Error::Domain(format!("epsilon {bad} not in (0, 1)")));
    }
    let optimum = brute_force_optimum(instance)?;
    let tau = instance.tau();
    let mut greedy = Vec::new();
    let mut easc = Vec::new();
    for &epsilon in epsilons {
        let target = (1.0 - epsilon) * tau;
        let cost_bound = cost_factor(epsilon) * optimum.cost;
        let g = run_greedy(instance, epsilon, instance.n())?;
        greedy.push(GreedyCheck {
            epsilon,
            cost: g.cost,
            value: g.f_value,
            cost_bound,
            passed: g.f_value >= target - slack(target) && g.cost <= cost_bound + slack(cost_bound),
        });
        if tau <= 0.0 {
            continue;
        }
        let delta = delta_for_optimum(instance, optimum.cost)?;
        let layout =
            crate::easc::BinLayout::new(tau, epsilon, delta, crate::easc::DEFAULT_MAX_BINS)?;
        let last_bin = layout.last_bin();
        let limit = (limit_factor * iteration_bound(instance.n(), last_bin)).ceil() as u64;
        let hit =
            run_easc_until_cost_effective(instance, epsilon, delta, seed, optimum.cost, limit)?;
        let passed = hit
            .as_ref()
            .is_some_and(|h| h.value.min(tau) >= target - slack(target));
        easc.push(EascCheck {
            epsilon,
            delta,
            last_bin,
            iteration_limit: limit,
            hit,
            passed,
        });
    }
    Ok(VerifyReport {
        optimum,
        greedy,
        easc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::{random_instance, RandomCoverageSpec};

    #[test]
    fn bound_formula() {
        assert!((iteration_bound(4, 3) - std::f64::consts::E * 48.0).abs() < 1e-12);
        assert!((cost_factor(0.5) - (1.0 + 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn random_instances_pass() {
        for seed in 0..20 {
            let inst = random_instance(&RandomCoverageSpec {
                n: 9,
                m: 15,
                density: 0.25,
                cost_spread: 5.0,
                tau_fraction: 0.8,
                seed,
            })
            .unwrap();
            let report = verify_instance(&inst, &[0.05, 0.1, 0.25], seed, 10.0).unwrap();
            assert!(report.optimum.certified);
            assert!(report.passed(), "seed {seed}: {report:?}");
        }
    }

    #[test]
    fn zero_threshold_skips_easc() {
        let inst = random_instance(&RandomCoverageSpec {
            n: 5,
            m: 6,
            density: 0.5,
            cost_spread: 2.0,
            tau_fraction: 0.0,
            seed: 1,
        })
        .unwrap();
        let report = verify_instance(&inst, &[0.1], 1, 10.0).unwrap();
        assert!(report.easc.is_empty());
        assert!(report.passed());
        assert!(verify_instance(&inst, &[1.0], 1, 10.0).is_err());
    }
}
