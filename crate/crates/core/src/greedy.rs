//! Bicriteria greedy: repeatedly add the element with the best ratio of
//! truncated marginal gain to cost until `f(A) >= (1 - ε)τ`.
//!
//! With `ε > 0` the returned set satisfies `c(A) <= (ln(1/ε) + 1) c(A*)`.
//! With `ε = 0` this is the classic greedy, used to bound `c(A*)` from above.

use crate::error::{Error, Result};
use crate::oracle::{Instance, SubmodularOracle};
use crate::subset::Subset;

/// State after one greedy addition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyStep {
    pub element: usize,
    /// `c(A_i)` of the prefix ending with `element`.
    pub cost: f64,
    /// Unclamped `f(A_i)`.
    pub value: f64,
    /// Evaluations spent so far, including this step.
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyResult {
    pub solution: Subset,
    /// Elements in the order they were added.
    pub order: Vec<usize>,
    pub cost: f64,
    /// Unclamped `f(A)`.
    pub f_value: f64,
    /// `f(∅)`, the value before the first addition.
    pub initial_value: f64,
    pub evaluations: u64,
    /// `false` when the run stopped because no element had positive gain
    /// before reaching `(1 - ε)τ`.
    pub reached_target: bool,
    pub steps: Vec<GreedyStep>,
}

/// Runs the greedy algorithm with `epsilon` in `[0, 1)`.
///
/// Fails with [`Error::StepLimitExceeded`] if the target is still unmet after
/// `max_steps` additions.
pub fn run_greedy<O: SubmodularOracle>(
    instance: &Instance<O>,
    epsilon: f64,
    max_steps: usize,
) -> Result<GreedyResult> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain(format!(
            "greedy epsilon {epsilon} not in [0, 1)"
        )));
    }
    let n = instance.n();
    let tau = instance.tau();
    let target = (1.0 - epsilon) * tau;

    let mut solution = Subset::empty(n);
    let mut order = Vec::new();
    let mut steps = Vec::new();
    let mut buffer = Vec::with_capacity(n);
    let initial_value = instance.value(&solution);
    let mut value = initial_value;
    let mut evaluations = 1u64;
    let mut reached_target = true;

    while value < target {
        if order.len() >= max_steps {
            return Err(Error::StepLimitExceeded {
                max_steps,
                reached: value,
                target,
            });
        }
        let best = instance.best_ratio_with_buffer(&solution, Some(value.min(tau)), &mut buffer);
        evaluations += n as u64;
        if best.ratio <= 0.0 {
            reached_target = false;
            break;
        }
        solution.insert(best.element);
        order.push(best.element);
        value = best.extended_value;
        steps.push(GreedyStep {
            element: best.element,
            cost: instance.cost(&solution),
            value,
            evaluations,
        });
    }

    Ok(GreedyResult {
        cost: instance.cost(&solution),
        solution,
        order,
        f_value: value,
        initial_value,
        evaluations,
        reached_target,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::{random_instance, CoverageFunction, RandomCoverageSpec};
    use crate::verify::brute_force_optimum;

    fn example(tau: f64) -> Instance<CoverageFunction> {
        // a -> {1,2} c=1, b -> {3,4} c=1, c -> {1,2,3} c=1.5
        let f = CoverageFunction::new(vec![1.0; 4], vec![vec![0, 1], vec![2, 3], vec![0, 1, 2]])
            .unwrap();
        Instance::new(f, vec![1.0, 1.0, 1.5], tau).unwrap()
    }

    #[test]
    fn hand_traced_example() {
        let inst = example(4.0);
        let res = run_greedy(&inst, 0.0, 3).unwrap();
        assert_eq!(res.order, vec![0, 1]);
        assert_eq!(res.cost, 2.0);
        assert_eq!(res.f_value, 4.0);
        assert!(res.reached_target);
        // f(∅) + two scans of n = 3
        assert_eq!(res.evaluations, 7);
        assert_eq!(inst.evaluation_count(), 7);
    }

    #[test]
    fn zero_target_returns_empty_set() {
        let res = run_greedy(&example(0.0), 0.5, 3).unwrap();
        assert!(res.solution.is_empty());
        assert_eq!(res.cost, 0.0);
        assert_eq!(res.evaluations, 1);
    }

    #[test]
    fn single_element_instance() {
        let f = CoverageFunction::new(vec![2.0], vec![vec![0]]).unwrap();
        let inst = Instance::new(f, vec![3.0], 2.0).unwrap();
        let res = run_greedy(&inst, 0.0, 1).unwrap();
        assert_eq!(res.order, vec![0]);
        assert_eq!(res.f_value, 2.0);
    }

    #[test]
    fn step_limit_is_reported() {
        let err = run_greedy(&example(4.0), 0.0, 1).unwrap_err();
        assert!(matches!(err, Error::StepLimitExceeded { max_steps: 1, .. }));
    }

    #[test]
    fn rejects_epsilon_outside_range() {
        assert!(run_greedy(&example(4.0), 1.0, 3).is_err());
        assert!(run_greedy(&example(4.0), -0.1, 3).is_err());
    }

    fn small_instances(count: u64) -> impl Iterator<Item = Instance<CoverageFunction>> {
        (0..count).map(|seed| {
            random_instance(&RandomCoverageSpec {
                n: 5 + (seed as usize % 6),
                m: 12,
                density: 0.25,
                cost_spread: 4.0,
                tau_fraction: 0.9,
                seed: 1000 + seed,
            })
            .unwrap()
        })
    }

    #[test]
    fn prefix_cost_effectiveness_and_step_gain() {
        for inst in small_instances(60) {
            let opt = brute_force_optimum(&inst).unwrap();
            if opt.cost == 0.0 {
                continue;
            }
            let tau = inst.tau();
            let res = run_greedy(&inst, 0.0, inst.n()).unwrap();
            let mut prev_value = res.initial_value.min(tau);
            for (i, step) in res.steps.iter().enumerate() {
                let value = step.value.min(tau);
                // gain at this step is at least c(added)/c(A*) of the remaining gap
                let gain = value - prev_value;
                let added_cost = inst.costs()[step.element];
                assert!(gain >= added_cost / opt.cost * (tau - prev_value) - 1e-9);
                // every proper prefix is as cost-effective as A*
                if i + 1 < res.steps.len() {
                    let phi = step.cost / (tau / (tau - value)).ln();
                    assert!(
                        phi <= opt.cost + 1e-9,
                        "prefix {i}: phi {phi} > {}",
                        opt.cost
                    );
                }
                prev_value = value;
            }
        }
    }

    #[test]
    fn bicriteria_bound_holds() {
        for inst in small_instances(40) {
            let opt = brute_force_optimum(&inst).unwrap();
            for eps in [0.05, 0.1, 0.25] {
                let res = run_greedy(&inst, eps, inst.n()).unwrap();
                assert!(res.f_value >= (1.0 - eps) * inst.tau() - 1e-9);
                assert!(res.cost <= ((1.0 / eps).ln() + 1.0) * opt.cost + 1e-9);
                assert_eq!(res.cost, inst.cost(&res.solution));
                assert_eq!(
                    Subset::from_indices(inst.n(), res.order.iter().copied()),
                    res.solution
                );
            }
        }
    }
}
