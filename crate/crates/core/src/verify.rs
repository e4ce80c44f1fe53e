//! Exhaustive optimum for small instances.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::{Instance, SubmodularOracle};
use crate::subset::Subset;

/// Largest ground set [`brute_force_optimum`] will enumerate.
pub const MAX_BRUTE_FORCE_N: usize = 24;

const CHUNK: u64 = 1 << 14;

/// An optimal solution `A*` and its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSolution {
    pub subset: Subset,
    pub cost: f64,
    /// Set once every one of the `2^n` subsets has been examined.
    pub certified: bool,
}

/// Cost of the subset encoded by `mask`, summed in increasing index order
/// (the same order as [`Instance::cost`]).
fn mask_cost(costs: &[f64], mask: u64) -> f64 {
    let mut total = 0.0;
    let mut rest = mask;
    while rest != 0 {
        total += costs[rest.trailing_zeros() as usize];
        rest &= rest - 1;
    }
    total
}

fn better(a: (f64, u64), b: (f64, u64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Minimum-cost subset with `f(X) >= tau`, by scanning all `2^n` subsets.
///
/// Ties on cost are broken by the smallest mask, where bit `i` of the mask is
/// element `i`. Oracle calls go straight to the oracle and are not counted on
/// the instance. The scan is split across threads by mask range.
pub fn brute_force_optimum<O: SubmodularOracle>(instance: &Instance<O>) -> Result<OptimalSolution> {
    let n = instance.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::BudgetExceeded {
            what: "ground set size",
            size: n,
            limit: MAX_BRUTE_FORCE_N,
        });
    }
    let tau = instance.tau();
    let costs = instance.costs();
    let oracle = instance.oracle();
    let total: u64 = 1 << n;

    let best = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .filter_map(|chunk| {
            let mut best: Option<(f64, u64)> = None;
            for mask in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
                let cost = mask_cost(costs, mask);
                if best.is_some_and(|b| !better((cost, mask), b)) {
                    continue;
                }
                if oracle.evaluate(&Subset::from_mask(n, mask)) >= tau {
                    best = Some((cost, mask));
                }
            }
            best
        })
        .reduce_with(|a, b| if better(b, a) { b } else { a });

    match best {
        Some((cost, mask)) => Ok(OptimalSolution {
            subset: Subset::from_mask(n, mask),
            cost,
            certified: true,
        }),
        None => Err(Error::Infeasible {
            max_value: instance.full_value(),
            tau,
        }),
    }
}
