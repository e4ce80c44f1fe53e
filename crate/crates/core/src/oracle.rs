//! Problem instances and the submodular oracle contract.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// A monotone submodular set function `f: 2^S -> R>=0` over `S = {0, .., n-1}`.
///
/// Implementations must be deterministic: the same subset always yields the
/// same value. Sampled oracles satisfy this by fixing their sample set at
/// construction.
pub trait SubmodularOracle: Send + Sync {
    /// Size `n` of the ground set.
    fn ground_size(&self) -> usize;

    /// `f(set)`.
    fn evaluate(&self, set: &Subset) -> f64;

    /// Fills `out` with `f(set ∪ {x})` for every `x` in `0..n`.
    ///
    /// Counts as `n` evaluations. Oracles that can share work across the
    /// candidates override this; the default calls [`evaluate`](Self::evaluate)
    /// once per element.
    fn extension_values(&self, set: &Subset, out: &mut Vec<f64>) {
        out.clear();
        let mut scratch = set.clone();
        for x in 0..self.ground_size() {
            if scratch.insert(x) {
                out.push(self.evaluate(&scratch));
                scratch.remove(x);
            } else {
                out.push(self.evaluate(&scratch));
            }
        }
    }
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn evaluate(&self, set: &Subset) -> f64 {
        (**self).evaluate(set)
    }
    fn extension_values(&self, set: &Subset, out: &mut Vec<f64>) {
        (**self).extension_values(set, out)
    }
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for Box<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn evaluate(&self, set: &Subset) -> f64 {
        (**self).evaluate(set)
    }
    fn extension_values(&self, set: &Subset, out: &mut Vec<f64>) {
        (**self).extension_values(set, out)
    }
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for Arc<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn evaluate(&self, set: &Subset) -> f64 {
        (**self).evaluate(set)
    }
    fn extension_values(&self, set: &Subset, out: &mut Vec<f64>) {
        (**self).extension_values(set, out)
    }
}

/// The element chosen by [`Instance::best_ratio_element`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestRatio {
    pub element: usize,
    /// `Δf_τ(X, element) / c(element)`.
    pub ratio: f64,
    /// Unclamped `f(X ∪ {element})`.
    pub extended_value: f64,
}

/// An instance of minimum cost submodular cover: minimise the modular cost
/// `c(X)` subject to `f(X) >= tau`.
///
/// Every call that goes through the instance (`value`, `value_tau`,
/// `marginal_gain_tau`, `best_ratio_element`) is counted in an atomic
/// evaluation counter shared by all users of the instance.
pub struct Instance<O> {
    oracle: O,
    costs: Vec<f64>,
    tau: f64,
    full_value: f64,
    c_min: f64,
    c_max: f64,
    total_cost: f64,
    evaluations: AtomicU64,
}

impl<O> std::fmt::Debug for Instance<O> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Instance")
            .field("n", &self.costs.len())
            .field("tau", &self.tau)
            .field("full_value", &self.full_value)
            .field("c_min", &self.c_min)
            .field("c_max", &self.c_max)
            .finish_non_exhaustive()
    }
}

impl<O: SubmodularOracle> Instance<O> {
    /// Validates and builds an instance.
    ///
    /// Requires `n >= 1`, one finite positive cost per element, and
    /// `0 <= tau <= f(S)`.
    pub fn new(oracle: O, costs: Vec<f64>, tau: f64) -> Result<Self> {
        let n = oracle.ground_size();
        if n == 0 {
            return Err(Error::InvalidInstance("ground set is empty".into()));
        }
        if costs.len() != n {
            return Err(Error::InvalidInstance(format!(
                "{} costs for a ground set of {n} elements",
                costs.len()
            )));
        }
        if let Some((i, c)) = costs
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.is_finite() && **c > 0.0))
        {
            return Err(Error::InvalidInstance(format!(
                "cost of element {i} is {c}, costs must be finite and positive"
            )));
        }
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::InvalidInstance(format!(
                "threshold {tau} must be finite and non-negative"
            )));
        }
        let full_value = oracle.evaluate(&Subset::full(n));
        if tau > full_value {
            return Err(Error::InvalidInstance(format!(
                "threshold {tau} exceeds f(S) = {full_value}"
            )));
        }
        let c_min = costs.iter().copied().fold(f64::INFINITY, f64::min);
        let c_max = costs.iter().copied().fold(0.0, f64::max);
        let total_cost = costs.iter().sum();
        Ok(Instance {
            oracle,
            costs,
            tau,
            full_value,
            c_min,
            c_max,
            total_cost,
            evaluations: AtomicU64::new(0),
        })
    }

    /// Same oracle and costs with a different threshold.
    pub fn with_tau(self, tau: f64) -> Result<Self> {
        Instance::new(self.oracle, self.costs, tau)
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn into_oracle(self) -> O {
        self.oracle
    }

    /// `f(S)`, computed once at construction (not counted).
    pub fn full_value(&self) -> f64 {
        self.full_value
    }

    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    /// `c(S)`.
    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    /// Total number of counted oracle evaluations made through this instance.
    pub fn evaluation_count(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    fn count(&self, k: u64) {
        self.evaluations.fetch_add(k, Ordering::Relaxed);
    }

    /// Modular cost: the sum of member costs, accumulated in index order.
    pub fn cost(&self, set: &Subset) -> f64 {
        debug_assert_eq!(set.universe(), self.n());
        set.iter().map(|i| self.costs[i]).sum()
    }

    /// `f(set)`; one evaluation.
    pub fn value(&self, set: &Subset) -> f64 {
        debug_assert_eq!(set.universe(), self.n());
        self.count(1);
        self.oracle.evaluate(set)
    }

    /// `f_τ(set) = min(f(set), τ)`; one evaluation.
    pub fn value_tau(&self, set: &Subset) -> f64 {
        self.value(set).min(self.tau)
    }

    /// `f_τ(X ∪ {x}) - f_τ(X)`.
    ///
    /// Two evaluations, or none when `x` is already a member (the gain is 0).
    pub fn marginal_gain_tau(&self, set: &Subset, x: usize) -> f64 {
        assert!(x < self.n(), "element {x} out of range");
        if set.contains(x) {
            return 0.0;
        }
        let base = self.value_tau(set);
        self.value_tau(&set.with(x)) - base
    }

    /// The element maximising `Δf_τ(X, x) / c(x)` over all of `S`, members
    /// included. Ties go to the lowest index.
    ///
    /// `base_tau` is `f_τ(X)` when the caller already has it. Costs `n`
    /// evaluations, plus one when `base_tau` is `None`.
    pub fn best_ratio_element(&self, set: &Subset, base_tau: Option<f64>) -> BestRatio {
        let mut values = Vec::with_capacity(self.n());
        self.best_ratio_with_buffer(set, base_tau, &mut values)
    }

    pub(crate) fn best_ratio_with_buffer(
        &self,
        set: &Subset,
        base_tau: Option<f64>,
        values: &mut Vec<f64>,
    ) -> BestRatio {
        let base = base_tau.unwrap_or_else(|| self.value_tau(set));
        self.count(self.n() as u64);
        self.oracle.extension_values(set, values);
        debug_assert_eq!(values.len(), self.n());

        let mut best = BestRatio {
            element: 0,
            ratio: f64::NEG_INFINITY,
            extended_value: 0.0,
        };
        for (x, (&v, &c)) in values.iter().zip(&self.costs).enumerate() {
            let ratio = (v.min(self.tau) - base) / c;
            if ratio > best.ratio {
                best = BestRatio {
                    element: x,
                    ratio,
                    extended_value: v,
                };
            }
        }
        best
    }
}
