//! Weighted coverage functions and a seeded generator of random coverage instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::{Instance, SubmodularOracle};
use crate::subset::Subset;

/// `f(X)` = total weight of the universe items covered by the members of `X`.
///
/// Monotone and submodular for any non-negative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageFunction {
    weights: Vec<f64>,
    covers: Vec<Vec<u32>>,
}

impl CoverageFunction {
    /// `weights[j]` is the weight of universe item `j`; `covers[x]` lists the
    /// items covered by ground-set element `x`. Duplicate items in a cover list
    /// are removed.
    pub fn new(weights: Vec<f64>, mut covers: Vec<Vec<u32>>) -> Result<Self> {
        if let Some((j, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidInstance(format!(
                "weight of item {j} is {w}, weights must be finite and positive"
            )));
        }
        let m = weights.len();
        for (x, items) in covers.iter_mut().enumerate() {
            if let Some(&j) = items.iter().find(|&&j| j as usize >= m) {
                return Err(Error::InvalidInstance(format!(
                    "element {x} covers item {j} but the universe has {m} items"
                )));
            }
            items.sort_unstable();
            items.dedup();
        }
        Ok(CoverageFunction { weights, covers })
    }

    pub fn universe_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn covers(&self) -> &[Vec<u32>] {
        &self.covers
    }
}

impl SubmodularOracle for CoverageFunction {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn evaluate(&self, set: &Subset) -> f64 {
        let mut covered = vec![false; self.weights.len()];
        for x in set {
            for &j in &self.covers[x] {
                covered[j as usize] = true;
            }
        }
        // Summed in item order so the value does not depend on how X was built.
        covered
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| **c)
            .map(|(_, w)| w)
            .sum()
    }
}

/// Parameters of [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomCoverageSpec {
    /// Ground-set size.
    pub n: usize,
    /// Universe size.
    pub m: usize,
    /// Probability that an element covers a given item.
    pub density: f64,
    /// Costs are uniform on `[1, cost_spread]`.
    pub cost_spread: f64,
    /// `tau = tau_fraction * f(S)`.
    pub tau_fraction: f64,
    pub seed: u64,
}

/// Draws a random weighted-coverage instance; deterministic per seed.
///
/// Item weights are uniform on `[1, 2)`. Cover sets are redrawn until at
/// least one item is covered, so `f(S) > 0`.
pub fn random_instance(spec: &RandomCoverageSpec) -> Result<Instance<CoverageFunction>> {
    let RandomCoverageSpec {
        n,
        m,
        density,
        cost_spread,
        tau_fraction,
        seed,
    } = *spec;
    if n == 0 || m == 0 {
        return Err(Error::InvalidInstance("n and m must be positive".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidInstance(format!(
            "density {density} not in (0, 1]"
        )));
    }
    if !(cost_spread.is_finite() && cost_spread >= 1.0) {
        return Err(Error::InvalidInstance(format!(
            "cost spread {cost_spread} must be >= 1"
        )));
    }
    if !(0.0..=1.0).contains(&tau_fraction) {
        return Err(Error::InvalidInstance(format!(
            "tau fraction {tau_fraction} not in [0, 1]"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..m).map(|_| rng.random_range(1.0..2.0)).collect();
    let covers = loop {
        let covers: Vec<Vec<u32>> = (0..n)
            .map(|_| (0..m as u32).filter(|_| rng.random_bool(density)).collect())
            .collect();
        if covers.iter().any(|c| !c.is_empty()) {
            break covers;
        }
    };
    let costs: Vec<f64> = (0..n)
        .map(|_| {
            if cost_spread > 1.0 {
                rng.random_range(1.0..=cost_spread)
            } else {
                1.0
            }
        })
        .collect();
    let function = CoverageFunction::new(weights, covers)?;
    let full = function.evaluate(&Subset::full(n));
    Instance::new(function, costs, (tau_fraction * full).min(full))
}
