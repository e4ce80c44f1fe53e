//! POM: Pareto optimization over `(f, c)`.
//!
//! The archive holds mutually non-dominated solutions. A mutated child is
//! kept unless some archived solution strictly dominates it; once kept, every
//! archived solution it weakly dominates is dropped. `f` is clamped at a
//! threshold `τ'` before comparisons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::easc::DEFAULT_TRACE_STRIDE;
use crate::error::{Error, Result};
use crate::mutation::BitFlipMutation;
use crate::oracle::{Instance, SubmodularOracle};
use crate::subset::Subset;
use crate::trace::TraceRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    None,
    Weak,
    Strict,
}

/// How `a = (f, c)` relates to `b`: weak iff `f(b) <= f(a)` and
/// `c(a) <= c(b)`; strict iff weak with at least one inequality strict.
pub fn dominates(a: (f64, f64), b: (f64, f64)) -> Dominance {
    let (fa, ca) = a;
    let (fb, cb) = b;
    if fb <= fa && ca <= cb {
        if fb < fa || ca < cb {
            Dominance::Strict
        } else {
            Dominance::Weak
        }
    } else {
        Dominance::None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PomConfig {
    /// Clamping threshold `τ'`; at most the instance's `τ`.
    pub tau_prime: f64,
    pub iterations: u64,
    pub seed: u64,
    pub trace_stride: u64,
}

impl PomConfig {
    pub fn new(tau_prime: f64, iterations: u64, seed: u64) -> Self {
        PomConfig {
            tau_prime,
            iterations,
            seed,
            trace_stride: DEFAULT_TRACE_STRIDE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoEntry {
    pub set: Subset,
    /// Unclamped `f`.
    pub value: f64,
    /// `min(f, τ')`, the value used for domination.
    pub clamped: f64,
    pub cost: f64,
}

impl ParetoEntry {
    pub fn objectives(&self) -> (f64, f64) {
        (self.clamped, self.cost)
    }
}

/// Non-dominated archive, sorted by increasing clamped `f` with strictly
/// increasing cost.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoPopulation {
    entries: Vec<ParetoEntry>,
    tau_prime: f64,
}

impl ParetoPopulation {
    pub fn entries(&self) -> &[ParetoEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tau_prime(&self) -> f64 {
        self.tau_prime
    }

    /// Cheapest entry with `f >= τ'`.
    pub fn best_feasible(&self) -> Option<&ParetoEntry> {
        // all feasible entries share clamped f = τ', so there is at most one
        self.entries.last().filter(|e| e.clamped >= self.tau_prime)
    }

    /// Keeps `entry` unless an archived entry strictly dominates it, then
    /// removes the entries it weakly dominates. Returns the removed entries,
    /// or `None` if `entry` was rejected.
    fn offer(&mut self, entry: ParetoEntry) -> Option<Vec<ParetoEntry>> {
        let (f, c) = entry.objectives();
        // Costs increase with f, so among entries with f_e >= f the first is
        // the cheapest and the only candidate for dominating the newcomer.
        let at_or_above = self.entries.partition_point(|e| e.clamped < f);
        if let Some(e) = self.entries.get(at_or_above) {
            if dominates(e.objectives(), (f, c)) == Dominance::Strict {
                return None;
            }
        }
        // Entries with f_e <= f form a prefix; those with c_e >= c are its tail.
        let end = self.entries.partition_point(|e| e.clamped <= f);
        let start = self.entries[..end].partition_point(|e| e.cost < c);
        let removed: Vec<ParetoEntry> = self
            .entries
            .splice(start..end, std::iter::once(entry))
            .collect();
        Some(removed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PomStep {
    pub candidate: (f64, f64),
    pub accepted: bool,
    pub removed: Vec<ParetoEntry>,
}

/// A single POM run, advanced one iteration at a time.
pub struct Pom<'a, O> {
    instance: &'a Instance<O>,
    population: ParetoPopulation,
    mutation: BitFlipMutation,
    rng: ChaCha8Rng,
    iteration: u64,
    evaluations: u64,
    max_population: usize,
}

impl<'a, O: SubmodularOracle> Pom<'a, O> {
    /// Validates `τ'` and seeds the archive with `∅` (one evaluation).
    pub fn new(instance: &'a Instance<O>, config: &PomConfig) -> Result<Self> {
        let tau_prime = config.tau_prime;
        if !(tau_prime.is_finite() && tau_prime >= 0.0 && tau_prime <= instance.tau()) {
            return Err(Error::Domain(format!(
                "tau' = {tau_prime} must lie in [0, tau = {}]",
                instance.tau()
            )));
        }
        let mut run = Pom {
            instance,
            population: ParetoPopulation {
                entries: Vec::new(),
                tau_prime,
            },
            mutation: BitFlipMutation::new(instance.n()),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            iteration: 0,
            evaluations: 0,
            max_population: 1,
        };
        let empty = run.evaluate(Subset::empty(instance.n()));
        run.population.entries.push(empty);
        Ok(run)
    }

    fn evaluate(&mut self, set: Subset) -> ParetoEntry {
        let value = self.instance.value(&set);
        self.evaluations += 1;
        ParetoEntry {
            cost: self.instance.cost(&set),
            clamped: value.min(self.population.tau_prime),
            value,
            set,
        }
    }

    pub fn step(&mut self) -> PomStep {
        let entries = &self.population.entries;
        let parent = &entries[self.rng.random_range(0..entries.len())];
        let child = self.mutation.apply(&parent.set, &mut self.rng);
        let entry = self.evaluate(child);
        let candidate = entry.objectives();
        let outcome = self.population.offer(entry);
        self.iteration += 1;
        self.max_population = self.max_population.max(self.population.len());
        PomStep {
            candidate,
            accepted: outcome.is_some(),
            removed: outcome.unwrap_or_default(),
        }
    }

    pub fn population(&self) -> &ParetoPopulation {
        &self.population
    }

    pub fn into_population(self) -> ParetoPopulation {
        self.population
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Largest archive size seen so far.
    pub fn max_population(&self) -> usize {
        self.max_population
    }

    pub fn trace_row(&self) -> TraceRow {
        let best = self.population.best_feasible();
        TraceRow {
            iteration: self.iteration,
            evaluations: self.evaluations,
            best_feasible_cost: best.map(|e| e.cost),
            best_feasible_f: best.map(|e| e.value),
            population_size: self.population.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PomRun {
    pub population: ParetoPopulation,
    pub trace: Vec<TraceRow>,
    pub evaluations: u64,
    pub max_population: usize,
}

/// Runs POM for `config.iterations` iterations with the same trace schedule
/// as EASC.
pub fn run_pom_with<O: SubmodularOracle>(
    instance: &Instance<O>,
    config: &PomConfig,
    mut on_row: impl FnMut(&TraceRow),
) -> Result<PomRun> {
    if config.trace_stride == 0 {
        return Err(Error::Config("trace stride must be positive".into()));
    }
    let mut run = Pom::new(instance, config)?;
    on_row(&run.trace_row());
    while run.iteration() < config.iterations {
        run.step();
        if run.iteration() % config.trace_stride == 0 || run.iteration() == config.iterations {
            on_row(&run.trace_row());
        }
    }
    Ok(PomRun {
        evaluations: run.evaluations(),
        max_population: run.max_population(),
        population: run.into_population(),
        trace: Vec::new(),
    })
}

pub fn run_pom<O: SubmodularOracle>(instance: &Instance<O>, config: &PomConfig) -> Result<PomRun> {
    let mut trace = Vec::new();
    let mut run = run_pom_with(instance, config, |row| trace.push(*row))?;
    run.trace = trace;
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::{random_instance, RandomCoverageSpec};

    #[test]
    fn dominance_examples() {
        assert_eq!(dominates((3.0, 2.0), (2.0, 3.0)), Dominance::Strict);
        assert_eq!(dominates((3.0, 2.0), (3.0, 2.0)), Dominance::Weak);
        assert_eq!(dominates((3.0, 2.0), (4.0, 1.0)), Dominance::None);
        assert_eq!(dominates((3.0, 2.0), (3.0, 5.0)), Dominance::Strict);
    }

    fn entry(f: f64, c: f64) -> ParetoEntry {
        ParetoEntry {
            set: Subset::empty(1),
            value: f,
            clamped: f,
            cost: c,
        }
    }

    fn archive(points: &[(f64, f64)]) -> ParetoPopulation {
        ParetoPopulation {
            entries: points.iter().map(|&(f, c)| entry(f, c)).collect(),
            tau_prime: 10.0,
        }
    }

    #[test]
    fn strictly_dominating_child_removes_incumbents() {
        let mut pop = archive(&[(0.0, 0.0), (2.0, 3.0), (4.0, 5.0), (6.0, 9.0)]);
        let removed = pop.offer(entry(5.0, 2.5)).unwrap();
        let removed: Vec<_> = removed.iter().map(ParetoEntry::objectives).collect();
        assert_eq!(removed, vec![(2.0, 3.0), (4.0, 5.0)]);
        let left: Vec<_> = pop.entries().iter().map(ParetoEntry::objectives).collect();
        assert_eq!(left, vec![(0.0, 0.0), (5.0, 2.5), (6.0, 9.0)]);
    }

    #[test]
    fn dominated_child_is_rejected() {
        let mut pop = archive(&[(0.0, 0.0), (2.0, 3.0)]);
        assert!(pop.offer(entry(1.0, 4.0)).is_none());
        assert!(pop.offer(entry(2.0, 3.5)).is_none());
        assert_eq!(pop.len(), 2);
    }

    #[test]
    fn duplicate_objectives_replace() {
        let mut pop = archive(&[(0.0, 0.0), (2.0, 3.0)]);
        let removed = pop.offer(entry(2.0, 3.0)).unwrap();
        assert_eq!(removed.len(), 1);
        assert_eq!(pop.len(), 2);
    }

    #[test]
    fn zero_iterations() {
        let inst = random_instance(&RandomCoverageSpec {
            n: 6,
            m: 8,
            density: 0.3,
            cost_spread: 2.0,
            tau_fraction: 0.9,
            seed: 3,
        })
        .unwrap();
        let run = run_pom(&inst, &PomConfig::new(inst.tau(), 0, 1)).unwrap();
        assert_eq!(run.population.len(), 1);
        assert!(run.population.entries()[0].set.is_empty());
        assert_eq!(run.trace.len(), 1);
    }

    #[test]
    fn rejects_tau_prime_above_tau() {
        let inst = random_instance(&RandomCoverageSpec {
            n: 6,
            m: 8,
            density: 0.3,
            cost_spread: 2.0,
            tau_fraction: 0.5,
            seed: 3,
        })
        .unwrap();
        assert!(Pom::new(&inst, &PomConfig::new(inst.tau() * 1.5, 10, 1)).is_err());
    }

    #[test]
    fn archive_stays_pairwise_non_dominated() {
        for seed in 0..10 {
            let inst = random_instance(&RandomCoverageSpec {
                n: 10,
                m: 14,
                density: 0.2,
                cost_spread: 4.0,
                tau_fraction: 0.8,
                seed,
            })
            .unwrap();
            let mut run = Pom::new(&inst, &PomConfig::new(inst.tau() * 0.95, 0, seed)).unwrap();
            for _ in 0..2000 {
                let step = run.step();
                let entries = run.population().entries();
                for (i, a) in entries.iter().enumerate() {
                    for (j, b) in entries.iter().enumerate() {
                        if i != j {
                            assert_eq!(dominates(a.objectives(), b.objectives()), Dominance::None);
                        }
                    }
                }
                for w in entries.windows(2) {
                    assert!(w[0].clamped < w[1].clamped && w[0].cost < w[1].cost);
                }
                for r in &step.removed {
                    assert_ne!(dominates(step.candidate, r.objectives()), Dominance::None);
                }
            }
        }
    }
}
