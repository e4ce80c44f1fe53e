//! EASC: an evolutionary algorithm for submodular cover.
//!
//! The population keeps at most one solution per bin of `f`-value. Each
//! iteration mutates a uniformly chosen member, evaluates the child once, and
//! lets it replace the incumbent of its bin unless the incumbent is strictly
//! more cost-effective. The empty set is the initial population and, having
//! cost zero, is never evicted.

mod bins;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use bins::{
    bin_of, choose_delta, final_bin_index, final_bin_index_capped, phi, precedes, BinLayout, Score,
    DEFAULT_MAX_BINS,
};

use crate::error::{Error, Result};
use crate::mutation::BitFlipMutation;
use crate::oracle::{Instance, SubmodularOracle};
use crate::subset::Subset;
use crate::trace::TraceRow;

/// Default number of iterations between trace rows.
pub const DEFAULT_TRACE_STRIDE: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EascConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub iterations: u64,
    pub seed: u64,
    pub trace_stride: u64,
    /// Largest admissible final bin index.
    pub max_bins: u64,
}

impl EascConfig {
    pub fn new(epsilon: f64, delta: f64, iterations: u64, seed: u64) -> Self {
        EascConfig {
            epsilon,
            delta,
            iterations,
            seed,
            trace_stride: DEFAULT_TRACE_STRIDE,
            max_bins: DEFAULT_MAX_BINS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub set: Subset,
    pub score: Score,
}

/// Bin-indexed population: at most one entry per bin.
///
/// Entries are kept in insertion order; a replacement reuses the slot of the
/// evicted entry, so the population never shrinks.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    entries: Vec<Entry>,
    slot_of_bin: HashMap<usize, usize>,
    last_bin: usize,
}

impl Population {
    fn new(last_bin: usize) -> Self {
        Population {
            entries: Vec::new(),
            slot_of_bin: HashMap::new(),
            last_bin,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, bin: usize) -> Option<&Entry> {
        self.slot_of_bin.get(&bin).map(|&slot| &self.entries[slot])
    }

    pub fn last_bin(&self) -> usize {
        self.last_bin
    }

    /// The entry of the final bin, the only one with `f >= (1 - ε)τ`.
    pub fn best_feasible(&self) -> Option<&Entry> {
        self.get(self.last_bin)
    }

    /// Inserts `entry` unless the incumbent of its bin is strictly more
    /// cost-effective. Returns whether it was inserted and the evicted entry.
    fn offer(&mut self, entry: Entry) -> (bool, Option<Entry>) {
        match self.slot_of_bin.get(&entry.score.bin) {
            Some(&slot) => {
                if precedes(&entry.score, &self.entries[slot].score) {
                    (false, None)
                } else {
                    (
                        true,
                        Some(std::mem::replace(&mut self.entries[slot], entry)),
                    )
                }
            }
            None => {
                self.slot_of_bin.insert(entry.score.bin, self.entries.len());
                self.entries.push(entry);
                (true, None)
            }
        }
    }
}

/// What happened in one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub parent_bin: usize,
    pub candidate: Score,
    pub accepted: bool,
    /// Incumbent removed from the candidate's bin, if any.
    pub evicted: Option<Entry>,
}

/// A single EASC run, advanced one iteration at a time.
pub struct Easc<'a, O> {
    instance: &'a Instance<O>,
    layout: BinLayout,
    population: Population,
    mutation: BitFlipMutation,
    rng: ChaCha8Rng,
    iteration: u64,
    evaluations: u64,
}

impl<'a, O: SubmodularOracle> Easc<'a, O> {
    /// Validates the configuration and seeds the population with `∅`
    /// (one evaluation).
    pub fn new(instance: &'a Instance<O>, config: &EascConfig) -> Result<Self> {
        if instance.tau() <= 0.0 {
            return Err(Error::Domain("EASC needs a positive threshold".into()));
        }
        let layout = BinLayout::new(
            instance.tau(),
            config.epsilon,
            config.delta,
            config.max_bins,
        )?;
        let mut run = Easc {
            instance,
            layout,
            population: Population::new(layout.last_bin()),
            mutation: BitFlipMutation::new(instance.n()),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            iteration: 0,
            evaluations: 0,
        };
        let empty = run.evaluate(Subset::empty(instance.n()));
        run.population.offer(empty);
        Ok(run)
    }

    fn evaluate(&mut self, set: Subset) -> Entry {
        let value = self.instance.value(&set);
        let cost = self.instance.cost(&set);
        self.evaluations += 1;
        let bin = self.layout.bin_of(value);
        let phi = self
            .layout
            .phi(cost, value, bin)
            .expect("bin_of never places a value above the threshold in an interior bin");
        Entry {
            set,
            score: Score {
                value,
                cost,
                bin,
                phi,
            },
        }
    }

    /// One iteration: select, mutate, evaluate once, offer to the population.
    pub fn step(&mut self) -> StepOutcome {
        let parent = &self.population.entries[self.rng.random_range(0..self.population.len())];
        let parent_bin = parent.score.bin;
        let child = self.mutation.apply(&parent.set, &mut self.rng);
        let entry = self.evaluate(child);
        let candidate = entry.score;
        let (accepted, evicted) = self.population.offer(entry);
        self.iteration += 1;
        StepOutcome {
            parent_bin,
            candidate,
            accepted,
            evicted,
        }
    }

    pub fn layout(&self) -> &BinLayout {
        &self.layout
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn into_population(self) -> Population {
        self.population
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// Evaluations of `f` made by this run, including `f(∅)`.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Checkpoint built from cached values; makes no oracle calls.
    pub fn trace_row(&self) -> TraceRow {
        let best = self.population.best_feasible();
        TraceRow {
            iteration: self.iteration,
            evaluations: self.evaluations,
            best_feasible_cost: best.map(|e| e.score.cost),
            best_feasible_f: best.map(|e| e.score.value),
            population_size: self.population.len(),
        }
    }
}

/// Population and trace of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct EascRun {
    pub layout: BinLayout,
    pub population: Population,
    pub trace: Vec<TraceRow>,
    pub evaluations: u64,
}

/// Runs EASC for `config.iterations` iterations, passing a trace row to
/// `on_row` at iteration 0, every `trace_stride` iterations, and at the end.
pub fn run_easc_with<O: SubmodularOracle>(
    instance: &Instance<O>,
    config: &EascConfig,
    mut on_row: impl FnMut(&TraceRow),
) -> Result<EascRun> {
    if config.trace_stride == 0 {
        return Err(Error::Config("trace stride must be positive".into()));
    }
    let mut run = Easc::new(instance, config)?;
    on_row(&run.trace_row());
    while run.iteration() < config.iterations {
        run.step();
        if run.iteration() % config.trace_stride == 0 || run.iteration() == config.iterations {
            on_row(&run.trace_row());
        }
    }
    Ok(EascRun {
        layout: *run.layout(),
        evaluations: run.evaluations(),
        population: run.into_population(),
        trace: Vec::new(),
    })
}

/// [`run_easc_with`], collecting the trace.
pub fn run_easc<O: SubmodularOracle>(
    instance: &Instance<O>,
    config: &EascConfig,
) -> Result<EascRun> {
    let mut trace = Vec::new();
    let mut run = run_easc_with(instance, config, |row| trace.push(*row))?;
    run.trace = trace;
    Ok(run)
}
