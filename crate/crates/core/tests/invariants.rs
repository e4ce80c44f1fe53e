//! Instrumented EASC and POM runs with per-iteration invariant checks.

mod common;

use common::varied_instance;
use mcsc_core::easc::{Easc, EascConfig};
use mcsc_core::harness::verify::{cost_factor, delta_for_optimum, slack};
use mcsc_core::pom::{dominates, Dominance, Pom, PomConfig};
use mcsc_core::verify::brute_force_optimum;
use mcsc_core::TraceRow;

fn check_trace(trace: &[TraceRow]) {
    for w in trace.windows(2) {
        assert!(w[1].iteration > w[0].iteration);
        assert!(w[1].evaluations > w[0].evaluations);
        match (w[0].best_feasible_cost, w[1].best_feasible_cost) {
            (Some(a), Some(b)) => assert!(b <= a, "best cost rose from {a} to {b}"),
            (Some(_), None) => panic!("feasible solution lost"),
            _ => {}
        }
    }
}

#[test]
fn easc_population_cap_empty_set_and_accounting() {
    for seed in 0..40 {
        let inst = varied_instance(seed, 4..=12);
        let cfg = EascConfig::new(0.1, 0.6, 3000, seed);
        let mut run = Easc::new(&inst, &cfg).unwrap();
        let r = run.layout().last_bin();
        let ratio = inst.c_max() / inst.c_min();
        let cap_bound = ratio * (1.0f64 / 0.1).ln() * inst.n() as f64 + 1.0;
        let mut trace = vec![run.trace_row()];
        for _ in 0..cfg.iterations {
            let before = inst.evaluation_count();
            run.step();
            assert_eq!(
                inst.evaluation_count() - before,
                1,
                "one evaluation per iteration"
            );
            assert_eq!(run.evaluations(), run.iteration() + 1);
            let pop = run.population();
            assert!(pop.len() <= r + 1);
            if 0.6 <= 1.0 - inst.c_min() / inst.total_cost() {
                assert!((pop.len() as f64) <= cap_bound);
            }
            let zero = pop.get(0).expect("bin 0 occupied");
            assert!(zero.set.is_empty(), "empty set evicted from bin 0");
            let mut bins: Vec<usize> = pop.entries().iter().map(|e| e.score.bin).collect();
            bins.sort_unstable();
            bins.dedup();
            assert_eq!(bins.len(), pop.len(), "two entries share a bin");
            trace.push(run.trace_row());
        }
        check_trace(&trace);
    }
}

#[test]
fn easc_preserves_cost_effectiveness() {
    let mut evictions = 0;
    for seed in 0..60 {
        let inst = varied_instance(seed, 4..=10);
        let opt = brute_force_optimum(&inst).unwrap().cost;
        if opt == 0.0 {
            continue;
        }
        let eps = 0.1;
        let delta = delta_for_optimum(&inst, opt).unwrap();
        let mut run = Easc::new(&inst, &EascConfig::new(eps, delta, 2000, seed)).unwrap();
        let r = run.layout().last_bin();
        let effective = |bin: usize, phi: f64, cost: f64| {
            if bin == r {
                let b = cost_factor(eps) * opt;
                cost <= b + slack(b)
            } else {
                phi <= opt + slack(opt)
            }
        };
        for _ in 0..2000 {
            let out = run.step();
            if let Some(old) = out.evicted {
                evictions += 1;
                if effective(old.score.bin, old.score.phi, old.score.cost) {
                    let new = run.population().get(old.score.bin).unwrap();
                    assert!(
                        effective(new.score.bin, new.score.phi, new.score.cost),
                        "seed {seed}: bin {} lost its cost-effective entry",
                        old.score.bin
                    );
                }
                if old.score.bin == r {
                    assert!(run.population().get(r).unwrap().score.cost <= old.score.cost);
                }
            }
        }
    }
    assert!(evictions > 1000, "too few evictions exercised: {evictions}");
}

#[test]
fn pom_archive_is_pairwise_non_dominated() {
    for seed in 0..30 {
        let inst = varied_instance(seed, 4..=12);
        let cfg = PomConfig::new(0.9 * inst.tau(), 1500, seed);
        let mut run = Pom::new(&inst, &cfg).unwrap();
        let mut trace = vec![run.trace_row()];
        for _ in 0..cfg.iterations {
            let before = inst.evaluation_count();
            run.step();
            assert_eq!(inst.evaluation_count() - before, 1);
            let entries = run.population().entries();
            assert!(
                entries.iter().any(|e| e.set.is_empty()),
                "empty set evicted"
            );
            for (i, a) in entries.iter().enumerate() {
                for b in &entries[i + 1..] {
                    assert_eq!(dominates(a.objectives(), b.objectives()), Dominance::None);
                    assert_eq!(dominates(b.objectives(), a.objectives()), Dominance::None);
                }
            }
            assert!(run.max_population() >= entries.len());
            trace.push(run.trace_row());
        }
        check_trace(&trace);
    }
}

#[test]
fn reruns_are_identical_per_seed() {
    let inst = varied_instance(7, 12..=12);
    let a = mcsc_core::easc::run_easc(&inst, &EascConfig::new(0.05, 0.7, 5000, 3)).unwrap();
    let b = mcsc_core::easc::run_easc(&inst, &EascConfig::new(0.05, 0.7, 5000, 3)).unwrap();
    assert_eq!(a, b);
    let c = mcsc_core::easc::run_easc(&inst, &EascConfig::new(0.05, 0.7, 5000, 4)).unwrap();
    assert_ne!(a.trace, c.trace);
    let cfg = PomConfig::new(inst.tau(), 5000, 3);
    assert_eq!(
        mcsc_core::pom::run_pom(&inst, &cfg).unwrap(),
        mcsc_core::pom::run_pom(&inst, &cfg).unwrap()
    );
}
