//! Experiment configuration, read from TOML.
//!
//! ```toml
//! algorithm = "easc"
//! tau_fraction = 0.3
//! epsilon = 0.05
//! delta = "auto"
//! iterations = 20000
//! repetitions = 3
//! output = "results/easc"
//!
//! [source]
//! kind = "random_graph"
//! vertices = 2000
//! mean_out_degree = 10.0
//! p = 0.05
//! rr_samples = 50000
//! sigma = 0.5
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer};

use crate::easc::DEFAULT_TRACE_STRIDE;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Easc,
    Pom,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Easc => "easc",
            Algorithm::Pom => "pom",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Algorithm::Greedy),
            "easc" => Ok(Algorithm::Easc),
            "pom" => Ok(Algorithm::Pom),
            other => Err(Error::Config(format!(
                "unknown algorithm `{other}` (expected greedy, easc or pom)"
            ))),
        }
    }
}

/// `δ` for EASC: a fixed value, or `auto` to derive it from a greedy run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaSetting {
    Auto,
    Fixed(f64),
}

impl FromStr for DeltaSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(DeltaSetting::Auto);
        }
        s.parse::<f64>()
            .map(DeltaSetting::Fixed)
            .map_err(|_| Error::Config(format!("delta must be `auto` or a number, found `{s}`")))
    }
}

impl<'de> Deserialize<'de> for DeltaSetting {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Number(x) => Ok(DeltaSetting::Fixed(x)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

fn default_p() -> f64 {
    0.05
}

fn default_rr_samples() -> usize {
    100_000
}

fn default_sigma() -> f64 {
    0.5
}

fn default_one() -> u64 {
    1
}

/// Influence settings shared by both graph sources.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct InfluenceSettings {
    /// Edge activation probability.
    #[serde(default = "default_p")]
    pub p: f64,
    /// Number of RR sets.
    #[serde(default = "default_rr_samples")]
    pub rr_samples: usize,
    #[serde(default = "default_one")]
    pub rr_seed: u64,
    /// Standard deviation of the cost noise.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_one")]
    pub cost_seed: u64,
    /// Binary RR-set cache; reused when its key matches, written otherwise.
    #[serde(default)]
    pub rr_cache: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSource {
    /// A coverage instance in the JSON format of [`super::instance_io`].
    CoverageFile { path: PathBuf },
    RandomCoverage {
        n: usize,
        m: usize,
        density: f64,
        #[serde(default = "default_cost_spread")]
        cost_spread: f64,
        #[serde(default = "default_one")]
        seed: u64,
    },
    /// A SNAP edge list.
    Graph {
        path: PathBuf,
        #[serde(flatten)]
        influence: InfluenceSettings,
    },
    RandomGraph {
        vertices: usize,
        mean_out_degree: f64,
        #[serde(default = "default_one")]
        graph_seed: u64,
        #[serde(flatten)]
        influence: InfluenceSettings,
    },
}

fn default_cost_spread() -> f64 {
    10.0
}

fn default_epsilon() -> f64 {
    0.05
}

fn default_stride() -> u64 {
    DEFAULT_TRACE_STRIDE
}

fn default_true() -> bool {
    true
}

fn default_repetitions() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub source: InstanceSource,
    pub algorithm: Algorithm,
    /// Absolute threshold. Exclusive with `tau_fraction`.
    #[serde(default)]
    pub tau: Option<f64>,
    /// Threshold as a fraction of `f(S)`.
    #[serde(default)]
    pub tau_fraction: Option<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Required for EASC, rejected otherwise.
    #[serde(default)]
    pub delta: Option<DeltaSetting>,
    /// Iterations per run. Exclusive with `budget_factor`.
    #[serde(default)]
    pub iterations: Option<u64>,
    /// Iterations as a multiple of `n·|G|`, `G` the greedy solution.
    #[serde(default)]
    pub budget_factor: Option<f64>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// One seed per repetition; defaults to `1..=repetitions`.
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default = "default_stride")]
    pub trace_stride: u64,
    /// Output directory.
    pub output: PathBuf,
    /// Also write the greedy-normalized trace.
    #[serde(default = "default_true")]
    pub normalize: bool,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml_str(&text)?;
        config.resolve_relative_paths(path.parent().unwrap_or(Path::new("")));
        Ok(config)
    }

    /// Makes input paths relative to the config file's directory.
    fn resolve_relative_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut self.source {
            InstanceSource::CoverageFile { path } => fix(path),
            InstanceSource::Graph { path, influence } => {
                fix(path);
                if let Some(c) = &mut influence.rr_cache {
                    fix(c);
                }
            }
            InstanceSource::RandomGraph { influence, .. } => {
                if let Some(c) = &mut influence.rr_cache {
                    fix(c);
                }
            }
            InstanceSource::RandomCoverage { .. } => {}
        }
    }

    /// The per-repetition seeds.
    pub fn seeds(&self) -> Vec<u64> {
        self.seeds
            .clone()
            .unwrap_or_else(|| (1..=self.repetitions as u64).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if let Some(seeds) = &self.seeds {
            if seeds.len() != self.repetitions {
                return bad(format!(
                    "{} seeds given for {} repetitions",
                    seeds.len(),
                    self.repetitions
                ));
            }
        }
        if self.tau.is_some() && self.tau_fraction.is_some() {
            return bad("set at most one of tau and tau_fraction".into());
        }
        let file_source = matches!(self.source, InstanceSource::CoverageFile { .. });
        if self.tau.is_none() && self.tau_fraction.is_none() && !file_source {
            return bad("one of tau or tau_fraction is required".into());
        }
        if let Some(frac) = self.tau_fraction {
            if !(0.0..=1.0).contains(&frac) {
                return bad(format!("tau_fraction {frac} not in [0, 1]"));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon {} not in (0, 1)", self.epsilon));
        }
        if self.trace_stride == 0 {
            return bad("trace_stride must be positive".into());
        }
        match (self.algorithm, self.delta) {
            (Algorithm::Easc, None) => {
                return bad("easc requires delta (a number or \"auto\")".into())
            }
            (Algorithm::Easc, Some(DeltaSetting::Fixed(d))) if !(d > 0.0 && d < 1.0) => {
                return bad(format!("delta {d} not in (0, 1)"));
            }
            (Algorithm::Easc, _) => {}
            (alg, Some(DeltaSetting::Auto)) => {
                return bad(format!(
                    "delta = \"auto\" is only valid for easc, not {alg}"
                ));
            }
            (alg, Some(DeltaSetting::Fixed(_))) => {
                return bad(format!("delta is only used by easc, not {alg}"));
            }
            (_, None) => {}
        }
        match (self.algorithm, self.iterations, self.budget_factor) {
            (Algorithm::Greedy, None, None) => {}
            (Algorithm::Greedy, ..) => {
                return bad("greedy takes neither iterations nor budget_factor".into());
            }
            (_, Some(_), Some(_)) => {
                return bad("set at most one of iterations and budget_factor".into())
            }
            (_, None, None) => {
                return bad(format!(
                    "{} requires iterations or budget_factor",
                    self.algorithm
                ))
            }
            (_, None, Some(f)) if !(f.is_finite() && f > 0.0) => {
                return bad(format!("budget_factor {f} must be positive"));
            }
            _ => {}
        }
        if let InstanceSource::Graph { influence, .. }
        | InstanceSource::RandomGraph { influence, .. } = &self.source
        {
            if influence.rr_samples == 0 {
                return bad("rr_samples must be positive".into());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
        algorithm = "easc"
        tau_fraction = 0.5
        delta = "auto"
        iterations = 1000
        repetitions = 3
        output = "out"

        [source]
        kind = "random_coverage"
        n = 10
        m = 20
        density = 0.2
    "#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_toml_str(BASE).unwrap();
        c.validate().unwrap();
        assert_eq!(c.algorithm, Algorithm::Easc);
        assert_eq!(c.delta, Some(DeltaSetting::Auto));
        assert_eq!(c.epsilon, 0.05);
        assert_eq!(c.trace_stride, 100);
        assert_eq!(c.seeds(), vec![1, 2, 3]);
        assert!(c.normalize);
        assert!(matches!(
            c.source,
            InstanceSource::RandomCoverage { seed: 1, .. }
        ));
    }

    #[test]
    fn numeric_delta() {
        let c = ExperimentConfig::from_toml_str(&BASE.replace("\"auto\"", "0.25")).unwrap();
        assert_eq!(c.delta, Some(DeltaSetting::Fixed(0.25)));
        assert!(ExperimentConfig::from_toml_str(&BASE.replace("\"auto\"", "\"often\"")).is_err());
    }

    #[test]
    fn auto_delta_only_for_easc() {
        let c = ExperimentConfig::from_toml_str(&BASE.replace("\"easc\"", "\"pom\"")).unwrap();
        let err = c.validate().unwrap_err();
        assert!(
            matches!(err, Error::Config(ref m) if m.contains("auto")),
            "{err}"
        );
    }

    #[test]
    fn invariants() {
        let check = |from: &str, to: &str| {
            ExperimentConfig::from_toml_str(&BASE.replace(from, to))
                .and_then(|c| c.validate())
                .is_err()
        };
        assert!(check("repetitions = 3", "repetitions = 0"));
        assert!(check("repetitions = 3", "repetitions = 3\nseeds = [1, 2]"));
        assert!(check("iterations = 1000", ""));
        assert!(check(
            "iterations = 1000",
            "iterations = 1000\nbudget_factor = 2.0"
        ));
        assert!(check("tau_fraction = 0.5", ""));
        assert!(check("tau_fraction = 0.5", "tau_fraction = 1.5"));
        assert!(check("delta = \"auto\"", ""));
        assert!(check("output", "bogus = 1\noutput"));
        assert!(!check("repetitions = 3", "repetitions = 2\nseeds = [7, 9]"));
    }

    #[test]
    fn graph_source() {
        let text = r#"
            algorithm = "greedy"
            tau = 40.0
            output = "o"
            [source]
            kind = "graph"
            path = "g.txt"
            p = 0.1
            rr_samples = 5000
        "#;
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        c.validate().unwrap();
        match c.source {
            InstanceSource::Graph { path, influence } => {
                assert_eq!(path, PathBuf::from("g.txt"));
                assert_eq!(influence.p, 0.1);
                assert_eq!(influence.rr_samples, 5000);
                assert_eq!(influence.sigma, 0.5);
                assert_eq!(influence.rr_cache, None);
            }
            other => panic!("{other:?}"),
        }
    }
}
