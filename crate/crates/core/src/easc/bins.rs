//! Bin layout over `[0, τ]`, the cost-effectiveness measure and the
//! within-bin comparison.
//!
//! Bin `i < r` holds values in `[(1 - δ^i)τ, (1 - δ^{i+1})τ)`; the final bin
//! `r` holds every value `>= (1 - ε)τ`. `r` is the smallest integer with
//! `δ^r <= ε`, i.e. `ceil(log_δ ε)`, so the last interior bin's upper edge
//! never falls below the final-bin threshold. The threshold test is applied
//! first and settles the overlap.

use crate::error::{Error, Result};
use crate::oracle::{Instance, SubmodularOracle};

/// Default cap on the final bin index.
pub const DEFAULT_MAX_BINS: u64 = 1 << 32;

/// Relative slack used when deciding whether `log_δ ε` is an integer.
const INTEGRAL_SLACK: f64 = 1e-12;

fn check_unit_interval(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} = {value} must lie in (0, 1)"
        )))
    }
}

/// `r = ceil(log_δ ε)`, the index of the final bin, with the default cap.
pub fn final_bin_index(epsilon: f64, delta: f64) -> Result<usize> {
    final_bin_index_capped(epsilon, delta, DEFAULT_MAX_BINS)
}

/// `r = ceil(log_δ ε)`; fails with [`Error::Overflow`] when `r > cap`.
pub fn final_bin_index_capped(epsilon: f64, delta: f64, cap: u64) -> Result<usize> {
    check_unit_interval("epsilon", epsilon)?;
    check_unit_interval("delta", delta)?;
    let ratio = epsilon.ln() / (delta - 1.0).ln_1p();
    if !ratio.is_finite() || ratio > cap as f64 {
        return Err(Error::Overflow {
            requested: if ratio.is_finite() {
                ratio.ceil() as u64
            } else {
                u64::MAX
            },
            cap,
        });
    }
    let mut r = (ratio.ceil() as u64).max(1);
    // log_δ ε may land a hair above an integer it equals exactly
    if r > 1 && delta.powf((r - 1) as f64) <= epsilon * (1.0 + INTEGRAL_SLACK) {
        r -= 1;
    }
    if r > cap {
        return Err(Error::Overflow { requested: r, cap });
    }
    usize::try_from(r).map_err(|_| Error::Overflow { requested: r, cap })
}

/// Bin of a solution with value `f`; see [`BinLayout::bin_of`].
pub fn bin_of(f: f64, tau: f64, epsilon: f64, delta: f64, last_bin: usize) -> usize {
    BinLayout {
        tau,
        epsilon,
        delta,
        last_bin,
    }
    .bin_of(f)
}

/// Cost-effectiveness `φ`: `c` in bin 0 and in the final bin, otherwise
/// `c / ln(τ / (τ - f))`. Lower is better.
pub fn phi(cost: f64, f: f64, bin: usize, last_bin: usize, tau: f64) -> Result<f64> {
    if bin == 0 || bin == last_bin {
        return Ok(cost);
    }
    if bin > last_bin {
        return Err(Error::Domain(format!(
            "bin {bin} beyond final bin {last_bin}"
        )));
    }
    if f >= tau {
        return Err(Error::Domain(format!(
            "interior bin {bin} with f = {f} >= tau = {tau}"
        )));
    }
    Ok(cost / -(-f / tau).ln_1p())
}

/// The bins for one `(τ, ε, δ)` triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinLayout {
    tau: f64,
    epsilon: f64,
    delta: f64,
    last_bin: usize,
}

impl BinLayout {
    pub fn new(tau: f64, epsilon: f64, delta: f64, max_bins: u64) -> Result<Self> {
        Ok(BinLayout {
            tau,
            epsilon,
            delta,
            last_bin: final_bin_index_capped(epsilon, delta, max_bins)?,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Final bin index `r`; there are `r + 1` bins.
    pub fn last_bin(&self) -> usize {
        self.last_bin
    }

    /// `(1 - ε)τ`, the near-feasibility threshold of the final bin.
    pub fn threshold(&self) -> f64 {
        (1.0 - self.epsilon) * self.tau
    }

    /// Lower edge `(1 - δ^i)τ` of interior bin `i`.
    pub fn lower_edge(&self, bin: usize) -> f64 {
        (1.0 - self.delta.powf(bin as f64)) * self.tau
    }

    /// Bin of a solution with value `f` (clamped at τ).
    ///
    /// The interval index comes from a logarithm and is then corrected by
    /// comparing against the interval edges directly, so a value exactly on
    /// an edge lands in the higher bin.
    pub fn bin_of(&self, f: f64) -> usize {
        let value = f.min(self.tau);
        if value >= self.threshold() {
            return self.last_bin;
        }
        let top = self.last_bin - 1;
        let estimate = (-value / self.tau).ln_1p() / (self.delta - 1.0).ln_1p();
        let mut i = if estimate.is_finite() && estimate > 0.0 {
            (estimate.floor() as usize).min(top)
        } else {
            0
        };
        while i > 0 && self.lower_edge(i) > value {
            i -= 1;
        }
        while i < top && value >= self.lower_edge(i + 1) {
            i += 1;
        }
        i
    }

    /// `φ` for a solution in `bin`; rejects interior bins holding a value at
    /// or above the final-bin threshold.
    pub fn phi(&self, cost: f64, f: f64, bin: usize) -> Result<f64> {
        if bin != 0 && bin < self.last_bin && f >= self.threshold() {
            return Err(Error::Domain(format!(
                "interior bin {bin} with f = {f} >= (1 - eps) tau = {}",
                self.threshold()
            )));
        }
        phi(cost, f, bin, self.last_bin, self.tau)
    }
}

/// Cached evaluation of a solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    /// Unclamped `f`.
    pub value: f64,
    pub cost: f64,
    pub bin: usize,
    pub phi: f64,
}

/// `Y ≺ X`: same bin and `φ(X) < φ(Y)`, i.e. `X` is strictly more cost-effective.
pub fn precedes(y: &Score, x: &Score) -> bool {
    y.bin == x.bin && x.phi < y.phi
}

/// `δ = 1 - c_min / min(B, c(S))` for an upper bound `B` on `c(A*)`.
pub fn choose_delta<O: SubmodularOracle>(instance: &Instance<O>, bound: f64) -> Result<f64> {
    let c_min = instance.c_min();
    let bound = bound.min(instance.total_cost());
    if bound.is_nan() || bound <= c_min {
        return Err(Error::Domain(format!(
            "cost bound {bound} must exceed c_min = {c_min}"
        )));
    }
    Ok(1.0 - c_min / bound)
}
