//! Solvers for minimum cost submodular cover: find a cheapest set `X` with
//! `f(X) >= τ` for a monotone submodular `f` and a modular cost `c`.
//!
//! - [`easc`]: the bin-based evolutionary algorithm, with a bicriteria
//!   `(ln(1/ε) + 1)` guarantee in expected polynomial iterations.
//! - [`greedy`]: the bicriteria greedy algorithm.
//! - [`pom`]: Pareto optimization baseline.
//! - [`coverage`] and [`verify`]: exact coverage oracles and a brute-force optimum.
//! - [`influence`]: independent cascade influence, estimated from RR sets.
//! - [`harness`]: experiment driver, file formats and trace output.

pub mod coverage;
pub mod easc;
pub mod error;
pub mod greedy;
pub mod harness;
pub mod influence;
pub mod mutation;
pub mod oracle;
pub mod pom;
pub mod subset;
pub mod trace;
pub mod verify;

pub use error::{Error, Result};
pub use oracle::{BestRatio, Instance, SubmodularOracle};
pub use subset::Subset;
pub use trace::TraceRow;
