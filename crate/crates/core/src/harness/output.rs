//! Trace CSV files: raw per-run traces, the across-run average and the
//! greedy-normalized view.
//!
//! Floats are written in scientific notation with 17 significant digits,
//! `.` as decimal separator and LF line endings. Undefined values are empty.

use std::path::Path;

use crate::error::{Error, Result};
use crate::greedy::GreedyResult;
use crate::trace::TraceRow;

pub const TRACE_HEADER: [&str; 5] = [
    "iteration",
    "evaluations",
    "best_cost",
    "best_f",
    "population_size",
];

pub const AVERAGED_HEADER: [&str; 7] = [
    "iteration",
    "evaluations",
    "mean_best_cost",
    "min_best_cost",
    "max_best_cost",
    "feasible_runs",
    "mean_population_size",
];

pub const NORMALIZED_HEADER: [&str; 2] = ["normalized_evaluations", "normalized_cost"];

/// 17 significant digits, round-trips every finite `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

/// One row per checkpoint, averaged over repetitions.
///
/// The cost columns are defined only once every repetition has a feasible
/// solution at that checkpoint; `min`/`max` are reported alongside the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedRow {
    pub iteration: u64,
    pub evaluations: u64,
    pub mean_best_cost: Option<f64>,
    pub min_best_cost: Option<f64>,
    pub max_best_cost: Option<f64>,
    pub feasible_runs: usize,
    pub mean_population_size: f64,
}

/// Aligns traces checkpoint by checkpoint. All traces must share the same
/// `(iteration, evaluations)` schedule.
pub fn average_traces(traces: &[Vec<TraceRow>]) -> Result<Vec<AveragedRow>> {
    let Some(first) = traces.first() else {
        return Ok(Vec::new());
    };
    for (k, t) in traces.iter().enumerate() {
        let aligned = t.len() == first.len()
            && t.iter()
                .zip(first)
                .all(|(a, b)| a.iteration == b.iteration && a.evaluations == b.evaluations);
        if !aligned {
            return Err(Error::Config(format!(
                "trace of repetition {k} is not aligned with repetition 0"
            )));
        }
    }
    let runs = traces.len();
    Ok((0..first.len())
        .map(|i| {
            let costs: Vec<f64> = traces
                .iter()
                .filter_map(|t| t[i].best_feasible_cost)
                .collect();
            let all = costs.len() == runs;
            AveragedRow {
                iteration: first[i].iteration,
                evaluations: first[i].evaluations,
                mean_best_cost: all.then(|| costs.iter().sum::<f64>() / runs as f64),
                min_best_cost: all.then(|| costs.iter().copied().fold(f64::INFINITY, f64::min)),
                max_best_cost: all.then(|| costs.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
                feasible_runs: costs.len(),
                mean_population_size: traces
                    .iter()
                    .map(|t| t[i].population_size as f64)
                    .sum::<f64>()
                    / runs as f64,
            }
        })
        .collect())
}

/// `(evaluations / (n·|G|), cost / c(G))` for a greedy reference `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedRow {
    pub evaluations: f64,
    pub cost: Option<f64>,
}

pub fn normalize(
    rows: &[AveragedRow],
    n: usize,
    greedy_size: usize,
    greedy_cost: f64,
) -> Result<Vec<NormalizedRow>> {
    let eval_scale = (n * greedy_size) as f64;
    if !(eval_scale > 0.0 && greedy_cost > 0.0) {
        return Err(Error::Domain(format!(
            "normalizers must be positive (n|G| = {eval_scale}, c(G) = {greedy_cost})"
        )));
    }
    Ok(rows
        .iter()
        .map(|r| NormalizedRow {
            evaluations: r.evaluations as f64 / eval_scale,
            cost: r.mean_best_cost.map(|c| c / greedy_cost),
        })
        .collect())
}

/// Trace rows for a greedy run: the empty start and one row per addition.
/// Cost columns are filled only for prefixes with `f >= target`.
pub fn greedy_trace(result: &GreedyResult, target: f64) -> Vec<TraceRow> {
    let feasible = |value: f64, cost: f64| (value >= target).then_some((cost, value));
    let start = feasible(result.initial_value, 0.0);
    std::iter::once(TraceRow {
        iteration: 0,
        evaluations: 1,
        best_feasible_cost: start.map(|s| s.0),
        best_feasible_f: start.map(|s| s.1),
        population_size: 1,
    })
    .chain(result.steps.iter().enumerate().map(|(i, step)| {
        let best = feasible(step.value, step.cost);
        TraceRow {
            iteration: i as u64 + 1,
            evaluations: step.evaluations,
            best_feasible_cost: best.map(|b| b.0),
            best_feasible_f: best.map(|b| b.1),
            population_size: 1,
        }
    }))
    .collect()
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

fn write_rows<const N: usize>(
    path: &Path,
    header: [&str; N],
    rows: impl Iterator<Item = [String; N]>,
) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_trace_csv(path: &Path, rows: &[TraceRow]) -> Result<()> {
    write_rows(
        path,
        TRACE_HEADER,
        rows.iter().map(|r| {
            [
                r.iteration.to_string(),
                r.evaluations.to_string(),
                optional(r.best_feasible_cost),
                optional(r.best_feasible_f),
                r.population_size.to_string(),
            ]
        }),
    )
}

pub fn write_averaged_csv(path: &Path, rows: &[AveragedRow]) -> Result<()> {
    write_rows(
        path,
        AVERAGED_HEADER,
        rows.iter().map(|r| {
            [
                r.iteration.to_string(),
                r.evaluations.to_string(),
                optional(r.mean_best_cost),
                optional(r.min_best_cost),
                optional(r.max_best_cost),
                r.feasible_runs.to_string(),
                format_float(r.mean_population_size),
            ]
        }),
    )
}

pub fn write_normalized_csv(path: &Path, rows: &[NormalizedRow]) -> Result<()> {
    write_rows(
        path,
        NORMALIZED_HEADER,
        rows.iter()
            .map(|r| [format_float(r.evaluations), optional(r.cost)]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(iteration: u64, cost: Option<f64>, pop: usize) -> TraceRow {
        TraceRow {
            iteration,
            evaluations: iteration + 1,
            best_feasible_cost: cost,
            best_feasible_f: cost.map(|c| c * 10.0),
            population_size: pop,
        }
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 12345.678, 1e-300, 2f64.sqrt()] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_float(3.0), "3.0000000000000000e0");
    }

    #[test]
    fn trace_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_trace_csv(&path, &[row(0, None, 1), row(100, Some(2.5), 3)]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "iteration,evaluations,best_cost,best_f,population_size\n\
             0,1,,,1\n\
             100,101,2.5000000000000000e0,2.5000000000000000e1,3\n"
        );
    }

    #[test]
    fn averaging_requires_all_runs_feasible() {
        let a = vec![
            row(0, None, 1),
            row(10, Some(2.0), 2),
            row(20, Some(1.0), 4),
        ];
        let b = vec![row(0, None, 1), row(10, None, 4), row(20, Some(3.0), 6)];
        let avg = average_traces(&[a, b]).unwrap();
        assert_eq!(avg[1].mean_best_cost, None);
        assert_eq!(avg[1].feasible_runs, 1);
        assert_eq!(avg[1].mean_population_size, 3.0);
        assert_eq!(avg[2].mean_best_cost, Some(2.0));
        assert_eq!(avg[2].min_best_cost, Some(1.0));
        assert_eq!(avg[2].max_best_cost, Some(3.0));
    }

    #[test]
    fn misaligned_traces_are_rejected() {
        let a = vec![row(0, None, 1), row(10, None, 1)];
        let b = vec![row(0, None, 1)];
        assert!(average_traces(&[a, b]).is_err());
    }

    #[test]
    fn normalization() {
        let avg = average_traces(&[vec![row(0, None, 1), row(39, Some(6.0), 1)]]).unwrap();
        let norm = normalize(&avg, 10, 2, 3.0).unwrap();
        assert_eq!(
            norm[1],
            NormalizedRow {
                evaluations: 2.0,
                cost: Some(2.0)
            }
        );
        assert_eq!(norm[0].cost, None);
        assert!(normalize(&avg, 10, 0, 3.0).is_err());
    }
}
