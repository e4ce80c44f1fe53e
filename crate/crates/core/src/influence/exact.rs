use rayon::prelude::*;

use super::graph::DirectedGraph;
use crate::error::{Error, Result};
use crate::subset::Subset;

/// Largest edge count [`exact_influence`] will enumerate.
pub const MAX_EXACT_EDGES: usize = 20;

/// Largest vertex count [`exact_influence`] accepts.
pub const MAX_EXACT_VERTICES: usize = 64;

const CHUNK: u32 = 1 << 12;

/// Expected number of active vertices under the independent cascade model,
/// summed over all `2^|E|` live-edge configurations.
pub fn exact_influence(graph: &DirectedGraph, seeds: &Subset) -> Result<f64> {
    Ok(exact_influences(graph, std::slice::from_ref(seeds))?[0])
}

/// [`exact_influence`] for several seed sets, sharing one enumeration of
/// the live-edge configurations.
pub fn exact_influences(graph: &DirectedGraph, seed_sets: &[Subset]) -> Result<Vec<f64>> {
    let edges: Vec<(u32, u32)> = graph.edges().collect();
    if edges.len() > MAX_EXACT_EDGES {
        return Err(Error::BudgetExceeded {
            what: "edge count",
            size: edges.len(),
            limit: MAX_EXACT_EDGES,
        });
    }
    let n = graph.vertex_count();
    if n > MAX_EXACT_VERTICES {
        return Err(Error::BudgetExceeded {
            what: "vertex count",
            size: n,
            limit: MAX_EXACT_VERTICES,
        });
    }
    let masks: Vec<u64> = seed_sets
        .iter()
        .map(|s| {
            if s.universe() != n {
                return Err(Error::Domain(format!(
                    "seed set over {} elements for a graph with {n} vertices",
                    s.universe()
                )));
            }
            Ok(s.iter().fold(0u64, |m, v| m | 1 << v))
        })
        .collect::<Result<_>>()?;

    // P(live configuration) = low[live & low_mask] * high[live >> split]
    let p = graph.edge_probability();
    let split = edges.len() / 2;
    let table = |range: std::ops::Range<usize>| -> Vec<f64> {
        (0..1usize << range.len())
            .map(|bits| {
                range
                    .clone()
                    .enumerate()
                    .map(|(k, _)| if bits >> k & 1 == 1 { p } else { 1.0 - p })
                    .product()
            })
            .collect()
    };
    let low = table(0..split);
    let high = table(split..edges.len());
    let low_mask = (1u32 << split) - 1;

    let total = 1u32 << edges.len();
    let chunk_sums: Vec<Vec<f64>> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut sums = vec![0.0; masks.len()];
            let mut out = vec![0u64; n];
            for live in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let probability = low[(live & low_mask) as usize] * high[(live >> split) as usize];
                if probability == 0.0 {
                    continue;
                }
                out.iter_mut().for_each(|o| *o = 0);
                for (e, &(from, to)) in edges.iter().enumerate() {
                    if live >> e & 1 == 1 {
                        out[from as usize] |= 1 << to;
                    }
                }
                for (sum, &seeds) in sums.iter_mut().zip(&masks) {
                    let mut active = seeds;
                    let mut frontier = seeds;
                    while frontier != 0 {
                        let v = frontier.trailing_zeros() as usize;
                        frontier &= frontier - 1;
                        let new = out[v] & !active;
                        active |= new;
                        frontier |= new;
                    }
                    *sum += probability * active.count_ones() as f64;
                }
            }
            sums
        })
        .collect();
    Ok((0..masks.len())
        .map(|k| chunk_sums.iter().map(|s| s[k]).sum())
        .collect())
}
