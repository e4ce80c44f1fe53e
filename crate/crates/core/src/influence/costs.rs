use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::graph::DirectedGraph;
use crate::error::{Error, Result};

/// Per-vertex seeding costs `1 + (1 + |ξ|)·d`, with `d` the out-degree and
/// `ξ ~ N(0, σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeNoiseCosts {
    pub costs: Vec<f64>,
    pub sigma: f64,
    pub seed: u64,
}

/// Draws one `ξ` per vertex in vertex order from a ChaCha8 stream seeded
/// with `seed` (ziggurat normal sampling).
pub fn degree_noise_costs(
    graph: &DirectedGraph,
    sigma: f64,
    seed: u64,
) -> Result<DegreeNoiseCosts> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::Domain(format!(
            "noise sigma {sigma} must be finite and >= 0"
        )));
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::Domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let costs = (0..graph.vertex_count())
        .map(|v| {
            let xi: f64 = normal.sample(&mut rng);
            noisy_degree_cost(graph.out_degree(v), xi)
        })
        .collect();
    Ok(DegreeNoiseCosts { costs, sigma, seed })
}

/// The cost formula for one vertex.
pub fn noisy_degree_cost(out_degree: usize, xi: f64) -> f64 {
    1.0 + (1.0 + xi.abs()) * out_degree as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::influence::random_graph;

    #[test]
    fn formula() {
        assert_eq!(noisy_degree_cost(2, 0.5), 4.0);
        assert_eq!(noisy_degree_cost(2, -0.5), 4.0);
        assert_eq!(noisy_degree_cost(0, 3.0), 1.0);
    }

    #[test]
    fn zero_sigma_is_one_plus_degree() {
        let g = random_graph(200, 3.0, 0.1, 1).unwrap();
        let c = degree_noise_costs(&g, 0.0, 5).unwrap();
        for v in 0..200 {
            assert_eq!(c.costs[v], 1.0 + g.out_degree(v) as f64);
        }
    }

    #[test]
    fn costs_respect_bounds_and_seed() {
        let g = random_graph(300, 2.0, 0.1, 2).unwrap();
        let a = degree_noise_costs(&g, 0.5, 7).unwrap();
        assert_eq!(a, degree_noise_costs(&g, 0.5, 7).unwrap());
        for v in 0..300 {
            let d = g.out_degree(v) as f64;
            assert!(a.costs[v] >= 1.0 + d);
            if d == 0.0 {
                assert_eq!(a.costs[v], 1.0);
            }
        }
        // E|ξ| = σ·sqrt(2/π) ≈ 0.399 for σ = 0.5
        let (num, den) = (0..300)
            .filter(|&v| g.out_degree(v) > 0)
            .fold((0.0, 0.0), |(s, k), v| {
                let d = g.out_degree(v) as f64;
                (s + (a.costs[v] - 1.0) / d - 1.0, k + 1.0)
            });
        assert!((num / den - 0.5 * (2.0 / std::f64::consts::PI).sqrt()).abs() < 0.05);
        assert!(degree_noise_costs(&g, -1.0, 7).is_err());
    }
}
