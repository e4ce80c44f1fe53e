use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Directed graph in compressed adjacency form, with a single edge
/// probability shared by every edge under the independent cascade model.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    vertex_count: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<u32>,
    in_offsets: Vec<usize>,
    in_sources: Vec<u32>,
    edge_probability: f64,
}

fn compress(vertex_count: usize, pairs: &[(u32, u32)]) -> (Vec<usize>, Vec<u32>) {
    let mut offsets = vec![0usize; vertex_count + 1];
    for &(from, _) in pairs {
        offsets[from as usize + 1] += 1;
    }
    for v in 0..vertex_count {
        offsets[v + 1] += offsets[v];
    }
    // pairs are sorted by (from, to), so targets come out in order
    let targets = pairs.iter().map(|&(_, to)| to).collect();
    (offsets, targets)
}

impl DirectedGraph {
    /// Builds a graph on `0..vertex_count`; duplicate edges collapse to one.
    ///
    /// `edge_probability` must lie in `[0, 1]`.
    pub fn from_edges<I>(vertex_count: usize, edges: I, edge_probability: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        if !(0.0..=1.0).contains(&edge_probability) {
            return Err(Error::Domain(format!(
                "edge probability {edge_probability} not in [0, 1]"
            )));
        }
        if u32::try_from(vertex_count).is_err() {
            return Err(Error::Domain(format!(
                "{vertex_count} vertices exceed u32 ids"
            )));
        }
        let mut forward: Vec<(u32, u32)> = edges.into_iter().collect();
        if let Some(&(u, v)) = forward
            .iter()
            .find(|&&(u, v)| u as usize >= vertex_count || v as usize >= vertex_count)
        {
            return Err(Error::Domain(format!(
                "edge {u} -> {v} outside a graph of {vertex_count} vertices"
            )));
        }
        forward.sort_unstable();
        forward.dedup();
        let mut backward: Vec<(u32, u32)> = forward.iter().map(|&(u, v)| (v, u)).collect();
        backward.sort_unstable();

        let (out_offsets, out_targets) = compress(vertex_count, &forward);
        let (in_offsets, in_sources) = compress(vertex_count, &backward);
        Ok(DirectedGraph {
            vertex_count,
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
            edge_probability,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn edge_probability(&self) -> f64 {
        self.edge_probability
    }

    /// Same topology with a different edge probability.
    pub fn with_edge_probability(mut self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("edge probability {p} not in [0, 1]")));
        }
        self.edge_probability = p;
        Ok(self)
    }

    pub fn out_neighbors(&self, v: usize) -> &[u32] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn in_neighbors(&self, v: usize) -> &[u32] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    /// All edges `(u, v)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count)
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u as u32, v)))
    }

    /// Hash of the vertex count and edge list (not the probability).
    pub fn fingerprint(&self) -> u64 {
        let mut hasher = Sha256::new();
        hasher.update((self.vertex_count as u64).to_le_bytes());
        for (u, v) in self.edges() {
            hasher.update(u.to_le_bytes());
            hasher.update(v.to_le_bytes());
        }
        let digest = hasher.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("sha256 digest has 32 bytes"))
    }
}

/// Random directed graph: `round(vertices * mean_out_degree)` edges with
/// endpoints drawn uniformly (no self-loops), duplicates collapsed.
pub fn random_graph(
    vertices: usize,
    mean_out_degree: f64,
    edge_probability: f64,
    seed: u64,
) -> Result<DirectedGraph> {
    if vertices < 2 {
        return Err(Error::Domain(
            "a random graph needs at least two vertices".into(),
        ));
    }
    if !(mean_out_degree.is_finite() && mean_out_degree >= 0.0) {
        return Err(Error::Domain(format!(
            "mean out-degree {mean_out_degree} is invalid"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (vertices as f64 * mean_out_degree).round() as usize;
    let n = vertices as u32;
    let edges: Vec<(u32, u32)> = (0..draws)
        .map(|_| {
            let u = rng.random_range(0..n);
            // uniform over the other n - 1 vertices
            let mut v = rng.random_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect();
    DirectedGraph::from_edges(vertices, edges, edge_probability)
}
