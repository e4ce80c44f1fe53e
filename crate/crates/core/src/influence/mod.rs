//! Influence under the independent cascade model: graphs, reverse influence
//! sampling, exact expectation for tiny graphs, and the noisy-degree cost model.

mod costs;
mod exact;
mod graph;
mod rr;

pub use costs::{degree_noise_costs, noisy_degree_cost, DegreeNoiseCosts};
pub use exact::{exact_influence, exact_influences, MAX_EXACT_EDGES, MAX_EXACT_VERTICES};
pub use graph::{random_graph, DirectedGraph};
pub use rr::{
    generate_rr_sets, load_or_generate, read_rr_cache, ris_influence, write_rr_cache, CacheKey,
    RRSetIndex, RisOracle,
};
