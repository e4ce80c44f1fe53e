//! Reverse-reachable sets and the sampled influence oracle built on them.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::graph::DirectedGraph;
use crate::error::{Error, Result};
use crate::oracle::SubmodularOracle;
use crate::subset::Subset;

/// RR sets generated from one random stream.
const SETS_PER_STREAM: usize = 1024;

/// A fixed collection of reverse-reachable sets with an inverted index from
/// vertex to the ids of the sets containing it.
#[derive(Debug, Clone, PartialEq)]
pub struct RRSetIndex {
    vertex_count: usize,
    set_offsets: Vec<usize>,
    members: Vec<u32>,
    vertex_offsets: Vec<usize>,
    containing: Vec<u32>,
    seed: u64,
}

/// Samples one RR set into `out`: a uniform root plus every vertex reached
/// by a reverse BFS in which each in-edge is live with probability `p`.
/// Each edge is examined at most once per set.
fn sample_rr_set<R: Rng>(
    graph: &DirectedGraph,
    rng: &mut R,
    stamp: &mut [u32],
    mark: u32,
    out: &mut Vec<u32>,
) {
    let p = graph.edge_probability();
    let root = rng.random_range(0..graph.vertex_count() as u32);
    let start = out.len();
    out.push(root);
    stamp[root as usize] = mark;
    let mut head = start;
    while head < out.len() {
        let v = out[head] as usize;
        head += 1;
        for &u in graph.in_neighbors(v) {
            if stamp[u as usize] != mark && rng.random::<f64>() < p {
                stamp[u as usize] = mark;
                out.push(u);
            }
        }
    }
}

/// Generates `m` RR sets.
///
/// Sets are produced in blocks of 1024; block `k` draws from stream `k` of a
/// ChaCha8 generator seeded with `seed`, so the output does not depend on
/// the number of worker threads.
pub fn generate_rr_sets(graph: &DirectedGraph, m: usize, seed: u64) -> Result<RRSetIndex> {
    if m == 0 {
        return Err(Error::Domain("at least one RR set is required".into()));
    }
    if u32::try_from(m).is_err() {
        return Err(Error::Domain(format!("{m} RR sets exceed u32 ids")));
    }
    if graph.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = graph.vertex_count();
    let blocks: Vec<(Vec<usize>, Vec<u32>)> = (0..m.div_ceil(SETS_PER_STREAM))
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block as u64);
            let count = SETS_PER_STREAM.min(m - block * SETS_PER_STREAM);
            let mut stamp = vec![0u32; n];
            let mut lengths = Vec::with_capacity(count);
            let mut members = Vec::new();
            for i in 0..count {
                let before = members.len();
                sample_rr_set(graph, &mut rng, &mut stamp, i as u32 + 1, &mut members);
                lengths.push(members.len() - before);
            }
            (lengths, members)
        })
        .collect();

    let mut set_offsets = Vec::with_capacity(m + 1);
    set_offsets.push(0);
    let mut members = Vec::new();
    for (lengths, block_members) in blocks {
        for len in lengths {
            set_offsets.push(set_offsets.last().unwrap() + len);
        }
        members.extend(block_members);
    }
    Ok(RRSetIndex::from_parts(n, set_offsets, members, seed))
}

impl RRSetIndex {
    fn from_parts(
        vertex_count: usize,
        set_offsets: Vec<usize>,
        members: Vec<u32>,
        seed: u64,
    ) -> Self {
        let mut vertex_offsets = vec![0usize; vertex_count + 1];
        for &v in &members {
            vertex_offsets[v as usize + 1] += 1;
        }
        for v in 0..vertex_count {
            vertex_offsets[v + 1] += vertex_offsets[v];
        }
        let mut fill = vertex_offsets.clone();
        let mut containing = vec![0u32; members.len()];
        for id in 0..set_offsets.len() - 1 {
            for &v in &members[set_offsets[id]..set_offsets[id + 1]] {
                containing[fill[v as usize]] = id as u32;
                fill[v as usize] += 1;
            }
        }
        RRSetIndex {
            vertex_count,
            set_offsets,
            members,
            vertex_offsets,
            containing,
            seed,
        }
    }

    /// Builds an index from explicit sets (used for fixtures and cache loads).
    pub fn from_sets(vertex_count: usize, sets: &[Vec<u32>], seed: u64) -> Result<Self> {
        let mut set_offsets = vec![0];
        let mut members = Vec::new();
        for (id, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::Domain(format!("RR set {id} is empty")));
            }
            let mut set = set.clone();
            set.sort_unstable();
            set.dedup();
            if let Some(&v) = set.iter().find(|&&v| v as usize >= vertex_count) {
                return Err(Error::Domain(format!(
                    "RR set {id} contains vertex {v} outside 0..{vertex_count}"
                )));
            }
            members.extend(set);
            set_offsets.push(members.len());
        }
        if sets.is_empty() {
            return Err(Error::Domain("at least one RR set is required".into()));
        }
        Ok(RRSetIndex::from_parts(
            vertex_count,
            set_offsets,
            members,
            seed,
        ))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn sample_count(&self) -> usize {
        self.set_offsets.len() - 1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Members of RR set `id`; the root comes first for generated sets.
    pub fn set(&self, id: usize) -> &[u32] {
        &self.members[self.set_offsets[id]..self.set_offsets[id + 1]]
    }

    /// Ids of the RR sets containing `v`, increasing.
    pub fn sets_containing(&self, v: usize) -> &[u32] {
        &self.containing[self.vertex_offsets[v]..self.vertex_offsets[v + 1]]
    }

    /// Total number of (set, member) pairs.
    pub fn total_size(&self) -> usize {
        self.members.len()
    }

    fn mark_covered(&self, seeds: &Subset, covered: &mut [u64]) -> usize {
        let mut count = 0;
        for v in seeds {
            for &id in self.sets_containing(v) {
                let (w, b) = (id as usize / 64, id % 64);
                if covered[w] >> b & 1 == 0 {
                    covered[w] |= 1 << b;
                    count += 1;
                }
            }
        }
        count
    }

    /// Number of RR sets hit by `seeds`.
    pub fn covered_count(&self, seeds: &Subset) -> usize {
        let mut covered = vec![0u64; self.sample_count().div_ceil(64)];
        self.mark_covered(seeds, &mut covered)
    }

    fn scale(&self, count: usize) -> f64 {
        self.vertex_count as f64 * count as f64 / self.sample_count() as f64
    }

    /// `|V| · (sets hit by X) / m`.
    pub fn influence(&self, seeds: &Subset) -> f64 {
        self.scale(self.covered_count(seeds))
    }
}

/// `|V| · (RR sets intersecting X) / m`.
pub fn ris_influence(index: &RRSetIndex, seeds: &Subset, vertex_count: usize) -> f64 {
    vertex_count as f64 * index.covered_count(seeds) as f64 / index.sample_count() as f64
}

/// Sampled influence oracle over a fixed set of RR sets. Monotone and
/// submodular in `X` for that fixed sample.
#[derive(Debug, Clone)]
pub struct RisOracle {
    index: Arc<RRSetIndex>,
}

impl RisOracle {
    pub fn new(index: Arc<RRSetIndex>) -> Self {
        RisOracle { index }
    }

    pub fn index(&self) -> &RRSetIndex {
        &self.index
    }
}

impl SubmodularOracle for RisOracle {
    fn ground_size(&self) -> usize {
        self.index.vertex_count()
    }

    fn evaluate(&self, set: &Subset) -> f64 {
        self.index.influence(set)
    }

    fn extension_values(&self, set: &Subset, out: &mut Vec<f64>) {
        let index = &*self.index;
        let mut covered = vec![0u64; index.sample_count().div_ceil(64)];
        let base = index.mark_covered(set, &mut covered);
        out.clear();
        out.extend((0..index.vertex_count()).map(|x| {
            let count = if set.contains(x) {
                base
            } else {
                base + index
                    .sets_containing(x)
                    .iter()
                    .filter(|&&id| covered[id as usize / 64] >> (id % 64) & 1 == 0)
                    .count()
            };
            index.scale(count)
        }));
    }
}

/// Identity of a cached RR-set collection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheKey {
    pub graph_hash: u64,
    pub edge_probability: f64,
    pub sample_count: u64,
    pub seed: u64,
}

impl CacheKey {
    pub fn for_graph(graph: &DirectedGraph, sample_count: usize, seed: u64) -> Self {
        CacheKey {
            graph_hash: graph.fingerprint(),
            edge_probability: graph.edge_probability(),
            sample_count: sample_count as u64,
            seed,
        }
    }
}

const CACHE_MAGIC: &[u8; 8] = b"MCSCRRS\0";
const CACHE_VERSION: u32 = 1;

/// Writes `index` to a little-endian binary cache:
/// magic, version, key (graph hash, p, m, seed), vertex count, member
/// count, `m + 1` set offsets as `u64`, then members as `u32`.
pub fn write_rr_cache(path: &Path, key: &CacheKey, index: &RRSetIndex) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    let mut put = |bytes: &[u8]| w.write_all(bytes).map_err(io);
    put(CACHE_MAGIC)?;
    put(&CACHE_VERSION.to_le_bytes())?;
    put(&key.graph_hash.to_le_bytes())?;
    put(&key.edge_probability.to_bits().to_le_bytes())?;
    put(&key.sample_count.to_le_bytes())?;
    put(&key.seed.to_le_bytes())?;
    put(&(index.vertex_count as u64).to_le_bytes())?;
    put(&(index.members.len() as u64).to_le_bytes())?;
    for &o in &index.set_offsets {
        put(&(o as u64).to_le_bytes())?;
    }
    for &v in &index.members {
        put(&v.to_le_bytes())?;
    }
    w.flush().map_err(io)
}

/// Reads a cache written by [`write_rr_cache`].
pub fn read_rr_cache(path: &Path) -> Result<(CacheKey, RRSetIndex)> {
    let bad = |message: String| Error::Cache {
        path: path.to_path_buf(),
        message,
    };
    let mut r = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
    let mut take = |len: usize| -> Result<Vec<u8>> {
        let mut buf = vec![0u8; len];
        r.read_exact(&mut buf)
            .map_err(|e| bad(format!("truncated file: {e}")))?;
        Ok(buf)
    };
    if take(8)? != CACHE_MAGIC {
        return Err(bad("not an RR-set cache".into()));
    }
    let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
    if version != CACHE_VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let mut u64_field = || -> Result<u64> { Ok(u64::from_le_bytes(take(8)?.try_into().unwrap())) };
    let key = CacheKey {
        graph_hash: u64_field()?,
        edge_probability: f64::from_bits(u64_field()?),
        sample_count: u64_field()?,
        seed: u64_field()?,
    };
    let vertex_count = u64_field()? as usize;
    let member_count = u64_field()? as usize;
    let m = key.sample_count as usize;
    let offsets: Vec<usize> = take(8 * (m + 1))?
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()) as usize)
        .collect();
    let members: Vec<u32> = take(4 * member_count)?
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let consistent = offsets.first() == Some(&0)
        && offsets.last() == Some(&member_count)
        && offsets.windows(2).all(|w| w[0] < w[1])
        && members.iter().all(|&v| (v as usize) < vertex_count);
    if !consistent {
        return Err(bad("corrupt offsets or members".into()));
    }
    Ok((
        key,
        RRSetIndex::from_parts(vertex_count, offsets, members, key.seed),
    ))
}

/// Loads the cache at `path` if its key matches, otherwise generates the
/// sets and writes them there.
pub fn load_or_generate(
    graph: &DirectedGraph,
    m: usize,
    seed: u64,
    path: &Path,
) -> Result<RRSetIndex> {
    let key = CacheKey::for_graph(graph, m, seed);
    if path.exists() {
        if let Ok((found, index)) = read_rr_cache(path) {
            if found == key && index.vertex_count() == graph.vertex_count() {
                return Ok(index);
            }
        }
    }
    let index = generate_rr_sets(graph, m, seed)?;
    write_rr_cache(path, &key, &index)?;
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::influence::random_graph;

    #[test]
    fn fixture_estimate() {
        // vertices 1..=5 mapped to 0..5
        let index =
            RRSetIndex::from_sets(5, &[vec![0], vec![0, 1], vec![2], vec![3, 4]], 0).unwrap();
        assert_eq!(ris_influence(&index, &Subset::from_indices(5, [0]), 5), 2.5);
        assert_eq!(ris_influence(&index, &Subset::empty(5), 5), 0.0);
        assert_eq!(ris_influence(&index, &Subset::full(5), 5), 5.0);
        assert_eq!(index.sets_containing(0), &[0, 1]);
    }

    #[test]
    fn zero_probability_gives_roots_only() {
        let g = random_graph(50, 3.0, 0.0, 1).unwrap();
        let index = generate_rr_sets(&g, 500, 2).unwrap();
        assert!((0..500).all(|i| index.set(i).len() == 1));
    }

    #[test]
    fn full_probability_gives_reverse_reachability() {
        let g = DirectedGraph::from_edges(5, [(0, 1), (1, 2), (3, 2), (4, 0)], 1.0).unwrap();
        let index = generate_rr_sets(&g, 200, 3).unwrap();
        for i in 0..200 {
            let set = index.set(i);
            let mut sorted = set.to_vec();
            sorted.sort_unstable();
            let expected: Vec<u32> = match set[0] {
                0 => vec![0, 4],
                1 => vec![0, 1, 4],
                2 => vec![0, 1, 2, 3, 4],
                3 => vec![3],
                4 => vec![4],
                _ => unreachable!(),
            };
            assert_eq!(sorted, expected);
        }
    }

    #[test]
    fn singleton_graph() {
        let g = DirectedGraph::from_edges(1, [], 0.5).unwrap();
        let index = generate_rr_sets(&g, 10, 0).unwrap();
        assert!((0..10).all(|i| index.set(i) == [0]));
    }

    #[test]
    fn inverted_index_is_consistent() {
        let g = random_graph(100, 5.0, 0.3, 4).unwrap();
        let index = generate_rr_sets(&g, 3000, 5).unwrap();
        let mut pairs = 0;
        for v in 0..100 {
            for &id in index.sets_containing(v) {
                assert!(index.set(id as usize).contains(&(v as u32)));
                pairs += 1;
            }
        }
        assert_eq!(pairs, index.total_size());
        assert!((0..3000).all(|i| !index.set(i).is_empty()));
    }

    #[test]
    fn generation_is_deterministic() {
        let g = random_graph(100, 5.0, 0.3, 4).unwrap();
        let a = generate_rr_sets(&g, 2500, 5).unwrap();
        let b = generate_rr_sets(&g, 2500, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_rr_sets(&g, 2500, 6).unwrap());
    }

    #[test]
    fn extension_values_match_evaluate() {
        let g = random_graph(60, 4.0, 0.2, 8).unwrap();
        let oracle = RisOracle::new(Arc::new(generate_rr_sets(&g, 5000, 1).unwrap()));
        let set = Subset::from_indices(60, [3, 17, 40]);
        let mut out = Vec::new();
        oracle.extension_values(&set, &mut out);
        for (x, v) in out.iter().enumerate() {
            assert_eq!(*v, oracle.evaluate(&set.with(x)));
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rr.bin");
        let g = random_graph(80, 3.0, 0.2, 2).unwrap();
        let index = load_or_generate(&g, 1500, 9, &path).unwrap();
        let (key, loaded) = read_rr_cache(&path).unwrap();
        assert_eq!(key, CacheKey::for_graph(&g, 1500, 9));
        assert_eq!(loaded, index);
        assert_eq!(load_or_generate(&g, 1500, 9, &path).unwrap(), index);
        // different seed regenerates and overwrites
        let other = load_or_generate(&g, 1500, 10, &path).unwrap();
        assert_ne!(other, index);
        assert_eq!(read_rr_cache(&path).unwrap().0.seed, 10);
    }

    #[test]
    fn corrupt_cache_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rr.bin");
        std::fs::write(&path, b"MCSCRRS\0\x01\0\0\0short").unwrap();
        assert!(matches!(read_rr_cache(&path), Err(Error::Cache { .. })));
        std::fs::write(&path, b"garbage!").unwrap();
        assert!(matches!(read_rr_cache(&path), Err(Error::Cache { .. })));
    }
}
