//! Planted-partition hypergraph generator.
//!
//! A hypergraph lift of the degree-corrected stochastic block model:
//! vertices are split into `q` near-equal blocks and carry propensities
//! `theta_v`, normalized within each block. Hyperedges are drawn one at a
//! time with a size uniform in `size_range`. With probability `p_intra` all
//! members come from one block (chosen proportionally to block size),
//! otherwise members are drawn from the whole vertex set and the draw is
//! repeated until they span at least two blocks. Sampling within the chosen
//! pool is proportional to `theta`, without replacement. Hyperedges are
//! added until the total cardinality reaches its target.
//!
//! Vertices that were never drawn, or components cut off from the rest, are
//! stitched in afterwards: one hyperedge per block joining a representative
//! of every component touching that block, then, if blocks are still apart,
//! one hyperedge joining a representative of every remaining component.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample_weighted;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detection::Partition;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n: usize,
    pub q: usize,
    pub avg_degree: f64,
    /// Target sum of hyperedge sizes; overrides `avg_degree * n`.
    pub total_cardinality: Option<usize>,
    pub p_intra: f64,
    /// Pareto shape of the propensities; 0 gives uniform propensities.
    pub degree_exponent: f64,
    /// Inclusive bounds on hyperedge size.
    pub size_range: (usize, usize),
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            n: 100,
            q: 3,
            avg_degree: 3.0,
            total_cardinality: None,
            p_intra: 0.85,
            degree_exponent: 0.0,
            size_range: (2, 6),
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn target_cardinality(&self) -> usize {
        self.total_cardinality
            .unwrap_or_else(|| (self.avg_degree * self.n as f64).round() as usize)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Block sizes, the first `n % q` blocks one larger.
    pub fn block_sizes(&self) -> Vec<usize> {
        let base = self.n / self.q;
        let extra = self.n % self.q;
        (0..self.q).map(|c| base + usize::from(c < extra)).collect()
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InfeasibleParams(msg));
        if self.q == 0 || self.n < self.q {
            return bad(format!("need n >= q >= 1, got n = {}, q = {}", self.n, self.q));
        }
        if !(self.p_intra > 0.0 && self.p_intra <= 1.0) {
            return bad(format!("p_intra must lie in (0, 1], got {}", self.p_intra));
        }
        let (lo, hi) = self.size_range;
        if lo < 2 || hi < lo {
            return bad(format!("invalid hyperedge size range [{lo}, {hi}]"));
        }
        if !(self.degree_exponent >= 0.0 && self.degree_exponent.is_finite()) {
            return bad(format!(
                "degree exponent must be a nonnegative number, got {}",
                self.degree_exponent
            ));
        }
        let smallest = self.n / self.q;
        if smallest < lo {
            return bad(format!(
                "smallest community has {smallest} vertices, fewer than the minimum hyperedge size {lo}"
            ));
        }
        if self.total_cardinality.is_none() && !(self.avg_degree > 0.0 && self.avg_degree.is_finite()) {
            return bad(format!("average degree must be positive, got {}", self.avg_degree));
        }
        Ok(())
    }
}

/// The three synthetic benchmark series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Series {
    /// Degree sweep: 100 nodes, 3 communities, p_intra 0.85, degree 3..30.
    D1,
    /// Mixing sweep: 100 nodes, 3 communities, degree 3, p_intra 0.15..0.85.
    D2,
    /// Size sweep: 10 communities, degree 10, p_intra 0.85, 100..1000 nodes.
    D3,
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "D1" => Ok(Series::D1),
            "D2" => Ok(Series::D2),
            "D3" => Ok(Series::D3),
            other => Err(Error::InfeasibleParams(format!("unknown series {other:?}"))),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Series::D1 => "D1",
            Series::D2 => "D2",
            Series::D3 => "D3",
        };
        f.write_str(name)
    }
}

pub fn series(id: Series) -> Vec<GenParams> {
    let base = GenParams::default();
    match id {
        Series::D1 => (1..=10)
            .map(|i| GenParams {
                avg_degree: 3.0 * i as f64,
                ..base
            })
            .collect(),
        Series::D2 => (0..8)
            .map(|i| GenParams {
                p_intra: (15 + 10 * i) as f64 / 100.0,
                ..base
            })
            .collect(),
        Series::D3 => (1..=10)
            .map(|i| GenParams {
                n: 100 * i,
                q: 10,
                avg_degree: 10.0,
                ..base
            })
            .collect(),
    }
}

/// Samples a hypergraph and its planted partition.
pub fn generate(params: &GenParams) -> Result<(Hypergraph, Partition)> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n;
    let sizes = params.block_sizes();
    let mut community = Vec::with_capacity(n);
    let mut blocks: Vec<Vec<VertexId>> = Vec::with_capacity(params.q);
    for (c, &size) in sizes.iter().enumerate() {
        let start = community.len();
        community.extend(std::iter::repeat_n(c, size));
        blocks.push((start..start + size).collect());
    }

    let mut theta: Vec<f64> = (0..n)
        .map(|_| {
            if params.degree_exponent > 0.0 {
                let u: f64 = rng.random();
                (1.0 - u).powf(-1.0 / params.degree_exponent)
            } else {
                1.0
            }
        })
        .collect();
    for block in &blocks {
        let total: f64 = block.iter().map(|&v| theta[v]).sum();
        for &v in block {
            theta[v] /= total;
        }
    }
    // Global propensity keeps each block's share equal to its size share.
    let global: Vec<f64> = (0..n)
        .map(|v| theta[v] * sizes[community[v]] as f64 / n as f64)
        .collect();

    let target = params.target_cardinality();
    let (lo, hi) = params.size_range;
    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    let mut total = 0;
    while total < target {
        let s = rng.random_range(lo..=hi);
        let intra = params.q == 1 || rng.random_bool(params.p_intra);
        let mut members = if intra {
            let pick = rng.random_range(0..n);
            let block = &blocks[community[pick]];
            let s = s.min(block.len());
            sample_weighted(&mut rng, block.len(), |i| theta[block[i]], s)
                .map_err(|e| Error::Internal(format!("weighted sampling failed: {e}")))?
                .into_iter()
                .map(|i| block[i])
                .collect::<Vec<_>>()
        } else {
            let s = s.min(n);
            loop {
                let draw: Vec<VertexId> = sample_weighted(&mut rng, n, |v| global[v], s)
                    .map_err(|e| Error::Internal(format!("weighted sampling failed: {e}")))?
                    .into_iter()
                    .collect();
                if draw.iter().any(|&v| community[v] != community[draw[0]]) {
                    break draw;
                }
            }
        };
        members.sort_unstable();
        total += members.len();
        edges.push(members);
    }

    stitch(n, &blocks, &mut edges);
    let m = edges.len();
    let g = Hypergraph::new(n, edges, vec![1.0; m])?;
    Ok((g, Partition::from_labels(&community)))
}

fn stitch(n: usize, blocks: &[Vec<VertexId>], edges: &mut Vec<Vec<VertexId>>) {
    let components = |edges: &[Vec<VertexId>]| {
        Hypergraph::from_parts(n, edges.to_vec(), vec![1.0; edges.len()])
            .expect("generated members are in range and distinct")
            .component_labels()
    };
    let mut labels = components(edges);
    if labels.iter().all(|&c| c == 0) {
        return;
    }
    for block in blocks {
        let mut reps: Vec<VertexId> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for &v in block {
            if !seen.contains(&labels[v]) {
                seen.push(labels[v]);
                reps.push(v);
            }
        }
        if reps.len() >= 2 {
            edges.push(reps);
        }
    }
    labels = components(edges);
    let count = labels.iter().max().map_or(0, |m| m + 1);
    if count > 1 {
        let mut reps = vec![usize::MAX; count];
        for (v, &c) in labels.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = v;
            }
        }
        edges.push(reps);
    }
}

/// A connected random hypergraph for tests and benchmarks: a chain of
/// hyperedges covering a random vertex order, topped up with random
/// hyperedges to at least `m`. Sizes lie in `[2, max_size]`, weights are
/// uniform in `weight_range`.
pub fn random_hypergraph<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    max_size: usize,
    weight_range: (f64, f64),
) -> Hypergraph {
    assert!(n >= 2 && max_size >= 2, "need at least two vertices");
    let max_size = max_size.min(n);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    let mut at = 0;
    while at + 1 < n {
        let s = rng.random_range(2..=max_size).min(n - at);
        edges.push(order[at..at + s].to_vec());
        at += s - 1;
    }
    while edges.len() < m {
        let s = rng.random_range(2..=max_size);
        edges.push(rand::seq::index::sample(rng, n, s).into_vec());
    }
    let (wlo, whi) = weight_range;
    let weights = edges
        .iter()
        .map(|_| if whi > wlo { rng.random_range(wlo..whi) } else { wlo })
        .collect();
    Hypergraph::new(n, edges, weights).expect("chain construction is connected")
}
