//! Ollivier-Ricci curvature of hyperedges.
//!
//! For a hyperedge `h` with members `x_1..x_s`,
//! `kappa(h) = 1 - W_h / d_h` where `W_h` sums `W1(mu_i, mu_j)` and `d_h`
//! sums `d(x_i, x_j)` over all member pairs `i < j`.
//!
//! `W1` depends only on the vertex pair, not on the hyperedge, so batch
//! evaluation solves each distinct pair once. The cost of a full pass is
//! dominated by the transport problems, roughly `O(E * D^3)` for `E` member
//! pairs and average degree `D`.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{hyperedge_length_with, DistanceCache, Hypergraph, VertexId};
use crate::measure::{build_measure, ProbabilityMeasure};
use crate::transport::wasserstein1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeCurvature {
    pub index: usize,
    pub size: usize,
    pub weight: f64,
    /// `W_h`
    pub transport: f64,
    /// `d_h`
    pub length: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub alpha: f64,
    pub edges: Vec<EdgeCurvature>,
}

impl CurvatureReport {
    pub fn kappas(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.kappa).collect()
    }
}

/// Lazily built measures and distances for one weight vector.
struct Context<'g> {
    graph: &'g Hypergraph,
    alpha: f64,
    dist: DistanceCache<'g>,
    measures: Vec<OnceLock<ProbabilityMeasure>>,
}

impl<'g> Context<'g> {
    fn new(graph: &'g Hypergraph, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(Self {
            graph,
            alpha,
            dist: DistanceCache::new(graph),
            measures: (0..graph.num_vertices()).map(|_| OnceLock::new()).collect(),
        })
    }

    fn measure(&self, x: VertexId) -> Result<&ProbabilityMeasure> {
        if let Some(mu) = self.measures[x].get() {
            return Ok(mu);
        }
        let mu = build_measure(self.graph, x, self.alpha)?;
        Ok(self.measures[x].get_or_init(|| mu))
    }

    /// `W1(mu_u, mu_v)`, always solved with the smaller id as source.
    fn pair_transport(&self, u: VertexId, v: VertexId) -> Result<f64> {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let (cost, _) = wasserstein1(self.measure(lo)?, self.measure(hi)?, &self.dist)?;
        Ok(cost)
    }

    fn assemble(&self, l: usize, mut transport: impl FnMut(VertexId, VertexId) -> Result<f64>) -> Result<EdgeCurvature> {
        let members = self.graph.members(l);
        let mut total = 0.0;
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                total += transport(members[i], members[j])?;
            }
        }
        let length = hyperedge_length_with(self.graph, &self.dist, l);
        Ok(EdgeCurvature {
            index: l,
            size: members.len(),
            weight: self.graph.weight(l),
            transport: total,
            length,
            kappa: 1.0 - total / length,
        })
    }
}

/// Curvature of hyperedge `l`.
pub fn hyperedge_curvature(g: &Hypergraph, l: usize, alpha: f64) -> Result<EdgeCurvature> {
    let ctx = Context::new(g, alpha)?;
    ctx.assemble(l, |u, v| ctx.pair_transport(u, v))
}

/// Curvature of every hyperedge. Distinct member pairs are solved in
/// parallel; the result does not depend on evaluation order.
pub fn all_curvatures(g: &Hypergraph, alpha: f64) -> Result<CurvatureReport> {
    let ctx = Context::new(g, alpha)?;
    let mut pairs = BTreeSet::new();
    for members in g.edges() {
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                let (a, b) = (members[i], members[j]);
                pairs.insert(if a < b { (a, b) } else { (b, a) });
            }
        }
    }
    let pairs: Vec<(VertexId, VertexId)> = pairs.into_iter().collect();
    let costs: Vec<f64> = pairs
        .par_iter()
        .map(|&(u, v)| ctx.pair_transport(u, v))
        .collect::<Result<_>>()?;
    let lookup = |u: VertexId, v: VertexId| -> Result<f64> {
        let key = if u < v { (u, v) } else { (v, u) };
        pairs
            .binary_search(&key)
            .map(|i| costs[i])
            .map_err(|_| Error::Internal(format!("pair {key:?} missing from batch")))
    };
    let edges = (0..g.num_edges())
        .map(|l| ctx.assemble(l, lookup))
        .collect::<Result<_>>()?;
    Ok(CurvatureReport { alpha, edges })
}
