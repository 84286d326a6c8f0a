//! Lazy random-walk measures on hypergraph vertices.
//!
//! `mu_x^alpha` keeps mass `alpha` at `x` and spreads `1 - alpha` over the
//! neighbours of `x`. Each hyperedge `h` containing `x` receives a share
//! proportional to its weight, split evenly among the `|h| - 1` other
//! members. A neighbour sharing several hyperedges with `x` collects a share
//! from each of them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};

const NORMALIZATION_LIMIT: f64 = 1e-9;

/// A finitely supported probability measure anchored at `owner`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityMeasure {
    owner: VertexId,
    alpha: f64,
    /// Sorted by vertex, strictly positive masses only.
    support: Vec<(VertexId, f64)>,
}

impl ProbabilityMeasure {
    /// A measure from explicit `(vertex, mass)` pairs. Zero masses are
    /// dropped and entries are sorted by vertex; repeated vertices are
    /// merged.
    pub fn from_masses(owner: VertexId, alpha: f64, masses: Vec<(VertexId, f64)>) -> Self {
        Self {
            owner,
            alpha,
            support: merge_sorted(masses),
        }
    }

    /// Unit mass at `v`.
    pub fn dirac(v: VertexId) -> Self {
        Self {
            owner: v,
            alpha: 1.0,
            support: vec![(v, 1.0)],
        }
    }

    pub fn owner(&self) -> VertexId {
        self.owner
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn support(&self) -> &[(VertexId, f64)] {
        &self.support
    }

    pub fn mass(&self, z: VertexId) -> f64 {
        self.support
            .binary_search_by_key(&z, |&(v, _)| v)
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.support.iter().map(|&(_, m)| m).sum()
    }
}

fn merge_sorted(mut masses: Vec<(VertexId, f64)>) -> Vec<(VertexId, f64)> {
    masses.sort_by_key(|&(v, _)| v);
    let mut out: Vec<(VertexId, f64)> = Vec::with_capacity(masses.len());
    for (v, m) in masses {
        match out.last_mut() {
            Some((u, acc)) if *u == v => *acc += m,
            _ => out.push((v, m)),
        }
    }
    out.retain(|&(_, m)| m > 0.0);
    out
}

/// Builds `mu_x^alpha` on `g`.
pub fn build_measure(g: &Hypergraph, x: VertexId, alpha: f64) -> Result<ProbabilityMeasure> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if x >= g.num_vertices() {
        return Err(Error::VertexOutOfRange {
            vertex: x,
            n: g.num_vertices(),
        });
    }
    let mut masses = Vec::new();
    if alpha > 0.0 {
        masses.push((x, alpha));
    }
    let spread = 1.0 - alpha;
    if spread > 0.0 {
        let incident = g.incident(x);
        let total_weight: f64 = incident.iter().map(|&l| g.weight(l)).sum();
        for &l in incident {
            let members = g.members(l);
            let share = spread * g.weight(l) / total_weight / (members.len() - 1) as f64;
            masses.extend(members.iter().filter(|&&z| z != x).map(|&z| (z, share)));
        }
    }
    let mut support = merge_sorted(masses);
    let total: f64 = support.iter().map(|&(_, m)| m).sum();
    if (total - 1.0).abs() > NORMALIZATION_LIMIT {
        return Err(Error::Internal(format!(
            "measure of vertex {x} has total mass {total}"
        )));
    }
    if total != 1.0 {
        for entry in &mut support {
            entry.1 /= total;
        }
    }
    Ok(ProbabilityMeasure {
        owner: x,
        alpha,
        support,
    })
}

/// Measures of every vertex, indexed by vertex.
pub fn all_measures(g: &Hypergraph, alpha: f64) -> Result<Vec<ProbabilityMeasure>> {
    (0..g.num_vertices())
        .map(|x| build_measure(g, x, alpha))
        .collect()
}
