//! Community detection by hyperedge surgery on flowed weights.
//!
//! After the flow, bridges between communities carry large weights. Removing
//! every hyperedge heavier than a cutoff and reading off the connected
//! components of what survives gives a partition; sweeping the cutoff over
//! all distinct weights, from the largest down, gives a family of candidate
//! partitions to choose from.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::metrics::nmi;

/// Community label per vertex, dense from 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    /// Relabels arbitrary community ids densely, in order of first
    /// appearance.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(raw: &[T]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|r| {
                let next = seen.len();
                *seen.entry(*r).or_insert(next)
            })
            .collect();
        Self { labels }
    }

    /// Every vertex in one community.
    pub fn single(n: usize) -> Self {
        Self { labels: vec![0; n] }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> usize {
        self.labels[v]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_communities(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Vertices of each community.
    pub fn communities(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.num_communities()];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Keeps exactly the hyperedges with `weights[l] <= cutoff`. The result may
/// be disconnected; its weights are the retained entries of `weights`.
pub fn cut_above(g: &Hypergraph, weights: &[f64], cutoff: f64) -> Hypergraph {
    let (edges, kept): (Vec<Vec<VertexId>>, Vec<f64>) = g
        .edges()
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w <= cutoff)
        .map(|(e, &w)| (e.clone(), w))
        .unzip();
    Hypergraph::from_parts(g.num_vertices(), edges, kept)
        .expect("a sub-hypergraph of a valid hypergraph is well formed")
}

/// Connected components as communities, numbered by smallest vertex.
pub fn components(g: &Hypergraph) -> Partition {
    Partition {
        labels: g.component_labels(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub cutoff: f64,
    pub removed: usize,
    pub partition: Partition,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    /// Strictly decreasing cutoffs.
    pub entries: Vec<SweepEntry>,
    pub best: usize,
}

impl SweepResult {
    pub fn best_entry(&self) -> &SweepEntry {
        &self.entries[self.best]
    }
}

/// Distinct weights, largest first.
fn cutoff_candidates(weights: &[f64]) -> Vec<f64> {
    let mut sorted = weights.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.dedup();
    sorted
}

fn partitions(g: &Hypergraph, weights: &[f64], cutoffs: &[f64]) -> Vec<(f64, usize, Partition)> {
    cutoffs
        .iter()
        .map(|&c| {
            let removed = weights.iter().filter(|&&w| w > c).count();
            (c, removed, components(&cut_above(g, weights, c)))
        })
        .collect()
}

/// First index of the maximum score, i.e. the largest cutoff among ties.
fn argmax(entries: &[SweepEntry]) -> usize {
    let mut best = 0;
    for (i, e) in entries.iter().enumerate() {
        if e.score > entries[best].score {
            best = i;
        }
    }
    best
}

/// Scores every cutoff by NMI against `truth`.
pub fn sweep_supervised(g: &Hypergraph, weights: &[f64], truth: &Partition) -> Result<SweepResult> {
    if truth.len() != g.num_vertices() {
        return Err(Error::LabelLengthMismatch {
            labels: truth.len(),
            vertices: g.num_vertices(),
        });
    }
    let entries = partitions(g, weights, &cutoff_candidates(weights))
        .into_iter()
        .map(|(cutoff, removed, partition)| {
            let score = nmi(&partition, truth)?;
            Ok(SweepEntry {
                cutoff,
                removed,
                partition,
                score,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = argmax(&entries);
    Ok(SweepResult { entries, best })
}

/// Picks the cutoff just below the largest relative gap between consecutive
/// distinct weights. Each candidate is scored by the relative gap above it;
/// the largest weight scores 0.
pub fn sweep_unsupervised(g: &Hypergraph, weights: &[f64]) -> SweepResult {
    let cutoffs = cutoff_candidates(weights);
    let entries: Vec<SweepEntry> = partitions(g, weights, &cutoffs)
        .into_iter()
        .enumerate()
        .map(|(i, (cutoff, removed, partition))| {
            let score = if i == 0 {
                0.0
            } else {
                (cutoffs[i - 1] - cutoff) / cutoff
            };
            SweepEntry {
                cutoff,
                removed,
                partition,
                score,
            }
        })
        .collect();
    let best = argmax(&entries);
    SweepResult { entries, best }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_edges() -> Hypergraph {
        Hypergraph::new(
            5,
            vec![vec![0, 1], vec![1, 2, 3], vec![3, 4]],
            vec![0.2, 0.9, 0.3],
        )
        .unwrap()
    }

    #[test]
    fn cut_keeps_light_edges() {
        let g = three_edges();
        let w = g.weights().to_vec();
        assert_eq!(cut_above(&g, &w, 0.9), g);
        assert_eq!(cut_above(&g, &w, 0.1).num_edges(), 0);
        let cut = cut_above(&g, &w, 0.5);
        assert_eq!(cut.edges(), &[vec![0, 1], vec![3, 4]]);
        assert_eq!(cut.weights(), &[0.2, 0.3]);
    }

    #[test]
    fn component_labels() {
        let g = Hypergraph::from_parts(3, vec![], vec![]).unwrap();
        assert_eq!(components(&g).labels(), &[0, 1, 2]);
        let g = Hypergraph::unweighted(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(components(&g).num_communities(), 1);
        let g = Hypergraph::from_parts(4, vec![vec![2, 3], vec![0, 1]], vec![1.0, 1.0]).unwrap();
        assert_eq!(components(&g).labels(), &[0, 0, 1, 1]);
    }

    #[test]
    fn partition_relabels_densely() {
        let p = Partition::from_labels(&[7, 7, 3, 9, 3]);
        assert_eq!(p.labels(), &[0, 0, 1, 2, 1]);
        assert_eq!(p.num_communities(), 3);
        assert_eq!(p.communities(), vec![vec![0, 1], vec![2, 4], vec![3]]);
    }

    #[test]
    fn supervised_sweep_shape() {
        let g = three_edges();
        let w = g.weights().to_vec();
        let truth = Partition::from_labels(&[0, 0, 0, 1, 1]);
        let sweep = sweep_supervised(&g, &w, &truth).unwrap();
        let cutoffs: Vec<f64> = sweep.entries.iter().map(|e| e.cutoff).collect();
        assert_eq!(cutoffs, vec![0.9, 0.3, 0.2]);
        assert_eq!(sweep.entries[0].partition.num_communities(), 1);
        // Removing only {1,2,3} gives {0,1},{2},{3,4}.
        assert_eq!(sweep.entries[1].partition.labels(), &[0, 0, 1, 2, 2]);
        let best = sweep.best_entry();
        assert!(sweep.entries.iter().all(|e| e.score <= best.score));
    }

    #[test]
    fn single_truth_community_keeps_everything() {
        let g = three_edges();
        let w = g.weights().to_vec();
        let sweep = sweep_supervised(&g, &w, &Partition::single(5)).unwrap();
        assert_eq!(sweep.best, 0);
        assert_eq!(sweep.best_entry().cutoff, 0.9);
        assert_eq!(sweep.best_entry().score, 1.0);
    }

    #[test]
    fn supervised_sweep_checks_label_length() {
        let g = three_edges();
        let err = sweep_supervised(&g, g.weights(), &Partition::single(4)).unwrap_err();
        assert_eq!(
            err,
            Error::LabelLengthMismatch {
                labels: 4,
                vertices: 5
            }
        );
    }

    #[test]
    fn unsupervised_cuts_at_the_dominant_gap() {
        let g = three_edges();
        let sweep = sweep_unsupervised(&g, &[1.0, 5.0, 1.01]);
        assert_eq!(sweep.best_entry().cutoff, 1.01);
        assert_eq!(sweep.best_entry().removed, 1);
    }

    #[test]
    fn unsupervised_without_gaps_keeps_everything() {
        let g = three_edges();
        let sweep = sweep_unsupervised(&g, &[0.5, 0.5, 0.5]);
        assert_eq!(sweep.entries.len(), 1);
        assert_eq!(sweep.best_entry().partition, Partition::single(5));
    }

    #[test]
    fn communities_grow_as_cutoff_drops() {
        let g = three_edges();
        let sweep = sweep_unsupervised(&g, g.weights());
        let counts: Vec<usize> = sweep
            .entries
            .iter()
            .map(|e| e.partition.num_communities())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    }
}
