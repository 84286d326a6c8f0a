//! Weighted undirected hypergraphs and the hyperpath metric.
//!
//! The distance between two vertices is the cheapest hyperpath joining them,
//! where a hyperpath pays the full weight of every hyperedge it steps
//! through. The length of a hyperedge is the sum of the distances between
//! all pairs of its members.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Dense 0-based vertex index.
pub type VertexId = usize;

/// Absolute tolerance used when comparing distances.
pub const DISTANCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug)]
struct Topology {
    n: usize,
    edges: Vec<Vec<VertexId>>,
    incidence: Vec<Vec<usize>>,
}

/// A hypergraph `(V, H, w)`.
///
/// The incidence structure is shared between clones; weights are owned by
/// each value, so a weight update produces a new hypergraph and never
/// mutates one that readers may hold.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    topology: Arc<Topology>,
    weights: Vec<f64>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.topology.n == other.topology.n
            && self.topology.edges == other.topology.edges
            && self.weights == other.weights
    }
}

impl Hypergraph {
    /// Builds and fully validates a hypergraph (see [`Hypergraph::validate`]).
    pub fn new(n: usize, edges: Vec<Vec<VertexId>>, weights: Vec<f64>) -> Result<Self> {
        let g = Self::from_parts(n, edges, weights)?;
        g.validate()?;
        Ok(g)
    }

    /// Builds a hypergraph with all weights set to one.
    pub fn unweighted(n: usize, edges: Vec<Vec<VertexId>>) -> Result<Self> {
        let m = edges.len();
        Self::new(n, edges, vec![1.0; m])
    }

    /// Builds a hypergraph checking only what is needed to index it safely:
    /// member ids in range, no repeated member, one weight per hyperedge.
    ///
    /// Connectivity and weight positivity are left to
    /// [`Hypergraph::validate`]; the output of hyperedge surgery is built
    /// this way.
    pub fn from_parts(n: usize, edges: Vec<Vec<VertexId>>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != edges.len() {
            return Err(Error::Internal(format!(
                "{} weights supplied for {} hyperedges",
                weights.len(),
                edges.len()
            )));
        }
        let mut incidence = vec![Vec::new(); n];
        for (l, members) in edges.iter().enumerate() {
            for (i, &v) in members.iter().enumerate() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if members[..i].contains(&v) {
                    return Err(Error::DegenerateHyperedge {
                        edge: l,
                        reason: format!("vertex {v} listed twice"),
                    });
                }
                incidence[v].push(l);
            }
        }
        Ok(Self {
            topology: Arc::new(Topology {
                n,
                edges,
                incidence,
            }),
            weights,
        })
    }

    /// Checks the standing assumptions: every hyperedge has at least two
    /// members, every weight is positive and finite, and the hypergraph is
    /// connected (which also rules out isolated vertices).
    pub fn validate(&self) -> Result<()> {
        for (l, members) in self.topology.edges.iter().enumerate() {
            match members.len() {
                0 => {
                    return Err(Error::DegenerateHyperedge {
                        edge: l,
                        reason: "empty hyperedge".into(),
                    })
                }
                1 => {
                    return Err(Error::DegenerateHyperedge {
                        edge: l,
                        reason: "singleton hyperedge".into(),
                    })
                }
                _ => {}
            }
        }
        for (l, &w) in self.weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositiveWeight { edge: l, weight: w });
            }
        }
        if self.topology.n == 0 {
            return Ok(());
        }
        let labels = self.component_labels();
        if let Some(vertex) = labels.iter().position(|&c| c != 0) {
            return Err(Error::Disconnected { vertex });
        }
        Ok(())
    }

    /// Same topology, new weights. The weights are checked for positivity.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.num_edges() {
            return Err(Error::Internal(format!(
                "{} weights supplied for {} hyperedges",
                weights.len(),
                self.num_edges()
            )));
        }
        if let Some((l, &w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::NonPositiveWeight { edge: l, weight: w });
        }
        Ok(Self {
            topology: Arc::clone(&self.topology),
            weights,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.topology.n
    }

    pub fn num_edges(&self) -> usize {
        self.topology.edges.len()
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.topology.edges
    }

    pub fn members(&self, l: usize) -> &[VertexId] {
        &self.topology.edges[l]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, l: usize) -> f64 {
        self.weights[l]
    }

    /// Indices of the hyperedges containing `v`, ascending.
    pub fn incident(&self, v: VertexId) -> &[usize] {
        &self.topology.incidence[v]
    }

    /// Sum of hyperedge cardinalities.
    pub fn total_cardinality(&self) -> usize {
        self.topology.edges.iter().map(Vec::len).sum()
    }

    /// `E = sum over hyperedges of s(s-1)/2`, the number of member pairs.
    pub fn member_pairs(&self) -> u64 {
        self.topology
            .edges
            .iter()
            .map(|e| {
                let s = e.len() as u64;
                s * s.saturating_sub(1) / 2
            })
            .sum()
    }

    /// Connected-component label per vertex, numbered in order of the
    /// smallest vertex of each component.
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.topology.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for members in &self.topology.edges {
            if let Some((&first, rest)) = members.split_first() {
                for &v in rest {
                    let a = find(&mut parent, first);
                    let b = find(&mut parent, v);
                    if a != b {
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        parent[hi] = lo;
                    }
                }
            }
        }
        let mut root_label = vec![usize::MAX; n];
        let mut labels = vec![0; n];
        let mut next = 0;
        for v in 0..n {
            let r = find(&mut parent, v);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            labels[v] = root_label[r];
        }
        labels
    }
}

#[derive(Copy, Clone, PartialEq)]
struct State {
    dist: f64,
    vertex: VertexId,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source hyperpath distances. Unreachable vertices get `f64::INFINITY`.
///
/// From a settled vertex `u`, every member of every hyperedge `h` containing
/// `u` is reachable at extra cost `w_h`. The first settled member of a
/// hyperedge has the smallest distance among its members, so each hyperedge
/// is expanded once.
pub fn sssp(g: &Hypergraph, source: VertexId) -> Vec<f64> {
    let n = g.num_vertices();
    let mut dist = vec![f64::INFINITY; n];
    let mut expanded = vec![false; g.num_edges()];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State {
        dist: 0.0,
        vertex: source,
    });
    while let Some(State { dist: du, vertex: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        for &l in g.incident(u) {
            if expanded[l] {
                continue;
            }
            expanded[l] = true;
            let nd = du + g.weight(l);
            for &v in g.members(l) {
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(State { dist: nd, vertex: v });
                }
            }
        }
    }
    dist
}

/// A symmetric, nonnegative distance with zero diagonal.
pub trait Metric: Sync {
    fn distance(&self, u: VertexId, v: VertexId) -> f64;
}

/// Hyperpath distances computed one source row at a time, on demand.
///
/// `distance(u, v)` always reads the row of `min(u, v)`, so the cache is
/// exactly symmetric. A cache is tied to one weight vector; a new weight
/// vector means a new cache.
pub struct DistanceCache<'g> {
    graph: &'g Hypergraph,
    rows: Vec<OnceLock<Vec<f64>>>,
}

impl<'g> DistanceCache<'g> {
    pub fn new(graph: &'g Hypergraph) -> Self {
        Self {
            graph,
            rows: (0..graph.num_vertices()).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn graph(&self) -> &'g Hypergraph {
        self.graph
    }

    pub fn row(&self, source: VertexId) -> &[f64] {
        self.rows[source].get_or_init(|| sssp(self.graph, source))
    }

    /// Number of rows computed so far.
    pub fn rows_computed(&self) -> usize {
        self.rows.iter().filter(|r| r.get().is_some()).count()
    }
}

impl Metric for DistanceCache<'_> {
    fn distance(&self, u: VertexId, v: VertexId) -> f64 {
        if u == v {
            return 0.0;
        }
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        self.row(lo)[hi]
    }
}

/// Dense all-pairs distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps a row-major `n x n` matrix. The caller guarantees it is a metric.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "distance matrix must be n x n");
        Self { n, data }
    }

    /// All-pairs hyperpath distances, symmetrised the same way as
    /// [`DistanceCache`].
    pub fn all_pairs(g: &Hypergraph) -> Self {
        let n = g.num_vertices();
        let cache = DistanceCache::new(g);
        let mut data = vec![0.0; n * n];
        for u in 0..n {
            for v in 0..n {
                data[u * n + v] = cache.distance(u, v);
            }
        }
        Self { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

impl Metric for DistanceMatrix {
    fn distance(&self, u: VertexId, v: VertexId) -> f64 {
        self.data[u * self.n + v]
    }
}

/// Sum of pairwise member distances of hyperedge `l`.
pub fn hyperedge_length(g: &Hypergraph, l: usize) -> f64 {
    hyperedge_length_with(g, &DistanceCache::new(g), l)
}

/// [`hyperedge_length`] against an existing metric for `g`'s weights.
pub fn hyperedge_length_with<M: Metric + ?Sized>(g: &Hypergraph, dist: &M, l: usize) -> f64 {
    let members = g.members(l);
    let mut total = 0.0;
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            total += dist.distance(members[i], members[j]);
        }
    }
    total
}

/// Weighted pairwise graph obtained by replacing each hyperedge with a
/// clique. Parallel contributions are summed.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueExpansion {
    pub n: usize,
    /// `(u, v, weight)` with `u < v`, sorted.
    pub edges: Vec<(VertexId, VertexId, f64)>,
}

pub fn clique_expansion(g: &Hypergraph) -> CliqueExpansion {
    let mut acc: BTreeMap<(VertexId, VertexId), f64> = BTreeMap::new();
    for (l, members) in g.edges().iter().enumerate() {
        let w = g.weight(l);
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                let (a, b) = (members[i], members[j]);
                let key = if a < b { (a, b) } else { (b, a) };
                *acc.entry(key).or_insert(0.0) += w;
            }
        }
    }
    CliqueExpansion {
        n: g.num_vertices(),
        edges: acc.into_iter().map(|((u, v), w)| (u, v, w)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_hypergraph_is_valid() {
        assert!(Hypergraph::new(2, vec![vec![0, 1]], vec![1.0]).is_ok());
    }

    #[test]
    fn two_components_are_rejected() {
        let err = Hypergraph::new(4, vec![vec![0, 1], vec![2, 3]], vec![1.0, 1.0]).unwrap_err();
        assert_eq!(err, Error::Disconnected { vertex: 2 });
    }

    #[test]
    fn zero_weight_is_rejected() {
        let err = Hypergraph::new(2, vec![vec![0, 1]], vec![0.0]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveWeight { edge: 0, .. }));
        let err = Hypergraph::new(2, vec![vec![0, 1]], vec![f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveWeight { edge: 0, .. }));
    }

    #[test]
    fn degenerate_hyperedges_are_rejected() {
        let err = Hypergraph::new(2, vec![vec![0, 1], vec![1]], vec![1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::DegenerateHyperedge { edge: 1, .. }));
        let err = Hypergraph::new(2, vec![vec![0, 1], vec![]], vec![1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::DegenerateHyperedge { edge: 1, .. }));
        let err = Hypergraph::new(2, vec![vec![0, 0]], vec![1.0]).unwrap_err();
        assert!(matches!(err, Error::DegenerateHyperedge { edge: 0, .. }));
    }

    #[test]
    fn isolated_vertex_is_rejected() {
        let err = Hypergraph::new(3, vec![vec![0, 1]], vec![1.0]).unwrap_err();
        assert_eq!(err, Error::Disconnected { vertex: 2 });
    }

    #[test]
    fn out_of_range_member() {
        let err = Hypergraph::new(2, vec![vec![0, 2]], vec![1.0]).unwrap_err();
        assert_eq!(err, Error::VertexOutOfRange { vertex: 2, n: 2 });
    }

    #[test]
    fn one_hop_costs_the_hyperedge_weight() {
        let g = Hypergraph::new(3, vec![vec![0, 1, 2]], vec![2.0]).unwrap();
        assert_eq!(sssp(&g, 0), vec![0.0, 2.0, 2.0]);
    }

    #[test]
    fn paths_concatenate() {
        let g = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]], vec![1.0, 1.0]).unwrap();
        assert_eq!(sssp(&g, 0), vec![0.0, 1.0, 2.0]);
    }

    // a=0 b=1 c=2 d=3
    fn shortcut_instance() -> Hypergraph {
        Hypergraph::new(
            4,
            vec![vec![0, 1, 2], vec![0, 3], vec![3, 2]],
            vec![5.0, 1.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn shortcut_beats_heavy_hyperedge() {
        // Hyperpaths from a to c: {abc} costs 5, {ad},{dc} costs 2.
        let g = shortcut_instance();
        let d = sssp(&g, 0);
        assert_eq!(d[2], 2.0);
        assert_eq!(d[1], 5.0);
    }

    #[test]
    fn hyperedge_lengths() {
        let g = Hypergraph::new(3, vec![vec![0, 1, 2]], vec![1.0]).unwrap();
        assert_eq!(hyperedge_length(&g, 0), 3.0);

        let g = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]], vec![1.5, 1.0]).unwrap();
        assert_eq!(hyperedge_length(&g, 0), sssp(&g, 0)[1]);

        // d(a,b) + d(a,c) + d(b,c) = 5 + 2 + 5
        assert_eq!(hyperedge_length(&shortcut_instance(), 0), 12.0);
    }

    #[test]
    fn clique_expansion_of_triangle() {
        let g = Hypergraph::new(3, vec![vec![0, 1, 2]], vec![1.0]).unwrap();
        let ce = clique_expansion(&g);
        assert_eq!(ce.edges, vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
    }

    #[test]
    fn clique_expansion_sums_parallel_edges() {
        let g = Hypergraph::new(2, vec![vec![0, 1], vec![1, 0]], vec![1.0, 2.0]).unwrap();
        assert_eq!(clique_expansion(&g).edges, vec![(0, 1, 3.0)]);
    }

    #[test]
    fn cache_is_symmetric_and_lazy() {
        let g = shortcut_instance();
        let cache = DistanceCache::new(&g);
        assert_eq!(cache.rows_computed(), 0);
        assert_eq!(cache.distance(2, 0), cache.distance(0, 2));
        assert_eq!(cache.rows_computed(), 1);
        assert_eq!(cache.distance(3, 3), 0.0);
    }

    #[test]
    fn member_pairs_counts_e() {
        let g = shortcut_instance();
        assert_eq!(g.member_pairs(), 3 + 1 + 1);
        assert_eq!(g.total_cardinality(), 7);
    }

    #[test]
    fn with_weights_shares_topology() {
        let g = shortcut_instance();
        let h = g.with_weights(vec![1.0, 1.0, 1.0]).unwrap();
        assert!(Arc::ptr_eq(&g.topology, &h.topology));
        assert_eq!(g.weights(), &[5.0, 1.0, 1.0]);
        assert!(g.with_weights(vec![1.0, -1.0, 1.0]).is_err());
    }
}
