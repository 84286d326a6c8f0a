//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use hyperrcd::{Hypergraph, VertexId};

/// All-pairs hyperpath distances by Floyd-Warshall on the graph where each
/// hyperedge contributes an edge of its weight between every member pair.
pub fn floyd_warshall(g: &Hypergraph) -> Vec<Vec<f64>> {
    let n = g.num_vertices();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for (members, &w) in g.edges().iter().zip(g.weights()) {
        for &a in members {
            for &b in members {
                if a != b && w < d[a][b] {
                    d[a][b] = w;
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = d[i][k] + d[k][j];
                if through < d[i][j] {
                    d[i][j] = through;
                }
            }
        }
    }
    d
}

/// Hyperedge length from a full distance table.
pub fn length_from(d: &[Vec<f64>], members: &[VertexId]) -> f64 {
    let mut total = 0.0;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            total += d[a][b];
        }
    }
    total
}

/// Minimum transport cost between `supply` and `demand` (both summing to
/// the same total) by enumerating every basic solution of the
/// transportation polytope.
///
/// A basis is a set of `k + l - 1` cells forming a spanning tree of the
/// bipartite row/column graph; its flows follow by peeling leaves. The
/// optimum of a linear program over a polytope is attained at a vertex, so
/// the cheapest nonnegative basic solution is optimal.
pub fn brute_force_transport(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> f64 {
    let (k, l) = (supply.len(), demand.len());
    let cells: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..l).map(move |j| (i, j))).collect();
    let basis_size = k + l - 1;
    let mut best = f64::INFINITY;
    let mut chosen = Vec::with_capacity(basis_size);
    subsets(&cells, basis_size, 0, &mut chosen, &mut |basis| {
        if let Some(flows) = peel(supply, demand, basis) {
            if flows.iter().all(|&f| f >= -1e-12) {
                let c: f64 = basis.iter().zip(&flows).map(|(&(i, j), &f)| f * cost[i][j]).sum();
                best = best.min(c);
            }
        }
    });
    best
}

fn subsets<F: FnMut(&[(usize, usize)])>(
    cells: &[(usize, usize)],
    size: usize,
    start: usize,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut F,
) {
    if chosen.len() == size {
        visit(chosen);
        return;
    }
    let needed = size - chosen.len();
    for idx in start..=cells.len() - needed {
        chosen.push(cells[idx]);
        subsets(cells, size, idx + 1, chosen, visit);
        chosen.pop();
    }
}

/// Flows on the cells of `basis`, or `None` if the cells contain a cycle.
fn peel(supply: &[f64], demand: &[f64], basis: &[(usize, usize)]) -> Option<Vec<f64>> {
    let k = supply.len();
    let mut residual: Vec<f64> = supply.iter().chain(demand).copied().collect();
    let mut flows = vec![f64::NAN; basis.len()];
    let mut open = basis.len();
    while open > 0 {
        let mut degree = vec![0usize; residual.len()];
        for (c, &(i, j)) in basis.iter().enumerate() {
            if flows[c].is_nan() {
                degree[i] += 1;
                degree[k + j] += 1;
            }
        }
        let leaf = basis.iter().enumerate().find_map(|(c, &(i, j))| {
            if !flows[c].is_nan() {
                None
            } else if degree[i] == 1 {
                Some((c, i, k + j))
            } else if degree[k + j] == 1 {
                Some((c, k + j, i))
            } else {
                None
            }
        });
        let (c, node, other) = leaf?;
        flows[c] = residual[node];
        residual[node] = 0.0;
        residual[other] -= flows[c];
        open -= 1;
    }
    Some(flows)
}
