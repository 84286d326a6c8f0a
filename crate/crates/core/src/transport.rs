//! Exact 1-Wasserstein distance between finitely supported measures.
//!
//! Mass common to both measures stays in place at zero cost (optimal for any
//! metric cost). What remains is a balanced transportation problem from the
//! excess of `mu` to the excess of `nu`, solved by successive shortest
//! augmenting paths with node potentials. The final potentials are kept on
//! the plan and turned into a Kantorovich-Rubinstein certificate by
//! [`dual_certificate`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Metric, VertexId};
use crate::measure::ProbabilityMeasure;

/// Masses below this are treated as exhausted.
const MASS_EPS: f64 = 1e-15;
/// Largest total-mass difference accepted between the two measures.
pub const BALANCE_TOLERANCE: f64 = 1e-9;

/// An optimal coupling together with its cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportPlan {
    /// `(source, target, mass)`; stays appear as `(z, z, mass)`.
    pub entries: Vec<(VertexId, VertexId, f64)>,
    pub cost: f64,
    /// Final solver prices on the receiving side, as Kantorovich potentials.
    #[serde(skip)]
    sink_potentials: Vec<(VertexId, f64)>,
}

impl TransportPlan {
    /// Mass leaving `u`.
    pub fn row_sum(&self, u: VertexId) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.0 == u)
            .map(|e| e.2)
            .sum()
    }

    /// Mass arriving at `v`.
    pub fn column_sum(&self, v: VertexId) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.1 == v)
            .map(|e| e.2)
            .sum()
    }
}

/// A potential on the union of two supports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualPotential {
    /// Sorted by vertex.
    pub values: Vec<(VertexId, f64)>,
}

impl DualPotential {
    pub fn value(&self, v: VertexId) -> Option<f64> {
        self.values
            .binary_search_by_key(&v, |&(u, _)| u)
            .ok()
            .map(|i| self.values[i].1)
    }

    /// `max(|phi(u) - phi(v)| - d(u, v))` over all pairs; non-positive iff
    /// the potential is 1-Lipschitz.
    pub fn lipschitz_excess<M: Metric + ?Sized>(&self, dist: &M) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for &(u, a) in &self.values {
            for &(v, b) in &self.values {
                worst = worst.max((a - b).abs() - dist.distance(u, v));
            }
        }
        worst
    }
}

fn normalized(mu: &ProbabilityMeasure) -> Vec<(VertexId, f64)> {
    let total = mu.total();
    if total == 1.0 {
        mu.support().to_vec()
    } else {
        mu.support().iter().map(|&(v, m)| (v, m / total)).collect()
    }
}

/// Exact `W1(mu, nu)` under `dist`, with an optimal plan.
pub fn wasserstein1<M: Metric + ?Sized>(
    mu: &ProbabilityMeasure,
    nu: &ProbabilityMeasure,
    dist: &M,
) -> Result<(f64, TransportPlan)> {
    let (left, right) = (mu.total(), nu.total());
    if (left - right).abs() > BALANCE_TOLERANCE {
        return Err(Error::UnbalancedMeasures { left, right });
    }
    let a = normalized(mu);
    let b = normalized(nu);

    if let ([(u, _)], [(v, _)]) = (a.as_slice(), b.as_slice()) {
        let cost = dist.distance(*u, *v);
        let plan = TransportPlan {
            entries: vec![(*u, *v, 1.0)],
            cost,
            sink_potentials: vec![(*v, 0.0)],
        };
        return Ok((cost, plan));
    }

    // Split into stays, sources (excess of mu) and sinks (excess of nu).
    let mut entries = Vec::new();
    let mut sources: Vec<(VertexId, f64)> = Vec::new();
    let mut sinks: Vec<(VertexId, f64)> = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (za, ma) = a.get(i).copied().unwrap_or((usize::MAX, 0.0));
        let (zb, mb) = b.get(j).copied().unwrap_or((usize::MAX, 0.0));
        if za < zb {
            sources.push((za, ma));
            i += 1;
        } else if zb < za {
            sinks.push((zb, mb));
            j += 1;
        } else {
            let stay = ma.min(mb);
            entries.push((za, za, stay));
            if ma - stay > MASS_EPS {
                sources.push((za, ma - stay));
            } else if mb - stay > MASS_EPS {
                sinks.push((za, mb - stay));
            }
            i += 1;
            j += 1;
        }
    }

    let solved = solve_transportation(&sources, &sinks, dist);
    entries.extend(solved.flows);
    entries.sort_by_key(|e| (e.0, e.1));
    let plan = TransportPlan {
        entries,
        cost: solved.cost,
        sink_potentials: solved.sink_potentials,
    };
    Ok((plan.cost, plan))
}

struct Solved {
    flows: Vec<(VertexId, VertexId, f64)>,
    cost: f64,
    sink_potentials: Vec<(VertexId, f64)>,
}

/// Successive shortest paths on the complete bipartite graph
/// `sources x sinks` with infinite capacities. Both lists are sorted by
/// vertex and disjoint.
///
/// Each round runs a dense Dijkstra from every source with remaining excess
/// over reduced costs and stops at the first sink with remaining deficit.
/// Ties are broken toward the lowest vertex id.
fn solve_transportation<M: Metric + ?Sized>(
    sources: &[(VertexId, f64)],
    sinks: &[(VertexId, f64)],
    dist: &M,
) -> Solved {
    let k = sources.len();
    let l = sinks.len();
    if k == 0 || l == 0 {
        return Solved {
            flows: Vec::new(),
            cost: 0.0,
            sink_potentials: Vec::new(),
        };
    }
    let cost: Vec<f64> = sources
        .iter()
        .flat_map(|&(u, _)| sinks.iter().map(move |&(v, _)| (u, v)))
        .map(|(u, v)| dist.distance(u, v))
        .collect();
    let mut flow = vec![0.0; k * l];
    let mut excess: Vec<f64> = sources.iter().map(|s| s.1).collect();
    let mut deficit: Vec<f64> = sinks.iter().map(|s| s.1).collect();
    // Nodes 0..k are sources, k..k+l sinks.
    let nodes = k + l;
    let vertex_of: Vec<VertexId> = sources.iter().chain(sinks).map(|s| s.0).collect();
    let mut potential = vec![0.0; nodes];
    let mut dist_to = vec![f64::INFINITY; nodes];
    let mut settled = vec![false; nodes];
    let mut pred = vec![usize::MAX; nodes];

    loop {
        if !excess.iter().any(|&e| e > MASS_EPS) || !deficit.iter().any(|&d| d > MASS_EPS) {
            break;
        }
        dist_to.fill(f64::INFINITY);
        settled.fill(false);
        pred.fill(usize::MAX);
        for s in 0..k {
            if excess[s] > MASS_EPS {
                dist_to[s] = 0.0;
            }
        }

        let mut target = None;
        loop {
            let mut best = usize::MAX;
            for x in 0..nodes {
                if settled[x] || dist_to[x] == f64::INFINITY {
                    continue;
                }
                if best == usize::MAX
                    || dist_to[x] < dist_to[best]
                    || (dist_to[x] == dist_to[best] && vertex_of[x] < vertex_of[best])
                {
                    best = x;
                }
            }
            if best == usize::MAX {
                break;
            }
            settled[best] = true;
            let d = dist_to[best];
            if best < k {
                let s = best;
                let row = &cost[s * l..(s + 1) * l];
                for t in 0..l {
                    let x = k + t;
                    if settled[x] {
                        continue;
                    }
                    let reduced = (row[t] + potential[s] - potential[x]).max(0.0);
                    if d + reduced < dist_to[x] {
                        dist_to[x] = d + reduced;
                        pred[x] = s;
                    }
                }
            } else {
                let t = best - k;
                if deficit[t] > MASS_EPS {
                    target = Some(t);
                    break;
                }
                for s in 0..k {
                    if settled[s] || flow[s * l + t] <= MASS_EPS {
                        continue;
                    }
                    let reduced = (-cost[s * l + t] + potential[best] - potential[s]).max(0.0);
                    if d + reduced < dist_to[s] {
                        dist_to[s] = d + reduced;
                        pred[s] = best;
                    }
                }
            }
        }

        let Some(t) = target else {
            // Unreachable with infinite capacities; bail out with what we have.
            break;
        };
        let reach = dist_to[k + t];
        for x in 0..nodes {
            potential[x] += dist_to[x].min(reach);
        }

        // Walk back to the originating source to find the bottleneck.
        let mut delta = deficit[t];
        let mut x = k + t;
        loop {
            let s = pred[x];
            if pred[s] == usize::MAX {
                delta = delta.min(excess[s]);
                break;
            }
            let back = pred[s];
            delta = delta.min(flow[s * l + (back - k)]);
            x = back;
        }
        let mut x = k + t;
        loop {
            let s = pred[x];
            flow[s * l + (x - k)] += delta;
            if pred[s] == usize::MAX {
                excess[s] -= delta;
                break;
            }
            let back = pred[s];
            flow[s * l + (back - k)] -= delta;
            x = back;
        }
        deficit[t] -= delta;
    }

    let mut flows = Vec::new();
    let mut total = 0.0;
    for s in 0..k {
        for t in 0..l {
            let f = flow[s * l + t];
            if f > MASS_EPS {
                flows.push((sources[s].0, sinks[t].0, f));
                total += f * cost[s * l + t];
            }
        }
    }
    // Reduced cost c + p_s - p_t >= 0 on every arc, tight on arcs with flow,
    // so phi = -p is a Kantorovich potential on sources and sinks.
    let sink_potentials = (0..l)
        .map(|t| (sinks[t].0, -potential[k + t]))
        .collect();
    Solved {
        flows,
        cost: total,
        sink_potentials,
    }
}

/// Kantorovich-Rubinstein certificate for `plan`.
///
/// The solver's sink potentials are extended to the whole support union by
/// `phi(z) = min_t (d(z, t) + phi(t))`, which is 1-Lipschitz by the
/// triangle inequality and agrees with the solver prices on every source
/// that ships mass. Returns the potential and the duality gap
/// `cost - sum_z phi(z) (mu(z) - nu(z))`.
pub fn dual_certificate<M: Metric + ?Sized>(
    mu: &ProbabilityMeasure,
    nu: &ProbabilityMeasure,
    dist: &M,
    plan: &TransportPlan,
) -> (DualPotential, f64) {
    let mut union: Vec<VertexId> = mu
        .support()
        .iter()
        .chain(nu.support())
        .map(|&(v, _)| v)
        .collect();
    union.sort_unstable();
    union.dedup();
    let values: Vec<(VertexId, f64)> = union
        .iter()
        .map(|&z| {
            let phi = plan
                .sink_potentials
                .iter()
                .map(|&(t, p)| dist.distance(z, t) + p)
                .fold(f64::INFINITY, f64::min);
            (z, if phi.is_finite() { phi } else { 0.0 })
        })
        .collect();
    let dual: f64 = values
        .iter()
        .map(|&(z, phi)| phi * (mu.mass(z) - nu.mass(z)))
        .sum();
    (DualPotential { values }, plan.cost - dual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{DistanceCache, DistanceMatrix, Hypergraph};
    use crate::measure::build_measure;

    fn triangle() -> Hypergraph {
        Hypergraph::unweighted(3, vec![vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn identical_measures_cost_nothing() {
        let g = triangle();
        let d = DistanceCache::new(&g);
        let mu = build_measure(&g, 0, 0.5).unwrap();
        let (cost, plan) = wasserstein1(&mu, &mu, &d).unwrap();
        assert_eq!(cost, 0.0);
        assert!(plan.entries.iter().all(|e| e.0 == e.1));
        let (phi, gap) = dual_certificate(&mu, &mu, &d, &plan);
        assert!(phi.values.iter().all(|&(_, p)| p == 0.0));
        assert_eq!(gap, 0.0);
    }

    #[test]
    fn half_lazy_triangle_moves_a_quarter() {
        let g = triangle();
        let d = DistanceCache::new(&g);
        let mu = build_measure(&g, 0, 0.5).unwrap();
        let nu = build_measure(&g, 1, 0.5).unwrap();
        let (cost, plan) = wasserstein1(&mu, &nu, &d).unwrap();
        assert!((cost - 0.25).abs() < 1e-15);
        assert!(plan.entries.contains(&(0, 1, 0.25)));
        let (phi, gap) = dual_certificate(&mu, &nu, &d, &plan);
        assert!(gap.abs() <= 1e-12);
        assert!(phi.lipschitz_excess(&d) <= 1e-12);
    }

    #[test]
    fn point_masses_cost_their_distance() {
        let g = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]], vec![1.5, 2.0]).unwrap();
        let d = DistanceCache::new(&g);
        let (cost, plan) =
            wasserstein1(&ProbabilityMeasure::dirac(0), &ProbabilityMeasure::dirac(2), &d)
                .unwrap();
        assert_eq!(cost, 3.5);
        assert_eq!(plan.entries, vec![(0, 2, 1.0)]);
        let (_, gap) = dual_certificate(
            &ProbabilityMeasure::dirac(0),
            &ProbabilityMeasure::dirac(2),
            &d,
            &plan,
        );
        assert_eq!(gap, 0.0);
    }

    #[test]
    fn unbalanced_measures_are_rejected() {
        let d = DistanceMatrix::from_rows(2, vec![0.0, 1.0, 1.0, 0.0]);
        let mu = ProbabilityMeasure::from_masses(0, 0.0, vec![(0, 1.0)]);
        let nu = ProbabilityMeasure::from_masses(1, 0.0, vec![(1, 0.5)]);
        assert!(matches!(
            wasserstein1(&mu, &nu, &d),
            Err(Error::UnbalancedMeasures { .. })
        ));
    }

    #[test]
    fn plan_needs_rerouting() {
        // On a path 0-1-2-3 with unit weights, greedy nearest assignment is
        // suboptimal; the solver must use a backward arc.
        let n = 4;
        let mut data = vec![0.0; n * n];
        for u in 0..n {
            for v in 0..n {
                data[u * n + v] = (u as f64 - v as f64).abs();
            }
        }
        let d = DistanceMatrix::from_rows(n, data);
        let mu = ProbabilityMeasure::from_masses(0, 0.0, vec![(1, 0.5), (2, 0.5)]);
        let nu = ProbabilityMeasure::from_masses(0, 0.0, vec![(0, 0.5), (3, 0.5)]);
        let (cost, plan) = wasserstein1(&mu, &nu, &d).unwrap();
        assert!((cost - 1.0).abs() < 1e-15);
        for v in [1, 2] {
            assert!((plan.row_sum(v) - 0.5).abs() < 1e-15);
        }
        let (phi, gap) = dual_certificate(&mu, &nu, &d, &plan);
        assert!(gap.abs() < 1e-12);
        for &(u, v, m) in &plan.entries {
            if m > 1e-12 {
                let slack = phi.value(u).unwrap() - phi.value(v).unwrap() - d.distance(u, v);
                assert!(slack.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_in_arguments() {
        let g = Hypergraph::new(
            5,
            vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 0]],
            vec![1.0, 0.4, 2.5],
        )
        .unwrap();
        let d = DistanceCache::new(&g);
        for x in 0..5 {
            for y in 0..5 {
                let mu = build_measure(&g, x, 0.3).unwrap();
                let nu = build_measure(&g, y, 0.3).unwrap();
                let (forward, _) = wasserstein1(&mu, &nu, &d).unwrap();
                let (backward, _) = wasserstein1(&nu, &mu, &d).unwrap();
                assert!((forward - backward).abs() <= 1e-10);
            }
        }
    }
}
