//! Discrete Ricci flow on hyperedge weights.
//!
//! One step moves every weight by `eta * (W_h - d_h)`, all computed from the
//! same snapshot. Negatively curved hyperedges stretch and positively curved
//! ones contract. The explicit scheme can overshoot below zero, so weights
//! are clamped to a positive floor.

use serde::Serialize;

use crate::curvature::{all_curvatures, CurvatureReport};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_ETA: f64 = 0.1;
pub const DEFAULT_ITERATIONS: usize = 20;
/// Default floor, relative to the smallest initial weight.
pub const DEFAULT_RELATIVE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowParams {
    pub alpha: f64,
    pub eta: f64,
    pub iterations: usize,
    /// Absolute weight floor; `None` means `1e-6 * min(w_0)`.
    pub floor: Option<f64>,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            eta: DEFAULT_ETA,
            iterations: DEFAULT_ITERATIONS,
            floor: None,
        }
    }
}

impl FlowParams {
    pub fn new(alpha: f64, eta: f64, iterations: usize) -> Self {
        Self {
            alpha,
            eta,
            iterations,
            floor: None,
        }
    }

    fn check(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::AlphaOutOfRange(self.alpha));
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::InvalidFlowParams(format!(
                "step size must be positive, got {}",
                self.eta
            )));
        }
        if let Some(floor) = self.floor {
            if !(floor.is_finite() && floor > 0.0) {
                return Err(Error::InvalidFlowParams(format!(
                    "weight floor must be positive, got {floor}"
                )));
            }
        }
        Ok(())
    }

    /// The floor that applies to a flow started from `initial` weights.
    pub fn resolve_floor(&self, initial: &[f64]) -> f64 {
        self.floor.unwrap_or_else(|| {
            DEFAULT_RELATIVE_FLOOR * initial.iter().copied().fold(f64::INFINITY, f64::min)
        })
    }
}

/// Weights at iteration `k` with their curvature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowState {
    pub iteration: usize,
    pub weights: Vec<f64>,
    pub curvature: CurvatureReport,
    pub eta: f64,
    pub floor: f64,
}

/// The trajectory head: `g`'s own weights and their curvature.
pub fn initial_state(g: &Hypergraph, params: &FlowParams) -> Result<FlowState> {
    params.check()?;
    Ok(FlowState {
        iteration: 0,
        weights: g.weights().to_vec(),
        curvature: all_curvatures(g, params.alpha)?,
        eta: params.eta,
        floor: params.resolve_floor(g.weights()),
    })
}

/// One synchronous update of every weight.
pub fn flow_step(state: &FlowState, g: &Hypergraph) -> Result<FlowState> {
    let iteration = state.iteration + 1;
    let mut weights = Vec::with_capacity(state.weights.len());
    for (l, (&w, e)) in state.weights.iter().zip(&state.curvature.edges).enumerate() {
        let next = w + state.eta * (e.transport - e.length);
        if !next.is_finite() {
            return Err(Error::NonFiniteWeight {
                edge: l,
                iteration,
                weight: next,
            });
        }
        weights.push(next.max(state.floor));
    }
    let evolved = g.with_weights(weights)?;
    let curvature = all_curvatures(&evolved, state.curvature.alpha)?;
    Ok(FlowState {
        iteration,
        weights: evolved.weights().to_vec(),
        curvature,
        eta: state.eta,
        floor: state.floor,
    })
}

/// `K` flow steps from `g`'s weights; the returned trajectory has `K + 1`
/// states, starting with the initial one.
pub fn run_flow(g: &Hypergraph, alpha: f64, eta: f64, iterations: usize) -> Result<Vec<FlowState>> {
    run_flow_with(g, &FlowParams::new(alpha, eta, iterations))
}

pub fn run_flow_with(g: &Hypergraph, params: &FlowParams) -> Result<Vec<FlowState>> {
    let mut trajectory = Vec::with_capacity(params.iterations + 1);
    trajectory.push(initial_state(g, params)?);
    for _ in 0..params.iterations {
        let next = flow_step(trajectory.last().expect("non-empty"), g)?;
        trajectory.push(next);
    }
    Ok(trajectory)
}
