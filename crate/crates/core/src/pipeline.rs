//! End-to-end detection: flow, then sweep cutoffs on the flowed weights.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detection::{sweep_supervised, sweep_unsupervised, Partition, SweepResult};
use crate::error::{Error, Result};
use crate::flow::{run_flow_with, FlowParams, FlowState};
use crate::hypergraph::Hypergraph;
use crate::metrics::nmi;
use crate::synthgen::{generate, GenParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Cutoff chosen by NMI against known labels.
    Supervised,
    /// Cutoff chosen at the largest relative weight gap.
    Unsupervised,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "supervised" => Ok(Mode::Supervised),
            "unsupervised" => Ok(Mode::Unsupervised),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown mode {other:?}"),
            }),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Supervised => "supervised",
            Mode::Unsupervised => "unsupervised",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub alpha: f64,
    pub eta: f64,
    pub iterations: usize,
    pub floor: Option<f64>,
    pub mode: Mode,
    /// Sweep every iterate `k >= 1` instead of only the last one.
    pub sweep_every_iteration: bool,
    /// Refuse inputs whose total member-pair count exceeds this.
    pub pair_budget: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let flow = FlowParams::default();
        Self {
            alpha: flow.alpha,
            eta: flow.eta,
            iterations: flow.iterations,
            floor: flow.floor,
            mode: Mode::Supervised,
            sweep_every_iteration: false,
            pair_budget: None,
        }
    }
}

impl RunConfig {
    pub fn flow_params(&self) -> FlowParams {
        FlowParams {
            alpha: self.alpha,
            eta: self.eta,
            iterations: self.iterations,
            floor: self.floor,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Detection {
    pub trajectory: Vec<FlowState>,
    /// Iterate the chosen partition was cut from.
    pub iteration: usize,
    pub sweep: SweepResult,
}

impl Detection {
    pub fn partition(&self) -> &Partition {
        &self.sweep.best_entry().partition
    }
}

fn sweep(g: &Hypergraph, state: &FlowState, mode: Mode, truth: Option<&Partition>) -> Result<SweepResult> {
    match (mode, truth) {
        (Mode::Supervised, Some(t)) => sweep_supervised(g, &state.weights, t),
        (Mode::Supervised, None) => Err(Error::InvalidFlowParams(
            "supervised detection needs ground-truth labels".into(),
        )),
        (Mode::Unsupervised, _) => Ok(sweep_unsupervised(g, &state.weights)),
    }
}

/// Refuses inputs over the member-pair budget. Curvature costs one
/// transport problem per member pair, so the pair count bounds the work.
pub fn check_budget(g: &Hypergraph, config: &RunConfig) -> Result<()> {
    if let Some(budget) = config.pair_budget {
        let pairs = g.member_pairs();
        if pairs > budget {
            return Err(Error::BudgetExceeded { pairs, budget });
        }
    }
    Ok(())
}

/// Runs the flow and picks a partition; see [`select`].
pub fn detect(g: &Hypergraph, config: &RunConfig, truth: Option<&Partition>) -> Result<Detection> {
    check_budget(g, config)?;
    check_truth(g, truth)?;
    let trajectory = run_flow_with(g, &config.flow_params())?;
    select(g, trajectory, config, truth)
}

fn check_truth(g: &Hypergraph, truth: Option<&Partition>) -> Result<()> {
    match truth {
        Some(t) if t.len() != g.num_vertices() => Err(Error::LabelLengthMismatch {
            labels: t.len(),
            vertices: g.num_vertices(),
        }),
        _ => Ok(()),
    }
}

/// Sweeps the last iterate of `trajectory`, or with `sweep_every_iteration`
/// every iterate from 1 on, keeping the best score (earliest on ties).
pub fn select(
    g: &Hypergraph,
    trajectory: Vec<FlowState>,
    config: &RunConfig,
    truth: Option<&Partition>,
) -> Result<Detection> {
    check_truth(g, truth)?;
    let last = trajectory.len().checked_sub(1).ok_or_else(|| Error::Internal("empty trajectory".into()))?;
    let candidates = if config.sweep_every_iteration && last > 0 {
        1..=last
    } else {
        last..=last
    };
    let mut best: Option<(usize, SweepResult)> = None;
    for k in candidates {
        let result = sweep(g, &trajectory[k], config.mode, truth)?;
        let better = best
            .as_ref()
            .is_none_or(|(_, b)| result.best_entry().score > b.best_entry().score);
        if better {
            best = Some((k, result));
        }
    }
    let (iteration, sweep) = best.expect("at least one iterate is swept");
    Ok(Detection {
        trajectory,
        iteration,
        sweep,
    })
}

/// Weight and curvature ranges at one flow iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationSummary {
    pub iteration: usize,
    pub min_weight: f64,
    pub mean_weight: f64,
    pub max_weight: f64,
    pub min_kappa: f64,
    pub mean_kappa: f64,
    pub max_kappa: f64,
}

impl IterationSummary {
    pub fn new(state: &FlowState) -> Self {
        let (min_weight, mean_weight, max_weight) = spread(state.weights.iter().copied());
        let (min_kappa, mean_kappa, max_kappa) = spread(state.curvature.edges.iter().map(|e| e.kappa));
        Self {
            iteration: state.iteration,
            min_weight,
            mean_weight,
            max_weight,
            min_kappa,
            mean_kappa,
            max_kappa,
        }
    }
}

fn spread(values: impl Iterator<Item = f64>) -> (f64, f64, f64) {
    let (mut lo, mut hi, mut sum, mut count) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
        sum += v;
        count += 1;
    }
    (lo, sum / count.max(1) as f64, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub cutoff: f64,
    pub communities: usize,
    pub score: f64,
}

/// Deterministic summary of one run; no timings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    /// Generator seed, for synthetic inputs.
    pub seed: Option<u64>,
    pub vertices: usize,
    pub hyperedges: usize,
    pub trajectory: Vec<IterationSummary>,
    /// Sweep of the chosen iterate.
    pub sweep: Vec<SweepPoint>,
    pub iteration: usize,
    pub cutoff: f64,
    pub removed: usize,
    pub communities: usize,
    pub score: f64,
    /// NMI against the ground truth, when one was given.
    pub nmi: Option<f64>,
}

impl RunReport {
    pub fn new(
        g: &Hypergraph,
        config: &RunConfig,
        detection: &Detection,
        truth: Option<&Partition>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let best = detection.sweep.best_entry();
        Ok(Self {
            config: *config,
            seed,
            vertices: g.num_vertices(),
            hyperedges: g.num_edges(),
            trajectory: detection.trajectory.iter().map(IterationSummary::new).collect(),
            sweep: detection
                .sweep
                .entries
                .iter()
                .map(|e| SweepPoint {
                    cutoff: e.cutoff,
                    communities: e.partition.num_communities(),
                    score: e.score,
                })
                .collect(),
            iteration: detection.iteration,
            cutoff: best.cutoff,
            removed: best.removed,
            communities: best.partition.num_communities(),
            score: best.score,
            nmi: truth.map(|t| nmi(&best.partition, t)).transpose()?,
        })
    }
}

/// Runs on `repeat` generated instances with seeds `params.seed`,
/// `params.seed + 1`, ...
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepeatedRun {
    pub runs: Vec<RunReport>,
    pub scores: Vec<f64>,
    pub mean_nmi: f64,
}

pub fn run_generated(params: &GenParams, config: &RunConfig, repeat: usize) -> Result<RepeatedRun> {
    let mut runs = Vec::with_capacity(repeat);
    for i in 0..repeat as u64 {
        let seed = params.seed.wrapping_add(i);
        let (g, truth) = generate(&params.with_seed(seed))?;
        let detection = detect(&g, config, Some(&truth))?;
        runs.push(RunReport::new(&g, config, &detection, Some(&truth), Some(seed))?);
    }
    let scores: Vec<f64> = runs.iter().map(|r| r.nmi.expect("truth is known")).collect();
    let mean_nmi = scores.iter().sum::<f64>() / scores.len().max(1) as f64;
    Ok(RepeatedRun {
        runs,
        scores,
        mean_nmi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planted() -> (Hypergraph, Partition) {
        generate(&GenParams {
            n: 60,
            q: 2,
            avg_degree: 6.0,
            p_intra: 0.9,
            ..GenParams::default()
        })
        .unwrap()
    }

    #[test]
    fn budget_guard() {
        let (g, truth) = planted();
        let config = RunConfig {
            pair_budget: Some(10),
            ..RunConfig::default()
        };
        assert!(matches!(
            detect(&g, &config, Some(&truth)),
            Err(Error::BudgetExceeded { budget: 10, .. })
        ));
    }

    #[test]
    fn supervised_requires_labels() {
        let (g, _) = planted();
        let config = RunConfig {
            iterations: 1,
            ..RunConfig::default()
        };
        assert!(detect(&g, &config, None).is_err());
    }

    #[test]
    fn every_iteration_is_at_least_as_good() {
        let (g, truth) = planted();
        let base = RunConfig {
            iterations: 5,
            ..RunConfig::default()
        };
        let last = detect(&g, &base, Some(&truth)).unwrap();
        let all = detect(
            &g,
            &RunConfig {
                sweep_every_iteration: true,
                ..base
            },
            Some(&truth),
        )
        .unwrap();
        assert_eq!(last.iteration, 5);
        assert!(all.sweep.best_entry().score >= last.sweep.best_entry().score);
        assert!((1..=5).contains(&all.iteration));
    }

    #[test]
    fn report_is_deterministic() {
        let (g, truth) = planted();
        let config = RunConfig {
            iterations: 3,
            mode: Mode::Unsupervised,
            ..RunConfig::default()
        };
        let a = RunReport::new(&g, &config, &detect(&g, &config, None).unwrap(), Some(&truth), None).unwrap();
        let b = RunReport::new(&g, &config, &detect(&g, &config, None).unwrap(), Some(&truth), None).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.nmi.is_some());
        assert_eq!(a.trajectory.len(), 4);
    }

    #[test]
    fn repeats_use_consecutive_seeds() {
        let params = GenParams {
            n: 40,
            q: 2,
            avg_degree: 5.0,
            seed: 7,
            ..GenParams::default()
        };
        let config = RunConfig {
            iterations: 2,
            ..RunConfig::default()
        };
        let run = run_generated(&params, &config, 3).unwrap();
        let seeds: Vec<Option<u64>> = run.runs.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![Some(7), Some(8), Some(9)]);
        let mean = run.scores.iter().sum::<f64>() / 3.0;
        assert_eq!(run.mean_nmi, mean);
    }
}
