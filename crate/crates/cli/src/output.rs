//! CSV renderings of results.

use std::fmt::Write as _;

use hyperrcd::{nmi, CurvatureReport, FlowState, Partition, SweepResult};

pub fn curvature_csv(report: &CurvatureReport) -> String {
    let mut out = String::from("edge_index,size,weight,W_h,d_h,kappa\n");
    for e in &report.edges {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            e.index, e.size, e.weight, e.transport, e.length, e.kappa
        );
    }
    out
}

pub fn flow_csv(trajectory: &[FlowState]) -> String {
    let mut out = String::from("k,edge_index,weight,kappa\n");
    for state in trajectory {
        for (l, (w, e)) in state.weights.iter().zip(&state.curvature.edges).enumerate() {
            let _ = writeln!(out, "{},{l},{w},{}", state.iteration, e.kappa);
        }
    }
    out
}

/// One row per cutoff; `nmi` is empty without ground truth.
pub fn sweep_csv(sweep: &SweepResult, truth: Option<&Partition>) -> hyperrcd::Result<String> {
    let mut out = String::from("cutoff,removed,num_communities,score,nmi\n");
    for e in &sweep.entries {
        let score = truth.map(|t| nmi(&e.partition, t)).transpose()?;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.cutoff,
            e.removed,
            e.partition.num_communities(),
            e.score,
            score.map_or_else(String::new, |v| v.to_string())
        );
    }
    Ok(out)
}
