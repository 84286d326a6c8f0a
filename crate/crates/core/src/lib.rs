//! Ollivier-Ricci curvature and Ricci flow on weighted hypergraphs, with
//! community detection by cutting the heavy hyperedges a flow produces.
//!
//! ```
//! use hyperrcd::{all_curvatures, Hypergraph};
//!
//! let g = Hypergraph::unweighted(3, vec![vec![0, 1, 2]]).unwrap();
//! let report = all_curvatures(&g, 0.5).unwrap();
//! assert!((report.edges[0].kappa - 0.75).abs() < 1e-12);
//! ```

pub mod curvature;
pub mod detection;
pub mod error;
pub mod flow;
pub mod hypergraph;
pub mod io;
pub mod measure;
pub mod metrics;
pub mod pipeline;
pub mod synthgen;
pub mod transport;

pub use curvature::{all_curvatures, hyperedge_curvature, CurvatureReport, EdgeCurvature};
pub use detection::{
    components, cut_above, sweep_supervised, sweep_unsupervised, Partition, SweepEntry, SweepResult,
};
pub use error::{Error, Result};
pub use flow::{flow_step, initial_state, run_flow, run_flow_with, FlowParams, FlowState};
pub use hypergraph::{
    clique_expansion, hyperedge_length, hyperedge_length_with, sssp, CliqueExpansion, DistanceCache,
    DistanceMatrix, Hypergraph, Metric, VertexId,
};
pub use measure::{all_measures, build_measure, ProbabilityMeasure};
pub use metrics::{nmi, ContingencyTable};
pub use pipeline::{
    check_budget, detect, run_generated, select, Detection, IterationSummary, Mode, RepeatedRun, RunConfig, RunReport, SweepPoint,
};
pub use synthgen::{generate, series, GenParams, Series};
pub use transport::{dual_certificate, wasserstein1, DualPotential, TransportPlan};
