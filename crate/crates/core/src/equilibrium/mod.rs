//! Mesh discretization, best-response tables, Nash search, β sweeps and the
//! analytic replies at maximal entanglement.

mod analytic;
mod mesh;
mod search;

pub use analytic::{
    analytic_best_response, analytic_response, mixed_cycle, no_psne_certificate, target_weight, MixedCycle,
};
pub use mesh::{MeshSpec, StrategyIndex};
pub use search::{
    best_response_table, find_pure_ne, find_pure_ne_with, linspace, sweep_beta, sweep_beta_with, Backend,
    BestResponseTable, NePair, NeResult, PayoffGrid, Responder, SweepReport, TIE_TOL,
};
