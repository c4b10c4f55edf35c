//! Norms and decompositions used to measure weighted space-time estimates:
//! homogeneous Sobolev norms, singular-weight space-time norms, the local
//! smoothing functional, Littlewood–Paley projections and A₂ products.

mod a2;
mod cutoff;
mod sobolev;
mod weight;
mod weighted;

pub use a2::{a2_product, a2_scan, A2Row, Cube, CubeFamily};
pub use cutoff::{lp_project, lp_range, DyadicCutoff};
pub use sobolev::{hs_norm, hs_norm_spectral, SobolevIndex};
pub use weight::{Admissibility, QuadratureConfig, WeightKind, WeightSpec};
pub use weighted::{
    local_smoothing_functional, local_smoothing_profile, log_weight_origin_cell,
    weighted_spacetime_norm,
};
