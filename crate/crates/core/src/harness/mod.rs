//! Experiments that put computed solutions against the weighted estimates:
//! classification of `(α, s)`, ratio measurements, exact scale covariance,
//! frequency-localized constants and the polarization split.
//!
//! Reports speak of measured lower bounds and exponents. Nothing here
//! certifies or refutes an inequality.

mod data;
mod decomposition;
mod ratio;
mod region;
mod report;
mod scan;

pub use data::{DataFamily, DataKind, FamilyMember, FieldShape, Propagation, VelocityPolicy};
pub use decomposition::{decomposition_check, DecompositionReport};
pub use ratio::{compute_ratio, data_norm, solution_norm, RatioRecord};
pub use region::{classify_region, Region, RegionQuery, SEGMENT_TOL};
pub use report::ExperimentReport;
pub use scan::{
    frequency_constant_scan, scale_covariance_test, CovarianceResult, FittedExponent,
    FrequencyScan, MarginDiagnostic, ProbeScaling,
};
