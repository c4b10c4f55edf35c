use crate::analysis::{WeightKind, WeightSpec};
use crate::error::{Error, Result};
use serde::Serialize;

/// A point `(α, s)` of the parameter plane in dimension `n`, with the kind
/// of weight it is paired with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionQuery {
    pub alpha: f64,
    pub s: f64,
    pub n: usize,
    pub weight_kind: WeightKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `0 < s < (n−1)/2` and `α = 1 + 2s`, spatial weight.
    OnTheorem1Segment,
    /// `1/2 < s < (n+1)/4` and `1 + 2s < α < 4s`, space-time weight.
    InTheorem2Triangle,
    Outside,
}

/// Tolerance on `|α − (1+2s)|` for membership of the scale-invariant line.
pub const SEGMENT_TOL: f64 = 1e-12;

impl RegionQuery {
    pub fn new(alpha: f64, s: f64, n: usize, weight_kind: WeightKind) -> Self {
        RegionQuery {
            alpha,
            s,
            n,
            weight_kind,
        }
    }

    /// The weight this query measures with. Only the power weights are
    /// meaningful here.
    pub fn weight(&self) -> Result<WeightSpec> {
        match self.weight_kind {
            WeightKind::SpatialPower => Ok(WeightSpec::spatial_power(self.alpha)),
            WeightKind::SpaceTimePower => Ok(WeightSpec::spacetime_power(self.alpha)),
            WeightKind::LogSpatial => Err(Error::Config(
                "region queries take a spatial or space-time power weight".into(),
            )),
        }
    }

    /// Exponent of the ratio under `f ↦ f(λ·)`, `g ↦ λg(λ·)`.
    pub fn covariance_exponent(&self) -> f64 {
        (self.alpha - 1.0 - 2.0 * self.s) / 2.0
    }
}

pub fn classify_region(q: &RegionQuery) -> Region {
    let n = q.n as f64;
    match q.weight_kind {
        WeightKind::SpatialPower => {
            if q.s > 0.0
                && q.s < (n - 1.0) / 2.0
                && (q.alpha - (1.0 + 2.0 * q.s)).abs() < SEGMENT_TOL
            {
                Region::OnTheorem1Segment
            } else {
                Region::Outside
            }
        }
        WeightKind::SpaceTimePower => {
            if q.s > 0.5
                && q.s < (n + 1.0) / 4.0
                && 1.0 + 2.0 * q.s < q.alpha
                && q.alpha < 4.0 * q.s
            {
                Region::InTheorem2Triangle
            } else {
                Region::Outside
            }
        }
        WeightKind::LogSpatial => Region::Outside,
    }
}
