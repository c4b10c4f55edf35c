use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WeightKind {
    /// `|x|^{-α}`.
    SpatialPower,
    /// `|(x, t)|^{-α}`.
    SpaceTimePower,
    /// `|log|x||^{-1-2ε} |x|^{-1}`.
    LogSpatial,
}

/// A singular weight on space-time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightSpec {
    kind: WeightKind,
    alpha: f64,
    epsilon: f64,
}

/// How the weight's singularity is treated on a given dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    /// Locally integrable; the singular node gets a finite quadrature weight.
    Integrable,
    /// Exactly at the integrability endpoint (`α = n` spatial, `α = n+1`
    /// space-time). Admitted only for fields vanishing at the singular set,
    /// whose node is then dropped.
    Critical,
}

impl WeightSpec {
    pub fn spatial_power(alpha: f64) -> Self {
        WeightSpec {
            kind: WeightKind::SpatialPower,
            alpha,
            epsilon: 0.0,
        }
    }

    pub fn spacetime_power(alpha: f64) -> Self {
        WeightSpec {
            kind: WeightKind::SpaceTimePower,
            alpha,
            epsilon: 0.0,
        }
    }

    pub fn log_spatial(epsilon: f64) -> Self {
        WeightSpec {
            kind: WeightKind::LogSpatial,
            alpha: 1.0,
            epsilon,
        }
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Dimension of the set over which the weight is homogeneous: `n` for
    /// spatial weights, `n + 1` for space-time weights.
    pub fn homogeneity_dim(&self, dim: usize) -> usize {
        match self.kind {
            WeightKind::SpaceTimePower => dim + 1,
            _ => dim,
        }
    }

    /// Checks `0 ≤ α < n` (spatial) or `0 ≤ α < n+1` (space-time), with the
    /// endpoint reported as [`Admissibility::Critical`]; `ε > 0` for the
    /// logarithmic weight.
    pub fn admissibility(&self, dim: usize) -> Result<Admissibility> {
        match self.kind {
            WeightKind::LogSpatial => {
                if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
                    return Err(Error::Domain(format!(
                        "log weight needs epsilon > 0, got {}",
                        self.epsilon
                    )));
                }
                Ok(Admissibility::Integrable)
            }
            _ => {
                let top = self.homogeneity_dim(dim) as f64;
                let a = self.alpha;
                if !(a.is_finite() && a >= 0.0 && a <= top) {
                    return Err(Error::Domain(format!(
                        "weight exponent alpha = {a} outside [0, {top}) for {:?} in dimension {dim}",
                        self.kind
                    )));
                }
                if a == top {
                    Ok(Admissibility::Critical)
                } else {
                    Ok(Admissibility::Integrable)
                }
            }
        }
    }

    /// Pointwise value at `(x, t)` away from the singular set. The log weight
    /// is set to 0 on the unit sphere where its logarithm vanishes.
    pub fn value(&self, r2: f64, t: f64) -> f64 {
        match self.kind {
            WeightKind::SpatialPower => {
                if self.alpha == 0.0 {
                    1.0
                } else {
                    r2.powf(-0.5 * self.alpha)
                }
            }
            WeightKind::SpaceTimePower => {
                if self.alpha == 0.0 {
                    1.0
                } else {
                    (r2 + t * t).powf(-0.5 * self.alpha)
                }
            }
            WeightKind::LogSpatial => {
                let r = r2.sqrt();
                let l = r.ln().abs();
                if l == 0.0 {
                    0.0
                } else {
                    l.powf(-1.0 - 2.0 * self.epsilon) / r
                }
            }
        }
    }
}

/// Controls the singular-cell quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    singular_cell_refinement: usize,
    tolerance: f64,
}

impl QuadratureConfig {
    pub fn new(singular_cell_refinement: usize, tolerance: f64) -> Result<Self> {
        if singular_cell_refinement < 4 {
            return Err(Error::Parameter(format!(
                "singular_cell_refinement must be at least 4, got {singular_cell_refinement}"
            )));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Parameter(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(QuadratureConfig {
            singular_cell_refinement,
            tolerance,
        })
    }

    pub fn singular_cell_refinement(&self) -> usize {
        self.singular_cell_refinement
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Same tolerance, refinement doubled.
    pub fn refined(&self) -> Self {
        QuadratureConfig {
            singular_cell_refinement: 2 * self.singular_cell_refinement,
            tolerance: self.tolerance,
        }
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            singular_cell_refinement: 4,
            tolerance: 1e-10,
        }
    }
}
