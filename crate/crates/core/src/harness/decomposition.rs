use super::ratio::data_norm;
use super::region::RegionQuery;
use crate::analysis::{hs_norm, weighted_spacetime_norm, QuadratureConfig};
use crate::elastic::{helmholtz_split, ElasticState, LameParams, Polarization, Propagator};
use crate::error::Result;
use serde::Serialize;

/// Consistency of the pressure/shear split for one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub s: f64,
    pub hs_full: f64,
    pub hs_pressure: f64,
    pub hs_shear: f64,
    /// `|‖f_P‖² + ‖f_S‖² − ‖f‖²| / ‖f‖²`.
    pub pythagoras_defect: f64,
    pub weighted_full: f64,
    pub weighted_shear: f64,
    pub weighted_pressure: f64,
    /// `‖u_Q‖_w + ‖u_P‖_w − ‖u‖_w`, nonnegative up to rounding.
    pub triangle_slack: f64,
    /// `‖u_Q‖_w / (‖f_S‖_{Ḣs} + ‖g_S‖_{Ḣ^{s−1}})`, absent when that data vanishes.
    pub shear_ratio: Option<f64>,
    pub pressure_ratio: Option<f64>,
}

impl DecompositionReport {
    /// Both identities hold to `tol` (relative).
    pub fn consistent(&self, tol: f64) -> bool {
        self.pythagoras_defect <= tol && self.triangle_slack >= -tol * self.weighted_full
    }
}

pub fn decomposition_check(
    state: &ElasticState,
    params: &LameParams,
    q: &RegionQuery,
    cfg: &QuadratureConfig,
) -> Result<DecompositionReport> {
    let w = q.weight()?;
    let (fp, fs) = helmholtz_split(state.f())?;
    let (gp, gs) = helmholtz_split(state.g())?;
    let hs_full = hs_norm(state.f(), q.s)?;
    let hs_pressure = hs_norm(&fp, q.s)?;
    let hs_shear = hs_norm(&fs, q.s)?;
    let full2 = hs_full * hs_full;
    let pythagoras_defect = if full2 > 0.0 {
        (hs_pressure * hs_pressure + hs_shear * hs_shear - full2).abs() / full2
    } else {
        0.0
    };
    let prop = Propagator::new(state, params);
    let grid = state.grid();
    let norm = |which| weighted_spacetime_norm(|t| prop.polarized(t, which), &w, grid, cfg);
    let weighted_full = norm(Polarization::Full)?;
    let weighted_shear = norm(Polarization::Shear)?;
    let weighted_pressure = norm(Polarization::Pressure)?;
    let ratio = |num: f64, den: f64| (den > 0.0).then(|| num / den);
    Ok(DecompositionReport {
        s: q.s,
        hs_full,
        hs_pressure,
        hs_shear,
        pythagoras_defect,
        weighted_full,
        weighted_shear,
        weighted_pressure,
        triangle_slack: weighted_shear + weighted_pressure - weighted_full,
        shear_ratio: ratio(weighted_shear, data_norm(&fs, &gs, q.s)?),
        pressure_ratio: ratio(weighted_pressure, data_norm(&fp, &gp, q.s)?),
    })
}
