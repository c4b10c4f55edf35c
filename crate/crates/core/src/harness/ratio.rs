use super::data::{FamilyMember, Propagation};
use super::region::RegionQuery;
use crate::analysis::{hs_norm, weighted_spacetime_norm, QuadratureConfig};
use crate::elastic::{half_wave_spectral, ElasticState, Propagator};
use crate::error::{Error, Result};
use crate::spectral::{forward_transform, inverse_transform, Field, GridSpec};
use serde::Serialize;

/// One measured ratio `‖u‖_w / (‖f‖_{Ḣs} + ‖g‖_{Ḣ^{s−1}})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRecord {
    pub query: RegionQuery,
    pub member_id: String,
    pub lambda: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
    pub grid: GridSpec,
    pub quadrature: QuadratureConfig,
    /// Wrap-around margin `L − (T + r c)` of the member.
    pub margin: f64,
}

/// Weighted space-time norm of the solution launched by the member.
pub fn solution_norm(
    member: &FamilyMember,
    q: &RegionQuery,
    prop: &Propagation,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let w = q.weight()?;
    match prop {
        Propagation::Elastic(params) => {
            let state = ElasticState::new(member.f.clone(), member.g.clone())?;
            let p = Propagator::new(&state, params);
            weighted_spacetime_norm(|t| p.displacement(t), &w, &member.grid, cfg)
        }
        Propagation::ScalarHalfWave { speed } => {
            let fh = forward_transform(&member.f);
            half_wave_spectral(&fh, *speed, 0.0)?;
            weighted_spacetime_norm(
                |t| inverse_transform(&half_wave_spectral(&fh, *speed, t).expect("speed checked")),
                &w,
                &member.grid,
                cfg,
            )
        }
    }
}

/// `‖f‖_{Ḣs} + ‖g‖_{Ḣ^{s−1}}`; an identically zero field contributes 0 for
/// any order.
pub fn data_norm(f: &Field, g: &Field, s: f64) -> Result<f64> {
    let part = |h: &Field, order: f64| -> Result<f64> {
        if h.values().iter().all(|v| v.norm_sqr() == 0.0) {
            Ok(0.0)
        } else {
            hs_norm(h, order)
        }
    };
    Ok(part(f, s)? + part(g, s - 1.0)?)
}

/// Measures the ratio for one member. In scalar mode the solution is
/// `e^{itc|D|} f`; `g` then only enters the denominator.
pub fn compute_ratio(
    member: &FamilyMember,
    q: &RegionQuery,
    prop: &Propagation,
    cfg: &QuadratureConfig,
) -> Result<RatioRecord> {
    if member.grid.dim() != q.n {
        return Err(Error::Config(format!(
            "member lives in dimension {} but the query is for n = {}",
            member.grid.dim(),
            q.n
        )));
    }
    let denominator = data_norm(&member.f, &member.g, q.s)?;
    if !(denominator > 0.0) {
        return Err(Error::Domain(format!(
            "member {} has zero data norm; the ratio is undefined",
            member.id
        )));
    }
    let numerator = solution_norm(member, q, prop, cfg)?;
    let ratio = numerator / denominator;
    if !ratio.is_finite() {
        return Err(Error::Domain(format!(
            "ratio for member {} is not finite",
            member.id
        )));
    }
    Ok(RatioRecord {
        query: *q,
        member_id: member.id.clone(),
        lambda: member.lambda,
        numerator,
        denominator,
        ratio,
        grid: member.grid,
        quadrature: *cfg,
        margin: member.margin(prop.max_speed()),
    })
}
