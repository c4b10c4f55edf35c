use super::data::{DataFamily, DataKind, Propagation};
use super::ratio::{compute_ratio, RatioRecord};
use super::region::RegionQuery;
use crate::analysis::{lp_project, weighted_spacetime_norm, QuadratureConfig, WeightSpec};
use crate::elastic::half_wave_spectral;
use crate::error::{Error, Result};
use crate::numeric::{linear_fit, LinearFit};
use crate::spectral::{forward_transform, inverse_transform, Field, GridSpec};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Fitted power law with a 95% interval on the slope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FittedExponent {
    pub label: String,
    pub slope: f64,
    pub slope_stderr: f64,
    pub interval: (f64, f64),
    pub intercept: f64,
    pub r2: f64,
    /// The slope forced by exact scaling, when there is one.
    pub target: Option<f64>,
}

impl FittedExponent {
    fn from_fit(label: String, fit: &LinearFit, target: Option<f64>) -> Self {
        FittedExponent {
            label,
            slope: fit.slope,
            slope_stderr: fit.slope_stderr,
            interval: fit.slope_interval(),
            intercept: fit.intercept,
            r2: fit.r2,
            target,
        }
    }
}

/// A rescaled member that failed the wrap-around check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginDiagnostic {
    pub member_id: String,
    pub lambda: f64,
    pub margin: f64,
    pub kept: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceResult {
    pub fit: FittedExponent,
    pub records: Vec<RatioRecord>,
    pub margins: Vec<MarginDiagnostic>,
}

/// Measures `R(f_λ)` on nested grids (`grid.rescaled(λ)`) and fits
/// `log₂ R` against `log₂ λ`; the exact target is `(α − 1 − 2s)/2`.
/// Members whose wrap-around margin is not positive are dropped and logged.
pub fn scale_covariance_test(
    base: &DataFamily,
    lambdas: &[f64],
    q: &RegionQuery,
    prop: &Propagation,
    grid: &GridSpec,
    cfg: &QuadratureConfig,
) -> Result<CovarianceResult> {
    let mut ls = lambdas.to_vec();
    ls.sort_by(f64::total_cmp);
    ls.dedup();
    if ls.len() < 2 {
        return Err(Error::Range(format!(
            "scale covariance needs at least two distinct dilations, got {lambdas:?}"
        )));
    }
    let family = DataFamily {
        kind: DataKind::RescaledSequence {
            base: Box::new(match &base.kind {
                DataKind::RescaledSequence { base, .. } => (**base).clone(),
                k => k.clone(),
            }),
            lambdas: ls.clone(),
        },
        ..base.clone()
    };
    let members = family.members(grid, prop)?;
    let mut margins = Vec::new();
    let mut kept = Vec::new();
    for m in members {
        let margin = m.margin(prop.max_speed());
        let ok = margin > 0.0;
        if !ok {
            log::warn!(
                "dropping member {}: wrap-around margin {margin:.3} is not positive",
                m.id
            );
        }
        margins.push(MarginDiagnostic {
            member_id: m.id.clone(),
            lambda: m.lambda,
            margin,
            kept: ok,
        });
        if ok {
            kept.push(m);
        }
    }
    if kept.len() < 2 {
        return Err(Error::Config(format!(
            "only {} dilation(s) pass the wrap-around margin; enlarge the box or shorten the time window",
            kept.len()
        )));
    }
    let records = kept
        .par_iter()
        .map(|m| compute_ratio(m, q, prop, cfg))
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = records.iter().map(|r| r.lambda.log2()).collect();
    let y: Vec<f64> = records.iter().map(|r| r.ratio.log2()).collect();
    let fit = linear_fit(&x, &y).ok_or_else(|| Error::Range("degenerate dilation set".into()))?;
    Ok(CovarianceResult {
        fit: FittedExponent::from_fit(
            "log2 ratio vs log2 lambda".into(),
            &fit,
            Some(q.covariance_exponent()),
        ),
        records,
        margins,
    })
}

/// How the level-`k` probes relate to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProbeScaling {
    /// The level-`k` probe is the level-0 probe dilated by `2^k`, on the
    /// grid `grid.rescaled(2^k)`.
    Rescaled,
    /// All probes live on the given grid, with carrier `2^k`.
    FixedGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyScan {
    pub scaling: ProbeScaling,
    pub alpha: f64,
    pub n: usize,
    /// `(k, Ĉ_k)`.
    pub constants: Vec<(i32, f64)>,
    pub fit: FittedExponent,
    /// For `(α, s)`: the exponent `s = (n+1)/(4p)` with `p = (n+1)/(4s)`,
    /// and whether `1 < p < (n+1)/2` and `1 + (n+1)/(2p) < α < (n+1)/p`. Reported,
    /// never asserted.
    pub reference_exponent: f64,
    pub reference_p: f64,
    pub reference_in_range: bool,
}

/// Unit-speed half-wave probes at each level: a Gaussian of width `w`
/// modulated along one of `probe_count` evenly spaced directions, then
/// projected onto the dyadic annulus. Returns `Ĉ_k = max ‖e^{it|D|}P‖_w / ‖P‖_{L²}`
/// and the fitted slope of `log₂ Ĉ_k` against `k`, with the space-time
/// power weight `|(x,t)|^{−α}`.
#[allow(clippy::too_many_arguments)]
pub fn frequency_constant_scan(
    levels: &[i32],
    q: &RegionQuery,
    probe_count: usize,
    width: f64,
    scaling: ProbeScaling,
    grid: &GridSpec,
    cfg: &QuadratureConfig,
) -> Result<FrequencyScan> {
    if probe_count == 0 {
        return Err(Error::Config(
            "frequency scan needs at least one probe".into(),
        ));
    }
    let mut ks = levels.to_vec();
    ks.sort();
    ks.dedup();
    if ks.len() < 2 {
        return Err(Error::Range(
            "frequency scan needs at least two levels".into(),
        ));
    }
    let w = WeightSpec::spacetime_power(q.alpha);
    let tasks: Vec<(i32, usize)> = ks
        .iter()
        .flat_map(|&k| (0..probe_count).map(move |j| (k, j)))
        .collect();
    let values = tasks
        .par_iter()
        .map(|&(k, j)| {
            let (g, carrier, wk, level) = match scaling {
                ProbeScaling::Rescaled => {
                    let l = 2f64.powi(k);
                    (grid.rescaled(l)?, l, width / l, k)
                }
                ProbeScaling::FixedGrid => (*grid, 2f64.powi(k), width, k),
            };
            let theta = 2.0 * PI * j as f64 / probe_count as f64;
            let dir = [theta.cos(), theta.sin(), 0.0];
            let raw = Field::from_fn(&g, 1, |x| {
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                let phase = carrier * (dir[0] * x[0] + dir[1] * x[1]);
                [
                    Complex64::from_polar((-r2 / (2.0 * wk * wk)).exp(), phase),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ]
            });
            let probe = lp_project(&raw, level);
            let mass = probe.l2_norm();
            if !(mass > 0.0) {
                return Err(Error::Config(format!(
                    "probe at level {k} projects to zero on this grid"
                )));
            }
            let ph = forward_transform(&probe);
            let num = weighted_spacetime_norm(
                |t| inverse_transform(&half_wave_spectral(&ph, 1.0, t).expect("unit speed")),
                &w,
                &g,
                cfg,
            )?;
            Ok((k, num / mass))
        })
        .collect::<Result<Vec<_>>>()?;
    let constants: Vec<(i32, f64)> = ks
        .iter()
        .map(|&k| {
            let best = values
                .iter()
                .filter(|v| v.0 == k)
                .map(|v| v.1)
                .fold(0.0, f64::max);
            (k, best)
        })
        .collect();
    let x: Vec<f64> = constants.iter().map(|c| c.0 as f64).collect();
    let y: Vec<f64> = constants.iter().map(|c| c.1.log2()).collect();
    let fit = linear_fit(&x, &y).ok_or_else(|| Error::Range("degenerate level set".into()))?;
    let target = match scaling {
        ProbeScaling::Rescaled => Some((q.alpha - 1.0) / 2.0),
        ProbeScaling::FixedGrid => (q.alpha == 0.0).then_some(0.0),
    };
    let n = q.n as f64;
    let p = (n + 1.0) / (4.0 * q.s);
    let in_range = p > 1.0
        && p < (n + 1.0) / 2.0
        && 1.0 + (n + 1.0) / (2.0 * p) < q.alpha
        && q.alpha < (n + 1.0) / p;
    Ok(FrequencyScan {
        scaling,
        alpha: q.alpha,
        n: q.n,
        constants,
        fit: FittedExponent::from_fit("log2 C_k vs k".into(), &fit, target),
        reference_exponent: (n + 1.0) / (4.0 * p),
        reference_p: p,
        reference_in_range: in_range,
    })
}
