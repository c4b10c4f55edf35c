use super::config::RunConfig;
use super::output::{num, Outcome, Table};
use crate::analysis::{
    a2_scan, lp_project, lp_range, CubeFamily, DyadicCutoff, QuadratureConfig, WeightKind,
};
use crate::elastic::{ElasticState, LameParams, Propagator};
use crate::error::{Error, Result};
use crate::harness::{
    classify_region, compute_ratio, decomposition_check, frequency_constant_scan,
    scale_covariance_test, DataFamily, DataKind, ExperimentReport, FieldShape, ProbeScaling,
    Propagation, RegionQuery, VelocityPolicy,
};
use crate::kernel::{decay_fit, log_spaced, DecayRegime};
use crate::spectral::{Field, GridSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid_from(c: &RunConfig) -> Result<GridSpec> {
    GridSpec::new(
        c.usize("n")?,
        c.usize("points")?,
        c.f64("half-width")?,
        c.usize("time-samples")?,
        c.f64("horizon")?,
    )
}

fn params_from(c: &RunConfig) -> Result<LameParams> {
    LameParams::new(c.f64("lame-lambda")?, c.f64("mu")?)
}

fn quadrature_from(c: &RunConfig) -> Result<QuadratureConfig> {
    QuadratureConfig::new(c.usize("refinement")?, c.f64("tolerance")?)
}

fn family_from(c: &RunConfig) -> Result<DataFamily> {
    let width = c.f64("width")?;
    let kind = match c
        .choice("family", &["gaussian", "modulated", "dipole"])?
        .as_str()
    {
        "gaussian" => DataKind::Gaussian { width },
        "modulated" => DataKind::ModulatedGaussian {
            width,
            level: c.i32("level")?,
        },
        _ => DataKind::Dipole { width },
    };
    let shape = match c
        .choice(
            "shape",
            &["x", "y", "z", "scalar", "solenoidal", "potential"],
        )?
        .as_str()
    {
        "x" => FieldShape::Directed(0),
        "y" => FieldShape::Directed(1),
        "z" => FieldShape::Directed(2),
        "scalar" => FieldShape::Scalar,
        "solenoidal" => FieldShape::Solenoidal,
        _ => FieldShape::Potential,
    };
    let policy = match c.choice("velocity", &["zero", "matched"])?.as_str() {
        "zero" => VelocityPolicy::Zero,
        _ => VelocityPolicy::MatchedVelocity,
    };
    Ok(DataFamily::new(kind, shape, policy))
}

fn weight_kind(c: &RunConfig) -> Result<WeightKind> {
    Ok(
        match c.choice("weight", &["spatial", "spacetime"])?.as_str() {
            "spatial" => WeightKind::SpatialPower,
            _ => WeightKind::SpaceTimePower,
        },
    )
}

fn grid_label(g: &GridSpec) -> String {
    format!(
        "n={};N={};L={};M={};T={}",
        g.dim(),
        g.points_per_axis(),
        num(g.half_width()),
        g.time_samples(),
        num(g.time_horizon())
    )
}

pub fn execute(c: &RunConfig) -> Result<Outcome> {
    match c.command.as_str() {
        "evolve" => evolve(c),
        "scan-ratio" => scan_ratio(c),
        "kernel-decay" => kernel_decay(c),
        "a2-scan" => a2(c),
        "lp-check" => lp_check(c),
        "report" => report(c),
        other => Err(Error::Config(format!("unknown command `{other}`"))),
    }
}

fn evolve(c: &RunConfig) -> Result<Outcome> {
    let grid = grid_from(c)?;
    let params = params_from(c)?;
    let prop = Propagation::Elastic(params);
    let member = family_from(c)?.member(&grid, 1.0, &prop)?;
    let margin = member.margin(params.max_speed());
    if margin <= 0.0 {
        log::warn!(
            "wrap-around margin {margin:.3} is not positive; enlarge half-width or shorten horizon"
        );
    }
    let state = ElasticState::new(member.f, member.g)?;
    let p = Propagator::new(&state, &params);
    let e0 = p.energy(0.0);
    let mut table = Table::new(&["t", "energy", "relative_drift", "l2_norm", "sup_norm"]);
    let mut plot = Vec::new();
    let mut worst: f64 = 0.0;
    for t in grid.times() {
        let u = p.displacement(t);
        let e = p.energy(t);
        let drift = if e0 > 0.0 { (e - e0).abs() / e0 } else { 0.0 };
        worst = worst.max(drift);
        table.push(vec![
            num(t),
            num(e),
            num(drift),
            num(u.l2_norm()),
            num(u.sup_norm()),
            grid_label(&grid),
            num(0.0),
            num(margin),
        ]);
        plot.push((t, e));
    }
    Ok(Outcome {
        table,
        plots: vec![("energy".into(), plot)],
        summary: vec![
            format!("energy at t=0: {}", num(e0)),
            format!("max relative energy drift: {}", num(worst)),
            format!("wrap-around margin: {}", num(margin)),
        ],
        ..Default::default()
    })
}

fn scan_ratio(c: &RunConfig) -> Result<Outcome> {
    let grid = grid_from(c)?;
    let cfg = quadrature_from(c)?;
    let q = RegionQuery::new(c.f64("alpha")?, c.f64("s")?, grid.dim(), weight_kind(c)?);
    let prop = match c.choice("mode", &["elastic", "scalar"])?.as_str() {
        "elastic" => Propagation::Elastic(params_from(c)?),
        _ => {
            let speed = c.f64("speed")?;
            if !(speed > 0.0) {
                return Err(Error::Config(format!(
                    "key `speed`: must be positive, got {speed}"
                )));
            }
            Propagation::ScalarHalfWave { speed }
        }
    };
    let family = family_from(c)?;
    let lambdas = c.f64_list("lambdas")?;
    let mut summary = vec![format!("region: {:?}", classify_region(&q))];
    let mut tol = std::collections::BTreeMap::new();
    tol.insert("singular_cell_tolerance".to_string(), cfg.tolerance());
    let (records, fit) = if lambdas.len() >= 2 {
        let r = scale_covariance_test(&family, &lambdas, &q, &prop, &grid, &cfg)?;
        for m in r.margins.iter().filter(|m| !m.kept) {
            summary.push(format!(
                "dropped lambda={} (margin {})",
                num(m.lambda),
                num(m.margin)
            ));
        }
        (r.records, Some(r.fit))
    } else {
        let lambda = lambdas.first().copied().unwrap_or(1.0);
        let m = family.member(&grid, lambda, &prop)?;
        if m.margin(prop.max_speed()) <= 0.0 {
            return Err(Error::Config(format!(
                "wrap-around margin {} is not positive; enlarge half-width or shorten horizon",
                num(m.margin(prop.max_speed()))
            )));
        }
        (vec![compute_ratio(&m, &q, &prop, &cfg)?], None)
    };
    let mut table = Table::new(&[
        "alpha",
        "s",
        "lambda",
        "numerator",
        "denominator",
        "ratio",
        "member",
    ]);
    let mut plot = Vec::new();
    for r in &records {
        table.push(vec![
            num(r.query.alpha),
            num(r.query.s),
            num(r.lambda),
            num(r.numerator),
            num(r.denominator),
            num(r.ratio),
            r.member_id.clone(),
            grid_label(&r.grid),
            num(r.quadrature.tolerance()),
            num(r.margin),
        ]);
        plot.push((r.lambda, r.ratio));
    }
    if let Some(f) = &fit {
        let target = f.target.unwrap_or(f64::NAN);
        summary.push(format!(
            "slope: measured {} (stderr {}), scaling exponent {}",
            num(f.slope),
            num(f.slope_stderr),
            num(target)
        ));
    }
    Ok(Outcome {
        table,
        plots: vec![("ratio".into(), plot)],
        summary,
        tolerances: tol,
        report: None,
    })
}

fn kernel_decay(c: &RunConfig) -> Result<Outcome> {
    let n = c.usize("n")?;
    let k = c.i32("k")?;
    let regime = match c.choice("regime", &["oncone", "offcone"])?.as_str() {
        "oncone" => DecayRegime::OnCone,
        _ => DecayRegime::OffCone { tau: c.f64("tau")? },
    };
    let (lo, hi, count) = (c.f64("dmin")?, c.f64("dmax")?, c.usize("count")?);
    if !(lo > 0.0 && hi > lo && count >= 3) {
        return Err(Error::Config(
            "keys `dmin`, `dmax`, `count`: need 0 < dmin < dmax and count >= 3".into(),
        ));
    }
    let fit = decay_fit(regime, k, n, &log_spaced(lo, hi, count))?;
    let tau = match regime {
        DecayRegime::OnCone => f64::NAN,
        DecayRegime::OffCone { tau } => tau,
    };
    let regime_name = c.options["regime"].clone();
    let mut table = Table::new(&["regime", "n", "k", "tau", "distance", "modulus"]);
    for (d, v) in &fit.samples {
        table.push(vec![
            regime_name.clone(),
            n.to_string(),
            k.to_string(),
            if tau.is_nan() {
                "cone".into()
            } else {
                num(tau)
            },
            num(*d),
            num(*v),
            "none".into(),
            num(1e-10),
            "na".into(),
        ]);
    }
    let mut summary = vec![format!(
        "slope: measured {} (stderr {}, r2 {}) over {} decades",
        num(fit.slope),
        num(fit.slope_stderr),
        num(fit.r2),
        num(fit.sample_range)
    )];
    if regime == DecayRegime::OnCone {
        let expect = -((n as f64) - 1.0) / 2.0;
        let verdict = if (fit.slope - expect).abs() <= 0.15 {
            "consistent with"
        } else {
            "differs from"
        };
        summary.push(format!(
            "{verdict} the stationary-phase rate {}",
            num(expect)
        ));
    }
    let mut tol = std::collections::BTreeMap::new();
    tol.insert("kernel_relative_tolerance".to_string(), 1e-10);
    Ok(Outcome {
        table,
        plots: vec![("decay".into(), fit.samples.clone())],
        summary,
        tolerances: tol,
        report: None,
    })
}

fn a2(c: &RunConfig) -> Result<Outcome> {
    let n_total = c.usize("n-total")?;
    let family = CubeFamily {
        sides: c.f64_list("sides")?,
        offsets: c.f64_list("offsets")?,
    };
    let rows = a2_scan(&c.f64_list("alphas")?, n_total, &family)?;
    let mut table = Table::new(&["alpha", "offset", "side", "product"]);
    let mut plot = Vec::new();
    let mut summary = Vec::new();
    for r in &rows {
        for (offset, side, v) in &r.values {
            table.push(vec![
                num(r.alpha),
                num(*offset),
                num(*side),
                num(*v),
                format!("n_total={n_total}"),
                num(1e-12),
                "na".into(),
            ]);
        }
        plot.push((r.alpha, r.family_max));
        summary.push(format!(
            "alpha={}: origin-centered max {}, family max {}",
            num(r.alpha),
            num(r.origin_max),
            num(r.family_max)
        ));
    }
    Ok(Outcome {
        table,
        plots: vec![("a2".into(), plot)],
        summary,
        ..Default::default()
    })
}

fn lp_check(c: &RunConfig) -> Result<Outcome> {
    let (lo, hi, samples) = (c.i32("lo")?, c.i32("hi")?, c.usize("samples")?);
    if hi <= lo || samples < 2 {
        return Err(Error::Config(
            "keys `lo`, `hi`, `samples`: need lo < hi and samples >= 2".into(),
        ));
    }
    let mut table = Table::new(&["radius", "partition_sum", "deviation"]);
    let mut plot = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let e = lo as f64 + (hi - lo) as f64 * i as f64 / (samples - 1) as f64;
        let t = 2f64.powf(e);
        let sum = DyadicCutoff::partition_sum(t, lo - 2, hi + 2);
        let dev = (sum - 1.0).abs();
        worst = worst.max(dev);
        table.push(vec![
            num(t),
            num(sum),
            num(dev),
            "none".into(),
            num(1e-12),
            "na".into(),
        ]);
        plot.push((t, dev));
    }

    let n = c.usize("n")?;
    let grid = GridSpec::new(n, c.usize("points")?, 8.0, 2, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let values: Vec<Complex64> = (0..grid.node_count())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let f = Field::from_values(&grid, 1, values)?.centered();
    let levels: Vec<i32> = lp_range(&grid).collect();
    let pieces: Vec<Field> = levels.iter().map(|&k| lp_project(&f, k)).collect();
    let mut sum = Field::zeros(&grid, 1);
    for p in &pieces {
        sum = sum.add(p)?;
    }
    let scale = f.sup_norm();
    let reconstruction = sum.max_abs_diff(&f) / scale;
    let mut annihilation: f64 = 0.0;
    for (a, &k) in levels.iter().enumerate() {
        for &j in &levels {
            if (j - k).abs() >= 2 {
                annihilation = annihilation.max(lp_project(&pieces[a], j).sup_norm() / scale);
            }
        }
    }
    let mut tol = std::collections::BTreeMap::new();
    tol.insert("partition_of_unity".to_string(), 1e-12);
    tol.insert("annihilation".to_string(), 1e-12);
    tol.insert("reconstruction".to_string(), 1e-10);
    let summary = vec![
        format!("partition-of-unity max deviation: {}", num(worst)),
        format!("annihilation max (|j-k| >= 2): {}", num(annihilation)),
        format!("reconstruction error: {}", num(reconstruction)),
    ];
    for (what, achieved, requested) in [
        ("partition of unity", worst, 1e-12),
        ("projection annihilation", annihilation, 1e-12),
        ("reconstruction", reconstruction, 1e-10),
    ] {
        if !(achieved < requested) {
            return Err(Error::Accuracy {
                what: what.into(),
                achieved,
                requested,
            });
        }
    }
    Ok(Outcome {
        table,
        plots: vec![("partition".into(), plot)],
        summary,
        tolerances: tol,
        report: None,
    })
}

fn report(c: &RunConfig) -> Result<Outcome> {
    let grid = grid_from(c)?;
    let cfg = quadrature_from(c)?;
    let params = params_from(c)?;
    let n = grid.dim();
    let (alpha, s) = (c.f64("alpha")?, c.f64("s")?);
    let scaling = match c.choice("scaling", &["rescaled", "fixed"])?.as_str() {
        "rescaled" => ProbeScaling::Rescaled,
        _ => ProbeScaling::FixedGrid,
    };
    let mut rep = ExperimentReport {
        config: c.options.clone(),
        ..Default::default()
    };
    for kind in [WeightKind::SpatialPower, WeightKind::SpaceTimePower] {
        let q = RegionQuery::new(alpha, s, n, kind);
        rep.classifications.push((q, classify_region(&q)));
    }
    let q = RegionQuery::new(alpha, s, n, WeightKind::SpaceTimePower);
    let scan = frequency_constant_scan(
        &c.i32_list("levels")?,
        &q,
        c.usize("probes")?,
        c.f64("probe-width")?,
        scaling,
        &grid,
        &cfg,
    )?;
    let mut table = Table::new(&["k", "constant", "alpha", "s", "scaling"]);
    for (k, v) in &scan.constants {
        let g = match scaling {
            ProbeScaling::Rescaled => grid.rescaled(2f64.powi(*k))?,
            ProbeScaling::FixedGrid => grid,
        };
        table.push(vec![
            k.to_string(),
            num(*v),
            num(alpha),
            num(s),
            c.options["scaling"].clone(),
            grid_label(&g),
            num(cfg.tolerance()),
            "na".into(),
        ]);
    }
    let plot = scan
        .constants
        .iter()
        .map(|(k, v)| (*k as f64, *v))
        .collect();
    rep.frequency_scans.push(scan);
    let prop = Propagation::Elastic(params);
    let m = DataFamily::new(
        DataKind::Gaussian { width: 1.0 },
        FieldShape::Directed(0),
        VelocityPolicy::MatchedVelocity,
    )
    .member(&grid, 1.0, &prop)?;
    let state = ElasticState::new(m.f, m.g)?;
    rep.decompositions
        .push(decomposition_check(&state, &params, &q, &cfg)?);
    let text = rep.render();
    let mut tol = std::collections::BTreeMap::new();
    tol.insert("singular_cell_tolerance".to_string(), cfg.tolerance());
    Ok(Outcome {
        table,
        plots: vec![("constants".into(), plot)],
        summary: text
            .lines()
            .filter(|l| !l.starts_with("config "))
            .map(String::from)
            .collect(),
        tolerances: tol,
        report: Some(text),
    })
}
