use super::weight::{Admissibility, QuadratureConfig, WeightKind, WeightSpec};
use crate::error::{Error, Result};
use crate::numeric::{lattice_zeta, pairwise_sum, upper_incomplete_gamma, GaussLegendre};
use crate::spectral::{Field, GridSpec};
use rayon::prelude::*;

/// Relative size below which a field counts as vanishing at the singular set.
const VANISHING: f64 = 1e-10;

fn check_sample(u: &Field, grid: &GridSpec) -> Result<()> {
    if u.grid() != grid {
        return Err(Error::Parameter(
            "sampled field does not live on the norm's grid".into(),
        ));
    }
    Ok(())
}

fn squared_radii(grid: &GridSpec) -> Vec<f64> {
    (0..grid.node_count())
        .map(|i| {
            let x = grid.node(i);
            x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
        })
        .collect()
}

fn require_vanishing(u: &Field, origin: usize, what: &str) -> Result<()> {
    let peak = (0..u.slab_len())
        .map(|i| u.norm_sqr_at(i))
        .fold(0.0, f64::max);
    let at_origin = u.norm_sqr_at(origin);
    if at_origin > VANISHING * VANISHING * peak {
        return Err(Error::Domain(format!(
            "{what}: the weight sits at its integrability endpoint and the field does not \
             vanish at the singular point (|u|² = {at_origin:.3e}); the integral diverges"
        )));
    }
    Ok(())
}

/// `∫_{[−a, a]ⁿ} |log|x||^{−1−2ε} |x|^{−1} dx` for `a√n < 1`.
///
/// The radial integral is done in closed form,
/// `∫_0^b r^{n−2} (−log r)^{−1−2ε} dr = (n−1)^{2ε} Γ(−2ε, −(n−1) log b)`,
/// leaving a smooth integral over the cube faces,
/// `2n·2^{n−1} ∫_{[0,1]^{n−1}} G(a√(1+|u|²)) (1+|u|²)^{−n/2} du`,
/// which is evaluated by Gauss–Legendre with the order doubled from
/// `2·singular_cell_refinement` until the relative change is below the
/// tolerance.
pub fn log_weight_origin_cell(
    dim: usize,
    a: f64,
    epsilon: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    if !(a > 0.0 && a * (dim as f64).sqrt() < 1.0) {
        return Err(Error::Domain(format!(
            "origin cell of half-width {a} meets the unit sphere where the log weight is singular"
        )));
    }
    if dim == 1 {
        return Ok((-a.ln()).powf(-2.0 * epsilon) / epsilon);
    }
    let m = (dim - 1) as f64;
    let radial =
        |b: f64| m.powf(2.0 * epsilon) * upper_incomplete_gamma(-2.0 * epsilon, -m * b.ln());
    let faces = (2 * dim) as f64 * 2f64.powi(dim as i32 - 1);
    let angular = |order: usize| -> f64 {
        let gl = GaussLegendre::new(order);
        let nodes: Vec<(f64, f64)> = gl
            .nodes
            .iter()
            .zip(&gl.weights)
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        let mut terms = Vec::with_capacity(order.pow(dim as u32 - 1));
        if dim == 2 {
            for (u, w) in &nodes {
                let s = 1.0 + u * u;
                terms.push(w * radial(a * s.sqrt()) * s.powf(-1.0));
            }
        } else {
            for (u, wu) in &nodes {
                for (v, wv) in &nodes {
                    let s = 1.0 + u * u + v * v;
                    terms.push(wu * wv * radial(a * s.sqrt()) * s.powf(-1.5));
                }
            }
        }
        faces * pairwise_sum(&terms)
    };
    let mut order = 2 * q.singular_cell_refinement();
    let mut prev = angular(order);
    while order < 1024 {
        order *= 2;
        let next = angular(order);
        let change = (next - prev).abs() / next.abs();
        if change < q.tolerance() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Accuracy {
        what: "log-weight origin cell".into(),
        achieved: (angular(order) - prev).abs() / prev.abs(),
        requested: q.tolerance(),
    })
}

/// Weighted space-time norm
/// `(∫_{−T}^{T} Σ_x Δxⁿ |u(x,t)|² w(x,t) dt)^{1/2}`, trapezoid rule in time.
///
/// Nodes away from the singular set carry `Δxⁿ w(x, t)`. The singular node
/// carries a finite quadrature weight instead:
///
/// - power weights: `−V·Z_Λ(α/2)`, with `Λ` the lattice of node spacings
///   (`Δx` in space, plus `Δt` for space-time weights), `V` its cell volume
///   and `Z_Λ` its zeta function. This is the weight that makes the lattice
///   sum exact to the next order for a smooth factor multiplying `|·|^{−α}`;
///   space-time weights therefore need an odd number of time samples so that
///   `t = 0` is a node.
/// - the log weight: its exact integral over the origin cell.
///
/// At the integrability endpoint the field must vanish at the singular
/// point, and that node is dropped.
pub fn weighted_spacetime_norm<S>(
    u_sampler: S,
    w: &WeightSpec,
    grid: &GridSpec,
    q: &QuadratureConfig,
) -> Result<f64>
where
    S: Fn(f64) -> Field + Sync,
{
    let dim = grid.dim();
    let admissibility = w.admissibility(dim)?;
    let volume = grid.cell_volume();
    let dx = grid.dx();
    let origin = grid.origin_index();
    let times = grid.times();
    let tweights = grid.time_weights();
    let zeta_tol = 1e-16;

    // Spatial weight array (all kinds); space-time weights recompute per t.
    let r2 = squared_radii(grid);
    let spatial: Vec<f64> = r2.iter().map(|&r| volume * w.value(r, 0.0)).collect();

    let (origin_weight, singular_time) = match (w.kind(), admissibility) {
        (_, Admissibility::Critical) => (0.0, None),
        (WeightKind::SpatialPower, _) => (
            -volume * lattice_zeta(&vec![dx; dim], 0.5 * w.alpha(), zeta_tol),
            None,
        ),
        (WeightKind::SpaceTimePower, _) => {
            let t0 = if w.alpha() == 0.0 {
                None
            } else {
                Some(grid.time_origin_index().ok_or_else(|| {
                    Error::Config(format!(
                        "space-time weight needs an odd number of time samples so that t = 0 is a node, got {}",
                        grid.time_samples()
                    ))
                })?)
            };
            let mut spacings = vec![dx; dim];
            spacings.push(grid.time_step());
            // Space-time cell volume divided by the trapezoid weight Δt of the
            // interior t = 0 node.
            (
                -volume * lattice_zeta(&spacings, 0.5 * w.alpha(), zeta_tol),
                t0,
            )
        }
        (WeightKind::LogSpatial, _) => {
            (log_weight_origin_cell(dim, 0.5 * dx, w.epsilon(), q)?, None)
        }
    };

    let slices: Vec<Result<f64>> = times
        .par_iter()
        .enumerate()
        .map(|(it, &t)| {
            let u = u_sampler(t);
            check_sample(&u, grid)?;
            let mut terms = Vec::with_capacity(r2.len());
            for i in 0..r2.len() {
                let mass = u.norm_sqr_at(i);
                let weight = match w.kind() {
                    WeightKind::SpaceTimePower => {
                        if i == origin && singular_time == Some(it) {
                            origin_weight
                        } else if i == origin && w.alpha() != 0.0 && t == 0.0 {
                            // critical endpoint at (0, 0)
                            require_vanishing(&u, origin, "space-time weight")?;
                            0.0
                        } else {
                            volume * w.value(r2[i], t)
                        }
                    }
                    _ => {
                        if i == origin && w.alpha() != 0.0 {
                            if admissibility == Admissibility::Critical {
                                require_vanishing(&u, origin, "spatial weight")?;
                            }
                            origin_weight
                        } else {
                            spatial[i]
                        }
                    }
                };
                terms.push(weight * mass);
            }
            Ok(tweights[it] * pairwise_sum(&terms))
        })
        .collect();
    let slices = slices.into_iter().collect::<Result<Vec<f64>>>()?;
    let total = pairwise_sum(&slices);
    Ok(total.max(0.0).sqrt())
}

/// `(R, (1/R) ∫_{|x|<R} ∫_{−T}^{T} |u|² dt dx)` for dyadic `R = 2^m` between
/// the grid spacing and the half-width of the box.
pub fn local_smoothing_profile<S>(u_sampler: S, grid: &GridSpec) -> Result<Vec<(f64, f64)>>
where
    S: Fn(f64) -> Field + Sync,
{
    let lo = grid.dx().log2().ceil() as i32;
    let hi = grid.half_width().log2().floor() as i32;
    let radii: Vec<f64> = (lo..=hi).map(|m| 2f64.powi(m)).collect();
    let r2 = squared_radii(grid);
    let times = grid.times();
    let tweights = grid.time_weights();
    let per_time: Vec<Result<Vec<f64>>> = times
        .par_iter()
        .enumerate()
        .map(|(it, &t)| {
            let u = u_sampler(t);
            check_sample(&u, grid)?;
            Ok(radii
                .iter()
                .map(|&r| {
                    let terms: Vec<f64> = (0..r2.len())
                        .filter(|&i| r2[i] < r * r)
                        .map(|i| u.norm_sqr_at(i))
                        .collect();
                    tweights[it] * grid.cell_volume() * pairwise_sum(&terms)
                })
                .collect())
        })
        .collect();
    let per_time = per_time.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(radii
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let column: Vec<f64> = per_time.iter().map(|row| row[k]).collect();
            (r, pairwise_sum(&column) / r)
        })
        .collect())
}

/// `max_R (1/R) ∫_{|x|<R} ∫_{−T}^{T} |u|² dt dx` over dyadic radii that fit
/// in the box.
pub fn local_smoothing_functional<S>(u_sampler: S, grid: &GridSpec) -> Result<f64>
where
    S: Fn(f64) -> Field + Sync,
{
    Ok(local_smoothing_profile(u_sampler, grid)?
        .into_iter()
        .map(|(_, v)| v)
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::half_wave;
    use std::f64::consts::PI;

    fn gaussian(grid: &GridSpec, width: f64) -> Field {
        Field::scalar_from_fn(grid, |x| {
            (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * width * width)).exp()
        })
    }

    #[test]
    fn unweighted_static_field() {
        let grid = GridSpec::new(2, 64, 8.0, 9, 1.5).unwrap();
        let f = gaussian(&grid, 1.0);
        let q = QuadratureConfig::default();
        for w in [
            WeightSpec::spatial_power(0.0),
            WeightSpec::spacetime_power(0.0),
        ] {
            let v = weighted_spacetime_norm(|_| f.clone(), &w, &grid, &q).unwrap();
            // ∫∫ e^{-|x|²} dx dt = π · 2T
            let exact = (PI * 3.0).sqrt();
            assert!((v - exact).abs() < 1e-10 * exact, "{v} vs {exact}");
        }
    }

    /// Smooth radial profile with compact support in |x| < 1.
    fn smooth_indicator(r: f64) -> f64 {
        if r >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - r * r)).exp()
        }
    }

    /// ∫_{ℝ²} |x|^{-α} χ(|x|)² dx = 2π ∫_0^1 r^{1-α} χ(r)² dr by Gauss–Legendre
    /// panels in r^{2-α}-graded coordinates.
    fn radial_oracle(alpha: f64) -> f64 {
        let gl = GaussLegendre::new(40);
        let p = 2.0 - alpha;
        // substitute r = s^{1/p}: r^{1-α} dr = ds / p
        let mut acc = 0.0;
        let panels = 64;
        for k in 0..panels {
            let a = k as f64 / panels as f64;
            let b = (k + 1) as f64 / panels as f64;
            acc += gl.integrate(a, b, |s| smooth_indicator(s.powf(1.0 / p)).powi(2) / p);
        }
        2.0 * PI * acc
    }

    #[test]
    fn static_indicator_against_radial_oracle() {
        for alpha in [0.5, 1.0, 1.5] {
            let exact = radial_oracle(alpha) * 2.0;
            let grid = GridSpec::new(2, 128, 2.0, 3, 1.0).unwrap();
            let f = Field::scalar_from_fn(&grid, |x| {
                smooth_indicator((x[0] * x[0] + x[1] * x[1]).sqrt())
            });
            let q = QuadratureConfig::default();
            let v = weighted_spacetime_norm(
                |_| f.clone(),
                &WeightSpec::spatial_power(alpha),
                &grid,
                &q,
            )
            .unwrap();
            let rel = (v * v - exact).abs() / exact;
            assert!(rel < 1e-4, "alpha = {alpha}: rel {rel}");
        }
    }

    #[test]
    fn substitution_law_on_nested_grids() {
        let q = QuadratureConfig::default();
        let base = GridSpec::new(2, 64, 8.0, 33, 2.0).unwrap();
        let half = base.rescaled(2.0).unwrap();
        let f = gaussian(&base, 1.0);
        let sampler = |grid: GridSpec, lambda: f64| {
            let data = Field::scalar_from_fn(&grid, |x| {
                (-(x[0] * x[0] + x[1] * x[1]) * lambda * lambda / 2.0).exp()
            });
            move |t: f64| half_wave(&data, 1.0, t).unwrap()
        };
        assert_eq!(f.slab_len(), base.node_count());
        for w in [
            WeightSpec::spatial_power(1.2),
            WeightSpec::spacetime_power(2.2),
        ] {
            let a = w.alpha();
            let u = weighted_spacetime_norm(sampler(base, 1.0), &w, &base, &q).unwrap();
            let v = weighted_spacetime_norm(sampler(half, 2.0), &w, &half, &q).unwrap();
            let expect = 2f64.powf((a - 3.0) / 2.0) * u;
            assert!((v - expect).abs() < 1e-2 * expect, "{v} vs {expect}");
        }
    }

    #[test]
    fn refinement_doubling_is_stable() {
        let grid = GridSpec::new(3, 16, 4.0, 5, 0.5).unwrap();
        let f = gaussian(&grid, 0.8);
        let q = QuadratureConfig::new(4, 1e-9).unwrap();
        for w in [
            WeightSpec::log_spatial(0.25),
            WeightSpec::spatial_power(1.5),
            WeightSpec::spacetime_power(2.5),
        ] {
            let a = weighted_spacetime_norm(|_| f.clone(), &w, &grid, &q).unwrap();
            let b = weighted_spacetime_norm(|_| f.clone(), &w, &grid, &q.refined()).unwrap();
            assert!((a - b).abs() < 2.0 * q.tolerance() * a, "{w:?}");
        }
    }

    #[test]
    fn log_cell_matches_direct_quadrature() {
        // 2-D cell of half-width 0.1: polar integral on the inscribed disc
        // plus a fine tensor rule on the corners.
        let q = QuadratureConfig::new(4, 1e-12).unwrap();
        let eps = 0.3;
        let a = 0.1;
        let cell = log_weight_origin_cell(2, a, eps, &q).unwrap();
        let w = WeightSpec::log_spatial(eps);
        let disc = 2.0 * PI * upper_incomplete_gamma(-2.0 * eps, -a.ln());
        let m = 2000;
        let h = 2.0 * a / m as f64;
        let mut corners = 0.0;
        for i in 0..m {
            for j in 0..m {
                let x = -a + (i as f64 + 0.5) * h;
                let y = -a + (j as f64 + 0.5) * h;
                let r2 = x * x + y * y;
                if r2 >= a * a {
                    corners += w.value(r2, 0.0) * h * h;
                }
            }
        }
        let direct = disc + corners;
        assert!((cell - direct).abs() < 1e-4 * cell, "{cell} vs {direct}");
        assert!(log_weight_origin_cell(2, 0.8, eps, &q).is_err());
    }

    #[test]
    fn spacetime_weight_needs_odd_time_samples() {
        let grid = GridSpec::new(2, 16, 4.0, 8, 1.0).unwrap();
        let f = gaussian(&grid, 1.0);
        let q = QuadratureConfig::default();
        let err =
            weighted_spacetime_norm(|_| f.clone(), &WeightSpec::spacetime_power(1.0), &grid, &q)
                .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        let err =
            weighted_spacetime_norm(|_| f.clone(), &WeightSpec::spatial_power(2.5), &grid, &q)
                .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn critical_endpoint_needs_vanishing_data() {
        let grid = GridSpec::new(2, 128, 6.0, 5, 1.0).unwrap();
        let q = QuadratureConfig::default();
        let even = gaussian(&grid, 1.0);
        let odd =
            Field::scalar_from_fn(&grid, |x| x[0] * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp());
        let w = WeightSpec::spatial_power(2.0);
        assert!(matches!(
            weighted_spacetime_norm(|_| even.clone(), &w, &grid, &q),
            Err(Error::Domain(_))
        ));
        let v = weighted_spacetime_norm(|_| odd.clone(), &w, &grid, &q).unwrap();
        // ∫ x₁² |x|^{-2} e^{-|x|²} dx = π/2, times 2T; the dropped origin
        // node costs O(Δx²).
        let exact = (PI / 2.0 * 2.0).sqrt();
        assert!((v - exact).abs() < 2e-3 * exact, "{v} vs {exact}");
    }

    #[test]
    fn local_smoothing_basics() {
        let grid = GridSpec::new(3, 32, 8.0, 5, 1.0).unwrap();
        assert_eq!(
            local_smoothing_functional(|_| Field::zeros(&grid, 1), &grid).unwrap(),
            0.0
        );
        // static plateau supported in |x| < 1.5: the profile decays like 1/R
        // from R = 2 on and peaks there
        let f = Field::scalar_from_fn(&grid, |x| {
            let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            if r < 1.3 {
                1.0
            } else {
                smooth_indicator((r - 1.3) / 0.2)
            }
        });
        let profile = local_smoothing_profile(|_| f.clone(), &grid).unwrap();
        let best = profile
            .iter()
            .cloned()
            .fold((0.0, 0.0), |acc, p| if p.1 > acc.1 { p } else { acc });
        assert_eq!(best.0, 2.0);
        let at2 = profile.iter().find(|p| p.0 == 2.0).unwrap().1;
        let at8 = profile.iter().find(|p| p.0 == 8.0).unwrap().1;
        assert!((at8 * 4.0 - at2).abs() < 1e-12 * at2);
        let value = local_smoothing_functional(|_| f.clone(), &grid).unwrap();
        assert_eq!(value, best.1);
    }

    #[test]
    fn local_smoothing_is_stable_under_refinement() {
        let value = |n: usize| {
            let grid = GridSpec::new(3, n, 8.0, 9, 2.0).unwrap();
            let f = gaussian(&grid, 1.0);
            local_smoothing_functional(|t| half_wave(&f, 1.0, t).unwrap(), &grid).unwrap()
        };
        let coarse = value(32);
        let fine = value(64);
        assert!((coarse - fine).abs() < 0.05 * fine, "{coarse} vs {fine}");
    }
}
