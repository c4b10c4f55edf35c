//! Exact propagation for `∂t²u − μΔu − (λ+μ)∇div u = 0` on the periodic box.
//!
//! In frequency space the Lamé symbol `L(ξ) = μ|ξ|²I + (λ+μ)ξξᵗ` has the
//! eigenvalue `μ|ξ|²` on the range of `Q = I − ξξᵗ/|ξ|²` and `(λ+2μ)|ξ|²` on
//! the range of `P = ξξᵗ/|ξ|²`, so every mode splits into two decoupled
//! harmonic oscillators that are advanced in closed form.

use crate::error::{Error, Result};
use crate::spectral::{
    forward_transform, inverse_transform, map_modes, Field, FrequencyLattice, GridSpec, RealMatrix,
    SpectralField, Xi,
};
use num_complex::Complex64;
use serde::Serialize;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Lamé coefficients, validated against `μ > 0`, `λ + 2μ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LameParams {
    lambda: f64,
    mu: f64,
}

impl LameParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && lambda + 2.0 * mu > 0.0) || !lambda.is_finite() || !mu.is_finite() {
            return Err(Error::Ellipticity { lambda, mu });
        }
        Ok(LameParams { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Shear speed `√μ`.
    pub fn shear_speed(&self) -> f64 {
        self.mu.sqrt()
    }

    /// Pressure speed `√(λ+2μ)`.
    pub fn pressure_speed(&self) -> f64 {
        (self.lambda + 2.0 * self.mu).sqrt()
    }

    pub fn max_speed(&self) -> f64 {
        self.shear_speed().max(self.pressure_speed())
    }
}

fn dot(xi: &Xi, v: &[Complex64]) -> Complex64 {
    v.iter().zip(xi).map(|(vi, x)| vi * x).sum()
}

fn norm_sqr(xi: &Xi) -> f64 {
    xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
}

/// `(P v, Q v)` for a frequency `ξ`; at `ξ = 0` all of `v` is in `Q`.
fn split_vector(xi: &Xi, v: &[Complex64]) -> ([Complex64; 3], [Complex64; 3]) {
    let mut p = [ZERO; 3];
    let mut q = [ZERO; 3];
    let r2 = norm_sqr(xi);
    let coef = if r2 > 0.0 { dot(xi, v) / r2 } else { ZERO };
    for (i, vi) in v.iter().enumerate() {
        p[i] = coef * xi[i];
        q[i] = vi - p[i];
    }
    (p, q)
}

/// `P(ξ) = ξξᵗ/|ξ|²` and `Q(ξ) = I − P(ξ)`, with `P(0) = 0`, `Q(0) = I`.
pub fn projection_matrices(xi: &Xi, dim: usize) -> (RealMatrix, RealMatrix) {
    let r2: f64 = xi[..dim].iter().map(|x| x * x).sum();
    let p = if r2 > 0.0 {
        RealMatrix::from_fn(dim, |i, j| xi[i] * xi[j] / r2)
    } else {
        RealMatrix::zeros(dim)
    };
    (p, RealMatrix::identity(dim) - p)
}

/// `L(ξ) = μ|ξ|²I + (λ+μ)ξξᵗ`.
pub fn lame_symbol(xi: &Xi, dim: usize, params: &LameParams) -> RealMatrix {
    let r2: f64 = xi[..dim].iter().map(|x| x * x).sum();
    RealMatrix::from_fn(dim, |i, j| {
        let diag = if i == j { params.mu * r2 } else { 0.0 };
        diag + (params.lambda + params.mu) * xi[i] * xi[j]
    })
}

fn require_vector(f: &Field) -> Result<()> {
    if !f.is_vector() {
        return Err(Error::Shape {
            what: "vector field components",
            expected: f.grid().dim(),
            actual: f.components(),
        });
    }
    Ok(())
}

fn split_spectral(fh: &SpectralField) -> (SpectralField, SpectralField) {
    let p = map_modes(fh, |_, xi, v| split_vector(xi, v).0);
    let q = map_modes(fh, |_, xi, v| split_vector(xi, v).1);
    (p, q)
}

/// Helmholtz splitting `f = f_P + f_S` into the potential part `f_P = F⁻¹[P f̂]`
/// and the solenoidal part `f_S = F⁻¹[Q f̂]`. The mean lives in `f_S`.
pub fn helmholtz_split(f: &Field) -> Result<(Field, Field)> {
    require_vector(f)?;
    let (p, q) = split_spectral(&forward_transform(f));
    Ok((inverse_transform(&p), inverse_transform(&q)))
}

/// Spectral divergence `F⁻¹[i ξ·f̂]` as a scalar field.
pub fn spectral_divergence(f: &Field) -> Result<Field> {
    require_vector(f)?;
    let fh = forward_transform(f);
    let lattice = FrequencyLattice::new(f.grid());
    let coeffs = (0..lattice.len())
        .map(|i| Complex64::i() * dot(&lattice.xi(i), &fh.vector_at(i)[..f.components()]))
        .collect();
    Ok(inverse_transform(&SpectralField::from_coeffs(
        f.grid(),
        1,
        coeffs,
    )?))
}

/// Spectral curl: the scalar `i(ξ₁f̂₂ − ξ₂f̂₁)` for `n = 2`, the vector
/// `i ξ × f̂` for `n = 3`.
pub fn spectral_curl(f: &Field) -> Result<Field> {
    require_vector(f)?;
    let fh = forward_transform(f);
    let i = Complex64::i();
    match f.grid().dim() {
        2 => {
            let lattice = FrequencyLattice::new(f.grid());
            let coeffs = (0..lattice.len())
                .map(|m| {
                    let xi = lattice.xi(m);
                    let v = fh.vector_at(m);
                    i * (v[1] * xi[0] - v[0] * xi[1])
                })
                .collect();
            Ok(inverse_transform(&SpectralField::from_coeffs(
                f.grid(),
                1,
                coeffs,
            )?))
        }
        3 => {
            let curl = map_modes(&fh, |_, xi, v| {
                [
                    i * (v[2] * xi[1] - v[1] * xi[2]),
                    i * (v[0] * xi[2] - v[2] * xi[0]),
                    i * (v[1] * xi[0] - v[0] * xi[1]),
                ]
            });
            Ok(inverse_transform(&curl))
        }
        d => Err(Error::Parameter(format!(
            "curl needs dimension 2 or 3, got {d}"
        ))),
    }
}

/// Spectral Lamé operator `Δ*u = μΔu + (λ+μ)∇div u = F⁻¹[−L(ξ)û]`.
pub fn lame_operator(u: &Field, params: &LameParams) -> Result<Field> {
    require_vector(u)?;
    Ok(inverse_transform(&lame_operator_spectral(
        &forward_transform(u),
        params,
    )))
}

fn lame_operator_spectral(uh: &SpectralField, params: &LameParams) -> SpectralField {
    map_modes(uh, |_, xi, v| {
        let r2 = norm_sqr(xi);
        let d = dot(xi, v) * (params.lambda + params.mu);
        let mut out = [ZERO; 3];
        for (k, vk) in v.iter().enumerate() {
            out[k] = -(vk * (params.mu * r2) + d * xi[k]);
        }
        out
    })
}

/// Displacement and velocity at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElasticState {
    f: Field,
    g: Field,
}

impl ElasticState {
    /// Both fields must be vector fields on one grid, and `g` must have zero
    /// mean in every component (relative to its sup norm, 1e-12).
    pub fn new(f: Field, g: Field) -> Result<Self> {
        require_vector(&f)?;
        require_vector(&g)?;
        if f.grid() != g.grid() {
            return Err(Error::Parameter(
                "displacement and velocity live on different grids".into(),
            ));
        }
        let scale = g.sup_norm();
        for c in 0..g.components() {
            let m = g.mean(c).norm();
            if m > 1e-12 * scale {
                return Err(Error::Domain(format!(
                    "velocity component {c} has mean {m:.3e}; the zero mode must vanish \
                     for negative-order norms"
                )));
            }
        }
        Ok(ElasticState { f, g })
    }

    /// State at rest: `g = 0`.
    pub fn at_rest(f: Field) -> Result<Self> {
        let g = Field::zeros(f.grid(), f.components());
        ElasticState::new(f, g)
    }

    pub fn f(&self) -> &Field {
        &self.f
    }

    pub fn g(&self) -> &Field {
        &self.g
    }

    pub fn grid(&self) -> &GridSpec {
        self.f.grid()
    }
}

/// Velocity that turns the displacement `f` into a pair of forward
/// half-waves: `g = F⁻¹[i(√μ|ξ| Q + √(λ+2μ)|ξ| P) f̂]`, so that
/// `u_Q = e^{it√μ|D|} f_S` and `u_P = e^{it√(λ+2μ)|D|} f_P`.
pub fn matched_velocity(f: &Field, params: &LameParams) -> Result<Field> {
    require_vector(f)?;
    let fh = forward_transform(f);
    let (cs, cp) = (params.shear_speed(), params.pressure_speed());
    let gh = map_modes(&fh, |_, xi, v| {
        let r = norm_sqr(xi).sqrt();
        let (p, q) = split_vector(xi, v);
        let mut out = [ZERO; 3];
        for k in 0..v.len() {
            out[k] = Complex64::i() * r * (q[k] * cs + p[k] * cp);
        }
        out
    });
    Ok(inverse_transform(&gh))
}

/// `sin(tω)/ω`, with the limit `t` at `ω = 0` and a series for small `tω`.
fn sinc_factor(t: f64, omega: f64) -> f64 {
    let theta = (t * omega).abs();
    if theta < 1e-4 {
        let th2 = theta * theta;
        t * (1.0 - th2 / 6.0 + th2 * th2 / 120.0)
    } else {
        (t * omega).sin() / omega
    }
}

/// Cached spectral decomposition of a state, advanced exactly in time.
#[derive(Debug, Clone)]
pub struct Propagator {
    params: LameParams,
    fp: SpectralField,
    fq: SpectralField,
    gp: SpectralField,
    gq: SpectralField,
}

/// Which polarization of the solution to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    /// `u_Q + u_P`.
    Full,
    /// Shear part `u_Q`.
    Shear,
    /// Pressure part `u_P`.
    Pressure,
}

impl Propagator {
    pub fn new(state: &ElasticState, params: &LameParams) -> Self {
        let (fp, fq) = split_spectral(&forward_transform(&state.f));
        let (gp, gq) = split_spectral(&forward_transform(&state.g));
        Propagator {
            params: *params,
            fp,
            fq,
            gp,
            gq,
        }
    }

    pub fn params(&self) -> &LameParams {
        &self.params
    }

    pub fn grid(&self) -> &GridSpec {
        self.fp.grid()
    }

    fn combine(&self, t: f64, which: Polarization, derivative: bool) -> SpectralField {
        let (cs, cp) = (self.params.shear_speed(), self.params.pressure_speed());
        let use_q = which != Polarization::Pressure;
        let use_p = which != Polarization::Shear;
        map_modes(&self.fp, |i, xi, fp| {
            let r = norm_sqr(xi).sqrt();
            let fq = self.fq.vector_at(i);
            let gp = self.gp.vector_at(i);
            let gq = self.gq.vector_at(i);
            // (a, b): coefficients of f̂ and ĝ for each polarization.
            let coeffs = |c: f64| {
                let w = c * r;
                if derivative {
                    (-w * (t * w).sin(), (t * w).cos())
                } else {
                    ((t * w).cos(), sinc_factor(t, w))
                }
            };
            let (aq, bq) = coeffs(cs);
            let (ap, bp) = coeffs(cp);
            let mut out = [ZERO; 3];
            for k in 0..fp.len() {
                if use_q {
                    out[k] += fq[k] * aq + gq[k] * bq;
                }
                if use_p {
                    out[k] += fp[k] * ap + gp[k] * bp;
                }
            }
            out
        })
    }

    /// `û(·, t)`.
    pub fn spectral_displacement(&self, t: f64) -> SpectralField {
        self.combine(t, Polarization::Full, false)
    }

    /// `∂t û(·, t)` from the differentiated multipliers.
    pub fn spectral_velocity(&self, t: f64) -> SpectralField {
        self.combine(t, Polarization::Full, true)
    }

    /// `u(·, t)`.
    pub fn displacement(&self, t: f64) -> Field {
        inverse_transform(&self.spectral_displacement(t))
    }

    /// `∂t u(·, t)`.
    pub fn velocity(&self, t: f64) -> Field {
        inverse_transform(&self.spectral_velocity(t))
    }

    /// One polarization of `u(·, t)`.
    pub fn polarized(&self, t: f64, which: Polarization) -> Field {
        inverse_transform(&self.combine(t, which, false))
    }

    /// Energy at time `t`, see [`spectral_energy`].
    pub fn energy(&self, t: f64) -> f64 {
        spectral_energy(
            &self.spectral_displacement(t),
            &self.spectral_velocity(t),
            &self.params,
        )
    }
}

/// `u(·, t)` for the given initial state.
pub fn evolve(state: &ElasticState, params: &LameParams, t: f64) -> Field {
    Propagator::new(state, params).displacement(t)
}

/// Scalar half-wave propagator `F⁻¹[e^{itc|ξ|} f̂]`, applied componentwise.
pub fn half_wave(f: &Field, speed: f64, t: f64) -> Result<Field> {
    Ok(inverse_transform(&half_wave_spectral(
        &forward_transform(f),
        speed,
        t,
    )?))
}

/// The half-wave multiplier applied to coefficients.
pub fn half_wave_spectral(fh: &SpectralField, speed: f64, t: f64) -> Result<SpectralField> {
    if !(speed > 0.0 && speed.is_finite()) {
        return Err(Error::Parameter(format!(
            "wave speed must be positive, got {speed}"
        )));
    }
    Ok(map_modes(fh, |_, xi, v| {
        let phase = Complex64::from_polar(1.0, t * speed * norm_sqr(xi).sqrt());
        let mut out = [ZERO; 3];
        for (o, vi) in out.iter_mut().zip(v) {
            *o = vi * phase;
        }
        out
    }))
}

/// `(Δξ/2π)ⁿ Σ_ξ |∂t û|² + ⟨L(ξ)û, û⟩`, i.e. `∫ |∂t u|² + μ|∇u|² + (λ+μ)|div u|²`.
pub fn spectral_energy(uh: &SpectralField, uth: &SpectralField, params: &LameParams) -> f64 {
    let lattice = FrequencyLattice::new(uh.grid());
    let dim = uh.components();
    let terms: Vec<f64> = (0..lattice.len())
        .map(|i| {
            let xi = lattice.xi(i);
            let u = uh.vector_at(i);
            let kinetic = uth.norm_sqr_at(i);
            let r2 = norm_sqr(&xi);
            let potential = params.mu * r2 * uh.norm_sqr_at(i)
                + (params.lambda + params.mu) * dot(&xi, &u[..dim]).norm_sqr();
            kinetic + potential
        })
        .collect();
    uh.grid().mode_weight() * crate::numeric::pairwise_sum(&terms)
}

/// Energy of a displacement/velocity pair given in physical space.
pub fn elastic_energy(u: &Field, ut: &Field, params: &LameParams) -> Result<f64> {
    require_vector(u)?;
    require_vector(ut)?;
    if u.grid() != ut.grid() {
        return Err(Error::Parameter(
            "u and ∂t u live on different grids".into(),
        ));
    }
    Ok(spectral_energy(
        &forward_transform(u),
        &forward_transform(ut),
        params,
    ))
}

/// Relative residual of the central second difference in time against the
/// spectral Lamé operator:
/// `‖(u(t+dt) − 2u(t) + u(t−dt))/dt² − Δ*u(t)‖ / ‖Δ*u(t)‖`. Returns 0 when
/// both vanish.
pub fn pde_residual(state: &ElasticState, params: &LameParams, t: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Parameter(format!("dt must be positive, got {dt}")));
    }
    let prop = Propagator::new(state, params);
    let stiffness = dt * params.max_speed() * FrequencyLattice::new(state.grid()).max_norm();
    if stiffness >= 0.1 {
        log::warn!("pde_residual: dt·c_max·|ξ|_max = {stiffness:.3} is not small");
    }
    let u0 = prop.displacement(t);
    let second = prop
        .displacement(t + dt)
        .add_scaled(&prop.displacement(t - dt), Complex64::new(1.0, 0.0))?
        .add_scaled(&u0, Complex64::new(-2.0, 0.0))?
        .scaled(Complex64::new(1.0 / (dt * dt), 0.0));
    let lame = lame_operator(&u0, params)?;
    let num = second.sub(&lame)?.l2_norm();
    let den = lame.l2_norm();
    if den == 0.0 {
        return Ok(if num == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_field(grid: &GridSpec, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.node_count() * grid.dim())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Field::from_values(grid, grid.dim(), values).unwrap()
    }

    /// Sum of a few Gaussian bumps with random centres and amplitudes.
    fn gaussian_field(grid: &GridSpec, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bumps: Vec<([f64; 3], [f64; 3], f64)> = (0..3)
            .map(|_| {
                let centre = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                let amp = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                (centre, amp, rng.gen_range(0.6..1.2))
            })
            .collect();
        let dim = grid.dim();
        Field::from_fn(grid, dim, |x| {
            let mut v = [ZERO; 3];
            for (centre, amp, width) in &bumps {
                let r2: f64 = (0..dim).map(|k| (x[k] - centre[k]).powi(2)).sum();
                let e = (-r2 / (2.0 * width * width)).exp();
                for k in 0..dim {
                    v[k] += c(amp[k] * e);
                }
            }
            v
        })
    }

    #[test]
    fn ellipticity_is_enforced() {
        assert!(LameParams::new(1.0, 1.0).is_ok());
        assert!(LameParams::new(-0.5, 1.0).is_ok());
        assert!(matches!(
            LameParams::new(1.0, 0.0),
            Err(Error::Ellipticity { .. })
        ));
        assert!(matches!(
            LameParams::new(-2.0, 1.0),
            Err(Error::Ellipticity { .. })
        ));
    }

    #[test]
    fn axis_aligned_projectors() {
        let (p, q) = projection_matrices(&[1.0, 0.0, 0.0], 2);
        assert_eq!(
            p,
            RealMatrix::from_fn(2, |i, j| if i == 0 && j == 0 { 1.0 } else { 0.0 })
        );
        assert_eq!(
            q,
            RealMatrix::from_fn(2, |i, j| if i == 1 && j == 1 { 1.0 } else { 0.0 })
        );
        let (p0, q0) = projection_matrices(&[0.0; 3], 3);
        assert_eq!(p0, RealMatrix::zeros(3));
        assert_eq!(q0, RealMatrix::identity(3));
    }

    #[test]
    fn projector_algebra_on_lattices() {
        for grid in [
            GridSpec::new(2, 32, 3.0, 2, 1.0).unwrap(),
            GridSpec::new(3, 8, 1.3, 2, 1.0).unwrap(),
        ] {
            let dim = grid.dim();
            let lattice = FrequencyLattice::new(&grid);
            let id = RealMatrix::identity(dim);
            for i in 1..lattice.len() {
                let (p, q) = projection_matrices(&lattice.xi(i), dim);
                assert!((p * p - p).max_abs() < 1e-14);
                assert!((q * q - q).max_abs() < 1e-14);
                assert!((p * q).max_abs() < 1e-14);
                assert!((q * p).max_abs() < 1e-14);
                assert!((p + q - id).max_abs() < 1e-14);
                assert_eq!(p, p.transpose());
            }
        }
    }

    #[test]
    fn lame_symbol_eigenvalues() {
        let params = LameParams::new(0.7, 1.3).unwrap();
        let xi = [0.4, -1.1, 0.0];
        let r2 = xi[0] * xi[0] + xi[1] * xi[1];
        let l = lame_symbol(&xi, 2, &params);
        let along = l.mul_vec(&xi[..2]);
        let across = l.mul_vec(&[1.1, 0.4]);
        for k in 0..2 {
            assert!((along[k] - (params.lambda() + 2.0 * params.mu()) * r2 * xi[k]).abs() < 1e-14);
        }
        assert!((across[0] - params.mu() * r2 * 1.1).abs() < 1e-14);
        assert!((across[1] - params.mu() * r2 * 0.4).abs() < 1e-14);
    }

    #[test]
    fn gradient_and_solenoidal_fields_split_cleanly() {
        let grid = GridSpec::new(2, 64, 8.0, 2, 1.0).unwrap();
        // ∇ of a Gaussian: pure potential.
        let grad = Field::from_fn(&grid, 2, |x| {
            let e = (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp();
            [c(-x[0] * e), c(-x[1] * e), ZERO]
        });
        let (fp, fs) = helmholtz_split(&grad).unwrap();
        assert!(fs.l2_norm() < 1e-10 * grad.l2_norm());
        assert!(spectral_curl(&fp).unwrap().l2_norm() < 1e-10 * grad.l2_norm());
        // (−∂₂ψ, ∂₁ψ) with ψ = cos(x₁ ξ) sin(2 x₂ ξ), ξ = π/8: pure solenoidal.
        let k = std::f64::consts::PI / 8.0;
        let sol = Field::from_fn(&grid, 2, |x| {
            let dpsi1 = -k * (k * x[0]).sin() * (2.0 * k * x[1]).sin();
            let dpsi2 = 2.0 * k * (k * x[0]).cos() * (2.0 * k * x[1]).cos();
            [c(-dpsi2), c(dpsi1), ZERO]
        });
        let (fp, fs) = helmholtz_split(&sol).unwrap();
        assert!(fp.l2_norm() < 1e-10 * sol.l2_norm());
        assert!(spectral_divergence(&fs).unwrap().l2_norm() < 1e-10 * sol.l2_norm());
    }

    #[test]
    fn split_is_orthogonal_and_complete() {
        for (seed, grid) in [
            (1, GridSpec::new(2, 16, 2.0, 2, 1.0).unwrap()),
            (2, GridSpec::new(3, 8, 2.0, 2, 1.0).unwrap()),
        ] {
            let f = random_field(&grid, seed);
            let (fp, fs) = helmholtz_split(&f).unwrap();
            assert!(fp.add(&fs).unwrap().max_abs_diff(&f) < 1e-12 * f.sup_norm());
            let lhs = f.l2_norm().powi(2);
            let rhs = fp.l2_norm().powi(2) + fs.l2_norm().powi(2);
            assert!((lhs - rhs).abs() < 1e-12 * lhs);
            let div = spectral_divergence(&fs).unwrap();
            let scale = spectral_divergence(&f).unwrap().l2_norm();
            assert!(div.l2_norm() < 1e-10 * scale);
            let curl = spectral_curl(&fp).unwrap();
            assert!(curl.l2_norm() < 1e-10 * spectral_curl(&f).unwrap().l2_norm());
        }
    }

    fn plane_wave_check(params: LameParams, along: bool) {
        let grid = GridSpec::new(2, 64, 8.0, 2, 1.0).unwrap();
        let lattice = FrequencyLattice::new(&grid);
        let xi0 = lattice.xi_of([3, -2, 0]);
        let r = (xi0[0] * xi0[0] + xi0[1] * xi0[1]).sqrt();
        let d = if along {
            [xi0[0] / r, xi0[1] / r]
        } else {
            [-xi0[1] / r, xi0[0] / r]
        };
        let speed = if along {
            params.pressure_speed()
        } else {
            params.shear_speed()
        };
        let omega = speed * r;
        let phase = |x: &[f64; 3]| x[0] * xi0[0] + x[1] * xi0[1];
        let f = Field::from_fn(&grid, 2, |x| {
            [c(d[0] * phase(x).cos()), c(d[1] * phase(x).cos()), ZERO]
        });
        let g = Field::from_fn(&grid, 2, |x| {
            [
                c(omega * d[0] * phase(x).sin()),
                c(omega * d[1] * phase(x).sin()),
                ZERO,
            ]
        });
        let state = ElasticState::new(f, g).unwrap();
        let prop = Propagator::new(&state, &params);
        for step in 0..=16 {
            let t = 0.25 * step as f64;
            let exact = Field::from_fn(&grid, 2, |x| {
                let v = (phase(x) - omega * t).cos();
                [c(d[0] * v), c(d[1] * v), ZERO]
            });
            assert!(prop.displacement(t).max_abs_diff(&exact) < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn shear_and_pressure_plane_waves() {
        let params = LameParams::new(0.8, 1.5).unwrap();
        plane_wave_check(params, false);
        plane_wave_check(params, true);
    }

    #[test]
    fn initial_conditions_are_reproduced() {
        let grid = GridSpec::new(2, 32, 6.0, 2, 1.0).unwrap();
        let f = gaussian_field(&grid, 3);
        let g = gaussian_field(&grid, 4).centered();
        let state = ElasticState::new(f.clone(), g.clone()).unwrap();
        let prop = Propagator::new(&state, &LameParams::new(1.0, 1.0).unwrap());
        assert!(prop.displacement(0.0).max_abs_diff(&f) < 1e-12 * f.sup_norm());
        assert!(prop.velocity(0.0).max_abs_diff(&g) < 1e-12 * g.sup_norm());
        let rest = ElasticState::at_rest(f.clone()).unwrap();
        assert!(evolve(&rest, &LameParams::new(1.0, 1.0).unwrap(), 0.0).max_abs_diff(&f) < 1e-12);
        // strong continuity: differences shrink linearly with the step
        let u1 = prop.displacement(1.0);
        let d1 = prop.displacement(1.0 + 1e-3).sub(&u1).unwrap().l2_norm();
        let d2 = prop.displacement(1.0 + 5e-4).sub(&u1).unwrap().l2_norm();
        assert!(d1 < 1e-2 && (d1 / d2 - 2.0).abs() < 0.05);
    }

    #[test]
    fn mean_of_velocity_must_vanish() {
        let grid = GridSpec::new(2, 16, 3.0, 2, 1.0).unwrap();
        let f = gaussian_field(&grid, 5);
        let err = ElasticState::new(f.clone(), f.clone()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(ElasticState::new(f.clone(), f.centered()).is_ok());
    }

    #[test]
    fn energy_is_conserved() {
        let grid = GridSpec::new(2, 32, 6.0, 2, 1.0).unwrap();
        for (lambda, mu) in [(1.0, 1.0), (-0.5, 1.0)] {
            let params = LameParams::new(lambda, mu).unwrap();
            let state = ElasticState::new(
                gaussian_field(&grid, 6),
                gaussian_field(&grid, 7).centered(),
            )
            .unwrap();
            let prop = Propagator::new(&state, &params);
            let e0 = prop.energy(0.0);
            assert!(e0 > 0.0);
            for k in 0..65 {
                let t = 8.0 * k as f64 / 64.0;
                assert!((prop.energy(t) - e0).abs() < 1e-10 * e0);
            }
            let physical = elastic_energy(state.f(), state.g(), &params).unwrap();
            assert!((physical - e0).abs() < 1e-12 * e0);
        }
        let zero = ElasticState::at_rest(Field::zeros(&grid, 2)).unwrap();
        assert_eq!(
            Propagator::new(&zero, &LameParams::new(1.0, 1.0).unwrap()).energy(2.0),
            0.0
        );
    }

    #[test]
    fn residual_is_second_order() {
        let grid = GridSpec::new(2, 64, 8.0, 2, 1.0).unwrap();
        let params = LameParams::new(1.0, 1.0).unwrap();
        let xi0 = FrequencyLattice::new(&grid).xi_of([2, 1, 0]);
        let f = Field::from_fn(&grid, 2, |x| {
            let v = (x[0] * xi0[0] + x[1] * xi0[1]).cos();
            [c(0.3 * v), c(-0.7 * v), ZERO]
        });
        let state = ElasticState::at_rest(f).unwrap();
        let r1 = pde_residual(&state, &params, 0.7, 0.02).unwrap();
        let r2 = pde_residual(&state, &params, 0.7, 0.01).unwrap();
        assert!((3.5..=4.5).contains(&(r1 / r2)), "ratio {}", r1 / r2);

        let gauss = ElasticState::at_rest(gaussian_field(&grid, 8)).unwrap();
        assert!(pde_residual(&gauss, &params, 0.5, 1e-3).unwrap() < 1e-4);
        let zero = ElasticState::at_rest(Field::zeros(&grid, 2)).unwrap();
        assert_eq!(pde_residual(&zero, &params, 0.5, 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn half_wave_is_unitary_and_a_group() {
        let grid = GridSpec::new(2, 32, 4.0, 2, 1.0).unwrap();
        let f = random_field(&grid, 9).extract(0);
        assert!(half_wave(&f, 1.0, 0.0).unwrap().max_abs_diff(&f) < 1e-13);
        for t in [0.3, 1.7] {
            let u = half_wave(&f, 1.0, t).unwrap();
            assert!((u.l2_norm() - f.l2_norm()).abs() < 1e-12 * f.l2_norm());
        }
        let twice = half_wave(&half_wave(&f, 1.3, 0.4).unwrap(), 1.3, 0.9).unwrap();
        let once = half_wave(&f, 1.3, 1.3).unwrap();
        assert!(twice.max_abs_diff(&once) < 1e-12 * f.sup_norm());

        let fh = forward_transform(&f);
        let moved = half_wave_spectral(&fh, 1.3, 0.8).unwrap();
        let lattice = FrequencyLattice::new(&grid);
        for i in [1, 17, 300] {
            let expect = fh.coeffs()[i] * Complex64::from_polar(1.0, 0.8 * 1.3 * lattice.norm(i));
            assert!((moved.coeffs()[i] - expect).norm() < 1e-13 * fh.coeffs()[i].norm().max(1.0));
            let (a, b) = (moved.coeffs()[i].norm(), fh.coeffs()[i].norm());
            assert!((a - b).abs() <= 4.0 * f64::EPSILON * b);
        }
        assert!(matches!(half_wave(&f, 0.0, 1.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn solenoidal_state_decouples_into_half_waves() {
        let grid = GridSpec::new(2, 32, 6.0, 2, 1.0).unwrap();
        let params = LameParams::new(2.0, 0.6).unwrap();
        let (_, fs) = helmholtz_split(&gaussian_field(&grid, 10)).unwrap();
        let g = matched_velocity(&fs, &params).unwrap();
        let state = ElasticState::new(fs.clone(), g).unwrap();
        let prop = Propagator::new(&state, &params);
        for t in [0.0, 0.9, 2.5] {
            let u = prop.displacement(t);
            let scalar = Field::stack(&[
                half_wave(&fs.extract(0), params.shear_speed(), t).unwrap(),
                half_wave(&fs.extract(1), params.shear_speed(), t).unwrap(),
            ])
            .unwrap();
            assert!(u.max_abs_diff(&scalar) < 1e-12 * fs.sup_norm());
            assert!(prop.polarized(t, Polarization::Pressure).sup_norm() < 1e-12 * fs.sup_norm());
        }
    }
}
