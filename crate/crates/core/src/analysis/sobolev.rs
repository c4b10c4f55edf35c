use crate::error::{Error, Result};
use crate::numeric::{lattice_zeta, pairwise_sum};
use crate::spectral::{forward_transform, Field, FrequencyLattice, SpectralField};
use std::f64::consts::PI;

/// A Sobolev exponent validated against `|s| < n/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevIndex {
    s: f64,
}

impl SobolevIndex {
    pub fn new(s: f64, dim: usize) -> Result<Self> {
        let half = dim as f64 / 2.0;
        if !(s.is_finite() && s.abs() < half) {
            return Err(Error::Domain(format!(
                "Sobolev exponent s = {s} outside (-{half}, {half}) for dimension {dim}"
            )));
        }
        Ok(SobolevIndex { s })
    }

    pub fn value(&self) -> f64 {
        self.s
    }
}

/// Homogeneous Sobolev norm `‖f‖_{Ḣ^s}`, see [`hs_norm_spectral`].
pub fn hs_norm(f: &Field, s: f64) -> Result<f64> {
    hs_norm_spectral(&forward_transform(f), s)
}

/// `‖f‖²_{Ḣ^s} ≈ (2π)^{-n} [Δξⁿ Σ_{ξ≠0} |ξ|^{2s} |f̂(ξ)|² + w₀ |f̂(0)|²]`.
///
/// The punctured lattice sum misses the mass of `|ξ|^{2s}|f̂|²` near the
/// origin at order `Δξ^{n+2s}`. The zero-mode weight
/// `w₀ = −Z(−s) Δξ^{n+2s}`, `Z` the lattice zeta function of `ℤⁿ`, removes
/// that term. At `s = 0` it equals `Δξⁿ` and the norm is exactly the L²
/// norm. Negative weights (possible for `s > 1`) are clamped to zero.
///
/// For `s < 0` the zero mode must vanish (relative 1e-12): the norm is only
/// defined for mean-zero data.
pub fn hs_norm_spectral(fh: &SpectralField, s: f64) -> Result<f64> {
    let grid = fh.grid();
    let dim = grid.dim();
    SobolevIndex::new(s, dim)?;
    let lattice = FrequencyLattice::new(grid);
    let zero = lattice.zero_index();
    let zero_mass = fh.norm_sqr_at(zero);
    if s < 0.0 {
        let total: f64 = fh.coeffs().iter().map(|v| v.norm_sqr()).sum();
        if zero_mass.sqrt() > 1e-12 * total.sqrt() {
            return Err(Error::Domain(format!(
                "Ḣ^{s} needs mean-zero data: zero mode has size {:.3e} (policy: the ξ = 0 \
                 mode must vanish for negative orders)",
                zero_mass.sqrt()
            )));
        }
    }
    let terms: Vec<f64> = (0..lattice.len())
        .filter(|&i| i != zero)
        .map(|i| lattice.norm(i).powf(2.0 * s) * fh.norm_sqr_at(i))
        .collect();
    let dxi = grid.dxi();
    let w0 = (-lattice_zeta(&vec![1.0; dim], -s, 1e-16) * dxi.powf(dim as f64 + 2.0 * s)).max(0.0);
    let sum = dxi.powi(dim as i32) * pairwise_sum(&terms) + w0 * zero_mass;
    Ok(((2.0 * PI).powi(-(dim as i32)) * sum).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::helmholtz_split;
    use crate::spectral::GridSpec;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: &GridSpec, components: usize, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.node_count() * components)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Field::from_values(grid, components, values).unwrap()
    }

    #[test]
    fn s_zero_is_the_l2_norm() {
        let grid = GridSpec::new(2, 32, 3.0, 2, 1.0).unwrap();
        let f = random_field(&grid, 2, 1);
        let h0 = hs_norm(&f, 0.0).unwrap();
        assert!((h0 - f.l2_norm()).abs() < 1e-12 * f.l2_norm());
    }

    #[test]
    fn single_shell_scaling() {
        // |ξ₀| = 2 with L = π/2 (Δξ = 2), mode (1, 0).
        let grid = GridSpec::new(2, 16, std::f64::consts::FRAC_PI_2, 2, 1.0).unwrap();
        let f = Field::from_fn(&grid, 1, |x| {
            let e = Complex64::from_polar(1.0, 2.0 * x[0]);
            [e, e, e]
        });
        for s in [-0.5, 0.3, 0.75] {
            let h = hs_norm(&f, s).unwrap();
            assert!((h - 2f64.powf(s) * f.l2_norm()).abs() < 1e-12 * h);
        }
    }

    /// ‖e^{-|x|²/2}‖²_{Ḣ^s(ℝ²)} = 2π ∫_0^∞ r^{2s+1} e^{-r²} dr, by composite
    /// Simpson on [0, 12].
    fn gaussian_oracle(s: f64) -> f64 {
        let m = 20_000;
        let h = 12.0 / m as f64;
        let g = |r: f64| r.powf(2.0 * s + 1.0) * (-r * r).exp();
        let mut acc = g(0.0) + g(12.0);
        for i in 1..m {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
        }
        (2.0 * PI * acc * h / 3.0).sqrt()
    }

    #[test]
    fn gaussian_against_radial_quadrature() {
        let grid = GridSpec::new(2, 128, 32.0, 2, 1.0).unwrap();
        let f = Field::scalar_from_fn(&grid, |x| (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp());
        let oracle = gaussian_oracle(0.5);
        let h = hs_norm(&f, 0.5).unwrap();
        assert!((h - oracle).abs() < 1e-6 * oracle, "{h} vs {oracle}");
    }

    #[test]
    fn pythagoras_for_helmholtz_parts() {
        // s = 1 needs n = 3 (|s| < n/2).
        let cases = [
            (
                GridSpec::new(2, 16, 2.0, 2, 1.0).unwrap(),
                vec![-0.5, 0.0, 0.5],
            ),
            (
                GridSpec::new(3, 8, 2.0, 2, 1.0).unwrap(),
                vec![-0.5, 0.0, 0.5, 1.0],
            ),
        ];
        for (seed, (grid, exps)) in (0..10).flat_map(|k| cases.iter().map(move |c| (k, c))) {
            let f = random_field(grid, grid.dim(), 10 + seed).centered();
            let (fp, fs) = helmholtz_split(&f).unwrap();
            for &s in exps {
                let a = hs_norm(&f, s).unwrap().powi(2);
                let b = hs_norm(&fp, s).unwrap().powi(2) + hs_norm(&fs, s).unwrap().powi(2);
                assert!((a - b).abs() < 1e-12 * a, "s = {s}");
            }
        }
    }

    #[test]
    fn negative_order_needs_mean_zero() {
        let grid = GridSpec::new(2, 16, 2.0, 2, 1.0).unwrap();
        let f = random_field(&grid, 1, 3);
        assert!(matches!(hs_norm(&f, -0.5), Err(Error::Domain(_))));
        assert!(hs_norm(&f.centered(), -0.5).is_ok());
        assert!(matches!(hs_norm(&f, 1.0), Err(Error::Domain(_))));
    }
}
