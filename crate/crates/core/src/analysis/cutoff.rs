use crate::spectral::{
    apply_scalar_multiplier, forward_transform, inverse_transform, Field, FrequencyLattice,
    GridSpec,
};
use num_complex::Complex64;
use std::ops::RangeInclusive;

/// Dyadic cutoff `φ(t) = η(t) / Σ_j η(2^j t)` built from the bump
/// `η(t) = exp(−1/((t − 1/2)(2 − t)))` on `(1/2, 2)`.
///
/// Because the normalizing sum is invariant under `t ↦ 2t`,
/// `Σ_k φ(2^k t) = 1` for every `t > 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DyadicCutoff;

impl DyadicCutoff {
    pub fn eta(t: f64) -> f64 {
        if t <= 0.5 || t >= 2.0 {
            return 0.0;
        }
        (-1.0 / ((t - 0.5) * (2.0 - t))).exp()
    }

    /// `Σ_j η(2^j t)`; at most two terms are nonzero.
    fn normalizer(t: f64) -> f64 {
        let l = t.log2();
        let lo = (-1.0 - l).ceil() as i32;
        let hi = (1.0 - l).floor() as i32;
        let mut terms: Vec<f64> = (lo..=hi).map(|j| Self::eta(t * 2f64.powi(j))).collect();
        // Sort so that equal multisets of terms sum identically.
        terms.sort_by(f64::total_cmp);
        terms.iter().sum()
    }

    pub fn phi(t: f64) -> f64 {
        let e = Self::eta(t);
        if e == 0.0 {
            return 0.0;
        }
        e / Self::normalizer(t)
    }

    /// `Σ_{k=lo}^{hi} φ(2^k t)`.
    pub fn partition_sum(t: f64, lo: i32, hi: i32) -> f64 {
        (lo..=hi).map(|k| Self::phi(t * 2f64.powi(k))).sum()
    }
}

/// Littlewood–Paley piece `F⁻¹[φ(2^{−k}|ξ|) f̂]`; removes the zero mode.
pub fn lp_project(f: &Field, k: i32) -> Field {
    let scale = 2f64.powi(-k);
    let fh = forward_transform(f);
    let out = apply_scalar_multiplier(&fh, |xi| {
        let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        Complex64::new(DyadicCutoff::phi(scale * r), 0.0)
    });
    inverse_transform(&out)
}

/// Levels `k` whose projections can be nonzero on the lattice of `grid`.
pub fn lp_range(grid: &GridSpec) -> RangeInclusive<i32> {
    let lattice = FrequencyLattice::new(grid);
    let lo = grid.dxi().log2().floor() as i32;
    let hi = lattice.max_norm().log2().ceil() as i32 + 1;
    lo..=hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn support_and_bounds() {
        assert_eq!(DyadicCutoff::phi(0.5), 0.0);
        assert_eq!(DyadicCutoff::phi(2.0), 0.0);
        assert_eq!(DyadicCutoff::phi(0.3), 0.0);
        for i in 1..400 {
            let t = 0.5 + 1.5 * i as f64 / 400.0;
            let p = DyadicCutoff::phi(t);
            assert!((0.0..=1.0).contains(&p));
        }
        assert_eq!(DyadicCutoff::phi(1.0), 1.0);
    }

    #[test]
    fn partition_of_unity() {
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let t = 2f64.powf(-10.0 + 20.0 * i as f64 / 999.0);
            worst = worst.max((DyadicCutoff::partition_sum(t, -12, 12) - 1.0).abs());
        }
        assert!(worst < 1e-12, "{worst}");
    }

    fn random_scalar(grid: &GridSpec, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.node_count())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Field::from_values(grid, 1, values).unwrap()
    }

    #[test]
    fn reconstruction_and_annihilation() {
        let grid = GridSpec::new(2, 32, 5.0, 2, 1.0).unwrap();
        let f = random_scalar(&grid, 4);
        let mut sum = Field::zeros(&grid, 1);
        for k in lp_range(&grid) {
            sum = sum.add(&lp_project(&f, k)).unwrap();
        }
        assert!(sum.max_abs_diff(&f.centered()) < 1e-10 * f.sup_norm());
        for k in [-1, 0, 1, 2] {
            let pk = lp_project(&f, k);
            for j in [k - 3, k - 2, k + 2, k + 3] {
                assert!(lp_project(&pk, j).sup_norm() < 1e-12 * f.sup_norm());
            }
        }
    }

    #[test]
    fn annulus_complement_is_removed() {
        let grid = GridSpec::new(1, 64, std::f64::consts::PI, 2, 1.0).unwrap();
        // modes 1 and 9 lie outside (2, 8)
        let f = Field::scalar_from_fn(&grid, |x| x[0].cos() + (9.0 * x[0]).sin());
        assert!(lp_project(&f, 2).sup_norm() < 1e-12);
    }
}
