use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, GaussLegendre};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// Axis-parallel cube in `ℝ^d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cube {
    pub center: Vec<f64>,
    pub side: f64,
}

impl Cube {
    pub fn new(center: Vec<f64>, side: f64) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parameter(format!(
                "invalid cube: side {side}, center {center:?}"
            )));
        }
        Ok(Cube { center, side })
    }

    pub fn centered(dim: usize, side: f64) -> Result<Self> {
        Cube::new(vec![0.0; dim], side)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains_origin(&self) -> bool {
        self.center.iter().all(|c| c.abs() <= 0.5 * self.side)
    }
}

const GL_ORDER: usize = 8;
const MAX_DEPTH: usize = 40;

struct Integrator {
    betas: [f64; 2],
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn distance_to_origin(lo: &[f64], hi: &[f64]) -> f64 {
    lo.iter()
        .zip(hi)
        .map(|(l, h)| {
            let d = l.max(-h).max(0.0);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn diameter(lo: &[f64], hi: &[f64]) -> f64 {
    lo.iter()
        .zip(hi)
        .map(|(l, h)| (h - l) * (h - l))
        .sum::<f64>()
        .sqrt()
}

impl Integrator {
    fn new(alpha: f64) -> Self {
        let gl = GaussLegendre::new(GL_ORDER);
        Integrator {
            betas: [-alpha, alpha],
            nodes: gl.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            weights: gl.weights.iter().map(|w| 0.5 * w).collect(),
        }
    }

    /// Tensor Gauss–Legendre on a box away from the origin.
    fn tensor(&self, lo: &[f64], hi: &[f64]) -> [f64; 2] {
        let d = lo.len();
        let p = self.nodes.len();
        let volume: f64 = lo.iter().zip(hi).map(|(l, h)| h - l).product();
        let mut idx = vec![0usize; d];
        let mut acc = [Vec::new(), Vec::new()];
        loop {
            let mut r2 = 0.0;
            let mut w = 1.0;
            for k in 0..d {
                let x = lo[k] + (hi[k] - lo[k]) * self.nodes[idx[k]];
                r2 += x * x;
                w *= self.weights[idx[k]];
            }
            for (b, a) in self.betas.iter().zip(acc.iter_mut()) {
                a.push(w * r2.powf(0.5 * b));
            }
            let mut k = 0;
            loop {
                if k == d {
                    return [
                        volume * pairwise_sum(&acc[0]),
                        volume * pairwise_sum(&acc[1]),
                    ];
                }
                idx[k] += 1;
                if idx[k] < p {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Bisects every axis until the box diameter is below its distance to the
    /// origin, then applies the tensor rule.
    fn regular(&self, lo: &[f64], hi: &[f64], depth: usize) -> [f64; 2] {
        let dist = distance_to_origin(lo, hi);
        if diameter(lo, hi) <= dist || depth >= MAX_DEPTH {
            return self.tensor(lo, hi);
        }
        let d = lo.len();
        let mut parts = [Vec::new(), Vec::new()];
        for pattern in 0..(1usize << d) {
            let mut clo = lo.to_vec();
            let mut chi = hi.to_vec();
            for k in 0..d {
                let mid = 0.5 * (lo[k] + hi[k]);
                if pattern >> k & 1 == 1 {
                    clo[k] = mid;
                } else {
                    chi[k] = mid;
                }
            }
            let v = self.regular(&clo, &chi, depth + 1);
            parts[0].push(v[0]);
            parts[1].push(v[1]);
        }
        [pairwise_sum(&parts[0]), pairwise_sum(&parts[1])]
    }

    /// `∫_{Π[0, a_i]} |z|^β dz` by homogeneity: with `B/2 = Π[0, a_i/2]`,
    /// `∫_{B/2} = 2^{−(d+β)} ∫_B`, so `∫_B = ∫_{B∖B/2} / (1 − 2^{−(d+β)})`.
    fn corner(&self, a: &[f64]) -> [f64; 2] {
        let d = a.len();
        let mut parts = [Vec::new(), Vec::new()];
        for pattern in 1..(1usize << d) {
            let mut lo = vec![0.0; d];
            let mut hi = vec![0.0; d];
            for k in 0..d {
                if pattern >> k & 1 == 1 {
                    lo[k] = 0.5 * a[k];
                    hi[k] = a[k];
                } else {
                    hi[k] = 0.5 * a[k];
                }
            }
            let v = self.regular(&lo, &hi, 0);
            parts[0].push(v[0]);
            parts[1].push(v[1]);
        }
        let mut out = [0.0; 2];
        for (j, b) in self.betas.iter().enumerate() {
            out[j] = pairwise_sum(&parts[j]) / (1.0 - 2f64.powf(-(d as f64 + b)));
        }
        out
    }

    fn cube(&self, cube: &Cube) -> [f64; 2] {
        let d = cube.dim();
        let lo: Vec<f64> = cube.center.iter().map(|c| c - 0.5 * cube.side).collect();
        let hi: Vec<f64> = cube.center.iter().map(|c| c + 0.5 * cube.side).collect();
        if !cube.contains_origin() {
            return self.regular(&lo, &hi, 0);
        }
        // Orthant pieces with the origin at a corner; equal extents up to
        // permutation give equal integrals.
        let mut cache: HashMap<Vec<u64>, [f64; 2]> = HashMap::new();
        let mut parts = [Vec::new(), Vec::new()];
        for pattern in 0..(1usize << d) {
            let mut a: Vec<f64> = (0..d)
                .map(|k| if pattern >> k & 1 == 1 { hi[k] } else { -lo[k] })
                .collect();
            if a.iter().any(|x| *x <= 0.0) {
                continue;
            }
            a.sort_by(f64::total_cmp);
            let key: Vec<u64> = a.iter().map(|x| x.to_bits()).collect();
            let v = *cache.entry(key).or_insert_with(|| self.corner(&a));
            parts[0].push(v[0]);
            parts[1].push(v[1]);
        }
        [pairwise_sum(&parts[0]), pairwise_sum(&parts[1])]
    }
}

/// `(⨍_Q |z|^{−α}) (⨍_Q |z|^{α})` over the cube `Q ⊂ ℝ^{n_total}`.
///
/// Cubes containing the origin are split into orthant boxes with the origin
/// at a corner and closed by homogeneity; every other box is bisected until
/// it is no wider than its distance to the origin and then integrated by
/// tensor Gauss–Legendre. By Cauchy–Schwarz the result is at least 1.
pub fn a2_product(alpha: f64, n_total: usize, cube: &Cube) -> Result<f64> {
    if !(alpha.is_finite() && alpha.abs() < n_total as f64) {
        return Err(Error::Domain(format!(
            "A2 product needs |alpha| < {n_total}, got {alpha}"
        )));
    }
    if cube.dim() != n_total {
        return Err(Error::Parameter(format!(
            "cube has dimension {}, expected {n_total}",
            cube.dim()
        )));
    }
    if alpha == 0.0 {
        return Ok(1.0);
    }
    let [neg, pos] = Integrator::new(alpha).cube(cube);
    let volume = cube.side.powi(n_total as i32);
    Ok((neg / volume) * (pos / volume))
}

/// Cubes used by [`a2_scan`]: origin-centered cubes of the given sides, and
/// for each side cubes whose centers sit at `offset·side` along the first
/// axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubeFamily {
    pub sides: Vec<f64>,
    pub offsets: Vec<f64>,
}

impl Default for CubeFamily {
    fn default() -> Self {
        CubeFamily {
            sides: vec![1.0],
            offsets: vec![0.5, 1.0, 2.0, 4.0],
        }
    }
}

impl CubeFamily {
    /// `(offset, cube)` pairs, origin-centered ones with offset 0.
    pub fn cubes(&self, n_total: usize) -> Result<Vec<(f64, Cube)>> {
        let mut out = Vec::new();
        for &side in &self.sides {
            out.push((0.0, Cube::centered(n_total, side)?));
            for &offset in &self.offsets {
                let mut center = vec![0.0; n_total];
                center[0] = offset * side;
                out.push((offset, Cube::new(center, side)?));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A2Row {
    pub alpha: f64,
    /// Largest product over the origin-centered cubes.
    pub origin_max: f64,
    /// Largest product over the whole family.
    pub family_max: f64,
    /// `(offset, side, product)` for every cube of the family.
    pub values: Vec<(f64, f64, f64)>,
}

/// A₂ products of `|z|^{−α}` for every `α` over a family of cubes.
pub fn a2_scan(alphas: &[f64], n_total: usize, family: &CubeFamily) -> Result<Vec<A2Row>> {
    let cubes = family.cubes(n_total)?;
    alphas
        .par_iter()
        .map(|&alpha| {
            let values = cubes
                .iter()
                .map(|(offset, cube)| Ok((*offset, cube.side, a2_product(alpha, n_total, cube)?)))
                .collect::<Result<Vec<_>>>()?;
            let origin_max = values
                .iter()
                .filter(|v| v.0 == 0.0)
                .map(|v| v.2)
                .fold(f64::NEG_INFINITY, f64::max);
            let family_max = values.iter().map(|v| v.2).fold(f64::NEG_INFINITY, f64::max);
            Ok(A2Row {
                alpha,
                origin_max,
                family_max,
                values,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// `∫_{[−a,a]³} |z|^β dz` in polar coordinates over the cube faces:
    /// `24 ∫_{[0,1]²} (a√s)^{β+3}/(β+3) s^{−3/2} du dv`, `s = 1+u²+v²`,
    /// composite Simpson.
    fn polar_cube_integral(a: f64, beta: f64) -> f64 {
        let m = 400;
        let h = 1.0 / m as f64;
        let simpson = |i: usize| {
            if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            }
        };
        let mut acc = 0.0;
        for i in 0..=m {
            for j in 0..=m {
                let (u, v) = (i as f64 * h, j as f64 * h);
                let s = 1.0 + u * u + v * v;
                acc += simpson(i) * simpson(j) * (a * s.sqrt()).powf(beta + 3.0) / (beta + 3.0)
                    * s.powf(-1.5);
            }
        }
        24.0 * acc * h * h / 9.0
    }

    #[test]
    fn zero_exponent_is_exactly_one() {
        for cube in [
            Cube::centered(3, 2.0).unwrap(),
            Cube::new(vec![1.0, -0.3, 0.2], 0.7).unwrap(),
        ] {
            assert_eq!(a2_product(0.0, 3, &cube).unwrap(), 1.0);
        }
    }

    #[test]
    fn origin_cubes_are_scale_invariant() {
        let base = a2_product(1.7, 3, &Cube::centered(3, 1.0).unwrap()).unwrap();
        for side in [0.01, 0.5, 3.0, 1000.0] {
            let v = a2_product(1.7, 3, &Cube::centered(3, side).unwrap()).unwrap();
            assert!((v - base).abs() < 1e-6 * base);
        }
    }

    #[test]
    fn unit_cube_against_polar_and_monte_carlo() {
        let alpha = 1.5;
        let v = a2_product(alpha, 3, &Cube::centered(3, 1.0).unwrap()).unwrap();
        let oracle = polar_cube_integral(0.5, -alpha) * polar_cube_integral(0.5, alpha);
        assert!((v - oracle).abs() < 1e-3 * oracle, "{v} vs {oracle}");
        // Monte-Carlo check of the bounded factor.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let samples = 1_000_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let r2: f64 = (0..3).map(|_| rng.gen_range(-0.5f64..0.5).powi(2)).sum();
            acc += r2.powf(0.5 * alpha);
        }
        let mc = acc / samples as f64;
        let det = Integrator::new(alpha).cube(&Cube::centered(3, 1.0).unwrap())[1];
        assert!((mc - det).abs() < 3e-3 * det, "{mc} vs {det}");
    }

    #[test]
    fn products_exceed_one_and_grow_with_alpha() {
        let cube = Cube::centered(3, 1.0).unwrap();
        let mut prev = 1.0;
        for alpha in [0.5, 1.0, 1.5, 2.0, 2.7] {
            let v = a2_product(alpha, 3, &cube).unwrap();
            assert!(v > prev + 1e-9);
            let w = a2_product(-alpha, 3, &cube).unwrap();
            assert!((v - w).abs() < 1e-12 * v);
            prev = v;
        }
        assert!(a2_product(3.0, 3, &cube).is_err());
    }

    #[test]
    fn far_cubes_approach_one() {
        let rows = a2_scan(&[0.0, 1.5], 3, &CubeFamily::default()).unwrap();
        assert!(rows[0].values.iter().all(|v| v.2 == 1.0));
        let far: Vec<f64> = rows[1]
            .values
            .iter()
            .filter(|v| v.0 > 0.0)
            .map(|v| v.2)
            .collect();
        for pair in far.windows(2) {
            assert!(pair[1] < pair[0]);
        }
        assert!(far.last().unwrap() - 1.0 < 0.02);
    }
}
