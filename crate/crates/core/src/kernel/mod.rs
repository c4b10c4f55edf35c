//! The frequency-localized half-wave kernel
//! `I_k(z, τ) = ∫_{ℝⁿ} e^{i z·ξ + i τ|ξ|} φ(2^{−k}|ξ|)² dξ`
//! and fits of its decay along and away from the light cone.

mod decay;

pub use decay::{decay_fit, log_spaced, DecayFit, DecayRegime};

use crate::analysis::DyadicCutoff;
use crate::error::{Error, Result};
use crate::numeric::{bessel_j0, pairwise_sum, GaussLegendre};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, PI};

/// Offset `z = x − y`, time offset `τ = t − s`, level `k`, dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelQuery {
    pub z: [f64; 3],
    pub tau: f64,
    pub k: i32,
    pub n: usize,
}

impl KernelQuery {
    pub fn new(z: &[f64], tau: f64, k: i32, n: usize) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(Error::Parameter(format!(
                "kernel dimension must be 2 or 3, got {n}"
            )));
        }
        if z.len() != n {
            return Err(Error::Parameter(format!(
                "offset has {} entries, expected {n}",
                z.len()
            )));
        }
        let mut zz = [0.0; 3];
        zz[..n].copy_from_slice(z);
        Ok(KernelQuery { z: zz, tau, k, n })
    }

    pub fn radius(&self) -> f64 {
        (self.z[0] * self.z[0] + self.z[1] * self.z[1] + self.z[2] * self.z[2]).sqrt()
    }
}

const PANEL_ORDER: usize = 16;
const RELATIVE_TOL: f64 = 1e-10;
const ABSOLUTE_FLOOR: f64 = 1e-13;
const MAX_HALVINGS: usize = 10;
/// Panel budget; offsets needing more are reported as unresolved.
const MAX_PANELS: usize = 1 << 22;

fn radial_integrand(q: &KernelQuery, r: f64) -> Complex64 {
    let rho = q.radius();
    let cut = DyadicCutoff::phi(r * 2f64.powi(-q.k));
    let phase = Complex64::from_polar(1.0, q.tau * r);
    let profile = match q.n {
        2 => 2.0 * PI * bessel_j0(rho * r) * r,
        _ => {
            let x = rho * r;
            let sinc = if x.abs() < 1e-8 {
                1.0 - x * x / 6.0
            } else {
                x.sin() / x
            };
            4.0 * PI * sinc * r * r
        }
    };
    phase * (profile * cut * cut)
}

/// Composite Gauss–Legendre with `panels` equal panels over `[a, b]`;
/// returns the integral and the integral of its modulus.
fn panel_sum(
    q: &KernelQuery,
    gl: &GaussLegendre,
    a: f64,
    b: f64,
    panels: usize,
) -> (Complex64, f64) {
    let h = (b - a) / panels as f64;
    let mut re = Vec::with_capacity(panels * gl.order());
    let mut im = Vec::with_capacity(panels * gl.order());
    let mut abs = Vec::with_capacity(panels * gl.order());
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let v = radial_integrand(q, lo + 0.5 * h * (x + 1.0)) * (0.5 * h * w);
            re.push(v.re);
            im.push(v.im);
            abs.push(v.norm());
        }
    }
    (
        Complex64::new(pairwise_sum(&re), pairwise_sum(&im)),
        pairwise_sum(&abs),
    )
}

/// `I_k(z, τ)` by radial reduction:
/// `2π ∫ e^{iτr} J₀(|z|r) φ(2^{−k}r)² r dr` for `n = 2`,
/// `4π ∫ e^{iτr} sinc(|z|r) φ(2^{−k}r)² r² dr` for `n = 3`,
/// over the support `(2^{k−1}, 2^{k+1})`.
///
/// Panels start no wider than `(π/4)·min(1/|τ|, 1/|z|)` and are halved until
/// two successive results differ by less than 1e-10 relative (or 1e-13 of
/// `∫|integrand|` when the kernel itself is that small).
pub fn kernel_value(q: &KernelQuery) -> Result<Complex64> {
    let a = 2f64.powi(q.k - 1);
    let b = 2f64.powi(q.k + 1);
    let freq = q.tau.abs().max(q.radius());
    let mut panels = 8usize;
    if freq > 0.0 {
        let width = FRAC_PI_4 / freq;
        panels = panels.max(((b - a) / width).ceil() as usize);
    }
    if panels > MAX_PANELS {
        return Err(Error::Accuracy {
            what: format!("kernel quadrature at {q:?}: oscillation needs {panels} panels"),
            achieved: f64::INFINITY,
            requested: RELATIVE_TOL,
        });
    }
    let gl = GaussLegendre::new(PANEL_ORDER);
    let (mut prev, _) = panel_sum(q, &gl, a, b, panels);
    let mut change = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        panels *= 2;
        if panels > MAX_PANELS {
            break;
        }
        let (next, mass) = panel_sum(q, &gl, a, b, panels);
        change = (next - prev).norm();
        if change <= RELATIVE_TOL * next.norm() || change <= ABSOLUTE_FLOOR * mass {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Accuracy {
        what: format!("kernel quadrature at {q:?}"),
        achieved: change / prev.norm(),
        requested: RELATIVE_TOL,
    })
}

/// Evaluates a batch of queries in parallel, preserving order.
pub fn kernel_values(queries: &[KernelQuery]) -> Result<Vec<Complex64>> {
    queries.par_iter().map(kernel_value).collect()
}

/// Largest level accepted by [`kernel_value_bruteforce`].
pub const BRUTEFORCE_MAX_LEVEL: i32 = 2;

/// Dense tensor-product trapezoid rule over the cube `[−2^{k+1}, 2^{k+1}]ⁿ`,
/// which contains the annulus. The integrand and all its derivatives vanish
/// on the cube boundary, so the rule converges faster than any power. The
/// step is `min(2^{k+1}/128, 1/(4(|z|+|τ|)))` in `n = 2`, twice that bound
/// in `n = 3`. Meant as an independent check of [`kernel_value`].
pub fn kernel_value_bruteforce(q: &KernelQuery) -> Result<Complex64> {
    if q.k > BRUTEFORCE_MAX_LEVEL {
        return Err(Error::Range(format!(
            "brute-force kernel is limited to k <= {BRUTEFORCE_MAX_LEVEL} by cost, got {}",
            q.k
        )));
    }
    let half = 2f64.powi(q.k + 1);
    let freq = q.radius() + q.tau.abs();
    let base = if q.n == 2 { 128.0 } else { 64.0 };
    let mut h = half / base;
    if freq > 0.0 {
        h = h.min(if q.n == 2 { 0.25 } else { 0.5 } / freq);
    }
    let m = (2.0 * half / h).ceil() as usize;
    let h = 2.0 * half / m as f64;
    let scale = 2f64.powi(-q.k);
    let coord = |i: usize| -half + i as f64 * h;
    let rows: Vec<Complex64> = (0..=m)
        .into_par_iter()
        .map(|i| {
            let x0 = coord(i);
            let mut acc = Vec::new();
            let mut push = |xi: [f64; 3]| {
                let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
                let c = DyadicCutoff::phi(scale * r);
                if c > 0.0 {
                    let phase = q.z[0] * xi[0] + q.z[1] * xi[1] + q.z[2] * xi[2] + q.tau * r;
                    acc.push(Complex64::from_polar(c * c, phase));
                }
            };
            for j in 0..=m {
                if q.n == 2 {
                    push([x0, coord(j), 0.0]);
                } else {
                    for l in 0..=m {
                        push([x0, coord(j), coord(l)]);
                    }
                }
            }
            let re: Vec<f64> = acc.iter().map(|v| v.re).collect();
            let im: Vec<f64> = acc.iter().map(|v| v.im).collect();
            Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
        })
        .collect();
    let re: Vec<f64> = rows.iter().map(|v| v.re).collect();
    let im: Vec<f64> = rows.iter().map(|v| v.im).collect();
    Ok(Complex64::new(pairwise_sum(&re), pairwise_sum(&im)) * h.powi(q.n as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    /// `∫_{ℝⁿ} φ(|ξ|)² dξ = |S^{n−1}| ∫ φ(r)² r^{n−1} dr` by a fine
    /// trapezoid rule in `r`.
    fn cutoff_mass(n: usize) -> f64 {
        let m = 200_000;
        let h = 1.5 / m as f64;
        let mut acc = 0.0;
        for i in 1..m {
            let r = 0.5 + i as f64 * h;
            acc += DyadicCutoff::phi(r).powi(2) * r.powi(n as i32 - 1);
        }
        let sphere = if n == 2 { 2.0 * PI } else { 4.0 * PI };
        sphere * acc * h
    }

    #[test]
    fn value_at_origin_is_the_cutoff_mass() {
        for n in [2, 3] {
            let mass = cutoff_mass(n);
            for k in [-1, 0, 2] {
                let q = KernelQuery::new(&vec![0.0; n], 0.0, k, n).unwrap();
                let v = kernel_value(&q).unwrap();
                let expect = 2f64.powi(n as i32 * k) * mass;
                assert!(v.im.abs() < 1e-14 * expect);
                assert!((v.re - expect).abs() < 1e-9 * expect, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn scaling_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let n = rng.gen_range(2..=3);
            let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let tau = rng.gen_range(-3.0..3.0);
            for k in -2..=4 {
                let s = 2f64.powi(k);
                let lhs = kernel_value(&KernelQuery::new(&z, tau, k, n).unwrap()).unwrap();
                let zs: Vec<f64> = z.iter().map(|v| v * s).collect();
                let rhs = kernel_value(&KernelQuery::new(&zs, tau * s, 0, n).unwrap()).unwrap()
                    * s.powi(n as i32);
                assert!(rel(lhs, rhs) < 1e-8, "k = {k}");
            }
        }
    }

    #[test]
    fn matches_bruteforce_in_2d() {
        let q = KernelQuery::new(&[0.7, 0.0], 0.3, 0, 2).unwrap();
        let a = kernel_value(&q).unwrap();
        let b = kernel_value_bruteforce(&q).unwrap();
        assert!(rel(a, b) < 1e-5, "{a} vs {b}");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let z = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let q =
                KernelQuery::new(&z, rng.gen_range(-2.0..2.0), rng.gen_range(-1..=1), 2).unwrap();
            let a = kernel_value(&q).unwrap();
            let b = kernel_value_bruteforce(&q).unwrap();
            let scale = kernel_value(&KernelQuery::new(&[0.0, 0.0], 0.0, q.k, 2).unwrap())
                .unwrap()
                .norm();
            assert!(
                (a - b).norm() < 1e-5 * scale.max(a.norm()),
                "{q:?}: {a} vs {b}"
            );
        }
        assert!(
            kernel_value_bruteforce(&KernelQuery::new(&[0.0, 0.0], 0.0, 3, 2).unwrap()).is_err()
        );
    }

    #[test]
    fn matches_bruteforce_in_3d() {
        let q = KernelQuery::new(&[0.4, -0.2, 0.3], 0.5, 0, 3).unwrap();
        let a = kernel_value(&q).unwrap();
        let b = kernel_value_bruteforce(&q).unwrap();
        assert!(rel(a, b) < 1e-5, "{a} vs {b}");
    }

    #[test]
    fn symmetries_and_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let z = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let tau = rng.gen_range(-5.0..5.0);
            let v = kernel_value(&KernelQuery::new(&z, tau, 0, 2).unwrap()).unwrap();
            let w = kernel_value(&KernelQuery::new(&z, -tau, 0, 2).unwrap()).unwrap();
            assert!((v - w.conj()).norm() < 1e-10 * v.norm().max(1e-3));
            let angle: f64 = rng.gen_range(0.0..6.0);
            let rz = [
                angle.cos() * z[0] - angle.sin() * z[1],
                angle.sin() * z[0] + angle.cos() * z[1],
            ];
            let r = kernel_value(&KernelQuery::new(&rz, tau, 0, 2).unwrap()).unwrap();
            assert!((v - r).norm() < 1e-8 * v.norm().max(1e-3));
            let peak = kernel_value(&KernelQuery::new(&[0.0, 0.0], 0.0, 0, 2).unwrap())
                .unwrap()
                .re;
            assert!(v.norm() <= peak);
        }
        assert!(KernelQuery::new(&[0.0; 4], 0.0, 0, 4).is_err());
        let far = KernelQuery::new(&[1e9, 0.0], 0.0, 0, 2).unwrap();
        assert!(matches!(kernel_value(&far), Err(Error::Accuracy { .. })));
    }
}
