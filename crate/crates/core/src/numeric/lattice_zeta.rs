use super::special::{reciprocal_gamma, upper_incomplete_gamma};
use std::f64::consts::PI;

/// Lattice zeta function `Z(w) = Σ'_{z ∈ Λ} |z|^{-2w}` of the rectangular
/// lattice `Λ = diag(spacings) ℤ^d`, analytically continued to all real
/// `w ≠ d/2`.
///
/// This constant governs the leading error of the punctured lattice sum of a
/// function with a homogeneous singularity: for smooth `g`,
/// `V Σ'_{z} |z|^{-2w} g(z) - ∫ |z|^{-2w} g = V Z(w) g(0) + O(h^{d-2w+2})`,
/// `V` the cell volume. Evaluated with the theta-function (Ewald) splitting;
/// both rapidly convergent sums are truncated once their terms fall below
/// `tol` relative to unity.
///
/// Returns `f64::INFINITY` at the pole `w = d/2`.
pub fn lattice_zeta(spacings: &[f64], w: f64, tol: f64) -> f64 {
    let d = spacings.len();
    assert!(d >= 1 && spacings.iter().all(|s| *s > 0.0));
    let half_d = d as f64 / 2.0;
    if w == 0.0 {
        return -1.0;
    }
    if w < 0.0 && w == w.round() {
        return 0.0;
    }
    if (w - half_d).abs() < 1e-14 {
        return f64::INFINITY;
    }

    // Rescale to a unimodular form, Z_Λ(w) = c^w Z_{cΛ²}(w) with det(cA) = 1.
    let squares: Vec<f64> = spacings.iter().map(|s| s * s).collect();
    let log_det: f64 = squares.iter().map(|a| a.ln()).sum();
    let c = (-log_det / d as f64).exp();
    let a: Vec<f64> = squares.iter().map(|v| v * c).collect();
    let dual: Vec<f64> = a.iter().map(|v| 1.0 / v).collect();

    let cutoff = (1.0 / tol.clamp(1e-300, 1e-3)).ln() + 8.0;
    let direct = theta_tail_sum(&a, cutoff, |x| x.powf(-w) * upper_incomplete_gamma(w, x));
    let reciprocal = theta_tail_sum(&dual, cutoff, |x| {
        x.powf(w - half_d) * upper_incomplete_gamma(half_d - w, x)
    });

    let rg = reciprocal_gamma(w);
    let bracket = rg * (direct + reciprocal) - reciprocal_gamma(w + 1.0) - rg / (half_d - w);
    c.powf(w) * PI.powf(w) * bracket
}

/// Σ' over `m ∈ ℤ^d` of `term(π Σ a_i m_i²)`, restricted to `π Q(m) ≤ cutoff`.
fn theta_tail_sum<F: Fn(f64) -> f64>(a: &[f64], cutoff: f64, term: F) -> f64 {
    let d = a.len();
    let ranges: Vec<i64> = a
        .iter()
        .map(|ai| (cutoff / (PI * ai)).sqrt().ceil() as i64)
        .collect();
    let mut m: Vec<i64> = ranges.iter().map(|r| -r).collect();
    let mut terms = Vec::new();
    loop {
        let q: f64 = m.iter().zip(a).map(|(mi, ai)| ai * (mi * mi) as f64).sum();
        if q > 0.0 && PI * q <= cutoff {
            terms.push(term(PI * q));
        }
        // odometer increment
        let mut axis = 0;
        loop {
            if axis == d {
                return super::pairwise_sum(&terms);
            }
            m[axis] += 1;
            if m[axis] <= ranges[axis] {
                break;
            }
            m[axis] = -ranges[axis];
            axis += 1;
        }
    }
}
