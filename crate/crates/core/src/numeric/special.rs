use statrs::function::gamma::{gamma, gamma_ui};
use std::f64::consts::{FRAC_PI_4, PI};

/// `1 / Γ(w)` for any real `w`; zero at the poles `w = 0, -1, -2, …`.
pub fn reciprocal_gamma(w: f64) -> f64 {
    if w <= 0.0 && w == w.round() {
        return 0.0;
    }
    let g = gamma(w);
    if g.is_finite() {
        1.0 / g
    } else {
        0.0
    }
}

/// Upper incomplete gamma `Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt` for `x > 0` and
/// any real `a`. Non-positive orders are reached by the downward recurrence
/// `Γ(a, x) = (Γ(a+1, x) - x^a e^{-x}) / a`, starting from `E₁(x)` at
/// integer orders.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> f64 {
    assert!(x > 0.0, "upper_incomplete_gamma needs x > 0, got {x}");
    if a > 0.0 {
        return gamma_ui(a, x);
    }
    let (mut order, mut value, shift) = if a == a.round() {
        (0.0, exponential_integral_e1(x), (-a) as usize)
    } else {
        let shift = (-a).floor() as usize + 1;
        let order = a + shift as f64;
        (order, gamma_ui(order, x), shift)
    };
    for _ in 0..shift {
        order -= 1.0;
        value = (value - x.powf(order) * (-x).exp()) / order;
    }
    value
}

/// Exponential integral `E₁(x) = Γ(0, x)` for `x > 0`.
pub fn exponential_integral_e1(x: f64) -> f64 {
    assert!(x > 0.0);
    if x <= 1.0 {
        const EULER: f64 = 0.577_215_664_901_532_9;
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..60 {
            let kf = k as f64;
            term *= -x / kf;
            sum += term / kf;
            if term.abs() < 1e-18 {
                break;
            }
        }
        return -EULER - x.ln() - sum;
    }
    // Modified Lentz on the continued fraction e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - …))).
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}

/// Bessel function of the first kind of order zero.
///
/// Power series below 12, Hankel asymptotic expansion (truncated at its
/// smallest term) above. Absolute accuracy is better than 1e-10 everywhere.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 12.0 {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= -q / (k * k);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-3) && k > q.sqrt() {
                break;
            }
        }
        return sum;
    }
    // P ~ Σ (-1)^j b_{2j} x^{-2j},  Q ~ -Σ (-1)^j b_{2j+1} x^{-2j-1},
    // b_k = Π_{i≤k} (2i-1)^2 / (k! 8^k).
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= odd * odd / (8.0 * kf * x);
        if term >= prev || term < 1e-17 {
            break;
        }
        prev = term;
        let j = k / 2;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q -= sign * term;
        }
    }
    let phase = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * phase.cos() - q * phase.sin())
}
