use super::{kernel_values, KernelQuery};
use crate::error::{Error, Result};
use crate::numeric::linear_fit;
use serde::Serialize;
use std::f64::consts::SQRT_2;

/// Where the kernel is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DecayRegime {
    /// Along the light cone `|z| = τ`, at space-time distance `d`.
    OnCone,
    /// At fixed `τ`, with `|z| = d ≥ 2|τ|`.
    OffCone { tau: f64 },
}

/// Least-squares fit of `log|I_k|` against `log d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub regime: DecayRegime,
    pub n: usize,
    pub k: i32,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub slope_stderr: f64,
    /// Decades spanned by the sampled distances.
    pub sample_range: f64,
    /// `(d, |I_k|)` for every sample.
    pub samples: Vec<(f64, f64)>,
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Samples `|I_k|` at the given distances and fits its power-law decay.
pub fn decay_fit(regime: DecayRegime, k: i32, n: usize, distances: &[f64]) -> Result<DecayFit> {
    let lo = distances.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = distances.iter().cloned().fold(0.0, f64::max);
    if distances.len() < 3 || !(lo > 0.0) {
        return Err(Error::Range(
            "decay fit needs at least three positive distances".into(),
        ));
    }
    let span = (hi / lo).log10();
    if span < 2.0 - 1e-12 {
        return Err(Error::Range(format!(
            "decay fit needs distances spanning at least 2 decades, got {span:.2}"
        )));
    }
    let mut sorted = distances.to_vec();
    sorted.sort_by(f64::total_cmp);
    let queries = sorted
        .iter()
        .map(|&d| {
            let mut z = vec![0.0; n];
            match regime {
                DecayRegime::OnCone => {
                    z[0] = d / SQRT_2;
                    KernelQuery::new(&z, d / SQRT_2, k, n)
                }
                DecayRegime::OffCone { tau } => {
                    if d < 2.0 * tau.abs() {
                        return Err(Error::Range(format!(
                            "off-cone sample |z| = {d} is below 2|tau| = {}",
                            2.0 * tau.abs()
                        )));
                    }
                    z[0] = d;
                    KernelQuery::new(&z, tau, k, n)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let values = kernel_values(&queries)?;
    let samples: Vec<(f64, f64)> = sorted
        .iter()
        .zip(&values)
        .map(|(d, v)| (*d, v.norm()))
        .collect();
    let x: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let y: Vec<f64> = samples
        .iter()
        .map(|s| s.1.max(f64::MIN_POSITIVE).ln())
        .collect();
    let fit = linear_fit(&x, &y).ok_or_else(|| Error::Range("degenerate distances".into()))?;
    Ok(DecayFit {
        regime,
        n,
        k,
        slope: fit.slope,
        intercept: fit.intercept,
        r2: fit.r2,
        slope_stderr: fit.slope_stderr,
        sample_range: span,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn on_cone_rates() {
        let d = log_spaced(10.0, 1000.0, 13);
        let f2 = decay_fit(DecayRegime::OnCone, 0, 2, &d).unwrap();
        assert!((f2.slope + 0.5).abs() < 0.15, "{}", f2.slope);
        let f3 = decay_fit(DecayRegime::OnCone, 0, 3, &d).unwrap();
        assert!((f3.slope + 1.0).abs() < 0.15, "{}", f3.slope);
    }

    #[test]
    fn off_cone_is_steep() {
        let d = log_spaced(10.0, 1000.0, 13);
        let f = decay_fit(DecayRegime::OffCone { tau: 0.0 }, 0, 2, &d).unwrap();
        assert!(f.slope <= -4.0, "{}", f.slope);
    }

    #[test]
    fn rejects_short_ranges() {
        let d = log_spaced(10.0, 900.0, 5);
        assert!(matches!(
            decay_fit(DecayRegime::OnCone, 0, 2, &d),
            Err(Error::Range(_))
        ));
        let d = log_spaced(1.0, 100.0, 5);
        assert!(matches!(
            decay_fit(DecayRegime::OffCone { tau: 1.0 }, 0, 2, &d),
            Err(Error::Range(_))
        ));
    }
}
