use super::decomposition::DecompositionReport;
use super::ratio::RatioRecord;
use super::region::{Region, RegionQuery};
use super::scan::{FittedExponent, FrequencyScan, MarginDiagnostic};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write;

/// Everything an experiment measured, with enough context to redo it.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: BTreeMap<String, String>,
    pub classifications: Vec<(RegionQuery, Region)>,
    pub records: Vec<RatioRecord>,
    pub fits: Vec<FittedExponent>,
    pub margins: Vec<MarginDiagnostic>,
    pub frequency_scans: Vec<FrequencyScan>,
    pub decompositions: Vec<DecompositionReport>,
}

fn describe(fit: &FittedExponent) -> String {
    let mut line = format!(
        "{}: measured slope {:.6} (95% interval [{:.6}, {:.6}], r2 {:.6})",
        fit.label, fit.slope, fit.interval.0, fit.interval.1, fit.r2
    );
    if let Some(t) = fit.target {
        let verdict = if (fit.slope - t).abs() <= 0.05 {
            "consistent with"
        } else {
            "differs from"
        };
        let _ = write!(line, ", {verdict} the scaling exponent {t:.6}");
    }
    line
}

impl ExperimentReport {
    /// Plain-text summary, one finding per line, in a stable order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.config {
            let _ = writeln!(out, "config {k} = {v}");
        }
        for (q, r) in &self.classifications {
            let _ = writeln!(
                out,
                "region n={} alpha={} s={} {:?}: {:?}",
                q.n, q.alpha, q.s, q.weight_kind, r
            );
        }
        for r in &self.records {
            let _ = writeln!(
                out,
                "ratio {} alpha={} s={}: measured {:.9e} = {:.9e} / {:.9e}",
                r.member_id, r.query.alpha, r.query.s, r.ratio, r.numerator, r.denominator
            );
        }
        for m in &self.margins {
            if !m.kept {
                let _ = writeln!(out, "dropped {} (margin {:.4})", m.member_id, m.margin);
            }
        }
        for f in &self.fits {
            let _ = writeln!(out, "{}", describe(f));
        }
        for s in &self.frequency_scans {
            for (k, c) in &s.constants {
                let _ = writeln!(out, "frequency k={k}: measured lower bound C_k >= {c:.9e}");
            }
            let _ = writeln!(out, "{}", describe(&s.fit));
            let _ = writeln!(
                out,
                "reference exponent (n+1)/(4p) = {:.6} at p = {:.6}; alpha {} 1+(n+1)/(2p) < alpha < (n+1)/p (not asserted)",
                s.reference_exponent,
                s.reference_p,
                if s.reference_in_range { "inside" } else { "outside" }
            );
        }
        for d in &self.decompositions {
            let _ = writeln!(
                out,
                "decomposition s={}: pythagoras defect {:.3e}, triangle slack {:.6e}",
                d.s, d.pythagoras_defect, d.triangle_slack
            );
        }
        out
    }
}
