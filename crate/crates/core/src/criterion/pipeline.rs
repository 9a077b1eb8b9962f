use std::f64::consts::TAU;

use crate::symbol::Symbol;
use crate::C64;

use super::{
    inflate_arc, scan_for_arcs, Candidate, CriterionReport, InflateSearch, Inflation, ScanOptions, Verdict,
};

/// Settings for [`check_symbol`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    /// Seed rays for the scan.
    pub rays: Vec<f64>,
    pub level: f64,
    /// Power for the Minkowski-sum conditions; `None` skips inflation.
    pub m: Option<u32>,
    pub scan: ScanOptions,
    pub inflate: InflateSearch,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            rays: even_rays(64),
            level: 1.0,
            m: Some(2),
            scan: ScanOptions::default(),
            inflate: InflateSearch::default(),
        }
    }
}

/// `n` rays `2πk/n`, offset by half a step so none sits on an axis.
pub fn even_rays(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * (k as f64 + 0.5) / n as f64).collect()
}

/// Result of [`check_symbol`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    /// Level-`level` report of the chosen candidate, with the inflation
    /// results copied in. Without a passing candidate: the first failing one,
    /// else an inconclusive report.
    pub report: CriterionReport,
    /// The symbol the chosen arc and region refer to: `Φ`, or `Φ_a` when the
    /// candidate was validated after rotation by `a`.
    pub symbol: Symbol,
    pub chosen: Option<Candidate>,
    pub inflation: Option<Inflation>,
    pub candidates: usize,
    pub passes: usize,
}

/// Scan, validate, check and inflate.
///
/// Passing candidates are tried in ray order and the first one that
/// inflates for the requested `m` is kept. If none does, the verdict is
/// downgraded to inconclusive with the search log in the note.
pub fn check_symbol(phi: &Symbol, opts: &PipelineOptions) -> PipelineOutcome {
    let candidates = scan_for_arcs(phi, opts.level, &opts.rays, &opts.scan);
    let passes = candidates.iter().filter(|c| c.report.verdict == Verdict::Pass).count();
    let Some(chosen) = candidates.iter().find(|c| c.report.verdict == Verdict::Pass).cloned() else {
        let report = candidates
            .iter()
            .find(|c| c.report.verdict == Verdict::Fail)
            .map(|c| c.report.clone())
            .unwrap_or_else(|| {
                CriterionReport::rejected(
                    opts.level,
                    format!("no passing arc among {} candidates", candidates.len()),
                )
            });
        return PipelineOutcome {
            report,
            symbol: phi.clone(),
            chosen: None,
            inflation: None,
            candidates: candidates.len(),
            passes,
        };
    };

    let Some(m) = opts.m else {
        let symbol = rotated_symbol(phi, &chosen);
        return PipelineOutcome {
            report: chosen.report.clone(),
            symbol,
            chosen: Some(chosen),
            inflation: None,
            candidates: candidates.len(),
            passes,
        };
    };
    let mut failures = Vec::new();
    for candidate in candidates.iter().filter(|c| c.report.verdict == Verdict::Pass) {
        let symbol = rotated_symbol(phi, candidate);
        let base = super::validate_arc(&candidate.arc.scaled(candidate.rotation.conj()))
            .expect("a passing candidate validates");
        match inflate_arc(&symbol, &base, m, &opts.inflate) {
            Ok(found) => {
                let mut report = candidate.report.clone();
                report.minkowski_ok = found.report.minkowski_ok.clone();
                report.chosen = found.report.chosen;
                return PipelineOutcome {
                    report,
                    symbol,
                    chosen: Some(candidate.clone()),
                    inflation: Some(found),
                    candidates: candidates.len(),
                    passes,
                };
            }
            Err(err) => failures.push(format!("ray {:.4}: {err}", candidate.ray)),
        }
    }
    let mut report = chosen.report.clone();
    report.verdict = Verdict::Inconclusive;
    report.note =
        Some(format!("level-{} check passed but no arc inflated: {}", opts.level, failures.join("; ")));
    PipelineOutcome {
        report,
        symbol: rotated_symbol(phi, &chosen),
        chosen: Some(chosen),
        inflation: None,
        candidates: candidates.len(),
        passes,
    }
}

/// `Φ`, or `Φ_a` for a candidate validated after rotation by `a`.
fn rotated_symbol(phi: &Symbol, candidate: &Candidate) -> Symbol {
    if candidate.rotation == C64::new(1.0, 0.0) {
        phi.clone()
    } else {
        phi.homothety_conjugate(candidate.rotation).expect("rotation is a unit complex number")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_passes_end_to_end() {
        let out = check_symbol(&Symbol::cos(), &PipelineOptions::default());
        assert_eq!(out.report.verdict, Verdict::Pass, "{:?}", out.report);
        let chosen = out.report.chosen.unwrap();
        assert!(chosen.r > 1.0 && chosen.eps > 0.0);
        assert_eq!(out.report.minkowski_ok, Some(vec![true]));
    }

    #[test]
    fn rose_has_no_pass() {
        let opts = PipelineOptions { rays: even_rays(32), ..PipelineOptions::default() };
        let out = check_symbol(&Symbol::rose(), &opts);
        assert_eq!(out.passes, 0);
        assert_ne!(out.report.verdict, Verdict::Pass);
    }
}
