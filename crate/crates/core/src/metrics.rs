//! Time-to-solution accounting and scaling-law fits.
//!
//! TTS converts a success curve into a restart-aware cost: running t
//! steps with per-run success p, how many steps until the target
//! confidence is met? Curves report it per step count; benchmarks use
//! the curve minimum.

use crate::error::{Error, Result};

/// Expected steps to reach confidence `delta` by repeating t-step runs
/// that each succeed with probability p: t * ln(1-delta) / ln(1-p).
/// Zero success never finishes (infinity); certain success needs
/// exactly one run, so the answer is t itself rather than the
/// logarithm's degenerate value.
pub fn tts(t: f64, p: f64, delta: f64) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "step count must be finite and nonnegative, got {t}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "success probability must lie in [0, 1], got {p}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target confidence must lie strictly inside (0, 1), got {delta}"
        )));
    }
    if p == 0.0 {
        return Ok(f64::INFINITY);
    }
    if p == 1.0 {
        return Ok(t);
    }
    Ok(t * (1.0 - delta).ln() / (1.0 - p).ln())
}

/// One evaluated point of a TTS curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TtsEntry {
    pub t: u64,
    pub success_probability: f64,
    pub tts: f64,
}

/// TTS evaluated along a success curve for t = 1..=t_max. The t = 0
/// entry of a success curve is the initial distribution's mass and is
/// not a run, so it carries no TTS.
#[derive(Clone, Debug)]
pub struct TtsCurve {
    pub delta: f64,
    pub entries: Vec<TtsEntry>,
}

impl TtsCurve {
    /// Build from a success curve indexed by t = 0..=t_max. Entries a
    /// rounding error outside [0, 1] are snapped onto it; anything
    /// further out is a real defect and rejected.
    pub fn from_success_curve(probs: &[f64], delta: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("empty success curve".into()));
        }
        let mut entries = Vec::with_capacity(probs.len().saturating_sub(1));
        for (t, &p) in probs.iter().enumerate().skip(1) {
            if !(-1e-9..=1.0 + 1e-9).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "success curve entry {p} at t = {t} is not a probability"
                )));
            }
            let p = p.clamp(0.0, 1.0);
            entries.push(TtsEntry {
                t: t as u64,
                success_probability: p,
                tts: tts(t as f64, p, delta)?,
            });
        }
        Ok(TtsCurve { delta, entries })
    }

    /// The curve's best point: smallest TTS, earliest t on ties.
    /// A curve that never succeeds has no signal to report.
    pub fn min_tts(&self) -> Result<(u64, f64)> {
        let mut best: Option<(u64, f64)> = None;
        for e in &self.entries {
            let better = match best {
                None => e.tts < f64::INFINITY,
                Some((_, b)) => e.tts < b,
            };
            if better {
                best = Some((e.t, e.tts));
            }
        }
        best.ok_or(Error::NoSolutionSignal)
    }
}

/// Which engine the fitted power law favors as problems grow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitRegion {
    QuantumFavorable,
    Even,
    ClassicalFavorable,
}

impl std::fmt::Display for FitRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FitRegion::QuantumFavorable => "quantum-favorable",
            FitRegion::Even => "even",
            FitRegion::ClassicalFavorable => "classical-favorable",
        })
    }
}

/// Least-squares power law quantum = prefactor * classical^exponent,
/// fitted in log-log space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub residual_ss: f64,
    pub n_points: usize,
    pub region: FitRegion,
}

/// Fit (classical TTS, quantum TTS) pairs. An exponent below one means
/// the quantum cost grows sublinearly in the classical cost.
pub fn fit_scaling(pairs: &[(f64, f64)]) -> Result<ScalingFit> {
    if pairs.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "{} point(s), need at least 2",
            pairs.len()
        )));
    }
    for &(c, q) in pairs {
        if !(c.is_finite() && c > 0.0 && q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "TTS pairs must be positive and finite, got ({c}, {q})"
            )));
        }
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|&(c, _)| c.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|&(_, q)| q.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let var_x: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    if var_x == 0.0 {
        return Err(Error::DegenerateFit(
            "all classical TTS values coincide".into(),
        ));
    }
    let cov: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let exponent = cov / var_x;
    let intercept = mean_y - exponent * mean_x;
    let residual_ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + exponent * x)).powi(2))
        .sum();
    let region = if exponent < 1.0 {
        FitRegion::QuantumFavorable
    } else if exponent > 1.0 {
        FitRegion::ClassicalFavorable
    } else {
        FitRegion::Even
    };
    Ok(ScalingFit {
        exponent,
        prefactor: intercept.exp(),
        residual_ss,
        n_points: pairs.len(),
        region,
    })
}
