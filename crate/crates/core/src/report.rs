//! Report files: one CSV table and one JSON summary per run.
//!
//! Output is deterministic byte for byte: fixed field order, shortest
//! round-trip float formatting, `\n` newlines, and nothing clock-derived.
//! Infinite TTS prints as `inf` in CSV and `null` in JSON.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::TtsEntry;

/// Settings and problem shape echoed into every JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub mode: String,
    pub problem: String,
    pub ordering: String,
    pub schedule: String,
    pub beta_start: f64,
    pub beta_end: f64,
    pub initial_step: u64,
    pub final_step: u64,
    pub init: String,
    pub seed: u64,
    pub tts_delta: f64,
    pub max_bits: u32,
    pub n_states: usize,
    pub n_moves: usize,
    pub total_qubits: u32,
}

/// One engine's TTS outcome. The starred fields are absent when the
/// curve never saw a success.
#[derive(Clone, Debug, Serialize)]
pub struct EngineSummary {
    pub engine: String,
    pub method: String,
    pub hit_mode: String,
    pub initial_success_probability: f64,
    pub t_star: Option<u64>,
    pub tts_star: Option<f64>,
    pub success_probability_at_t_star: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TtsReport {
    pub meta: RunMeta,
    pub quantum: EngineSummary,
    pub delta_table_checksum: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub meta: RunMeta,
    pub quantum: EngineSummary,
    pub classical: EngineSummary,
    /// Digest of the acceptance tables both engines consumed.
    pub delta_table_checksum: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub meta: RunMeta,
    pub best_label: String,
    pub best_cost: f64,
    pub best_probability: f64,
    pub support_threshold: f64,
    pub delta_table_checksum: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistributionReport {
    pub meta: RunMeta,
    pub ground_probability: f64,
    pub delta_table_checksum: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderingResult {
    pub ordering: String,
    pub t_star: Option<u64>,
    pub tts_star: Option<f64>,
    pub success_probability_at_t_star: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderingsReport {
    pub meta: RunMeta,
    pub results: Vec<OrderingResult>,
    pub best_ordering: Option<String>,
    pub delta_table_checksum: String,
}

/// Shortest round-trip float text; infinities as `inf`.
pub fn format_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

fn option_cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), |x| x.to_string())
}

fn option_f64_cell(v: &Option<f64>) -> String {
    v.map_or(String::new(), format_f64)
}

/// `t,success_probability,tts` rows.
pub fn tts_csv(entries: &[TtsEntry]) -> String {
    let mut out = String::from("t,success_probability,tts\n");
    for e in entries {
        let _ = writeln!(
            out,
            "{},{},{}",
            e.t,
            format_f64(e.success_probability),
            format_f64(e.tts)
        );
    }
    out
}

/// `t,classical_success_probability,classical_tts,quantum_success_probability,quantum_tts`
/// rows; the two entry slices must cover the same step counts.
pub fn compare_csv(classical: &[TtsEntry], quantum: &[TtsEntry]) -> Result<String> {
    if classical.len() != quantum.len() {
        return Err(Error::DimensionError(format!(
            "{} classical rows vs {} quantum rows",
            classical.len(),
            quantum.len()
        )));
    }
    let mut out = String::from(
        "t,classical_success_probability,classical_tts,quantum_success_probability,quantum_tts\n",
    );
    for (c, q) in classical.iter().zip(quantum) {
        if c.t != q.t {
            return Err(Error::DimensionError(format!(
                "row mismatch: classical t = {}, quantum t = {}",
                c.t, q.t
            )));
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            c.t,
            format_f64(c.success_probability),
            format_f64(c.tts),
            format_f64(q.success_probability),
            format_f64(q.tts)
        );
    }
    Ok(out)
}

/// `label,cost,probability` rows in label order.
pub fn distribution_csv(rows: &[(String, f64, f64)]) -> String {
    let mut out = String::from("label,cost,probability\n");
    for (label, cost, p) in rows {
        let _ = writeln!(out, "{},{},{}", label, format_f64(*cost), format_f64(*p));
    }
    out
}

/// `ordering,t_star,tts_star,success_probability_at_t_star` rows.
pub fn orderings_csv(results: &[OrderingResult]) -> String {
    let mut out = String::from("ordering,t_star,tts_star,success_probability_at_t_star\n");
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.ordering,
            option_cell(&r.t_star),
            option_f64_cell(&r.tts_star),
            option_f64_cell(&r.success_probability_at_t_star)
        );
    }
    out
}

/// `label,cost` single-row table for solve mode.
pub fn solve_csv(label: &str, cost: f64) -> String {
    format!("label,cost\n{},{}\n", label, format_f64(cost))
}

/// Write `<out>.csv` and `<out>.json`, creating parent directories as
/// needed. Returns the two paths.
pub fn write_report<S: Serialize>(
    out_base: &str,
    csv: &str,
    json: &S,
) -> Result<(PathBuf, PathBuf)> {
    let base = Path::new(out_base);
    if let Some(parent) = base.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Error::Io(format!("creating {}: {e}", parent.display())))?;
        }
    }
    let csv_path = base.with_extension("csv");
    let json_path = base.with_extension("json");
    let mut json_text = serde_json::to_string_pretty(json)
        .map_err(|e| Error::Io(format!("serializing report: {e}")))?;
    json_text.push('\n');
    std::fs::write(&csv_path, csv)
        .map_err(|e| Error::Io(format!("writing {}: {e}", csv_path.display())))?;
    std::fs::write(&json_path, json_text)
        .map_err(|e| Error::Io(format!("writing {}: {e}", json_path.display())))?;
    Ok((csv_path, json_path))
}
