//! Run configuration: `key = value` files with command-line overrides.
//!
//! A config file is plain text, one setting per line, `#` comments and
//! blank lines ignored. Every key can also be given on the command
//! line, where it wins over the file. Unknown keys and keys repeated
//! within the file are rejected rather than silently ignored.

use std::collections::HashMap;

use crate::classical::ScheduleKind;
use crate::error::{Error, Result};
use crate::qwalk::{WalkOrdering, DEFAULT_MAX_BITS};

/// Every key a config file or override may set.
pub const CONFIG_KEYS: [&str; 13] = [
    "problem",
    "mode",
    "initial_step",
    "final_step",
    "beta_start",
    "beta_end",
    "schedule",
    "init",
    "ordering",
    "tts_delta",
    "seed",
    "max_bits",
    "out",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Run the walk and report the best label found.
    Solve,
    /// Quantum success curve and its TTS minimum.
    Tts,
    /// Final-state probability per listed label.
    Distribution,
    /// Quantum and classical curves side by side from shared inputs.
    Compare,
    /// TTS minimum per operator ordering.
    Orderings,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Solve => "solve",
            Mode::Tts => "tts",
            Mode::Distribution => "distribution",
            Mode::Compare => "compare",
            Mode::Orderings => "orderings",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solve" => Ok(Mode::Solve),
            "tts" => Ok(Mode::Tts),
            "distribution" => Ok(Mode::Distribution),
            "compare" => Ok(Mode::Compare),
            "orderings" => Ok(Mode::Orderings),
            other => Err(Error::InvalidParameter(format!(
                "unknown mode \"{other}\" (expected solve, tts, distribution, compare, or orderings)"
            ))),
        }
    }
}

/// Initial-state setting as written in the config; the label is kept
/// textual because its width is only checkable against a loaded
/// problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitSetting {
    Uniform,
    FixedLabel(String),
}

impl std::fmt::Display for InitSetting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitSetting::Uniform => f.write_str("uniform"),
            InitSetting::FixedLabel(l) => write!(f, "fixed:{l}"),
        }
    }
}

impl std::str::FromStr for InitSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(InitSetting::Uniform);
        }
        if let Some(label) = s.strip_prefix("fixed:") {
            if label.is_empty() || !label.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::InvalidParameter(format!(
                    "init label \"{label}\" is not a binary string"
                )));
            }
            return Ok(InitSetting::FixedLabel(label.to_string()));
        }
        Err(Error::InvalidParameter(format!(
            "unknown init \"{s}\" (expected uniform or fixed:<binary label>)"
        )))
    }
}

/// Fully resolved run settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: String,
    pub mode: Mode,
    pub initial_step: u64,
    pub final_step: u64,
    pub beta_start: f64,
    pub beta_end: f64,
    pub schedule: ScheduleKind,
    pub init: InitSetting,
    pub ordering: WalkOrdering,
    pub tts_delta: f64,
    pub seed: u64,
    pub max_bits: u32,
    pub out: String,
}

fn parse_schedule_kind(s: &str) -> Result<ScheduleKind> {
    match s {
        "constant" => Ok(ScheduleKind::Constant),
        "linear" => Ok(ScheduleKind::Linear),
        "geometric" => Ok(ScheduleKind::Geometric),
        other => Err(Error::InvalidParameter(format!(
            "unknown schedule \"{other}\" (expected constant, linear, or geometric)"
        ))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        Error::InvalidParameter(format!("key {key}: cannot parse \"{value}\""))
    })
}

/// Parse a config file body into unvalidated key/value pairs.
/// Duplicate or unknown keys are errors.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut seen = HashMap::new();
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidParameter(format!(
                "config line {}: expected key = value, got \"{}\"",
                lineno + 1,
                line
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(Error::InvalidParameter(format!(
                "config line {}: unknown key \"{key}\"",
                lineno + 1
            )));
        }
        if seen.insert(key.clone(), ()).is_some() {
            return Err(Error::InvalidParameter(format!(
                "config line {}: key \"{key}\" set twice",
                lineno + 1
            )));
        }
        pairs.push((key, value));
    }
    Ok(pairs)
}

impl RunConfig {
    /// Merge file pairs and override pairs (later wins within the
    /// overrides), check for required keys, and validate every value.
    pub fn from_pairs(
        file_pairs: &[(String, String)],
        overrides: &[(String, String)],
    ) -> Result<RunConfig> {
        let mut merged: HashMap<&str, &str> = HashMap::new();
        for (k, v) in file_pairs.iter().chain(overrides) {
            if !CONFIG_KEYS.contains(&k.as_str()) {
                return Err(Error::InvalidParameter(format!("unknown key \"{k}\"")));
            }
            merged.insert(k, v);
        }
        let missing: Vec<&str> = ["problem", "mode", "final_step"]
            .into_iter()
            .filter(|k| !merged.contains_key(k))
            .collect();
        if !missing.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "missing required key(s): {}",
                missing.join(", ")
            )));
        }

        let get = |k: &str| merged.get(k).copied();
        let problem = get("problem").expect("checked above").to_string();
        let mode: Mode = get("mode").expect("checked above").parse()?;
        let final_step: u64 = parse_num("final_step", get("final_step").expect("checked above"))?;
        let initial_step: u64 = match get("initial_step") {
            Some(v) => parse_num("initial_step", v)?,
            None => 1,
        };
        let beta_start: f64 = match get("beta_start") {
            Some(v) => parse_num("beta_start", v)?,
            None => 1.0,
        };
        let beta_end: f64 = match get("beta_end") {
            Some(v) => parse_num("beta_end", v)?,
            None => beta_start,
        };
        let schedule = match get("schedule") {
            Some(v) => parse_schedule_kind(v)?,
            None => ScheduleKind::Constant,
        };
        let init: InitSetting = match get("init") {
            Some(v) => v.parse()?,
            None => InitSetting::Uniform,
        };
        let ordering: WalkOrdering = match get("ordering") {
            Some(v) => v.parse()?,
            None => WalkOrdering::Lemieux,
        };
        let tts_delta: f64 = match get("tts_delta") {
            Some(v) => parse_num("tts_delta", v)?,
            None => 0.9,
        };
        let seed: u64 = match get("seed") {
            Some(v) => parse_num("seed", v)?,
            None => 1,
        };
        let max_bits: u32 = match get("max_bits") {
            Some(v) => parse_num("max_bits", v)?,
            None => DEFAULT_MAX_BITS,
        };
        let out = get("out").unwrap_or("report").to_string();

        if initial_step == 0 {
            return Err(Error::InvalidParameter(
                "initial_step must be at least 1".into(),
            ));
        }
        if final_step < initial_step {
            return Err(Error::InvalidParameter(format!(
                "final_step {final_step} is before initial_step {initial_step}"
            )));
        }
        if !(tts_delta > 0.0 && tts_delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tts_delta must lie strictly inside (0, 1), got {tts_delta}"
            )));
        }
        if !beta_start.is_finite() || beta_start < 0.0 || !beta_end.is_finite() || beta_end < 0.0 {
            return Err(Error::InvalidParameter(
                "beta_start and beta_end must be finite and nonnegative".into(),
            ));
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter("out must not be empty".into()));
        }

        Ok(RunConfig {
            problem,
            mode,
            initial_step,
            final_step,
            beta_start,
            beta_end,
            schedule,
            init,
            ordering,
            tts_delta,
            seed,
            max_bits,
            out,
        })
    }

    /// Convenience wrapper: parse an optional file body, then apply
    /// overrides.
    pub fn from_sources(
        file_text: Option<&str>,
        overrides: &[(String, String)],
    ) -> Result<RunConfig> {
        let file_pairs = match file_text {
            Some(text) => parse_config_file(text)?,
            None => Vec::new(),
        };
        RunConfig::from_pairs(&file_pairs, overrides)
    }
}
