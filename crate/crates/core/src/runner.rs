//! Orchestration behind the command line: load a problem, run the
//! requested experiment mode, write the report pair.

use std::collections::HashSet;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::classical::{
    step_distribution, success_prob_sampled_curve, transition_from_delta, HitMode, InitMode,
    Schedule, TransitionMatrix, EXACT_STATE_LIMIT, SAMPLED_RUNS_DEFAULT,
};
use crate::config::{InitSetting, Mode, RunConfig};
use crate::error::{Error, Result};
use crate::metrics::{TtsCurve, TtsEntry};
use crate::nqueens;
use crate::problem::{build_delta_table, parse_problem, ProblemSpec};
use crate::qwalk::{RegisterLayout, StateVector, WalkEngine, WalkOrdering};
use crate::report::{
    compare_csv, distribution_csv, orderings_csv, solve_csv, tts_csv, write_report,
    CompareReport, DistributionReport, EngineSummary, OrderingResult, OrderingsReport, RunMeta,
    SolveReport, TtsReport,
};

/// Minimum final-state probability for a label to count as part of the
/// support in solve mode.
pub const SOLVE_SUPPORT_THRESHOLD: f64 = 1e-12;

const NORM_DRIFT_TOL: f64 = 1e-10;

/// Paths written by a run plus a one-line outcome for the terminal.
#[derive(Debug)]
pub struct RunOutcome {
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
    pub summary: String,
}

/// Problem shape and register demand, computed without building an
/// engine so oversized problems still report cleanly.
#[derive(Debug)]
pub struct ResourceEstimate {
    pub problem: String,
    pub n_states: usize,
    pub n_moves: usize,
    pub layout: RegisterLayout,
}

impl std::fmt::Display for ResourceEstimate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l = &self.layout;
        writeln!(
            f,
            "problem: {} ({} states, {} move slots)",
            self.problem, self.n_states, self.n_moves
        )?;
        writeln!(
            f,
            "registers: state {}, move id {}, move value {}, coin {}, ancilla {}",
            l.state_bits, l.move_id_bits, l.move_value_bits, l.coin_bits, l.ancilla_bits
        )?;
        writeln!(f, "total qubits: {}", l.total_bits())?;
        write!(f, "statevector memory: {} bytes", l.memory_bytes())
    }
}

/// Load a problem from an `nqueens:` descriptor or a JSON file path.
pub fn load_problem(problem: &str) -> Result<ProblemSpec> {
    if nqueens::is_descriptor(problem) {
        nqueens::from_descriptor(problem)
    } else {
        let text = std::fs::read_to_string(problem)
            .map_err(|e| Error::Io(format!("reading {problem}: {e}")))?;
        parse_problem(&text)
    }
}

pub fn estimate_resources(problem: &str) -> Result<ResourceEstimate> {
    let spec = load_problem(problem)?;
    Ok(ResourceEstimate {
        problem: problem.to_string(),
        n_states: spec.n_states(),
        n_moves: spec.move_model().move_count(),
        layout: RegisterLayout::for_spec(&spec),
    })
}

fn resolve_init(spec: &ProblemSpec, setting: &InitSetting) -> Result<InitMode> {
    match setting {
        InitSetting::Uniform => Ok(InitMode::Uniform),
        InitSetting::FixedLabel(text) => Ok(InitMode::Fixed(spec.parse_label(text)?)),
    }
}

fn hex(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// One digest for a run's acceptance tables: the table checksum itself
/// when the schedule compiles a single table, otherwise a digest of
/// the per-beta checksums in first-use order.
fn combine_checksums(checks: &[String]) -> String {
    if checks.len() == 1 {
        return checks[0].clone();
    }
    let mut hasher = Sha256::new();
    for c in checks {
        hasher.update(c.as_bytes());
    }
    hex(&hasher.finalize())
}

struct QuantumRun {
    curve: Vec<f64>,
    final_state: StateVector,
    checksum: String,
}

/// Step the walk through a schedule, recording the ground-probability
/// curve and the digest of every acceptance table consumed.
fn drive_quantum(
    engine: &mut WalkEngine,
    schedule: &Schedule,
    ordering: WalkOrdering,
    init: &InitMode,
    t_max: u64,
) -> Result<QuantumRun> {
    let mut sv = engine.initialize(init)?;
    let mut curve = Vec::with_capacity(t_max as usize + 1);
    curve.push(engine.ground_probability(&sv));
    let mut order: Vec<String> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for t in 1..=t_max {
        engine.set_beta(schedule.beta(t))?;
        let ck = engine.delta_checksum().expect("set_beta loads a table");
        if seen.insert(ck.to_string()) {
            order.push(ck.to_string());
        }
        engine.walk_step(&mut sv, ordering)?;
        let drift = (sv.norm_sq() - 1.0).abs();
        if drift > NORM_DRIFT_TOL {
            return Err(Error::NumericInstability(format!(
                "norm drifted by {drift:.3e} after step {t}"
            )));
        }
        curve.push(engine.ground_probability(&sv));
    }
    Ok(QuantumRun {
        curve,
        final_state: sv,
        checksum: combine_checksums(&order),
    })
}

fn window(entries: Vec<TtsEntry>, lo: u64, hi: u64) -> Vec<TtsEntry> {
    entries
        .into_iter()
        .filter(|e| e.t >= lo && e.t <= hi)
        .collect()
}

/// Best finite entry: (t*, tts*, p at t*), earliest t on ties.
fn window_min(entries: &[TtsEntry]) -> Option<(u64, f64, f64)> {
    let mut best: Option<(u64, f64, f64)> = None;
    for e in entries {
        let better = match best {
            None => e.tts < f64::INFINITY,
            Some((_, b, _)) => e.tts < b,
        };
        if better {
            best = Some((e.t, e.tts, e.success_probability));
        }
    }
    best
}

fn engine_summary(
    engine: &str,
    method: &str,
    p0: f64,
    best: &Option<(u64, f64, f64)>,
) -> EngineSummary {
    EngineSummary {
        engine: engine.to_string(),
        method: method.to_string(),
        hit_mode: "at_step".to_string(),
        initial_success_probability: p0,
        t_star: best.map(|b| b.0),
        tts_star: best.map(|b| b.1),
        success_probability_at_t_star: best.map(|b| b.2),
    }
}

fn run_meta(cfg: &RunConfig, spec: &ProblemSpec, ordering_field: &str) -> RunMeta {
    RunMeta {
        mode: cfg.mode.to_string(),
        problem: cfg.problem.clone(),
        ordering: ordering_field.to_string(),
        schedule: cfg.schedule.to_string(),
        beta_start: cfg.beta_start,
        beta_end: cfg.beta_end,
        initial_step: cfg.initial_step,
        final_step: cfg.final_step,
        init: cfg.init.to_string(),
        seed: cfg.seed,
        tts_delta: cfg.tts_delta,
        max_bits: cfg.max_bits,
        n_states: spec.n_states(),
        n_moves: spec.move_model().move_count(),
        total_qubits: RegisterLayout::for_spec(spec).total_bits(),
    }
}

/// Execute a fully validated configuration.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let spec = load_problem(&cfg.problem)?;
    let schedule = Schedule::new(cfg.schedule, cfg.beta_start, cfg.beta_end, cfg.final_step)?;
    let init = resolve_init(&spec, &cfg.init)?;
    match cfg.mode {
        Mode::Solve => run_solve(cfg, &spec, &schedule, &init),
        Mode::Tts => run_tts(cfg, &spec, &schedule, &init),
        Mode::Distribution => run_distribution(cfg, &spec, &schedule, &init),
        Mode::Compare => run_compare(cfg, &spec, &schedule, &init),
        Mode::Orderings => run_orderings(cfg, &spec, &schedule, &init),
    }
}

fn run_solve(
    cfg: &RunConfig,
    spec: &ProblemSpec,
    schedule: &Schedule,
    init: &InitMode,
) -> Result<RunOutcome> {
    let mut engine = WalkEngine::new(spec, cfg.max_bits)?;
    let qr = drive_quantum(&mut engine, schedule, cfg.ordering, init, cfg.final_step)?;
    let marginals = engine.state_marginals(&qr.final_state);
    let mut best: Option<usize> = None;
    for (i, &p) in marginals.iter().enumerate() {
        if p <= SOLVE_SUPPORT_THRESHOLD {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => spec.cost(i) < spec.cost(b),
        };
        if better {
            best = Some(i);
        }
    }
    let Some(i) = best else {
        return Err(Error::NoSolutionSignal);
    };
    let label = spec.format_label(spec.label(i));
    let report = SolveReport {
        meta: run_meta(cfg, spec, &cfg.ordering.to_string()),
        best_label: label.clone(),
        best_cost: spec.cost(i),
        best_probability: marginals[i],
        support_threshold: SOLVE_SUPPORT_THRESHOLD,
        delta_table_checksum: qr.checksum,
    };
    let (csv_path, json_path) = write_report(&cfg.out, &solve_csv(&label, spec.cost(i)), &report)?;
    Ok(RunOutcome {
        summary: format!(
            "best label {label} with cost {} (probability {:.6})",
            spec.cost(i),
            marginals[i]
        ),
        csv_path,
        json_path,
    })
}

fn run_tts(
    cfg: &RunConfig,
    spec: &ProblemSpec,
    schedule: &Schedule,
    init: &InitMode,
) -> Result<RunOutcome> {
    let mut engine = WalkEngine::new(spec, cfg.max_bits)?;
    let qr = drive_quantum(&mut engine, schedule, cfg.ordering, init, cfg.final_step)?;
    let curve = TtsCurve::from_success_curve(&qr.curve, cfg.tts_delta)?;
    let entries = window(curve.entries, cfg.initial_step, cfg.final_step);
    let best = window_min(&entries);
    let Some((t_star, tts_star, p_star)) = best else {
        return Err(Error::NoSolutionSignal);
    };
    let report = TtsReport {
        meta: run_meta(cfg, spec, &cfg.ordering.to_string()),
        quantum: engine_summary("quantum", "statevector", qr.curve[0], &best),
        delta_table_checksum: qr.checksum,
    };
    let (csv_path, json_path) = write_report(&cfg.out, &tts_csv(&entries), &report)?;
    Ok(RunOutcome {
        summary: format!("t* = {t_star}, tts* = {tts_star}, p(t*) = {p_star}"),
        csv_path,
        json_path,
    })
}

fn run_distribution(
    cfg: &RunConfig,
    spec: &ProblemSpec,
    schedule: &Schedule,
    init: &InitMode,
) -> Result<RunOutcome> {
    let mut engine = WalkEngine::new(spec, cfg.max_bits)?;
    let qr = drive_quantum(&mut engine, schedule, cfg.ordering, init, cfg.final_step)?;
    let marginals = engine.state_marginals(&qr.final_state);
    let rows: Vec<(String, f64, f64)> = spec
        .states()
        .iter()
        .enumerate()
        .map(|(i, &label)| (spec.format_label(label), spec.cost(i), marginals[i]))
        .collect();
    let ground = engine.ground_probability(&qr.final_state);
    let report = DistributionReport {
        meta: run_meta(cfg, spec, &cfg.ordering.to_string()),
        ground_probability: ground,
        delta_table_checksum: qr.checksum,
    };
    let (csv_path, json_path) = write_report(&cfg.out, &distribution_csv(&rows), &report)?;
    Ok(RunOutcome {
        summary: format!(
            "distribution over {} labels after {} steps, ground probability {ground:.6}",
            rows.len(),
            cfg.final_step
        ),
        csv_path,
        json_path,
    })
}

fn run_compare(
    cfg: &RunConfig,
    spec: &ProblemSpec,
    schedule: &Schedule,
    init: &InitMode,
) -> Result<RunOutcome> {
    let mut engine = WalkEngine::new(spec, cfg.max_bits)?;
    let exact = spec.n_states() <= EXACT_STATE_LIMIT;
    let ground_mass =
        |d: &[f64]| -> f64 { spec.ground_set().iter().map(|&g| d[g]).sum() };

    let mut q_sv = engine.initialize(init)?;
    let mut q_curve = vec![engine.ground_probability(&q_sv)];
    let mut c_dist = if exact {
        Some(init.distribution(spec)?)
    } else {
        None
    };
    let mut c_curve = match &c_dist {
        Some(d) => vec![ground_mass(d)],
        None => Vec::new(),
    };

    // Both engines consume the same table object per step; the digest
    // stamped into the report covers every distinct one.
    let mut current_bits: Option<u64> = None;
    let mut matrix: Option<TransitionMatrix> = None;
    let mut order: Vec<String> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for t in 1..=cfg.final_step {
        let beta = schedule.beta(t);
        if current_bits != Some(beta.to_bits()) {
            let table = build_delta_table(spec, beta)?;
            if exact {
                matrix = Some(transition_from_delta(spec, &table)?);
            }
            engine.load_delta(&table)?;
            let ck = table.checksum();
            if seen.insert(ck.clone()) {
                order.push(ck);
            }
            current_bits = Some(beta.to_bits());
        }
        engine.walk_step(&mut q_sv, cfg.ordering)?;
        let drift = (q_sv.norm_sq() - 1.0).abs();
        if drift > NORM_DRIFT_TOL {
            return Err(Error::NumericInstability(format!(
                "norm drifted by {drift:.3e} after step {t}"
            )));
        }
        q_curve.push(engine.ground_probability(&q_sv));
        if let Some(dist) = &mut c_dist {
            let m = matrix.as_ref().expect("matrix built alongside the table");
            *dist = step_distribution(m, dist)?;
            c_curve.push(ground_mass(dist));
        }
    }
    if !exact {
        c_curve = success_prob_sampled_curve(
            spec,
            schedule,
            init,
            cfg.final_step,
            HitMode::AtStep,
            SAMPLED_RUNS_DEFAULT,
            cfg.seed,
        )?;
    }
    let checksum = combine_checksums(&order);

    let q_entries = window(
        TtsCurve::from_success_curve(&q_curve, cfg.tts_delta)?.entries,
        cfg.initial_step,
        cfg.final_step,
    );
    let c_entries = window(
        TtsCurve::from_success_curve(&c_curve, cfg.tts_delta)?.entries,
        cfg.initial_step,
        cfg.final_step,
    );
    let qb = window_min(&q_entries);
    let cb = window_min(&c_entries);
    if qb.is_none() && cb.is_none() {
        return Err(Error::NoSolutionSignal);
    }
    let report = CompareReport {
        meta: run_meta(cfg, spec, &cfg.ordering.to_string()),
        quantum: engine_summary("quantum", "statevector", q_curve[0], &qb),
        classical: engine_summary(
            "classical",
            if exact { "exact" } else { "sampled" },
            c_curve[0],
            &cb,
        ),
        delta_table_checksum: checksum,
    };
    let csv = compare_csv(&c_entries, &q_entries)?;
    let (csv_path, json_path) = write_report(&cfg.out, &csv, &report)?;
    let fmt_best = |b: &Option<(u64, f64, f64)>| match b {
        Some((t, v, _)) => format!("tts* = {v} at t = {t}"),
        None => "no signal".to_string(),
    };
    Ok(RunOutcome {
        summary: format!(
            "classical {}; quantum {}",
            fmt_best(&cb),
            fmt_best(&qb)
        ),
        csv_path,
        json_path,
    })
}

fn run_orderings(
    cfg: &RunConfig,
    spec: &ProblemSpec,
    schedule: &Schedule,
    init: &InitMode,
) -> Result<RunOutcome> {
    let mut engine = WalkEngine::new(spec, cfg.max_bits)?;
    let mut results = Vec::new();
    let mut checksum = String::new();
    for ordering in WalkOrdering::ALL {
        let qr = drive_quantum(&mut engine, schedule, ordering, init, cfg.final_step)?;
        checksum = qr.checksum;
        let curve = TtsCurve::from_success_curve(&qr.curve, cfg.tts_delta)?;
        let entries = window(curve.entries, cfg.initial_step, cfg.final_step);
        let best = window_min(&entries);
        results.push(OrderingResult {
            ordering: ordering.to_string(),
            t_star: best.map(|b| b.0),
            tts_star: best.map(|b| b.1),
            success_probability_at_t_star: best.map(|b| b.2),
        });
    }
    let best_ordering = results
        .iter()
        .filter(|r| r.tts_star.is_some())
        .min_by(|a, b| {
            a.tts_star
                .partial_cmp(&b.tts_star)
                .expect("finite tts values")
        })
        .map(|r| r.ordering.clone());
    if best_ordering.is_none() {
        return Err(Error::NoSolutionSignal);
    }
    let summary = {
        let parts: Vec<String> = results
            .iter()
            .map(|r| match r.tts_star {
                Some(v) => format!("{} {v}", r.ordering),
                None => format!("{} no signal", r.ordering),
            })
            .collect();
        format!(
            "tts*: {} (best: {})",
            parts.join(", "),
            best_ordering.as_deref().expect("checked above")
        )
    };
    let report = OrderingsReport {
        meta: run_meta(cfg, spec, "all"),
        results: results.clone(),
        best_ordering,
        delta_table_checksum: checksum,
    };
    let (csv_path, json_path) = write_report(&cfg.out, &orderings_csv(&results), &report)?;
    Ok(RunOutcome {
        summary,
        csv_path,
        json_path,
    })
}
