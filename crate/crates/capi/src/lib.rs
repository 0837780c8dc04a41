//! C ABI over the solver core. Problems travel as opaque handles,
//! every call returns a flat status code, and curve routines write
//! into caller-owned buffers. The generated header lands in
//! `target/include/qmh.h`.
//!
//! Thread safety: handles are immutable after creation, so sharing a
//! `QmhProblem` across threads is safe; each call builds its own
//! engine or chain state.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qmh::classical::{
    success_prob_exact_curve, success_prob_sampled_curve, HitMode, InitMode, Schedule,
    ScheduleKind,
};
use qmh::problem::{acceptance, parse_problem, ProblemSpec};
use qmh::qwalk::{RegisterLayout, WalkEngine, WalkOrdering};
use qmh::{metrics, nqueens, Error};

/// Call completed.
pub const QMH_OK: i32 = 0;
/// An argument failed validation (bad code, bad label, bad schedule).
pub const QMH_ERR_VALIDATION: i32 = 1;
/// The problem needs more qubits or states than the given cap allows.
pub const QMH_ERR_CAPACITY: i32 = 2;
/// The computation lost numeric meaning (no signal, norm drift).
pub const QMH_ERR_NUMERIC: i32 = 3;
/// A required pointer was null.
pub const QMH_ERR_NULL_ARGUMENT: i32 = 4;
/// A string argument was not valid UTF-8.
pub const QMH_ERR_UTF8: i32 = 5;

/// Walk step ordering V B F B* V* R.
pub const QMH_ORDERING_LEMIEUX: i32 = 0;
/// Walk step ordering V* B* R B V F.
pub const QMH_ORDERING_QUBITIZATION: i32 = 1;
/// Walk step ordering F V* B* R B V.
pub const QMH_ORDERING_ALTERNATIVE: i32 = 2;

/// Hold beta_start for every step.
pub const QMH_SCHEDULE_CONSTANT: i32 = 0;
/// Interpolate beta linearly from beta_start to beta_end.
pub const QMH_SCHEDULE_LINEAR: i32 = 1;
/// Interpolate beta geometrically from beta_start to beta_end.
pub const QMH_SCHEDULE_GEOMETRIC: i32 = 2;

/// Count probability of sitting in a ground state at each step.
pub const QMH_HIT_AT_STEP: i32 = 0;
/// Count probability of having visited a ground state by each step.
pub const QMH_HIT_EVER: i32 = 1;

/// Opaque problem handle. Created by `qmh_problem_parse` or
/// `qmh_problem_nqueens`, released by `qmh_problem_free`.
pub struct QmhProblem {
    spec: ProblemSpec,
}

type CResult<T> = std::result::Result<T, i32>;

fn status(e: &Error) -> i32 {
    i32::from(e.exit_code())
}

fn finish(r: CResult<()>) -> i32 {
    match r {
        Ok(()) => QMH_OK,
        Err(code) => code,
    }
}

/// Unwinding across the C boundary is undefined behavior, so every
/// entry point runs under a catch. A caught panic reports as numeric
/// failure: by construction the core signals everything expected
/// through `Error`, so a panic is a defect, not a user mistake.
fn guarded(f: impl FnOnce() -> i32) -> i32 {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(QMH_ERR_NUMERIC)
}

unsafe fn text_arg<'a>(ptr: *const c_char) -> CResult<&'a str> {
    if ptr.is_null() {
        return Err(QMH_ERR_NULL_ARGUMENT);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| QMH_ERR_UTF8)
}

unsafe fn problem_arg<'a>(ptr: *const QmhProblem) -> CResult<&'a ProblemSpec> {
    ptr.as_ref().map(|p| &p.spec).ok_or(QMH_ERR_NULL_ARGUMENT)
}

unsafe fn out_arg<'a, T>(ptr: *mut T) -> CResult<&'a mut T> {
    ptr.as_mut().ok_or(QMH_ERR_NULL_ARGUMENT)
}

fn ordering_arg(code: i32) -> CResult<WalkOrdering> {
    match code {
        QMH_ORDERING_LEMIEUX => Ok(WalkOrdering::Lemieux),
        QMH_ORDERING_QUBITIZATION => Ok(WalkOrdering::Qubitization),
        QMH_ORDERING_ALTERNATIVE => Ok(WalkOrdering::Alternative),
        _ => Err(QMH_ERR_VALIDATION),
    }
}

fn schedule_arg(kind: i32, beta_start: f64, beta_end: f64, steps: u64) -> CResult<Schedule> {
    let kind = match kind {
        QMH_SCHEDULE_CONSTANT => ScheduleKind::Constant,
        QMH_SCHEDULE_LINEAR => ScheduleKind::Linear,
        QMH_SCHEDULE_GEOMETRIC => ScheduleKind::Geometric,
        _ => return Err(QMH_ERR_VALIDATION),
    };
    Schedule::new(kind, beta_start, beta_end, steps).map_err(|e| status(&e))
}

/// Null label means uniform over every listed state.
unsafe fn init_arg(spec: &ProblemSpec, label: *const c_char) -> CResult<InitMode> {
    if label.is_null() {
        return Ok(InitMode::Uniform);
    }
    let text = text_arg(label)?;
    let parsed = spec.parse_label(text).map_err(|e| status(&e))?;
    Ok(InitMode::Fixed(parsed))
}

unsafe fn curve_out<'a>(ptr: *mut f64, steps: u64) -> CResult<&'a mut [f64]> {
    if ptr.is_null() {
        return Err(QMH_ERR_NULL_ARGUMENT);
    }
    Ok(std::slice::from_raw_parts_mut(ptr, steps as usize + 1))
}

/// Parse a problem from a JSON object mapping equal-width binary state
/// labels to numeric costs, e.g. `{"00": 0.0, "01": 1.5}`. The move
/// model is a single circular coordinate over the full label space.
/// On success writes a handle to `*out`; the caller owns it and must
/// release it with `qmh_problem_free`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn qmh_problem_parse(
    text: *const c_char,
    out: *mut *mut QmhProblem,
) -> i32 {
    guarded(|| {
        finish((|| {
            let text = text_arg(text)?;
            let out = out_arg(out)?;
            let spec = parse_problem(text).map_err(|e| status(&e))?;
            *out = Box::into_raw(Box::new(QmhProblem { spec }));
            Ok(())
        })())
    })
}

/// Build an n-queens instance over permutation states (one queen per
/// column, rows as coordinates, cost = number of attacking diagonal
/// pairs). Pass `fixed_col = fixed_row = -1` for the free instance, or
/// both nonnegative to pin one queen; mixing signs is a validation
/// error. On success writes a handle to `*out`; the caller owns it.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmh_problem_nqueens(
    n: u32,
    fixed_col: i32,
    fixed_row: i32,
    out: *mut *mut QmhProblem,
) -> i32 {
    guarded(|| {
        finish((|| {
            let out = out_arg(out)?;
            let fixed = match (fixed_col, fixed_row) {
                (c, r) if c < 0 && r < 0 => None,
                (c, r) if c >= 0 && r >= 0 => Some((c as u32, r as u32)),
                _ => return Err(QMH_ERR_VALIDATION),
            };
            let spec = nqueens::generate_instance(n, fixed).map_err(|e| status(&e))?;
            *out = Box::into_raw(Box::new(QmhProblem { spec }));
            Ok(())
        })())
    })
}

/// Release a handle. Null is a no-op. Passing the same handle twice,
/// or a pointer this library did not return, is undefined behavior.
///
/// # Safety
/// `problem` must be null or a handle returned by this library that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn qmh_problem_free(problem: *mut QmhProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of listed states.
///
/// # Safety
/// `problem` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmh_problem_state_count(
    problem: *const QmhProblem,
    out: *mut u64,
) -> i32 {
    guarded(|| {
        finish((|| {
            let spec = problem_arg(problem)?;
            *out_arg(out)? = spec.n_states() as u64;
            Ok(())
        })())
    })
}

/// Lowest cost over the listed states.
///
/// # Safety
/// `problem` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmh_problem_min_cost(
    problem: *const QmhProblem,
    out: *mut f64,
) -> i32 {
    guarded(|| {
        finish((|| {
            let spec = problem_arg(problem)?;
            *out_arg(out)? = spec.min_cost();
            Ok(())
        })())
    })
}

/// Simulation resources: total qubit count across all registers and
/// the bytes of amplitude storage exact simulation would need (capped
/// at UINT64_MAX). Never builds the statevector, so this works for
/// instances far beyond what `qmh_quantum_curve` can run.
///
/// # Safety
/// `problem` must be a live handle; both out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qmh_problem_resources(
    problem: *const QmhProblem,
    out_qubits: *mut u32,
    out_bytes: *mut u64,
) -> i32 {
    guarded(|| {
        finish((|| {
            let spec = problem_arg(problem)?;
            let layout = RegisterLayout::for_spec(spec);
            *out_arg(out_qubits)? = layout.total_bits();
            *out_arg(out_bytes)? = u64::try_from(layout.memory_bytes()).unwrap_or(u64::MAX);
            Ok(())
        })())
    })
}

/// Metropolis acceptance probability min(1, exp(-beta (c_to - c_from))).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmh_acceptance(
    cost_from: f64,
    cost_to: f64,
    beta: f64,
    out: *mut f64,
) -> i32 {
    guarded(|| {
        finish((|| {
            *out_arg(out)? = acceptance(cost_from, cost_to, beta).map_err(|e| status(&e))?;
            Ok(())
        })())
    })
}

/// Time to solution: expected cost of repeating a t-step run with
/// per-run success probability p until overall confidence delta is
/// reached. Writes infinity when p is zero; requires t > 0, p in
/// [0, 1], and delta in (0, 1).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmh_tts(t: f64, p: f64, delta: f64, out: *mut f64) -> i32 {
    guarded(|| {
        finish((|| {
            *out_arg(out)? = metrics::tts(t, p, delta).map_err(|e| status(&e))?;
            Ok(())
        })())
    })
}

/// Ground-state probability of the quantum walk after 0..=steps steps,
/// by exact statevector simulation. `ordering` is a QMH_ORDERING_*
/// code, `schedule` a QMH_SCHEDULE_* code, `init_label` a listed
/// binary label or null for the uniform superposition, and `max_bits`
/// the qubit cap the caller is willing to simulate (at most 33).
/// Writes steps + 1 probabilities into `out_probs`.
///
/// # Safety
/// `problem` must be a live handle; `init_label` must be null or a
/// valid NUL-terminated string; `out_probs` must point to at least
/// steps + 1 doubles.
#[no_mangle]
pub unsafe extern "C" fn qmh_quantum_curve(
    problem: *const QmhProblem,
    ordering: i32,
    schedule: i32,
    beta_start: f64,
    beta_end: f64,
    steps: u64,
    init_label: *const c_char,
    max_bits: u32,
    out_probs: *mut f64,
) -> i32 {
    guarded(|| {
        finish((|| {
            let spec = problem_arg(problem)?;
            let ordering = ordering_arg(ordering)?;
            let schedule = schedule_arg(schedule, beta_start, beta_end, steps)?;
            let init = init_arg(spec, init_label)?;
            let out = curve_out(out_probs, steps)?;
            let mut engine = WalkEngine::new(spec, max_bits).map_err(|e| status(&e))?;
            let curve = engine
                .walk_curve(&schedule, ordering, &init, steps)
                .map_err(|e| status(&e))?;
            out.copy_from_slice(&curve);
            Ok(())
        })())
    })
}

/// Success probability of the classical Metropolis chain after
/// 0..=steps steps. `hit` is a QMH_HIT_* code. `runs = 0` evolves the
/// distribution exactly (and needs no seed); `runs > 0` averages that
/// many independent sampled trajectories seeded from `seed`. Writes
/// steps + 1 probabilities into `out_probs`.
///
/// # Safety
/// `problem` must be a live handle; `init_label` must be null or a
/// valid NUL-terminated string; `out_probs` must point to at least
/// steps + 1 doubles.
#[no_mangle]
pub unsafe extern "C" fn qmh_classical_curve(
    problem: *const QmhProblem,
    schedule: i32,
    beta_start: f64,
    beta_end: f64,
    steps: u64,
    init_label: *const c_char,
    hit: i32,
    runs: u64,
    seed: u64,
    out_probs: *mut f64,
) -> i32 {
    guarded(|| {
        finish((|| {
            let spec = problem_arg(problem)?;
            let schedule = schedule_arg(schedule, beta_start, beta_end, steps)?;
            let init = init_arg(spec, init_label)?;
            let hit = match hit {
                QMH_HIT_AT_STEP => HitMode::AtStep,
                QMH_HIT_EVER => HitMode::EverHit,
                _ => return Err(QMH_ERR_VALIDATION),
            };
            let out = curve_out(out_probs, steps)?;
            let curve = if runs == 0 {
                success_prob_exact_curve(spec, &schedule, &init, steps, hit)
            } else {
                success_prob_sampled_curve(spec, &schedule, &init, steps, hit, runs, seed)
            }
            .map_err(|e| status(&e))?;
            out.copy_from_slice(&curve);
            Ok(())
        })())
    })
}

/// Static name for a status code ("ok", "validation", "capacity",
/// "numeric", "null_argument", "utf8", or "unknown"). Never null; the
/// caller must not free the result.
#[no_mangle]
pub extern "C" fn qmh_error_name(code: i32) -> *const c_char {
    let name: &[u8] = match code {
        QMH_OK => b"ok\0",
        QMH_ERR_VALIDATION => b"validation\0",
        QMH_ERR_CAPACITY => b"capacity\0",
        QMH_ERR_NUMERIC => b"numeric\0",
        QMH_ERR_NULL_ARGUMENT => b"null_argument\0",
        QMH_ERR_UTF8 => b"utf8\0",
        _ => b"unknown\0",
    };
    name.as_ptr() as *const c_char
}
