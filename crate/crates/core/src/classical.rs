//! Classical Metropolis-Hastings baseline: single-chain sampling and
//! exact distribution evolution over the same move enumeration and
//! acceptance table the quantum walk consumes.
//!
//! One step everywhere means: draw a move slot uniformly, draw one
//! acceptance variate, take the move if it is valid and the variate
//! clears the acceptance entry, otherwise stay. Invalid slots keep
//! their proposal mass, so rejection (not renormalization) handles
//! blocked moves and the chain matches the walk's proposal model slot
//! for slot.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::{acceptance, build_delta_table, DeltaTable, ProblemSpec};

/// States tracked exactly by `evolve`-based curves before the runner
/// falls back to sampling.
pub const EXACT_STATE_LIMIT: usize = 1 << 16;

/// Trajectories used by sampled success curves unless overridden.
pub const SAMPLED_RUNS_DEFAULT: u64 = 10_000;

const STATIONARY_TOL: f64 = 1e-12;
const STATIONARY_CAP: u64 = 1_000_000;
const MIXING_SCAN_CAP: u64 = 100_000;
const MIXING_STATE_LIMIT: usize = 8192;
const PLATEAU_WINDOW: u64 = 500;
const PLATEAU_RELATIVE_DROP: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    Constant,
    Linear,
    Geometric,
}

impl std::fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScheduleKind::Constant => "constant",
            ScheduleKind::Linear => "linear",
            ScheduleKind::Geometric => "geometric",
        })
    }
}

/// Inverse-temperature schedule over steps 1..=steps. Steps past the
/// horizon hold the final value, so one schedule can drive curves of
/// any length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub beta_start: f64,
    pub beta_end: f64,
    pub steps: u64,
}

impl Schedule {
    pub fn constant(beta: f64, steps: u64) -> Result<Self> {
        Self::new(ScheduleKind::Constant, beta, beta, steps)
    }

    pub fn linear(beta_start: f64, beta_end: f64, steps: u64) -> Result<Self> {
        Self::new(ScheduleKind::Linear, beta_start, beta_end, steps)
    }

    pub fn geometric(beta_start: f64, beta_end: f64, steps: u64) -> Result<Self> {
        Self::new(ScheduleKind::Geometric, beta_start, beta_end, steps)
    }

    pub fn new(kind: ScheduleKind, beta_start: f64, beta_end: f64, steps: u64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidParameter("schedule needs at least one step".into()));
        }
        for beta in [beta_start, beta_end] {
            if !beta.is_finite() || beta < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "beta must be finite and nonnegative, got {beta}"
                )));
            }
            if kind == ScheduleKind::Geometric && beta <= 0.0 {
                return Err(Error::InvalidParameter(
                    "geometric schedules need positive endpoints".into(),
                ));
            }
        }
        Ok(Schedule {
            kind,
            beta_start,
            beta_end,
            steps,
        })
    }

    /// Inverse temperature applied at step t (1-based). t = 0 is the
    /// initial distribution and has no beta; callers never ask for it.
    pub fn beta(&self, t: u64) -> f64 {
        debug_assert!(t >= 1);
        if self.kind == ScheduleKind::Constant || self.steps == 1 {
            return self.beta_start;
        }
        let t = t.min(self.steps);
        let frac = (t - 1) as f64 / (self.steps - 1) as f64;
        match self.kind {
            ScheduleKind::Constant => self.beta_start,
            ScheduleKind::Linear => self.beta_start + (self.beta_end - self.beta_start) * frac,
            ScheduleKind::Geometric => {
                self.beta_start * (self.beta_end / self.beta_start).powf(frac)
            }
        }
    }
}

/// Where a chain (or walk) starts: spread uniformly over every listed
/// state, or concentrated on one listed label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitMode {
    Uniform,
    Fixed(u64),
}

impl InitMode {
    /// Dense initial distribution over state indices.
    pub fn distribution(&self, spec: &ProblemSpec) -> Result<Vec<f64>> {
        let n = spec.n_states();
        match *self {
            InitMode::Uniform => Ok(vec![1.0 / n as f64; n]),
            InitMode::Fixed(label) => {
                let idx = spec.index_of(label).ok_or_else(|| {
                    Error::EncodingError(format!(
                        "initial label {} is not a listed state",
                        spec.format_label(label)
                    ))
                })?;
                let mut dist = vec![0.0; n];
                dist[idx] = 1.0;
                Ok(dist)
            }
        }
    }
}

/// One Metropolis-Hastings trajectory; returns the visited labels,
/// entry t being the state after step t (entry 0 is the start).
pub fn mh_run(
    spec: &ProblemSpec,
    schedule: &Schedule,
    init: &InitMode,
    seed: u64,
) -> Result<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = draw_initial(spec, init, &mut rng)?;
    let mut path = Vec::with_capacity(schedule.steps as usize + 1);
    path.push(spec.label(current));
    for t in 1..=schedule.steps {
        current = mh_step(spec, current, schedule.beta(t), &mut rng)?;
        path.push(spec.label(current));
    }
    Ok(path)
}

fn draw_initial<R: Rng>(spec: &ProblemSpec, init: &InitMode, rng: &mut R) -> Result<usize> {
    match *init {
        InitMode::Uniform => Ok(rng.random_range(0..spec.n_states())),
        InitMode::Fixed(label) => spec.index_of(label).ok_or_else(|| {
            Error::EncodingError(format!(
                "initial label {} is not a listed state",
                spec.format_label(label)
            ))
        }),
    }
}

/// Advance one step from a state index. Exactly two variates are drawn
/// regardless of validity or acceptance, keeping trajectories at
/// different betas aligned on the same random stream.
fn mh_step<R: Rng>(spec: &ProblemSpec, current: usize, beta: f64, rng: &mut R) -> Result<usize> {
    let model = spec.move_model();
    let move_id = rng.random_range(0..model.move_count());
    let u: f64 = rng.random_range(0.0..1.0);
    let coords = spec.decode(spec.label(current));
    let Some(next_coords) = model.apply(&coords, move_id) else {
        return Ok(current);
    };
    let succ = spec.encode(&next_coords)?;
    let Some(j) = spec.index_of(succ) else {
        return Ok(current);
    };
    let p = acceptance(spec.cost(current), spec.cost(j), beta)?;
    Ok(if u < p { j } else { current })
}

/// Row-stochastic transition matrix in sparse row form; each row lists
/// (column, probability) sorted by column and always carries its
/// diagonal entry.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    n: usize,
    rows: Vec<Vec<(u32, f64)>>,
}

impl TransitionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<(u32, f64)>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .iter()
            .find(|&&(c, _)| c as usize == j)
            .map_or(0.0, |&(_, p)| p)
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.rows[i].iter().map(|&(_, p)| p).sum()
    }
}

/// Transition matrix at a fixed beta.
pub fn transition_matrix(spec: &ProblemSpec, beta: f64) -> Result<TransitionMatrix> {
    transition_from_delta(spec, &build_delta_table(spec, beta)?)
}

/// Transition matrix assembled from an acceptance table, the shared
/// input of both engines: P[i][j] = (moves i -> j accepted) / M, with
/// all rejected proposal mass on the diagonal.
pub fn transition_from_delta(spec: &ProblemSpec, table: &DeltaTable) -> Result<TransitionMatrix> {
    let n = spec.n_states();
    let m = spec.move_model().move_count();
    if table.n_states() != n || table.n_moves() != m {
        return Err(Error::DimensionError(format!(
            "acceptance table is {}x{}, problem needs {}x{}",
            table.n_states(),
            table.n_moves(),
            n,
            m
        )));
    }
    let inv_m = 1.0 / m as f64;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let moves = spec.enumerate_moves(spec.label(i))?;
        let mut accepted_mass = 0.0;
        let mut entries: Vec<(u32, f64)> = Vec::with_capacity(m + 1);
        for mv in &moves {
            if !mv.valid {
                continue;
            }
            let p = table.entry(i, mv.move_id) * inv_m;
            accepted_mass += p;
            let j = spec
                .index_of(mv.successor.expect("valid move has successor"))
                .expect("valid move lands on a listed state") as u32;
            entries.push((j, p));
        }
        entries.push((i as u32, 1.0 - accepted_mass));
        entries.sort_by_key(|&(j, _)| j);
        // Merge duplicate columns (several moves can reach one state).
        let mut merged: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
        for (j, p) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == j => last.1 += p,
                _ => merged.push((j, p)),
            }
        }
        rows.push(merged);
    }
    Ok(TransitionMatrix { n, rows })
}

/// One application of the chain to a row distribution.
pub fn step_distribution(matrix: &TransitionMatrix, dist: &[f64]) -> Result<Vec<f64>> {
    if dist.len() != matrix.n {
        return Err(Error::DimensionError(format!(
            "distribution has {} entries, chain has {} states",
            dist.len(),
            matrix.n
        )));
    }
    let mut next = vec![0.0; matrix.n];
    for (i, &mass) in dist.iter().enumerate() {
        if mass == 0.0 {
            continue;
        }
        for &(j, p) in &matrix.rows[i] {
            next[j as usize] += mass * p;
        }
    }
    Ok(next)
}

/// t applications of the chain to a row distribution.
pub fn evolve(matrix: &TransitionMatrix, dist: &[f64], t: u64) -> Result<Vec<f64>> {
    let mut cur = dist.to_vec();
    if cur.len() != matrix.n {
        return Err(Error::DimensionError(format!(
            "distribution has {} entries, chain has {} states",
            cur.len(),
            matrix.n
        )));
    }
    for _ in 0..t {
        cur = step_distribution(matrix, &cur)?;
    }
    Ok(cur)
}

/// Total variation distance, half the L1 gap.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionError(format!(
            "distributions have {} and {} entries",
            p.len(),
            q.len()
        )));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Fixed point of the chain by power iteration from uniform.
pub fn stationary(matrix: &TransitionMatrix) -> Result<Vec<f64>> {
    let n = matrix.n;
    let mut cur = vec![1.0 / n as f64; n];
    for _ in 0..STATIONARY_CAP {
        let next = step_distribution(matrix, &cur)?;
        let gap = tv_distance(&cur, &next)?;
        cur = next;
        if gap < STATIONARY_TOL {
            return Ok(cur);
        }
    }
    Err(Error::NotErgodic(
        "power iteration found no fixed point".into(),
    ))
}

/// Boltzmann distribution over the listed states at inverse
/// temperature beta.
pub fn boltzmann(spec: &ProblemSpec, beta: f64) -> Result<Vec<f64>> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta must be finite and nonnegative, got {beta}"
        )));
    }
    // Shift by the minimum cost so weights never underflow to all-zero.
    let weights: Vec<f64> = spec
        .costs()
        .iter()
        .map(|&c| (-beta * (c - spec.min_cost())).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / z).collect())
}

/// Largest detailed-balance violation max |pi_i P_ij - pi_j P_ji| over
/// off-diagonal pairs, with pi the Boltzmann distribution.
pub fn detailed_balance_residual(spec: &ProblemSpec, beta: f64) -> Result<f64> {
    let matrix = transition_matrix(spec, beta)?;
    let pi = boltzmann(spec, beta)?;
    let mut worst = 0.0f64;
    for i in 0..matrix.n {
        for &(j, p) in &matrix.rows[i] {
            let j = j as usize;
            if j == i {
                continue;
            }
            let residual = (pi[i] * p - pi[j] * matrix.entry(j, i)).abs();
            worst = worst.max(residual);
        }
    }
    Ok(worst)
}

/// Steps until every starting state is within eps of the stationary
/// distribution in total variation. Worst-case TV is monotone in t, so
/// the first clearing step is the answer.
pub fn mixing_time(matrix: &TransitionMatrix, eps: f64) -> Result<u64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mixing threshold must be positive, got {eps}"
        )));
    }
    if eps >= 1.0 {
        return Ok(0);
    }
    let n = matrix.n;
    if n > MIXING_STATE_LIMIT {
        return Err(Error::CapacityExceeded(format!(
            "mixing-time scan tracks all {n} starting states, limit is {MIXING_STATE_LIMIT}"
        )));
    }
    let pi = stationary(matrix)?;

    // Row i of `dists` is the time-t distribution started from state i.
    let mut dists: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row
        })
        .collect();
    let worst_tv = |d: &[Vec<f64>]| -> Result<f64> {
        let mut worst = 0.0f64;
        for row in d {
            worst = worst.max(tv_distance(row, &pi)?);
        }
        Ok(worst)
    };

    let mut plateau_anchor = worst_tv(&dists)?;
    let mut plateau_age = 0u64;
    for t in 0..=MIXING_SCAN_CAP {
        let worst = worst_tv(&dists)?;
        if worst < eps {
            return Ok(t);
        }
        // Stalled far from the target: periodic or reducible chain.
        if plateau_anchor - worst <= PLATEAU_RELATIVE_DROP * plateau_anchor {
            plateau_age += 1;
            if plateau_age >= PLATEAU_WINDOW {
                return Err(Error::NotErgodic(format!(
                    "worst-case total variation stalled at {worst:.6} (threshold {eps})"
                )));
            }
        } else {
            plateau_anchor = worst;
            plateau_age = 0;
        }
        for row in dists.iter_mut() {
            *row = step_distribution(matrix, row)?;
        }
    }
    Err(Error::NotErgodic(format!(
        "no mixing within {MIXING_SCAN_CAP} steps"
    )))
}

/// Success accounting for curves: probability of sitting on a ground
/// state at step t, or of having touched one at any step up to t.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HitMode {
    AtStep,
    EverHit,
}

fn ground_mass(spec: &ProblemSpec, dist: &[f64]) -> f64 {
    spec.ground_set().iter().map(|&g| dist[g]).sum()
}

/// Exact success curve p(0..=t_max) by distribution evolution. EverHit
/// makes ground states absorbing, turning occupation mass into
/// first-passage mass.
pub fn success_prob_exact_curve(
    spec: &ProblemSpec,
    schedule: &Schedule,
    init: &InitMode,
    t_max: u64,
    hit: HitMode,
) -> Result<Vec<f64>> {
    let n = spec.n_states();
    if n > EXACT_STATE_LIMIT {
        return Err(Error::CapacityExceeded(format!(
            "exact evolution over {n} states, limit is {EXACT_STATE_LIMIT}"
        )));
    }
    let mut dist = init.distribution(spec)?;
    let mut curve = Vec::with_capacity(t_max as usize + 1);
    curve.push(ground_mass(spec, &dist));

    let absorbing = hit == HitMode::EverHit;
    let mut cached: Option<(u64, TransitionMatrix)> = None;
    for t in 1..=t_max {
        let beta = schedule.beta(t);
        let bits = beta.to_bits();
        let rebuild = cached.as_ref().map(|&(b, _)| b != bits).unwrap_or(true);
        if rebuild {
            let mut matrix = transition_matrix(spec, beta)?;
            if absorbing {
                for &g in spec.ground_set() {
                    matrix.rows[g] = vec![(g as u32, 1.0)];
                }
            }
            cached = Some((bits, matrix));
        }
        let (_, matrix) = cached.as_ref().expect("cache is filled above");
        dist = step_distribution(matrix, &dist)?;
        curve.push(ground_mass(spec, &dist));
    }
    Ok(curve)
}

/// Sampled success curve p(0..=t_max) from independent trajectories,
/// one seed offset per run.
pub fn success_prob_sampled_curve(
    spec: &ProblemSpec,
    schedule: &Schedule,
    init: &InitMode,
    t_max: u64,
    hit: HitMode,
    runs: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    if runs == 0 {
        return Err(Error::InvalidParameter("sampled curve needs runs >= 1".into()));
    }
    let is_ground = |idx: usize| spec.cost(idx) == spec.min_cost();
    let mut hits = vec![0u64; t_max as usize + 1];
    for run in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(run));
        let mut current = draw_initial(spec, init, &mut rng)?;
        let mut ever = is_ground(current);
        if ever {
            hits[0] += 1;
        }
        for t in 1..=t_max {
            current = mh_step(spec, current, schedule.beta(t), &mut rng)?;
            let counted = match hit {
                HitMode::AtStep => is_ground(current),
                HitMode::EverHit => {
                    ever = ever || is_ground(current);
                    ever
                }
            };
            if counted {
                hits[t as usize] += 1;
            }
        }
    }
    Ok(hits.into_iter().map(|h| h as f64 / runs as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::MoveModel;

    fn two_state(costs: [f64; 2], circular: bool) -> ProblemSpec {
        let model = if circular {
            MoveModel::sequential_circular(1, 2)
        } else {
            MoveModel::sequential_noncircular(1, 2)
        };
        ProblemSpec::new(vec![(0, costs[0]), (1, costs[1])], vec![1], model).unwrap()
    }

    #[test]
    fn schedule_shapes() {
        let c = Schedule::constant(2.0, 10).unwrap();
        assert_eq!(c.beta(1), 2.0);
        assert_eq!(c.beta(10), 2.0);

        let l = Schedule::linear(0.0, 3.0, 4).unwrap();
        assert_eq!(l.beta(1), 0.0);
        assert_eq!(l.beta(2), 1.0);
        assert_eq!(l.beta(4), 3.0);
        assert_eq!(l.beta(9), 3.0); // past the horizon: hold

        let g = Schedule::geometric(1.0, 8.0, 4).unwrap();
        assert!((g.beta(2) - 2.0).abs() < 1e-12);
        assert!((g.beta(4) - 8.0).abs() < 1e-12);

        assert!(Schedule::geometric(0.0, 1.0, 4).is_err());
        assert!(Schedule::constant(f64::NAN, 4).is_err());
        assert!(Schedule::constant(1.0, 0).is_err());

        let one = Schedule::linear(0.5, 9.0, 1).unwrap();
        assert_eq!(one.beta(1), 0.5);
    }

    #[test]
    fn circular_two_state_matrix() {
        // E = (0, 1), beta = 1: both slots from 0 climb with the same
        // acceptance, both from 1 always descend.
        let spec = two_state([0.0, 1.0], true);
        let p = transition_matrix(&spec, 1.0).unwrap();
        let e = (-1.0f64).exp();
        assert_eq!(p.entry(0, 1), e);
        assert_eq!(p.entry(0, 0), 1.0 - e);
        assert_eq!(p.entry(1, 0), 1.0);
        assert_eq!(p.entry(1, 1), 0.0);

        // One step from certainty-on-1 lands on certainty-on-0.
        let out = evolve(&p, &[0.0, 1.0], 1).unwrap();
        assert_eq!(out, vec![1.0, 0.0]);
    }

    #[test]
    fn noncircular_two_state_matrix_and_mixing() {
        // At beta = 0 each state has one valid always-accepted slot out
        // of two, so every row is (1/2, 1/2) and mixing takes one step.
        let spec = two_state([0.0, 1.0], false);
        let p = transition_matrix(&spec, 0.0).unwrap();
        for i in 0..2 {
            assert_eq!(p.entry(i, 0), 0.5);
            assert_eq!(p.entry(i, 1), 0.5);
        }
        assert_eq!(mixing_time(&p, 0.1).unwrap(), 1);
        assert_eq!(mixing_time(&p, 1.0).unwrap(), 0);
        assert!(mixing_time(&p, 0.0).is_err());
        assert!(mixing_time(&p, -1.0).is_err());
    }

    #[test]
    fn periodic_chain_is_not_ergodic() {
        // Circular two-state at beta = 0 always moves: period two.
        let spec = two_state([0.0, 0.0], true);
        let p = transition_matrix(&spec, 0.0).unwrap();
        assert_eq!(p.entry(0, 1), 1.0);
        assert_eq!(p.entry(1, 0), 1.0);
        assert!(matches!(mixing_time(&p, 0.1), Err(Error::NotErgodic(_))));
    }

    #[test]
    fn disconnected_chain_is_not_ergodic() {
        // Labels 00 and 10 over a circular 4-range coordinate: every
        // move lands on an unlisted label, so nothing ever moves.
        let spec = ProblemSpec::new(
            vec![(0b00, 0.0), (0b10, 0.0)],
            vec![2],
            MoveModel::sequential_circular(1, 4),
        )
        .unwrap();
        let p = transition_matrix(&spec, 0.0).unwrap();
        assert_eq!(p.entry(0, 0), 1.0);
        assert_eq!(p.entry(1, 1), 1.0);
        assert!(matches!(mixing_time(&p, 0.1), Err(Error::NotErgodic(_))));
    }

    #[test]
    fn rows_are_stochastic_and_balanced() {
        let spec = crate::nqueens::generate_instance(4, None).unwrap();
        for beta in [0.0, 0.7, 3.0] {
            let p = transition_matrix(&spec, beta).unwrap();
            for i in 0..p.n() {
                assert!((p.row_sum(i) - 1.0).abs() < 1e-12);
            }
            assert!(detailed_balance_residual(&spec, beta).unwrap() < 1e-9);
        }
    }

    #[test]
    fn stationary_matches_boltzmann() {
        let spec = ProblemSpec::new(
            vec![(0, 0.0), (1, 0.8), (2, 0.3), (3, 1.4)],
            vec![2],
            MoveModel::sequential_circular(1, 4),
        )
        .unwrap();
        let beta = 1.3;
        let p = transition_matrix(&spec, beta).unwrap();
        let pi = stationary(&p).unwrap();
        let bz = boltzmann(&spec, beta).unwrap();
        assert!(tv_distance(&pi, &bz).unwrap() < 1e-9);
        // Stationarity: one more step moves nothing.
        let next = step_distribution(&p, &pi).unwrap();
        assert!(tv_distance(&pi, &next).unwrap() < 1e-11);
    }

    #[test]
    fn trajectories_are_deterministic_per_seed() {
        let spec = crate::nqueens::generate_instance(4, None).unwrap();
        let sched = Schedule::constant(1.0, 64).unwrap();
        let a = mh_run(&spec, &sched, &InitMode::Uniform, 7).unwrap();
        let b = mh_run(&spec, &sched, &InitMode::Uniform, 7).unwrap();
        let c = mh_run(&spec, &sched, &InitMode::Uniform, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 65);
        for &label in &a {
            assert!(spec.index_of(label).is_some());
        }
    }

    #[test]
    fn single_state_chain_never_moves() {
        let spec = ProblemSpec::new(
            vec![(0, 5.0)],
            vec![1],
            MoveModel::sequential_circular(1, 1),
        )
        .unwrap();
        let sched = Schedule::constant(1.0, 16).unwrap();
        let path = mh_run(&spec, &sched, &InitMode::Uniform, 3).unwrap();
        assert!(path.iter().all(|&l| l == 0));
        let p = transition_matrix(&spec, 1.0).unwrap();
        assert_eq!(p.entry(0, 0), 1.0);
        assert_eq!(mixing_time(&p, 0.5).unwrap(), 0);
    }

    #[test]
    fn greedy_descent_at_large_beta() {
        // E = (0, 1) noncircular from state 1: the downhill slot is
        // drawn with probability 1/2 per step and always accepted at
        // beta = 1000; the uphill return is never accepted. Ground
        // occupation after t steps is 1 - 2^-t exactly.
        let spec = two_state([0.0, 1.0], false);
        let sched = Schedule::constant(1000.0, 4).unwrap();
        let curve = success_prob_sampled_curve(
            &spec,
            &sched,
            &InitMode::Fixed(1),
            4,
            HitMode::AtStep,
            10_000,
            11,
        )
        .unwrap();
        assert_eq!(curve[0], 0.0);
        for (t, expected) in [(1u64, 0.5f64), (2, 0.75), (3, 0.875), (4, 0.9375)] {
            let sigma = (expected * (1.0 - expected) / 10_000.0).sqrt();
            assert!(
                (curve[t as usize] - expected).abs() < 3.0 * sigma + 1e-9,
                "t = {t}: got {}, expected {expected}",
                curve[t as usize]
            );
        }
    }

    #[test]
    fn sampled_curve_tracks_exact_curve() {
        let spec = crate::nqueens::generate_instance(4, None).unwrap();
        let sched = Schedule::linear(0.2, 2.0, 30).unwrap();
        for hit in [HitMode::AtStep, HitMode::EverHit] {
            let exact =
                success_prob_exact_curve(&spec, &sched, &InitMode::Uniform, 30, hit).unwrap();
            let sampled = success_prob_sampled_curve(
                &spec,
                &sched,
                &InitMode::Uniform,
                30,
                hit,
                10_000,
                5,
            )
            .unwrap();
            assert_eq!(exact.len(), 31);
            assert_eq!(sampled.len(), 31);
            for t in 0..=30 {
                let p = exact[t];
                let sigma = (p * (1.0 - p) / 10_000.0).sqrt();
                assert!(
                    (sampled[t] - p).abs() < 4.0 * sigma + 1e-3,
                    "t = {t}: sampled {} vs exact {p}",
                    sampled[t]
                );
            }
            // EverHit curves are monotone.
            if hit == HitMode::EverHit {
                for t in 1..=30 {
                    assert!(exact[t] >= exact[t - 1] - 1e-12);
                }
            }
        }
    }

    #[test]
    fn uniform_chain_visits_everything() {
        // At beta = 0 on the circular 8-cycle the stationary law is
        // uniform; occupation counts over a long run stay within a few
        // sigma of n/8 each.
        let spec = ProblemSpec::new(
            (0..8).map(|l| (l, (l % 3) as f64)).collect(),
            vec![3],
            MoveModel::sequential_circular(1, 8),
        )
        .unwrap();
        let steps = 40_000u64;
        let sched = Schedule::constant(0.0, steps).unwrap();
        let path = mh_run(&spec, &sched, &InitMode::Fixed(0), 17).unwrap();
        let mut counts = [0u64; 8];
        for &l in &path {
            counts[l as usize] += 1;
        }
        let expect = (steps + 1) as f64 / 8.0;
        for (label, &c) in counts.iter().enumerate() {
            // Correlated samples: allow a generous band, but the walk
            // must land in every cell thousands of times.
            assert!(
                (c as f64 - expect).abs() < 0.25 * expect,
                "label {label}: {c} visits vs {expect}"
            );
        }
    }
}
