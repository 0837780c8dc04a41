//! Quantum Metropolis-Hastings walk by exact statevector simulation.
//!
//! One walk step is a product of self-inverse primitives over five
//! registers, packed into one basis index with the state label in the
//! low bits:
//!
//! ```text
//! bit 0 ..            state label        (state_bits)
//! bit state_bits ..   move id            (move_id_bits)
//! next bit            move value         (1)
//! next bit            coin               (1)
//! top 3 bits          ancilla            (3)
//! ```
//!
//! The move id and move value bits form one combined move field. A
//! sequential move with id 2k + d occupies slot k | (d << move_id_bits)
//! of that field, so the move value bit carries the direction; swap
//! moves occupy slots 0..M in id order. Slots beyond the move count are
//! permanently empty.
//!
//! The primitives, in the order a step multiplies them together:
//!
//! - move preparation `V`: Householder reflection taking the empty move
//!   field to the uniform superposition over all M slots, applied per
//!   state; self-adjoint.
//! - coin preparation `B`: per (state, move slot), rotate the coin by
//!   the 3-bit-quantized acceptance of that move. Net identity on the
//!   ancilla register (its scratch use is internal), so amplitudes with
//!   nonzero ancilla rotate the same way.
//! - conditional move `F`: where the coin is one, jump the state to the
//!   move's successor and the move field to the inverse move's slot.
//!   An involutive permutation; structurally blocked slots are fixed
//!   points.
//! - reflection `R`: negate every amplitude whose move field or coin is
//!   nonzero.
//!
//! Three step orderings are supported; spectra differ but each is an
//! exact unitary built from the same four primitives.

use num_complex::Complex64;

use crate::classical::{InitMode, Schedule};
use crate::error::{Error, Result};
use crate::problem::{build_delta_table, DeltaTable, MoveKind, ProblemSpec};

/// Default qubit budget: 2^26 amplitudes is a 1 GiB statevector.
pub const DEFAULT_MAX_BITS: u32 = 26;

/// Ceiling for materializing a step as a dense matrix.
pub const DENSE_MAX_BITS: u32 = 12;

const ANCILLA_BITS: u32 = 3;
const UNITARITY_TOL: f64 = 1e-9;
const NORM_DRIFT_TOL: f64 = 1e-10;

/// Order in which one walk step multiplies the primitives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkOrdering {
    /// R V B F B V: coin and move preparation wrap the conditional move.
    Lemieux,
    /// F V B R B V: the reflection sits innermost, the move last.
    Qubitization,
    /// V B R B V F: the conditional move happens first.
    Alternative,
}

impl WalkOrdering {
    pub const ALL: [WalkOrdering; 3] = [
        WalkOrdering::Lemieux,
        WalkOrdering::Qubitization,
        WalkOrdering::Alternative,
    ];
}

impl std::fmt::Display for WalkOrdering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WalkOrdering::Lemieux => "lemieux",
            WalkOrdering::Qubitization => "qubitization",
            WalkOrdering::Alternative => "alternative",
        })
    }
}

impl std::str::FromStr for WalkOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemieux" => Ok(WalkOrdering::Lemieux),
            "qubitization" => Ok(WalkOrdering::Qubitization),
            "alternative" => Ok(WalkOrdering::Alternative),
            other => Err(Error::InvalidParameter(format!(
                "unknown ordering \"{other}\" (expected lemieux, qubitization, or alternative)"
            ))),
        }
    }
}

/// Qubit count per register for a problem, independent of any memory
/// cap, so resource estimation works even where simulation cannot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    pub state_bits: u32,
    pub move_id_bits: u32,
    pub move_value_bits: u32,
    pub coin_bits: u32,
    pub ancilla_bits: u32,
}

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

impl RegisterLayout {
    pub fn for_spec(spec: &ProblemSpec) -> Self {
        RegisterLayout {
            state_bits: spec.label_bits(),
            move_id_bits: ceil_log2(spec.move_model().coordinate_count as u64),
            move_value_bits: 1,
            coin_bits: 1,
            ancilla_bits: ANCILLA_BITS,
        }
    }

    pub fn total_bits(&self) -> u32 {
        self.state_bits + self.move_id_bits + self.move_value_bits + self.coin_bits
            + self.ancilla_bits
    }

    /// Bytes of amplitude storage for exact simulation.
    pub fn memory_bytes(&self) -> u128 {
        16u128 << self.total_bits()
    }
}

/// Dense complex amplitude vector over all registers.
#[derive(Clone, Debug)]
pub struct StateVector {
    total_bits: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(total_bits: u32) -> Result<Self> {
        if total_bits > 33 {
            return Err(Error::CapacityExceeded(format!(
                "statevector over {total_bits} qubits cannot be allocated"
            )));
        }
        Ok(StateVector {
            total_bits,
            amps: vec![Complex64::new(0.0, 0.0); 1usize << total_bits],
        })
    }

    pub fn basis(total_bits: u32, index: usize) -> Result<Self> {
        let mut sv = Self::zero(total_bits)?;
        if index >= sv.amps.len() {
            return Err(Error::DimensionError(format!(
                "basis index {index} outside a {total_bits}-qubit space"
            )));
        }
        sv.amps[index] = Complex64::new(1.0, 0.0);
        Ok(sv)
    }

    pub fn total_bits(&self) -> u32 {
        self.total_bits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Hermitian inner product, this vector conjugated.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.total_bits != other.total_bits {
            return Err(Error::DimensionError(format!(
                "{} vs {} qubit vectors",
                self.total_bits, other.total_bits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Snap an acceptance probability to the 3-bit grid k/8, ties away
/// from zero. This is the only lossy step between the acceptance table
/// and the coin rotation.
pub fn quantize_acceptance(q: f64) -> f64 {
    (q * 8.0).round() / 8.0
}

/// Exact simulator for one problem's walk. Holds the register layout,
/// the conditional-move permutation, and the coin rotations for the
/// currently loaded acceptance table.
pub struct WalkEngine {
    spec: ProblemSpec,
    layout: RegisterLayout,
    n_moves: usize,
    sb: u32,
    mb: u32,
    coin_shift: u32,
    anc_shift: u32,
    slots: Vec<u64>,
    slot_to_move: Vec<i32>,
    state_index: Vec<i32>,
    ground: Vec<bool>,
    f_map: Vec<u32>,
    sin_cos: Vec<(f64, f64)>,
    beta_bits: Option<u64>,
    beta: f64,
    delta_checksum: Option<String>,
}

impl WalkEngine {
    pub fn new(spec: &ProblemSpec, max_bits: u32) -> Result<Self> {
        let layout = RegisterLayout::for_spec(spec);
        let total = layout.total_bits();
        if total > max_bits {
            return Err(Error::CapacityExceeded(format!(
                "walk needs {total} qubits, a {} byte statevector; cap is {max_bits} qubits",
                layout.memory_bytes()
            )));
        }
        let model = spec.move_model().clone();
        let n_moves = model.move_count();
        let sb = layout.state_bits;
        let mb = layout.move_id_bits + layout.move_value_bits;
        if n_moves > (1usize << mb) {
            return Err(Error::CapacityExceeded(format!(
                "{n_moves} move slots do not fit the {mb}-bit move field"
            )));
        }

        let slots: Vec<u64> = (0..n_moves)
            .map(|id| match model.kind {
                MoveKind::SequentialCircular | MoveKind::SequentialNoncircular => {
                    let (k, d) = model.sequential_parts(id);
                    k as u64 | ((d as u64) << layout.move_id_bits)
                }
                MoveKind::Swap => id as u64,
            })
            .collect();
        let mut slot_to_move = vec![-1i32; 1usize << mb];
        for (id, &slot) in slots.iter().enumerate() {
            debug_assert_eq!(slot_to_move[slot as usize], -1);
            slot_to_move[slot as usize] = id as i32;
        }

        let mut state_index = vec![-1i32; 1usize << sb];
        for (i, &label) in spec.states().iter().enumerate() {
            state_index[label as usize] = i as i32;
        }
        let mut ground = vec![false; 1usize << sb];
        for &g in spec.ground_set() {
            ground[spec.label(g) as usize] = true;
        }

        // Conditional-move permutation over the packed (move, state)
        // field. Defined on every pattern, listed or not, so the
        // operator is a total involution; the dynamics only ever
        // populate valid slots because the coin stays zero elsewhere.
        let packed_len = 1usize << (sb + mb);
        let mut f_map: Vec<u32> = (0..packed_len as u32).collect();
        for s_pat in 0..(1u64 << sb) {
            let coords = spec.decode(s_pat);
            for (id, &slot) in slots.iter().enumerate() {
                if let Some(next) = model.apply(&coords, id) {
                    let s2 = spec.encode(&next).expect("moves stay within field widths");
                    let slot2 = slots[model.inverse(id)];
                    f_map[((slot << sb) | s_pat) as usize] = ((slot2 << sb) | s2) as u32;
                }
            }
        }
        for (x, &t) in f_map.iter().enumerate() {
            debug_assert_eq!(f_map[t as usize] as usize, x, "conditional move must be involutive");
        }

        Ok(WalkEngine {
            spec: spec.clone(),
            layout,
            n_moves,
            sb,
            mb,
            coin_shift: sb + mb,
            anc_shift: sb + mb + 1,
            slots,
            slot_to_move,
            state_index,
            ground,
            f_map,
            sin_cos: vec![(0.0, 1.0); packed_len],
            beta_bits: None,
            beta: f64::NAN,
            delta_checksum: None,
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn total_bits(&self) -> u32 {
        self.layout.total_bits()
    }

    pub fn n_moves(&self) -> usize {
        self.n_moves
    }

    /// Combined-field slot pattern of a move id.
    pub fn move_slot(&self, move_id: usize) -> u64 {
        self.slots[move_id]
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta_bits.map(|_| self.beta)
    }

    /// Digest of the acceptance table currently compiled into the coin.
    pub fn delta_checksum(&self) -> Option<&str> {
        self.delta_checksum.as_deref()
    }

    /// Compile an acceptance table into coin rotations. The rotation
    /// pair for acceptance q is (sin, cos) = (sqrt(q~), sqrt(1 - q~))
    /// with q~ the quantized value, so q = 0 and q = 1 stay exact.
    pub fn load_delta(&mut self, table: &DeltaTable) -> Result<()> {
        if table.n_states() != self.spec.n_states() || table.n_moves() != self.n_moves {
            return Err(Error::DimensionError(format!(
                "acceptance table is {}x{}, walk needs {}x{}",
                table.n_states(),
                table.n_moves(),
                self.spec.n_states(),
                self.n_moves
            )));
        }
        for (i, &label) in self.spec.states().iter().enumerate() {
            for (id, &slot) in self.slots.iter().enumerate() {
                let q = quantize_acceptance(table.entry(i, id));
                self.sin_cos[((slot << self.sb) | label) as usize] = (q.sqrt(), (1.0 - q).sqrt());
            }
        }
        self.beta = table.beta();
        self.beta_bits = Some(table.beta().to_bits());
        self.delta_checksum = Some(table.checksum());
        Ok(())
    }

    /// Build and load the acceptance table for a beta; a repeat of the
    /// current beta is free, so constant schedules compile once.
    pub fn set_beta(&mut self, beta: f64) -> Result<()> {
        if self.beta_bits == Some(beta.to_bits()) {
            return Ok(());
        }
        let table = build_delta_table(&self.spec, beta)?;
        self.load_delta(&table)
    }

    /// Starting vector: move, coin, and ancilla registers empty, state
    /// register uniform over listed labels or fixed on one.
    pub fn initialize(&self, init: &InitMode) -> Result<StateVector> {
        let mut sv = StateVector::zero(self.total_bits())?;
        match *init {
            InitMode::Uniform => {
                let amp = Complex64::new(1.0 / (self.spec.n_states() as f64).sqrt(), 0.0);
                for &label in self.spec.states() {
                    sv.amps[label as usize] = amp;
                }
            }
            InitMode::Fixed(label) => {
                if self.spec.index_of(label).is_none() {
                    return Err(Error::EncodingError(format!(
                        "initial label {} is not a listed state",
                        self.spec.format_label(label)
                    )));
                }
                sv.amps[label as usize] = Complex64::new(1.0, 0.0);
            }
        }
        Ok(sv)
    }

    fn check_vector(&self, sv: &StateVector) -> Result<()> {
        if sv.total_bits != self.total_bits() {
            return Err(Error::DimensionError(format!(
                "vector spans {} qubits, walk needs {}",
                sv.total_bits,
                self.total_bits()
            )));
        }
        Ok(())
    }

    /// Slices of the index space above the packed (move, state) field:
    /// coin and ancilla combined.
    fn upper_slices(&self) -> impl Iterator<Item = usize> {
        let shift = self.coin_shift;
        let count = 1usize << (self.total_bits() - shift);
        (0..count).map(move |u| u << shift)
    }

    /// Move preparation V: Householder reflection I - 2ww*/|w|^2 with
    /// w = e_slot0 - u and u uniform over the M occupied slots, applied
    /// to the move field of every (state, coin, ancilla) block. Maps
    /// the empty field to u; self-adjoint and involutive.
    pub fn apply_move_preparation(&self, sv: &mut StateVector) -> Result<()> {
        self.check_vector(sv)?;
        if self.n_moves == 1 {
            return Ok(()); // u = e_slot0 already: V is the identity
        }
        let sb_len = 1usize << self.sb;
        let r = 1.0 / (self.n_moves as f64).sqrt();
        let coef = 1.0 / (1.0 - r);
        let c0 = coef * (1.0 - r);
        let ck = coef * r;
        let mut d = vec![Complex64::new(0.0, 0.0); sb_len];
        let amps = &mut sv.amps;
        for base in self.upper_slices() {
            let slot_base = |k: usize| base | ((self.slots[k] as usize) << self.sb);
            // d = w . psi per state column: (1 - r) from slot 0, -r from
            // the rest. All block accesses are contiguous runs.
            let b0 = slot_base(0);
            for s in 0..sb_len {
                d[s] = amps[b0 + s] * (1.0 - r);
            }
            for k in 1..self.n_moves {
                let bk = slot_base(k);
                for s in 0..sb_len {
                    d[s] -= amps[bk + s] * r;
                }
            }
            for s in 0..sb_len {
                amps[b0 + s] -= d[s] * c0;
            }
            for k in 1..self.n_moves {
                let bk = slot_base(k);
                for s in 0..sb_len {
                    amps[bk + s] += d[s] * ck;
                }
            }
        }
        Ok(())
    }

    /// V is self-adjoint; the adjoint is the same pass.
    pub fn apply_move_preparation_adjoint(&self, sv: &mut StateVector) -> Result<()> {
        self.apply_move_preparation(sv)
    }

    fn coin_rotation(&self, sv: &mut StateVector, adjoint: bool) -> Result<()> {
        self.check_vector(sv)?;
        let sb_len = 1usize << self.sb;
        let coin_mask = 1usize << self.coin_shift;
        let anc_slices = 1usize << self.layout.ancilla_bits;
        let amps = &mut sv.amps;
        for a in 0..anc_slices {
            let base_a = a << self.anc_shift;
            for m_pat in 0..(1usize << self.mb) {
                if self.slot_to_move[m_pat] < 0 {
                    continue; // empty slot: identity stripe
                }
                let row = m_pat << self.sb;
                for s in 0..sb_len {
                    let (sn, cs) = self.sin_cos[row | s];
                    if sn == 0.0 {
                        continue;
                    }
                    let i0 = base_a | row | s;
                    let i1 = i0 | coin_mask;
                    let x = amps[i0];
                    let y = amps[i1];
                    if adjoint {
                        amps[i0] = x * cs + y * sn;
                        amps[i1] = y * cs - x * sn;
                    } else {
                        amps[i0] = x * cs - y * sn;
                        amps[i1] = x * sn + y * cs;
                    }
                }
            }
        }
        Ok(())
    }

    /// Coin preparation B: real rotation of the coin by the quantized
    /// acceptance of each (state, move slot); net identity on the
    /// ancilla register.
    pub fn apply_coin_preparation(&self, sv: &mut StateVector) -> Result<()> {
        self.coin_rotation(sv, false)
    }

    pub fn apply_coin_preparation_adjoint(&self, sv: &mut StateVector) -> Result<()> {
        self.coin_rotation(sv, true)
    }

    /// Conditional move F: on the coin = 1 half, permute the packed
    /// (move, state) field by the precomputed involution.
    pub fn apply_conditional_move(&self, sv: &mut StateVector) -> Result<()> {
        self.check_vector(sv)?;
        let coin_mask = 1usize << self.coin_shift;
        let anc_slices = 1usize << self.layout.ancilla_bits;
        let amps = &mut sv.amps;
        for a in 0..anc_slices {
            let base = (a << self.anc_shift) | coin_mask;
            for (packed, &target) in self.f_map.iter().enumerate() {
                let target = target as usize;
                if target > packed {
                    amps.swap(base | packed, base | target);
                }
            }
        }
        Ok(())
    }

    /// Reflection R: negate every amplitude whose move field or coin
    /// bit is nonzero; the ancilla does not participate.
    pub fn apply_reflection(&self, sv: &mut StateVector) -> Result<()> {
        self.check_vector(sv)?;
        let mask = ((1usize << (self.mb + 1)) - 1) << self.sb;
        for (idx, amp) in sv.amps.iter_mut().enumerate() {
            if idx & mask != 0 {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// One full walk step in the given ordering, using the currently
    /// loaded acceptance table.
    pub fn walk_step(&self, sv: &mut StateVector, ordering: WalkOrdering) -> Result<()> {
        if self.beta_bits.is_none() {
            return Err(Error::InvalidParameter(
                "no acceptance table loaded; call set_beta or load_delta first".into(),
            ));
        }
        match ordering {
            WalkOrdering::Lemieux => {
                self.apply_move_preparation(sv)?;
                self.apply_coin_preparation(sv)?;
                self.apply_conditional_move(sv)?;
                self.apply_coin_preparation_adjoint(sv)?;
                self.apply_move_preparation_adjoint(sv)?;
                self.apply_reflection(sv)?;
            }
            WalkOrdering::Qubitization => {
                self.apply_move_preparation_adjoint(sv)?;
                self.apply_coin_preparation_adjoint(sv)?;
                self.apply_reflection(sv)?;
                self.apply_coin_preparation(sv)?;
                self.apply_move_preparation(sv)?;
                self.apply_conditional_move(sv)?;
            }
            WalkOrdering::Alternative => {
                self.apply_conditional_move(sv)?;
                self.apply_move_preparation_adjoint(sv)?;
                self.apply_coin_preparation_adjoint(sv)?;
                self.apply_reflection(sv)?;
                self.apply_coin_preparation(sv)?;
                self.apply_move_preparation(sv)?;
            }
        }
        Ok(())
    }

    /// Probability of reading a minimum-cost label off the state
    /// register, marginalized over all other registers.
    pub fn ground_probability(&self, sv: &StateVector) -> f64 {
        let mask = (1usize << self.sb) - 1;
        sv.amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| self.ground[idx & mask])
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Per-listed-state occupation probabilities, aligned with the
    /// problem's state order.
    pub fn state_marginals(&self, sv: &StateVector) -> Vec<f64> {
        let mask = (1usize << self.sb) - 1;
        let mut out = vec![0.0; self.spec.n_states()];
        for (idx, amp) in sv.amps.iter().enumerate() {
            let i = self.state_index[idx & mask];
            if i >= 0 {
                out[i as usize] += amp.norm_sqr();
            }
        }
        out
    }

    /// Mass currently on the coin = 1 half.
    pub fn coin_one_probability(&self, sv: &StateVector) -> f64 {
        let coin_mask = 1usize << self.coin_shift;
        sv.amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & coin_mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Run `steps` walk steps under a schedule and return the final
    /// vector.
    pub fn run_walk(
        &mut self,
        schedule: &Schedule,
        ordering: WalkOrdering,
        init: &InitMode,
        steps: u64,
    ) -> Result<StateVector> {
        let mut sv = self.initialize(init)?;
        for t in 1..=steps {
            self.set_beta(schedule.beta(t))?;
            self.walk_step(&mut sv, ordering)?;
            let drift = (sv.norm_sq() - 1.0).abs();
            if drift > NORM_DRIFT_TOL {
                return Err(Error::NumericInstability(format!(
                    "norm drifted by {drift:.3e} after step {t}"
                )));
            }
        }
        Ok(sv)
    }

    /// Ground probability after every step count 0..=t_max under a
    /// schedule. The walk is streamed: because the step-t unitary
    /// depends only on t, the prefix of a long run equals a shorter
    /// run, so one pass yields the whole curve.
    pub fn walk_curve(
        &mut self,
        schedule: &Schedule,
        ordering: WalkOrdering,
        init: &InitMode,
        t_max: u64,
    ) -> Result<Vec<f64>> {
        let mut sv = self.initialize(init)?;
        let mut curve = Vec::with_capacity(t_max as usize + 1);
        curve.push(self.ground_probability(&sv));
        for t in 1..=t_max {
            self.set_beta(schedule.beta(t))?;
            self.walk_step(&mut sv, ordering)?;
            let drift = (sv.norm_sq() - 1.0).abs();
            if drift > NORM_DRIFT_TOL {
                return Err(Error::NumericInstability(format!(
                    "norm drifted by {drift:.3e} after step {t}"
                )));
            }
            curve.push(self.ground_probability(&sv));
        }
        Ok(curve)
    }

    /// Materialize one walk step as a dense column-major matrix and
    /// verify it is unitary to within 1e-9 (largest singular value of
    /// U*U - I, estimated by power iteration).
    pub fn dense_unitary(&self, ordering: WalkOrdering) -> Result<Vec<Complex64>> {
        let total = self.total_bits();
        if total > DENSE_MAX_BITS {
            return Err(Error::CapacityExceeded(format!(
                "dense matrix over {total} qubits exceeds the {DENSE_MAX_BITS}-qubit ceiling"
            )));
        }
        if self.beta_bits.is_none() {
            return Err(Error::InvalidParameter(
                "no acceptance table loaded; call set_beta or load_delta first".into(),
            ));
        }
        let dim = 1usize << total;
        let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let mut sv = StateVector::basis(total, col)?;
            self.walk_step(&mut sv, ordering)?;
            mat[col * dim..(col + 1) * dim].copy_from_slice(&sv.amps);
        }
        let defect = unitarity_defect(&mat, dim);
        if defect > UNITARITY_TOL {
            return Err(Error::NumericInstability(format!(
                "unitarity defect {defect:.3e} exceeds {UNITARITY_TOL:.0e}"
            )));
        }
        Ok(mat)
    }
}

/// Largest singular value of U*U - I by power iteration from a fixed
/// pseudo-random start; U is column-major dim x dim.
fn unitarity_defect(mat: &[Complex64], dim: usize) -> f64 {
    // Deterministic start vector from a splitmix-style generator.
    let mut seed = 0x9E3779B97F4A7C15u64;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(next(), next())).collect();
    let norm = |x: &[Complex64]| x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let nv = norm(&v);
    for a in v.iter_mut() {
        *a /= nv;
    }
    let mut estimate = 0.0;
    for _ in 0..32 {
        // w = U v (axpy over columns), z = U* w (dot per column).
        let mut w = vec![Complex64::new(0.0, 0.0); dim];
        for (col, &vc) in v.iter().enumerate() {
            if vc == Complex64::new(0.0, 0.0) {
                continue;
            }
            let column = &mat[col * dim..(col + 1) * dim];
            for (wr, &m) in w.iter_mut().zip(column) {
                *wr += m * vc;
            }
        }
        let mut g = vec![Complex64::new(0.0, 0.0); dim];
        for (col, gc) in g.iter_mut().enumerate() {
            let column = &mat[col * dim..(col + 1) * dim];
            let mut acc = Complex64::new(0.0, 0.0);
            for (&m, &wr) in column.iter().zip(&w) {
                acc += m.conj() * wr;
            }
            *gc = acc - v[col];
        }
        estimate = norm(&g);
        if estimate == 0.0 {
            return 0.0;
        }
        for (vc, &gc) in v.iter_mut().zip(&g) {
            *vc = gc / estimate;
        }
    }
    estimate
}
