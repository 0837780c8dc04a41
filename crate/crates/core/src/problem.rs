//! Finite cost landscapes over bit-string states, the move models that
//! connect them, and the acceptance tables both engines consume.
//!
//! A problem is a map from equal-width binary labels to real costs. Moves
//! are enumerated in a canonical order that is shared verbatim by the
//! classical sampler and the quantum walk's move register: sequential
//! models list coordinate-major then direction (+1 before -1), the swap
//! model lists unordered coordinate pairs lexicographically. Invalid
//! moves (blocked boundaries, pinned coordinates, successors outside the
//! state list) are kept in the enumeration with acceptance zero rather
//! than dropped, so the proposal distribution stays uniform over a fixed
//! slot count.

use std::collections::HashMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    SequentialCircular,
    SequentialNoncircular,
    Swap,
}

/// Move structure over coordinate vectors. `pinned` marks one coordinate
/// whose value may never change; every move touching it is invalid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveModel {
    pub kind: MoveKind,
    pub coordinate_count: usize,
    pub coordinate_range: u64,
    pub pinned: Option<usize>,
}

impl MoveModel {
    pub fn sequential_circular(coordinate_count: usize, coordinate_range: u64) -> Self {
        MoveModel {
            kind: MoveKind::SequentialCircular,
            coordinate_count,
            coordinate_range,
            pinned: None,
        }
    }

    pub fn sequential_noncircular(coordinate_count: usize, coordinate_range: u64) -> Self {
        MoveModel {
            kind: MoveKind::SequentialNoncircular,
            coordinate_count,
            coordinate_range,
            pinned: None,
        }
    }

    pub fn swap(coordinate_count: usize, coordinate_range: u64, pinned: Option<usize>) -> Self {
        MoveModel {
            kind: MoveKind::Swap,
            coordinate_count,
            coordinate_range,
            pinned,
        }
    }

    /// Number of move slots. Invalid moves count: the slot list is
    /// state-independent.
    pub fn move_count(&self) -> usize {
        match self.kind {
            MoveKind::SequentialCircular | MoveKind::SequentialNoncircular => {
                2 * self.coordinate_count
            }
            MoveKind::Swap => self.coordinate_count * (self.coordinate_count - 1) / 2,
        }
    }

    /// Lexicographic unordered pair for a swap move id.
    pub fn swap_pair(&self, move_id: usize) -> (usize, usize) {
        debug_assert_eq!(self.kind, MoveKind::Swap);
        let n = self.coordinate_count;
        let mut id = move_id;
        for i in 0..n {
            let row = n - 1 - i;
            if id < row {
                return (i, i + 1 + id);
            }
            id -= row;
        }
        unreachable!("swap move id out of range");
    }

    /// For sequential moves, the (coordinate, direction) pair; direction
    /// 0 is +1, direction 1 is -1.
    pub fn sequential_parts(&self, move_id: usize) -> (usize, usize) {
        (move_id / 2, move_id % 2)
    }

    /// The move id whose application undoes `move_id`. Sequential moves
    /// flip direction; swaps are involutions.
    pub fn inverse(&self, move_id: usize) -> usize {
        match self.kind {
            MoveKind::SequentialCircular | MoveKind::SequentialNoncircular => move_id ^ 1,
            MoveKind::Swap => move_id,
        }
    }

    /// Structural application of a move to a coordinate vector. `None`
    /// means the move is invalid there: a blocked noncircular boundary,
    /// a pinned coordinate, or a coordinate already outside the range.
    pub fn apply(&self, coords: &[u64], move_id: usize) -> Option<Vec<u64>> {
        debug_assert!(move_id < self.move_count());
        match self.kind {
            MoveKind::SequentialCircular | MoveKind::SequentialNoncircular => {
                let (k, dir) = self.sequential_parts(move_id);
                if self.pinned == Some(k) {
                    return None;
                }
                let v = coords[k];
                let r = self.coordinate_range;
                if v >= r {
                    return None;
                }
                let nv = match (self.kind, dir) {
                    (MoveKind::SequentialCircular, 0) => (v + 1) % r,
                    (MoveKind::SequentialCircular, _) => (v + r - 1) % r,
                    (MoveKind::SequentialNoncircular, 0) => {
                        if v + 1 >= r {
                            return None;
                        }
                        v + 1
                    }
                    (MoveKind::SequentialNoncircular, _) => {
                        if v == 0 {
                            return None;
                        }
                        v - 1
                    }
                    _ => unreachable!(),
                };
                let mut out = coords.to_vec();
                out[k] = nv;
                Some(out)
            }
            MoveKind::Swap => {
                let (i, j) = self.swap_pair(move_id);
                if self.pinned == Some(i) || self.pinned == Some(j) {
                    return None;
                }
                let mut out = coords.to_vec();
                out.swap(i, j);
                Some(out)
            }
        }
    }
}

/// One slot of the canonical move enumeration at a given state.
/// `successor` is the structural outcome (present even when it lands on
/// an unlisted label); `valid` additionally requires a listed successor.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumeratedMove {
    pub move_id: usize,
    pub successor: Option<u64>,
    pub valid: bool,
}

/// A finite optimization problem: sorted state labels, their costs, the
/// move model, and the per-coordinate bit widths used to pack labels.
/// Coordinate 0 occupies the most significant field of a label.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    states: Vec<u64>,
    costs: Vec<f64>,
    index: HashMap<u64, usize>,
    move_model: MoveModel,
    encoding: Vec<u32>,
    label_bits: u32,
    min_cost: f64,
    ground: Vec<usize>,
}

impl ProblemSpec {
    pub fn new(
        mut entries: Vec<(u64, f64)>,
        encoding: Vec<u32>,
        move_model: MoveModel,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::MalformedEntry("empty state set".into()));
        }
        if encoding.is_empty() || encoding.iter().any(|&w| w == 0) {
            return Err(Error::InvalidParameter(
                "encoding widths must be positive".into(),
            ));
        }
        let label_bits: u32 = encoding.iter().sum();
        if label_bits > 60 {
            return Err(Error::CapacityExceeded(format!(
                "label width {label_bits} exceeds 60 bits"
            )));
        }
        if move_model.coordinate_count != encoding.len() {
            return Err(Error::InvalidParameter(format!(
                "move model spans {} coordinates but encoding lists {}",
                move_model.coordinate_count,
                encoding.len()
            )));
        }
        if move_model.coordinate_range == 0 {
            return Err(Error::InvalidParameter("coordinate range is zero".into()));
        }
        for &w in &encoding {
            if w < 60 && move_model.coordinate_range > (1u64 << w) {
                return Err(Error::EncodingError(format!(
                    "coordinate range {} does not fit in {} bits",
                    move_model.coordinate_range, w
                )));
            }
        }
        if let Some(p) = move_model.pinned {
            if p >= move_model.coordinate_count {
                return Err(Error::InvalidParameter(format!(
                    "pinned coordinate {p} out of range"
                )));
            }
        }
        if move_model.kind == MoveKind::Swap && move_model.coordinate_count < 2 {
            return Err(Error::InvalidParameter(
                "swap moves need at least two coordinates".into(),
            ));
        }
        if move_model.move_count() == 0 {
            return Err(Error::InvalidParameter("move model has no moves".into()));
        }

        entries.sort_by_key(|&(label, _)| label);
        let mut index = HashMap::with_capacity(entries.len());
        for (i, &(label, cost)) in entries.iter().enumerate() {
            if !cost.is_finite() {
                return Err(Error::MalformedEntry(format!(
                    "cost for label {} is not finite",
                    format_label(label, label_bits)
                )));
            }
            if label_bits < 64 && label >= (1u64 << label_bits) {
                return Err(Error::EncodingError(format!(
                    "label {label:#b} wider than {label_bits} bits"
                )));
            }
            if index.insert(label, i).is_some() {
                return Err(Error::DuplicateState(format_label(label, label_bits)));
            }
        }

        let states: Vec<u64> = entries.iter().map(|e| e.0).collect();
        let costs: Vec<f64> = entries.iter().map(|e| e.1).collect();

        let spec = ProblemSpec {
            min_cost: costs.iter().cloned().fold(f64::INFINITY, f64::min),
            ground: Vec::new(),
            states,
            costs,
            index,
            move_model,
            encoding,
            label_bits,
        };
        for (i, &label) in spec.states.iter().enumerate() {
            for (c, &v) in spec.decode(label).iter().enumerate() {
                if v >= spec.move_model.coordinate_range {
                    return Err(Error::EncodingError(format!(
                        "label {} coordinate {} value {} outside range {}",
                        format_label(label, label_bits),
                        c,
                        v,
                        spec.move_model.coordinate_range
                    )));
                }
                let _ = i;
            }
        }
        let ground = spec
            .costs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == spec.min_cost)
            .map(|(i, _)| i)
            .collect();
        Ok(ProblemSpec { ground, ..spec })
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost(&self, state_index: usize) -> f64 {
        self.costs[state_index]
    }

    pub fn label(&self, state_index: usize) -> u64 {
        self.states[state_index]
    }

    pub fn index_of(&self, label: u64) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn move_model(&self) -> &MoveModel {
        &self.move_model
    }

    pub fn encoding(&self) -> &[u32] {
        &self.encoding
    }

    pub fn label_bits(&self) -> u32 {
        self.label_bits
    }

    pub fn min_cost(&self) -> f64 {
        self.min_cost
    }

    /// Indices of the minimum-cost states. Never empty.
    pub fn ground_set(&self) -> &[usize] {
        &self.ground
    }

    pub fn format_label(&self, label: u64) -> String {
        format_label(label, self.label_bits)
    }

    /// Parse a binary label of exactly `label_bits` characters.
    pub fn parse_label(&self, text: &str) -> Result<u64> {
        if text.len() != self.label_bits as usize || !text.bytes().all(|b| b == b'0' || b == b'1')
        {
            return Err(Error::EncodingError(format!(
                "label \"{text}\" is not a {}-bit binary string",
                self.label_bits
            )));
        }
        Ok(u64::from_str_radix(text, 2).expect("validated binary"))
    }

    /// Unpack a label into its coordinate vector.
    pub fn decode(&self, label: u64) -> Vec<u64> {
        let mut coords = vec![0u64; self.encoding.len()];
        let mut rest = label;
        for c in (0..self.encoding.len()).rev() {
            let w = self.encoding[c];
            coords[c] = rest & ((1u64 << w) - 1);
            rest >>= w;
        }
        coords
    }

    /// Pack a coordinate vector into a label.
    pub fn encode(&self, coords: &[u64]) -> Result<u64> {
        if coords.len() != self.encoding.len() {
            return Err(Error::DimensionError(format!(
                "{} coordinates given, {} expected",
                coords.len(),
                self.encoding.len()
            )));
        }
        let mut label = 0u64;
        for (c, &v) in coords.iter().enumerate() {
            let w = self.encoding[c];
            if v >= (1u64 << w) {
                return Err(Error::EncodingError(format!(
                    "coordinate {c} value {v} wider than {w} bits"
                )));
            }
            label = (label << w) | v;
        }
        Ok(label)
    }

    /// Cost looked up by label rather than dense index.
    pub fn cost_of_label(&self, label: u64) -> Option<f64> {
        self.index_of(label).map(|i| self.costs[i])
    }

    /// Canonical move list at a state. Invalid moves are flagged, never
    /// omitted; a move is valid only if its successor is a listed state.
    pub fn enumerate_moves(&self, label: u64) -> Result<Vec<EnumeratedMove>> {
        if self.index_of(label).is_none() {
            return Err(Error::EncodingError(format!(
                "label {} is not a listed state",
                format_label(label, self.label_bits)
            )));
        }
        let coords = self.decode(label);
        let m = self.move_model.move_count();
        let mut out = Vec::with_capacity(m);
        for id in 0..m {
            let successor = self
                .move_model
                .apply(&coords, id)
                .map(|nc| self.encode(&nc).expect("moves stay within field widths"));
            let valid = successor.is_some_and(|s| self.index.contains_key(&s));
            out.push(EnumeratedMove {
                move_id: id,
                successor,
                valid,
            });
        }
        Ok(out)
    }
}

fn format_label(label: u64, bits: u32) -> String {
    format!("{:0>width$b}", label, width = bits as usize)
}

/// Metropolis acceptance for a proposed change from cost `cost_from` to
/// `cost_to` at inverse temperature `beta`: min(1, exp(-beta * dC)). A
/// strictly lower cost takes the exact 1.0 branch; ties give exp(0) = 1.
pub fn acceptance(cost_from: f64, cost_to: f64, beta: f64) -> Result<f64> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta must be finite and nonnegative, got {beta}"
        )));
    }
    if !cost_from.is_finite() || !cost_to.is_finite() {
        return Err(Error::InvalidParameter("costs must be finite".into()));
    }
    if cost_to < cost_from {
        Ok(1.0)
    } else {
        Ok((-beta * (cost_to - cost_from)).exp())
    }
}

/// Dense table of acceptance probabilities, one entry per (state, move
/// slot). Invalid moves hold 0. Both engines consume this table: the
/// classical sampler directly, the walk after 3-bit quantization.
#[derive(Clone, Debug)]
pub struct DeltaTable {
    beta: f64,
    n_states: usize,
    n_moves: usize,
    entries: Vec<f64>,
}

impl DeltaTable {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_moves(&self) -> usize {
        self.n_moves
    }

    pub fn entry(&self, state_index: usize, move_id: usize) -> f64 {
        self.entries[state_index * self.n_moves + move_id]
    }

    /// Build a table directly from raw entries. Intended for tests and
    /// single-state probes; `build_delta_table` is the standard path.
    pub fn from_entries(beta: f64, n_states: usize, n_moves: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n_states * n_moves {
            return Err(Error::DimensionError(format!(
                "{} entries for a {}x{} table",
                entries.len(),
                n_states,
                n_moves
            )));
        }
        if entries.iter().any(|&e| !(0.0..=1.0).contains(&e)) {
            return Err(Error::InvalidParameter(
                "acceptance entries must lie in [0, 1]".into(),
            ));
        }
        Ok(DeltaTable {
            beta,
            n_states,
            n_moves,
            entries,
        })
    }

    /// Stable digest of the table contents; compare-mode reports stamp
    /// this to show both engines consumed identical inputs.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.beta.to_le_bytes());
        hasher.update((self.n_states as u64).to_le_bytes());
        hasher.update((self.n_moves as u64).to_le_bytes());
        for e in &self.entries {
            hasher.update(e.to_le_bytes());
        }
        let digest = hasher.finalize();
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

/// Acceptance table for every (state, move slot) pair at one beta.
pub fn build_delta_table(spec: &ProblemSpec, beta: f64) -> Result<DeltaTable> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta must be finite and nonnegative, got {beta}"
        )));
    }
    let n = spec.n_states();
    let m = spec.move_model().move_count();
    let mut entries = vec![0.0f64; n * m];
    for i in 0..n {
        let label = spec.label(i);
        let ci = spec.cost(i);
        let coords = spec.decode(label);
        for id in 0..m {
            if let Some(nc) = spec.move_model().apply(&coords, id) {
                let succ = spec.encode(&nc).expect("moves stay within field widths");
                if let Some(j) = spec.index_of(succ) {
                    entries[i * m + id] = acceptance(ci, spec.cost(j), beta)?;
                }
            }
        }
    }
    Ok(DeltaTable {
        beta,
        n_states: n,
        n_moves: m,
        entries,
    })
}

/// Parse the problem file format: one UTF-8 JSON object mapping equal
/// width binary labels to numeric costs. The move model defaults to a
/// single circular coordinate spanning the full label space; labels
/// absent from the file are unreachable (moves onto them are invalid).
pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    struct EntriesVisitor;

    impl<'de> serde::de::Visitor<'de> for EntriesVisitor {
        type Value = Vec<(String, f64)>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a map of binary state labels to numeric costs")
        }

        fn visit_map<A: serde::de::MapAccess<'de>>(
            self,
            mut map: A,
        ) -> std::result::Result<Self::Value, A::Error> {
            let mut out = Vec::new();
            while let Some((k, v)) = map.next_entry::<String, f64>()? {
                out.push((k, v));
            }
            Ok(out)
        }
    }

    let mut de = serde_json::Deserializer::from_str(text);
    let raw: Vec<(String, f64)> = serde::de::Deserializer::deserialize_map(&mut de, EntriesVisitor)
        .map_err(|e| Error::MalformedEntry(e.to_string()))?;
    de.end()
        .map_err(|e| Error::MalformedEntry(format!("trailing content: {e}")))?;

    if raw.is_empty() {
        return Err(Error::MalformedEntry("empty state set".into()));
    }
    let width = raw[0].0.len();
    if width == 0 || width > 60 {
        return Err(Error::MalformedEntry(format!(
            "label width {width} outside 1..=60"
        )));
    }
    let mut entries = Vec::with_capacity(raw.len());
    let mut seen = HashMap::new();
    for (label_text, cost) in &raw {
        if label_text.len() != width {
            return Err(Error::MalformedEntry(format!(
                "label \"{label_text}\" has width {}, expected {width}",
                label_text.len()
            )));
        }
        if !label_text.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::MalformedEntry(format!(
                "label \"{label_text}\" is not a binary string"
            )));
        }
        let label = u64::from_str_radix(label_text, 2).expect("validated binary");
        if seen.insert(label, ()).is_some() {
            return Err(Error::DuplicateState(label_text.clone()));
        }
        if !cost.is_finite() {
            return Err(Error::MalformedEntry(format!(
                "cost for label \"{label_text}\" is not finite"
            )));
        }
        entries.push((label, *cost));
    }

    let range = 1u64 << width;
    ProblemSpec::new(
        entries,
        vec![width as u32],
        MoveModel::sequential_circular(1, range),
    )
}
