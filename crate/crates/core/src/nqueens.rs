//! N-Queens benchmark instances.
//!
//! States are permutations of board rows, one queen per column, so row
//! and column conflicts are impossible by construction and only diagonal
//! attacks cost anything. Moves swap the rows of two columns, which
//! preserves the permutation property. An optional fixed queen pins one
//! column's row: the state set keeps only consistent permutations and
//! every swap touching the pinned column is invalid.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::problem::{MoveModel, ProblemSpec};

pub const MIN_BOARD: u32 = 2;
pub const MAX_BOARD: u32 = 8;

/// Escalating diagonal-conflict cost. For each column i, a counter
/// starts at zero and is bumped once per later column j whose queen
/// shares a diagonal with i; each bump adds the counter's new value.
/// Crowded queens therefore cost quadratically, not linearly: the fully
/// diagonal board (0, 1, 2, 3) scores 6 + 3 + 1 + 0 = 10.
pub fn heuristic(rows: &[u64]) -> f64 {
    let mut total = 0u64;
    for i in 0..rows.len() {
        let mut gamma = 0u64;
        for j in (i + 1)..rows.len() {
            let attacked =
                rows[i] == rows[j] || rows[i].abs_diff(rows[j]) == (j - i) as u64;
            if attacked {
                gamma += 1;
                total += gamma;
            }
        }
    }
    total as f64
}

fn check_board(n: u32) -> Result<()> {
    if !(MIN_BOARD..=MAX_BOARD).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "board size {n} outside {MIN_BOARD}..={MAX_BOARD}"
        )));
    }
    Ok(())
}

/// Number of zero-cost states on an n by n board, counted by exhaustive
/// enumeration of permutations.
pub fn count_solutions(n: u32) -> Result<u64> {
    check_board(n)?;
    let count = (0..n as u64)
        .permutations(n as usize)
        .filter(|rows| heuristic(rows) == 0.0)
        .count();
    Ok(count as u64)
}

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Build the benchmark instance for an n by n board. States are all
/// permutations (restricted to those honoring `fixed`, given as
/// (column, row)), each coordinate packed in ceil(log2 n) bits, with
/// pairwise row swaps as the move model.
pub fn generate_instance(n: u32, fixed: Option<(u32, u32)>) -> Result<ProblemSpec> {
    check_board(n)?;
    if let Some((col, row)) = fixed {
        if col >= n || row >= n {
            return Err(Error::InvalidParameter(format!(
                "fixed queen ({col}, {row}) outside an {n}x{n} board"
            )));
        }
    }
    let width = ceil_log2(n as u64).max(1);
    let encoding = vec![width; n as usize];
    let model = MoveModel::swap(n as usize, n as u64, fixed.map(|(col, _)| col as usize));

    let mut entries = Vec::new();
    let scratch = ProblemScratch::new(&encoding);
    for rows in (0..n as u64).permutations(n as usize) {
        if let Some((col, row)) = fixed {
            if rows[col as usize] != row as u64 {
                continue;
            }
        }
        entries.push((scratch.encode(&rows), heuristic(&rows)));
    }
    ProblemSpec::new(entries, encoding, model)
}

/// Big-endian packer used before the `ProblemSpec` exists.
struct ProblemScratch {
    widths: Vec<u32>,
}

impl ProblemScratch {
    fn new(widths: &[u32]) -> Self {
        ProblemScratch {
            widths: widths.to_vec(),
        }
    }

    fn encode(&self, coords: &[u64]) -> u64 {
        let mut label = 0u64;
        for (c, &v) in coords.iter().enumerate() {
            label = (label << self.widths[c]) | v;
        }
        label
    }
}

/// True when a problem argument names a generated board rather than a
/// file path.
pub fn is_descriptor(text: &str) -> bool {
    text.starts_with("nqueens:")
}

/// Parse "nqueens:<n>" or "nqueens:<n>:fixed=<col>,<row>".
pub fn parse_descriptor(text: &str) -> Result<(u32, Option<(u32, u32)>)> {
    let bad = |detail: &str| Error::InvalidParameter(format!("descriptor \"{text}\": {detail}"));
    let rest = text
        .strip_prefix("nqueens:")
        .ok_or_else(|| bad("expected nqueens:<n>[:fixed=<col>,<row>]"))?;
    let (n_text, fixed_text) = match rest.split_once(':') {
        Some((n, f)) => (n, Some(f)),
        None => (rest, None),
    };
    let n: u32 = n_text
        .parse()
        .map_err(|_| bad("board size is not an integer"))?;
    let fixed = match fixed_text {
        None => None,
        Some(f) => {
            let coords = f
                .strip_prefix("fixed=")
                .ok_or_else(|| bad("expected fixed=<col>,<row>"))?;
            let (c, r) = coords
                .split_once(',')
                .ok_or_else(|| bad("expected fixed=<col>,<row>"))?;
            let col: u32 = c.parse().map_err(|_| bad("fixed column is not an integer"))?;
            let row: u32 = r.parse().map_err(|_| bad("fixed row is not an integer"))?;
            Some((col, row))
        }
    };
    Ok((n, fixed))
}

/// Parse a descriptor and build its instance.
pub fn from_descriptor(text: &str) -> Result<ProblemSpec> {
    let (n, fixed) = parse_descriptor(text)?;
    generate_instance(n, fixed)
}
