//! Shared fixtures for the integration suites: a family of small
//! problems covering every move model, and a dense reference oracle
//! for the walk operators built from their closed forms rather than
//! from the engine's streaming passes.
#![allow(dead_code)]

use num_complex::Complex64;

use qmh::problem::{DeltaTable, MoveKind, MoveModel, ProblemSpec};

pub const C0: Complex64 = Complex64::new(0.0, 0.0);

/// A named small problem plus the inverse temperature its table is
/// built at.
pub struct FamilyCase {
    pub name: &'static str,
    pub spec: ProblemSpec,
    pub beta: f64,
}

fn lcg_cost(seed: &mut u64) -> f64 {
    // Deterministic, spread over [0, 8): enough resolution to make
    // every acceptance entry distinct without special-casing ties.
    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    ((*seed >> 33) % 4096) as f64 / 512.0
}

/// Every move model, boundary behavior, and padding shape that fits a
/// dense check: totals run from 6 to 12 qubits.
pub fn family() -> Vec<FamilyCase> {
    let mut cases = Vec::new();

    let spec = qmh::problem::parse_problem(r#"{ "0": 0.0, "1": 1.7 }"#).unwrap();
    cases.push(FamilyCase { name: "two-state-circular", spec, beta: 0.9 });

    let spec =
        qmh::problem::parse_problem(r#"{ "00": 0.0, "01": 2.3, "10": 0.4 }"#).unwrap();
    cases.push(FamilyCase { name: "three-of-four-circular", spec, beta: 1.1 });

    let mut seed = 5;
    let entries: Vec<(u64, f64)> = (0..6).map(|v| (v, lcg_cost(&mut seed))).collect();
    let spec = ProblemSpec::new(
        entries,
        vec![3],
        MoveModel::sequential_noncircular(1, 6),
    )
    .unwrap();
    cases.push(FamilyCase { name: "six-of-eight-noncircular", spec, beta: 0.8 });

    let mut seed = 9;
    let entries: Vec<(u64, f64)> = (0..3u64)
        .flat_map(|a| (0..3u64).map(move |b| (a << 2) | b))
        .map(|label| (label, lcg_cost(&mut seed)))
        .collect();
    let spec = ProblemSpec::new(
        entries,
        vec![2, 2],
        MoveModel::sequential_noncircular(2, 3),
    )
    .unwrap();
    cases.push(FamilyCase { name: "grid-noncircular", spec, beta: 1.3 });

    let mut seed = 13;
    let entries: Vec<(u64, f64)> = (0..3u64)
        .flat_map(|a| (0..3u64).map(move |b| (a << 2) | b))
        .map(|label| (label, lcg_cost(&mut seed)))
        .collect();
    let spec = ProblemSpec::new(
        entries,
        vec![2, 2],
        MoveModel {
            kind: MoveKind::SequentialCircular,
            coordinate_count: 2,
            coordinate_range: 3,
            pinned: Some(1),
        },
    )
    .unwrap();
    cases.push(FamilyCase { name: "grid-pinned-circular", spec, beta: 0.5 });

    let spec = qmh::nqueens::generate_instance(2, None).unwrap();
    cases.push(FamilyCase { name: "queens-two", spec, beta: 1.0 });

    let mut seed = 21;
    let entries: Vec<(u64, f64)> = (0..8).map(|v| (v, lcg_cost(&mut seed))).collect();
    let spec =
        ProblemSpec::new(entries, vec![1, 1, 1], MoveModel::swap(3, 2, None)).unwrap();
    cases.push(FamilyCase { name: "triple-swap", spec, beta: 1.6 });

    let mut seed = 33;
    let entries: Vec<(u64, f64)> = (0..128u64)
        .filter(|v| v % 9 != 4)
        .map(|v| (v, lcg_cost(&mut seed)))
        .collect();
    let spec = ProblemSpec::new(
        entries,
        vec![7],
        MoveModel::sequential_circular(1, 128),
    )
    .unwrap();
    cases.push(FamilyCase { name: "seven-bit-circular", spec, beta: 0.6 });

    cases
}

fn ceil_log2(x: usize) -> u32 {
    let mut bits = 0;
    while (1usize << bits) < x {
        bits += 1;
    }
    bits
}

/// Dense reference for one walk step, assembled from the operator
/// definitions: a Householder move preparation, a per-(state, slot)
/// coin rotation, the conditional-move involution, and the zero-slot
/// reflection. Register order (low to high): state, combined move
/// field, coin, three ancilla bits.
pub struct Oracle {
    pub sb: u32,
    pub mi: u32,
    pub mb: u32,
    pub total_bits: u32,
    pub dim: usize,
    h_small: Vec<Vec<f64>>,
    rot: Vec<(f64, f64)>,
    perm: Vec<usize>,
}

impl Oracle {
    pub fn new(spec: &ProblemSpec, table: &DeltaTable) -> Oracle {
        let model = spec.move_model();
        let widths: Vec<u32> = spec.encoding().to_vec();
        let sb: u32 = widths.iter().sum();
        let mi = ceil_log2(model.coordinate_count);
        let mb = mi + 1;
        let total_bits = sb + mb + 1 + 3;
        let dim = 1usize << total_bits;
        let n_moves = model.move_count();

        let slot_of = |id: usize| -> usize {
            match model.kind {
                MoveKind::SequentialCircular | MoveKind::SequentialNoncircular => {
                    (id / 2) | ((id % 2) << mi)
                }
                MoveKind::Swap => id,
            }
        };

        // Householder reflection sending the all-zero move field to the
        // uniform superposition over occupied slots.
        let m_dim = 1usize << mb;
        let mut h_small = vec![vec![0.0; m_dim]; m_dim];
        for (r, row) in h_small.iter_mut().enumerate() {
            row[r] = 1.0;
        }
        if n_moves > 1 {
            let mut w = vec![0.0; m_dim];
            w[slot_of(0)] += 1.0;
            for id in 0..n_moves {
                w[slot_of(id)] -= 1.0 / (n_moves as f64).sqrt();
            }
            let ww: f64 = w.iter().map(|x| x * x).sum();
            for r in 0..m_dim {
                for c in 0..m_dim {
                    h_small[r][c] -= 2.0 * w[r] * w[c] / ww;
                }
            }
        }

        // Big-endian coordinate packing: coordinate 0 sits in the
        // highest label bits.
        let decode = |pattern: u64| -> Vec<u64> {
            let mut coords = Vec::with_capacity(widths.len());
            let mut shift = sb;
            for &w in &widths {
                shift -= w;
                coords.push((pattern >> shift) & ((1u64 << w) - 1));
            }
            coords
        };
        let encode = |coords: &[u64]| -> u64 {
            let mut pattern = 0u64;
            for (&c, &w) in coords.iter().zip(&widths) {
                pattern = (pattern << w) | c;
            }
            pattern
        };
        let swap_pair = |id: usize| -> (usize, usize) {
            let mut k = 0;
            for i in 0..model.coordinate_count {
                for j in (i + 1)..model.coordinate_count {
                    if k == id {
                        return (i, j);
                    }
                    k += 1;
                }
            }
            panic!("swap id out of range");
        };

        let mut rot = vec![(0.0f64, 1.0f64); 1usize << (sb + mb)];
        for (i, &label) in spec.states().iter().enumerate() {
            for id in 0..n_moves {
                let q = table.entry(i, id);
                let qt = (q * 8.0).round() / 8.0;
                rot[(slot_of(id) << sb) | label as usize] = (qt.sqrt(), (1.0 - qt).sqrt());
            }
        }

        let mut perm: Vec<usize> = (0..1usize << (sb + mb)).collect();
        for pattern in 0..(1u64 << sb) {
            let coords = decode(pattern);
            for id in 0..n_moves {
                let next = match model.kind {
                    MoveKind::SequentialCircular | MoveKind::SequentialNoncircular => {
                        let (k, d) = (id / 2, id % 2);
                        let v = coords[k];
                        let r = model.coordinate_range;
                        if model.pinned == Some(k) || v >= r {
                            None
                        } else {
                            let nv = match (model.kind, d) {
                                (MoveKind::SequentialCircular, 0) => Some((v + 1) % r),
                                (MoveKind::SequentialCircular, _) => Some((v + r - 1) % r),
                                (_, 0) if v + 1 < r => Some(v + 1),
                                (_, 1) if v > 0 => Some(v - 1),
                                _ => None,
                            };
                            nv.map(|nv| {
                                let mut c2 = coords.clone();
                                c2[k] = nv;
                                c2
                            })
                        }
                    }
                    MoveKind::Swap => {
                        let (a, b) = swap_pair(id);
                        if model.pinned == Some(a) || model.pinned == Some(b) {
                            None
                        } else {
                            let mut c2 = coords.clone();
                            c2.swap(a, b);
                            Some(c2)
                        }
                    }
                };
                if let Some(c2) = next {
                    let inv = match model.kind {
                        MoveKind::Swap => id,
                        _ => id ^ 1,
                    };
                    perm[(slot_of(id) << sb) | pattern as usize] =
                        (slot_of(inv) << sb) | encode(&c2) as usize;
                }
            }
        }
        for (x, &t) in perm.iter().enumerate() {
            assert_eq!(perm[t], x, "reference conditional move must be an involution");
        }

        Oracle { sb, mi, mb, total_bits, dim, h_small, rot, perm }
    }

    fn split(&self, idx: usize) -> (usize, usize, usize, usize) {
        let s = idx & ((1 << self.sb) - 1);
        let mv = (idx >> self.sb) & ((1 << self.mb) - 1);
        let coin = (idx >> (self.sb + self.mb)) & 1;
        let anc = idx >> (self.sb + self.mb + 1);
        (s, mv, coin, anc)
    }

    pub fn apply_v(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![C0; self.dim];
        let m_dim = 1usize << self.mb;
        for (idx, value) in out.iter_mut().enumerate() {
            let (s, mv, coin, anc) = self.split(idx);
            let mut acc = C0;
            for src in 0..m_dim {
                let j = s | (src << self.sb) | (coin << (self.sb + self.mb))
                    | (anc << (self.sb + self.mb + 1));
                acc += self.h_small[mv][src] * amps[j];
            }
            *value = acc;
        }
        out
    }

    pub fn apply_b(&self, amps: &[Complex64], adjoint: bool) -> Vec<Complex64> {
        let mut out = amps.to_vec();
        for idx in 0..self.dim {
            let (s, mv, coin, _) = self.split(idx);
            if coin != 0 {
                continue;
            }
            let (sn, cs) = self.rot[(mv << self.sb) | s];
            let i1 = idx | (1 << (self.sb + self.mb));
            let (a0, a1) = (amps[idx], amps[i1]);
            if adjoint {
                out[idx] = cs * a0 + sn * a1;
                out[i1] = -sn * a0 + cs * a1;
            } else {
                out[idx] = cs * a0 - sn * a1;
                out[i1] = sn * a0 + cs * a1;
            }
        }
        out
    }

    pub fn apply_f(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = amps.to_vec();
        let packed_bits = self.sb + self.mb;
        for idx in 0..self.dim {
            let (_, _, coin, _) = self.split(idx);
            if coin == 0 {
                continue;
            }
            let packed = idx & ((1 << packed_bits) - 1);
            let rest = idx & !((1usize << packed_bits) - 1);
            out[rest | self.perm[packed]] = amps[idx];
        }
        out
    }

    pub fn apply_r(&self, amps: &[Complex64]) -> Vec<Complex64> {
        amps.iter()
            .enumerate()
            .map(|(idx, &a)| {
                let (_, mv, coin, _) = self.split(idx);
                if mv == 0 && coin == 0 {
                    a
                } else {
                    -a
                }
            })
            .collect()
    }

    /// One walk step, operators applied first to last.
    pub fn step(&self, amps: &[Complex64], ordering: qmh::qwalk::WalkOrdering) -> Vec<Complex64> {
        use qmh::qwalk::WalkOrdering::*;
        let v = |a: &[Complex64]| self.apply_v(a);
        match ordering {
            Lemieux => {
                let a = v(amps);
                let a = self.apply_b(&a, false);
                let a = self.apply_f(&a);
                let a = self.apply_b(&a, true);
                let a = v(&a);
                self.apply_r(&a)
            }
            Qubitization => {
                let a = v(amps);
                let a = self.apply_b(&a, true);
                let a = self.apply_r(&a);
                let a = self.apply_b(&a, false);
                let a = v(&a);
                self.apply_f(&a)
            }
            Alternative => {
                let a = self.apply_f(amps);
                let a = v(&a);
                let a = self.apply_b(&a, true);
                let a = self.apply_r(&a);
                let a = self.apply_b(&a, false);
                v(&a)
            }
        }
    }
}

/// Deterministic dense unit vector for randomized operator checks.
pub fn random_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut next = move || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let mut v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(next(), next())).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut v {
        *a /= norm;
    }
    v
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
