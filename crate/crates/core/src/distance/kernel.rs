//! Packed row storage and the fixed-weight enumeration loops.
//!
//! A level-`w` pass visits every message vector of Hamming weight exactly
//! `w` whose first nonzero coefficient is 1 (scalar multiples share a
//! weight). The pass is split into shards by the index of the first chosen
//! row; every shard is independent, so the merged result (lowest weight,
//! ties to the lowest shard, then to the first hit inside the shard) does not
//! depend on how shards are scheduled.

use rayon::prelude::*;

use crate::algebra::{Fe, Field};
use crate::linearcode::Matrix;

/// Combined leaf count below which a level is run on the calling thread.
const PARALLEL_THRESHOLD: u128 = 1 << 16;

#[derive(Clone, Debug)]
pub(crate) struct LevelHit {
    pub weight: usize,
    /// (row, coefficient) pairs of the lightest combination.
    pub combo: Vec<(usize, Fe)>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct LevelResult {
    pub best: Option<LevelHit>,
    pub count: u64,
}

impl LevelResult {
    fn merge(mut self, other: LevelResult) -> LevelResult {
        self.count += other.count;
        match (&self.best, other.best) {
            (None, b) => self.best = b,
            (Some(a), Some(b)) if b.weight < a.weight => self.best = Some(b),
            _ => {}
        }
        self
    }
}

/// C(k, w) * (q - 1)^(w - 1), saturating.
pub(crate) fn level_size(k: usize, w: usize, q: u8) -> u128 {
    if w == 0 || w > k {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..w as u128 {
        c = c.saturating_mul(k as u128 - i) / (i + 1);
    }
    for _ in 1..w {
        c = c.saturating_mul(q as u128 - 1);
    }
    c
}

enum Rows {
    B1(Vec<[u64; 1]>),
    B2(Vec<[u64; 2]>),
    B3(Vec<[u64; 3]>),
    B4(Vec<[u64; 4]>),
    B8(Vec<[u64; 8]>),
    Bytes(ByteRows),
}

struct ByteRows {
    n: usize,
    q: u8,
    /// Multiples c * row_i for c in 1..q at offset ((c - 1) * k + i) * n.
    mult: Vec<u8>,
    add: [[u8; 9]; 9],
    neg: [u8; 9],
}

pub(crate) struct Kernel {
    field: Field,
    k: usize,
    rows: Rows,
}

fn pack_binary<const W: usize>(m: &Matrix) -> Vec<[u64; W]> {
    m.rows()
        .iter()
        .map(|r| {
            let mut out = [0u64; W];
            for (j, c) in r.iter().enumerate() {
                if !c.is_zero() {
                    out[j / 64] |= 1u64 << (j % 64);
                }
            }
            out
        })
        .collect()
}

impl Kernel {
    pub fn new(basis: &Matrix) -> Kernel {
        let field = basis.field();
        let k = basis.num_rows();
        let n = basis.n();
        let rows = if field.q() == 2 && n <= 512 {
            match n.div_ceil(64) {
                0 | 1 => Rows::B1(pack_binary(basis)),
                2 => Rows::B2(pack_binary(basis)),
                3 => Rows::B3(pack_binary(basis)),
                4 => Rows::B4(pack_binary(basis)),
                _ => Rows::B8(pack_binary(basis)),
            }
        } else {
            let q = field.q();
            let mut mult = vec![0u8; (q as usize - 1) * k * n];
            for c in field.nonzero() {
                for (i, r) in basis.rows().iter().enumerate() {
                    let off = ((c.index() as usize - 1) * k + i) * n;
                    for (j, &x) in r.iter().enumerate() {
                        mult[off + j] = field.mul(c, x).index();
                    }
                }
            }
            let mut neg = [0u8; 9];
            for x in field.elements() {
                neg[x.index() as usize] = field.neg(x).index();
            }
            Rows::Bytes(ByteRows {
                n,
                q,
                mult,
                add: *field.add_table(),
                neg,
            })
        };
        Kernel { field, k, rows }
    }

    /// Full pass over weight-`w` messages.
    pub fn level(&self, w: usize, parallel: bool) -> LevelResult {
        if w == 0 || w > self.k {
            return LevelResult::default();
        }
        let shards = 0..=(self.k - w);
        let big = level_size(self.k, w, self.field.q()) >= PARALLEL_THRESHOLD;
        if parallel && big {
            let parts: Vec<LevelResult> = shards
                .into_par_iter()
                .map(|first| self.shard(w, first))
                .collect();
            parts.into_iter().fold(LevelResult::default(), LevelResult::merge)
        } else {
            shards
                .map(|first| self.shard(w, first))
                .fold(LevelResult::default(), LevelResult::merge)
        }
    }

    pub fn shard(&self, w: usize, first: usize) -> LevelResult {
        match &self.rows {
            Rows::B1(r) => bin_shard(r, w, first),
            Rows::B2(r) => bin_shard(r, w, first),
            Rows::B3(r) => bin_shard(r, w, first),
            Rows::B4(r) => bin_shard(r, w, first),
            Rows::B8(r) => bin_shard(r, w, first),
            Rows::Bytes(b) => byte_shard(b, self.k, w, first),
        }
    }
}

struct BinSearch<'a, const W: usize> {
    rows: &'a [[u64; W]],
    best: usize,
    best_path: Vec<usize>,
    path: Vec<usize>,
    count: u64,
}

#[inline(always)]
fn xor_weight<const W: usize>(a: &[u64; W], b: &[u64; W]) -> u32 {
    let mut wt = 0;
    for t in 0..W {
        wt += (a[t] ^ b[t]).count_ones();
    }
    wt
}

impl<const W: usize> BinSearch<'_, W> {
    fn rec(&mut self, acc: [u64; W], start: usize, left: usize) {
        let k = self.rows.len();
        if left == 1 {
            for (i, row) in self.rows.iter().enumerate().skip(start) {
                let wt = xor_weight(&acc, row) as usize;
                if wt < self.best {
                    self.best = wt;
                    self.best_path.clone_from(&self.path);
                    self.best_path.push(i);
                }
            }
            self.count += (k - start) as u64;
            return;
        }
        for i in start..=(k - left) {
            let mut next = acc;
            for t in 0..W {
                next[t] ^= self.rows[i][t];
            }
            self.path.push(i);
            self.rec(next, i + 1, left - 1);
            self.path.pop();
        }
    }
}

fn bin_shard<const W: usize>(rows: &[[u64; W]], w: usize, first: usize) -> LevelResult {
    let mut s = BinSearch {
        rows,
        best: usize::MAX,
        best_path: Vec::new(),
        path: vec![first],
        count: 0,
    };
    if w == 1 {
        s.best = xor_weight(&rows[first], &[0u64; W]) as usize;
        s.best_path = vec![first];
        s.count = 1;
    } else if first + w <= rows.len() {
        s.rec(rows[first], first + 1, w - 1);
    }
    LevelResult {
        best: (s.best != usize::MAX).then(|| LevelHit {
            weight: s.best,
            combo: s.best_path.iter().map(|&i| (i, Fe::ONE)).collect(),
        }),
        count: s.count,
    }
}

struct ByteSearch<'a> {
    b: &'a ByteRows,
    k: usize,
    /// Partial sums, one buffer per depth.
    acc: Vec<Vec<u8>>,
    negacc: Vec<u8>,
    best: usize,
    best_path: Vec<(usize, u8)>,
    path: Vec<(usize, u8)>,
    count: u64,
}

#[inline(always)]
fn count_ne(a: &[u8], b: &[u8]) -> usize {
    let mut c = 0u32;
    for (x, y) in a.iter().zip(b) {
        c += (x != y) as u32;
    }
    c as usize
}

impl ByteSearch<'_> {
    #[inline(always)]
    fn row(&self, c: u8, i: usize) -> &[u8] {
        let n = self.b.n;
        let off = ((c as usize - 1) * self.k + i) * n;
        &self.b.mult[off..off + n]
    }

    fn rec(&mut self, depth: usize, start: usize, left: usize) {
        let k = self.k;
        let q = self.b.q;
        if left == 1 {
            // acc + m has a zero exactly where m == -acc
            for (d, &s) in self.negacc.iter_mut().zip(&self.acc[depth]) {
                *d = self.b.neg[s as usize];
            }
            for i in start..k {
                for c in 1..q {
                    let wt = count_ne(&self.negacc, self.row(c, i));
                    if wt < self.best {
                        self.best = wt;
                        self.best_path.clone_from(&self.path);
                        self.best_path.push((i, c));
                    }
                }
            }
            self.count += ((k - start) * (q as usize - 1)) as u64;
            return;
        }
        for i in start..=(k - left) {
            for c in 1..q {
                let (lo, hi) = self.acc.split_at_mut(depth + 1);
                let src = &lo[depth];
                let dst = &mut hi[0];
                let n = self.b.n;
                let off = ((c as usize - 1) * k + i) * n;
                let row = &self.b.mult[off..off + n];
                for ((d, &s), &r) in dst.iter_mut().zip(src).zip(row) {
                    *d = self.b.add[s as usize][r as usize];
                }
                self.path.push((i, c));
                self.rec(depth + 1, i + 1, left - 1);
                self.path.pop();
            }
        }
    }
}

fn byte_shard(b: &ByteRows, k: usize, w: usize, first: usize) -> LevelResult {
    let mut s = ByteSearch {
        b,
        k,
        acc: vec![vec![0u8; b.n]; w.max(1)],
        negacc: vec![0u8; b.n],
        best: usize::MAX,
        best_path: Vec::new(),
        path: vec![(first, 1)],
        count: 0,
    };
    let first_row = s.row(1, first).to_vec();
    if w == 1 {
        s.best = first_row.iter().filter(|&&x| x != 0).count();
        s.best_path = vec![(first, 1)];
        s.count = 1;
    } else if first + w <= k {
        s.acc[0].copy_from_slice(&first_row);
        s.rec(0, first + 1, w - 1);
    }
    LevelResult {
        best: (s.best != usize::MAX).then(|| LevelHit {
            weight: s.best,
            combo: s.best_path.iter().map(|&(i, c)| (i, Fe(c))).collect(),
        }),
        count: s.count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_sizes() {
        assert_eq!(level_size(5, 2, 2), 10);
        assert_eq!(level_size(5, 2, 3), 20);
        assert_eq!(level_size(4, 5, 3), 0);
        assert_eq!(level_size(40, 10, 2), 847_660_528);
    }

    #[test]
    fn shard_counts_add_up() {
        for q in [2u32, 3, 4, 5] {
            let f = Field::new(q).unwrap();
            let rows: Vec<Vec<u8>> = (0..6)
                .map(|i| (0..9).map(|j| ((i * 7 + j * 3) % q as usize) as u8).collect())
                .collect();
            let m = Matrix::from_indices(f, &rows);
            let kern = Kernel::new(&m);
            for w in 1..=6 {
                let r = kern.level(w, false);
                assert_eq!(r.count as u128, level_size(6, w, q as u8), "q={q} w={w}");
                let hit = r.best.unwrap();
                let word = m.combine(&{
                    let mut coeffs = vec![Fe::ZERO; 6];
                    for (i, c) in hit.combo {
                        coeffs[i] = c;
                    }
                    coeffs
                });
                assert_eq!(crate::linearcode::hamming_weight(&word), hit.weight);
            }
        }
    }
}
