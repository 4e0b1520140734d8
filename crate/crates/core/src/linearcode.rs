//! Dense generator matrices over GF(q) and the linear-algebra checks built on
//! them: echelon form, Euclidean dual, membership, extension, and the
//! LCD / dual-containing / self-orthogonal / reversible predicates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Fe, Field};
use crate::error::{Error, Result};

/// Generator matrix of a linear code. Rows need not be independent.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    n: usize,
    rows: Vec<Vec<Fe>>,
}

/// Reduced row-echelon form: basis rows plus their pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub basis: Matrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Residual of `word` after clearing every pivot position.
    pub fn reduce(&self, word: &[Fe]) -> Vec<Fe> {
        let f = self.basis.field;
        let mut w = word.to_vec();
        for (row, &pc) in self.basis.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in w.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, r));
            }
        }
        w
    }

    pub fn contains(&self, word: &[Fe]) -> bool {
        word.len() == self.basis.n && self.reduce(word).iter().all(|c| c.is_zero())
    }

    /// Message coordinates of a codeword: the word equals coords * basis.
    pub fn coordinates(&self, word: &[Fe]) -> Option<Vec<Fe>> {
        if !self.contains(word) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| word[p]).collect())
    }
}

impl Matrix {
    pub fn new(field: Field, n: usize, rows: Vec<Vec<Fe>>) -> Matrix {
        assert!(
            rows.iter().all(|r| r.len() == n),
            "every row must have length {n}"
        );
        Matrix { field, n, rows }
    }

    pub fn from_indices(field: Field, rows: &[Vec<u8>]) -> Matrix {
        let n = rows.first().map_or(0, |r| r.len());
        Matrix::new(
            field,
            n,
            rows.iter()
                .map(|r| r.iter().map(|&i| field.elem(i)).collect())
                .collect(),
        )
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![Fe::ZERO; n];
                r[i] = Fe::ONE;
                r
            })
            .collect();
        Matrix::new(field, n, rows)
    }

    pub fn empty(field: Field, n: usize) -> Matrix {
        Matrix::new(field, n, Vec::new())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Code length (number of columns).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, row: Vec<Fe>) {
        assert_eq!(row.len(), self.n);
        self.rows.push(row);
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Matrix::new(self.field, self.n, rows)
    }

    /// Places `other` to the right of `self`; both need the same row count.
    pub fn concat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows.len(), other.rows.len());
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        Matrix::new(self.field, self.n + other.n, rows)
    }

    pub fn echelon(&self) -> Echelon {
        let order: Vec<usize> = (0..self.n).collect();
        self.echelon_in_order(&order)
    }

    /// Reduced echelon form choosing pivots among the columns in `order`
    /// first-come. Columns missing from `order` never become pivots.
    pub fn echelon_in_order(&self, order: &[usize]) -> Echelon {
        let f = self.field;
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in order {
            if r == rows.len() {
                break;
            }
            let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = f.inv(rows[r][c]).unwrap();
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, p));
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        Echelon {
            basis: Matrix::new(f, self.n, rows),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Generator of the Euclidean dual.
    pub fn dual(&self) -> Matrix {
        let f = self.field;
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.n];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let rows = (0..self.n)
            .filter(|&c| !is_pivot[c])
            .map(|c| {
                let mut v = vec![Fe::ZERO; self.n];
                v[c] = Fe::ONE;
                for (row, &p) in ech.basis.rows.iter().zip(&ech.pivots) {
                    v[p] = f.neg(row[c]);
                }
                v
            })
            .collect();
        Matrix::new(f, self.n, rows)
    }

    pub fn contains(&self, word: &[Fe]) -> bool {
        self.echelon().contains(word)
    }

    /// True when both matrices span the same code.
    pub fn same_code(&self, other: &Matrix) -> bool {
        self.field == other.field && self.n == other.n && self.echelon() == other.echelon()
    }

    /// Gram matrix B * B^T of a row basis B.
    pub fn gram(&self) -> Matrix {
        let f = self.field;
        let basis = self.echelon().basis;
        let k = basis.rows.len();
        let rows = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| inner(f, &basis.rows[i], &basis.rows[j]))
                    .collect()
            })
            .collect();
        Matrix::new(f, k, rows)
    }

    /// C intersects its dual trivially.
    pub fn is_lcd(&self) -> bool {
        let g = self.gram();
        g.rank() == g.n
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.gram().rows.iter().flatten().all(|c| c.is_zero())
    }

    /// Every dual codeword lies in C.
    pub fn is_dual_containing(&self) -> bool {
        let ech = self.echelon();
        self.dual().rows.iter().all(|r| ech.contains(r))
    }

    /// Reversing the coordinates maps the code onto itself.
    pub fn is_reversible(&self) -> bool {
        let rev: Vec<Vec<Fe>> = self
            .rows
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        self.same_code(&Matrix::new(self.field, self.n, rev))
    }

    /// Appends an overall parity coordinate (minus the coordinate sum) to
    /// each row, so every extended codeword sums to zero.
    pub fn extend(&self) -> Matrix {
        let f = self.field;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let s = r.iter().fold(Fe::ZERO, |acc, &c| f.add(acc, c));
                let mut v = r.clone();
                v.push(f.neg(s));
                v
            })
            .collect();
        Matrix::new(f, self.n + 1, rows)
    }

    pub fn properties(&self) -> CodeProperties {
        CodeProperties {
            lcd: self.is_lcd(),
            dual_containing: self.is_dual_containing(),
            self_orthogonal: self.is_self_orthogonal(),
            reversible: self.is_reversible(),
        }
    }

    /// Linear combination sum_i coeffs[i] * row_i.
    pub fn combine(&self, coeffs: &[Fe]) -> Vec<Fe> {
        let f = self.field;
        let mut out = vec![Fe::ZERO; self.n];
        for (row, &c) in self.rows.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
        out
    }
}

pub fn inner(f: Field, a: &[Fe], b: &[Fe]) -> Fe {
    a.iter()
        .zip(b)
        .fold(Fe::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn hamming_weight(word: &[Fe]) -> usize {
    word.iter().filter(|c| !c.is_zero()).count()
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix[{}] {}x{}", self.field, self.rows.len(), self.n)?;
        for r in &self.rows {
            let s: String = r.iter().map(|&c| self.field.name(c)).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeProperties {
    pub lcd: bool,
    pub dual_containing: bool,
    pub self_orthogonal: bool,
    pub reversible: bool,
}

/// Minimum-distance knowledge about a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DistanceStatus {
    Exact { d: usize },
    Bounded { lower: usize, upper: usize },
    Unknown,
}

impl DistanceStatus {
    pub fn bounded(lower: usize, upper: usize) -> Result<DistanceStatus> {
        match lower.cmp(&upper) {
            std::cmp::Ordering::Less => Ok(DistanceStatus::Bounded { lower, upper }),
            std::cmp::Ordering::Equal => Ok(DistanceStatus::Exact { d: lower }),
            std::cmp::Ordering::Greater => Err(Error::precondition(format!(
                "lower bound {lower} exceeds upper bound {upper}"
            ))),
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            DistanceStatus::Exact { d } => Some(d),
            _ => None,
        }
    }

    pub fn bounds(self) -> Option<(usize, usize)> {
        match self {
            DistanceStatus::Exact { d } => Some((d, d)),
            DistanceStatus::Bounded { lower, upper } => Some((lower, upper)),
            DistanceStatus::Unknown => None,
        }
    }

    /// Whether `d` is consistent with what is known.
    pub fn admits(self, d: usize) -> bool {
        self.bounds().is_none_or(|(lo, hi)| lo <= d && d <= hi)
    }
}

impl fmt::Display for DistanceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceStatus::Exact { d } => write!(f, "{d}"),
            DistanceStatus::Bounded { lower, upper } => write!(f, "{lower}..{upper}"),
            DistanceStatus::Unknown => write!(f, "?"),
        }
    }
}

/// [n, k, d]_q summary of a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub n: usize,
    pub k: usize,
    pub q: u8,
    pub d: DistanceStatus,
}

impl fmt::Display for CodeSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]_{}", self.n, self.k, self.d, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn hamming74() -> Matrix {
        Matrix::from_indices(
            gf(2),
            &[
                vec![1, 0, 0, 0, 1, 1, 0],
                vec![0, 1, 0, 0, 1, 0, 1],
                vec![0, 0, 1, 0, 0, 1, 1],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
        )
    }

    #[test]
    fn rank_basics() {
        assert_eq!(Matrix::identity(gf(2), 3).rank(), 3);
        let m = Matrix::from_indices(gf(3), &[vec![1, 2, 0], vec![1, 2, 0]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(Matrix::empty(gf(5), 4).rank(), 0);
    }

    #[test]
    fn dual_of_full_and_repetition() {
        assert_eq!(Matrix::identity(gf(7), 5).dual().num_rows(), 0);
        let rep = Matrix::from_indices(gf(2), &[vec![1, 1, 1]]);
        let even = Matrix::from_indices(gf(2), &[vec![1, 1, 0], vec![0, 1, 1]]);
        assert!(rep.dual().same_code(&even));
    }

    #[test]
    fn dual_is_orthogonal() {
        let g = Matrix::from_indices(gf(5), &[vec![1, 2, 3, 4, 0], vec![0, 1, 1, 2, 3]]);
        let d = g.dual();
        assert_eq!(d.rank() + g.rank(), 5);
        for a in g.rows() {
            for b in d.rows() {
                assert!(inner(gf(5), a, b).is_zero());
            }
        }
        assert!(d.dual().same_code(&g));
    }

    #[test]
    fn identity_is_lcd() {
        assert!(Matrix::identity(gf(3), 4).is_lcd());
    }

    #[test]
    fn hamming_properties() {
        let h = hamming74();
        // the [7,4] Hamming code contains its dual, the [7,3] simplex code
        assert!(h.is_dual_containing());
        assert!(!h.is_self_orthogonal());
        assert!(h.dual().is_self_orthogonal());
        assert!(!h.is_lcd());
    }

    #[test]
    fn extend_zero_sum_row() {
        let g = Matrix::from_indices(gf(3), &[vec![1, 2, 0]]);
        assert_eq!(g.extend().rows()[0], vec![Fe(1), Fe(2), Fe(0), Fe(0)]);
        let g = Matrix::from_indices(gf(3), &[vec![1, 1, 0]]);
        assert_eq!(g.extend().rows()[0][3], Fe(1));
    }

    #[test]
    fn reversible_repetition() {
        assert!(Matrix::from_indices(gf(2), &[vec![1, 1, 1]]).is_reversible());
        assert!(!Matrix::from_indices(gf(2), &[vec![1, 1, 0]]).is_reversible());
    }

    #[test]
    fn coordinates_recover_message() {
        let h = hamming74();
        let ech = h.echelon();
        let word = h.combine(&[Fe(1), Fe(0), Fe(1), Fe(1)]);
        let coords = ech.coordinates(&word).unwrap();
        assert_eq!(ech.basis.combine(&coords), word);
        assert!(ech.coordinates(&[Fe(1); 7][..6]).is_none());
    }

    #[test]
    fn distance_status_bounds() {
        assert_eq!(DistanceStatus::bounded(3, 3).unwrap(), DistanceStatus::Exact { d: 3 });
        assert!(DistanceStatus::bounded(4, 3).is_err());
        assert!(DistanceStatus::Bounded { lower: 2, upper: 5 }.admits(4));
        assert!(!DistanceStatus::Exact { d: 5 }.admits(4));
    }
}
