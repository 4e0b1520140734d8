//! Exhaustive enumeration of every codeword. Used as an oracle on small codes.

use crate::algebra::Fe;
use crate::error::{Error, Result};
use crate::linearcode::{hamming_weight, Matrix};

/// Largest number of codewords the exhaustive routines will visit by default.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 24;

/// `dist[i]` = number of codewords of weight `i`, for `i` in `0..=n`.
pub fn weight_distribution_bruteforce(g: &Matrix, cap: u64) -> Result<Vec<u64>> {
    let basis = g.echelon().basis;
    let field = g.field();
    let q = field.q() as u64;
    let k = basis.num_rows();
    let size = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(q));
    let size = match size {
        Some(s) if s <= cap => s,
        _ => {
            return Err(Error::OracleScaleExceeded(format!(
                "{q}^{k} codewords exceed the cap of {cap}"
            )))
        }
    };
    let n = g.n();
    let mut dist = vec![0u64; n + 1];
    let mut digits = vec![0u8; k];
    let mut word = vec![Fe::ZERO; n];
    for step in 0..size {
        if step > 0 {
            // odometer increment; add row i once per digit change
            let mut i = 0;
            loop {
                digits[i] += 1;
                if (digits[i] as u64) < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            for t in 0..=i {
                let d = digits[t];
                // digit t moved from d - 1 (or q - 1 when wrapping to 0) to d
                let prev = if d == 0 { q as u8 - 1 } else { d - 1 };
                let delta = field.sub(Fe(d), Fe(prev));
                for (x, &r) in word.iter_mut().zip(&basis.rows()[t]) {
                    *x = field.add(*x, field.mul(delta, r));
                }
            }
        }
        dist[hamming_weight(&word)] += 1;
    }
    Ok(dist)
}

/// Smallest nonzero weight, or `None` for the zero code.
pub fn min_distance_bruteforce(g: &Matrix, cap: u64) -> Result<Option<usize>> {
    let dist = weight_distribution_bruteforce(g, cap)?;
    Ok(dist.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map(|(i, _)| i))
}
