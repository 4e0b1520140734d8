//! Cheap upper bounds from random systematic forms.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::kernel::Kernel;
use crate::algebra::Fe;
use crate::error::{Error, Result};
use crate::linearcode::{hamming_weight, Matrix};

/// Lightest codeword seen over `rounds` random information sets, expanding
/// messages of weight at most 2 in each. Returns the weight and the codeword.
pub fn upper_bound_probe(g: &Matrix, rounds: usize, seed: u64) -> Result<(usize, Vec<Fe>)> {
    let basis = g.echelon().basis;
    let k = basis.num_rows();
    if k == 0 {
        return Err(Error::ZeroCode);
    }
    let mut best = basis
        .rows()
        .iter()
        .min_by_key(|r| hamming_weight(r))
        .cloned()
        .unwrap();
    let mut best_wt = hamming_weight(&best);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..g.n()).collect();
    for _ in 0..rounds {
        order.shuffle(&mut rng);
        let form = basis.echelon_in_order(&order).basis;
        let kern = Kernel::new(&form);
        for w in 1..=k.min(2) {
            if let Some(hit) = kern.level(w, false).best {
                if hit.weight < best_wt {
                    let mut coeffs = vec![Fe::ZERO; k];
                    for (i, c) in hit.combo {
                        coeffs[i] = c;
                    }
                    best = form.combine(&coeffs);
                    best_wt = hit.weight;
                }
            }
        }
    }
    Ok((best_wt, best))
}
