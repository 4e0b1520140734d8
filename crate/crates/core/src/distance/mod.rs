//! Minimum distance and weight distributions.
//!
//! [`min_distance`] is an information-set enumerator in the
//! Brouwer-Zimmermann style. The code is brought into systematic form on a
//! sequence of pairwise disjoint column sets; after every message of weight
//! `<= w_j` has been expanded in form `j`, any codeword not yet seen has weight
//! at least `sum_j max(0, w_j + 1 - (k - r_j))`, with `r_j` the rank on the
//! `j`-th column set. The search stops once that bound meets the lightest
//! codeword found so far.

mod brute;
mod checkpoint;
mod kernel;
mod probe;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use brute::{min_distance_bruteforce, weight_distribution_bruteforce, DEFAULT_ORACLE_BUDGET};
pub use checkpoint::{code_fingerprint, Checkpoint};
pub use probe::upper_bound_probe;

use crate::algebra::Fe;
use crate::error::{Error, Result};
use crate::linearcode::{hamming_weight, DistanceStatus, Matrix};
use kernel::{level_size, Kernel};

/// Candidate-codeword budgets for the two verification tiers.
pub const QUICK_BUDGET: u64 = 100_000_000;
pub const EXTENDED_BUDGET: u64 = 100_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    /// Stopped by the wall-clock cap.
    Bounded,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct DistanceResult {
    pub status: Status,
    pub lower: usize,
    pub upper: usize,
    pub witness: Option<Vec<Fe>>,
    /// Candidate codewords enumerated (including any resumed work).
    pub work: u64,
    pub elapsed: Duration,
    /// Resume point; `levels[j]` is the highest fully enumerated message
    /// weight in information set `j`.
    pub checkpoint: Checkpoint,
}

impl DistanceResult {
    pub fn d_status(&self) -> DistanceStatus {
        DistanceStatus::bounded(self.lower, self.upper).unwrap_or(DistanceStatus::Unknown)
    }

    pub fn exact(&self) -> Option<usize> {
        (self.status == Status::Exact).then_some(self.upper)
    }
}

#[derive(Clone, Debug)]
pub struct DistanceOptions {
    /// Maximum number of candidate codewords (cumulative across resumes).
    pub budget: u64,
    pub time_limit: Option<Duration>,
    /// `None` uses the ambient rayon pool, `Some(1)` runs on the calling thread.
    pub threads: Option<usize>,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions {
            budget: QUICK_BUDGET,
            time_limit: None,
            threads: Some(1),
        }
    }
}

impl DistanceOptions {
    pub fn with_budget(budget: u64) -> Self {
        DistanceOptions {
            budget,
            ..Default::default()
        }
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }
}

/// One systematic form of the code.
struct InfoSet {
    kernel: Kernel,
    basis: Matrix,
    rank: usize,
}

/// Systematic forms on greedily chosen disjoint column sets.
fn information_sets(g: &Matrix) -> Vec<InfoSet> {
    let n = g.n();
    let mut used = vec![false; n];
    let mut out = Vec::new();
    loop {
        let mut order: Vec<usize> = (0..n).filter(|&c| !used[c]).collect();
        if order.is_empty() {
            break;
        }
        order.extend((0..n).filter(|&c| used[c]));
        let ech = g.echelon_in_order(&order);
        let fresh: Vec<usize> = ech.pivots.iter().copied().filter(|&c| !used[c]).collect();
        if fresh.is_empty() {
            break;
        }
        for &c in &fresh {
            used[c] = true;
        }
        out.push(InfoSet {
            kernel: Kernel::new(&ech.basis),
            rank: fresh.len(),
            basis: ech.basis,
        });
    }
    out
}

fn lower_bound(sets: &[InfoSet], levels: &[usize], k: usize) -> usize {
    sets.iter()
        .zip(levels)
        .map(|(s, &w)| (w + 1).saturating_sub(k - s.rank))
        .sum()
}

/// Exact or budget-bounded minimum distance of the code spanned by `g`.
pub fn min_distance(g: &Matrix, opts: &DistanceOptions) -> Result<DistanceResult> {
    min_distance_resume(g, opts, None)
}

/// Like [`min_distance`], continuing from a checkpoint of an earlier run on
/// the same code.
pub fn min_distance_resume(
    g: &Matrix,
    opts: &DistanceOptions,
    resume: Option<&Checkpoint>,
) -> Result<DistanceResult> {
    match opts.threads {
        Some(t) if t > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Io(e.to_string()))?;
            pool.install(|| run(g, opts, resume, true))
        }
        Some(_) => run(g, opts, resume, false),
        None => run(g, opts, resume, true),
    }
}

fn run(
    g: &Matrix,
    opts: &DistanceOptions,
    resume: Option<&Checkpoint>,
    parallel: bool,
) -> Result<DistanceResult> {
    let start = Instant::now();
    let basis = g.echelon().basis;
    let k = basis.num_rows();
    if k == 0 {
        return Err(Error::ZeroCode);
    }
    let q = g.field().q();
    let fingerprint = code_fingerprint(g);
    let sets = information_sets(&basis);

    let mut levels = vec![0usize; sets.len()];
    let mut upper = usize::MAX;
    let mut witness: Option<Vec<Fe>> = None;
    let mut work = 0u64;
    if let Some(cp) = resume {
        if cp.code_id != fingerprint || cp.levels.len() != sets.len() {
            return Err(Error::precondition("checkpoint belongs to a different code"));
        }
        levels.clone_from(&cp.levels);
        work = cp.work;
        if let Some(w) = &cp.witness {
            if w.len() != g.n() || !basis.echelon().contains(w) || hamming_weight(w) == 0 {
                return Err(Error::precondition("checkpoint witness is not a codeword"));
            }
            upper = hamming_weight(w);
            witness = Some(w.clone());
        }
    }
    // every basis row is a codeword; start from the lightest one
    for row in basis.rows() {
        let wt = hamming_weight(row);
        if wt < upper {
            upper = wt;
            witness = Some(row.clone());
        }
    }

    let finish = |status, lower: usize, upper: usize, witness, work, levels: Vec<usize>| {
        Ok(DistanceResult {
            status,
            lower: lower.min(upper),
            upper,
            witness,
            work,
            elapsed: start.elapsed(),
            checkpoint: Checkpoint {
                code_id: fingerprint.clone(),
                levels,
                work,
                witness: None,
            },
        })
        .map(|mut r: DistanceResult| {
            r.checkpoint.witness = r.witness.clone();
            r
        })
    };

    for w in 1..=k {
        for (j, set) in sets.iter().enumerate() {
            let lower = lower_bound(&sets, &levels, k);
            if lower >= upper {
                return finish(Status::Exact, lower, upper, witness, work, levels);
            }
            if levels[j] >= w {
                continue;
            }
            // forms whose rank deficit swallows this level cannot raise the bound
            if w < k - set.rank {
                continue;
            }
            // a rank-deficient form enters late and catches up on the
            // levels it skipped; the bound needs all of them
            for lvl in levels[j] + 1..=w {
                let size = level_size(k, lvl, q);
                if (work as u128).saturating_add(size) > opts.budget as u128 {
                    return finish(Status::BudgetExhausted, lower, upper, witness, work, levels);
                }
                if opts.time_limit.is_some_and(|t| start.elapsed() >= t) {
                    return finish(Status::Bounded, lower, upper, witness, work, levels);
                }
                let res = set.kernel.level(lvl, parallel);
                work += res.count;
                levels[j] = lvl;
                if let Some(hit) = res.best {
                    if hit.weight < upper {
                        let mut coeffs = vec![Fe::ZERO; k];
                        for (i, c) in hit.combo {
                            coeffs[i] = c;
                        }
                        let word = set.basis.combine(&coeffs);
                        debug_assert_eq!(hamming_weight(&word), hit.weight);
                        upper = hit.weight;
                        witness = Some(word);
                    }
                }
            }
        }
    }
    // every message of every weight has been expanded in a full-rank form
    let lower = upper;
    finish(Status::Exact, lower, upper, witness, work, levels)
}

/// Hamming weight of `word` after checking it is a codeword of `g`.
pub fn witness_weight(g: &Matrix, word: &[Fe]) -> Result<usize> {
    if word.len() != g.n() || !g.contains(word) {
        return Err(Error::NotACodeword);
    }
    Ok(hamming_weight(word))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn hamming74() -> Matrix {
        Matrix::from_indices(
            Field::new(2).unwrap(),
            &[
                vec![1, 0, 0, 0, 1, 1, 0],
                vec![0, 1, 0, 0, 1, 0, 1],
                vec![0, 0, 1, 0, 0, 1, 1],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
        )
    }

    #[test]
    fn hamming_distance() {
        let r = min_distance(&hamming74(), &DistanceOptions::default()).unwrap();
        assert_eq!(r.status, Status::Exact);
        assert_eq!((r.lower, r.upper), (3, 3));
        assert_eq!(hamming_weight(r.witness.as_ref().unwrap()), 3);
        let ext = min_distance(&hamming74().extend(), &DistanceOptions::default()).unwrap();
        assert_eq!(ext.exact(), Some(4));
    }

    #[test]
    fn zero_code() {
        let g = Matrix::from_indices(Field::new(3).unwrap(), &[vec![0, 0, 0]]);
        assert_eq!(
            min_distance(&g, &DistanceOptions::default()).unwrap_err(),
            Error::ZeroCode
        );
    }

    #[test]
    fn full_space_has_distance_one() {
        let g = Matrix::identity(Field::new(5).unwrap(), 6);
        assert_eq!(min_distance(&g, &DistanceOptions::default()).unwrap().exact(), Some(1));
    }

    #[test]
    fn witness_weight_checks_membership() {
        let h = hamming74();
        assert_eq!(witness_weight(&h, &h.rows()[3]).unwrap(), 4);
        assert_eq!(witness_weight(&h, &[Fe::ZERO; 7]).unwrap(), 0);
        let mut bad = h.rows()[0].clone();
        bad[6] = Fe::ONE;
        assert_eq!(witness_weight(&h, &bad).unwrap_err(), Error::NotACodeword);
    }

    #[test]
    fn tiny_budget_reports_exhaustion() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f = Field::new(3).unwrap();
        let rows: Vec<Vec<u8>> = (0..12)
            .map(|_| (0..30).map(|_| rng.gen_range(0..3)).collect())
            .collect();
        let g = Matrix::from_indices(f, &rows);
        assert_eq!(g.rank(), 12);
        let r = min_distance(&g, &DistanceOptions::with_budget(10)).unwrap();
        assert_eq!(r.status, Status::BudgetExhausted);
        assert!(r.lower <= r.upper);
        assert_eq!(hamming_weight(r.witness.as_ref().unwrap()), r.upper);
    }

    #[test]
    fn agrees_with_exhaustive_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..150 {
            let q = [2u32, 3, 4, 5, 7][trial % 5];
            let f = Field::new(q).unwrap();
            let k = rng.gen_range(1..=6);
            let n = rng.gen_range(k..=2 * k + 3);
            let rows: Vec<Vec<u8>> = (0..k)
                .map(|_| (0..n).map(|_| rng.gen_range(0..q as u8)).collect())
                .collect();
            let g = Matrix::from_indices(f, &rows);
            if g.rank() == 0 {
                continue;
            }
            let want = min_distance_bruteforce(&g, 1 << 20).unwrap();
            let got = min_distance(&g, &DistanceOptions::default()).unwrap();
            assert_eq!(got.exact(), want, "trial {trial}: q={q} n={n} k={k}");
        }
    }
}
