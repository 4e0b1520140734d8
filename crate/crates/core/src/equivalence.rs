//! Grouping of constacyclic codes into equivalence classes.
//!
//! The multiplier mode joins two generators when one is carried to the other
//! by a ring automorphism of GF(q)[x]/(x^m - a) that acts on coordinates as a
//! monomial map: x -> x^s with gcd(s, m) = 1 and a^s = a, and the Frobenius
//! map on coefficients when it fixes a. The refined mode further splits every
//! class by (k, d, leading weight-distribution entries).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{Fe, Field, Poly};
use crate::constacyclic::{enumerate, ConstacyclicCode};
use crate::distance::weight_distribution_bruteforce;
use crate::error::{Error, Result};
use crate::linearcode::Matrix;

/// Largest codeword count enumerated for an invariant key.
const INVARIANT_CAP: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionMode {
    Multiplier,
    Refined,
}

impl std::str::FromStr for PartitionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<PartitionMode> {
        match s {
            "multiplier" => Ok(PartitionMode::Multiplier),
            "refined" => Ok(PartitionMode::Refined),
            _ => Err(Error::FormatError(format!("unknown partition mode {s:?}"))),
        }
    }
}

/// (k, d, first three (weight, count) pairs of nonzero weights).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InvariantKey {
    pub k: usize,
    pub d: Option<usize>,
    pub prefix: Vec<(usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivClass {
    pub members: Vec<Poly>,
    pub representative: Poly,
    pub invariant_key: Option<InvariantKey>,
}

/// Generator of the image of <g> under x -> x^s.
fn multiplier_image(g: &Poly, s: usize, modulus: &Poly) -> Poly {
    let img = g.compose_power(s).rem(modulus).expect("nonzero modulus");
    img.gcd(modulus)
}

/// Exponents s in [1, m * ord(a)) with gcd(s, m) = 1 and s = 1 mod ord(a).
fn multipliers(field: Field, m: usize, a: Fe) -> Result<Vec<usize>> {
    let r = field.order(a)? as usize;
    Ok((1..m * r)
        .filter(|&s| s % r == 1 % r && gcd(s, m) == 1)
        .collect())
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        // smaller index becomes the root so classes list in input order
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

/// Partitions codes sharing (field, m, a) into disjoint covering classes.
pub fn partition(codes: &[ConstacyclicCode], mode: PartitionMode) -> Result<Vec<EquivClass>> {
    let Some(first) = codes.first() else {
        return Ok(Vec::new());
    };
    let (field, m, a) = (first.field(), first.m(), first.a());
    if codes.iter().any(|c| c.field() != field || c.m() != m || c.a() != a) {
        return Err(Error::MixedInput);
    }
    let modulus = first.modulus();
    let index: HashMap<&Poly, usize> = codes.iter().enumerate().map(|(i, c)| (c.g(), i)).collect();
    let mut parent: Vec<usize> = (0..codes.len()).collect();
    let frob_ok = field.frobenius(a) == a && !field.is_prime();
    let mults = multipliers(field, m, a)?;
    for (i, c) in codes.iter().enumerate() {
        for &s in &mults {
            if let Some(&j) = index.get(&multiplier_image(c.g(), s, &modulus)) {
                union(&mut parent, i, j);
            }
        }
        if frob_ok {
            let img = c.g().map_coeffs(|x| field.frobenius(x));
            if let Some(&j) = index.get(&img) {
                union(&mut parent, i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..codes.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in groups.into_values() {
        match mode {
            PartitionMode::Multiplier => out.push(make_class(codes, &members, None)),
            PartitionMode::Refined => {
                let mut split: BTreeMap<InvariantKey, Vec<usize>> = BTreeMap::new();
                for &i in &members {
                    split.entry(invariant_key(&codes[i])?).or_default().push(i);
                }
                for (key, ms) in split {
                    out.push(make_class(codes, &ms, Some(key)));
                }
            }
        }
    }
    out.sort_by(|x, y| x.representative.cmp(&y.representative));
    Ok(out)
}

fn make_class(codes: &[ConstacyclicCode], idx: &[usize], key: Option<InvariantKey>) -> EquivClass {
    let mut members: Vec<Poly> = idx.iter().map(|&i| codes[i].g().clone()).collect();
    members.sort();
    EquivClass {
        representative: members[0].clone(),
        members,
        invariant_key: key,
    }
}

/// Weight distribution of the code, from whichever of the code and its dual
/// has fewer codewords.
pub fn weight_distribution(g: &Matrix) -> Result<Vec<u64>> {
    let k = g.rank();
    if 2 * k <= g.n() {
        weight_distribution_bruteforce(&g.echelon().basis, INVARIANT_CAP)
    } else {
        let dual = weight_distribution_bruteforce(&g.dual(), INVARIANT_CAP)?;
        macwilliams(&dual, g.n(), g.field().q() as u64)
    }
}

/// Weight distribution of C from that of its dual.
pub fn macwilliams(dual: &[u64], n: usize, q: u64) -> Result<Vec<u64>> {
    let overflow = || Error::OracleScaleExceeded("MacWilliams transform overflow".into());
    let binom = |a: usize, b: usize| -> i128 {
        if b > a {
            return 0;
        }
        (0..b).fold(1i128, |acc, i| acc * (a - i) as i128 / (i + 1) as i128)
    };
    let size: i128 = dual.iter().map(|&x| x as i128).sum();
    let q = q as i128;
    let mut out = Vec::with_capacity(n + 1);
    for w in 0..=n {
        let mut total: i128 = 0;
        for (i, &b) in dual.iter().enumerate() {
            if b == 0 {
                continue;
            }
            // Krawtchouk K_w(i)
            let mut k: i128 = 0;
            for j in 0..=w.min(i) {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let pw = (q - 1).checked_pow((w - j) as u32).ok_or_else(overflow)?;
                let term = binom(i, j)
                    .checked_mul(binom(n - i, w - j))
                    .and_then(|t| t.checked_mul(pw))
                    .ok_or_else(overflow)?;
                k = k.checked_add(sign * term).ok_or_else(overflow)?;
            }
            total = total
                .checked_add(k.checked_mul(b as i128).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        if total % size != 0 || total < 0 {
            return Err(Error::precondition("MacWilliams transform is not integral"));
        }
        out.push((total / size) as u64);
    }
    Ok(out)
}

/// Invariant key of a constacyclic code; weights that cannot be enumerated
/// within the cap leave `d` and the prefix empty.
pub fn invariant_key(code: &ConstacyclicCode) -> Result<InvariantKey> {
    let g = code.generator_matrix();
    match weight_distribution(&g) {
        Ok(dist) => {
            let nz: Vec<(usize, u64)> = dist
                .iter()
                .enumerate()
                .skip(1)
                .filter(|(_, &c)| c > 0)
                .map(|(w, &c)| (w, c))
                .collect();
            Ok(InvariantKey {
                k: code.k(),
                d: nz.first().map(|x| x.0),
                prefix: nz.into_iter().take(3).collect(),
            })
        }
        Err(Error::OracleScaleExceeded(_)) => Ok(InvariantKey {
            k: code.k(),
            d: None,
            prefix: Vec::new(),
        }),
        Err(e) => Err(e),
    }
}

type CacheKey = (u8, usize, u8, Option<usize>, PartitionMode);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Vec<EquivClass>>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Vec<EquivClass>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Classes of all nonzero codes of length m (optionally of dimension k),
/// computed once per argument tuple.
pub fn classes_for(
    field: Field,
    m: usize,
    a: Fe,
    k_filter: Option<usize>,
    mode: PartitionMode,
) -> Result<Arc<Vec<EquivClass>>> {
    let key = (field.q(), m, a.index(), k_filter, mode);
    if let Some(hit) = cache().lock().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let codes = enumerate(field, m, a, k_filter)?;
    let classes = Arc::new(partition(&codes, mode)?);
    cache()
        .lock()
        .expect("cache lock")
        .insert(key, classes.clone());
    Ok(classes)
}

/// Longest code length accepted by the exhaustive oracle.
pub const EXHAUSTIVE_MAX_N: usize = 12;

/// Whether some coordinate permutation, column scaling and field
/// automorphism maps the row space of `c1` onto that of `c2`.
pub fn are_equivalent_exhaustive(c1: &Matrix, c2: &Matrix) -> Result<bool> {
    let n = c1.n();
    if n > EXHAUSTIVE_MAX_N || c2.n() > EXHAUSTIVE_MAX_N {
        return Err(Error::OracleScaleExceeded(format!(
            "length {} exceeds {EXHAUSTIVE_MAX_N}",
            n.max(c2.n())
        )));
    }
    if c1.field() != c2.field() {
        return Err(Error::FieldMismatch("codes over different fields".into()));
    }
    let field = c1.field();
    let b1 = c1.echelon().basis;
    let b2 = c2.echelon().basis;
    if n != c2.n() || b1.num_rows() != b2.num_rows() {
        return Ok(false);
    }
    if b1.num_rows() == 0 {
        return Ok(true);
    }
    let w1 = weight_distribution(&b1).ok();
    let prof1 = column_profiles(&b1);
    let mut sigma_pow = Vec::new();
    let mut cur: Vec<Fe> = field.elements().collect();
    for _ in 0..field.degree() {
        sigma_pow.push(cur.clone());
        cur = cur.iter().map(|&x| field.frobenius(x)).collect();
    }
    for map in sigma_pow {
        let rows: Vec<Vec<Fe>> = b2
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| map[x.index() as usize]).collect())
            .collect();
        let t2 = Matrix::new(field, n, rows);
        if w1.is_some() && weight_distribution(&t2).ok() != w1 {
            continue;
        }
        let prof2 = column_profiles(&t2);
        let mut search = MonomialSearch {
            field,
            a: &b1,
            b: &t2,
            prof_a: &prof1,
            prof_b: &prof2,
            used: vec![false; n],
            cols_a: Vec::new(),
            cols_b: Vec::new(),
        };
        if search.extend(0) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Per-coordinate invariant: weight histogram of the codewords nonzero there.
fn column_profiles(b: &Matrix) -> Option<Vec<Vec<u64>>> {
    let field = b.field();
    let q = field.q() as u64;
    let k = b.num_rows();
    let n = b.n();
    let total = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(q)).filter(|&t| t <= 1 << 18)?;
    let mut prof = vec![vec![0u64; n + 1]; n];
    for code in 0..total {
        let mut t = code;
        let coeffs: Vec<Fe> = (0..k)
            .map(|_| {
                let d = (t % q) as u8;
                t /= q;
                Fe(d)
            })
            .collect();
        let word = b.combine(&coeffs);
        let wt = word.iter().filter(|x| !x.is_zero()).count();
        for (j, x) in word.iter().enumerate() {
            if !x.is_zero() {
                prof[j][wt] += 1;
            }
        }
    }
    Some(prof)
}

struct MonomialSearch<'a> {
    field: Field,
    a: &'a Matrix,
    b: &'a Matrix,
    prof_a: &'a Option<Vec<Vec<u64>>>,
    prof_b: &'a Option<Vec<Vec<u64>>>,
    used: Vec<bool>,
    /// Assigned columns of `a`, already scaled.
    cols_a: Vec<Vec<Fe>>,
    cols_b: Vec<Vec<Fe>>,
}

impl MonomialSearch<'_> {
    fn column(m: &Matrix, j: usize) -> Vec<Fe> {
        m.rows().iter().map(|r| r[j]).collect()
    }

    fn consistent(&self) -> bool {
        let t = self.cols_a.len();
        let k = self.a.num_rows();
        let pa: Vec<Vec<Fe>> = (0..k).map(|i| (0..t).map(|c| self.cols_a[c][i]).collect()).collect();
        let pb: Vec<Vec<Fe>> = (0..k).map(|i| (0..t).map(|c| self.cols_b[c][i]).collect()).collect();
        let ea = Matrix::new(self.field, t, pa).echelon().basis;
        let eb = Matrix::new(self.field, t, pb).echelon().basis;
        ea == eb
    }

    /// Maps column `j` of `a` onto some unused column of `b`.
    fn extend(&mut self, j: usize) -> bool {
        let n = self.a.n();
        if j == n {
            return true;
        }
        let col = Self::column(self.a, j);
        for target in 0..n {
            if self.used[target] {
                continue;
            }
            if let (Some(pa), Some(pb)) = (self.prof_a, self.prof_b) {
                if pa[j] != pb[target] {
                    continue;
                }
            }
            self.used[target] = true;
            self.cols_b.push(Self::column(self.b, target));
            // a global scalar fixes the first column's multiplier
            let scales: Vec<Fe> = if j == 0 {
                vec![Fe::ONE]
            } else {
                self.field.nonzero().collect()
            };
            for lam in scales {
                self.cols_a.push(col.iter().map(|&x| self.field.mul(lam, x)).collect());
                if self.consistent() && self.extend(j + 1) {
                    return true;
                }
                self.cols_a.pop();
            }
            self.cols_b.pop();
            self.used[target] = false;
        }
        false
    }
}
