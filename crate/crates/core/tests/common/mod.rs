#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtcodes::algebra::{binomial_factor, Fe, Field, Poly};
use qtcodes::linearcode::Matrix;
use qtcodes::qt::{QtForm, QtGeneratorSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_shift(rng: &mut ChaCha8Rng, field: Field) -> Fe {
    field.elem(rng.gen_range(1..field.q()))
}

/// Random monic divisor of x^m - a other than x^m - a itself.
pub fn random_divisor(rng: &mut ChaCha8Rng, field: Field, m: usize, a: Fe) -> Poly {
    let divs: Vec<Poly> = binomial_factor(field, m, a)
        .unwrap()
        .divisors(field)
        .into_iter()
        .filter(|d| d.deg0() < m)
        .collect();
    divs.choose(rng).unwrap().clone()
}

/// Random nonzero polynomial of degree below deg h and coprime to h.
pub fn random_coprime(rng: &mut ChaCha8Rng, h: &Poly) -> Poly {
    let field = h.field();
    assert!(h.deg0() > 0);
    loop {
        let v: Vec<Fe> = (0..h.deg0()).map(|_| field.elem(rng.gen_range(0..field.q()))).collect();
        let f = Poly::new(field, v);
        if !f.is_zero() && f.gcd(h).is_one() {
            return f;
        }
    }
}

/// q^k stays within 2^bits.
pub fn feasible(q: u32, k: usize, bits: f64) -> bool {
    k as f64 * (q as f64).log2() <= bits
}

/// A random two-generator spec in the theorem's shape (zero first block in
/// the second row) whose dimension keeps q^k within 2^bits.
pub fn random_two_gen(rng: &mut ChaCha8Rng, qs: &[u32], max_m: usize, max_ell: usize, bits: f64) -> QtGeneratorSpec {
    loop {
        let field = Field::new(*qs.choose(rng).unwrap()).unwrap();
        let m = rng.gen_range(2..=max_m);
        let ell = rng.gen_range(2..=max_ell);
        let a = random_shift(rng, field);
        let modulus = Poly::binomial(field, m, a);
        let form = *[QtForm::TwoGenP1, QtForm::TwoGenGeneral, QtForm::TwoGenIdentityG1]
            .choose(rng)
            .unwrap();
        let (g, p) = match form {
            QtForm::TwoGenIdentityG1 => {
                let g2 = random_divisor(rng, field, m, a);
                (Poly::one(field), g2)
            }
            QtForm::TwoGenP1 => (random_divisor(rng, field, m, a), Poly::one(field)),
            _ => {
                let g = random_divisor(rng, field, m, a);
                let h1 = modulus.exact_div(&g).unwrap();
                let ps: Vec<Poly> = binomial_factor(field, m, a)
                    .unwrap()
                    .divisors(field)
                    .into_iter()
                    .filter(|p| p.divides(&h1) && p.deg0() < h1.deg0())
                    .collect();
                (g, ps.choose(rng).unwrap().clone())
            }
        };
        if p.deg0() >= m || g.mul(&p).deg0() >= m {
            continue;
        }
        let h1 = modulus.exact_div(&g).unwrap();
        let h2 = modulus.exact_div(&g.mul(&p)).unwrap();
        if !feasible(field.q() as u32, h1.deg0() + h2.deg0(), bits) {
            continue;
        }
        let f1: Vec<Poly> = (0..ell).map(|_| random_coprime(rng, &h1)).collect();
        let mut f2: Vec<Poly> = (0..ell).map(|_| random_coprime(rng, &h2)).collect();
        f2[0] = Poly::zero(field);
        return QtGeneratorSpec {
            form,
            field,
            m,
            ell,
            a,
            g,
            p,
            f1,
            f2,
        };
    }
}

pub fn random_one_gen(rng: &mut ChaCha8Rng, qs: &[u32], max_m: usize, max_ell: usize, bits: f64) -> QtGeneratorSpec {
    loop {
        let field = Field::new(*qs.choose(rng).unwrap()).unwrap();
        let m = rng.gen_range(2..=max_m);
        let ell = rng.gen_range(1..=max_ell);
        let a = random_shift(rng, field);
        let g = random_divisor(rng, field, m, a);
        let h = Poly::binomial(field, m, a).exact_div(&g).unwrap();
        if !feasible(field.q() as u32, h.deg0(), bits) {
            continue;
        }
        let f: Vec<Poly> = (0..ell).map(|_| random_coprime(rng, &h)).collect();
        return QtGeneratorSpec::one_gen(field, m, a, g, f);
    }
}

/// Random k x n generator matrix (possibly rank deficient).
pub fn random_matrix(rng: &mut ChaCha8Rng, field: Field, k: usize, n: usize) -> Matrix {
    let rows = (0..k)
        .map(|_| (0..n).map(|_| field.elem(rng.gen_range(0..field.q()))).collect())
        .collect();
    Matrix::new(field, n, rows)
}

/// Weight distribution by enumerating every combination of the rows of a
/// full-rank matrix.
pub fn enumerate_weights(g: &Matrix) -> Vec<u64> {
    let field = g.field();
    let q = field.q() as u64;
    let rows = g.rows();
    let k = rows.len();
    let n = g.n();
    let mut dist = vec![0u64; n + 1];
    let total = q.pow(k as u32);
    for idx in 0..total {
        let mut t = idx;
        let mut word = vec![Fe::ZERO; n];
        for row in rows {
            let c = field.elem((t % q) as u8);
            t /= q;
            if c.is_zero() {
                continue;
            }
            for (w, &x) in word.iter_mut().zip(row) {
                *w = field.add(*w, field.mul(c, x));
            }
        }
        dist[word.iter().filter(|x| !x.is_zero()).count()] += 1;
    }
    dist
}

fn binom(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Weight distribution of a code from the distribution of its dual.
pub fn dual_transform(dual: &[u64], n: usize, q: u64) -> Vec<u64> {
    let size: i128 = dual.iter().map(|&x| x as i128).sum();
    (0..=n)
        .map(|w| {
            let mut s: i128 = 0;
            for (i, &b) in dual.iter().enumerate() {
                let mut kw: i128 = 0;
                for j in 0..=w {
                    let term = binom(i, j) * binom(n - i, w - j) * (q as i128 - 1).pow((w - j) as u32);
                    kw += if j % 2 == 0 { term } else { -term };
                }
                s += kw * b as i128;
            }
            assert_eq!(s % size, 0);
            (s / size) as u64
        })
        .collect()
}
