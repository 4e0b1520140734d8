//! Factorization over GF(q): square-free decomposition, distinct-degree
//! splitting, then equal-degree splitting (Cantor-Zassenhaus) driven by a
//! fixed-seed generator so the output never depends on run or platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Fe, Field};
use super::poly::Poly;
use crate::error::{Error, Result};

const SPLIT_SEED: u64 = 0x51f7_3c0d_e5ee_d001;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fe,
    /// Monic irreducible factors with multiplicities, in canonical order.
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    /// unit * prod factor^mult.
    pub fn product(&self, field: Field) -> Poly {
        let mut acc = Poly::constant(field, self.unit);
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(f);
            }
        }
        acc
    }

    /// Number of monic divisors, prod (e_i + 1).
    pub fn divisor_count(&self) -> usize {
        self.factors.iter().map(|(_, e)| e + 1).product()
    }

    /// Every monic divisor, in canonical order.
    pub fn divisors(&self, field: Field) -> Vec<Poly> {
        let mut out = vec![Poly::one(field)];
        for (f, e) in &self.factors {
            let mut next = Vec::with_capacity(out.len() * (e + 1));
            for d in &out {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..*e {
                    cur = cur.mul(f);
                    next.push(cur.clone());
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

/// Factors a nonzero polynomial into monic irreducibles.
pub fn factor(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::precondition("cannot factor the zero polynomial"));
    }
    let unit = f.leading();
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut factors = Vec::new();
    for (part, mult) in square_free(&monic) {
        for (block, d) in distinct_degree(&part) {
            for irr in equal_degree(&block, d, &mut rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort();
    debug_assert!(factors.windows(2).all(|w| w[0].0 != w[1].0));
    Ok(Factorization { unit, factors })
}

/// Factorization of x^m - a.
pub fn binomial_factor(field: Field, m: usize, a: Fe) -> Result<Factorization> {
    if a.is_zero() {
        return Err(Error::InvalidShiftConstant);
    }
    if m == 0 {
        return Err(Error::precondition("block length must be positive"));
    }
    factor(&Poly::binomial(field, m, a))
}

fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.characteristic() as usize;
    let root_exp = (field.q() as u64) / p as u64;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| field.pow(c, root_exp))
        .collect();
    Poly::new(field, coeffs)
}

/// Square-free decomposition of a monic polynomial: pairwise coprime
/// square-free parts with their multiplicities.
fn square_free(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let p = field.characteristic() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y).unwrap();
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w).unwrap();
        i += 1;
    }
    if !c.is_one() {
        let root = pth_root(&c);
        for (g, j) in square_free(&root) {
            out.push((g, j * p));
        }
    }
    out
}

fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.q() as u64;
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest).unwrap();
    let mut d = 1;
    while rest.deg0() >= 2 * d {
        h = h.pow_mod(q, &rest).unwrap();
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.exact_div(&g).unwrap();
            h = h.rem(&rest).unwrap();
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg0() > 0 {
        let deg = rest.deg0();
        out.push((rest, deg));
    }
    out
}

fn random_poly(field: Field, below: usize, rng: &mut ChaCha8Rng) -> Poly {
    let q = field.q();
    Poly::new(
        field,
        (0..below).map(|_| Fe(rng.gen_range(0..q))).collect(),
    )
}

fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg0();
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let q = field.q() as u64;
    loop {
        let a = random_poly(field, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if field.characteristic() == 2 {
            // trace map a + a^2 + ... + a^(2^(e*d - 1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..(field.degree() as usize * d) {
                t = t.mul_mod(&t, f).unwrap();
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^((q^d - 1)/2) = (prod_i a^(q^i))^((q - 1)/2)
            let mut t = a.clone();
            let mut norm = a.clone();
            for _ in 1..d {
                t = t.pow_mod(q, f).unwrap();
                norm = norm.mul_mod(&t, f).unwrap();
            }
            norm.pow_mod((q - 1) / 2, f).unwrap().sub(&Poly::one(field))
        };
        let g = f.gcd(&b);
        let gd = g.deg0();
        if gd > 0 && gd < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.exact_div(&g).unwrap(), d, rng));
            return out;
        }
    }
}

/// Rabin-style irreducibility test: no factor of degree <= deg/2 and
/// x^(q^n) = x mod f.
pub fn is_irreducible(f: &Poly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let field = f.field();
    let q = field.q() as u64;
    let x = Poly::x(field);
    let mut h = x.rem(f).unwrap();
    for d in 1..=n {
        h = h.pow_mod(q, f).unwrap();
        if d <= n / 2 && !f.gcd(&h.sub(&x)).is_one() {
            return false;
        }
    }
    h == x.rem(f).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fld(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn x13_minus_1_over_gf2() {
        let f = fld(2);
        let fac = binomial_factor(f, 13, Fe::ONE).unwrap();
        let degs: Vec<_> = fac.factors.iter().map(|(p, e)| (p.deg0(), *e)).collect();
        assert_eq!(degs, vec![(1, 1), (12, 1)]);
        assert_eq!(fac.factors[0].0, Poly::from_indices(f, &[1, 1]));
        assert_eq!(fac.product(f), Poly::binomial(f, 13, Fe::ONE));
    }

    #[test]
    fn x4_minus_1_over_gf3() {
        let f = fld(3);
        let fac = binomial_factor(f, 4, Fe::ONE).unwrap();
        let want = vec![
            (Poly::from_indices(f, &[1, 1]), 1),
            (Poly::from_indices(f, &[2, 1]), 1),
            (Poly::from_indices(f, &[1, 0, 1]), 1),
        ];
        assert_eq!(fac.factors, want);
        assert_eq!(fac.divisor_count(), 8);
    }

    #[test]
    fn x4_plus_1_over_gf3() {
        let f = fld(3);
        let fac = binomial_factor(f, 4, f.elem(2)).unwrap();
        assert_eq!(fac.product(f), Poly::from_indices(f, &[1, 0, 0, 0, 1]));
        assert_eq!(
            fac.factors,
            vec![
                (Poly::from_indices(f, &[2, 1, 1]), 1),
                (Poly::from_indices(f, &[2, 2, 1]), 1)
            ]
        );
    }

    #[test]
    fn repeated_factors() {
        let f = fld(2);
        let fac = factor(&Poly::from_indices(f, &[0, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(Poly::x(f), 2)]);
        let fac = binomial_factor(f, 2, Fe::ONE).unwrap();
        assert_eq!(fac.factors, vec![(Poly::from_indices(f, &[1, 1]), 2)]);
        // x^6 - 1 over GF(3) = (x-1)^3 (x+1)^3
        let f3 = fld(3);
        let fac = binomial_factor(f3, 6, Fe::ONE).unwrap();
        assert_eq!(
            fac.factors,
            vec![
                (Poly::from_indices(f3, &[1, 1]), 3),
                (Poly::from_indices(f3, &[2, 1]), 3)
            ]
        );
    }

    #[test]
    fn zero_shift_constant_rejected() {
        assert_eq!(
            binomial_factor(fld(5), 4, Fe::ZERO).unwrap_err(),
            Error::InvalidShiftConstant
        );
    }

    #[test]
    fn unit_is_kept() {
        let f = fld(5);
        let poly = Poly::from_indices(f, &[1, 0, 3]);
        let fac = factor(&poly).unwrap();
        assert_eq!(fac.unit, f.elem(3));
        assert_eq!(fac.product(f), poly);
    }

    #[test]
    fn extension_fields_round_trip() {
        for q in [4u32, 8, 9] {
            let f = fld(q);
            for m in 1..=15 {
                for a in f.nonzero() {
                    let fac = binomial_factor(f, m, a).unwrap();
                    assert_eq!(fac.product(f), Poly::binomial(f, m, a), "q={q} m={m}");
                    assert!(fac.factors.iter().all(|(p, _)| is_irreducible(p) && p.is_monic()));
                }
            }
        }
    }
}
