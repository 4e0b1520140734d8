use std::cmp::Ordering;
use std::fmt;

use super::field::{Fe, Field};
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients in ascending degree, no
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_indices(field: Field, idx: &[u8]) -> Poly {
        Poly::new(field, idx.iter().map(|&i| field.elem(i)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn constant(field: Field, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn x(field: Field) -> Poly {
        Poly::monomial(field, Fe::ONE, 1)
    }

    pub fn monomial(field: Field, c: Fe, degree: usize) -> Poly {
        let mut v = vec![Fe::ZERO; degree + 1];
        v[degree] = c;
        Poly::new(field, v)
    }

    /// x^m - a.
    pub fn binomial(field: Field, m: usize, a: Fe) -> Poly {
        let mut v = vec![Fe::ZERO; m + 1];
        v[m] = Fe::ONE;
        v[0] = field.sub(v[0], a);
        Poly::new(field, v)
    }

    /// Coefficient vector of length `len` (zero padded). Panics if the
    /// polynomial does not fit.
    pub fn to_vec(&self, len: usize) -> Vec<Fe> {
        assert!(self.coeffs.len() <= len, "polynomial does not fit in {len} slots");
        let mut v = self.coeffs.clone();
        v.resize(len, Fe::ZERO);
        v
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// Degree; `None` for the zero polynomial, which orders below every `Some`.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; for sizes and loop bounds.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    fn same_field(&self, other: &Poly) {
        assert!(
            self.field == other.field,
            "polynomials over {} and {} cannot be combined",
            self.field,
            other.field
        );
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).unwrap();
        self.scale(inv)
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&x| f.neg(x)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            f,
            (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Quotient and remainder with `deg(rem) < deg(divisor)`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(divisor);
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field;
        let dl = divisor.coeffs.len();
        if self.coeffs.len() < dl {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Fe::ZERO; rem.len() - dl + 1];
        for top in (dl - 1..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            let shift = top + 1 - dl;
            quo[shift] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, d));
            }
        }
        rem.truncate(dl - 1);
        Ok((Poly::new(f, quo), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; `NotADivisor` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotADivisor)
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*self + t*other = g, g monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        self.same_field(other);
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = f.inv(r0.leading()).unwrap();
        (r0.scale(c), s0.scale(c), t0.scale(c))
    }

    /// Inverse modulo `modulus`, if it exists.
    pub fn inv_mod(&self, modulus: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(modulus).ok()?.ext_gcd(modulus);
        if g.is_one() {
            s.rem(modulus).ok()
        } else {
            None
        }
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Result<Poly> {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Result<Poly> {
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(self.field).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus)?;
            }
            base = base.mul_mod(&base, modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        let p = f.characteristic() as usize;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| {
                // i * c as repeated addition in characteristic p
                let mut acc = Fe::ZERO;
                for _ in 0..(i % p) {
                    acc = f.add(acc, c);
                }
                acc
            })
            .collect();
        Poly::new(f, coeffs)
    }

    /// Substitutes x -> x^s.
    pub fn compose_power(&self, s: usize) -> Poly {
        let mut v = vec![Fe::ZERO; self.deg0() * s + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * s] = c;
        }
        Poly::new(self.field, v)
    }

    /// Applies a coefficient map, e.g. a field automorphism.
    pub fn map_coeffs(&self, mut map: impl FnMut(Fe) -> Fe) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|&c| map(c)).collect())
    }

    /// All monic polynomials of the given degree over the field.
    pub fn monics_of_degree(field: Field, degree: usize) -> impl Iterator<Item = Poly> {
        let q = field.q() as u64;
        let count = q.pow(degree as u32);
        (0..count).map(move |mut idx| {
            let mut v = Vec::with_capacity(degree + 1);
            for _ in 0..degree {
                v.push(Fe((idx % q) as u8));
                idx /= q;
            }
            v.push(Fe::ONE);
            Poly::new(field, v)
        })
    }
}

impl Ord for Poly {
    /// Canonical order: by degree (zero first), then lexicographic on the
    /// coefficient indices starting from the constant term.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}](", self.field)?;
        if self.is_zero() {
            write!(f, "0")?;
        }
        for c in &self.coeffs {
            write!(f, "{}", self.field.name(*c))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Poly {
    /// Human form such as `x^3 + 2x + 1` (highest power first).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let name = self.field.name(c);
            match (i, c == Fe::ONE) {
                (0, _) => write!(f, "{name}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{name}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{name}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u32, idx: &[u8]) -> Poly {
        Poly::from_indices(Field::new(q).unwrap(), idx)
    }

    #[test]
    fn gcd_of_x2_minus_1_and_x_minus_1() {
        // x^2 - 1 = x^2 + 4 over GF(5); x - 1 = x + 4
        let g = p(5, &[4, 0, 1]).gcd(&p(5, &[4, 1]));
        assert_eq!(g, p(5, &[4, 1]));
    }

    #[test]
    fn x_cubed_mod_x2_plus_1_over_gf3() {
        let r = p(3, &[0, 0, 0, 1]).rem(&p(3, &[1, 0, 1])).unwrap();
        assert_eq!(r, p(3, &[0, 2]));
    }

    #[test]
    fn division_by_zero() {
        let f = Field::new(2).unwrap();
        assert_eq!(p(2, &[1, 1]).div_rem(&Poly::zero(f)), Err(Error::DivisionByZero));
    }

    #[test]
    fn zero_degree_sentinel_sorts_first() {
        let f = Field::new(3).unwrap();
        assert_eq!(Poly::zero(f).degree(), None);
        assert!(Poly::zero(f).degree() < Some(0));
        assert!(Poly::zero(f) < Poly::one(f));
        assert!(p(3, &[2]) < p(3, &[0, 1]));
        assert!(p(3, &[1, 1]) < p(3, &[2, 1]));
    }

    #[test]
    fn divmod_identity_and_inverse() {
        let a = p(7, &[3, 0, 5, 1, 6, 2]);
        let b = p(7, &[1, 4, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.degree() < b.degree());
        assert_eq!(q.mul(&b).add(&r), a);
        let m = Poly::binomial(Field::new(7).unwrap(), 5, Fe::ONE);
        let f = p(7, &[2, 1]);
        let inv = f.inv_mod(&m).unwrap();
        assert!(f.mul_mod(&inv, &m).unwrap().is_one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(p(5, &[4, 2, 4, 1, 1]).to_string(), "x^4 + x^3 + 4x^2 + 2x + 4");
        assert_eq!(p(4, &[2, 3]).to_string(), "bx + a");
    }

    #[test]
    fn derivative_in_characteristic() {
        // d/dx (x^3 + x^2) = 3x^2 + 2x = x^2 over GF(2)
        assert_eq!(p(2, &[0, 0, 1, 1]).derivative(), p(2, &[0, 0, 1]));
        assert!(p(3, &[1, 0, 0, 1]).derivative().is_zero());
    }
}
