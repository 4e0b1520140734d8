//! Arithmetic over the small fields GF(q), q in {2, 3, 4, 5, 7, 8, 9}.
//!
//! Every field is table driven. An element is an index in `[0, q)`; for an
//! extension field GF(p^e) the index is the base-p number whose digits are
//! the coefficients of the element as a polynomial in the generator `a`
//! (constant term is the least significant digit). The defining polynomials
//! are fixed:
//!
//! | q | modulus over GF(p) | display alphabet |
//! |---|--------------------|------------------|
//! | 4 | a^2 + a + 1        | `0 1 a b` (b = a^2 = a + 1) |
//! | 8 | a^3 + a + 1        | `0`..`7` (index) |
//! | 9 | a^2 + 1            | `0`..`8` (index) |
//!
//! Prime fields use the digits `0`..`p-1`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const SUPPORTED_SIZES: [u8; 7] = [2, 3, 4, 5, 7, 8, 9];

/// A field element, identified by its index within its field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct Fe(pub(crate) u8);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn index(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

const MAXQ: usize = 9;

pub(crate) struct Tables {
    q: u8,
    p: u8,
    e: u8,
    modulus: Vec<u8>,
    add: [[u8; MAXQ]; MAXQ],
    mul: [[u8; MAXQ]; MAXQ],
    neg: [u8; MAXQ],
    inv: [u8; MAXQ],
    names: Vec<char>,
}

/// Handle to the tables of one supported field. Cheap to copy and compare.
#[derive(Clone, Copy)]
pub struct Field(&'static Tables);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.q.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

fn digits(mut x: u8, p: u8, e: u8) -> Vec<u8> {
    (0..e)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u8], p: u8) -> u8 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn build(q: u8) -> Tables {
    let (p, e, modulus): (u8, u8, Vec<u8>) = match q {
        2 | 3 | 5 | 7 => (q, 1, vec![0, 1]),
        4 => (2, 2, vec![1, 1, 1]),
        8 => (2, 3, vec![1, 1, 0, 1]),
        9 => (3, 2, vec![1, 0, 1]),
        _ => unreachable!(),
    };
    let mut add = [[0u8; MAXQ]; MAXQ];
    let mut mul = [[0u8; MAXQ]; MAXQ];
    for x in 0..q {
        let dx = digits(x, p, e);
        for y in 0..q {
            let dy = digits(y, p, e);
            let s: Vec<u8> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
            add[x as usize][y as usize] = undigits(&s, p);
            // schoolbook product then reduction by the monic modulus
            let mut prod = vec![0u16; 2 * e as usize];
            for (i, a) in dx.iter().enumerate() {
                for (j, b) in dy.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + (*a as u16) * (*b as u16)) % p as u16;
                }
            }
            if e > 1 {
                for top in (e as usize..2 * e as usize).rev() {
                    let c = prod[top];
                    if c == 0 {
                        continue;
                    }
                    for (i, &m) in modulus.iter().enumerate().take(e as usize) {
                        let idx = top - e as usize + i;
                        prod[idx] = (prod[idx] + (p as u16 - c) * m as u16) % p as u16;
                    }
                    prod[top] = 0;
                }
            }
            let r: Vec<u8> = prod[..e as usize].iter().map(|&c| c as u8).collect();
            mul[x as usize][y as usize] = undigits(&r, p);
        }
    }
    let mut neg = [0u8; MAXQ];
    let mut inv = [0u8; MAXQ];
    for x in 0..q {
        neg[x as usize] = (0..q).find(|&y| add[x as usize][y as usize] == 0).unwrap();
        if x != 0 {
            inv[x as usize] = (1..q).find(|&y| mul[x as usize][y as usize] == 1).unwrap();
        }
    }
    let names = if q == 4 {
        vec!['0', '1', 'a', 'b']
    } else {
        (0..q).map(|i| (b'0' + i) as char).collect()
    };
    Tables {
        q,
        p,
        e,
        modulus,
        add,
        mul,
        neg,
        inv,
        names,
    }
}

static TABLES: [OnceLock<Tables>; 10] = [const { OnceLock::new() }; 10];

impl Field {
    /// Field with `q` elements; errors for sizes outside the supported set.
    pub fn new(q: u32) -> Result<Field> {
        if q > 9 || !SUPPORTED_SIZES.contains(&(q as u8)) {
            return Err(Error::UnsupportedField(q));
        }
        Ok(Field(TABLES[q as usize].get_or_init(|| build(q as u8))))
    }

    #[inline]
    pub fn q(self) -> u8 {
        self.0.q
    }

    #[inline]
    pub fn characteristic(self) -> u8 {
        self.0.p
    }

    #[inline]
    pub fn degree(self) -> u8 {
        self.0.e
    }

    pub fn is_prime(self) -> bool {
        self.0.e == 1
    }

    /// Defining polynomial over GF(p), ascending coefficients. `x` for prime fields.
    pub fn modulus(self) -> &'static [u8] {
        &self.0.modulus
    }

    pub fn elem(self, index: u8) -> Fe {
        assert!(index < self.0.q, "element {index} out of range for {self}");
        Fe(index)
    }

    pub fn try_elem(self, index: u32) -> Result<Fe> {
        if index < self.0.q as u32 {
            Ok(Fe(index as u8))
        } else {
            Err(Error::FieldMismatch(format!(
                "element index {index} not in {self}"
            )))
        }
    }

    pub fn elements(self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.0.q).map(Fe)
    }

    pub fn nonzero(self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.0.q).map(Fe)
    }

    #[inline]
    pub fn add(self, x: Fe, y: Fe) -> Fe {
        Fe(self.0.add[x.0 as usize][y.0 as usize])
    }

    #[inline]
    pub fn sub(self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn neg(self, x: Fe) -> Fe {
        Fe(self.0.neg[x.0 as usize])
    }

    #[inline]
    pub fn mul(self, x: Fe, y: Fe) -> Fe {
        Fe(self.0.mul[x.0 as usize][y.0 as usize])
    }

    pub fn inv(self, x: Fe) -> Result<Fe> {
        if x.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Fe(self.0.inv[x.0 as usize]))
        }
    }

    pub fn div(self, x: Fe, y: Fe) -> Result<Fe> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(self, x: Fe, mut e: u64) -> Fe {
        let mut base = x;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius automorphism x -> x^p.
    pub fn frobenius(self, x: Fe) -> Fe {
        self.pow(x, self.0.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(self, x: Fe) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut acc = x;
        let mut k = 1;
        while acc != Fe::ONE {
            acc = self.mul(acc, x);
            k += 1;
        }
        Ok(k)
    }

    /// Checked single entry point over all field operations; `y` is ignored
    /// for the unary `Inv` and `Neg`.
    pub fn apply(self, op: FieldOp, x: Fe, y: Option<Fe>) -> Result<Fe> {
        self.check(x)?;
        let y = match (op, y) {
            (FieldOp::Inv | FieldOp::Neg, _) => Fe::ZERO,
            (_, Some(y)) => {
                self.check(y)?;
                y
            }
            (_, None) => {
                return Err(Error::precondition(format!("{op:?} needs two operands")))
            }
        };
        match op {
            FieldOp::Add => Ok(self.add(x, y)),
            FieldOp::Sub => Ok(self.sub(x, y)),
            FieldOp::Mul => Ok(self.mul(x, y)),
            FieldOp::Div => self.div(x, y),
            FieldOp::Inv => self.inv(x),
            FieldOp::Neg => Ok(self.neg(x)),
        }
    }

    fn check(self, x: Fe) -> Result<()> {
        if x.0 < self.0.q {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!(
                "element index {} not in {self}",
                x.0
            )))
        }
    }

    pub fn name(self, x: Fe) -> char {
        self.0.names[x.0 as usize]
    }

    pub fn parse_char(self, c: char) -> Option<Fe> {
        self.0.names.iter().position(|&n| n == c).map(|i| Fe(i as u8))
    }

    /// Raw tables for the packed kernels in the distance module.
    pub(crate) fn add_table(self) -> &'static [[u8; MAXQ]; MAXQ] {
        &self.0.add
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsupported_sizes() {
        for q in [0, 1, 6, 10, 11, 16, 25] {
            assert_eq!(Field::new(q).unwrap_err(), Error::UnsupportedField(q));
        }
    }

    #[test]
    fn gf4_convention() {
        let f = Field::new(4).unwrap();
        let a = f.parse_char('a').unwrap();
        let b = f.parse_char('b').unwrap();
        assert_eq!(f.mul(a, a), b);
        assert_eq!(f.add(a, Fe::ONE), b);
        // a^2 + a + 1 = 0
        assert_eq!(f.add(f.add(f.mul(a, a), a), Fe::ONE), Fe::ZERO);
        assert_eq!(f.mul(a, b), Fe::ONE);
        assert_eq!(f.add(a, b), Fe::ONE);
    }

    #[test]
    fn gf7_division() {
        let f = Field::new(7).unwrap();
        assert_eq!(f.div(f.elem(3), f.elem(5)).unwrap(), f.elem(2));
        assert_eq!(f.div(f.elem(3), Fe::ZERO), Err(Error::DivisionByZero));
        assert_eq!(
            f.apply(FieldOp::Div, f.elem(3), Some(f.elem(5))).unwrap(),
            f.elem(2)
        );
    }

    #[test]
    fn mixed_operands_rejected() {
        let f3 = Field::new(3).unwrap();
        let f9 = Field::new(9).unwrap();
        let big = f9.elem(7);
        assert!(matches!(
            f3.apply(FieldOp::Add, Fe::ONE, Some(big)),
            Err(Error::FieldMismatch(_))
        ));
    }

    #[test]
    fn axioms_exhaustive() {
        for q in SUPPORTED_SIZES {
            let f = Field::new(q as u32).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    assert_eq!(f.add(f.sub(x, y), y), x);
                    for z in f.elements() {
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    }
                }
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), Fe::ONE);
                    assert_eq!(f.pow(x, q as u64 - 1), Fe::ONE);
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for q in SUPPORTED_SIZES {
            let f = Field::new(q as u32).unwrap();
            assert!(f.nonzero().any(|x| f.order(x).unwrap() == q as u64 - 1));
        }
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        for q in [4u32, 8, 9] {
            let f = Field::new(q).unwrap();
            let fixed = f.elements().filter(|&x| f.frobenius(x) == x).count();
            assert_eq!(fixed, f.characteristic() as usize);
        }
    }
}
