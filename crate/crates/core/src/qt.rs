//! 1- and 2-generator quasi-twisted codes built from twistulant blocks.
//!
//! Coordinates of assembled codes are in block order: block `j` occupies
//! positions `j*m .. (j+1)*m`. The index-`ell` shift [`qt_shift`] acts on
//! interleaved order (position `i*ell + j` holds coordinate `i` of block `j`);
//! [`to_interleaved`] and [`from_interleaved`] convert between the two.

use serde::{Deserialize, Serialize};

use crate::algebra::{Fe, Field, Poly};
use crate::constacyclic::{twistulant_rows, ConstacyclicCode};
use crate::distance::DistanceOptions;
use crate::error::{Error, Result};
use crate::linearcode::{hamming_weight, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QtForm {
    /// (g f_1, ..., g f_ell)
    OneGen,
    /// rows (g f_1j) and (p g f_2j) with p | h_1
    TwoGenGeneral,
    /// p = 1
    TwoGenP1,
    /// g = 1, second generator g_2 stored as p
    TwoGenIdentityG1,
    /// second row (x g f_1ell, g f_11, ..., g f_1(ell-1))
    TwoGenShifted,
}

impl QtForm {
    pub fn is_two_gen(self) -> bool {
        self != QtForm::OneGen
    }

    pub fn name(self) -> &'static str {
        match self {
            QtForm::OneGen => "one_gen",
            QtForm::TwoGenGeneral => "two_gen_general",
            QtForm::TwoGenP1 => "two_gen_p1",
            QtForm::TwoGenIdentityG1 => "two_gen_identity_g1",
            QtForm::TwoGenShifted => "two_gen_shifted",
        }
    }
}

impl std::str::FromStr for QtForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<QtForm> {
        [
            QtForm::OneGen,
            QtForm::TwoGenGeneral,
            QtForm::TwoGenP1,
            QtForm::TwoGenIdentityG1,
            QtForm::TwoGenShifted,
        ]
        .into_iter()
        .find(|f| f.name() == s)
        .ok_or_else(|| Error::FormatError(format!("unknown form {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QtGeneratorSpec {
    pub form: QtForm,
    pub field: Field,
    pub m: usize,
    pub ell: usize,
    pub a: Fe,
    pub g: Poly,
    pub p: Poly,
    pub f1: Vec<Poly>,
    /// Empty for the one-generator and shifted forms.
    pub f2: Vec<Poly>,
}

impl QtGeneratorSpec {
    pub fn one_gen(field: Field, m: usize, a: Fe, g: Poly, f1: Vec<Poly>) -> QtGeneratorSpec {
        QtGeneratorSpec {
            form: QtForm::OneGen,
            field,
            m,
            ell: f1.len(),
            a,
            g,
            p: Poly::one(field),
            f1,
            f2: Vec::new(),
        }
    }

    pub fn two_gen(
        field: Field,
        m: usize,
        a: Fe,
        g: Poly,
        p: Poly,
        f1: Vec<Poly>,
        f2: Vec<Poly>,
    ) -> QtGeneratorSpec {
        QtGeneratorSpec {
            form: QtForm::TwoGenGeneral,
            field,
            m,
            ell: f1.len(),
            a,
            g,
            p,
            f1,
            f2,
        }
    }

    pub fn p1(field: Field, m: usize, a: Fe, g: Poly, f1: Vec<Poly>, f2: Vec<Poly>) -> QtGeneratorSpec {
        QtGeneratorSpec {
            form: QtForm::TwoGenP1,
            ..QtGeneratorSpec::two_gen(field, m, a, g, Poly::one(field), f1, f2)
        }
    }

    pub fn identity_g1(field: Field, m: usize, a: Fe, g2: Poly, f1: Vec<Poly>, f2: Vec<Poly>) -> QtGeneratorSpec {
        QtGeneratorSpec {
            form: QtForm::TwoGenIdentityG1,
            ..QtGeneratorSpec::two_gen(field, m, a, Poly::one(field), g2, f1, f2)
        }
    }

    pub fn shifted(field: Field, m: usize, a: Fe, g: Poly, f1: Vec<Poly>) -> QtGeneratorSpec {
        QtGeneratorSpec {
            form: QtForm::TwoGenShifted,
            ..QtGeneratorSpec::one_gen(field, m, a, g, f1)
        }
    }

    pub fn n(&self) -> usize {
        self.m * self.ell
    }

    /// x^m - a.
    pub fn modulus(&self) -> Poly {
        Poly::binomial(self.field, self.m, self.a)
    }

    pub fn h1(&self) -> Result<Poly> {
        self.modulus().exact_div(&self.g)
    }

    pub fn h2(&self) -> Result<Poly> {
        self.modulus().exact_div(&self.p.mul(&self.g))
    }

    pub fn k1(&self) -> usize {
        self.m - self.g.deg0().min(self.m)
    }

    pub fn k2(&self) -> usize {
        match self.form {
            QtForm::OneGen => 0,
            QtForm::TwoGenShifted => self.k1(),
            _ => self.m - self.p.mul(&self.g).deg0().min(self.m),
        }
    }

    /// Expected dimension k_1 + k_2.
    pub fn k(&self) -> usize {
        self.k1() + self.k2()
    }

    /// The constacyclic code generated by g.
    pub fn base_code(&self) -> Result<ConstacyclicCode> {
        ConstacyclicCode::new(self.field, self.m, self.a, self.g.clone())
    }

    /// Checks every structural and gcd condition of the form.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::PreconditionFailed(msg));
        if self.a.is_zero() {
            return Err(Error::InvalidShiftConstant);
        }
        if self.m == 0 || self.ell == 0 {
            return fail("m and ell must be positive".into());
        }
        let polys = std::iter::once(&self.g)
            .chain(std::iter::once(&self.p))
            .chain(&self.f1)
            .chain(&self.f2);
        if polys.into_iter().any(|p| p.field() != self.field) {
            return Err(Error::FieldMismatch("spec polynomials over different fields".into()));
        }
        if self.f1.len() != self.ell {
            return fail(format!("{} first-row polynomials for index {}", self.f1.len(), self.ell));
        }
        let two_row = matches!(
            self.form,
            QtForm::TwoGenGeneral | QtForm::TwoGenP1 | QtForm::TwoGenIdentityG1
        );
        if two_row && self.f2.len() != self.ell {
            return fail(format!("{} second-row polynomials for index {}", self.f2.len(), self.ell));
        }
        if !two_row && !self.f2.is_empty() {
            return fail("form takes no second-row polynomials".into());
        }
        if !self.g.is_monic() {
            return fail(format!("g = {} is not monic", self.g));
        }
        let modulus = self.modulus();
        if !self.g.divides(&modulus) {
            return fail(format!("g = {} does not divide {modulus}", self.g));
        }
        if self.g.deg0() >= self.m {
            return fail("g generates the zero code".into());
        }
        let h1 = self.h1()?;
        match self.form {
            QtForm::TwoGenP1 if !self.p.is_one() => return fail("p must be 1".into()),
            QtForm::TwoGenIdentityG1 if !self.g.is_one() => return fail("g must be 1".into()),
            QtForm::OneGen | QtForm::TwoGenShifted if !self.p.is_one() => {
                return fail("form has no p".into())
            }
            _ => {}
        }
        if !self.p.is_monic() || !self.p.divides(&h1) {
            return fail(format!("p = {} is not a monic divisor of h1 = {h1}", self.p));
        }
        let dh1 = h1.deg0();
        for (j, f) in self.f1.iter().enumerate() {
            if !f.gcd(&h1).is_one() {
                return fail(format!("gcd(f1[{j}] = {f}, h1) != 1"));
            }
            if f.degree().is_some_and(|d| d >= dh1) {
                return fail(format!("deg f1[{j}] >= deg h1 = {dh1}"));
            }
        }
        if two_row {
            let h2 = self.h2()?;
            let dh2 = h2.deg0();
            for (j, f) in self.f2.iter().enumerate() {
                if j == 0 && f.is_zero() {
                    continue;
                }
                if j == 0 && self.form != QtForm::TwoGenGeneral {
                    return fail("f2[0] must be 0 in this form".into());
                }
                if !f.gcd(&h2).is_one() {
                    return fail(format!("gcd(f2[{j}] = {f}, h2) != 1"));
                }
                if f.degree().is_some_and(|d| d >= dh2) && dh2 > 0 {
                    return fail(format!("deg f2[{j}] >= deg h2 = {dh2}"));
                }
            }
        }
        if self.form == QtForm::TwoGenShifted && self.g.deg0() > 2 {
            log::warn!("shifted form with deg g = {} > 2", self.g.deg0());
        }
        Ok(())
    }

    /// Polynomials of the first generator row (reduced mod x^m - a).
    pub fn row1(&self) -> Vec<Poly> {
        let md = self.modulus();
        self.f1
            .iter()
            .map(|f| self.g.mul(f).rem(&md).expect("nonzero modulus"))
            .collect()
    }

    /// Polynomials of the second generator row, if any.
    pub fn row2(&self) -> Vec<Poly> {
        let md = self.modulus();
        match self.form {
            QtForm::OneGen => Vec::new(),
            QtForm::TwoGenShifted => {
                let r1 = self.row1();
                let mut out = Vec::with_capacity(self.ell);
                out.push(Poly::x(self.field).mul(&r1[self.ell - 1]).rem(&md).expect("nonzero modulus"));
                out.extend(r1[..self.ell - 1].iter().cloned());
                out
            }
            _ => {
                let pg = self.p.mul(&self.g);
                self.f2
                    .iter()
                    .map(|f| pg.mul(f).rem(&md).expect("nonzero modulus"))
                    .collect()
            }
        }
    }

    /// Unchecked stacked twistulant matrix (k_1 + k_2 rows).
    pub fn raw_matrix(&self) -> Matrix {
        let mut m = block_rows(self.field, self.m, self.a, &self.row1(), self.k1());
        if self.form.is_two_gen() && self.k2() > 0 {
            m = m.stack(&block_rows(self.field, self.m, self.a, &self.row2(), self.k2()));
        }
        m
    }
}

/// `rows` x (m * polys.len()) matrix [Circ(p_1) | ... | Circ(p_ell)].
pub fn block_rows(field: Field, m: usize, a: Fe, polys: &[Poly], rows: usize) -> Matrix {
    let blocks: Vec<Vec<Vec<Fe>>> = polys
        .iter()
        .map(|p| twistulant_rows(field, p.to_vec(m), a, rows))
        .collect();
    let out = (0..rows)
        .map(|i| blocks.iter().flat_map(|b| b[i].iter().copied()).collect())
        .collect();
    Matrix::new(field, m * polys.len(), out)
}

#[derive(Clone, Debug)]
pub struct QtCode {
    pub spec: QtGeneratorSpec,
    pub matrix: Matrix,
    pub k1: usize,
    pub k2: usize,
    pub distance_floor: usize,
}

impl QtCode {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn k(&self) -> usize {
        self.k1 + self.k2
    }

    /// Whether the row space is closed under the index-ell shift.
    pub fn is_qt_closed(&self) -> bool {
        let (m, ell) = (self.spec.m, self.spec.ell);
        self.matrix.rows().iter().all(|row| {
            let v = to_interleaved(row, m, ell);
            let s = qt_shift(self.spec.field, &v, ell, self.spec.a).expect("ell divides n");
            self.matrix.contains(&from_interleaved(&s, m, ell))
        })
    }
}

/// d(C_g), exact for the sizes used here.
fn base_distance(spec: &QtGeneratorSpec) -> Result<usize> {
    if spec.g.is_one() {
        return Ok(1);
    }
    let s = spec.base_code()?.min_distance(&DistanceOptions::default())?;
    Ok(s.d.bounds().map_or(1, |(lo, _)| lo))
}

/// Validates, assembles and rank-checks.
pub fn qt_assemble(spec: &QtGeneratorSpec) -> Result<QtCode> {
    spec.validate()?;
    let matrix = spec.raw_matrix();
    let expected = spec.k();
    let actual = matrix.rank();
    if actual != expected {
        return Err(Error::DimensionDefect { expected, actual });
    }
    let distance_floor = match spec.form {
        QtForm::OneGen => spec.ell * base_distance(spec)?,
        QtForm::TwoGenShifted => 1,
        _ => base_distance(spec)?,
    };
    Ok(QtCode {
        spec: spec.clone(),
        matrix,
        k1: spec.k1(),
        k2: spec.k2(),
        distance_floor,
    })
}

/// ell * d(C_g) for the one-generator code (g f_1, ..., g f_ell).
pub fn qt_1gen_bound(field: Field, m: usize, a: Fe, g: &Poly, f: &[Poly]) -> Result<usize> {
    let spec = QtGeneratorSpec::one_gen(field, m, a, g.clone(), f.to_vec());
    spec.validate()?;
    Ok(spec.ell * base_distance(&spec)?)
}

/// d(C_g) for the two-generator forms.
pub fn qt_2gen_bound(spec: &QtGeneratorSpec) -> Result<usize> {
    if !matches!(
        spec.form,
        QtForm::TwoGenGeneral | QtForm::TwoGenP1 | QtForm::TwoGenIdentityG1
    ) {
        return Err(Error::precondition(format!("{} is not a two-generator form", spec.form.name())));
    }
    spec.validate()?;
    base_distance(spec)
}

pub fn qt_2gen_shifted_make(field: Field, m: usize, a: Fe, g: Poly, f1: Vec<Poly>) -> Result<QtCode> {
    qt_assemble(&QtGeneratorSpec::shifted(field, m, a, g, f1))
}

/// (a c_{n-ell}, ..., a c_{n-1}, c_0, ..., c_{n-ell-1}).
pub fn qt_shift(field: Field, v: &[Fe], ell: usize, a: Fe) -> Result<Vec<Fe>> {
    let n = v.len();
    if ell == 0 || !n.is_multiple_of(ell) {
        return Err(Error::InvalidIndex { n, ell });
    }
    if a.is_zero() {
        return Err(Error::InvalidShiftConstant);
    }
    let mut out = Vec::with_capacity(n);
    out.extend(v[n - ell..].iter().map(|&c| field.mul(a, c)));
    out.extend_from_slice(&v[..n - ell]);
    Ok(out)
}

/// Block order to interleaved order.
pub fn to_interleaved(v: &[Fe], m: usize, ell: usize) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; m * ell];
    for j in 0..ell {
        for i in 0..m {
            out[i * ell + j] = v[j * m + i];
        }
    }
    out
}

/// Interleaved order to block order.
pub fn from_interleaved(v: &[Fe], m: usize, ell: usize) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; m * ell];
    for j in 0..ell {
        for i in 0..m {
            out[j * m + i] = v[i * ell + j];
        }
    }
    out
}

/// A codeword of weight exactly d(C_g) in a p = 1 code whose two rows agree
/// outside the first block: r (row 1) + t (row 2) with t = -r and
/// r f_11 g equal to a minimum-weight word of C_g.
pub fn tightness_witness(spec: &QtGeneratorSpec) -> Result<Vec<Fe>> {
    spec.validate()?;
    if !matches!(spec.form, QtForm::TwoGenP1 | QtForm::TwoGenGeneral) || !spec.p.is_one() {
        return Err(Error::precondition("tightness construction needs p = 1"));
    }
    if spec.f1[1..] != spec.f2[1..] || !spec.f2[0].is_zero() {
        return Err(Error::precondition("rows must agree outside the first block"));
    }
    let field = spec.field;
    let md = spec.modulus();
    let h1 = spec.h1()?;
    let cc = spec.base_code()?;
    let r = crate::distance::min_distance(&cc.generator_matrix(), &DistanceOptions::default())?;
    let w = r
        .witness
        .ok_or_else(|| Error::precondition("no minimum-weight word found"))?;
    let u = Poly::new(field, w).exact_div(&spec.g)?;
    let inv = spec.f1[0]
        .inv_mod(&h1)
        .ok_or_else(|| Error::precondition("f1[0] is not invertible mod h1"))?;
    let rr = u.mul_mod(&inv, &h1)?;
    let t = rr.neg();
    let mut out = Vec::with_capacity(spec.n());
    for (p1, p2) in spec.row1().iter().zip(spec.row2()) {
        let block = rr.mul(p1).add(&t.mul(&p2)).rem(&md)?;
        out.extend(block.to_vec(spec.m));
    }
    debug_assert_eq!(hamming_weight(&out), r.upper);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_list;
    use crate::distance::min_distance_bruteforce;

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn pl(f: Field, s: &str) -> Vec<Poly> {
        parse_list(s, f).unwrap()
    }

    fn table1_39() -> QtGeneratorSpec {
        let f = gf(2);
        QtGeneratorSpec::p1(
            f,
            13,
            Fe::ONE,
            Poly::from_indices(f, &[1, 1]),
            pl(f, "010010111011,011000110001,111011011011"),
            pl(f, "0,010101110011,0001011001"),
        )
    }

    #[test]
    fn assemble_39_24() {
        let c = qt_assemble(&table1_39()).unwrap();
        assert_eq!((c.n(), c.k(), c.k1, c.k2), (39, 24, 12, 12));
        assert_eq!(c.distance_floor, 2);
        assert!(c.is_qt_closed());
        assert_eq!(qt_2gen_bound(&table1_39()).unwrap(), 2);
    }

    #[test]
    fn one_gen_with_unit_f_is_the_cc_code() {
        let f = gf(3);
        let g = Poly::from_indices(f, &[1, 1]);
        let spec = QtGeneratorSpec::one_gen(f, 4, Fe::ONE, g.clone(), vec![Poly::one(f)]);
        let c = qt_assemble(&spec).unwrap();
        let cc = ConstacyclicCode::new(f, 4, Fe::ONE, g).unwrap();
        assert!(c.matrix.same_code(&cc.generator_matrix()));
    }

    #[test]
    fn one_gen_bound() {
        let f = gf(2);
        let g = Poly::from_indices(f, &[1, 1]);
        let fs = pl(f, "1,1,11");
        assert_eq!(qt_1gen_bound(f, 13, Fe::ONE, &g, &fs).unwrap(), 6);
        assert_eq!(qt_1gen_bound(f, 13, Fe::ONE, &g, &fs[..1]).unwrap(), 2);
    }

    #[test]
    fn preconditions() {
        let mut s = table1_39();
        s.g = Poly::binomial(s.field, 13, Fe::ONE);
        assert!(matches!(qt_assemble(&s), Err(Error::PreconditionFailed(_))));
        let mut s = table1_39();
        s.f1[0] = Poly::zero(s.field);
        assert!(matches!(qt_assemble(&s), Err(Error::PreconditionFailed(_))));
        let mut s = table1_39();
        s.f2[0] = Poly::one(s.field);
        assert!(matches!(qt_assemble(&s), Err(Error::PreconditionFailed(_))));
        let mut s = table1_39();
        s.f1.pop();
        assert!(matches!(qt_assemble(&s), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn shift_examples() {
        let f = gf(3);
        let v: Vec<Fe> = [0, 0, 0, 1].iter().map(|&i| f.elem(i)).collect();
        let s = qt_shift(f, &v, 2, f.elem(2)).unwrap();
        assert_eq!(s.iter().map(|x| x.index()).collect::<Vec<_>>(), vec![0, 2, 0, 0]);
        let w: Vec<Fe> = [1, 2, 0, 1, 1].iter().map(|&i| f.elem(i)).collect();
        let s = qt_shift(f, &w, 1, Fe::ONE).unwrap();
        assert_eq!(s.iter().map(|x| x.index()).collect::<Vec<_>>(), vec![1, 1, 2, 0, 1]);
        assert_eq!(qt_shift(f, &w, 2, Fe::ONE).unwrap_err(), Error::InvalidIndex { n: 5, ell: 2 });
    }

    #[test]
    fn interleave_round_trip() {
        let f = gf(7);
        let v: Vec<Fe> = (0..12).map(|i| f.elem((i % 7) as u8)).collect();
        assert_eq!(from_interleaved(&to_interleaved(&v, 4, 3), 4, 3), v);
    }

    #[test]
    fn shifted_small_example() {
        let f = gf(2);
        let spec = QtGeneratorSpec::shifted(f, 2, Fe::ONE, Poly::one(f), vec![Poly::one(f); 2]);
        let rows = spec.row2();
        assert_eq!(rows, vec![Poly::x(f), Poly::one(f)]);
        assert_eq!(spec.raw_matrix().rank(), 3);
        assert_eq!(
            qt_assemble(&spec).unwrap_err(),
            Error::DimensionDefect { expected: 4, actual: 3 }
        );
    }

    #[test]
    fn tightness_example() {
        let mut spec = table1_39();
        spec.f2[1] = spec.f1[1].clone();
        spec.f2[2] = spec.f1[2].clone();
        let c = qt_assemble(&spec).unwrap();
        let w = tightness_witness(&spec).unwrap();
        assert!(c.matrix.contains(&w));
        assert_eq!(hamming_weight(&w), 2);
        assert!(w[13..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn small_two_gen_respects_floor() {
        let f = gf(3);
        // x^4 - 1 = (x + 1)(x + 2)(x^2 + 1); g = x + 1, p = x + 2
        let g = Poly::from_indices(f, &[1, 1]);
        let p = Poly::from_indices(f, &[2, 1]);
        let spec = QtGeneratorSpec::two_gen(
            f,
            4,
            Fe::ONE,
            g,
            p,
            pl(f, "1,11"),
            pl(f, "0,1"),
        );
        let c = qt_assemble(&spec).unwrap();
        assert_eq!((c.k1, c.k2), (3, 2));
        let d = min_distance_bruteforce(&c.matrix, 1 << 16).unwrap().unwrap();
        assert!(d >= c.distance_floor);
        assert!(c.is_qt_closed());
    }
}
