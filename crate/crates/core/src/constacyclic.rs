//! Constacyclic codes: ideals of GF(q)[x]/(x^m - a).

use crate::algebra::{binomial_factor, Fe, Field, Poly};
use crate::distance::{min_distance, DistanceOptions};
use crate::error::{Error, Result};
use crate::linearcode::{CodeSummary, Matrix};

/// (a*v[m-1], v[0], ..., v[m-2]).
pub fn cc_shift(field: Field, v: &[Fe], a: Fe) -> Result<Vec<Fe>> {
    if a.is_zero() {
        return Err(Error::InvalidShiftConstant);
    }
    let Some((&last, init)) = v.split_last() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(v.len());
    out.push(field.mul(a, last));
    out.extend_from_slice(init);
    Ok(out)
}

/// `rows` successive constacyclic shifts of `source`, which must already be
/// reduced (length `m`).
pub(crate) fn twistulant_rows(field: Field, source: Vec<Fe>, a: Fe, rows: usize) -> Vec<Vec<Fe>> {
    let mut out = Vec::with_capacity(rows);
    let mut cur = source;
    for _ in 0..rows {
        let next = cc_shift(field, &cur, a).expect("nonzero shift constant");
        out.push(cur);
        cur = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstacyclicCode {
    field: Field,
    m: usize,
    a: Fe,
    g: Poly,
    h: Poly,
}

impl ConstacyclicCode {
    pub fn new(field: Field, m: usize, a: Fe, g: Poly) -> Result<ConstacyclicCode> {
        if a.is_zero() {
            return Err(Error::InvalidShiftConstant);
        }
        if g.field() != field {
            return Err(Error::FieldMismatch(format!(
                "GF({}) generator for a GF({}) code",
                g.field().q(),
                field.q()
            )));
        }
        if !g.is_monic() {
            return Err(Error::NotMonic);
        }
        let h = Poly::binomial(field, m, a).exact_div(&g)?;
        Ok(ConstacyclicCode { field, m, a, g, h })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> Fe {
        self.a
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn k(&self) -> usize {
        self.m - self.g.deg0()
    }

    /// x^m - a.
    pub fn modulus(&self) -> Poly {
        Poly::binomial(self.field, self.m, self.a)
    }

    /// k x m twistulant generator matrix.
    pub fn generator_matrix(&self) -> Matrix {
        TwistulantBlock::new(self.g.clone(), self.m, self.a, self.k())
            .expand()
            .unwrap_or_else(|_| Matrix::empty(self.field, self.m))
    }

    /// h(x) v(x) = 0 mod x^m - a.
    pub fn contains(&self, v: &[Fe]) -> bool {
        let p = Poly::new(self.field, v.to_vec());
        self.h.mul_mod(&p, &self.modulus()).is_ok_and(|r| r.is_zero())
    }

    pub fn min_distance(&self, opts: &DistanceOptions) -> Result<CodeSummary> {
        let r = min_distance(&self.generator_matrix(), opts)?;
        Ok(CodeSummary {
            n: self.m,
            k: self.k(),
            q: self.field.q(),
            d: r.d_status(),
        })
    }
}

/// Every nonzero constacyclic code of length `m` with shift constant `a`,
/// optionally restricted to dimension `k_filter`, in canonical generator order.
pub fn enumerate(field: Field, m: usize, a: Fe, k_filter: Option<usize>) -> Result<Vec<ConstacyclicCode>> {
    enumerate_divisors(field, m, a, k_filter, false)
}

/// Like [`enumerate`]; `with_zero` also keeps the zero code g = x^m - a.
pub fn enumerate_divisors(
    field: Field,
    m: usize,
    a: Fe,
    k_filter: Option<usize>,
    with_zero: bool,
) -> Result<Vec<ConstacyclicCode>> {
    let fac = binomial_factor(field, m, a)?;
    let mut out = Vec::new();
    for g in fac.divisors(field) {
        let k = m - g.deg0();
        if (k == 0 && !with_zero) || k_filter.is_some_and(|want| want != k) {
            continue;
        }
        out.push(ConstacyclicCode::new(field, m, a, g)?);
    }
    Ok(out)
}

/// Exact minimum distance of a constacyclic code.
pub fn cc_min_distance(code: &ConstacyclicCode) -> Result<CodeSummary> {
    code.min_distance(&DistanceOptions::default())
}

#[derive(Clone, Debug)]
pub struct TwistulantBlock {
    pub source: Poly,
    pub m: usize,
    pub a: Fe,
    pub rows: usize,
}

impl TwistulantBlock {
    pub fn new(source: Poly, m: usize, a: Fe, rows: usize) -> TwistulantBlock {
        TwistulantBlock { source, m, a, rows }
    }

    pub fn expand(&self) -> Result<Matrix> {
        if self.rows == 0 {
            return Err(Error::EmptyBlock);
        }
        if self.a.is_zero() {
            return Err(Error::InvalidShiftConstant);
        }
        let field = self.source.field();
        let reduced = self.source.rem(&Poly::binomial(field, self.m, self.a))?;
        let rows = twistulant_rows(field, reduced.to_vec(self.m), self.a, self.rows);
        Ok(Matrix::new(field, self.m, rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::min_distance_bruteforce;

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn p(f: Field, idx: &[u8]) -> Poly {
        Poly::from_indices(f, idx)
    }

    #[test]
    fn shift_examples() {
        let f = gf(3);
        let v: Vec<Fe> = [0, 0, 1].iter().map(|&i| f.elem(i)).collect();
        assert_eq!(cc_shift(f, &v, f.elem(2)).unwrap(), vec![f.elem(2), Fe::ZERO, Fe::ZERO]);
        let f5 = gf(5);
        let v: Vec<Fe> = [1, 2, 3, 4].iter().map(|&i| f5.elem(i)).collect();
        let s = cc_shift(f5, &v, Fe::ONE).unwrap();
        assert_eq!(s.iter().map(|x| x.index()).collect::<Vec<_>>(), vec![4, 1, 2, 3]);
        assert_eq!(cc_shift(f5, &v, Fe::ZERO).unwrap_err(), Error::InvalidShiftConstant);
    }

    #[test]
    fn shift_is_multiplication_by_x() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let f = gf(q);
            for a in f.nonzero() {
                let m = 6;
                let v: Vec<Fe> = (0..m).map(|i| f.elem(((i * 5 + 3) % q as usize) as u8)).collect();
                let prod = Poly::x(f)
                    .mul_mod(&Poly::new(f, v.clone()), &Poly::binomial(f, m, a))
                    .unwrap();
                assert_eq!(cc_shift(f, &v, a).unwrap(), prod.to_vec(m));
            }
        }
    }

    #[test]
    fn make_examples() {
        let f = gf(2);
        let c = ConstacyclicCode::new(f, 13, Fe::ONE, p(f, &[1, 1])).unwrap();
        assert_eq!(c.k(), 12);
        assert_eq!(c.g().mul(c.h()), Poly::binomial(f, 13, Fe::ONE));
        let f7 = gf(7);
        let c = ConstacyclicCode::new(f7, 4, f7.elem(6), p(f7, &[1, 4, 1])).unwrap();
        assert_eq!(c.k(), 2);
        assert_eq!(
            ConstacyclicCode::new(f, 13, Fe::ONE, p(f, &[1, 0, 1])).unwrap_err(),
            Error::NotADivisor
        );
        let f3 = gf(3);
        assert_eq!(
            ConstacyclicCode::new(f3, 4, Fe::ONE, p(f3, &[2, 2])).unwrap_err(),
            Error::NotMonic
        );
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_divisors(gf(3), 4, Fe::ONE, None, true).unwrap().len(), 8);
        assert_eq!(enumerate_divisors(gf(2), 13, Fe::ONE, None, true).unwrap().len(), 4);
        assert_eq!(enumerate(gf(3), 4, Fe::ONE, None).unwrap().len(), 7);
        assert_eq!(enumerate(gf(2), 13, Fe::ONE, None).unwrap().len(), 3);
        let full = enumerate(gf(5), 6, Fe::ONE, Some(6)).unwrap();
        assert_eq!(full.len(), 1);
        assert!(full[0].g().is_one());
        let f2 = gf(2);
        let all = enumerate(f2, 6, Fe::ONE, None).unwrap();
        let fac = binomial_factor(f2, 6, Fe::ONE).unwrap();
        assert_eq!(all.len() + 1, fac.divisor_count());
    }

    #[test]
    fn twistulant_examples() {
        let f = gf(3);
        let m = TwistulantBlock::new(p(f, &[1, 2]), 3, f.elem(2), 3).expand().unwrap();
        let want = Matrix::from_indices(f, &[vec![1, 2, 0], vec![0, 1, 2], vec![1, 0, 1]]);
        assert_eq!(m, want);
        let id = TwistulantBlock::new(Poly::one(f), 4, Fe::ONE, 4).expand().unwrap();
        assert_eq!(id, Matrix::identity(f, 4));
        assert_eq!(
            TwistulantBlock::new(Poly::one(f), 4, Fe::ONE, 0).expand().unwrap_err(),
            Error::EmptyBlock
        );
    }

    #[test]
    fn distances() {
        let f2 = gf(2);
        let c = ConstacyclicCode::new(f2, 13, Fe::ONE, p(f2, &[1, 1])).unwrap();
        assert_eq!(cc_min_distance(&c).unwrap().d.exact(), Some(2));
        let f7 = gf(7);
        let c = ConstacyclicCode::new(f7, 2, Fe::ONE, p(f7, &[1, 1])).unwrap();
        assert_eq!(cc_min_distance(&c).unwrap().d.exact(), Some(2));
        let f5 = gf(5);
        // 4 + 2x + 4x^2 + x^3 + x^4 divides x^6 - 2, not x^5 - 1
        assert_eq!(
            ConstacyclicCode::new(f5, 5, Fe::ONE, p(f5, &[4, 2, 4, 1, 1])).unwrap_err(),
            Error::NotADivisor
        );
        let c = ConstacyclicCode::new(f5, 6, f5.elem(2), p(f5, &[4, 2, 4, 1, 1])).unwrap();
        assert_eq!(c.k(), 2);
        let brute = min_distance_bruteforce(&c.generator_matrix(), 1 << 10).unwrap();
        assert_eq!(cc_min_distance(&c).unwrap().d.exact(), brute);
    }

    #[test]
    fn generator_rows_span_the_ideal() {
        for (q, m) in [(2u32, 9usize), (3, 8), (5, 6), (4, 5)] {
            let f = gf(q);
            for a in f.nonzero() {
                for c in enumerate(f, m, a, None).unwrap() {
                    let gm = c.generator_matrix();
                    assert_eq!(gm.rank(), c.k());
                    for row in gm.rows() {
                        assert!(c.contains(row));
                        assert!(gm.contains(&cc_shift(f, row, a).unwrap()));
                    }
                    // brute-force ideal enumeration: multiples u*g for all u of degree < k
                    if (q as u64).pow(c.k() as u32) <= 4096 {
                        let d = min_distance_bruteforce(&gm, 1 << 20).unwrap().unwrap();
                        let mut best = usize::MAX;
                        for u in 1..(q as u64).pow(c.k() as u32) {
                            let mut t = u;
                            let coeffs: Vec<Fe> = (0..c.k())
                                .map(|_| {
                                    let d = (t % q as u64) as u8;
                                    t /= q as u64;
                                    f.elem(d)
                                })
                                .collect();
                            let w = Poly::new(f, coeffs).mul(c.g()).weight();
                            best = best.min(w);
                        }
                        assert_eq!(d, best);
                    }
                }
            }
        }
    }
}
