//! Deliberately naive reference implementations used by the test suite.
//! They share only scalar arithmetic with the main paths: polynomials are
//! re-expanded into flat term lists, evaluation and differentiation are
//! re-derived from scratch, and directions are enumerated exhaustively.
//! No optimization on purpose; trust comes from simplicity.

use std::collections::BTreeMap;

use crate::algebra::{BivarPoly, Field, Scalar};
use crate::counting::Arrangement;
use crate::error::{Error, Result};

const ORACLE_FIELD_BOUND: u64 = 31;
const ORACLE_CURVE_BOUND: usize = 256;

/// Flat term list (i, j, coefficient); the oracle's own curve representation.
struct RawCurve {
    terms: Vec<(u32, u32, Scalar)>,
}

impl RawCurve {
    fn from_poly(p: &BivarPoly) -> Self {
        let terms = p
            .terms()
            .map(|(e, c)| (e.0[0], e.0[1], c.clone()))
            .collect();
        RawCurve { terms }
    }

    fn eval(&self, field: Field, x: &Scalar, y: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(field);
        for (i, j, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..*i {
                t = t.mul(x);
            }
            for _ in 0..*j {
                t = t.mul(y);
            }
            acc = acc.add(&t);
        }
        acc
    }

    fn dx(&self, field: Field) -> RawCurve {
        let mut terms = vec![];
        for (i, j, c) in &self.terms {
            if *i > 0 {
                terms.push((*i - 1, *j, c.mul(&Scalar::from_i64(field, *i as i64))));
            }
        }
        RawCurve { terms }
    }

    fn dy(&self, field: Field) -> RawCurve {
        let mut terms = vec![];
        for (i, j, c) in &self.terms {
            if *j > 0 {
                terms.push((*i, *j - 1, c.mul(&Scalar::from_i64(field, *j as i64))));
            }
        }
        RawCurve { terms }
    }
}

/// Tangency totals found by exhaustive enumeration: for every plane point,
/// every curve and every one of the q + 1 projective directions, test
/// gradient orthogonality and bucket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTangencies {
    pub sigma_mult: u64,
    pub incidence_count: u64,
    pub pair_count: u64,
    /// (x, y, direction index) -> multiplicity, direction index q meaning
    /// the vertical direction and t < q meaning (1 : t).
    pub buckets: BTreeMap<(u64, u64, u64), u32>,
}

pub fn oracle_tangencies(arr: &Arrangement) -> Result<OracleTangencies> {
    let field = arr.field;
    let Some(q) = field.order() else {
        return Err(Error::Validation("the oracle runs over finite fields".into()));
    };
    if q > ORACLE_FIELD_BOUND {
        return Err(Error::ScanBound(format!(
            "oracle field bound is {ORACLE_FIELD_BOUND}, got {q}"
        )));
    }
    if arr.n() > ORACLE_CURVE_BOUND {
        return Err(Error::ScanBound(format!(
            "oracle curve bound is {ORACLE_CURVE_BOUND}, got {}",
            arr.n()
        )));
    }
    let elems = crate::curves::field_elements(field)?;
    let raws: Vec<RawCurve> = arr.curves.iter().map(|c| RawCurve::from_poly(c.poly())).collect();
    let dxs: Vec<RawCurve> = raws.iter().map(|r| r.dx(field)).collect();
    let dys: Vec<RawCurve> = raws.iter().map(|r| r.dy(field)).collect();

    // the q + 1 projective directions: (1 : t) for each t, then (0 : 1)
    let mut directions: Vec<(Scalar, Scalar)> = elems
        .iter()
        .map(|t| (Scalar::one(field), t.clone()))
        .collect();
    directions.push((Scalar::zero(field), Scalar::one(field)));

    let mut buckets: BTreeMap<(u64, u64, u64), u32> = BTreeMap::new();
    for (xi, x) in elems.iter().enumerate() {
        for (yi, y) in elems.iter().enumerate() {
            for (di, (u, v)) in directions.iter().enumerate() {
                let mut mult = 0u32;
                for k in 0..raws.len() {
                    if !raws[k].eval(field, x, y).is_zero() {
                        continue;
                    }
                    let gx = dxs[k].eval(field, x, y);
                    let gy = dys[k].eval(field, x, y);
                    if gx.is_zero() && gy.is_zero() {
                        continue; // not smooth here
                    }
                    // tangent to (u : v) iff gx*u + gy*v = 0
                    if gx.mul(u).add(&gy.mul(v)).is_zero() {
                        mult += 1;
                    }
                }
                if mult >= 2 {
                    buckets.insert((xi as u64, yi as u64, di as u64), mult);
                }
            }
        }
    }
    let sigma_mult = buckets.values().map(|&m| m as u64).sum();
    let incidence_count = buckets.len() as u64;
    let pair_count = buckets.values().map(|&m| (m as u64) * (m as u64 - 1) / 2).sum();
    Ok(OracleTangencies { sigma_mult, incidence_count, pair_count, buckets })
}

/// Local intersection multiplicity at the origin as the dimension of the
/// truncated quotient: monomials of total degree < N modulo the shifts of
/// the two polynomials and everything of degree >= N.
///
/// The inputs must already be translated so the common point is the origin.
/// Instability between N and N + 1 reports insufficient truncation.
pub fn oracle_multiplicity_quotient(
    a: &BivarPoly,
    b: &BivarPoly,
    order: u32,
) -> Result<u32> {
    let d1 = quotient_dim(a, b, order)?;
    let d2 = quotient_dim(a, b, order + 1)?;
    if d1 != d2 {
        return Err(Error::TruncationInsufficient(order, order + 1));
    }
    Ok(d1)
}

fn quotient_dim(a: &BivarPoly, b: &BivarPoly, order: u32) -> Result<u32> {
    let field = a.field();
    if !a.eval2(&Scalar::zero(field), &Scalar::zero(field))?.is_zero()
        || !b.eval2(&Scalar::zero(field), &Scalar::zero(field))?.is_zero()
    {
        return Err(Error::Validation(
            "translate the common point to the origin first".into(),
        ));
    }
    // monomials x^i y^j with i + j < order, in a fixed order
    let mut index: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for i in 0..order {
        for j in 0..(order - i) {
            let next = index.len();
            index.insert((i, j), next);
        }
    }
    let ncols = index.len();
    let mut rows = vec![];
    for poly in [a, b] {
        for (si, sj) in index.keys() {
            // row for x^si y^sj * poly, truncated below degree `order`
            let mut row = vec![Scalar::zero(field); ncols];
            let mut nonzero = false;
            for (e, c) in poly.terms() {
                let (i, j) = (e.0[0] + si, e.0[1] + sj);
                if i + j < order {
                    row[index[&(i, j)]] = c.clone();
                    nonzero = true;
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    let rank = match field {
        Field::Rational => crate::linalg::rank_fraction_free(&rows),
        _ => crate::linalg::rank(rows),
    };
    Ok((ncols - rank) as u32)
}
