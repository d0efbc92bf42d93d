use std::fmt;

use crate::algebra::field::Field;
use crate::algebra::poly::BivarPoly;
use crate::algebra::scalar::Scalar;
use crate::error::{Error, Result};

/// Element of `k[[x]]` known modulo x^(N+1), stored densely as a_0..a_N.
/// Binary operations truncate to the smaller order of the two operands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>, order: u32) -> Self {
        coeffs.resize(order as usize + 1, Scalar::zero(field));
        for c in &coeffs {
            assert_eq!(c.field(), field);
        }
        TruncatedSeries { field, coeffs }
    }

    pub fn zero(field: Field, order: u32) -> Self {
        TruncatedSeries::new(field, vec![], order)
    }

    pub fn one(field: Field, order: u32) -> Self {
        TruncatedSeries::new(field, vec![Scalar::one(field)], order)
    }

    pub fn var(field: Field, order: u32) -> Self {
        TruncatedSeries::new(field, vec![Scalar::zero(field), Scalar::one(field)], order)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Truncation order N: coefficients a_0..a_N are known.
    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeff(&self, i: u32) -> &Scalar {
        &self.coeffs[i as usize]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// x-adic valuation: index of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| i as u32)
    }

    pub fn truncate(&self, order: u32) -> Self {
        let keep = (order as usize + 1).min(self.coeffs.len());
        let mut coeffs = self.coeffs[..keep].to_vec();
        coeffs.resize(order as usize + 1, Scalar::zero(self.field));
        TruncatedSeries { field: self.field, coeffs }
    }

    fn join_order(&self, rhs: &Self) -> u32 {
        self.order().min(rhs.order())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.field, rhs.field);
        let n = self.join_order(rhs);
        let mut coeffs = Vec::with_capacity(n as usize + 1);
        for i in 0..=n {
            coeffs.push(self.coeff(i).add(rhs.coeff(i)));
        }
        TruncatedSeries { field: self.field, coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.field, rhs.field);
        let n = self.join_order(rhs) as usize;
        let mut coeffs = vec![Scalar::zero(self.field); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&rhs.coeffs[j]));
            }
        }
        TruncatedSeries { field: self.field, coeffs }
    }

    /// Multiplicative inverse mod x^(N+1). Units of `k[[x]]` are exactly the
    /// series with nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NonUnitSeries);
        }
        let n = self.order() as usize;
        let a0_inv = self.coeffs[0].inv()?;
        let mut out = vec![Scalar::zero(self.field); n + 1];
        out[0] = a0_inv.clone();
        for k in 1..=n {
            let mut acc = Scalar::zero(self.field);
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul(&out[k - i]));
            }
            out[k] = acc.neg().mul(&a0_inv);
        }
        Ok(TruncatedSeries { field: self.field, coeffs: out })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.invert()?))
    }

    /// Formal derivative; the truncation order drops by one.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return TruncatedSeries::zero(self.field, 0);
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            coeffs.push(c.mul(&Scalar::from_i64(self.field, i as i64)));
        }
        TruncatedSeries { field: self.field, coeffs }
    }

    /// i-th derivative at 0, i.e. i! * a_i.
    pub fn derivative_at_zero(&self, i: u32) -> Option<Scalar> {
        if i > self.order() {
            return None;
        }
        let fact = Scalar::factorial(self.field, i)?;
        Some(self.coeff(i).mul(&fact))
    }
}

/// P(x, s(x)) for a bivariate polynomial and a series substituted for y,
/// with x kept as the series variable. Horner in y keeps the power count low.
pub fn eval_bivar_at_series(p: &BivarPoly, s: &TruncatedSeries) -> TruncatedSeries {
    let field = p.field();
    let order = s.order();
    let dy = p.degree_in(1).unwrap_or(0);
    // coefficients of y^j as x-series
    let mut by_y: Vec<TruncatedSeries> = vec![TruncatedSeries::zero(field, order); dy as usize + 1];
    for (e, c) in p.terms() {
        let (i, j) = (e.0[0], e.0[1] as usize);
        if i <= order {
            let cur = by_y[j].coeff(i).add(c);
            by_y[j].coeffs[i as usize] = cur;
        }
    }
    let mut acc = TruncatedSeries::zero(field, order);
    for j in (0..=dy as usize).rev() {
        acc = acc.mul(s).add(&by_y[j]);
    }
    acc
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
