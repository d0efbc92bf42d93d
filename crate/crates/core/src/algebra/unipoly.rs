use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;

use crate::algebra::field::Field;
use crate::algebra::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense univariate polynomial over a workbench field. Used for content
/// computations inside the bivariate gcd, resultants, and root finding of
/// eliminants over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    /// coeffs[i] multiplies t^i; the top coefficient is nonzero.
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().map_or(false, Scalar::is_zero) {
            coeffs.pop();
        }
        for c in &coeffs {
            assert_eq!(c.field(), field);
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        UniPoly { field, coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        UniPoly::new(field, vec![c])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&rhs.coeff(i)));
        }
        UniPoly::new(self.field, out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut out = vec![Scalar::zero(self.field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(self.field, out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return UniPoly::zero(self.field);
        }
        UniPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(self.field);
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul(&Scalar::from_i64(self.field, i as i64)));
        }
        UniPoly::new(self.field, out)
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "univariate division by zero");
        let dlead = divisor.leading().unwrap().clone();
        let dinv = dlead.inv().expect("field leading coefficient");
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quot = vec![Scalar::zero(self.field); self.coeffs.len().saturating_sub(ddeg)];
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let factor = rem.leading().unwrap().mul(&dinv);
            let shift = rdeg - ddeg;
            quot[shift] = factor.clone();
            let mut sub = vec![Scalar::zero(self.field); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c.mul(&factor)));
            rem = rem.sub(&UniPoly::new(self.field, sub));
        }
        (UniPoly::new(self.field, quot), rem)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.leading().unwrap().inv().unwrap();
            a.scale(&inv)
        }
    }

    /// All roots in the base field.
    ///
    /// Over a finite field this scans every element (the scan bound caps the
    /// order elsewhere). Over the rationals it combines the rational root
    /// theorem for the found roots with an explicit marker for any non-linear
    /// factor that remains, so callers can tell a complete answer from a
    /// partial one.
    pub fn roots_in_field(&self) -> Result<RootReport> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        match self.field {
            Field::Rational => self.rational_roots(),
            _ => {
                let order = self.field.order().unwrap();
                let mut roots = vec![];
                for v in 0..order {
                    let t = match self.field {
                        Field::Prime(_) => Scalar::from_i64(self.field, v as i64),
                        Field::Char2Ext(_) => Scalar::from_bits(self.field, v as u8)?,
                        Field::Rational => unreachable!(),
                    };
                    if self.eval(&t).is_zero() {
                        roots.push(t);
                    }
                }
                Ok(RootReport { roots, complete: true })
            }
        }
    }

    fn rational_roots(&self) -> Result<RootReport> {
        let mut poly = self.clone();
        let mut roots = vec![];
        // strip t = 0 roots
        let mut low = 0;
        while low < poly.coeffs.len() && poly.coeffs[low].is_zero() {
            low += 1;
        }
        if low > 0 {
            roots.push(Scalar::from_i64(Field::Rational, 0));
            poly = UniPoly::new(self.field, poly.coeffs[low..].to_vec());
        }
        loop {
            match poly.degree() {
                None | Some(0) => return Ok(RootReport { roots, complete: true }),
                Some(1) => {
                    let root = poly.coeff(0).neg().div(&poly.coeff(1))?;
                    roots.push(root);
                    return Ok(RootReport { roots, complete: true });
                }
                Some(2) => {
                    let (found, complete) = quadratic_rational_roots(&poly)?;
                    roots.extend(found);
                    return Ok(RootReport { roots, complete });
                }
                Some(_) => {
                    // rational root theorem on the integer-cleared polynomial
                    match poly.one_rational_root() {
                        Some(r) => {
                            // divide out (t - r)
                            let lin = UniPoly::new(
                                Field::Rational,
                                vec![r.neg(), Scalar::one(Field::Rational)],
                            );
                            let (q, rem) = poly.div_rem(&lin);
                            debug_assert!(rem.is_zero());
                            roots.push(r);
                            poly = q;
                        }
                        None => return Ok(RootReport { roots, complete: false }),
                    }
                }
            }
        }
    }

    /// One rational root of a degree >= 3 polynomial, if the coefficient
    /// sizes allow divisor enumeration.
    fn one_rational_root(&self) -> Option<Scalar> {
        let mut denom_lcm = BigInt::one();
        for c in &self.coeffs {
            denom_lcm = num::Integer::lcm(&denom_lcm, c.to_rational().unwrap().denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.to_rational().unwrap();
                r.numer() * (&denom_lcm / r.denom())
            })
            .collect();
        let a0 = ints.first()?.clone();
        let an = ints.last()?.clone();
        let a0s: i128 = i128::try_from(&a0).ok()?;
        let ans: i128 = i128::try_from(&an).ok()?;
        if a0s == 0 {
            return Some(Scalar::from_i64(Field::Rational, 0));
        }
        let ps = divisors_i128(a0s.unsigned_abs());
        let qs = divisors_i128(ans.unsigned_abs());
        for p in &ps {
            for q in &qs {
                for sign in [1i128, -1] {
                    let cand = Scalar::Rat(BigRational::new(
                        BigInt::from(sign * *p as i128),
                        BigInt::from(*q as i128),
                    ));
                    if self.eval(&cand).is_zero() {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}

/// Roots found over the base field, with a flag telling whether factors
/// without base-field roots remain.
#[derive(Debug, Clone)]
pub struct RootReport {
    pub roots: Vec<Scalar>,
    pub complete: bool,
}

/// Exact quadratic formula over Q. `complete` is false only when the
/// discriminant is a non-square (roots exist only over an extension).
fn quadratic_rational_roots(p: &UniPoly) -> Result<(Vec<Scalar>, bool)> {
    let a = p.coeff(2);
    let b = p.coeff(1);
    let c = p.coeff(0);
    let disc = b.mul(&b).sub(&a.mul(&c).mul(&Scalar::from_i64(Field::Rational, 4)));
    match disc.sqrt_exact() {
        None => Ok((vec![], false)),
        Some(s) => {
            let two_a = a.mul(&Scalar::from_i64(Field::Rational, 2));
            let r1 = b.neg().add(&s).div(&two_a)?;
            let r2 = b.neg().sub(&s).div(&two_a)?;
            let mut roots = vec![r1.clone()];
            if r2 != r1 {
                roots.push(r2);
            }
            Ok((roots, true))
        }
    }
}

fn divisors_i128(n: u128) -> Vec<u128> {
    let mut out = vec![];
    let mut d = 1u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
        if d > 1_000_000 {
            // coefficient too composite for desk-scale enumeration
            break;
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(coeffs: &[i64]) -> UniPoly {
        UniPoly::new(
            Field::Rational,
            coeffs
                .iter()
                .map(|&c| Scalar::from_i64(Field::Rational, c))
                .collect(),
        )
    }

    #[test]
    fn div_rem_round_trip() {
        let a = qp(&[1, 0, -3, 2]); // 2t^3 - 3t^2 + 1
        let b = qp(&[-1, 1]); // t - 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_monic() {
        let a = qp(&[-1, 0, 1]); // t^2 - 1
        let b = qp(&[1, 1]); // t + 1
        let g = a.gcd(&b);
        assert_eq!(g, qp(&[1, 1]));
    }

    #[test]
    fn quadratic_roots_exact() {
        // t^2 - 5t + 6 = (t-2)(t-3)
        let p = qp(&[6, -5, 1]);
        let rep = p.roots_in_field().unwrap();
        assert!(rep.complete);
        assert_eq!(rep.roots.len(), 2);
        // t^2 - 2 has no rational roots
        let p = qp(&[-2, 0, 1]);
        let rep = p.roots_in_field().unwrap();
        assert!(rep.roots.is_empty());
        assert!(!rep.complete);
    }

    #[test]
    fn quartic_rational_roots() {
        // (t-1)(t-2)(t^2+1): rational roots 1, 2; irreducible quadratic remains
        let p = qp(&[-1, 1]).mul(&qp(&[-2, 1])).mul(&qp(&[1, 0, 1]));
        let rep = p.roots_in_field().unwrap();
        assert_eq!(rep.roots.len(), 2);
        assert!(!rep.complete);
    }

    #[test]
    fn finite_field_root_scan() {
        let f7 = Field::prime(7).unwrap();
        // t^2 + 1 over F_7: no roots (-1 is not a QR mod 7)
        let p = UniPoly::new(f7, vec![Scalar::one(f7), Scalar::zero(f7), Scalar::one(f7)]);
        let rep = p.roots_in_field().unwrap();
        assert!(rep.roots.is_empty() && rep.complete);
        // t^2 - 2 over F_7: 3 and 4
        let p = UniPoly::new(
            f7,
            vec![Scalar::from_i64(f7, -2), Scalar::zero(f7), Scalar::one(f7)],
        );
        let rep = p.roots_in_field().unwrap();
        assert_eq!(rep.roots.len(), 2);
    }
}
