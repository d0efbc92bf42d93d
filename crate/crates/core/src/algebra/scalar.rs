use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::algebra::field::{mul_mod, Field};
use crate::error::{Error, Result};

/// An exact element of the coefficient field: a rational in lowest terms
/// with positive denominator, a residue mod p, or a bit-polynomial in a
/// small binary extension field.
///
/// Mixed-field arithmetic is a programming error and panics; public entry
/// points validate fields before arithmetic starts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
    F2k { v: u8, k: u8 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp { v: 0, p },
            Field::Char2Ext(k) => Scalar::F2k { v: 0, k },
        }
    }

    pub fn one(field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar::Rat(BigRational::one()),
            Field::Prime(p) => Scalar::Fp { v: 1, p },
            Field::Char2Ext(k) => Scalar::F2k { v: 1, k },
        }
    }

    /// Embed a signed integer. Over F_{2^k} the image is the parity (the
    /// prime subfield); use [`Scalar::from_bits`] for extension elements.
    pub fn from_i64(field: Field, n: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { v: r, p }
            }
            Field::Char2Ext(k) => Scalar::F2k { v: (n.rem_euclid(2)) as u8, k },
        }
    }

    /// Element of F_{2^k} from its polynomial bit representation.
    pub fn from_bits(field: Field, bits: u8) -> Result<Scalar> {
        match field {
            Field::Char2Ext(k) => {
                if bits < (1 << k) {
                    Ok(Scalar::F2k { v: bits, k })
                } else {
                    Err(Error::Validation(format!("{bits} out of range for F_2^{k}")))
                }
            }
            _ => Err(Error::Validation("from_bits needs a char-2 extension field".into())),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
            Scalar::F2k { k, .. } => Field::Char2Ext(*k),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::F2k { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::F2k { v, .. } => *v == 1,
        }
    }

    fn check_same(&self, rhs: &Scalar) {
        assert_eq!(
            self.field(),
            rhs.field(),
            "scalar arithmetic across fields: {} vs {}",
            self.field(),
            rhs.field()
        );
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => {
                let s = a + b;
                Scalar::Fp { v: if s >= *p { s - p } else { s }, p: *p }
            }
            (Scalar::F2k { v: a, k }, Scalar::F2k { v: b, .. }) => Scalar::F2k { v: a ^ b, k: *k },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
            Scalar::F2k { .. } => self.clone(),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => {
                Scalar::Fp { v: mul_mod(*a, *b, *p), p: *p }
            }
            (Scalar::F2k { v: a, k }, Scalar::F2k { v: b, .. }) => {
                Scalar::F2k { v: Field::char2_mul(*k, *a, *b), k: *k }
            }
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("scalar inverse".into()));
        }
        Ok(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: inv_mod(*v, *p), p: *p },
            Scalar::F2k { v, k } => {
                Scalar::F2k { v: Field::char2_inv(*k, *v).expect("nonzero"), k: *k }
            }
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// i! as a field element; None when the characteristic divides it.
    pub fn factorial(field: Field, i: u32) -> Option<Scalar> {
        let mut acc = Scalar::one(field);
        for j in 1..=i {
            acc = acc.mul(&Scalar::from_i64(field, j as i64));
            if acc.is_zero() {
                return None;
            }
        }
        Some(acc)
    }

    /// Exact square root over the rationals, if one exists.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                    Some(Scalar::Rat(BigRational::new(n, d)))
                } else {
                    None
                }
            }
            Scalar::Fp { v, p } => fp_sqrt(*v, *p).map(|s| Scalar::Fp { v: s, p: *p }),
            Scalar::F2k { v, k } => {
                // squaring is a bijection in characteristic 2
                let q = 1u32 << k;
                let mut root = *v;
                for _ in 0..(k - 1) {
                    root = Field::char2_mul(*k, root, root);
                }
                debug_assert_eq!(Field::char2_mul(*k, root, root), *v);
                let _ = q;
                Some(Scalar::F2k { v: root, k: *k })
            }
        }
    }

    /// Residue value for finite-field scalars.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Fp { v, .. } => Some(*v),
            Scalar::F2k { v, .. } => Some(*v as u64),
            Scalar::Rat(_) => None,
        }
    }

    pub fn to_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid on i128 to dodge overflow
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "inverse of non-unit mod {p}");
    t.rem_euclid(p as i128) as u64
}

/// Tonelli-Shanks square root mod an odd prime.
fn fp_sqrt(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    let pow = |b: u64, e: u64| -> u64 {
        let mut acc = 1u64;
        let mut b = b % p;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, b, p);
            }
            b = mul_mod(b, b, p);
            e >>= 1;
        }
        acc
    };
    if pow(a, (p - 1) / 2) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow(a, (p + 1) / 4));
    }
    // Tonelli-Shanks
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow(z, (p - 1) / 2) == 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow(z, q);
    let mut t = pow(a, q);
    let mut r = pow(a, (q + 1) / 2);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul_mod(b, b, p);
        }
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used for canonical forms and deterministic iteration.
/// Scalars of different fields sort by field tag first; that case never
/// arises in well-formed data.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Fp { v: a, .. }, Scalar::Fp { v: b, .. }) => a.cmp(b),
            (Scalar::F2k { v: a, .. }, Scalar::F2k { v: b, .. }) => a.cmp(b),
            _ => self.field().cmp(&other.field()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
            Scalar::F2k { v, .. } => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normalization_is_canonical() {
        // lowest terms with positive denominator, idempotent
        let a = Scalar::from_ratio(6, -4);
        let b = Scalar::from_ratio(-3, 2);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "-3/2");
        let again = Scalar::from_ratio(-3, 2);
        assert_eq!(a, again);
    }

    #[test]
    fn fp_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = Scalar::from_i64(f, 5);
        let b = Scalar::from_i64(f, 4);
        assert_eq!(a.add(&b), Scalar::from_i64(f, 2));
        assert_eq!(a.mul(&b), Scalar::from_i64(f, 6));
        assert_eq!(a.inv().unwrap(), Scalar::from_i64(f, 3));
        assert_eq!(Scalar::from_i64(f, -1), Scalar::from_i64(f, 6));
    }

    #[test]
    fn no_cross_field_mixing() {
        let a = Scalar::from_i64(Field::Rational, 1);
        let b = Scalar::from_i64(Field::prime(5).unwrap(), 1);
        let res = std::panic::catch_unwind(|| a.add(&b));
        assert!(res.is_err());
    }

    #[test]
    fn factorial_guard() {
        let f5 = Field::prime(5).unwrap();
        assert!(Scalar::factorial(f5, 4).is_some());
        assert!(Scalar::factorial(f5, 5).is_none());
        assert!(Scalar::factorial(Field::Rational, 20).is_some());
    }

    #[test]
    fn sqrt_paths() {
        let q = Scalar::from_ratio(9, 25);
        assert_eq!(q.sqrt_exact().unwrap(), Scalar::from_ratio(3, 5));
        assert!(Scalar::from_ratio(2, 1).sqrt_exact().is_none());

        let f13 = Field::prime(13).unwrap();
        let s = Scalar::from_i64(f13, 4).sqrt_exact().unwrap();
        assert_eq!(s.mul(&s), Scalar::from_i64(f13, 4));
        assert!(Scalar::from_i64(f13, 5).sqrt_exact().is_none());

        let f16 = Field::char2_ext(4).unwrap();
        for v in 0..16u8 {
            let x = Scalar::from_bits(f16, v).unwrap();
            let r = x.sqrt_exact().unwrap();
            assert_eq!(r.mul(&r), x);
        }
    }

    #[test]
    fn char2_embedding_is_parity() {
        let f4 = Field::char2_ext(2).unwrap();
        assert_eq!(Scalar::from_i64(f4, 3), Scalar::one(f4));
        assert_eq!(Scalar::from_i64(f4, 2), Scalar::zero(f4));
        let g = Scalar::from_bits(f4, 2).unwrap();
        assert_eq!(g.neg(), g);
    }
}
