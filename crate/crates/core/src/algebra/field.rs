use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduction polynomials for the small binary extension fields, as bit
/// vectors (x^4 + x + 1 = 0b10011 and so on).
const CHAR2_MODULI: [(u8, u16); 3] = [(2, 0b111), (3, 0b1011), (4, 0b10011)];

/// The coefficient field every value in the workbench lives over.
///
/// Scalars of different fields never mix; operations reject mismatches
/// instead of coercing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    /// The rationals, with arbitrary-precision values.
    Rational,
    /// A prime field F_p, p < 2^61.
    Prime(u64),
    /// F_{2^k} for k in {2, 3, 4}, represented by polynomial bit vectors.
    Char2Ext(u8),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 61 {
            return Err(Error::UnsupportedField(format!("p = {p} exceeds 2^61")));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    /// Binary extension field of order 2^k.
    pub fn char2_ext(k: u8) -> Result<Field> {
        if CHAR2_MODULI.iter().any(|&(kk, _)| kk == k) {
            Ok(Field::Char2Ext(k))
        } else {
            Err(Error::UnsupportedField(format!(
                "char-2 extension degree {k} not supported (use 2, 3 or 4)"
            )))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
            Field::Char2Ext(_) => 2,
        }
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p),
            Field::Char2Ext(k) => Some(1 << k),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    fn reduction_poly(k: u8) -> u16 {
        CHAR2_MODULI
            .iter()
            .find(|&&(kk, _)| kk == k)
            .map(|&(_, m)| m)
            .expect("validated on construction")
    }

    pub(crate) fn char2_mul(k: u8, a: u8, b: u8) -> u8 {
        // Carry-less multiply then reduce by the field polynomial.
        let mut acc: u16 = 0;
        let mut b16 = b as u16;
        let mut a16 = a as u16;
        while a16 != 0 {
            if a16 & 1 != 0 {
                acc ^= b16;
            }
            a16 >>= 1;
            b16 <<= 1;
        }
        let modulus = Field::reduction_poly(k);
        let mbits = 16 - modulus.leading_zeros();
        while 16 - acc.leading_zeros() >= mbits {
            let shift = (16 - acc.leading_zeros()) - mbits;
            acc ^= modulus << shift;
        }
        acc as u8
    }

    pub(crate) fn char2_inv(k: u8, a: u8) -> Option<u8> {
        if a == 0 {
            return None;
        }
        // a^(q-2) by exhaustion; the fields have at most 16 elements.
        let q = 1u32 << k;
        let mut acc = 1u8;
        for _ in 0..(q - 2) {
            acc = Field::char2_mul(k, acc, a);
        }
        Some(acc)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Char2Ext(k) => write!(f, "F_2^{k}"),
        }
    }
}

/// Serialized form used in arrangement documents: "rational", {"char": p},
/// or {"char2ext": k}.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum FieldDesc {
    Name(String),
    Prime { char: u64 },
    Char2 { char2ext: u8 },
}

impl FieldDesc {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldDesc::Name(s) if s == "rational" => Ok(Field::Rational),
            FieldDesc::Name(s) => Err(Error::UnsupportedField(s.clone())),
            FieldDesc::Prime { char } => Field::prime(*char),
            FieldDesc::Char2 { char2ext } => Field::char2_ext(*char2ext),
        }
    }

    pub fn from_field(field: Field) -> FieldDesc {
        match field {
            Field::Rational => FieldDesc::Name("rational".into()),
            Field::Prime(p) => FieldDesc::Prime { char: p },
            Field::Char2Ext(k) => FieldDesc::Char2 { char2ext: k },
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
