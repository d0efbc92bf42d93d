use std::fmt;

use crate::algebra::field::Field;
use crate::algebra::gcd::poly_gcd;
use crate::algebra::poly::BivarPoly;
use crate::algebra::scalar::Scalar;
use crate::error::{Error, Result};

/// Bivariate rational function stored in lowest terms with a canonically
/// normalized denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunc {
    num: BivarPoly,
    den: BivarPoly,
}

impl RationalFunc {
    pub fn new(num: BivarPoly, den: BivarPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function denominator".into()));
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch(
                num.field().to_string(),
                den.field().to_string(),
            ));
        }
        if num.is_zero() {
            let field = num.field();
            return Ok(RationalFunc {
                num,
                den: BivarPoly::constant(Scalar::one(field)),
            });
        }
        let g = poly_gcd(&num, &den)?;
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        // normalize so the denominator is canonical
        let den_canon = den.canonical();
        let unit = den
            .leading()
            .unwrap()
            .1
            .div(den_canon.leading().unwrap().1)
            .expect("nonzero leading");
        let unit_inv = unit.inv().expect("unit");
        Ok(RationalFunc {
            num: num.scale(&unit_inv),
            den: den_canon,
        })
    }

    pub fn from_poly(p: BivarPoly) -> Self {
        let one = BivarPoly::constant(Scalar::one(p.field()));
        RationalFunc { num: p, den: one }
    }

    /// Construct from parts already known to be coprime, skipping the gcd;
    /// only the canonical denominator normalization is applied.
    pub fn from_coprime_parts(num: BivarPoly, den: BivarPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function denominator".into()));
        }
        if num.is_zero() {
            return Ok(RationalFunc::zero(num.field()));
        }
        debug_assert!(
            poly_gcd(&num, &den).map(|g| g.degree() == Some(0)).unwrap_or(false),
            "from_coprime_parts got reducible fraction"
        );
        let den_canon = den.canonical();
        let unit = den
            .leading()
            .unwrap()
            .1
            .div(den_canon.leading().unwrap().1)
            .expect("nonzero leading");
        let unit_inv = unit.inv().expect("unit");
        Ok(RationalFunc { num: num.scale(&unit_inv), den: den_canon })
    }

    pub fn zero(field: Field) -> Self {
        RationalFunc::from_poly(BivarPoly::zero(field))
    }

    pub fn field(&self) -> Field {
        self.num.field()
    }

    pub fn num(&self) -> &BivarPoly {
        &self.num
    }

    pub fn den(&self) -> &BivarPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Constant as a rational function: numerator and denominator both of
    /// degree zero.
    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero(self.field()));
        }
        if self.num.degree() == Some(0) && self.den.degree() == Some(0) {
            return self.num.leading().unwrap().1.div(self.den.leading().unwrap().1).ok();
        }
        None
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        RationalFunc::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        RationalFunc::new(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        RationalFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn neg(&self) -> Self {
        RationalFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    /// Formal partial derivative by the Leibniz rule, reduced.
    pub fn partial(&self, var: usize) -> Result<Self> {
        let dn = self.num.partial(var);
        let dd = self.den.partial(var);
        RationalFunc::new(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// Exact value at a plane point; errors where the denominator vanishes.
    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        let d = self.den.eval2(x, y)?;
        if d.is_zero() {
            return Err(Error::BadPoint(
                x.to_string(),
                y.to_string(),
                "denominator vanishes".into(),
            ));
        }
        self.num.eval2(x, y)?.div(&d)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.leading().unwrap().1.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
