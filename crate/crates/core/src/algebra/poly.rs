use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::algebra::field::Field;
use crate::algebra::scalar::Scalar;
use crate::error::{Error, Result};

/// Exponent vector ordered by graded lexicographic order with x > y > z.
/// The BTreeMap iterates ascending, so the last entry is the leading term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exp<const N: usize>(pub [u32; N]);

impl<const N: usize> Exp<N> {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl<const N: usize> Ord for Exp<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl<const N: usize> PartialOrd for Exp<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over one of the workbench fields.
/// No zero coefficients are ever stored; the zero polynomial is the empty
/// term map and reports degree `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<const N: usize> {
    field: Field,
    terms: BTreeMap<Exp<N>, Scalar>,
}

pub type BivarPoly = Poly<2>;
pub type TrivarPoly = Poly<3>;

impl<const N: usize> Poly<N> {
    pub fn zero(field: Field) -> Self {
        Poly { field, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        let mut p = Poly::zero(field);
        p.add_term(Exp([0; N]), c);
        p
    }

    pub fn monomial(field: Field, exps: [u32; N], c: Scalar) -> Self {
        assert_eq!(c.field(), field);
        let mut p = Poly::zero(field);
        p.add_term(Exp(exps), c);
        p
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = ([u32; N], Scalar)>) -> Self {
        let mut p = Poly::zero(field);
        for (e, c) in terms {
            assert_eq!(c.field(), field, "coefficient field mismatch");
            p.add_term(Exp(e), c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` marks the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.total()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e.0[var]).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp<N>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: [u32; N]) -> Scalar {
        self.terms
            .get(&Exp(exps))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Leading term under grlex with x > y > z.
    pub fn leading(&self) -> Option<(&Exp<N>, &Scalar)> {
        self.terms.last_key_value()
    }

    fn add_term(&mut self, e: Exp<N>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().add(&c);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    slot.insert(sum);
                }
            }
        }
    }

    fn check_same(&self, rhs: &Self) {
        assert_eq!(self.field, rhs.field, "polynomial arithmetic across fields");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_same(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Poly::zero(self.field);
        for (e, c) in &self.terms {
            out.terms.insert(*e, c.neg());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_same(rhs);
        let mut out = Poly::zero(self.field);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0u32; N];
                for i in 0..N {
                    e[i] = ea.0[i] + eb.0[i];
                }
                out.add_term(Exp(e), ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = Poly::zero(self.field);
        for (e, v) in &self.terms {
            out.terms.insert(*e, v.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::constant(Scalar::one(self.field));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation at a point of k^N.
    pub fn eval(&self, point: &[Scalar; N]) -> Result<Scalar> {
        for c in point.iter() {
            if c.field() != self.field {
                return Err(Error::FieldMismatch(
                    self.field.to_string(),
                    c.field().to_string(),
                ));
            }
        }
        // power tables per variable
        let mut tables: Vec<Vec<Scalar>> = Vec::with_capacity(N);
        for v in 0..N {
            let dmax = self.degree_in(v).unwrap_or(0) as usize;
            let mut t = Vec::with_capacity(dmax + 1);
            t.push(Scalar::one(self.field));
            for i in 1..=dmax {
                let prev = t[i - 1].mul(&point[v]);
                t.push(prev);
            }
            tables.push(t);
        }
        let mut acc = Scalar::zero(self.field);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for v in 0..N {
                term = term.mul(&tables[v][e.0[v] as usize]);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Formal partial derivative in the given variable.
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < N);
        let mut out = Poly::zero(self.field);
        for (e, c) in &self.terms {
            if e.0[var] == 0 {
                continue;
            }
            let mut ne = e.0;
            ne[var] -= 1;
            let factor = Scalar::from_i64(self.field, e.0[var] as i64);
            out.add_term(Exp(ne), c.mul(&factor));
        }
        out
    }

    /// Substitute each variable by an affine-linear polynomial; used for
    /// translations and coordinate changes.
    pub fn substitute_linear(&self, images: &[Poly<N>; N]) -> Self {
        // cache powers of each image up to the needed degree
        let mut pow_cache: Vec<Vec<Poly<N>>> = Vec::with_capacity(N);
        for v in 0..N {
            let dmax = self.degree_in(v).unwrap_or(0);
            let mut t = Vec::with_capacity(dmax as usize + 1);
            t.push(Poly::constant(Scalar::one(self.field)));
            for i in 1..=dmax {
                let next = t[(i - 1) as usize].mul(&images[v]);
                t.push(next);
            }
            pow_cache.push(t);
        }
        let mut out = Poly::zero(self.field);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for v in 0..N {
                term = term.mul(&pow_cache[v][e.0[v] as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Divide every coefficient so the grlex-leading coefficient becomes 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.inv().expect("leading coefficient nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Canonical representative of the scalar-multiple class: monic over
    /// finite fields; integer-primitive with positive leading coefficient
    /// over the rationals.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        match self.field {
            Field::Rational => {
                let (prim, _) = self.rational_primitive();
                prim
            }
            _ => self.monic(),
        }
    }

    /// Over the rationals: clear denominators and divide by integer content,
    /// sign-normalized so the leading coefficient is positive. Returns the
    /// primitive polynomial and the rational unit that was divided out.
    pub fn rational_primitive(&self) -> (Self, Scalar) {
        assert_eq!(self.field, Field::Rational);
        if self.is_zero() {
            return (self.clone(), Scalar::one(self.field));
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            let r = c.to_rational().unwrap();
            denom_lcm = denom_lcm.lcm(r.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.terms.values() {
            let r = c.to_rational().unwrap();
            let scaled = r.numer() * (&denom_lcm / r.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        let mut unit = BigRational::new(numer_gcd, denom_lcm);
        let lead = self.leading().unwrap().1.to_rational().unwrap();
        if (lead / &unit).is_negative() {
            unit = -unit;
        }
        let inv = Scalar::Rat(unit.clone()).inv().expect("nonzero content");
        (self.scale(&inv), Scalar::Rat(unit))
    }

    /// Quotient for exact divisors. Returns None when the division leaves a
    /// remainder. Single-divisor reduction under grlex always makes progress
    /// at the leading term when divisibility holds.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        self.check_same(divisor);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.field);
        let (dexp, dc) = {
            let (e, c) = divisor.leading().unwrap();
            (*e, c.clone())
        };
        let dc_inv = dc.inv().ok()?;
        while !rem.is_zero() {
            let (rexp, rc) = {
                let (e, c) = rem.leading().unwrap();
                (*e, c.clone())
            };
            let mut q = [0u32; N];
            for i in 0..N {
                if rexp.0[i] < dexp.0[i] {
                    return None;
                }
                q[i] = rexp.0[i] - dexp.0[i];
            }
            let qc = rc.mul(&dc_inv);
            let qterm = Poly::monomial(self.field, q, qc);
            rem = rem.sub(&qterm.mul(divisor));
            quot = quot.add(&qterm);
        }
        Some(quot)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = Poly::zero(self.field);
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }
}

impl BivarPoly {
    pub fn var_x(field: Field) -> Self {
        Poly::monomial(field, [1, 0], Scalar::one(field))
    }

    pub fn var_y(field: Field) -> Self {
        Poly::monomial(field, [0, 1], Scalar::one(field))
    }

    /// P(x + x0, y + y0).
    pub fn translate(&self, x0: &Scalar, y0: &Scalar) -> Self {
        let f = self.field;
        let ix = BivarPoly::var_x(f).add(&Poly::constant(x0.clone()));
        let iy = BivarPoly::var_y(f).add(&Poly::constant(y0.clone()));
        self.substitute_linear(&[ix, iy])
    }

    pub fn eval2(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        self.eval(&[x.clone(), y.clone()])
    }

    /// Lift into `k[x,y,z]` with z-exponent zero.
    pub fn to_trivar(&self) -> TrivarPoly {
        let mut out = TrivarPoly::zero(self.field);
        for (e, c) in &self.terms {
            out.add_term(Exp([e.0[0], e.0[1], 0]), c.clone());
        }
        out
    }
}

impl TrivarPoly {
    pub fn var(field: Field, v: usize) -> Self {
        let mut e = [0u32; 3];
        e[v] = 1;
        Poly::monomial(field, e, Scalar::one(field))
    }

    pub fn eval3(&self, x: &Scalar, y: &Scalar, z: &Scalar) -> Result<Scalar> {
        self.eval(&[x.clone(), y.clone(), z.clone()])
    }
}

pub(crate) const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

impl<const N: usize> fmt::Display for Poly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // leading term first
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mut mag = c.clone();
            let negative = match c {
                Scalar::Rat(r) => r.is_negative(),
                _ => false,
            };
            if negative {
                mag = c.neg();
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.total() == 0;
            let mut wrote = false;
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for v in 0..N {
                if e.0[v] == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "{}", VAR_NAMES[v])?;
                if e.0[v] > 1 {
                    write!(f, "^{}", e.0[v])?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}
