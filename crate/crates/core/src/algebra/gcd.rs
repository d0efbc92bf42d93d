//! Bivariate gcd via pseudo-remainder sequences with content extraction,
//! treating y as the main variable over `k[x]`. Exact over the rationals and
//! over the finite fields, and fast enough for the degree range the
//! arrangements use.

use crate::algebra::field::Field;
use crate::algebra::poly::BivarPoly;
use crate::algebra::scalar::Scalar;
use crate::algebra::unipoly::UniPoly;
use crate::error::{Error, Result};

/// View of a bivariate polynomial as a univariate in y with `k[x]` coefficients.
#[derive(Debug, Clone)]
struct YPoly {
    field: Field,
    /// coeffs[j] is the `k[x]` coefficient of y^j.
    coeffs: Vec<UniPoly>,
}

impl YPoly {
    fn from_bivar(p: &BivarPoly) -> Self {
        let field = p.field();
        let dy = p.degree_in(1).unwrap_or(0) as usize;
        let mut cols: Vec<Vec<Scalar>> = vec![vec![]; dy + 1];
        for (e, c) in p.terms() {
            let (i, j) = (e.0[0] as usize, e.0[1] as usize);
            if cols[j].len() <= i {
                cols[j].resize(i + 1, Scalar::zero(field));
            }
            cols[j][i] = c.clone();
        }
        let mut coeffs: Vec<UniPoly> = cols
            .into_iter()
            .map(|v| UniPoly::new(field, v))
            .collect();
        while coeffs.last().map_or(false, UniPoly::is_zero) {
            coeffs.pop();
        }
        YPoly { field, coeffs }
    }

    fn to_bivar(&self) -> BivarPoly {
        let mut out = BivarPoly::zero(self.field);
        for (j, c) in self.coeffs.iter().enumerate() {
            for (i, s) in c.coeffs().iter().enumerate() {
                if !s.is_zero() {
                    out = out.add(&BivarPoly::monomial(
                        self.field,
                        [i as u32, j as u32],
                        s.clone(),
                    ));
                }
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn deg_y(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    fn leading(&self) -> &UniPoly {
        self.coeffs.last().expect("nonzero")
    }

    /// gcd of the `k[x]` coefficients.
    fn content(&self) -> UniPoly {
        let mut g = UniPoly::zero(self.field);
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    fn div_content(&self, content: &UniPoly) -> YPoly {
        if content.degree() == Some(0) {
            let inv = content.coeff(0).inv().unwrap();
            return YPoly {
                field: self.field,
                coeffs: self.coeffs.iter().map(|c| c.scale(&inv)).collect(),
            };
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(content);
                debug_assert!(r.is_zero(), "content must divide every coefficient");
                q
            })
            .collect();
        YPoly { field: self.field, coeffs }
    }

    fn primitive(&self) -> YPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        self.div_content(&c)
    }

    fn scale_uni(&self, f: &UniPoly) -> YPoly {
        YPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect(),
        }
    }

    fn sub(&self, rhs: &YPoly) -> YPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = UniPoly::zero(self.field);
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).unwrap_or(&zero);
            let b = rhs.coeffs.get(i).unwrap_or(&zero);
            coeffs.push(a.sub(b));
        }
        while coeffs.last().map_or(false, UniPoly::is_zero) {
            coeffs.pop();
        }
        YPoly { field: self.field, coeffs }
    }

    fn shift_y(&self, by: usize) -> YPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![UniPoly::zero(self.field); by];
        coeffs.extend(self.coeffs.iter().cloned());
        YPoly { field: self.field, coeffs }
    }

    /// Pseudo-remainder of self by rhs in `(k[x])[y]`.
    fn prem(&self, rhs: &YPoly) -> YPoly {
        let dr = rhs.deg_y().expect("nonzero divisor");
        let lead = rhs.leading().clone();
        let mut rem = self.clone();
        loop {
            let dd = match rem.deg_y() {
                None => return rem,
                Some(d) => d,
            };
            if dd < dr {
                return rem;
            }
            let rl = rem.leading().clone();
            // lead * rem - rl * y^(dd-dr) * rhs kills the top term
            rem = rem
                .scale_uni(&lead)
                .sub(&rhs.shift_y(dd - dr).scale_uni(&rl));
            debug_assert!(rem.deg_y().map_or(true, |d| d < dd));
        }
    }
}

/// A greatest common divisor, canonically normalized: integer-primitive with
/// positive leading coefficient over the rationals, grlex-monic over the
/// finite fields. Errors when both inputs are zero.
pub fn poly_gcd(a: &BivarPoly, b: &BivarPoly) -> Result<BivarPoly> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(
            a.field().to_string(),
            b.field().to_string(),
        ));
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a.is_zero() {
        return Ok(b.canonical());
    }
    if b.is_zero() {
        return Ok(a.canonical());
    }
    let field = a.field();
    let ya = YPoly::from_bivar(a);
    let yb = YPoly::from_bivar(b);

    // pure k[x] inputs reduce to univariate gcds
    let da = ya.deg_y().unwrap();
    let db = yb.deg_y().unwrap();
    if da == 0 && db == 0 {
        let g = ya.coeffs[0].gcd(&yb.coeffs[0]);
        return Ok(uni_to_bivar(field, &g).canonical());
    }
    if da == 0 {
        let g = ya.coeffs[0].gcd(&yb.content());
        return Ok(uni_to_bivar(field, &g).canonical());
    }
    if db == 0 {
        let g = yb.coeffs[0].gcd(&ya.content());
        return Ok(uni_to_bivar(field, &g).canonical());
    }

    let cont_gcd = ya.content().gcd(&yb.content());
    let (mut r0, mut r1) = if da >= db {
        (ya.primitive(), yb.primitive())
    } else {
        (yb.primitive(), ya.primitive())
    };
    loop {
        let rem = r0.prem(&r1);
        if rem.is_zero() {
            break;
        }
        r0 = r1;
        r1 = rem.primitive();
    }
    let g = r1.primitive().to_bivar();
    let cont = uni_to_bivar(field, &cont_gcd);
    Ok(g.mul(&cont).canonical())
}

fn uni_to_bivar(field: Field, u: &UniPoly) -> BivarPoly {
    let mut out = BivarPoly::zero(field);
    for (i, c) in u.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&BivarPoly::monomial(field, [i as u32, 0], c.clone()));
        }
    }
    out
}

/// Resultant of a and b with respect to y: a univariate polynomial in x,
/// computed as the Sylvester determinant by fraction-free elimination over
/// `k[x]`. Zero iff the inputs share a factor of positive y-degree.
pub fn resultant_y(a: &BivarPoly, b: &BivarPoly) -> Result<UniPoly> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(
            a.field().to_string(),
            b.field().to_string(),
        ));
    }
    let field = a.field();
    if a.is_zero() || b.is_zero() {
        return Ok(UniPoly::zero(field));
    }
    let ya = YPoly::from_bivar(a);
    let yb = YPoly::from_bivar(b);
    let m = ya.deg_y().unwrap();
    let n = yb.deg_y().unwrap();
    if m == 0 && n == 0 {
        return Ok(UniPoly::constant(Scalar::one(field)));
    }
    if m == 0 {
        // res(a, b) = a^deg_y(b)
        let mut acc = UniPoly::constant(Scalar::one(field));
        for _ in 0..n {
            acc = acc.mul(&ya.coeffs[0]);
        }
        return Ok(acc);
    }
    if n == 0 {
        let mut acc = UniPoly::constant(Scalar::one(field));
        for _ in 0..m {
            acc = acc.mul(&yb.coeffs[0]);
        }
        return Ok(acc);
    }
    let size = m + n;
    let zero = UniPoly::zero(field);
    let mut mat: Vec<Vec<UniPoly>> = vec![vec![zero.clone(); size]; size];
    for row in 0..n {
        for (j, c) in ya.coeffs.iter().enumerate() {
            mat[row][row + (m - j)] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in yb.coeffs.iter().enumerate() {
            mat[n + row][row + (n - j)] = c.clone();
        }
    }
    bareiss_det(field, mat)
}

/// Fraction-free determinant (Bareiss) over `k[x]`; all divisions are exact.
fn bareiss_det(field: Field, mut m: Vec<Vec<UniPoly>>) -> Result<UniPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(UniPoly::constant(Scalar::one(field)));
    }
    let mut sign = false;
    let mut prev = UniPoly::constant(Scalar::one(field));
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(UniPoly::zero(field)),
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&pivot).sub(&m[i][k].mul(&m[k][j]));
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][k] = UniPoly::zero(field);
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}
