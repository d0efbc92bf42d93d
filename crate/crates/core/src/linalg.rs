//! Exact linear algebra. A generic path over any workbench field for small
//! systems (tangent spaces, local quotients), a fraction-free integer path
//! for rational matrices, and a specialized residue path for the large
//! prime-field eliminations the vanishing-polynomial fits need.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};

use crate::algebra::field::mul_mod;
use crate::algebra::scalar::Scalar;

/// Reduced row echelon form in place. Returns the pivot column of each row
/// in order; the rank is the number of pivots.
pub fn rref(rows: &mut [Vec<Scalar>]) -> Vec<usize> {
    if rows.is_empty() {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..ncols {
        if r >= rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot nonzero");
        for j in c..ncols {
            rows[r][j] = rows[r][j].mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = rows[r][j].mul(&f);
                    rows[i][j] = rows[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    rref(&mut rows).len()
}

/// Basis of the right kernel {v : A v = 0} of the row matrix.
pub fn kernel_basis(
    mut rows: Vec<Vec<Scalar>>,
    ncols: usize,
    field: crate::algebra::Field,
) -> Vec<Vec<Scalar>> {
    let pivots = rref(&mut rows);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = vec![];
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Scalar::zero(field); ncols];
        v[free] = Scalar::one(field);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = rows[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Rank of a rational matrix by fraction-free (Bareiss) elimination after
/// clearing denominators; no rational arithmetic in the elimination loop.
pub fn rank_fraction_free(rows: &[Vec<Scalar>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for c in row {
                lcm = lcm.lcm(c.to_rational().expect("rational matrix").denom());
            }
            row.iter()
                .map(|c| {
                    let r = c.to_rational().unwrap();
                    r.numer() * (&lcm / r.denom())
                })
                .collect()
        })
        .collect();
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r >= nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let t = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                m[i][j] = &t / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Dense matrix over F_p with row operations tuned for the elimination
/// sizes the polynomial-method fits reach. For p below 2^21 the inner loops
/// defer reductions; larger moduli fall back to 128-bit products.
pub struct FpMat {
    pub p: u64,
    pub rows: Vec<Vec<u64>>,
}

const LAZY_LIMIT: u64 = 1 << 21;

impl FpMat {
    pub fn new(p: u64, rows: Vec<Vec<u64>>) -> Self {
        FpMat { p, rows }
    }

    /// dst -= f * src (mod p), written as dst += (p - f) * src.
    fn axpy(p: u64, dst: &mut [u64], src: &[u64], f: u64) {
        if f == 0 {
            return;
        }
        let g = p - f;
        if p < LAZY_LIMIT {
            // entries stay below p^2 + p < 2^63 before each reduction
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                *d = (*d + g * s) % p;
            }
        } else {
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                *d = ((*d as u128 + g as u128 * *s as u128) % p as u128) as u64;
            }
        }
    }

    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        if self.rows.is_empty() {
            return vec![];
        }
        let ncols = self.rows[0].len();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..ncols {
            if r >= self.rows.len() {
                break;
            }
            let Some(pr) = (r..self.rows.len()).find(|&i| self.rows[i][c] != 0) else {
                continue;
            };
            self.rows.swap(r, pr);
            let inv = inv_mod_u64(self.rows[r][c], p);
            for v in self.rows[r][c..].iter_mut() {
                *v = mul_mod(*v, inv, p);
            }
            let pivot_row = std::mem::take(&mut self.rows[r]);
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != r && !row.is_empty() && row[c] != 0 {
                    let f = row[c];
                    Self::axpy(p, &mut row[c..], &pivot_row[c..], f);
                    row[c] = 0;
                }
            }
            self.rows[r] = pivot_row;
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

pub fn inv_mod_u64(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1);
    t.rem_euclid(p as i128) as u64
}

/// Incremental column-dependency scan over F_p.
///
/// Columns are inserted in a fixed order; the structure maintains a reduced
/// echelon basis of the span of the inserted columns together with the
/// expression of each basis vector in terms of the originals. Inserting a
/// dependent column returns the dependency coefficients over all columns
/// inserted so far (the new column has coefficient 1).
pub struct FpColumnScan {
    p: u64,
    nrows: usize,
    inserted: usize,
    /// (pivot row, reduced column, combination over inserted columns)
    basis: Vec<(usize, Vec<u64>, Vec<u64>)>,
}

impl FpColumnScan {
    pub fn new(p: u64, nrows: usize) -> Self {
        FpColumnScan { p, nrows, inserted: 0, basis: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Insert one column (entries reduced mod p); `Some(coeffs)` signals a
    /// dependency `sum_i coeffs[i] * col_i = 0` with `coeffs[last] = 1`.
    pub fn insert(&mut self, mut col: Vec<u64>) -> Option<Vec<u64>> {
        assert_eq!(col.len(), self.nrows);
        let p = self.p;
        let mut comb = vec![0u64; self.inserted + 1];
        comb[self.inserted] = 1;
        self.inserted += 1;
        if p < LAZY_LIMIT {
            // Deferred reduction: basis vectors are reduced, so each update
            // adds less than p^2 per entry and the accumulators stay below
            // 2^63 for any desk-scale rank. Only pivot reads reduce.
            assert!((self.nrows as u64) < LAZY_LIMIT && (self.inserted as u64) < LAZY_LIMIT);
            for (pivot, bcol, bcomb) in &self.basis {
                let f = col[*pivot] % p;
                if f == 0 {
                    continue;
                }
                let g = p - f;
                for (d, s) in col.iter_mut().zip(bcol.iter()) {
                    *d += g * s;
                }
                for (c, s) in comb.iter_mut().zip(bcomb.iter()) {
                    *c += g * s;
                }
            }
            for v in col.iter_mut() {
                *v %= p;
            }
            for v in comb.iter_mut() {
                *v %= p;
            }
        } else {
            for (pivot, bcol, bcomb) in &self.basis {
                let f = col[*pivot];
                if f == 0 {
                    continue;
                }
                FpMat::axpy(p, &mut col, bcol, f);
                let g = p - f;
                for (c, s) in comb.iter_mut().zip(bcomb.iter()) {
                    *c = ((*c as u128 + g as u128 * *s as u128) % p as u128) as u64;
                }
            }
        }
        match col.iter().position(|&v| v != 0) {
            None => Some(comb),
            Some(pivot) => {
                let inv = inv_mod_u64(col[pivot], p);
                for v in col.iter_mut() {
                    *v = mul_mod(*v, inv, p);
                }
                for c in comb.iter_mut() {
                    *c = mul_mod(*c, inv, p);
                }
                self.basis.push((pivot, col, comb));
                None
            }
        }
    }
}

/// Column-dependency scan over the rationals, kept exact with big-rational
/// arithmetic. Only used at small sizes.
pub struct RatColumnScan {
    nrows: usize,
    inserted: usize,
    basis: Vec<(usize, Vec<BigRational>, Vec<BigRational>)>,
}

impl RatColumnScan {
    pub fn new(nrows: usize) -> Self {
        RatColumnScan { nrows, inserted: 0, basis: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn insert(&mut self, col: Vec<Scalar>) -> Option<Vec<Scalar>> {
        assert_eq!(col.len(), self.nrows);
        let mut col: Vec<BigRational> = col
            .into_iter()
            .map(|s| s.to_rational().expect("rational scan").clone())
            .collect();
        let mut comb = vec![BigRational::zero(); self.inserted + 1];
        comb[self.inserted] = BigRational::one();
        self.inserted += 1;
        for (pivot, bcol, bcomb) in &self.basis {
            let f = col[*pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (c, b) in col.iter_mut().zip(bcol.iter()) {
                *c -= &f * b;
            }
            for (c, b) in comb.iter_mut().zip(bcomb.iter()) {
                *c -= &f * b;
            }
        }
        match col.iter().position(|v| !v.is_zero()) {
            None => Some(comb.into_iter().map(Scalar::Rat).collect()),
            Some(pivot) => {
                let inv = col[pivot].recip();
                for v in col.iter_mut() {
                    *v *= &inv;
                }
                for c in comb.iter_mut() {
                    *c *= &inv;
                }
                self.basis.push((pivot, col, comb));
                None
            }
        }
    }
}
