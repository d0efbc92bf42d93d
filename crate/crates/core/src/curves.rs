//! Plane-curve objects: smoothness, tangent directions, affine
//! normalization, base-field point enumeration and the good/bad point
//! classification that the space-curve lifts rely on.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{BivarPoly, Field, Scalar};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Full-plane enumeration is restricted to fields of at most this order.
pub const SCAN_BOUND: u64 = 499;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanePoint {
    pub x: Scalar,
    pub y: Scalar,
}

impl PlanePoint {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        assert_eq!(x.field(), y.field());
        PlanePoint { x, y }
    }

    pub fn field(&self) -> Field {
        self.x.field()
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Projective tangent direction (u : v), canonicalized so the first nonzero
/// coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    u: Scalar,
    v: Scalar,
}

impl Direction {
    pub fn new(u: Scalar, v: Scalar) -> Result<Self> {
        if u.field() != v.field() {
            return Err(Error::FieldMismatch(u.field().to_string(), v.field().to_string()));
        }
        if u.is_zero() && v.is_zero() {
            return Err(Error::Validation("direction (0, 0) is not projective".into()));
        }
        if !u.is_zero() {
            let vi = v.div(&u)?;
            Ok(Direction { u: Scalar::one(u.field()), v: vi })
        } else {
            Ok(Direction { u, v: Scalar::one(v.field()) })
        }
    }

    pub fn u(&self) -> &Scalar {
        &self.u
    }

    pub fn v(&self) -> &Scalar {
        &self.v
    }

    pub fn is_vertical(&self) -> bool {
        self.u.is_zero()
    }

    /// The perpendicular direction under the bilinear form u*u' + v*v'.
    pub fn perp(&self) -> Direction {
        Direction::new(self.v.neg(), self.u.clone()).expect("perp of projective direction")
    }

    /// Orthogonal to itself; happens exactly over fields where -1 is a square.
    pub fn is_isotropic(&self) -> bool {
        self.u.mul(&self.u).add(&self.v.mul(&self.v)).is_zero()
    }

    pub fn orthogonal_to(&self, other: &Direction) -> bool {
        self.u.mul(&other.u).add(&self.v.mul(&other.v)).is_zero()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.u, self.v)
    }
}

/// Invertible affine map of the plane: point |-> L * point + t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    pub tx: Scalar,
    pub ty: Scalar,
}

impl AffineMap {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar, tx: Scalar, ty: Scalar) -> Result<Self> {
        let det = a.mul(&d).sub(&b.mul(&c));
        if det.is_zero() {
            return Err(Error::Validation("affine map is singular".into()));
        }
        Ok(AffineMap { a, b, c, d, tx, ty })
    }

    pub fn identity(field: Field) -> Self {
        AffineMap {
            a: Scalar::one(field),
            b: Scalar::zero(field),
            c: Scalar::zero(field),
            d: Scalar::one(field),
            tx: Scalar::zero(field),
            ty: Scalar::zero(field),
        }
    }

    pub fn det(&self) -> Scalar {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn apply(&self, p: &PlanePoint) -> PlanePoint {
        PlanePoint::new(
            self.a.mul(&p.x).add(&self.b.mul(&p.y)).add(&self.tx),
            self.c.mul(&p.x).add(&self.d.mul(&p.y)).add(&self.ty),
        )
    }

    pub fn inverse(&self) -> AffineMap {
        let det_inv = self.det().inv().expect("invertible by construction");
        let a = self.d.mul(&det_inv);
        let b = self.b.neg().mul(&det_inv);
        let c = self.c.neg().mul(&det_inv);
        let d = self.a.mul(&det_inv);
        let tx = a.mul(&self.tx).add(&b.mul(&self.ty)).neg();
        let ty = c.mul(&self.tx).add(&d.mul(&self.ty)).neg();
        AffineMap { a, b, c, d, tx, ty }
    }

    /// Defining polynomial of the image curve: P composed with the inverse
    /// map, so that Z(result) = self(Z(P)).
    pub fn push_curve_poly(&self, p: &BivarPoly) -> BivarPoly {
        let field = p.field();
        let inv = self.inverse();
        let ix = BivarPoly::from_terms(
            field,
            [
                ([1, 0], inv.a.clone()),
                ([0, 1], inv.b.clone()),
                ([0, 0], inv.tx.clone()),
            ],
        );
        let iy = BivarPoly::from_terms(
            field,
            [
                ([1, 0], inv.c.clone()),
                ([0, 1], inv.d.clone()),
                ([0, 0], inv.ty.clone()),
            ],
        );
        p.substitute_linear(&[ix, iy])
    }

    /// Whether the linear part preserves the form u*u' + v*v' (so
    /// orthogonality of directions is preserved).
    pub fn is_orthogonal_linear(&self) -> bool {
        let one = Scalar::one(self.a.field());
        let aa = self.a.mul(&self.a).add(&self.c.mul(&self.c));
        let bb = self.b.mul(&self.b).add(&self.d.mul(&self.d));
        let ab = self.a.mul(&self.b).add(&self.c.mul(&self.d));
        aa == one && bb == one && ab.is_zero()
    }
}

/// How the irreducibility hypothesis is attested for a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attestation {
    /// Checked by the policy in `verify_irreducible`.
    Verified,
    /// Built-in generators produce irreducible families by construction.
    AssertedByFamily,
    /// Accepted unverified; downstream results carry the hypothesis.
    Asserted,
}

/// An irreducible plane curve of bounded degree with cached gradient.
#[derive(Debug, Clone)]
pub struct PlaneCurve {
    poly: BivarPoly,
    degree: u32,
    px: BivarPoly,
    py: BivarPoly,
    attestation: Attestation,
}

impl PartialEq for PlaneCurve {
    fn eq(&self, other: &Self) -> bool {
        self.poly.canonical() == other.poly.canonical()
    }
}
impl Eq for PlaneCurve {}

impl PlaneCurve {
    /// Construct with the user-curve policy: square-freeness is checked when
    /// the characteristic allows, irreducibility per `verify_irreducible`.
    pub fn new(poly: BivarPoly) -> Result<Self> {
        check_square_free(&poly)?;
        let attestation = verify_irreducible(&poly)?;
        Self::with_attestation(poly, attestation)
    }

    /// Construct a member of a built-in family; the generator vouches for
    /// irreducibility.
    pub fn from_family(poly: BivarPoly) -> Result<Self> {
        Self::with_attestation(poly, Attestation::AssertedByFamily)
    }

    pub fn with_attestation(poly: BivarPoly, attestation: Attestation) -> Result<Self> {
        let Some(degree) = poly.degree() else {
            return Err(Error::ZeroPolynomial);
        };
        if degree == 0 {
            return Err(Error::Validation("constant polynomial defines no curve".into()));
        }
        check_square_free(&poly)?;
        let px = poly.partial(0);
        let py = poly.partial(1);
        Ok(PlaneCurve { poly, degree, px, py, attestation })
    }

    pub fn poly(&self) -> &BivarPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.poly.field()
    }

    pub fn dx(&self) -> &BivarPoly {
        &self.px
    }

    pub fn dy(&self) -> &BivarPoly {
        &self.py
    }

    pub fn attestation(&self) -> Attestation {
        self.attestation
    }

    pub fn contains(&self, p: &PlanePoint) -> Result<bool> {
        Ok(self.poly.eval2(&p.x, &p.y)?.is_zero())
    }

    pub fn gradient_at(&self, p: &PlanePoint) -> Result<(Scalar, Scalar)> {
        Ok((self.px.eval2(&p.x, &p.y)?, self.py.eval2(&p.x, &p.y)?))
    }

    /// True iff the gradient does not vanish at the (on-curve) point.
    pub fn is_smooth_at(&self, p: &PlanePoint) -> Result<bool> {
        if !self.contains(p)? {
            return Err(Error::NotOnCurve(p.x.to_string(), p.y.to_string()));
        }
        let (gx, gy) = self.gradient_at(p)?;
        Ok(!(gx.is_zero() && gy.is_zero()))
    }

    /// Canonical tangent direction at a smooth point: the kernel of the
    /// gradient, (dP/dy : -dP/dx).
    pub fn tangent_direction_at(&self, p: &PlanePoint) -> Result<Direction> {
        if !self.is_smooth_at(p)? {
            return Err(Error::SingularPoint(p.x.to_string(), p.y.to_string()));
        }
        let (gx, gy) = self.gradient_at(p)?;
        Direction::new(gy, gx.neg())
    }

    /// All points of the curve over its finite base field, in lexicographic
    /// order.
    pub fn points_finite(&self) -> Result<Vec<PlanePoint>> {
        let field = self.field();
        let Some(q) = field.order() else {
            return Err(Error::Validation(
                "point enumeration needs a finite field".into(),
            ));
        };
        if q > SCAN_BOUND {
            return Err(Error::ScanBound(format!("field order {q} exceeds {SCAN_BOUND}")));
        }
        let elems = field_elements(field)?;
        let mut out = vec![];
        for x in &elems {
            for y in &elems {
                if self.poly.eval2(x, y)?.is_zero() {
                    out.push(PlanePoint::new(x.clone(), y.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Image of the curve under an affine map, preserving the attestation.
    pub fn transformed(&self, map: &AffineMap) -> Result<PlaneCurve> {
        PlaneCurve::with_attestation(map.push_curve_poly(&self.poly), self.attestation)
    }

    /// Coefficient of x^deg is one.
    pub fn is_x_monic(&self) -> bool {
        self.poly.coeff([self.degree, 0]).is_one()
    }
}

/// gcd(P, dP/dx, dP/dy) must be constant; an identically-zero gradient
/// means P is a p-th power in characteristic p.
fn check_square_free(poly: &BivarPoly) -> Result<()> {
    let px = poly.partial(0);
    let py = poly.partial(1);
    if px.is_zero() && py.is_zero() {
        return Err(Error::NotSquareFree);
    }
    let mut g = poly.clone();
    for q in [&px, &py] {
        if !q.is_zero() {
            g = crate::algebra::poly_gcd(&g, q)?;
        }
    }
    if g.degree().unwrap_or(0) > 0 {
        return Err(Error::NotSquareFree);
    }
    Ok(())
}

/// All elements of a finite field in canonical order.
pub fn field_elements(field: Field) -> Result<Vec<Scalar>> {
    let Some(q) = field.order() else {
        return Err(Error::Validation("infinite field".into()));
    };
    let mut out = Vec::with_capacity(q as usize);
    for v in 0..q {
        out.push(match field {
            Field::Prime(_) => Scalar::from_i64(field, v as i64),
            Field::Char2Ext(_) => Scalar::from_bits(field, v as u8)?,
            Field::Rational => unreachable!(),
        });
    }
    Ok(out)
}

/// Irreducibility policy for user-supplied curves.
///
/// Lines are always irreducible. Over a finite field, degree <= 3 is settled
/// by exhaustive linear-factor search, and degree 4 additionally searches
/// quadratic factors when the field is small enough to enumerate them.
/// Over the rationals, degree <= 2 is settled by discriminant-style tests.
/// Anything else is accepted with an `Asserted` attestation.
pub fn verify_irreducible(poly: &BivarPoly) -> Result<Attestation> {
    let Some(deg) = poly.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    if deg <= 1 {
        return Ok(Attestation::Verified);
    }
    match poly.field() {
        Field::Rational => verify_irreducible_rational(poly, deg),
        field => {
            let q = field.order().unwrap();
            if q > SCAN_BOUND || deg > 4 {
                return Ok(Attestation::Asserted);
            }
            if let Some(factor) = find_linear_factor(poly)? {
                return Err(Error::Reducible(format!("linear factor {factor}")));
            }
            if deg <= 3 {
                return Ok(Attestation::Verified);
            }
            // degree 4: quadratic factors remain possible
            if q <= 11 {
                if let Some(factor) = find_quadratic_factor(poly)? {
                    return Err(Error::Reducible(format!("quadratic factor {factor}")));
                }
                Ok(Attestation::Verified)
            } else {
                Ok(Attestation::Asserted)
            }
        }
    }
}

fn verify_irreducible_rational(poly: &BivarPoly, deg: u32) -> Result<Attestation> {
    if deg > 2 {
        return Ok(Attestation::Asserted);
    }
    let f = poly.field();
    let dy = poly.degree_in(1).unwrap_or(0);
    let dx = poly.degree_in(0).unwrap_or(0);
    if dy == 0 {
        // univariate in x: reducible over Q iff it has a rational root
        let u =
            crate::algebra::UniPoly::new(f, (0..=dx).map(|i| poly.coeff([i, 0])).collect());
        return if u.roots_in_field()?.roots.is_empty() {
            Ok(Attestation::Verified)
        } else {
            Err(Error::Reducible("rational linear factor in x".into()))
        };
    }
    if dx == 0 {
        let u =
            crate::algebra::UniPoly::new(f, (0..=dy).map(|j| poly.coeff([0, j])).collect());
        return if u.roots_in_field()?.roots.is_empty() {
            Ok(Attestation::Verified)
        } else {
            Err(Error::Reducible("rational linear factor in y".into()))
        };
    }
    if dy == 1 {
        // A(x) y + B(x): irreducible iff gcd(A, B) is constant
        let a = crate::algebra::UniPoly::new(f, (0..=dx).map(|i| poly.coeff([i, 1])).collect());
        let b = crate::algebra::UniPoly::new(f, (0..=dx).map(|i| poly.coeff([i, 0])).collect());
        return if a.gcd(&b).degree().unwrap_or(0) == 0 {
            Ok(Attestation::Verified)
        } else {
            Err(Error::Reducible("content factor in x".into()))
        };
    }
    if dx == 1 {
        let a = crate::algebra::UniPoly::new(f, (0..=dy).map(|j| poly.coeff([1, j])).collect());
        let b = crate::algebra::UniPoly::new(f, (0..=dy).map(|j| poly.coeff([0, j])).collect());
        return if a.gcd(&b).degree().unwrap_or(0) == 0 {
            Ok(Attestation::Verified)
        } else {
            Err(Error::Reducible("content factor in y".into()))
        };
    }
    // genuine conic: nonzero determinant of the symmetric matrix certifies
    // irreducibility; degenerate conics may still lack rational factors
    let half = Scalar::from_ratio(1, 2);
    let a20 = poly.coeff([2, 0]);
    let a11 = poly.coeff([1, 1]).mul(&half);
    let a02 = poly.coeff([0, 2]);
    let a10 = poly.coeff([1, 0]).mul(&half);
    let a01 = poly.coeff([0, 1]).mul(&half);
    let a00 = poly.coeff([0, 0]);
    let det = a20
        .mul(&a02.mul(&a00).sub(&a01.mul(&a01)))
        .sub(&a11.mul(&a11.mul(&a00).sub(&a01.mul(&a10))))
        .add(&a10.mul(&a11.mul(&a01).sub(&a02.mul(&a10))));
    if !det.is_zero() {
        return Ok(Attestation::Verified);
    }
    // degenerate: splits rationally iff the y-discriminant is a square poly
    if rational_conic_splits(poly) {
        Err(Error::Reducible("degenerate conic with rational line factors".into()))
    } else {
        Ok(Attestation::Asserted)
    }
}

/// For a degenerate conic with deg_y = 2: factors over Q iff the
/// discriminant (in y) is the square of a polynomial.
fn rational_conic_splits(poly: &BivarPoly) -> bool {
    let f = poly.field();
    let a = crate::algebra::UniPoly::new(f, vec![poly.coeff([0, 2])]);
    let b = crate::algebra::UniPoly::new(f, vec![poly.coeff([0, 1]), poly.coeff([1, 1])]);
    let c = crate::algebra::UniPoly::new(
        f,
        vec![poly.coeff([0, 0]), poly.coeff([1, 0]), poly.coeff([2, 0])],
    );
    let four = Scalar::from_i64(f, 4);
    let disc = b.mul(&b).sub(&a.mul(&c).scale(&four));
    uni_is_square(&disc)
}

fn uni_is_square(p: &crate::algebra::UniPoly) -> bool {
    if p.is_zero() {
        return true;
    }
    let d = p.degree().unwrap();
    if d % 2 != 0 {
        return false;
    }
    let Some(lead_root) = p.leading().unwrap().sqrt_exact() else {
        return false;
    };
    // candidate square root by coefficient matching, top down
    let f = p.field();
    let h = d / 2;
    let mut s = vec![Scalar::zero(f); h + 1];
    s[h] = lead_root;
    for k in (0..h).rev() {
        let mut acc = Scalar::zero(f);
        for i in (k + 1)..=h {
            let j = h + k - i;
            if j > h || j <= k {
                continue;
            }
            acc = acc.add(&s[i].mul(&s[j]));
        }
        let target = p.coeff(h + k).sub(&acc);
        let two_sh = s[h].mul(&Scalar::from_i64(f, 2));
        match target.div(&two_sh) {
            Ok(v) => s[k] = v,
            Err(_) => return false,
        }
    }
    let cand = crate::algebra::UniPoly::new(f, s);
    cand.mul(&cand) == *p
}

/// Exhaustive linear-factor search over the projective lines of F_q^2.
fn find_linear_factor(poly: &BivarPoly) -> Result<Option<BivarPoly>> {
    let field = poly.field();
    let elems = field_elements(field)?;
    let one = Scalar::one(field);
    for b in &elems {
        for c in &elems {
            let cand = BivarPoly::from_terms(
                field,
                [([1, 0], one.clone()), ([0, 1], b.clone()), ([0, 0], c.clone())],
            );
            if poly.exact_div(&cand).is_some() {
                return Ok(Some(cand));
            }
        }
    }
    for c in &elems {
        let cand = BivarPoly::from_terms(field, [([0, 1], one.clone()), ([0, 0], c.clone())]);
        if poly.exact_div(&cand).is_some() {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

/// Exhaustive monic quadratic-factor search; only for very small fields.
fn find_quadratic_factor(poly: &BivarPoly) -> Result<Option<BivarPoly>> {
    let field = poly.field();
    let elems = field_elements(field)?;
    let exps: [[u32; 2]; 6] = [[2, 0], [1, 1], [0, 2], [1, 0], [0, 1], [0, 0]];
    let q = elems.len();
    // grlex-leading coefficient fixed to 1: choose which exponent leads
    for lead in 0..3 {
        let free = &exps[lead + 1..];
        let mut idx = vec![0usize; free.len()];
        'odometer: loop {
            let mut terms = vec![(exps[lead], Scalar::one(field))];
            for (slot, &i) in idx.iter().enumerate() {
                terms.push((free[slot], elems[i].clone()));
            }
            let cand = BivarPoly::from_terms(field, terms);
            if cand.degree() == Some(2)
                && cand.leading().map(|(e, _)| e.0) == Some(exps[lead])
                && poly.exact_div(&cand).is_some()
            {
                return Ok(Some(cand));
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break 'odometer;
                }
                idx[k] += 1;
                if idx[k] < q {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
    Ok(None)
}

/// Find one invertible affine map making every curve x-monic with dP/dy not
/// identically zero, by composed shears with t drawn from the seed.
///
/// Requires D < char(k) over finite fields; the regime where normalization
/// is meaningful.
pub fn x_monic_normalize(
    curves: &[PlaneCurve],
    seed: u64,
) -> Result<(AffineMap, Vec<PlaneCurve>)> {
    if curves.is_empty() {
        return Err(Error::Validation("empty arrangement".into()));
    }
    let field = curves[0].field();
    for c in curves {
        if c.field() != field {
            return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
        }
    }
    let dmax = curves.iter().map(|c| c.degree()).max().unwrap();
    let ch = field.characteristic();
    if ch != 0 && dmax as u64 >= ch {
        return Err(Error::CharacteristicObstruction(format!(
            "degree {dmax} >= char {ch}; x-monic normalization needs D < char(k)"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    const RETRIES: u32 = 32;
    for attempt in 0..RETRIES {
        let t = draw_t(field, &mut rng, attempt)?;
        // composition of the two opposite unit shears with parameter t:
        // linear part [[1 + t^2, t], [t, 1]], determinant 1
        let one = Scalar::one(field);
        let t2p1 = one.add(&t.mul(&t));
        let map = AffineMap::new(
            t2p1,
            t.clone(),
            t.clone(),
            one,
            Scalar::zero(field),
            Scalar::zero(field),
        )?;
        let mut out = Vec::with_capacity(curves.len());
        let mut ok = true;
        for c in curves {
            let moved = map.push_curve_poly(c.poly());
            let deg = moved.degree().expect("affine image nonzero");
            debug_assert_eq!(deg, c.degree());
            let lead = moved.coeff([deg, 0]);
            if lead.is_zero() {
                ok = false;
                break;
            }
            let monic = moved.scale(&lead.inv()?);
            if monic.partial(1).is_zero() {
                ok = false;
                break;
            }
            out.push(PlaneCurve::with_attestation(monic, c.attestation())?);
        }
        if ok {
            return Ok((map, out));
        }
    }
    Err(Error::RetryExhausted(
        RETRIES,
        "no shear made all curves x-monic with nonvanishing dP/dy".into(),
    ))
}

fn draw_t(field: Field, rng: &mut SplitMix64, attempt: u32) -> Result<Scalar> {
    match field {
        Field::Rational => Ok(Scalar::from_i64(field, attempt as i64 + rng.below(1 << 16) as i64)),
        Field::Prime(p) => Ok(Scalar::from_i64(field, rng.below(p) as i64)),
        Field::Char2Ext(k) => Scalar::from_bits(field, rng.below(1 << k) as u8),
    }
}

/// Bad points of a curve up to jet order `jmax`: base-field points on the
/// curve where dP/dy vanishes (vertical tangents and singular points) or
/// where some reduced jet denominator G_j vanishes. The complement on the
/// curve is the good locus.
pub fn classify_good_points(curve: &PlaneCurve, jmax: u32) -> Result<BTreeSet<PlanePoint>> {
    let jets = crate::jets::jet_sequence(curve, jmax)?;
    let mut tests: Vec<BivarPoly> = vec![curve.dy().clone()];
    for f in jets.funcs() {
        tests.push(f.den().clone());
    }
    let mut bad = BTreeSet::new();
    for t in &tests {
        if t.degree().unwrap_or(0) == 0 {
            continue; // constant denominators never vanish
        }
        let g = crate::algebra::poly_gcd(curve.poly(), t)?;
        if g.degree().unwrap_or(0) > 0 {
            return Err(Error::DegenerateJets(format!(
                "a jet denominator vanishes identically on the curve ({g})"
            )));
        }
        let common = crate::intersect::common_points(curve.poly(), t)?;
        bad.extend(common.points);
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_bivar;

    fn qcurve(text: &str) -> PlaneCurve {
        PlaneCurve::new(parse_bivar(Field::Rational, text).unwrap()).unwrap()
    }

    fn qi(n: i64) -> Scalar {
        Scalar::from_i64(Field::Rational, n)
    }

    fn qpt(x: i64, y: i64) -> PlanePoint {
        PlanePoint::new(qi(x), qi(y))
    }

    #[test]
    fn smoothness_examples() {
        // nodal cubic: both partials vanish at the origin
        let nodal = qcurve("y^2 - x^3 - x^2");
        assert!(!nodal.is_smooth_at(&qpt(0, 0)).unwrap());

        let circle = qcurve("x^2 + y^2 - 1");
        assert!(circle.is_smooth_at(&qpt(0, 1)).unwrap());

        assert!(matches!(
            circle.is_smooth_at(&qpt(2, 2)),
            Err(Error::NotOnCurve(..))
        ));

        // char-2 parabola over F_4 is smooth everywhere (dP/dy = 1)
        let f4 = Field::char2_ext(2).unwrap();
        let para = PlaneCurve::from_family(parse_bivar(f4, "y - x^2 - 1").unwrap()).unwrap();
        let pts = para.points_finite().unwrap();
        assert_eq!(pts.len(), 4);
        for p in pts {
            assert!(para.is_smooth_at(&p).unwrap());
        }
    }

    #[test]
    fn tangent_direction_examples() {
        let circle = qcurve("x^2 + y^2 - 1");
        // horizontal tangent at the top
        let d = circle.tangent_direction_at(&qpt(0, 1)).unwrap();
        assert_eq!(d, Direction::new(qi(1), qi(0)).unwrap());

        // gradient (6/5, 8/5) at (3/5, 4/5): direction (1 : -3/4)
        let p = PlanePoint::new(Scalar::from_ratio(3, 5), Scalar::from_ratio(4, 5));
        let d = circle.tangent_direction_at(&p).unwrap();
        assert_eq!(d.u(), &qi(1));
        assert_eq!(d.v(), &Scalar::from_ratio(-3, 4));

        // slope 1/2 at the origin of x - 2y - y^2
        let para = qcurve("x - 2*y - y^2");
        let d = para.tangent_direction_at(&qpt(0, 0)).unwrap();
        assert_eq!(d.v(), &Scalar::from_ratio(1, 2));

        let nodal = qcurve("y^2 - x^3 - x^2");
        assert!(matches!(
            nodal.tangent_direction_at(&qpt(0, 0)),
            Err(Error::SingularPoint(..))
        ));
    }

    #[test]
    fn tangent_direction_scale_invariant() {
        let circle = qcurve("x^2 + y^2 - 1");
        let scaled =
            PlaneCurve::new(parse_bivar(Field::Rational, "3*x^2 + 3*y^2 - 3").unwrap()).unwrap();
        let p = PlanePoint::new(Scalar::from_ratio(3, 5), Scalar::from_ratio(4, 5));
        assert_eq!(
            circle.tangent_direction_at(&p).unwrap(),
            scaled.tangent_direction_at(&p).unwrap()
        );
    }

    #[test]
    fn direction_canonical_and_perp() {
        let d = Direction::new(qi(4), qi(-3)).unwrap();
        assert_eq!(d.u(), &qi(1));
        assert_eq!(d.v(), &Scalar::from_ratio(-3, 4));
        let perp = d.perp();
        assert!(d.orthogonal_to(&perp));
        assert!(!d.is_isotropic());

        let v = Direction::new(qi(0), qi(7)).unwrap();
        assert!(v.is_vertical());
        assert_eq!(v.perp(), Direction::new(qi(1), qi(0)).unwrap());

        // isotropic over F_5: (1 : 2) since 1 + 4 = 0
        let f5 = Field::prime(5).unwrap();
        let iso = Direction::new(Scalar::one(f5), Scalar::from_i64(f5, 2)).unwrap();
        assert!(iso.is_isotropic());
        assert_eq!(iso.perp(), iso);
    }

    #[test]
    fn points_over_small_fields() {
        let f5 = Field::prime(5).unwrap();
        let circle = PlaneCurve::from_family(parse_bivar(f5, "x^2 + y^2 - 1").unwrap()).unwrap();
        let pts = circle.points_finite().unwrap();
        let as_pairs: Vec<(u64, u64)> = pts
            .iter()
            .map(|p| (p.x.residue().unwrap(), p.y.residue().unwrap()))
            .collect();
        assert_eq!(as_pairs, vec![(0, 1), (0, 4), (1, 0), (4, 0)]);

        let f7 = Field::prime(7).unwrap();
        let line = PlaneCurve::from_family(parse_bivar(f7, "y").unwrap()).unwrap();
        assert_eq!(line.points_finite().unwrap().len(), 7);

        let f3 = Field::prime(3).unwrap();
        let c = PlaneCurve::from_family(parse_bivar(f3, "x^2 + y^2 + 1").unwrap()).unwrap();
        let pts = c.points_finite().unwrap();
        let as_pairs: Vec<(u64, u64)> = pts
            .iter()
            .map(|p| (p.x.residue().unwrap(), p.y.residue().unwrap()))
            .collect();
        assert_eq!(as_pairs, vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
    }

    #[test]
    fn points_need_finite_field() {
        let c = qcurve("x^2 + y^2 - 1");
        assert!(c.points_finite().is_err());
    }

    #[test]
    fn irreducibility_policy() {
        assert_eq!(qcurve("y").attestation(), Attestation::Verified);
        assert_eq!(qcurve("x^2 + y^2 - 1").attestation(), Attestation::Verified);
        assert!(matches!(
            PlaneCurve::new(parse_bivar(Field::Rational, "x^2 - y^2").unwrap()),
            Err(Error::Reducible(_))
        ));
        // x^2 + y^2 is degenerate but has no rational factors
        assert_eq!(
            PlaneCurve::new(parse_bivar(Field::Rational, "x^2 + y^2").unwrap())
                .unwrap()
                .attestation(),
            Attestation::Asserted
        );
        // cubic over Q accepted with a warning flag
        assert_eq!(qcurve("y^2 - x^3 - x").attestation(), Attestation::Asserted);

        // finite field: reducible cubic caught by linear search
        let f5 = Field::prime(5).unwrap();
        let red = parse_bivar(f5, "x^2*y + y^2*x").unwrap(); // xy(x+y)
        assert!(matches!(PlaneCurve::new(red), Err(Error::Reducible(_))));
        let irr = parse_bivar(f5, "x^2 + y^2 - 1").unwrap();
        assert_eq!(PlaneCurve::new(irr).unwrap().attestation(), Attestation::Verified);

        // degree 4 over F_5: product of two conics found by quadratic search
        let c1 = parse_bivar(f5, "x^2 + y^2 - 1").unwrap();
        let c2 = parse_bivar(f5, "x^2 + y^2 - 2").unwrap();
        assert!(matches!(PlaneCurve::new(c1.mul(&c2)), Err(Error::Reducible(_))));
    }

    #[test]
    fn square_free_enforced() {
        let sq = parse_bivar(Field::Rational, "y^2 - 2*x*y + x^2").unwrap(); // (y-x)^2
        assert!(matches!(PlaneCurve::new(sq), Err(Error::NotSquareFree)));
        // (x+y)^2 over F_2 has identically-zero gradient
        let f2 = Field::prime(2).unwrap();
        let sq2 = parse_bivar(f2, "x^2 + y^2").unwrap();
        assert!(matches!(PlaneCurve::new(sq2), Err(Error::NotSquareFree)));
    }

    #[test]
    fn x_monic_normalize_examples() {
        // a horizontal line becomes x-monic under the composed shear
        let line = qcurve("y");
        let (map, moved) = x_monic_normalize(std::slice::from_ref(&line), 0).unwrap();
        assert!(moved[0].is_x_monic());
        assert!(!moved[0].poly().partial(1).is_zero());
        assert!(!map.det().is_zero());

        let circle = qcurve("x^2 + y^2 - 1");
        let (_, moved) = x_monic_normalize(std::slice::from_ref(&circle), 0).unwrap();
        assert!(moved[0].is_x_monic());

        // D = 2 >= char(F_2): rejected
        let f2 = Field::prime(2).unwrap();
        let par = PlaneCurve::from_family(parse_bivar(f2, "y - x^2 - 1").unwrap()).unwrap();
        assert!(matches!(
            x_monic_normalize(std::slice::from_ref(&par), 0),
            Err(Error::CharacteristicObstruction(_))
        ));
    }

    #[test]
    fn x_monic_preserves_zero_sets_pointwise() {
        let f13 = Field::prime(13).unwrap();
        let curves: Vec<PlaneCurve> = ["x^2 + y^2 - 1", "y - x^2", "x + y - 3"]
            .iter()
            .map(|t| PlaneCurve::from_family(parse_bivar(f13, t).unwrap()).unwrap())
            .collect();
        let (map, moved) = x_monic_normalize(&curves, 7).unwrap();
        for (orig, new) in curves.iter().zip(moved.iter()) {
            assert!(new.is_x_monic());
            assert_eq!(new.poly().degree_in(0), new.poly().degree());
            let mut orig_pts: Vec<PlanePoint> = orig
                .points_finite()
                .unwrap()
                .into_iter()
                .map(|p| map.apply(&p))
                .collect();
            orig_pts.sort();
            let new_pts = new.points_finite().unwrap();
            assert_eq!(orig_pts, new_pts);
        }
    }

    #[test]
    fn affine_map_inverse_and_orthogonality() {
        let m = AffineMap::new(qi(2), qi(1), qi(1), qi(1), qi(3), qi(-1)).unwrap();
        let inv = m.inverse();
        let p = qpt(5, 7);
        assert_eq!(inv.apply(&m.apply(&p)), p);
        let rot = AffineMap::new(
            Scalar::from_ratio(3, 5),
            Scalar::from_ratio(-4, 5),
            Scalar::from_ratio(4, 5),
            Scalar::from_ratio(3, 5),
            qi(0),
            qi(0),
        )
        .unwrap();
        assert!(rot.is_orthogonal_linear());
        assert!(!m.is_orthogonal_linear());
    }
}
