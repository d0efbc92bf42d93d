//! Common base-field points of pairs of plane curves: exhaustive scans over
//! small finite fields, elimination with exact root extraction over the
//! rationals. Rational answers may be partial when an eliminant has factors
//! without rational roots; the flag says so.

use crate::algebra::{resultant_y, BivarPoly, Field, Scalar, UniPoly};
use crate::curves::{field_elements, PlanePoint, SCAN_BOUND};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CommonPoints {
    pub points: Vec<PlanePoint>,
    /// False when some intersection exists only over an extension field and
    /// was skipped.
    pub complete: bool,
}

/// All common base-field points of Z(a) and Z(b).
///
/// Errors when the two polynomials share a nonconstant factor (the common
/// locus is then a whole component, not a point set).
pub fn common_points(a: &BivarPoly, b: &BivarPoly) -> Result<CommonPoints> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match a.field() {
        Field::Rational => common_points_rational(a, b),
        field => {
            let q = field.order().unwrap();
            if q > SCAN_BOUND {
                return Err(Error::ScanBound(format!("field order {q} exceeds {SCAN_BOUND}")));
            }
            let g = crate::algebra::poly_gcd(a, b)?;
            if g.degree().unwrap_or(0) > 0 {
                return Err(Error::Validation(format!("curves share a component: {g}")));
            }
            let elems = field_elements(field)?;
            let mut points = vec![];
            for x in &elems {
                for y in &elems {
                    if a.eval2(x, y)?.is_zero() && b.eval2(x, y)?.is_zero() {
                        points.push(PlanePoint::new(x.clone(), y.clone()));
                    }
                }
            }
            Ok(CommonPoints { points, complete: true })
        }
    }
}

fn common_points_rational(a: &BivarPoly, b: &BivarPoly) -> Result<CommonPoints> {
    let field = a.field();
    let day = a.degree_in(1).unwrap_or(0);
    let dby = b.degree_in(1).unwrap_or(0);
    // both free of y: common vertical lines would be shared components
    if day == 0 && dby == 0 {
        let ua = x_slice(a, None);
        let ub = x_slice(b, None);
        let g = ua.gcd(&ub);
        if g.degree().unwrap_or(0) > 0 {
            return Err(Error::Validation("curves share vertical components".into()));
        }
        return Ok(CommonPoints { points: vec![], complete: true });
    }
    let g = crate::algebra::poly_gcd(a, b)?;
    if g.degree().unwrap_or(0) > 0 {
        return Err(Error::Validation(format!("curves share a component: {g}")));
    }
    let res = resultant_y(a, b)?;
    if res.is_zero() {
        // a common factor of positive y-degree escaped the gcd: impossible
        // for reduced inputs, so treat as shared component
        return Err(Error::Validation("curves share a component".into()));
    }
    let report = res.roots_in_field()?;
    let mut complete = report.complete;
    let mut points = vec![];
    for x0 in report.roots {
        // common y above x0: roots of gcd of the two y-slices
        let sa = y_slice(a, &x0);
        let sb = y_slice(b, &x0);
        let slice_gcd = match (sa.is_zero(), sb.is_zero()) {
            (true, true) => {
                return Err(Error::Validation(
                    "curves share the vertical line above a resultant root".into(),
                ))
            }
            (true, false) => sb,
            (false, true) => sa,
            (false, false) => sa.gcd(&sb),
        };
        if slice_gcd.degree().unwrap_or(0) == 0 {
            continue; // x0 came from leading-coefficient collapse, no point
        }
        let ys = slice_gcd.roots_in_field()?;
        complete &= ys.complete;
        for y0 in ys.roots {
            debug_assert!(a.eval2(&x0, &y0).unwrap().is_zero());
            debug_assert!(b.eval2(&x0, &y0).unwrap().is_zero());
            points.push(PlanePoint::new(x0.clone(), y0));
        }
    }
    points.sort();
    points.dedup();
    let _ = field;
    Ok(CommonPoints { points, complete })
}

/// P(x0, y) as a univariate polynomial in y.
fn y_slice(p: &BivarPoly, x0: &Scalar) -> UniPoly {
    let field = p.field();
    let dy = p.degree_in(1).unwrap_or(0) as usize;
    let mut coeffs = vec![Scalar::zero(field); dy + 1];
    for (e, c) in p.terms() {
        let pow = x0.pow(e.0[0]);
        coeffs[e.0[1] as usize] = coeffs[e.0[1] as usize].add(&c.mul(&pow));
    }
    UniPoly::new(field, coeffs)
}

/// The y^j slice (default y^0) of p as a univariate in x.
fn x_slice(p: &BivarPoly, j: Option<u32>) -> UniPoly {
    let field = p.field();
    let j = j.unwrap_or(0);
    let dx = p.degree_in(0).unwrap_or(0) as usize;
    let mut coeffs = vec![Scalar::zero(field); dx + 1];
    for (e, c) in p.terms() {
        if e.0[1] == j {
            coeffs[e.0[0] as usize] = c.clone();
        }
    }
    UniPoly::new(field, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_bivar;

    fn q(text: &str) -> BivarPoly {
        parse_bivar(Field::Rational, text).unwrap()
    }

    fn qi(n: i64) -> Scalar {
        Scalar::from_i64(Field::Rational, n)
    }

    #[test]
    fn tangent_circles_meet_once() {
        let c1 = q("x^2 + y^2 - 1");
        let c2 = q("x^2 + y^2 - 4*y + 3");
        let got = common_points(&c1, &c2).unwrap();
        assert!(got.complete);
        assert_eq!(got.points, vec![PlanePoint::new(qi(0), qi(1))]);
    }

    #[test]
    fn line_and_circle() {
        let c = q("x^2 + y^2 - 25");
        let l = q("y - 4");
        let got = common_points(&c, &l).unwrap();
        assert!(got.complete);
        assert_eq!(
            got.points,
            vec![PlanePoint::new(qi(-3), qi(4)), PlanePoint::new(qi(3), qi(4))]
        );
    }

    #[test]
    fn vertical_line_and_circle() {
        let c = q("x^2 + y^2 - 25");
        let l = q("x - 3");
        let got = common_points(&c, &l).unwrap();
        assert_eq!(
            got.points,
            vec![PlanePoint::new(qi(3), qi(-4)), PlanePoint::new(qi(3), qi(4))]
        );
    }

    #[test]
    fn irrational_intersections_flagged() {
        let c = q("x^2 + y^2 - 1");
        let l = q("y - x"); // meets at (±1/√2, ±1/√2)
        let got = common_points(&c, &l).unwrap();
        assert!(got.points.is_empty());
        assert!(!got.complete);
    }

    #[test]
    fn graph_pair_multiplicity_fixture() {
        let a = q("y - x^2");
        let b = q("y - x^2 - x^3");
        let got = common_points(&a, &b).unwrap();
        assert!(got.complete);
        assert_eq!(got.points, vec![PlanePoint::new(qi(0), qi(0))]);
    }

    #[test]
    fn shared_component_rejected() {
        let a = q("x^2 - y^2"); // (x-y)(x+y)
        let b = q("x - y");
        assert!(matches!(common_points(&a, &b), Err(Error::Validation(_))));
    }

    #[test]
    fn finite_field_scan() {
        let f7 = Field::prime(7).unwrap();
        let a = parse_bivar(f7, "x^2 + y^2 - 1").unwrap();
        let b = parse_bivar(f7, "y").unwrap();
        let got = common_points(&a, &b).unwrap();
        assert_eq!(got.points.len(), 2); // x^2 = 1
        assert!(got.complete);
    }

    #[test]
    fn parallel_lines_disjoint() {
        let a = q("y - 1");
        let b = q("y - 2");
        let got = common_points(&a, &b).unwrap();
        assert!(got.points.is_empty() && got.complete);
        // two x-only polynomials
        let a = q("x - 1");
        let b = q("x - 2");
        let got = common_points(&a, &b).unwrap();
        assert!(got.points.is_empty() && got.complete);
    }
}
