//! Shared fixture generation for the integration suites. Everything is
//! seeded; no test depends on ambient randomness.
#![allow(dead_code)] // each suite uses its own subset

use curvetan_core::algebra::{BivarPoly, Field, Scalar};
use curvetan_core::curves::{Attestation, PlaneCurve, PlanePoint};
use curvetan_core::rng::SplitMix64;

pub fn scalar(field: Field, v: i64) -> Scalar {
    Scalar::from_i64(field, v)
}

pub fn point(field: Field, x: i64, y: i64) -> PlanePoint {
    PlanePoint::new(scalar(field, x), scalar(field, y))
}

/// A random curve of the given degree passing through `base`, smooth there
/// with a non-vertical tangent. Coefficients are small integers embedded in
/// the field. Retries until the smoothness conditions hold.
pub fn random_curve_through(
    field: Field,
    degree: u32,
    base: &PlanePoint,
    rng: &mut SplitMix64,
) -> PlaneCurve {
    loop {
        let mut terms = vec![];
        for i in 0..=degree {
            for j in 0..=(degree - i) {
                let c = rng.signed(5);
                if c != 0 {
                    terms.push(([i, j], scalar(field, c)));
                }
            }
        }
        let mut poly = BivarPoly::from_terms(field, terms);
        if poly.degree() != Some(degree) {
            continue;
        }
        // force the curve through the base point by fixing the constant term
        let v = poly.eval2(&base.x, &base.y).unwrap();
        poly = poly.sub(&BivarPoly::constant(v));
        if poly.degree() != Some(degree) {
            continue;
        }
        let Ok(curve) = PlaneCurve::with_attestation(poly, Attestation::Asserted) else {
            continue;
        };
        let (_, gy) = curve.gradient_at(base).unwrap();
        if gy.is_zero() {
            continue;
        }
        return curve;
    }
}

/// A pair of graph curves y = q(x) + shift meeting at `base` with branch
/// difference of exact valuation `val`.
pub fn graph_pair_with_contact(
    field: Field,
    val: u32,
    base: &PlanePoint,
    rng: &mut SplitMix64,
) -> (PlaneCurve, PlaneCurve) {
    loop {
        // base polynomial in (x - x0)
        let mut q1 = BivarPoly::constant(base.y.clone());
        let xshift = BivarPoly::var_x(field).sub(&BivarPoly::constant(base.x.clone()));
        for k in 1..=3u32 {
            let c = rng.signed(4);
            if c != 0 {
                q1 = q1.add(&xshift.pow(k).scale(&scalar(field, c)));
            }
        }
        // perturb at exactly (x - x0)^val
        let mut c = 0;
        while c == 0 {
            c = rng.signed(4);
        }
        let q2 = q1.add(&xshift.pow(val).scale(&scalar(field, c)));
        let a = BivarPoly::var_y(field).sub(&q1);
        let b = BivarPoly::var_y(field).sub(&q2);
        let (Ok(ca), Ok(cb)) = (
            PlaneCurve::with_attestation(a, Attestation::Asserted),
            PlaneCurve::with_attestation(b, Attestation::Asserted),
        ) else {
            continue;
        };
        return (ca, cb);
    }
}

/// Unit circle centered at a rational point given by small integers scaled
/// by 1/5 (so Pythagorean tangency points stay rational).
pub fn unit_circle_q(cx: Scalar, cy: Scalar) -> PlaneCurve {
    let f = Field::Rational;
    let one = Scalar::one(f);
    let two = Scalar::from_i64(f, 2);
    let c0 = cx.mul(&cx).add(&cy.mul(&cy)).sub(&one);
    PlaneCurve::from_family(BivarPoly::from_terms(
        f,
        [
            ([2, 0], one.clone()),
            ([0, 2], one),
            ([1, 0], two.mul(&cx).neg()),
            ([0, 1], two.mul(&cy).neg()),
            ([0, 0], c0),
        ],
    ))
    .unwrap()
}
