//! Property suites for the exact-arithmetic layer and the branch calculus:
//! algebraic identities on random inputs, series-inverse round trips, the
//! branch/jet consistency bridge, and multiplicity symmetry.

mod common;

use common::{point, random_curve_through, scalar};
use curvetan_core::algebra::{
    eval_bivar_at_series, poly_gcd, BivarPoly, Field, RationalFunc, Scalar, TruncatedSeries,
};
use curvetan_core::curves::PlanePoint;
use curvetan_core::jets::{g_eval, hensel_phi, intersection_multiplicity, Multiplicity};
use curvetan_core::rng::SplitMix64;
use proptest::prelude::*;

fn fields() -> Vec<Field> {
    vec![Field::Rational, Field::prime(101).unwrap(), Field::prime(13).unwrap()]
}

fn random_poly(field: Field, degree: u32, rng: &mut SplitMix64) -> BivarPoly {
    let mut terms = vec![];
    for i in 0..=degree {
        for j in 0..=(degree - i) {
            let c = rng.signed(9);
            if c != 0 {
                terms.push(([i, j], scalar(field, c)));
            }
        }
    }
    BivarPoly::from_terms(field, terms)
}

#[test]
fn eval_is_a_ring_homomorphism() {
    // poly_eval(P * Q, pt) = poly_eval(P, pt) * poly_eval(Q, pt), and the
    // same for sums, on random polynomials and points
    for field in fields() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..200 {
            let p = random_poly(field, 3, &mut rng);
            let q = random_poly(field, 2, &mut rng);
            let x = scalar(field, rng.signed(20));
            let y = scalar(field, rng.signed(20));
            let pv = p.eval2(&x, &y).unwrap();
            let qv = q.eval2(&x, &y).unwrap();
            assert_eq!(p.mul(&q).eval2(&x, &y).unwrap(), pv.mul(&qv));
            assert_eq!(p.add(&q).eval2(&x, &y).unwrap(), pv.add(&qv));
        }
    }
}

#[test]
fn series_inverse_round_trip_200_random_units() {
    for field in [Field::Rational, Field::prime(101).unwrap()] {
        let mut rng = SplitMix64::new(17);
        for _ in 0..200 {
            let order = 1 + (rng.below(10) as u32);
            let mut coeffs = vec![];
            let mut c0 = 0;
            while c0 == 0 {
                c0 = rng.signed(9);
            }
            coeffs.push(scalar(field, c0));
            for _ in 0..order {
                coeffs.push(scalar(field, rng.signed(9)));
            }
            let s = TruncatedSeries::new(field, coeffs, order);
            let inv = s.invert().unwrap();
            assert_eq!(s.mul(&inv), TruncatedSeries::one(field, order));
        }
    }
}

#[test]
fn rational_function_reduction_leaves_trivial_gcd() {
    let mut rng = SplitMix64::new(23);
    for field in fields() {
        for _ in 0..40 {
            let num = random_poly(field, 2, &mut rng);
            let mut den = random_poly(field, 2, &mut rng);
            while den.is_zero() {
                den = random_poly(field, 2, &mut rng);
            }
            let common = random_poly(field, 1, &mut rng);
            if common.is_zero() {
                continue;
            }
            let r = RationalFunc::new(num.mul(&common), den.mul(&common)).unwrap();
            if r.is_zero() {
                continue;
            }
            let g = poly_gcd(r.num(), r.den()).unwrap();
            assert_eq!(g.degree(), Some(0), "gcd {g} not constant");
        }
    }
}

proptest! {
    #[test]
    fn rational_scalar_normalization(n in -2000i64..2000, d in 1i64..2000, sign in prop::bool::ANY) {
        let d = if sign { d } else { -d };
        let a = Scalar::from_ratio(n, d);
        // canonical: positive denominator, lowest terms, idempotent
        if let Scalar::Rat(r) = &a {
            prop_assert!(num::Signed::is_positive(r.denom()) || num::Zero::is_zero(r.numer()));
            let again = Scalar::Rat(r.clone());
            prop_assert_eq!(&a, &again);
        }
        // sign canonical: -n/d equals n/-d
        prop_assert_eq!(Scalar::from_ratio(-n, d), Scalar::from_ratio(n, -d));
    }

    #[test]
    fn gcd_divides_both_inputs(seed in 0u64..500) {
        let mut rng = SplitMix64::new(seed);
        let field = Field::prime(13).unwrap();
        let a = random_poly(field, 3, &mut rng);
        let b = random_poly(field, 3, &mut rng);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = poly_gcd(&a, &b).unwrap();
        prop_assert!(a.exact_div(&g).is_some());
        prop_assert!(b.exact_div(&g).is_some());
    }
}

#[test]
fn hensel_consistency_300_random_pairs() {
    // substituting the branch back into the translated polynomial yields
    // the zero series, across fields and degrees
    let cases = [
        (Field::Rational, 2u32, 100u32),
        (Field::Rational, 3, 50),
        (Field::prime(101).unwrap(), 3, 100),
        (Field::prime(13).unwrap(), 2, 50),
    ];
    let mut total = 0;
    for (field, degree, count) in cases {
        let mut rng = SplitMix64::new(31 + degree as u64);
        for _ in 0..count {
            let base = point(field, rng.signed(3), rng.signed(3));
            let curve = random_curve_through(field, degree, &base, &mut rng);
            let order = curvetan_core::algebra::default_truncation(degree);
            let branch = hensel_phi(&curve, &base, order).unwrap();
            assert!(branch.coeff(0).is_zero() || branch.phi.coeff(0).is_zero());
            let translated = curve.poly().translate(&base.x, &base.y);
            assert!(
                eval_bivar_at_series(&translated, &branch.phi).is_zero(),
                "branch fails to solve {} at {base}",
                curve.poly()
            );
            total += 1;
        }
    }
    assert_eq!(total, 300);
}

#[test]
fn g_phi_duality_on_random_fixtures() {
    // f_i evaluated on the curve equals -i! a_i wherever defined
    for field in [Field::Rational, Field::prime(101).unwrap()] {
        let mut rng = SplitMix64::new(47);
        let mut checked = 0;
        'outer: while checked < 30 {
            let base = point(field, rng.signed(2), rng.signed(2));
            let curve = random_curve_through(field, 2, &base, &mut rng);
            let branch = hensel_phi(&curve, &base, 6).unwrap();
            for i in 1..=6u32 {
                let gi = match g_eval(&curve, &base, i) {
                    Ok(v) => v,
                    Err(_) => continue 'outer, // pole of some jet at the point
                };
                let fact = Scalar::factorial(field, i).unwrap();
                assert_eq!(gi, branch.coeff(i).mul(&fact).neg(), "order {i} on {}", curve.poly());
            }
            checked += 1;
        }
    }
}

#[test]
fn multiplicity_symmetry_randomized() {
    let mut rng = SplitMix64::new(53);
    for field in [Field::Rational, Field::prime(101).unwrap()] {
        for _ in 0..25 {
            let base = point(field, rng.signed(3), rng.signed(3));
            let val = 1 + rng.below(3) as u32;
            let (a, b) = common::graph_pair_with_contact(field, val, &base, &mut rng);
            let m1 = intersection_multiplicity(&a, &b, &base).unwrap();
            let m2 = intersection_multiplicity(&b, &a, &base).unwrap();
            assert_eq!(m1, m2);
            assert_eq!(m1, Multiplicity::Finite(val));
        }
    }
}

#[test]
fn branch_agreement_never_exceeds_degree_product() {
    // distinct irreducible fixtures never agree past D * D'
    let mut rng = SplitMix64::new(59);
    let field = Field::prime(101).unwrap();
    for _ in 0..40 {
        let base = point(field, rng.signed(3), rng.signed(3));
        let a = random_curve_through(field, 2, &base, &mut rng);
        let b = random_curve_through(field, 2, &base, &mut rng);
        if a.poly().canonical() == b.poly().canonical() {
            continue;
        }
        match intersection_multiplicity(&a, &b, &base) {
            Ok(Multiplicity::Finite(v)) => assert!(v <= a.degree() * b.degree()),
            Ok(Multiplicity::Infinite) => panic!("distinct curves reported proportional"),
            Err(e) => panic!("unexpected: {e}"),
        }
    }
}

#[test]
fn jet_denominators_nonzero_on_good_points() {
    // wherever the bad-point classification admits a point, every recorded
    // jet denominator is nonzero there
    let f13 = Field::prime(13).unwrap();
    let circle = curvetan_core::curves::PlaneCurve::from_family(
        curvetan_core::algebra::parse_bivar(f13, "x^2 + y^2 - 1").unwrap(),
    )
    .unwrap();
    let jmax = 4;
    let bad = curvetan_core::curves::classify_good_points(&circle, jmax).unwrap();
    let jets = curvetan_core::jets::jet_sequence(&circle, jmax).unwrap();
    for p in circle.points_finite().unwrap() {
        if bad.contains(&p) {
            continue;
        }
        for f in jets.funcs() {
            assert!(!f.den().eval2(&p.x, &p.y).unwrap().is_zero());
        }
    }
}

#[test]
fn classify_good_points_examples_and_bound() {
    use curvetan_core::curves::classify_good_points;
    // circle over Q: exactly the two vertical-tangent points at jmax = 1
    let circle = curvetan_core::curves::PlaneCurve::new(
        curvetan_core::algebra::parse_bivar(Field::Rational, "x^2 + y^2 - 1").unwrap(),
    )
    .unwrap();
    let bad = classify_good_points(&circle, 1).unwrap();
    let expect: Vec<PlanePoint> = vec![
        point(Field::Rational, -1, 0),
        point(Field::Rational, 1, 0),
    ];
    assert_eq!(bad.into_iter().collect::<Vec<_>>(), expect);

    // line: empty bad set at any order
    let line = curvetan_core::curves::PlaneCurve::new(
        curvetan_core::algebra::parse_bivar(Field::Rational, "y").unwrap(),
    )
    .unwrap();
    assert!(classify_good_points(&line, 5).unwrap().is_empty());

    // char-2 parabola: the jet sequence degenerates
    let f4 = Field::char2_ext(2).unwrap();
    let para = curvetan_core::curves::PlaneCurve::from_family(
        curvetan_core::algebra::parse_bivar(f4, "y - x^2 - 1").unwrap(),
    )
    .unwrap();
    assert!(matches!(
        classify_good_points(&para, 2),
        Err(curvetan_core::Error::DegenerateJets(_))
    ));

    // Bezout-style bound: |bad| <= deg P * (deg dP/dy + sum deg G_j)
    let f31 = Field::prime(31).unwrap();
    let conic = curvetan_core::curves::PlaneCurve::from_family(
        curvetan_core::algebra::parse_bivar(f31, "x^2 + 2*y^2 + x*y - 3").unwrap(),
    )
    .unwrap();
    let jmax = 4u32;
    let bad = classify_good_points(&conic, jmax).unwrap();
    let jets = curvetan_core::jets::jet_sequence(&conic, jmax).unwrap();
    let mut bound = conic.degree() * conic.dy().degree().unwrap_or(0);
    for f in jets.funcs() {
        bound += conic.degree() * f.den().degree().unwrap_or(0);
    }
    assert!(
        (bad.len() as u32) <= bound,
        "{} bad points against bound {bound}",
        bad.len()
    );
}

#[test]
fn smoothness_matches_direct_gradient_on_f11_arrangement() {
    let f11 = Field::prime(11).unwrap();
    let texts = ["x^2 + y^2 - 1", "y - x^2", "x + y - 3", "x^2 + 2*y^2 - 4"];
    for t in texts {
        let c = curvetan_core::curves::PlaneCurve::from_family(
            curvetan_core::algebra::parse_bivar(f11, t).unwrap(),
        )
        .unwrap();
        for p in c.points_finite().unwrap() {
            let (gx, gy) = c.gradient_at(&p).unwrap();
            let smooth = c.is_smooth_at(&p).unwrap();
            assert_eq!(smooth, !(gx.is_zero() && gy.is_zero()));
            if smooth {
                let d = c.tangent_direction_at(&p).unwrap();
                // direction is in the kernel of the gradient
                assert!(gx.mul(d.u()).add(&gy.mul(d.v())).is_zero());
            }
        }
    }
}

proptest! {
    #[test]
    fn text_format_round_trip(seed in 0u64..300) {
        let mut rng = SplitMix64::new(seed);
        for field in [Field::Rational, Field::prime(13).unwrap()] {
            let p = random_poly(field, 3, &mut rng);
            if p.is_zero() {
                continue;
            }
            let printed = p.to_string();
            let parsed: BivarPoly =
                curvetan_core::algebra::parse_bivar(field, &printed).unwrap();
            prop_assert_eq!(&parsed, &p, "through '{}'", printed);
        }
    }
}
