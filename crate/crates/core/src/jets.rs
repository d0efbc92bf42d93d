//! The formal implicit-differentiation calculus on a plane curve: the
//! rational-function sequence f_1, f_2, ... obtained by repeated derivation
//! along the curve, the branch series solving P = 0 locally at a smooth
//! point, their consistency bridge, and intersection multiplicity as the
//! valuation of a branch difference.

use crate::algebra::{
    eval_bivar_at_series, BivarPoly, RationalFunc, Scalar, TruncatedSeries,
};
use crate::curves::{PlaneCurve, PlanePoint};
use crate::error::{Error, Result};

/// f_1 .. f_jmax for a curve: f_1 = dP/dx / dP/dy and
/// f_{i+1} = Delta(f_i) with Delta(f) = df/dx - f_1 * df/dy,
/// each reduced to lowest terms.
#[derive(Debug, Clone)]
pub struct JetSequence {
    funcs: Vec<RationalFunc>,
}

impl JetSequence {
    pub fn funcs(&self) -> &[RationalFunc] {
        &self.funcs
    }

    /// f_i, 1-indexed.
    pub fn get(&self, i: u32) -> &RationalFunc {
        &self.funcs[(i - 1) as usize]
    }

    pub fn order(&self) -> u32 {
        self.funcs.len() as u32
    }
}

/// One application of the derivation along the curve:
/// Delta(f) = df/dx - f1 * df/dy, reduced to lowest terms.
pub fn delta_apply(f: &RationalFunc, f1: &RationalFunc) -> Result<RationalFunc> {
    let fx = f.partial(0)?;
    let fy = f.partial(1)?;
    fx.sub(&f1.mul(&fy)?)
}

/// Build the jet sequence of a curve.
///
/// Degenerate cases are rejected: dP/dy identically zero on the curve makes
/// f_1 undefined, and a constant f_1 on a curve of degree >= 2 means every
/// jet beyond the first carries no information (all further f_i vanish), as
/// happens for the characteristic-2 parabolas.
///
/// Internally the sequence is carried as numerators over the known
/// denominator (dP/dy)^(2i-1), which the derivation rule preserves; each
/// f_i is brought to lowest terms once, by stripping shared dP/dy factors.
pub fn jet_sequence(curve: &PlaneCurve, jmax: u32) -> Result<JetSequence> {
    if jmax == 0 {
        return Err(Error::Validation("jet order starts at 1".into()));
    }
    let field = curve.field();
    let px = curve.dx();
    let py = curve.dy();
    if py.is_zero() {
        return Err(Error::DegenerateJets(
            "dP/dy is identically zero on the curve".into(),
        ));
    }
    let f1 = RationalFunc::new(px.clone(), py.clone())?;
    if curve.degree() >= 2 && f1.constant_value().is_some() {
        return Err(Error::DegenerateJets(format!(
            "f_1 = {f1} is constant on a curve of degree {}",
            curve.degree()
        )));
    }
    let pyx = py.partial(0);
    let pyy = py.partial(1);
    let mut funcs = vec![f1];
    let mut raw = px.clone(); // f_i = raw / py^k
    let mut k = 1u32;
    for _ in 1..jmax {
        // d/dx (R/py^k) = (R_x py - k R py_x)/py^(k+1), same in y, so
        // Delta(R/py^k) = (py*A - px*B)/py^(k+2)
        let kf = Scalar::from_i64(field, k as i64);
        let a = raw.partial(0).mul(py).sub(&raw.mul(&pyx).scale(&kf));
        let b = raw.partial(1).mul(py).sub(&raw.mul(&pyy).scale(&kf));
        raw = py.mul(&a).sub(&px.mul(&b));
        k += 2;
        funcs.push(reduce_over_power(&raw, py, k)?);
    }
    Ok(JetSequence { funcs })
}

/// Bring num / base^k to lowest terms. Every factor of the denominator
/// divides `base`, so stripping gcd(num, base) factors until coprime is a
/// complete reduction and never runs a gcd on two large polynomials.
fn reduce_over_power(num: &BivarPoly, base: &BivarPoly, k: u32) -> Result<RationalFunc> {
    if num.is_zero() {
        return Ok(RationalFunc::zero(num.field()));
    }
    let mut num = num.clone();
    let mut den = base.pow(k);
    loop {
        let g = crate::algebra::poly_gcd(&num, base)?;
        if g.degree().unwrap_or(0) == 0 {
            break;
        }
        let (Some(n2), Some(d2)) = (num.exact_div(&g), den.exact_div(&g)) else {
            break;
        };
        num = n2;
        den = d2;
        if den.degree().unwrap_or(0) == 0 {
            break;
        }
    }
    RationalFunc::from_coprime_parts(num, den)
}

/// The unique branch series through a smooth point with non-vertical
/// tangent: coefficients a_1..a_N with constant term zero such that
/// substituting y = phi(x) into the translated polynomial gives the zero
/// series mod x^(N+1).
#[derive(Debug, Clone)]
pub struct HenselBranch {
    pub base: PlanePoint,
    pub phi: TruncatedSeries,
}

impl HenselBranch {
    /// a_i for i >= 1.
    pub fn coeff(&self, i: u32) -> &Scalar {
        self.phi.coeff(i)
    }

    pub fn order(&self) -> u32 {
        self.phi.order()
    }
}

/// Newton iteration with doubling precision, seeded at zero after
/// translating the base point to the origin. Every division is by a series
/// whose constant term is dP/dy at the point, a unit by hypothesis.
pub fn hensel_phi(curve: &PlaneCurve, p0: &PlanePoint, order: u32) -> Result<HenselBranch> {
    if !curve.contains(p0)? {
        return Err(Error::NotOnCurve(p0.x.to_string(), p0.y.to_string()));
    }
    let (gx, gy) = curve.gradient_at(p0)?;
    if gy.is_zero() {
        if gx.is_zero() {
            return Err(Error::SingularPoint(p0.x.to_string(), p0.y.to_string()));
        }
        return Err(Error::VerticalTangent(p0.x.to_string(), p0.y.to_string()));
    }
    let field = curve.field();
    let q = curve.poly().translate(&p0.x, &p0.y);
    let qy = q.partial(1);
    debug_assert!(q.eval2(&Scalar::zero(field), &Scalar::zero(field))?.is_zero());

    let mut phi = TruncatedSeries::zero(field, 0);
    let mut prec: u32 = 0; // correct modulo x^(prec+1)
    while prec < order {
        let next = (2 * prec + 1).min(order);
        let phi_ext = phi.truncate(next);
        let num = eval_bivar_at_series(&q, &phi_ext);
        let den = eval_bivar_at_series(&qy, &phi_ext);
        let step = num.div(&den)?;
        phi = phi_ext.sub(&step);
        prec = next;
    }
    debug_assert!(eval_bivar_at_series(&q, &phi).is_zero());
    debug_assert!(phi.coeff(0).is_zero());
    Ok(HenselBranch { base: p0.clone(), phi })
}

/// f_i evaluated at a point of the curve. On the curve this equals the
/// negated i-th derivative of the branch series, so it must agree with
/// -i! * a_i; the factorial guard rejects orders the characteristic kills.
pub fn g_eval(curve: &PlaneCurve, p0: &PlanePoint, i: u32) -> Result<Scalar> {
    if i == 0 {
        return Err(Error::Validation("jet index starts at 1".into()));
    }
    let ch = curve.field().characteristic();
    if Scalar::factorial(curve.field(), i).is_none() {
        return Err(Error::FactorialVanishes(i, ch));
    }
    let (gx, gy) = curve.gradient_at(p0)?;
    if gy.is_zero() {
        if gx.is_zero() {
            return Err(Error::SingularPoint(p0.x.to_string(), p0.y.to_string()));
        }
        return Err(Error::VerticalTangent(p0.x.to_string(), p0.y.to_string()));
    }
    let jets = jet_sequence(curve, i)?;
    jets.get(i).eval(&p0.x, &p0.y)
}

/// Local intersection multiplicity of two curves at a common point, both
/// smooth there with non-vertical tangents: the valuation of the branch
/// difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(u32),
    /// The defining polynomials are proportional.
    Infinite,
}

pub fn intersection_multiplicity(
    a: &PlaneCurve,
    b: &PlaneCurve,
    p: &PlanePoint,
) -> Result<Multiplicity> {
    let order = a.degree() * b.degree() + 2;
    intersection_multiplicity_with_order(a, b, p, order)
}

pub fn intersection_multiplicity_with_order(
    a: &PlaneCurve,
    b: &PlaneCurve,
    p: &PlanePoint,
    order: u32,
) -> Result<Multiplicity> {
    let needed = a.degree() * b.degree() + 1;
    let pa = hensel_phi(a, p, order)?;
    let pb = hensel_phi(b, p, order)?;
    let diff = pa.phi.sub(&pb.phi);
    match diff.valuation() {
        Some(v) => Ok(Multiplicity::Finite(v)),
        None => {
            if proportional(a.poly(), b.poly()) {
                Ok(Multiplicity::Infinite)
            } else if order < needed {
                Err(Error::TruncationInsufficient(order, needed))
            } else {
                // distinct irreducible curves cannot agree past deg*deg'
                Err(Error::BezoutViolation(order))
            }
        }
    }
}

fn proportional(a: &BivarPoly, b: &BivarPoly) -> bool {
    a.canonical() == b.canonical()
}

/// Outcome of summing local multiplicities over the computable common
/// points of two curves.
#[derive(Debug, Clone)]
pub struct BezoutReport {
    pub holds: bool,
    pub multiplicity_sum: u32,
    /// Points where a participant is singular or vertical-tangent; counted
    /// with the lower bound 1.
    pub flagged_points: u32,
    /// False when intersections over an extension field were skipped.
    pub complete: bool,
}

/// Check that local multiplicities over the base-field common points sum to
/// at most deg * deg'.
pub fn bezout_check(a: &PlaneCurve, b: &PlaneCurve) -> Result<BezoutReport> {
    if proportional(a.poly(), b.poly()) {
        return Err(Error::Validation(
            "identical curves have no finite intersection count".into(),
        ));
    }
    let common = crate::intersect::common_points(a.poly(), b.poly())?;
    let bound = a.degree() * b.degree();
    let mut sum = 0u32;
    let mut flagged = 0u32;
    for p in &common.points {
        let sa = a.is_smooth_at(p)?;
        let sb = b.is_smooth_at(p)?;
        let vert = |c: &PlaneCurve| -> Result<bool> {
            Ok(c.gradient_at(p)?.1.is_zero())
        };
        if !sa || !sb || vert(a)? || vert(b)? {
            sum += 1;
            flagged += 1;
            continue;
        }
        match intersection_multiplicity(a, b, p)? {
            Multiplicity::Finite(v) => sum += v,
            Multiplicity::Infinite => unreachable!("proportionality checked above"),
        }
    }
    Ok(BezoutReport {
        holds: sum <= bound,
        multiplicity_sum: sum,
        flagged_points: flagged,
        complete: common.complete,
    })
}

/// Branch series truncated for s-jet comparison. Two curves meet a shared
/// smooth non-vertical jet representative with multiplicity >= s exactly
/// when their branch coefficients a_1..a_{s-1} agree.
pub fn jet_class_key(curve: &PlaneCurve, p: &PlanePoint, s: u32) -> Result<Vec<Scalar>> {
    let branch = hensel_phi(curve, p, s.max(1))?;
    Ok((1..s).map(|i| branch.coeff(i).clone()).collect())
}

/// Default jet order used by the counting pipelines: the square of the
/// degree, the range where branch agreement forces proportionality.
pub fn default_jmax(degree: u32) -> u32 {
    (degree * degree).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_bivar, Field};

    fn qcurve(text: &str) -> PlaneCurve {
        PlaneCurve::new(parse_bivar(Field::Rational, text).unwrap()).unwrap()
    }

    fn qi(n: i64) -> Scalar {
        Scalar::from_i64(Field::Rational, n)
    }

    fn qr(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn origin() -> PlanePoint {
        PlanePoint::new(qi(0), qi(0))
    }

    /// x - 2y - y^2, the worked example used throughout.
    fn example_curve() -> PlaneCurve {
        qcurve("x - 2*y - y^2")
    }

    #[test]
    fn jet_sequence_of_example_curve() {
        // f1 = -1/(2 + 2y), f2 = 2/(2 + 2y)^3
        let jets = jet_sequence(&example_curve(), 2).unwrap();
        let f1 = jets.get(1);
        assert_eq!(f1.eval(&qi(0), &qi(0)).unwrap(), qr(-1, 2));
        let f2 = jets.get(2);
        assert_eq!(f2.eval(&qi(0), &qi(0)).unwrap(), qr(1, 4));
        // denominators in lowest terms: (y + 1) and (y + 1)^3 up to units
        assert_eq!(f1.den().degree(), Some(1));
        assert_eq!(f2.den().degree(), Some(3));
        assert_eq!(f2.num().degree(), Some(0));
    }

    #[test]
    fn jet_sequence_of_circle() {
        // f1 = x/y after reduction of 2x/2y
        let jets = jet_sequence(&qcurve("x^2 + y^2 - 1"), 1).unwrap();
        let f1 = jets.get(1);
        assert_eq!(f1.num(), &BivarPoly::var_x(Field::Rational));
        assert_eq!(f1.den(), &BivarPoly::var_y(Field::Rational));
    }

    #[test]
    fn jets_of_line_vanish() {
        let jets = jet_sequence(&qcurve("y - 3"), 4).unwrap();
        assert!(jets.get(1).is_zero());
        for i in 2..=4 {
            assert!(jets.get(i).is_zero());
        }
    }

    #[test]
    fn delta_of_constant_is_zero() {
        let f = Field::Rational;
        let jets = jet_sequence(&example_curve(), 1).unwrap();
        let c = RationalFunc::from_poly(BivarPoly::constant(qi(7)));
        assert!(delta_apply(&c, jets.get(1)).unwrap().is_zero());
        // flat slope stays flat: with f = f1 = 0 every further jet is zero
        let zero = RationalFunc::zero(f);
        assert!(delta_apply(&zero, &zero).unwrap().is_zero());
    }

    #[test]
    fn char2_parabola_jets_degenerate() {
        let f4 = Field::char2_ext(2).unwrap();
        let c = PlaneCurve::from_family(parse_bivar(f4, "y - x^2 - 1").unwrap()).unwrap();
        // f1 = 2x/1 = 0 identically: flat jets on a degree-2 curve
        assert!(matches!(jet_sequence(&c, 2), Err(Error::DegenerateJets(_))));
    }

    #[test]
    fn hensel_example_series() {
        // phi = (1/2)x - (1/8)x^2 + (1/16)x^3 - (5/128)x^4 + ...
        let b = hensel_phi(&example_curve(), &origin(), 4).unwrap();
        assert_eq!(b.coeff(1), &qr(1, 2));
        assert_eq!(b.coeff(2), &qr(-1, 8));
        assert_eq!(b.coeff(3), &qr(1, 16));
        assert_eq!(b.coeff(4), &qr(-5, 128));
    }

    #[test]
    fn hensel_explicit_graph() {
        let b = hensel_phi(&qcurve("y - x^2"), &origin(), 5).unwrap();
        for i in 1..=5 {
            let expect = if i == 2 { qi(1) } else { qi(0) };
            assert_eq!(b.coeff(i), &expect);
        }
    }

    #[test]
    fn hensel_circle_top() {
        // branch of the circle at (0,1): -x^2/2 - x^4/8
        let p = PlanePoint::new(qi(0), qi(1));
        let b = hensel_phi(&qcurve("x^2 + y^2 - 1"), &p, 4).unwrap();
        assert_eq!(b.coeff(1), &qi(0));
        assert_eq!(b.coeff(2), &qr(-1, 2));
        assert_eq!(b.coeff(3), &qi(0));
        assert_eq!(b.coeff(4), &qr(-1, 8));
        // back-substitution is the zero series
        let t = qcurve("x^2 + y^2 - 1").poly().translate(&qi(0), &qi(1));
        assert!(eval_bivar_at_series(&t, &b.phi).is_zero());
    }

    #[test]
    fn hensel_rejects_bad_points() {
        let circle = qcurve("x^2 + y^2 - 1");
        let p = PlanePoint::new(qi(1), qi(0));
        assert!(matches!(
            hensel_phi(&circle, &p, 3),
            Err(Error::VerticalTangent(..))
        ));
        let nodal = qcurve("y^2 - x^3 - x^2");
        assert!(matches!(
            hensel_phi(&nodal, &origin(), 3),
            Err(Error::SingularPoint(..))
        ));
        assert!(matches!(
            hensel_phi(&circle, &origin(), 3),
            Err(Error::NotOnCurve(..))
        ));
    }

    #[test]
    fn hensel_over_prime_field() {
        let f101 = Field::prime(101).unwrap();
        let c = PlaneCurve::from_family(parse_bivar(f101, "x - 2*y - y^2").unwrap()).unwrap();
        let p = PlanePoint::new(Scalar::zero(f101), Scalar::zero(f101));
        let n = crate::algebra::default_truncation(2);
        let b = hensel_phi(&c, &p, n).unwrap();
        // a_1 = 1/2 mod 101 = 51
        assert_eq!(b.coeff(1), &Scalar::from_i64(f101, 51));
        let t = c.poly().translate(&p.x, &p.y);
        assert!(eval_bivar_at_series(&t, &b.phi).is_zero());
    }

    #[test]
    fn g_eval_bridge_on_example() {
        let c = example_curve();
        let p = origin();
        // g_1 = -1! a_1 = -1/2, g_2 = -2! a_2 = 1/4
        assert_eq!(g_eval(&c, &p, 1).unwrap(), qr(-1, 2));
        assert_eq!(g_eval(&c, &p, 2).unwrap(), qr(1, 4));
        let b = hensel_phi(&c, &p, 6).unwrap();
        for i in 1..=6u32 {
            let fact = Scalar::factorial(Field::Rational, i).unwrap();
            let expect = b.coeff(i).mul(&fact).neg();
            assert_eq!(g_eval(&c, &p, i).unwrap(), expect, "order {i}");
        }
    }

    #[test]
    fn g_eval_on_line_is_zero() {
        let line = qcurve("y - 3");
        let p = PlanePoint::new(qi(7), qi(3));
        for i in 1..=4 {
            assert!(g_eval(&line, &p, i).unwrap().is_zero());
        }
    }

    #[test]
    fn g_eval_factorial_guard() {
        let f5 = Field::prime(5).unwrap();
        let c = PlaneCurve::from_family(parse_bivar(f5, "x - 2*y - y^2").unwrap()).unwrap();
        let p = PlanePoint::new(Scalar::zero(f5), Scalar::zero(f5));
        assert!(g_eval(&c, &p, 4).is_ok());
        assert!(matches!(
            g_eval(&c, &p, 5),
            Err(Error::FactorialVanishes(5, 5))
        ));
    }

    #[test]
    fn multiplicity_examples() {
        // y and y - x^2 meet the origin with multiplicity 2
        let a = qcurve("y");
        let b = qcurve("y - x^2");
        assert_eq!(
            intersection_multiplicity(&a, &b, &origin()).unwrap(),
            Multiplicity::Finite(2)
        );
        // two transversal lines
        let l1 = qcurve("y - x");
        let l2 = qcurve("y + x");
        assert_eq!(
            intersection_multiplicity(&l1, &l2, &origin()).unwrap(),
            Multiplicity::Finite(1)
        );
        // tangent circles at (0,1)
        let c1 = qcurve("x^2 + y^2 - 1");
        let c2 = qcurve("x^2 + y^2 - 4*y + 3");
        let p = PlanePoint::new(qi(0), qi(1));
        assert_eq!(
            intersection_multiplicity(&c1, &c2, &p).unwrap(),
            Multiplicity::Finite(2)
        );
        // valuation-3 contact
        let g1 = qcurve("y - x^2");
        let g2 = qcurve("y - x^2 - x^3");
        assert_eq!(
            intersection_multiplicity(&g1, &g2, &origin()).unwrap(),
            Multiplicity::Finite(3)
        );
    }

    #[test]
    fn multiplicity_symmetry() {
        let a = qcurve("y - x^2");
        let b = qcurve("y - x^3 - x^2");
        let m1 = intersection_multiplicity(&a, &b, &origin()).unwrap();
        let m2 = intersection_multiplicity(&b, &a, &origin()).unwrap();
        assert_eq!(m1, m2);
    }

    #[test]
    fn proportional_curves_infinite() {
        let a = qcurve("x^2 + y^2 - 1");
        let b = PlaneCurve::new(parse_bivar(Field::Rational, "2*x^2 + 2*y^2 - 2").unwrap()).unwrap();
        let p = PlanePoint::new(qi(0), qi(1));
        assert_eq!(
            intersection_multiplicity(&a, &b, &p).unwrap(),
            Multiplicity::Infinite
        );
    }

    #[test]
    fn bezout_examples() {
        // distinct unit circles: multiplicity sum <= 4
        let c1 = qcurve("x^2 + y^2 - 1");
        let c2 = qcurve("x^2 + y^2 - 4*y + 3");
        let rep = bezout_check(&c1, &c2).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.multiplicity_sum, 2);

        // line and conic: sum <= 2
        let l = qcurve("y - 4");
        let c = qcurve("x^2 + y^2 - 25");
        let rep = bezout_check(&l, &c).unwrap();
        assert!(rep.holds);
        assert!(rep.multiplicity_sum <= 2);

        // char-2 parabolas with equal leading part are disjoint
        let f4 = Field::char2_ext(2).unwrap();
        let p1 = PlaneCurve::from_family(parse_bivar(f4, "y - x^2").unwrap()).unwrap();
        let p2 = PlaneCurve::from_family(parse_bivar(f4, "y - x^2 - 1").unwrap()).unwrap();
        let rep = bezout_check(&p1, &p2).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.multiplicity_sum, 0);
    }

    #[test]
    fn jet_class_keys() {
        let g1 = qcurve("y - x^2");
        let g2 = qcurve("y - x^2 - x^3");
        // multiplicity is 3: classes agree for s <= 3, split at s = 4
        let k3a = jet_class_key(&g1, &origin(), 3).unwrap();
        let k3b = jet_class_key(&g2, &origin(), 3).unwrap();
        assert_eq!(k3a, k3b);
        let k4a = jet_class_key(&g1, &origin(), 4).unwrap();
        let k4b = jet_class_key(&g2, &origin(), 4).unwrap();
        assert_ne!(k4a, k4b);
    }
}
