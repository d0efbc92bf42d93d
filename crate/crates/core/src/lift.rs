//! Space-curve encodings of plane-curve tangency data: a plane curve lifts
//! to the space curve carrying its s-th jet (or the perpendicular slope) as
//! a z-coordinate, so that tangency (orthogonality) downstairs becomes
//! curve-curve incidence upstairs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::{Field, Scalar, TrivarPoly};
use crate::curves::{classify_good_points, PlaneCurve, PlanePoint};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpacePoint {
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

impl SpacePoint {
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Self {
        assert!(x.field() == y.field() && y.field() == z.field());
        SpacePoint { x, y, z }
    }

    pub fn plane(&self) -> PlanePoint {
        PlanePoint::new(self.x.clone(), self.y.clone())
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Which jet the z-coordinate encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LiftKind {
    /// z carries f_s; order s >= 1.
    Tangency { s: u32 },
    /// z carries the perpendicular slope -dP/dy / dP/dx.
    Orthogonal,
}

impl fmt::Display for LiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftKind::Tangency { s } => write!(f, "tangency-{s}"),
            LiftKind::Orthogonal => write!(f, "orthogonal"),
        }
    }
}

/// The pair of trivariate polynomials cutting out the lift, together with
/// the bad plane points excluded from the good branch.
#[derive(Debug, Clone)]
pub struct LiftedCurve {
    source: PlaneCurve,
    kind: LiftKind,
    surface_p: TrivarPoly,
    surface_z: TrivarPoly,
    /// z * den - num over good points; kept for fiber evaluation.
    fiber_num: crate::algebra::BivarPoly,
    fiber_den: crate::algebra::BivarPoly,
    bad_points: BTreeSet<PlanePoint>,
    /// Bezout bound on the degree of the good branch.
    branch_degree_bound: u32,
}

impl LiftedCurve {
    pub fn source(&self) -> &PlaneCurve {
        &self.source
    }

    pub fn kind(&self) -> LiftKind {
        self.kind
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    /// The two defining polynomials (P, z*G - F).
    pub fn defining_pair(&self) -> (&TrivarPoly, &TrivarPoly) {
        (&self.surface_p, &self.surface_z)
    }

    pub fn bad_points(&self) -> &BTreeSet<PlanePoint> {
        &self.bad_points
    }

    pub fn branch_degree_bound(&self) -> u32 {
        self.branch_degree_bound
    }

    pub fn is_good(&self, p: &PlanePoint) -> Result<bool> {
        Ok(self.source.contains(p)? && !self.bad_points.contains(p))
    }

    /// The unique fiber point over a good plane point of the source.
    pub fn lift_point(&self, p: &PlanePoint) -> Result<SpacePoint> {
        if !self.source.contains(p)? {
            return Err(Error::NotOnCurve(p.x.to_string(), p.y.to_string()));
        }
        if self.bad_points.contains(p) {
            return Err(Error::BadPoint(
                p.x.to_string(),
                p.y.to_string(),
                "excluded from the good branch".into(),
            ));
        }
        let den = self.fiber_den.eval2(&p.x, &p.y)?;
        if den.is_zero() {
            return Err(Error::BadPoint(
                p.x.to_string(),
                p.y.to_string(),
                "fiber denominator vanishes".into(),
            ));
        }
        let z = self.fiber_num.eval2(&p.x, &p.y)?.div(&den)?;
        Ok(SpacePoint::new(p.x.clone(), p.y.clone(), z))
    }

    pub fn contains_space(&self, q: &SpacePoint) -> Result<bool> {
        Ok(self.surface_p.eval3(&q.x, &q.y, &q.z)?.is_zero()
            && self.surface_z.eval3(&q.x, &q.y, &q.z)?.is_zero())
    }

    /// Good fiber points over the finite base field, in plane order.
    pub fn good_fiber_points(&self) -> Result<Vec<SpacePoint>> {
        let mut out = vec![];
        for p in self.source.points_finite()? {
            if !self.bad_points.contains(&p) {
                out.push(self.lift_point(&p)?);
            }
        }
        Ok(out)
    }
}

/// Build the lift of a curve.
///
/// For tangency order s the second surface is z*G_s - F_s with F_s/G_s the
/// reduced s-th jet; for the orthogonal kind it is z*dP/dx + dP/dy. Bad
/// points (vertical tangents, singular points, vanishing jet denominators)
/// are recorded and excluded from the good branch.
pub fn lift_curve(curve: &PlaneCurve, kind: LiftKind) -> Result<LiftedCurve> {
    let field = curve.field();
    let z = TrivarPoly::var(field, 2);
    let (num, den, bad) = match kind {
        LiftKind::Tangency { s } => {
            if s == 0 {
                return Err(Error::Validation("tangency order starts at 1".into()));
            }
            let jets = crate::jets::jet_sequence(curve, s)?;
            let f = jets.get(s);
            let bad = classify_good_points(curve, s)?;
            (f.num().clone(), f.den().clone(), bad)
        }
        LiftKind::Orthogonal => {
            let px = curve.dx();
            if px.is_zero() {
                return Err(Error::DegenerateJets(
                    "dP/dx is identically zero on the curve".into(),
                ));
            }
            let g = crate::algebra::poly_gcd(curve.poly(), px)?;
            if g.degree().unwrap_or(0) > 0 {
                return Err(Error::DegenerateJets(
                    "dP/dx vanishes identically on the curve".into(),
                ));
            }
            // bad points: dP/dx = 0 on the curve (empty or vertical fibers)
            let mut bad = BTreeSet::new();
            if px.degree().unwrap_or(0) >= 1 || px.is_zero() {
                let common = crate::intersect::common_points(curve.poly(), px)?;
                bad.extend(common.points);
            }
            (curve.dy().neg(), px.clone(), bad)
        }
    };
    let surface_z = z.mul(&den.to_trivar()).sub(&num.to_trivar());
    let branch_degree_bound = curve.degree()
        * surface_z.degree().unwrap_or(1).max(1);
    Ok(LiftedCurve {
        source: curve.clone(),
        kind,
        surface_p: curve.poly().to_trivar(),
        surface_z,
        fiber_num: num,
        fiber_den: den,
        bad_points: bad,
        branch_degree_bound,
    })
}

/// Zariski tangent space of the lift at a space point: the kernel of the
/// 2 x 3 Jacobian of the defining pair. Dimension 1 at smooth points of the
/// branch; other dimensions are reported, not errors.
#[derive(Debug, Clone)]
pub struct TangentSpace3 {
    pub base: SpacePoint,
    pub basis: Vec<[Scalar; 3]>,
}

impl TangentSpace3 {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Scalar; 3]) -> bool {
        let field = self.base.x.field();
        let mut rows: Vec<Vec<Scalar>> = self
            .basis
            .iter()
            .map(|b| b.to_vec())
            .collect();
        let r0 = linalg::rank(rows.clone());
        rows.push(v.to_vec());
        let r1 = linalg::rank(rows);
        let _ = field;
        r0 == r1
    }
}

pub fn tangent_space(lift: &LiftedCurve, q: &SpacePoint) -> Result<TangentSpace3> {
    if !lift.contains_space(q)? {
        return Err(Error::Validation(format!("{q} is not on the lift")));
    }
    let field = lift.field();
    let (sp, sz) = lift.defining_pair();
    let mut rows = vec![];
    for s in [sp, sz] {
        let row: Vec<Scalar> = (0..3)
            .map(|v| s.partial(v).eval3(&q.x, &q.y, &q.z))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    let basis = linalg::kernel_basis(rows, 3, field)
        .into_iter()
        .map(|v| [v[0].clone(), v[1].clone(), v[2].clone()])
        .collect();
    Ok(TangentSpace3 { base: q.clone(), basis })
}

/// Whether (0,0,1) lies in the span of the two tangent lines, decided by an
/// exact rank computation. Both tangent spaces must be one-dimensional.
pub fn e3_in_span(a: &LiftedCurve, b: &LiftedCurve, q: &SpacePoint) -> Result<bool> {
    let ta = tangent_space(a, q)?;
    let tb = tangent_space(b, q)?;
    if ta.dim() != 1 || tb.dim() != 1 {
        return Err(Error::Validation(format!(
            "tangent spaces must be lines (dims {} and {})",
            ta.dim(),
            tb.dim()
        )));
    }
    let field = a.field();
    let e3 = [Scalar::zero(field), Scalar::zero(field), Scalar::one(field)];
    let span = vec![ta.basis[0].to_vec(), tb.basis[0].to_vec()];
    let r0 = linalg::rank(span.clone());
    let mut with_e3 = span;
    with_e3.push(e3.to_vec());
    Ok(linalg::rank(with_e3) == r0)
}

/// All space points lying on the good branches of at least two distinct
/// lifts, each with the indices of the lifts through it.
///
/// Over a finite field the candidates come from scanning source-curve
/// points; over the rationals from pairwise elimination, which restricts
/// sources to lines and conics.
pub fn two_rich_points(lifts: &[LiftedCurve]) -> Result<Vec<(SpacePoint, Vec<usize>)>> {
    if lifts.is_empty() {
        return Ok(vec![]);
    }
    let field = lifts[0].field();
    for l in lifts {
        if l.field() != field {
            return Err(Error::FieldMismatch(field.to_string(), l.field().to_string()));
        }
    }
    let mut by_point: BTreeMap<SpacePoint, BTreeSet<usize>> = BTreeMap::new();
    match field {
        Field::Rational => {
            for i in 0..lifts.len() {
                for j in i + 1..lifts.len() {
                    let (a, b) = (&lifts[i], &lifts[j]);
                    for d in [a.source().degree(), b.source().degree()] {
                        if d > 2 {
                            return Err(Error::Validation(
                                "two-rich scans over the rationals need line or conic sources"
                                    .into(),
                            ));
                        }
                    }
                    if a.source().poly().canonical() == b.source().poly().canonical() {
                        // same plane curve: every common good point shares
                        // its fiber exactly when the two z-values agree
                        for p in plane_candidates_same_source(a, b)? {
                            collect_match(a, b, i, j, &p, &mut by_point)?;
                        }
                        continue;
                    }
                    let common =
                        crate::intersect::common_points(a.source().poly(), b.source().poly())?;
                    for p in common.points {
                        collect_match(a, b, i, j, &p, &mut by_point)?;
                    }
                }
            }
        }
        _ => {
            // collect good fibers per lift, then group exact space points
            for (i, l) in lifts.iter().enumerate() {
                for q in l.good_fiber_points()? {
                    by_point.entry(q).or_default().insert(i);
                }
            }
        }
    }
    Ok(by_point
        .into_iter()
        .filter(|(_, set)| set.len() >= 2)
        .map(|(q, set)| (q, set.into_iter().collect()))
        .collect())
}

/// Candidate plane points where two different lifts of the same source can
/// meet: fibers agree where num_a * den_b - num_b * den_a vanishes. The
/// caller re-checks fibers exactly, so over-approximation is fine.
fn plane_candidates_same_source(a: &LiftedCurve, b: &LiftedCurve) -> Result<Vec<PlanePoint>> {
    let cross = a
        .fiber_num
        .mul(&b.fiber_den)
        .sub(&b.fiber_num.mul(&a.fiber_den));
    if cross.is_zero() {
        return Err(Error::Validation(
            "two lifts of one curve agree everywhere; arrangement is degenerate".into(),
        ));
    }
    let g = crate::algebra::poly_gcd(a.source().poly(), &cross)?;
    if g.degree().unwrap_or(0) > 0 {
        return Err(Error::Validation(
            "two lifts of one curve agree along the whole curve".into(),
        ));
    }
    Ok(crate::intersect::common_points(a.source().poly(), &cross)?.points)
}

fn collect_match(
    a: &LiftedCurve,
    b: &LiftedCurve,
    i: usize,
    j: usize,
    p: &PlanePoint,
    by_point: &mut BTreeMap<SpacePoint, BTreeSet<usize>>,
) -> Result<()> {
    if a.bad_points().contains(p) || b.bad_points().contains(p) {
        return Ok(());
    }
    let qa = match a.lift_point(p) {
        Ok(q) => q,
        Err(Error::BadPoint(..)) => return Ok(()),
        Err(e) => return Err(e),
    };
    let qb = match b.lift_point(p) {
        Ok(q) => q,
        Err(Error::BadPoint(..)) => return Ok(()),
        Err(e) => return Err(e),
    };
    if qa == qb {
        let set = by_point.entry(qa).or_default();
        set.insert(i);
        set.insert(j);
    }
    Ok(())
}
