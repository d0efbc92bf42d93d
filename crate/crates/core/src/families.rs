//! Deterministic generators for the arrangement families the workbench
//! studies: full unit-circle planes over prime fields, the characteristic-2
//! parabolas, orthogonal grids, coaxial circle pencils, and the
//! circle-plus-tangent-line construction with superlinear tangency counts.
//! Each generator is a strategy behind one trait, registered by name and
//! selected from the command line.

use crate::algebra::{BivarPoly, Field, Scalar};
use crate::counting::Arrangement;
use crate::curves::{field_elements, PlaneCurve, PlanePoint, SCAN_BOUND};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Parameters accepted by the generators; each family validates the subset
/// it uses.
#[derive(Debug, Clone, Default)]
pub struct FamilyParams {
    /// Prime field order.
    pub p: Option<u64>,
    /// Binary extension field order (4, 8 or 16).
    pub q: Option<u64>,
    /// Curve budget.
    pub n: Option<u64>,
    /// Per-side size for paired families.
    pub m: Option<u64>,
    pub seed: u64,
}

impl FamilyParams {
    pub fn with_p(p: u64) -> Self {
        FamilyParams { p: Some(p), ..Default::default() }
    }

    pub fn with_n(n: u64) -> Self {
        FamilyParams { n: Some(n), ..Default::default() }
    }

    fn tag(&self) -> String {
        let mut parts = vec![];
        if let Some(p) = self.p {
            parts.push(format!("p{p}"));
        }
        if let Some(q) = self.q {
            parts.push(format!("q{q}"));
        }
        if let Some(n) = self.n {
            parts.push(format!("n{n}"));
        }
        if let Some(m) = self.m {
            parts.push(format!("m{m}"));
        }
        parts.push(format!("s{}", self.seed));
        parts.join("-")
    }
}

pub trait ArrangementFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn generate(&self, params: &FamilyParams) -> Result<Arrangement>;
}

pub struct FamilyRegistry {
    entries: Vec<Box<dyn ArrangementFamily>>,
}

impl FamilyRegistry {
    pub fn builtin() -> Self {
        FamilyRegistry {
            entries: vec![
                Box::new(UnitCircles),
                Box::new(Char2Parabolas),
                Box::new(OrthogonalGrid),
                Box::new(CoaxialPencils),
                Box::new(IncidenceTangency),
            ],
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn ArrangementFamily> {
        self.entries.iter().find(|f| f.name() == name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|f| f.name()).collect()
    }

    pub fn describe_all(&self) -> Vec<(&'static str, &'static str)> {
        self.entries.iter().map(|f| (f.name(), f.describe())).collect()
    }

    pub fn generate_by_name(&self, name: &str, params: &FamilyParams) -> Result<Arrangement> {
        let family = self
            .get(name)
            .ok_or_else(|| Error::Validation(format!("unknown family '{name}'")))?;
        family.generate(params)
    }
}

/// All p^2 unit circles (x-a)^2 + (y-b)^2 = 1 over F_p.
pub struct UnitCircles;

impl ArrangementFamily for UnitCircles {
    fn name(&self) -> &'static str {
        "unit-circles"
    }

    fn describe(&self) -> &'static str {
        "every unit circle of the affine plane over F_p (p^2 curves)"
    }

    fn generate(&self, params: &FamilyParams) -> Result<Arrangement> {
        let p = params.p.ok_or_else(|| Error::Validation("unit-circles needs --p".into()))?;
        if p == 2 {
            return Err(Error::Validation("unit circles need an odd prime".into()));
        }
        if p > SCAN_BOUND {
            return Err(Error::ScanBound(format!("p = {p} exceeds {SCAN_BOUND}")));
        }
        let field = Field::prime(p)?;
        let one = Scalar::one(field);
        let mut curves = Vec::with_capacity((p * p) as usize);
        for a in 0..p {
            for b in 0..p {
                let a = Scalar::from_i64(field, a as i64);
                let b = Scalar::from_i64(field, b as i64);
                // x^2 + y^2 - 2a x - 2b y + a^2 + b^2 - 1
                let two = Scalar::from_i64(field, 2);
                let c0 = a.mul(&a).add(&b.mul(&b)).sub(&one);
                let poly = BivarPoly::from_terms(
                    field,
                    [
                        ([2, 0], one.clone()),
                        ([0, 2], one.clone()),
                        ([1, 0], two.mul(&a).neg()),
                        ([0, 1], two.mul(&b).neg()),
                        ([0, 0], c0),
                    ],
                );
                curves.push(PlaneCurve::from_family(poly)?);
            }
        }
        Arrangement::new(format!("unit-circles-{}", params.tag()), field, curves, params.seed)
    }
}

/// n parabolas y = a_i x^2 + b_i with distinct nonzero a_i over F_{2^k}.
/// Every pair meets exactly once, tangentially: the jets are flat in
/// characteristic 2.
pub struct Char2Parabolas;

impl ArrangementFamily for Char2Parabolas {
    fn name(&self) -> &'static str {
        "char2-parabolas"
    }

    fn describe(&self) -> &'static str {
        "pairwise-tangent parabolas over a binary field"
    }

    fn generate(&self, params: &FamilyParams) -> Result<Arrangement> {
        let q = params.q.ok_or_else(|| Error::Validation("char2-parabolas needs --q".into()))?;
        let k = match q {
            4 => 2,
            8 => 3,
            16 => 4,
            other => {
                return Err(Error::Validation(format!(
                    "char2-parabolas needs q in {{4, 8, 16}}, got {other} (characteristic must be 2)"
                )))
            }
        };
        let field = Field::char2_ext(k)?;
        let n = params.n.unwrap_or(q - 1);
        if n > q - 1 {
            return Err(Error::Validation(format!(
                "only {} distinct leading coefficients exist over F_{q}",
                q - 1
            )));
        }
        let mut rng = SplitMix64::new(params.seed);
        let mut curves = Vec::with_capacity(n as usize);
        for i in 0..n {
            let a = Scalar::from_bits(field, (i + 1) as u8)?;
            let b = Scalar::from_bits(field, rng.below(q) as u8)?;
            // y - a x^2 - b
            let poly = BivarPoly::from_terms(
                field,
                [([0, 1], Scalar::one(field)), ([2, 0], a.neg()), ([0, 0], b.neg())],
            );
            curves.push(PlaneCurve::from_family(poly)?);
        }
        Arrangement::new(format!("char2-parabolas-{}", params.tag()), field, curves, params.seed)
    }
}

/// n/2 horizontal and n/2 vertical lines; every crossing is orthogonal.
pub struct OrthogonalGrid;

impl ArrangementFamily for OrthogonalGrid {
    fn name(&self) -> &'static str {
        "grid"
    }

    fn describe(&self) -> &'static str {
        "n/2 horizontal plus n/2 vertical lines (n^2/4 orthogonal crossings)"
    }

    fn generate(&self, params: &FamilyParams) -> Result<Arrangement> {
        let n = params.n.ok_or_else(|| Error::Validation("grid needs --n".into()))?;
        if n == 0 || n % 2 != 0 {
            return Err(Error::Validation("grid needs an even positive n".into()));
        }
        let field = match params.p {
            None => Field::Rational,
            Some(p) => Field::prime(p)?,
        };
        if let Some(q) = field.order() {
            if q <= n / 2 {
                return Err(Error::Validation(format!(
                    "grid with n/2 = {} does not fit in a field of order {q}",
                    n / 2
                )));
            }
        }
        let one = Scalar::one(field);
        let mut curves = vec![];
        for i in 1..=(n / 2) {
            let c = Scalar::from_i64(field, i as i64);
            curves.push(PlaneCurve::from_family(BivarPoly::from_terms(
                field,
                [([0, 1], one.clone()), ([0, 0], c.neg())],
            ))?);
        }
        for j in 1..=(n / 2) {
            let c = Scalar::from_i64(field, j as i64);
            curves.push(PlaneCurve::from_family(BivarPoly::from_terms(
                field,
                [([1, 0], one.clone()), ([0, 0], c.neg())],
            ))?);
        }
        Arrangement::new(format!("grid-{}", params.tag()), field, curves, params.seed)
    }
}

/// m circles x^2 + y^2 - 2*lambda*x - 1 and m circles x^2 + y^2 - 2*mu*y + 1.
/// Every cross pair is orthogonal wherever it meets; parameters are chosen
/// so that every cross pair does meet over the base field.
pub struct CoaxialPencils;

impl ArrangementFamily for CoaxialPencils {
    fn name(&self) -> &'static str {
        "coaxial-pencils"
    }

    fn describe(&self) -> &'static str {
        "two orthogonal pencils of circles"
    }

    fn generate(&self, params: &FamilyParams) -> Result<Arrangement> {
        let m = params.m.or(params.n.map(|n| n / 2)).ok_or_else(|| {
            Error::Validation("coaxial-pencils needs --m (circles per pencil)".into())
        })?;
        if m == 0 {
            let field = match params.p {
                None => Field::Rational,
                Some(p) => Field::prime(p)?,
            };
            return Arrangement::new(
                format!("coaxial-pencils-{}", params.tag()),
                field,
                vec![],
                params.seed,
            );
        }
        let field = match params.p {
            None => Field::Rational,
            Some(p) => Field::prime(p)?,
        };
        if let Some(q) = field.order() {
            if q > SCAN_BOUND {
                return Err(Error::ScanBound(format!("p = {q} exceeds {SCAN_BOUND}")));
            }
        }
        let one = Scalar::one(field);
        let two = Scalar::from_i64(field, 2);
        let lambda_circle = |l: &Scalar| -> BivarPoly {
            BivarPoly::from_terms(
                field,
                [
                    ([2, 0], one.clone()),
                    ([0, 2], one.clone()),
                    ([1, 0], two.mul(l).neg()),
                    ([0, 0], one.neg()),
                ],
            )
        };
        let mu_circle = |u: &Scalar| -> BivarPoly {
            BivarPoly::from_terms(
                field,
                [
                    ([2, 0], one.clone()),
                    ([0, 2], one.clone()),
                    ([0, 1], two.mul(u).neg()),
                    ([0, 0], one.clone()),
                ],
            )
        };
        // candidate parameter stream, deterministic
        let candidates: Vec<Scalar> = match field {
            Field::Rational => (0..400).map(|v| Scalar::from_i64(field, v)).collect(),
            _ => field_elements(field)?,
        };
        // nondegenerate parameter values
        let lambda_pool: Vec<Scalar> = candidates
            .iter()
            .filter(|l| !l.mul(l).add(&one).is_zero())
            .cloned()
            .collect();
        let mu_pool: Vec<Scalar> = candidates
            .iter()
            .filter(|u| !u.mul(u).sub(&one).is_zero())
            .cloned()
            .collect();
        if (lambda_pool.len() as u64) < m {
            return Err(Error::Validation(format!("field too small for {m} x-pencil circles")));
        }
        // whether every cross pair meets over the base field depends on
        // quadratic-residue luck, so slide a window over the lambda pool
        // until a mu set works
        for offset in 0..=(lambda_pool.len() - m as usize) {
            let lambdas = &lambda_pool[offset..offset + m as usize];
            let mut mus: Vec<Scalar> = vec![];
            'mu: for u in &mu_pool {
                if mus.len() as u64 == m {
                    break;
                }
                let mu_poly = mu_circle(u);
                for l in lambdas {
                    let common = crate::intersect::common_points(&lambda_circle(l), &mu_poly)?;
                    if common.points.is_empty() {
                        continue 'mu;
                    }
                }
                mus.push(u.clone());
            }
            if mus.len() as u64 == m {
                let mut curves = vec![];
                for l in lambdas {
                    curves.push(PlaneCurve::from_family(lambda_circle(l))?);
                }
                for u in &mus {
                    curves.push(PlaneCurve::from_family(mu_circle(u))?);
                }
                return Arrangement::new(
                    format!("coaxial-pencils-{}", params.tag()),
                    field,
                    curves,
                    params.seed,
                );
            }
        }
        Err(Error::Validation(format!(
            "field too small to realize {m} intersecting cross pairs"
        )))
    }
}

/// Line families with rational unit normals usable by the tangency
/// construction: (a, b, c) with a^2 + b^2 = c^2. Axis directions first,
/// then the smallest Pythagorean slopes.
const LINE_NORMALS: [(i64, i64, i64); 6] = [
    (1, 0, 1),  // vertical lines
    (0, 1, 1),  // horizontal lines
    (3, -4, 5), // slope 3/4
    (3, 4, 5),  // slope -3/4
    (4, -3, 5), // slope 4/3
    (4, 3, 5),  // slope -4/3
];

/// n unit circles on a g x 2g grid (n = 2g^2) plus the n tangent lines with
/// rational unit normals that touch the most circles. Every base incidence
/// is a rational tangency; the realized count grows superlinearly in n.
pub struct IncidenceTangency;

impl IncidenceTangency {
    /// Circle centers: (4i, j) for i in 1..=g, j in 1..=2g. The x-spacing
    /// keeps slope-3/4 tangent lines meeting many centers at integer
    /// combinations.
    pub fn centers(g: u64) -> Vec<(i64, i64)> {
        let mut out = vec![];
        for i in 1..=g as i64 {
            for j in 1..=(2 * g) as i64 {
                out.push((4 * i, j));
            }
        }
        out
    }

    /// Candidate tangent lines a x + b y = d with their service counts,
    /// ordered by (service desc, family order, offset).
    fn line_pool(g: u64) -> Vec<((i64, i64, i64), usize)> {
        let centers = Self::centers(g);
        let mut pool: Vec<((i64, i64, i64), usize)> = vec![];
        for (fam, &(a, b, c)) in LINE_NORMALS.iter().enumerate() {
            let mut offsets: std::collections::BTreeMap<i64, usize> = Default::default();
            for &(cx, cy) in &centers {
                let v = a * cx + b * cy;
                *offsets.entry(v + c).or_default() += 1;
                *offsets.entry(v - c).or_default() += 1;
            }
            for (d, served) in offsets {
                pool.push(((a, b, d), served));
            }
            let _ = fam;
        }
        // stable greedy order
        pool.sort_by(|x, y| {
            y.1.cmp(&x.1)
                .then_with(|| x.0 .0.cmp(&y.0 .0))
                .then_with(|| x.0 .1.cmp(&y.0 .1))
                .then_with(|| x.0 .2.cmp(&y.0 .2))
        });
        pool
    }
}

impl ArrangementFamily for IncidenceTangency {
    fn name(&self) -> &'static str {
        "incidence-tangency"
    }

    fn describe(&self) -> &'static str {
        "unit circles on a grid plus their most-tangent rational lines"
    }

    fn generate(&self, params: &FamilyParams) -> Result<Arrangement> {
        let n = params.n.ok_or_else(|| Error::Validation("incidence-tangency needs --n".into()))?;
        let g = (1..=50u64)
            .find(|g| 2 * g * g == n)
            .ok_or_else(|| Error::Validation(format!("n must be 2*g^2 with g >= 2, got {n}")))?;
        if g < 2 {
            return Err(Error::Validation("n too small to form the grid (need n >= 8)".into()));
        }
        let field = Field::Rational;
        let one = Scalar::one(field);
        let two = Scalar::from_i64(field, 2);
        let mut curves = vec![];
        for (cx, cy) in Self::centers(g) {
            let cx = Scalar::from_i64(field, cx);
            let cy = Scalar::from_i64(field, cy);
            let c0 = cx.mul(&cx).add(&cy.mul(&cy)).sub(&one);
            curves.push(PlaneCurve::from_family(BivarPoly::from_terms(
                field,
                [
                    ([2, 0], one.clone()),
                    ([0, 2], one.clone()),
                    ([1, 0], two.mul(&cx).neg()),
                    ([0, 1], two.mul(&cy).neg()),
                    ([0, 0], c0),
                ],
            ))?);
        }
        for ((a, b, d), _served) in Self::line_pool(g).into_iter().take(n as usize) {
            curves.push(PlaneCurve::from_family(BivarPoly::from_terms(
                field,
                [
                    ([1, 0], Scalar::from_i64(field, a)),
                    ([0, 1], Scalar::from_i64(field, b)),
                    ([0, 0], Scalar::from_i64(field, -d)),
                ],
            ))?);
        }
        Arrangement::new(
            format!("incidence-tangency-{}", params.tag()),
            field,
            curves,
            params.seed,
        )
    }
}

/// Exact expected tangency structure of circle-grid-plus-lines
/// arrangements, derived pairwise: a circle and a line are tangent when the
/// center-line distance is one; two unit circles are tangent when their
/// centers are two apart. Returns (sigma_mult, incidence count, pair count).
pub fn expected_tangency_structure(arr: &Arrangement) -> Result<(u64, u64, u64)> {
    let field = arr.field;
    assert_eq!(field, Field::Rational);
    let mut groups: std::collections::BTreeMap<(PlanePoint, crate::curves::Direction), std::collections::BTreeSet<usize>> =
        Default::default();
    for i in 0..arr.curves.len() {
        for j in i + 1..arr.curves.len() {
            let a = &arr.curves[i];
            let b = &arr.curves[j];
            let tangency = tangency_point_of_pair(a, b)?;
            if let Some(p) = tangency {
                let d = a.tangent_direction_at(&p)?;
                debug_assert_eq!(d, b.tangent_direction_at(&p)?);
                let e = groups.entry((p, d)).or_default();
                e.insert(i);
                e.insert(j);
            }
        }
    }
    let mut sigma = 0u64;
    let mut pairs = 0u64;
    let count = groups.len() as u64;
    for set in groups.values() {
        let m = set.len() as u64;
        sigma += m;
        pairs += m * (m - 1) / 2;
    }
    Ok((sigma, count, pairs))
}

/// The unique tangency point of two curves of the circle/line families, if
/// they are tangent: circle-line at center-distance 1, circle-circle at
/// center-distance 2. Lines are never mutually tangent. Conics other than
/// unit circles are rejected; the derivation would not apply to them.
fn tangency_point_of_pair(a: &PlaneCurve, b: &PlaneCurve) -> Result<Option<PlanePoint>> {
    let field = a.field();
    for c in [a, b] {
        if c.degree() == 2 {
            let p = c.poly();
            let one = Scalar::one(field);
            let half = Scalar::from_ratio(-1, 2);
            let cx = p.coeff([1, 0]).mul(&half);
            let cy = p.coeff([0, 1]).mul(&half);
            let want_c0 = cx.mul(&cx).add(&cy.mul(&cy)).sub(&one);
            if p.coeff([2, 0]) != one
                || p.coeff([0, 2]) != one
                || !p.coeff([1, 1]).is_zero()
                || p.coeff([0, 0]) != want_c0
            {
                return Err(Error::Validation(
                    "pairwise tangency derivation only covers unit circles and lines".into(),
                ));
            }
        }
    }
    let geo = |c: &PlaneCurve| -> Option<(Scalar, Scalar)> {
        // unit circle x^2 + y^2 - 2cx x - 2cy y + c0: center from the linear
        // coefficients
        if c.degree() != 2 {
            return None;
        }
        let half = Scalar::from_ratio(-1, 2);
        Some((c.poly().coeff([1, 0]).mul(&half), c.poly().coeff([0, 1]).mul(&half)))
    };
    match (geo(a), geo(b)) {
        (Some((ax, ay)), Some((bx, by))) => {
            let dx = bx.sub(&ax);
            let dy = by.sub(&ay);
            let d2 = dx.mul(&dx).add(&dy.mul(&dy));
            if d2 != Scalar::from_i64(Field::Rational, 4) {
                return Ok(None);
            }
            let half = Scalar::from_ratio(1, 2);
            Ok(Some(PlanePoint::new(
                ax.add(&dx.mul(&half)),
                ay.add(&dy.mul(&half)),
            )))
        }
        (Some(center), None) | (None, Some(center)) => {
            let line = if geo(a).is_none() { a } else { b };
            let (la, lb, lc) = (
                line.poly().coeff([1, 0]),
                line.poly().coeff([0, 1]),
                line.poly().coeff([0, 0]),
            );
            // distance from center: |la cx + lb cy + lc| / |(la, lb)|
            let v = la.mul(&center.0).add(&lb.mul(&center.1)).add(&lc);
            let norm2 = la.mul(&la).add(&lb.mul(&lb));
            if v.mul(&v) != norm2 {
                return Ok(None);
            }
            // foot of the perpendicular: center - v * (la, lb) / norm2
            let t = v.div(&norm2)?;
            Ok(Some(PlanePoint::new(
                center.0.sub(&t.mul(&la)),
                center.1.sub(&t.mul(&lb)),
            )))
        }
        (None, None) => Ok(None),
    }
}
