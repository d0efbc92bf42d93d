//! Minimal-degree vanishing polynomials over sampled space points: the
//! interpolation step of the tangency bound, witnessed at desk scale.
//! Monomial columns enter an exact incremental elimination in graded order,
//! so the first linear dependency is exactly the minimal vanishing degree.


use crate::algebra::{Field, Scalar, TrivarPoly};
use crate::error::{Error, Result};
use crate::lift::{LiftedCurve, SpacePoint};
use crate::linalg::{FpColumnScan, RatColumnScan};

/// Monomial-count budget for fits; dmax must keep C(dmax+3, 3) within it.
const MONOMIAL_BUDGET: usize = 60_000;

/// A minimal-degree vanishing polynomial over a point set.
#[derive(Debug, Clone)]
pub struct VanishingFit {
    /// Minimal total degree admitting a nonzero vanishing polynomial.
    pub degree: u32,
    /// Canonical representative: grlex-leading coefficient 1.
    pub poly: TrivarPoly,
    /// Dimension of the vanishing space at `degree` (number of dependent
    /// columns among monomials of degree <= degree).
    pub nullity: u32,
    /// True when every column of degree < `degree` was independent, i.e.
    /// degree - 1 admits only the zero solution.
    pub minimal: bool,
    pub sample_count: usize,
}

/// Monomials of `k[x,y,z]` in graded order; within a degree, lexicographic
/// with x > y > z descending.
pub fn monomials_upto(dmax: u32) -> Vec<[u32; 3]> {
    let mut out = vec![];
    for t in 0..=dmax {
        for i in (0..=t).rev() {
            for j in (0..=(t - i)).rev() {
                out.push([i, j, t - i - j]);
            }
        }
    }
    out
}

/// Deterministic sample of distinct good fiber points per lift: the first
/// `m_per_curve` in source-plane lexicographic order.
pub fn sample_lift_points(
    lifts: &[LiftedCurve],
    m_per_curve: usize,
) -> Result<Vec<SpacePoint>> {
    let mut out = vec![];
    for lift in lifts {
        let good = lift.good_fiber_points()?;
        if good.len() < m_per_curve {
            return Err(Error::InsufficientGoodPoints {
                wanted: m_per_curve,
                found: good.len(),
            });
        }
        out.extend(good.into_iter().take(m_per_curve));
    }
    Ok(out)
}

/// Default sample size per curve for a target fit degree: three times the
/// product with the branch degree bound, enough for vanishing on samples to
/// propagate along each curve.
pub fn default_sample_size(dmax: u32, branch_degree_bound: u32) -> usize {
    (3 * dmax * branch_degree_bound.max(1)) as usize
}

/// Smallest degree d <= dmax whose point-evaluation matrix has a nontrivial
/// kernel, with one canonical kernel vector.
pub fn min_vanishing_poly(points: &[SpacePoint], dmax: u32) -> Result<VanishingFit> {
    if points.is_empty() {
        return Err(Error::Validation("no sample points".into()));
    }
    let field = points[0].x.field();
    for p in points {
        if p.x.field() != field {
            return Err(Error::FieldMismatch(field.to_string(), p.x.field().to_string()));
        }
    }
    let monomials = monomials_upto(dmax);
    if monomials.len() > MONOMIAL_BUDGET {
        return Err(Error::Validation(format!(
            "degree cap {dmax} needs {} monomials, budget is {MONOMIAL_BUDGET}",
            monomials.len()
        )));
    }
    match field {
        Field::Prime(p) => fit_fp(points, dmax, &monomials, p, field),
        Field::Rational => fit_rational(points, dmax, &monomials),
        Field::Char2Ext(_) => Err(Error::Validation(
            "vanishing fits support prime fields and the rationals".into(),
        )),
    }
}

fn fit_fp(
    points: &[SpacePoint],
    dmax: u32,
    monomials: &[[u32; 3]],
    p: u64,
    field: Field,
) -> Result<VanishingFit> {
    // power tables per point
    let n = points.len();
    let dim = dmax as usize + 1;
    let mut pows = vec![1u64; n * 3 * dim];
    for (pi, pt) in points.iter().enumerate() {
        for (vi, coord) in [&pt.x, &pt.y, &pt.z].into_iter().enumerate() {
            let base = coord.residue().expect("prime-field point");
            let row = &mut pows[(pi * 3 + vi) * dim..(pi * 3 + vi + 1) * dim];
            for k in 1..dim {
                row[k] = crate::algebra::field::mul_mod(row[k - 1], base, p);
            }
        }
    }
    let col_for = |mono: &[u32; 3]| -> Vec<u64> {
        (0..n)
            .map(|pi| {
                let x = pows[(pi * 3) * dim + mono[0] as usize];
                let y = pows[(pi * 3 + 1) * dim + mono[1] as usize];
                let z = pows[(pi * 3 + 2) * dim + mono[2] as usize];
                crate::algebra::field::mul_mod(crate::algebra::field::mul_mod(x, y, p), z, p)
            })
            .collect()
    };
    let mut scan = FpColumnScan::new(p, n);
    let mut first_dep: Option<(usize, Vec<u64>)> = None;
    let mut nullity = 0u32;
    let mut inserted_monos: Vec<[u32; 3]> = vec![];
    for (ci, mono) in monomials.iter().enumerate() {
        let deg = mono.iter().sum::<u32>();
        if let Some((fd, _)) = &first_dep {
            let first_deg: u32 = monomials[*fd].iter().sum();
            if deg > first_deg {
                break;
            }
        }
        inserted_monos.push(*mono);
        if let Some(comb) = scan.insert(col_for(mono)) {
            nullity += 1;
            if first_dep.is_none() {
                first_dep = Some((ci, comb));
            }
        }
    }
    let Some((ci, comb)) = first_dep else {
        return Err(Error::NoVanishingPoly(dmax));
    };
    let degree: u32 = monomials[ci].iter().sum();
    let poly = TrivarPoly::from_terms(
        field,
        comb.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| {
            (inserted_monos[k], Scalar::from_i64(field, c as i64))
        }),
    );
    finish_fit(points, poly, degree, nullity)
}

fn fit_rational(
    points: &[SpacePoint],
    dmax: u32,
    monomials: &[[u32; 3]],
) -> Result<VanishingFit> {
    let field = Field::Rational;
    let n = points.len();
    let col_for = |mono: &[u32; 3]| -> Vec<Scalar> {
        points
            .iter()
            .map(|pt| {
                pt.x.pow(mono[0]).mul(&pt.y.pow(mono[1])).mul(&pt.z.pow(mono[2]))
            })
            .collect()
    };
    let mut scan = RatColumnScan::new(n);
    let mut first_dep: Option<(usize, Vec<Scalar>)> = None;
    let mut nullity = 0u32;
    let mut inserted_monos: Vec<[u32; 3]> = vec![];
    for (ci, mono) in monomials.iter().enumerate() {
        let deg = mono.iter().sum::<u32>();
        if let Some((fd, _)) = &first_dep {
            let first_deg: u32 = monomials[*fd].iter().sum();
            if deg > first_deg {
                break;
            }
        }
        inserted_monos.push(*mono);
        if let Some(comb) = scan.insert(col_for(mono)) {
            nullity += 1;
            if first_dep.is_none() {
                first_dep = Some((ci, comb));
            }
        }
    }
    let Some((ci, comb)) = first_dep else {
        return Err(Error::NoVanishingPoly(dmax));
    };
    let degree: u32 = monomials[ci].iter().sum();
    let poly = TrivarPoly::from_terms(
        field,
        comb.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (inserted_monos[k], c)),
    );
    finish_fit(points, poly, degree, nullity)
}

fn finish_fit(
    points: &[SpacePoint],
    poly: TrivarPoly,
    degree: u32,
    nullity: u32,
) -> Result<VanishingFit> {
    let poly = poly.monic();
    debug_assert!(points
        .iter()
        .all(|q| poly.eval3(&q.x, &q.y, &q.z).unwrap().is_zero()));
    Ok(VanishingFit {
        degree,
        poly,
        nullity,
        minimal: true,
        sample_count: points.len(),
    })
}

/// Where the z-partial of a fit vanishes: over the supplied distinguished
/// points (tangency fibers) and over every good fiber point of each lift.
/// Counts are exact (zeros, total).
#[derive(Debug, Clone)]
pub struct DzReport {
    pub dz_is_identically_zero: bool,
    pub distinguished: (u64, u64),
    pub per_lift: Vec<(u64, u64)>,
}

pub fn dz_vanishing_report(
    r: &TrivarPoly,
    lifts: &[LiftedCurve],
    distinguished: &[SpacePoint],
) -> Result<DzReport> {
    let dz = r.partial(2);
    let mut dist = (0u64, 0u64);
    for q in distinguished {
        dist.1 += 1;
        if dz.is_zero() || dz.eval3(&q.x, &q.y, &q.z)?.is_zero() {
            dist.0 += 1;
        }
    }
    let mut per_lift = vec![];
    for lift in lifts {
        let mut zeros = 0u64;
        let mut total = 0u64;
        for q in lift.good_fiber_points()? {
            total += 1;
            if dz.is_zero() || dz.eval3(&q.x, &q.y, &q.z)?.is_zero() {
                zeros += 1;
            }
        }
        per_lift.push((zeros, total));
    }
    Ok(DzReport {
        dz_is_identically_zero: dz.is_zero(),
        distinguished: dist,
        per_lift,
    })
}

/// Serializable summary for the command line.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FitSummary {
    pub degree: u32,
    pub nullity: u32,
    pub minimal: bool,
    pub sample_count: usize,
    pub poly: String,
    pub held_out_zero: u64,
    pub held_out_total: u64,
}

/// Count how many of the given points the polynomial kills, exactly.
pub fn vanishing_count(r: &TrivarPoly, points: &[SpacePoint]) -> Result<(u64, u64)> {
    let mut zeros = 0u64;
    for q in points {
        if r.eval3(&q.x, &q.y, &q.z)?.is_zero() {
            zeros += 1;
        }
    }
    Ok((zeros, points.len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_bivar;
    use crate::curves::PlaneCurve;
    use crate::lift::{lift_curve, LiftKind};

    fn qi(n: i64) -> Scalar {
        Scalar::from_i64(Field::Rational, n)
    }

    #[test]
    fn monomial_order_is_graded() {
        let monos = monomials_upto(2);
        assert_eq!(monos[0], [0, 0, 0]);
        assert_eq!(monos[1], [1, 0, 0]);
        assert_eq!(monos[2], [0, 1, 0]);
        assert_eq!(monos[3], [0, 0, 1]);
        assert_eq!(monos[4], [2, 0, 0]);
        assert_eq!(monos.len(), 10);
    }

    #[test]
    fn collinear_points_need_degree_one() {
        let pts: Vec<SpacePoint> = (0..3)
            .map(|t| SpacePoint::new(qi(t), qi(2 * t), qi(3 * t)))
            .collect();
        let fit = min_vanishing_poly(&pts, 3).unwrap();
        assert_eq!(fit.degree, 1);
        assert!(fit.minimal);
        for q in &pts {
            assert!(fit.poly.eval3(&q.x, &q.y, &q.z).unwrap().is_zero());
        }
    }

    #[test]
    fn pigeonhole_guarantees_a_fit() {
        // 9 generic-ish points always admit degree 2: C(5,3) = 10 > 9
        let f13 = Field::prime(13).unwrap();
        let mut rng = crate::rng::SplitMix64::new(3);
        let pts: Vec<SpacePoint> = (0..9)
            .map(|_| {
                SpacePoint::new(
                    Scalar::from_i64(f13, rng.below(13) as i64),
                    Scalar::from_i64(f13, rng.below(13) as i64),
                    Scalar::from_i64(f13, rng.below(13) as i64),
                )
            })
            .collect();
        let fit = min_vanishing_poly(&pts, 4).unwrap();
        assert!(fit.degree <= 2);
    }

    #[test]
    fn sampling_circle_lift_over_f13() {
        let f13 = Field::prime(13).unwrap();
        let circle = PlaneCurve::from_family(parse_bivar(f13, "x^2 + y^2 - 1").unwrap()).unwrap();
        let lift = lift_curve(&circle, LiftKind::Tangency { s: 1 }).unwrap();
        let pts = sample_lift_points(std::slice::from_ref(&lift), 5).unwrap();
        assert_eq!(pts.len(), 5);
        for q in &pts {
            assert!(lift.contains_space(q).unwrap());
        }
        assert!(sample_lift_points(std::slice::from_ref(&lift), 0).unwrap().is_empty());
        assert!(matches!(
            sample_lift_points(std::slice::from_ref(&lift), 10_000),
            Err(Error::InsufficientGoodPoints { .. })
        ));
    }

    #[test]
    fn dz_report_extremes() {
        // R independent of z vanishes everywhere in the z-direction
        let f13 = Field::prime(13).unwrap();
        let circle = PlaneCurve::from_family(parse_bivar(f13, "x^2 + y^2 - 1").unwrap()).unwrap();
        let lift = lift_curve(&circle, LiftKind::Tangency { s: 1 }).unwrap();
        let r = circle.poly().to_trivar();
        let rep = dz_vanishing_report(&r, std::slice::from_ref(&lift), &[]).unwrap();
        assert!(rep.dz_is_identically_zero);
        assert!(rep.per_lift.iter().all(|&(z, t)| z == t));

        // R = z vanishes only where z = 0
        let z = TrivarPoly::var(f13, 2);
        let rep = dz_vanishing_report(&z, &[], &[
            SpacePoint::new(Scalar::from_i64(f13, 1), Scalar::from_i64(f13, 2), Scalar::from_i64(f13, 3)),
        ])
        .unwrap();
        assert_eq!(rep.distinguished, (0, 1));
    }

    #[test]
    fn rational_fit_small() {
        // four points on the plane z = x + y
        let pts: Vec<SpacePoint> = [(0, 0), (1, 2), (2, 1), (3, 3)]
            .iter()
            .map(|&(x, y)| SpacePoint::new(qi(x), qi(y), qi(x + y)))
            .collect();
        let fit = min_vanishing_poly(&pts, 2).unwrap();
        assert_eq!(fit.degree, 1);
        // x + y - z up to scaling
        let expect = crate::algebra::parse_trivar(Field::Rational, "x + y - z").unwrap();
        assert_eq!(fit.poly.canonical(), expect.canonical());
    }
}
