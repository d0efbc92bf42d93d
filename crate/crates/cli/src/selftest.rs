//! The built-in verification matrix: every family is generated at small
//! parameters, counted by the main path, and cross-checked against the
//! independent oracles and closed-form expectations. Artifacts are written
//! deterministically so two runs with one seed are byte-identical.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;

use curvetan_core::counting::{
    fit_exponent, CountOptions, CounterRegistry, CSV_HEADER,
};
use curvetan_core::curves::PlanePoint;
use curvetan_core::error::{Error, Result};
use curvetan_core::families::{expected_tangency_structure, FamilyParams, FamilyRegistry};
use curvetan_core::jets::{intersection_multiplicity, Multiplicity};
use curvetan_core::lift::{lift_curve, two_rich_points, LiftKind};
use curvetan_core::oracle::{oracle_multiplicity_quotient, oracle_tangencies};

#[derive(Serialize)]
struct CheckRecord {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct SelftestSummary {
    schema: String,
    seed: u64,
    checks: Vec<CheckRecord>,
    grid_orthogonality_slope: f64,
    all_pass: bool,
}

pub fn run(out_dir: &Path, seed: u64) -> Result<()> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Validation(format!("cannot create {}: {e}", out_dir.display())))?;
    let registry = FamilyRegistry::builtin();
    let counters = CounterRegistry::builtin();
    let opts = CountOptions::default();
    let mut checks: Vec<CheckRecord> = vec![];
    let mut csv_rows: Vec<String> = vec![];

    let record = |name: &str, pass: bool, detail: String, checks: &mut Vec<CheckRecord>| {
        println!("check {name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
        checks.push(CheckRecord { name: name.into(), pass, detail });
    };

    // unit circles: main path vs exhaustive oracle
    for p in [5u64, 7] {
        let arr = registry.generate_by_name("unit-circles", &FamilyParams { p: Some(p), seed, ..Default::default() })?;
        let rep = counters.get("tangency").unwrap().count(&arr, &opts)?;
        let orc = oracle_tangencies(&arr)?;
        let pass = rep.sigma_mult == orc.sigma_mult && rep.incidence_count == orc.incidence_count;
        record(
            &format!("unit-circles-p{p}-oracle"),
            pass,
            format!("sigma {} vs oracle {}", rep.sigma_mult, orc.sigma_mult),
            &mut checks,
        );
        write_report(out_dir, &rep)?;
        csv_rows.push(rep.csv_row());
    }

    // orthogonal grids: exact n^2/4 law and slope 2
    let mut grid_samples = vec![];
    for n in [8u64, 12, 16] {
        let arr = registry.generate_by_name("grid", &FamilyParams { n: Some(n), seed, ..Default::default() })?;
        let rep = counters.get("orthogonality").unwrap().count(&arr, &opts)?;
        let expect = n * n / 4;
        record(
            &format!("grid-n{n}-count"),
            rep.sigma_mult == expect,
            format!("sigma {} expected {expect}", rep.sigma_mult),
            &mut checks,
        );
        grid_samples.push((n, rep.sigma_mult));
        write_report(out_dir, &rep)?;
        csv_rows.push(rep.csv_row());
    }
    let grid_fit = fit_exponent(&grid_samples)?;
    record(
        "grid-orthogonality-slope",
        (grid_fit.slope - 2.0).abs() <= 0.01,
        format!("slope {:.6}", grid_fit.slope),
        &mut checks,
    );

    // characteristic-2 parabolas: all pairs tangent, C(n,2) exactly
    for n in [4u64, 6] {
        let arr = registry.generate_by_name(
            "char2-parabolas",
            &FamilyParams { q: Some(16), n: Some(n), seed, ..Default::default() },
        )?;
        let rep = counters.get("tangency").unwrap().count(&arr, &opts)?;
        let orc = oracle_tangencies(&arr)?;
        let expect = n * (n - 1) / 2;
        let pass = rep.pair_count == expect && orc.pair_count == expect;
        record(
            &format!("char2-n{n}-pairs"),
            pass,
            format!("pairs {} oracle {} expected {expect}", rep.pair_count, orc.pair_count),
            &mut checks,
        );
        write_report(out_dir, &rep)?;
        csv_rows.push(rep.csv_row());
    }

    // coaxial pencils: orthogonality downstairs equals cross incidence
    // of the slope and perpendicular-slope lifts upstairs
    {
        let arr = registry.generate_by_name(
            "coaxial-pencils",
            &FamilyParams { m: Some(2), p: Some(11), seed, ..Default::default() },
        )?;
        let rep = counters.get("orthogonality").unwrap().count(&arr, &opts)?;
        let pass = orthogonality_matches_lifts(&arr, &rep)?;
        record(
            "coaxial-p11-lift-equivalence",
            pass,
            format!("{} orthogonal incidences", rep.sigma_mult),
            &mut checks,
        );
        write_report(out_dir, &rep)?;
        csv_rows.push(rep.csv_row());
    }

    // circle-and-line construction: realized tangencies match the pairwise
    // derivation exactly
    {
        let arr = registry.generate_by_name(
            "incidence-tangency",
            &FamilyParams { n: Some(8), seed, ..Default::default() },
        )?;
        let rep = counters.get("tangency").unwrap().count(&arr, &opts)?;
        let (sigma, count, pairs) = expected_tangency_structure(&arr)?;
        let pass = rep.sigma_mult == sigma && rep.incidence_count == count && rep.pair_count == pairs;
        record(
            "incidence-tangency-n8",
            pass,
            format!("sigma {} expected {sigma}", rep.sigma_mult),
            &mut checks,
        );
        write_report(out_dir, &rep)?;
        csv_rows.push(rep.csv_row());
    }

    // intersection multiplicity: branch valuation vs truncated quotient
    {
        use curvetan_core::algebra::{parse_bivar, Field};
        use curvetan_core::curves::PlaneCurve;
        let fixtures: [(&str, &str, u32); 3] = [
            ("y", "y - x^2", 2),
            ("y - x", "y + x", 1),
            ("y - x^2", "y - x^2 - x^3", 3),
        ];
        let mut pass = true;
        let mut detail = String::new();
        for (a, b, expect) in fixtures {
            let ca = PlaneCurve::new(parse_bivar(Field::Rational, a).unwrap())?;
            let cb = PlaneCurve::new(parse_bivar(Field::Rational, b).unwrap())?;
            let origin = PlanePoint::new(
                curvetan_core::algebra::Scalar::from_i64(Field::Rational, 0),
                curvetan_core::algebra::Scalar::from_i64(Field::Rational, 0),
            );
            let v = match intersection_multiplicity(&ca, &cb, &origin)? {
                Multiplicity::Finite(v) => v,
                Multiplicity::Infinite => u32::MAX,
            };
            let q = oracle_multiplicity_quotient(ca.poly(), cb.poly(), expect + 3)?;
            pass &= v == expect && q == expect;
            detail.push_str(&format!("[{a} vs {b}: {v}/{q}] "));
        }
        record("multiplicity-two-routes", pass, detail.trim().into(), &mut checks);
    }

    // branch series of the running example, exact
    {
        use curvetan_core::algebra::{parse_bivar, Field, Scalar};
        use curvetan_core::curves::PlaneCurve;
        let c = PlaneCurve::new(parse_bivar(Field::Rational, "x - 2*y - y^2").unwrap())?;
        let origin = PlanePoint::new(
            Scalar::from_i64(Field::Rational, 0),
            Scalar::from_i64(Field::Rational, 0),
        );
        let b = curvetan_core::jets::hensel_phi(&c, &origin, 4)?;
        let got: Vec<String> = (1..=4).map(|i| b.coeff(i).to_string()).collect();
        let expect = ["1/2", "-1/8", "1/16", "-5/128"];
        let pass = got == expect;
        record("branch-series-example", pass, format!("({})", got.join(", ")), &mut checks);
    }

    // write artifacts
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &csv_rows {
        csv.push_str(row);
        csv.push('\n');
    }
    std::fs::write(out_dir.join("summary.csv"), csv)
        .map_err(|e| Error::Validation(format!("write summary.csv: {e}")))?;

    let all_pass = checks.iter().all(|c| c.pass);
    let summary = SelftestSummary {
        schema: "curvetan/selftest/1".into(),
        seed,
        checks,
        grid_orthogonality_slope: grid_fit.slope,
        all_pass,
    };
    let json = serde_json::to_string_pretty(&summary).expect("serializable") + "\n";
    std::fs::write(out_dir.join("selftest.json"), json)
        .map_err(|e| Error::Validation(format!("write selftest.json: {e}")))?;

    if all_pass {
        println!("selftest: all checks passed");
        Ok(())
    } else {
        Err(Error::SelftestFailed(
            summary
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.name.clone())
                .collect::<Vec<_>>()
                .join(", "),
        ))
    }
}

fn write_report(out_dir: &Path, rep: &curvetan_core::counting::CountReport) -> Result<()> {
    let name = format!("report-{}-{}.json", rep.arrangement, rep.kind);
    let json = serde_json::to_string_pretty(rep).expect("serializable") + "\n";
    std::fs::write(out_dir.join(name), json)
        .map_err(|e| Error::Validation(format!("write report: {e}")))?;
    Ok(())
}

/// The plane points carrying an orthogonal incidence between two distinct
/// curves, both good for the respective lifts, must equal the projections
/// of the cross two-rich points of the slope lifts and the
/// perpendicular-slope lifts.
fn orthogonality_matches_lifts(
    arr: &curvetan_core::counting::Arrangement,
    rep: &curvetan_core::counting::CountReport,
) -> Result<bool> {
    let n = arr.n();
    let mut lifts = vec![];
    for c in &arr.curves {
        lifts.push(lift_curve(c, LiftKind::Tangency { s: 1 })?);
    }
    for c in &arr.curves {
        lifts.push(lift_curve(c, LiftKind::Orthogonal)?);
    }
    // side B: cross two-rich points (one slope lift, one perpendicular lift,
    // distinct sources), projected to the plane
    let rich = two_rich_points(&lifts)?;
    let mut side_b: BTreeSet<PlanePoint> = BTreeSet::new();
    for (q, members) in rich {
        let has_cross = members.iter().any(|&i| i < n)
            && members.iter().any(|&j| j >= n && members.iter().any(|&i| i < n && i != j - n));
        if has_cross {
            side_b.insert(q.plane());
        }
    }
    // side A: orthogonality incidences between distinct curves where the
    // slope lift of one side and the perpendicular lift of the other are
    // both good at the point
    let mut side_a: BTreeSet<PlanePoint> = BTreeSet::new();
    for inc in &rep.incidences {
        let point = plane_point_from_record(arr, inc)?;
        let m = inc.mult as usize;
        let tangent_side = &inc.curves[..m];
        let perp_side = &inc.curves[m..];
        let mut pairs: Vec<(usize, usize)> = vec![];
        for &i in tangent_side {
            for &j in perp_side {
                if i != j {
                    pairs.push((i, j));
                    pairs.push((j, i));
                }
            }
        }
        if inc.isotropic {
            for &i in tangent_side {
                for &j in tangent_side {
                    if i != j {
                        pairs.push((i, j));
                    }
                }
            }
        }
        for (i, j) in pairs {
            if lifts[i].is_good(&point)? && lifts[n + j].is_good(&point)? {
                side_a.insert(point.clone());
                break;
            }
        }
    }
    Ok(side_a == side_b)
}

fn plane_point_from_record(
    arr: &curvetan_core::counting::Arrangement,
    inc: &curvetan_core::counting::IncidenceRecord,
) -> Result<PlanePoint> {
    use curvetan_core::algebra::Scalar;
    let parse = |t: &str| -> Result<Scalar> {
        match arr.field {
            curvetan_core::algebra::Field::Prime(_) => Ok(Scalar::from_i64(
                arr.field,
                t.parse::<i64>().map_err(|e| Error::Parse(e.to_string()))?,
            )),
            curvetan_core::algebra::Field::Char2Ext(_) => Ok(Scalar::from_bits(
                arr.field,
                t.parse::<u8>().map_err(|e| Error::Parse(e.to_string()))?,
            )?),
            curvetan_core::algebra::Field::Rational => {
                if let Some((a, b)) = t.split_once('/') {
                    Ok(Scalar::from_ratio(
                        a.parse().map_err(|_| Error::Parse(t.into()))?,
                        b.parse().map_err(|_| Error::Parse(t.into()))?,
                    ))
                } else {
                    Ok(Scalar::from_i64(
                        arr.field,
                        t.parse().map_err(|_| Error::Parse(t.into()))?,
                    ))
                }
            }
        }
    };
    Ok(PlanePoint::new(parse(&inc.point[0])?, parse(&inc.point[1])?))
}
