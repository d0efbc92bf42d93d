//! Enumeration of directed points of tangency, orthogonality and
//! higher-order tangency, with multiplicities. The three counting kinds are
//! interchangeable strategies behind one trait, registered by name and
//! selected at runtime.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Scalar};
use crate::curves::{field_elements, Direction, PlaneCurve, PlanePoint, SCAN_BOUND};
use crate::error::{Error, Result};

/// A validated list of distinct curves over one field.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub id: String,
    pub field: Field,
    pub curves: Vec<PlaneCurve>,
    pub seed: u64,
}

impl Arrangement {
    pub fn new(id: impl Into<String>, field: Field, curves: Vec<PlaneCurve>, seed: u64) -> Result<Self> {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for (i, c) in curves.iter().enumerate() {
            if c.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
            }
            let key = c.poly().canonical().to_string();
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicateCurves(first, i));
            }
            seen.insert(key, i);
        }
        Ok(Arrangement { id: id.into(), field, curves, seed })
    }

    pub fn n(&self) -> usize {
        self.curves.len()
    }

    pub fn d_max(&self) -> u32 {
        self.curves.iter().filter_map(|c| c.poly().degree()).max().unwrap_or(0)
    }
}

/// Options shared by every counting strategy.
#[derive(Debug, Clone)]
pub struct CountOptions {
    /// Tangency order for the "s-tangency" strategy.
    pub s: u32,
    /// Worker cap for finite-field plane scans; results are independent of
    /// the value.
    pub threads: usize,
    /// Incidence lists longer than this are elided from reports.
    pub list_cap: usize,
    /// Regime guard divisor: the tangency monitor applies when
    /// n <= char^2 / divisor (or in characteristic zero).
    pub regime_divisor: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { s: 2, threads: 1, list_cap: 100_000, regime_divisor: 16 }
    }
}

/// One directed incidence: a point, a canonical projective direction, the
/// participating curves and the multiplicity.
#[derive(Debug, Clone)]
pub struct DirectedIncidence {
    pub point: PlanePoint,
    pub direction: Direction,
    pub curves: Vec<usize>,
    pub mult: u32,
    /// For orthogonality: how many participants are tangent to the
    /// perpendicular direction.
    pub mult_perp: Option<u32>,
    pub isotropic: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExcludedStats {
    /// (point, curve) pairs where the curve is singular at the point.
    pub singular_hits: u64,
    /// Smooth participants dropped for vertical tangents (s-jet counting
    /// only; plain tangency counts vertical directions).
    pub vertical_excluded: u64,
    /// Orthogonality incidences on self-perpendicular directions.
    pub isotropic_flagged: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MonitorStatus {
    pub in_regime: bool,
    pub bound: u64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct IncidenceRecord {
    pub point: [String; 2],
    pub direction: [String; 2],
    pub curves: Vec<usize>,
    pub mult: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult_perp: Option<u32>,
    pub isotropic: bool,
}

/// Serializable summary of one counting run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CountReport {
    pub schema: String,
    pub arrangement: String,
    pub field: String,
    pub d_max: u32,
    pub n_curves: usize,
    pub kind: String,
    /// Sum of multiplicities over incidences (tangency kinds) or the number
    /// of directed points (orthogonality).
    pub sigma_mult: u64,
    /// Sum over incidences of mult-choose-2 (mutually tangent pairs) for
    /// tangency kinds; cross pairs for orthogonality.
    pub pair_count: u64,
    pub incidence_count: u64,
    pub incidences: Vec<IncidenceRecord>,
    pub elided: bool,
    pub excluded: ExcludedStats,
    pub unresolved_pairs: u64,
    pub partial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monitor: Option<MonitorStatus>,
}

pub const REPORT_SCHEMA: &str = "curvetan/count-report/1";
pub const CSV_HEADER: &str =
    "arrangement_id,field,D,n,kind,sigma_mult,incidences,bad_points,unresolved";

impl CountReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.arrangement,
            self.field,
            self.d_max,
            self.n_curves,
            self.kind,
            self.sigma_mult,
            self.incidence_count,
            self.excluded.singular_hits + self.excluded.vertical_excluded,
            self.unresolved_pairs
        )
    }
}

/// A counting strategy: every kind maps an arrangement to a report.
pub trait IncidenceCounter: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn count(&self, arr: &Arrangement, opts: &CountOptions) -> Result<CountReport>;
}

/// Name-keyed registry of the counting strategies.
pub struct CounterRegistry {
    entries: Vec<Box<dyn IncidenceCounter>>,
}

impl CounterRegistry {
    pub fn builtin() -> Self {
        CounterRegistry {
            entries: vec![
                Box::new(TangencyCounter),
                Box::new(OrthogonalityCounter),
                Box::new(HigherTangencyCounter),
            ],
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn IncidenceCounter> {
        self.entries
            .iter()
            .find(|c| c.name() == name)
            .map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|c| c.name()).collect()
    }
}

/// Directed points of tangency: points where at least two curves are smooth
/// with one shared tangent direction; multiplicity counts those curves.
pub struct TangencyCounter;

/// Directed points of orthogonality: a direction pair {l, l-perp} at a
/// point, with at least one smooth curve tangent to each side.
pub struct OrthogonalityCounter;

/// Directed points of s-th order tangency: curves grouped by branch-series
/// agreement to order s (pairwise intersection multiplicity >= s).
pub struct HigherTangencyCounter;

impl IncidenceCounter for TangencyCounter {
    fn name(&self) -> &'static str {
        "tangency"
    }

    fn describe(&self) -> &'static str {
        "points where >= 2 curves share a tangent direction"
    }

    fn count(&self, arr: &Arrangement, opts: &CountOptions) -> Result<CountReport> {
        let mut excluded = ExcludedStats::default();
        let (candidates, unresolved) = candidate_points(arr, opts)?;
        let mut incidences = vec![];
        for (point, incident) in candidates {
            let mut by_dir: BTreeMap<Direction, Vec<usize>> = BTreeMap::new();
            for idx in incident {
                if !arr.curves[idx].is_smooth_at(&point)? {
                    excluded.singular_hits += 1;
                    continue;
                }
                let dir = arr.curves[idx].tangent_direction_at(&point)?;
                by_dir.entry(dir).or_default().push(idx);
            }
            for (direction, curves) in by_dir {
                if curves.len() >= 2 {
                    incidences.push(DirectedIncidence {
                        point: point.clone(),
                        isotropic: direction.is_isotropic(),
                        direction,
                        mult: curves.len() as u32,
                        curves,
                        mult_perp: None,
                    });
                }
            }
        }
        let report = assemble(arr, self.name(), incidences, excluded, unresolved, opts, true)?;
        Ok(report)
    }
}

impl IncidenceCounter for OrthogonalityCounter {
    fn name(&self) -> &'static str {
        "orthogonality"
    }

    fn describe(&self) -> &'static str {
        "direction pairs {l, l-perp} with a smooth curve tangent to each"
    }

    fn count(&self, arr: &Arrangement, opts: &CountOptions) -> Result<CountReport> {
        let mut excluded = ExcludedStats::default();
        let (candidates, unresolved) = candidate_points(arr, opts)?;
        let mut incidences = vec![];
        for (point, incident) in candidates {
            let mut by_dir: BTreeMap<Direction, Vec<usize>> = BTreeMap::new();
            for idx in incident {
                if !arr.curves[idx].is_smooth_at(&point)? {
                    excluded.singular_hits += 1;
                    continue;
                }
                let dir = arr.curves[idx].tangent_direction_at(&point)?;
                by_dir.entry(dir).or_default().push(idx);
            }
            for (direction, curves) in &by_dir {
                if direction.is_isotropic() {
                    // l = l-perp: the definition needs two distinct curves
                    if curves.len() >= 2 {
                        excluded.isotropic_flagged += 1;
                        incidences.push(DirectedIncidence {
                            point: point.clone(),
                            direction: direction.clone(),
                            curves: curves.clone(),
                            mult: curves.len() as u32,
                            mult_perp: Some(curves.len() as u32),
                            isotropic: true,
                        });
                    }
                    continue;
                }
                let perp = direction.perp();
                // the pair {l, l-perp} is one directed point; keep the
                // lexicographically smaller representative
                if *direction > perp {
                    continue;
                }
                let Some(perp_curves) = by_dir.get(&perp) else {
                    continue;
                };
                // participants tangent to the canonical direction first,
                // then those tangent to its perpendicular
                let all: Vec<usize> = curves.iter().chain(perp_curves.iter()).copied().collect();
                incidences.push(DirectedIncidence {
                    point: point.clone(),
                    direction: direction.clone(),
                    curves: all,
                    mult: curves.len() as u32,
                    mult_perp: Some(perp_curves.len() as u32),
                    isotropic: false,
                });
            }
        }
        assemble(arr, self.name(), incidences, excluded, unresolved, opts, false)
    }
}

impl IncidenceCounter for HigherTangencyCounter {
    fn name(&self) -> &'static str {
        "s-tangency"
    }

    fn describe(&self) -> &'static str {
        "curves whose branches agree to order s at a shared point"
    }

    fn count(&self, arr: &Arrangement, opts: &CountOptions) -> Result<CountReport> {
        let s = opts.s;
        if s < 1 {
            return Err(Error::Validation("tangency order starts at 1".into()));
        }
        let ch = arr.field.characteristic();
        if ch != 0 && s as u64 >= ch {
            return Err(Error::CharacteristicObstruction(format!(
                "jet order {s} >= char {ch}"
            )));
        }
        let mut excluded = ExcludedStats::default();
        let (candidates, unresolved) = candidate_points(arr, opts)?;
        let mut incidences = vec![];
        for (point, incident) in candidates {
            let mut by_class: BTreeMap<Vec<Scalar>, Vec<usize>> = BTreeMap::new();
            for idx in incident {
                let curve = &arr.curves[idx];
                if !curve.is_smooth_at(&point)? {
                    excluded.singular_hits += 1;
                    continue;
                }
                if curve.gradient_at(&point)?.1.is_zero() {
                    excluded.vertical_excluded += 1;
                    continue;
                }
                let key = crate::jets::jet_class_key(curve, &point, s)?;
                by_class.entry(key).or_default().push(idx);
            }
            for (key, curves) in by_class {
                if curves.len() < 2 {
                    continue;
                }
                // shared slope a_1 gives the jet's direction
                let slope = if s >= 2 {
                    key[0].clone()
                } else {
                    let c = &arr.curves[curves[0]];
                    let b = crate::jets::hensel_phi(c, &point, 1)?;
                    b.coeff(1).clone()
                };
                let direction = Direction::new(Scalar::one(arr.field), slope)?;
                incidences.push(DirectedIncidence {
                    point: point.clone(),
                    isotropic: direction.is_isotropic(),
                    direction,
                    mult: curves.len() as u32,
                    curves,
                    mult_perp: None,
                });
            }
        }
        assemble(
            arr,
            &format!("s-tangency-{s}"),
            incidences,
            excluded,
            unresolved,
            opts,
            false,
        )
    }
}

/// Candidate points with their incident-curve index lists. Over a finite
/// field this scans the whole plane (sharded over threads); over the
/// rationals it solves every pair, which restricts degrees to <= 2.
#[allow(clippy::type_complexity)]
fn candidate_points(
    arr: &Arrangement,
    opts: &CountOptions,
) -> Result<(Vec<(PlanePoint, Vec<usize>)>, u64)> {
    match arr.field {
        Field::Rational => candidate_points_rational(arr),
        field => {
            let q = field.order().unwrap();
            if q > SCAN_BOUND {
                return Err(Error::ScanBound(format!("field order {q} exceeds {SCAN_BOUND}")));
            }
            Ok((scan_plane(arr, field, opts.threads.max(1))?, 0))
        }
    }
}

fn scan_plane(
    arr: &Arrangement,
    field: Field,
    threads: usize,
) -> Result<Vec<(PlanePoint, Vec<usize>)>> {
    let elems = field_elements(field)?;
    let scan_column = |x: &Scalar| -> Result<Vec<(PlanePoint, Vec<usize>)>> {
        let mut out = vec![];
        for y in &elems {
            let mut incident = vec![];
            for (i, c) in arr.curves.iter().enumerate() {
                if c.poly().eval2(x, y)?.is_zero() {
                    incident.push(i);
                }
            }
            if incident.len() >= 2 {
                out.push((PlanePoint::new(x.clone(), y.clone()), incident));
            }
        }
        Ok(out)
    };
    if threads <= 1 || elems.len() < 2 * threads {
        let mut out = vec![];
        for x in &elems {
            out.extend(scan_column(x)?);
        }
        return Ok(out);
    }
    // shard columns; concatenation in column order keeps output identical
    let chunk = elems.len().div_ceil(threads);
    let results: Vec<Result<Vec<(PlanePoint, Vec<usize>)>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = elems
            .chunks(chunk)
            .map(|cols| {
                scope.spawn(move || {
                    let mut out = vec![];
                    for x in cols {
                        out.extend(scan_column(x)?);
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker")).collect()
    });
    let mut out = vec![];
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

#[allow(clippy::type_complexity)]
fn candidate_points_rational(
    arr: &Arrangement,
) -> Result<(Vec<(PlanePoint, Vec<usize>)>, u64)> {
    let mut points: BTreeSet<PlanePoint> = BTreeSet::new();
    let mut unresolved = 0u64;
    for i in 0..arr.curves.len() {
        for j in i + 1..arr.curves.len() {
            let common =
                crate::intersect::common_points(arr.curves[i].poly(), arr.curves[j].poly())?;
            if !common.complete {
                unresolved += 1;
            }
            points.extend(common.points);
        }
    }
    let mut out = vec![];
    for p in points {
        let mut incident = vec![];
        for (i, c) in arr.curves.iter().enumerate() {
            if c.contains(&p)? {
                incident.push(i);
            }
        }
        if incident.len() >= 2 {
            out.push((p, incident));
        }
    }
    Ok((out, unresolved))
}

fn assemble(
    arr: &Arrangement,
    kind: &str,
    mut incidences: Vec<DirectedIncidence>,
    excluded: ExcludedStats,
    unresolved_pairs: u64,
    opts: &CountOptions,
    enforce_monitor: bool,
) -> Result<CountReport> {
    incidences.sort_by(|a, b| (&a.point, &a.direction).cmp(&(&b.point, &b.direction)));
    let sigma_mult: u64 = if kind == "orthogonality" {
        incidences.len() as u64
    } else {
        incidences.iter().map(|i| i.mult as u64).sum()
    };
    let pair_count: u64 = if kind == "orthogonality" {
        incidences
            .iter()
            .map(|i| i.mult as u64 * i.mult_perp.unwrap_or(0) as u64)
            .sum()
    } else {
        incidences.iter().map(|i| binom2(i.mult as u64)).sum()
    };
    let monitor = if enforce_monitor {
        let status = monitor_status(arr, sigma_mult, opts);
        if status.in_regime && !status.ok {
            return Err(Error::MonitorBreach {
                sigma: sigma_mult,
                bound: status.bound,
                n: arr.n() as u64,
                d: arr.d_max(),
            });
        }
        Some(status)
    } else {
        None
    };
    let incidence_count = incidences.len() as u64;
    let elided = incidences.len() > opts.list_cap;
    let records = if elided {
        vec![]
    } else {
        incidences
            .iter()
            .map(|i| IncidenceRecord {
                point: [i.point.x.to_string(), i.point.y.to_string()],
                direction: [i.direction.u().to_string(), i.direction.v().to_string()],
                curves: i.curves.clone(),
                mult: i.mult,
                mult_perp: i.mult_perp,
                isotropic: i.isotropic,
            })
            .collect()
    };
    Ok(CountReport {
        schema: REPORT_SCHEMA.into(),
        arrangement: arr.id.clone(),
        field: arr.field.to_string(),
        d_max: arr.d_max(),
        n_curves: arr.n(),
        kind: kind.into(),
        sigma_mult,
        pair_count,
        incidence_count,
        incidences: records,
        elided,
        excluded,
        unresolved_pairs,
        partial: unresolved_pairs > 0,
        monitor,
    })
}

fn binom2(m: u64) -> u64 {
    m * (m.saturating_sub(1)) / 2
}

/// Sigma <= 8 D^2 n^(3/2) inside the regime n <= char^2 / divisor
/// (unrestricted in characteristic zero).
fn monitor_status(arr: &Arrangement, sigma: u64, opts: &CountOptions) -> MonitorStatus {
    let n = arr.n() as u64;
    let d = arr.d_max().max(1) as u64;
    let ch = arr.field.characteristic();
    let in_regime = if ch == 0 {
        true
    } else {
        (n as u128) * (opts.regime_divisor as u128) <= (ch as u128) * (ch as u128)
    };
    let bound = (8 * d * d) as f64 * (n as f64).powf(1.5);
    let bound = bound.ceil() as u64;
    MonitorStatus { in_regime, bound, ok: sigma <= bound }
}

/// Least-squares slope of log(count) against log(n); the one floating-point
/// computation in the crate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub residual: f64,
}

pub fn fit_exponent(samples: &[(u64, u64)]) -> Result<ExponentFit> {
    if samples.len() < 2 {
        return Err(Error::Validation("need at least two samples".into()));
    }
    for &(n, c) in samples {
        if n == 0 || c == 0 {
            return Err(Error::Validation("samples must be positive".into()));
        }
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(n, c)| ((n as f64).ln(), (c as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let xbar = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let ybar = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - xbar) * (p.0 - xbar)).sum();
    if sxx == 0.0 {
        return Err(Error::Validation("all sample sizes equal".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let residual = (pts
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum::<f64>()
        / m)
        .sqrt();
    Ok(ExponentFit { slope, residual })
}
