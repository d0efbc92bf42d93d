//! Command-line harness: generate arrangements, count directed tangencies
//! and orthogonalities, sweep families and fit exponents, print jet data,
//! emit space-curve lifts, fit vanishing polynomials, and run the built-in
//! self-test matrix. Exit codes: 0 success, 2 validation failure, 3 scan
//! bound exceeded, 4 internal invariant breach.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use curvetan_core::algebra::{parse_bivar, Field, Scalar};
use curvetan_core::counting::{
    fit_exponent, Arrangement, CountOptions, CountReport, CounterRegistry, CSV_HEADER,
};
use curvetan_core::curves::{PlaneCurve, PlanePoint};
use curvetan_core::doc::{ArrangementDoc, ExperimentDoc};
use curvetan_core::error::Error as CoreError;
use curvetan_core::families::{FamilyParams, FamilyRegistry};
use curvetan_core::lift::{lift_curve, LiftKind};

mod selftest;

#[derive(Parser)]
#[command(name = "curvetan", version, about = "exact tangency/orthogonality workbench")]
struct Cli {
    /// Seed for every derived pseudo-random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker cap for plane scans; output is independent of the value.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a built-in arrangement family as a JSON document.
    Gen(GenArgs),
    /// Count directed incidences of one kind for an arrangement document.
    Analyze(AnalyzeArgs),
    /// Run a parameter sweep and fit the count-vs-size exponent.
    Sweep(SweepArgs),
    /// Print the jet sequence and branch series of a curve at a point.
    Jets(JetsArgs),
    /// Emit the defining pair and bad points of a space-curve lift.
    Lift(LiftArgs),
    /// Fit a minimal-degree vanishing polynomial over sampled lift points.
    FitVanishing(FitArgs),
    /// Run the oracle-equivalence matrix and write deterministic artifacts.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Family name, or "list" to enumerate the registry.
    family: String,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Arrangement document path.
    doc: PathBuf,
    /// Counting kind: tangency, orthogonality, or s-tangency.
    #[arg(long, default_value = "tangency")]
    kind: String,
    /// Order for s-tangency.
    #[arg(long, default_value_t = 2)]
    s: u32,
    /// Write the JSON report here (stdout when omitted).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Append a CSV row here (with header when the file is new).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Drop the incidence list from the report.
    #[arg(long, default_value_t = false)]
    no_list: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment document path; alternative to the inline flags.
    #[arg(long)]
    doc: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated sweep values (p for unit-circles, n otherwise).
    #[arg(long, value_delimiter = ',')]
    values: Vec<u64>,
    #[arg(long, default_value = "tangency")]
    kind: String,
    #[arg(long, default_value_t = 2)]
    s: u32,
    /// Write sweep rows here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct JetsArgs {
    /// Defining polynomial, e.g. "x - 2*y - y^2".
    #[arg(long)]
    curve: String,
    /// Field: "rational", a prime p, or "2^k".
    #[arg(long, default_value = "rational")]
    field: String,
    /// Base point "x,y".
    #[arg(long)]
    at: String,
    /// Jet and series order.
    #[arg(long, default_value_t = 4)]
    order: u32,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    curve: String,
    #[arg(long, default_value = "rational")]
    field: String,
    /// "orthogonal" or a tangency order s >= 1.
    #[arg(long, default_value = "1")]
    kind: String,
}

#[derive(Args)]
struct FitArgs {
    /// Arrangement document path.
    doc: PathBuf,
    /// Sample points per curve; 0 picks 3 * dmax * branch-degree.
    #[arg(long, default_value_t = 0)]
    m_per_curve: usize,
    /// Degree cap for the fit.
    #[arg(long)]
    dmax: u32,
    /// Held-out points per curve for the vanishing check.
    #[arg(long, default_value_t = 10)]
    held_out: usize,
    /// Write the fit summary JSON here (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Directory for the deterministic artifacts.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Core(CoreError),
    Io(String),
    Usage(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Core(e) => e.exit_code() as u8,
            CliError::Io(_) | CliError::Usage(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(m) => format!("io: {m}"),
            CliError::Usage(m) => m.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let opts = CountOptions { threads: cli.threads, ..Default::default() };
    match cli.command {
        Command::Gen(args) => cmd_gen(args, cli.seed),
        Command::Analyze(args) => cmd_analyze(args, opts),
        Command::Sweep(args) => cmd_sweep(args, cli.seed, opts),
        Command::Jets(args) => cmd_jets(args),
        Command::Lift(args) => cmd_lift(args),
        Command::FitVanishing(args) => cmd_fit(args),
        Command::Selftest(args) => {
            selftest::run(&args.out_dir, cli.seed).map_err(CliError::from)
        }
    }
}

fn cmd_gen(args: GenArgs, seed: u64) -> Result<(), CliError> {
    let registry = FamilyRegistry::builtin();
    if args.family == "list" {
        for (name, what) in registry.describe_all() {
            println!("{name}: {what}");
        }
        return Ok(());
    }
    let params = FamilyParams { p: args.p, q: args.q, n: args.n, m: args.m, seed };
    let arr = registry.generate_by_name(&args.family, &params)?;
    let doc = ArrangementDoc::from_arrangement(&arr);
    let json = doc.to_json();
    match args.out {
        Some(path) => std::fs::write(path, json)?,
        None => print!("{json}"),
    }
    Ok(())
}

fn load_arrangement(path: &Path) -> Result<Arrangement, CliError> {
    let text = std::fs::read_to_string(path)?;
    let doc = ArrangementDoc::from_json(&text)?;
    Ok(doc.to_arrangement()?)
}

fn count_with_kind(
    arr: &Arrangement,
    kind: &str,
    opts: &CountOptions,
) -> Result<CountReport, CliError> {
    let registry = CounterRegistry::builtin();
    let counter = registry.get(kind).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown kind '{kind}' (expected one of {:?})",
            registry.names()
        ))
    })?;
    Ok(counter.count(arr, opts)?)
}

fn append_csv(path: &Path, rows: &[String]) -> Result<(), CliError> {
    let mut content = if path.exists() {
        std::fs::read_to_string(path)?
    } else {
        format!("{CSV_HEADER}\n")
    };
    for row in rows {
        content.push_str(row);
        content.push('\n');
    }
    std::fs::write(path, content)?;
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs, mut opts: CountOptions) -> Result<(), CliError> {
    opts.s = args.s;
    if args.no_list {
        opts.list_cap = 0;
    }
    let arr = load_arrangement(&args.doc)?;
    let report = count_with_kind(&arr, &args.kind, &opts)?;
    let json = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    match &args.report {
        Some(path) => std::fs::write(path, &json)?,
        None => print!("{json}"),
    }
    if let Some(csv) = &args.csv {
        append_csv(csv, &[report.csv_row()])?;
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs, seed: u64, mut opts: CountOptions) -> Result<(), CliError> {
    let exp = if let Some(path) = &args.doc {
        let text = std::fs::read_to_string(path)?;
        ExperimentDoc::from_json(&text)?
    } else {
        let family = args
            .family
            .clone()
            .ok_or_else(|| CliError::Usage("sweep needs --doc or --family".into()))?;
        if args.values.is_empty() {
            return Err(CliError::Usage("sweep needs --values".into()));
        }
        ExperimentDoc {
            schema: curvetan_core::doc::EXPERIMENT_SCHEMA.into(),
            family,
            sweep: args.values.clone(),
            kind: args.kind.clone(),
            s: args.s,
            seed,
        }
    };
    opts.s = exp.s;
    let registry = FamilyRegistry::builtin();
    let mut rows = vec![];
    let mut samples = vec![];
    for &value in &exp.sweep {
        let params = exp.params_for(value);
        let arr = registry.generate_by_name(&exp.family, &params)?;
        let report = count_with_kind(&arr, &exp.kind, &opts)?;
        println!(
            "{} value={} n={} sigma={}",
            exp.family,
            value,
            arr.n(),
            report.sigma_mult
        );
        samples.push((arr.n() as u64, report.sigma_mult));
        rows.push(report.csv_row());
    }
    if let Some(csv) = &args.csv {
        append_csv(csv, &rows)?;
    }
    if samples.iter().all(|&(_, c)| c > 0) && samples.len() >= 2 {
        let fit = fit_exponent(&samples)?;
        println!("fitted exponent: {:.6} (residual {:.6})", fit.slope, fit.residual);
    } else {
        println!("fitted exponent: undefined (zero counts present)");
    }
    Ok(())
}

fn parse_field(text: &str) -> Result<Field, CliError> {
    if text == "rational" || text == "Q" || text == "q" {
        return Ok(Field::Rational);
    }
    if let Some(k) = text.strip_prefix("2^") {
        let k: u8 = k
            .parse()
            .map_err(|_| CliError::Usage(format!("bad field '{text}'")))?;
        return Ok(Field::char2_ext(k)?);
    }
    let p: u64 = text
        .parse()
        .map_err(|_| CliError::Usage(format!("bad field '{text}'")))?;
    Ok(Field::prime(p)?)
}

fn parse_point(field: Field, text: &str) -> Result<PlanePoint, CliError> {
    let (xs, ys) = text
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("bad point '{text}', expected x,y")))?;
    let bad = |t: &str| CliError::Usage(format!("bad coordinate '{t}'"));
    let parse_coord = |t: &str| -> Result<Scalar, CliError> {
        let t = t.trim();
        match field {
            Field::Rational => {
                if let Some((a, b)) = t.split_once('/') {
                    let a: i64 = a.parse().map_err(|_| bad(t))?;
                    let b: i64 = b.parse().map_err(|_| bad(t))?;
                    Ok(Scalar::from_ratio(a, b))
                } else {
                    Ok(Scalar::from_i64(field, t.parse().map_err(|_| bad(t))?))
                }
            }
            Field::Prime(_) => Ok(Scalar::from_i64(field, t.parse().map_err(|_| bad(t))?)),
            Field::Char2Ext(_) => {
                Ok(Scalar::from_bits(field, t.parse().map_err(|_| bad(t))?)?)
            }
        }
    };
    Ok(PlanePoint::new(parse_coord(xs)?, parse_coord(ys)?))
}

fn cmd_jets(args: JetsArgs) -> Result<(), CliError> {
    if args.order == 0 {
        return Err(CliError::Usage("--order must be at least 1".into()));
    }
    let field = parse_field(&args.field)?;
    let poly = parse_bivar(field, &args.curve)?;
    let curve = PlaneCurve::new(poly)?;
    let point = parse_point(field, &args.at)?;
    if !curve.contains(&point)? {
        return Err(CoreError::NotOnCurve(point.x.to_string(), point.y.to_string()).into());
    }
    println!("curve: {}", curve.poly());
    println!("point: {point}");
    let jets = curvetan_core::jets::jet_sequence(&curve, args.order)?;
    for i in 1..=args.order {
        let f = jets.get(i);
        match f.eval(&point.x, &point.y) {
            Ok(v) => println!("f_{i} = {f}    f_{i}{point} = {v}"),
            Err(_) => println!("f_{i} = {f}    f_{i}{point} = pole"),
        }
    }
    let branch = curvetan_core::jets::hensel_phi(&curve, &point, args.order)?;
    let coeffs: Vec<String> = (1..=args.order)
        .map(|i| branch.coeff(i).to_string())
        .collect();
    println!("phi coefficients a_1..a_{}: ({})", args.order, coeffs.join(", "));
    Ok(())
}

fn cmd_lift(args: LiftArgs) -> Result<(), CliError> {
    let field = parse_field(&args.field)?;
    let poly = parse_bivar(field, &args.curve)?;
    let curve = PlaneCurve::new(poly)?;
    let kind = if args.kind == "orthogonal" {
        LiftKind::Orthogonal
    } else {
        let s: u32 = args
            .kind
            .parse()
            .map_err(|_| CliError::Usage(format!("bad lift kind '{}'", args.kind)))?;
        LiftKind::Tangency { s }
    };
    let lift = lift_curve(&curve, kind)?;
    let (sp, sz) = lift.defining_pair();
    println!("kind: {}", lift.kind());
    println!("surface_1: {sp}");
    println!("surface_2: {sz}");
    println!("branch degree bound: {}", lift.branch_degree_bound());
    let bad: Vec<String> = lift.bad_points().iter().map(|p| p.to_string()).collect();
    println!("bad points ({}): {}", bad.len(), bad.join(" "));
    Ok(())
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let arr = load_arrangement(&args.doc)?;
    let mut lifts = vec![];
    for c in &arr.curves {
        lifts.push(lift_curve(c, LiftKind::Tangency { s: 1 })?);
    }
    let branch_bound = lifts.iter().map(|l| l.branch_degree_bound()).max().unwrap_or(1);
    let m = if args.m_per_curve == 0 {
        curvetan_core::polymethod::default_sample_size(args.dmax, branch_bound)
    } else {
        args.m_per_curve
    };
    let sample = curvetan_core::polymethod::sample_lift_points(&lifts, m + args.held_out)?;
    // per-curve blocks: fit on the head, hold out the tail
    let mut fit_points = vec![];
    let mut held_points = vec![];
    for chunk in sample.chunks(m + args.held_out) {
        fit_points.extend_from_slice(&chunk[..m]);
        held_points.extend_from_slice(&chunk[m..]);
    }
    let fit = curvetan_core::polymethod::min_vanishing_poly(&fit_points, args.dmax)?;
    let (zeros, total) = curvetan_core::polymethod::vanishing_count(&fit.poly, &held_points)?;
    let summary = curvetan_core::polymethod::FitSummary {
        degree: fit.degree,
        nullity: fit.nullity,
        minimal: fit.minimal,
        sample_count: fit.sample_count,
        poly: fit.poly.to_string(),
        held_out_zero: zeros,
        held_out_total: total,
    };
    let json = serde_json::to_string_pretty(&summary).expect("serializable") + "\n";
    match &args.out {
        Some(path) => std::fs::write(path, &json)?,
        None => print!("{json}"),
    }
    Ok(())
}
