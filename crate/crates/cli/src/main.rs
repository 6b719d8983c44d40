use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use tubevol::coxeter::{build_group, GroupType};
use tubevol::diffgeo::{curvature_report, Manifold, ManifoldSpec, Signature};
use tubevol::domains::{moments, symmetric_of_degree, DomainSpec};
use tubevol::quadrature::QuadratureSpec;
use tubevol::scenario::{report_csv, Scenario, ScenarioError};
use tubevol::verify::run_checks;

const THREADS_VAR: &str = "TUBEVOL_THREADS";

#[derive(Debug, Error)]
enum CliError {
    /// Bad input; exit code 2.
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
    /// A check ran and failed; exit code 1.
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    fn invalid(field: &str, message: impl ToString) -> Self {
        CliError::Invalid {
            field: field.into(),
            message: message.to_string(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid { .. } => 2,
            CliError::CheckFailed(_) => 1,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Field { field, message } => CliError::Invalid { field, message },
            ScenarioError::Syntax(s) => CliError::invalid("scenario", s),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "tubevol",
    version,
    about = "Volumes of generalized tubes around submanifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tube volume scenarios and the built-in verification suite.
    #[command(subcommand)]
    Tube(TubeCommand),
    /// Finite reflection groups.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Cross-section domains.
    #[command(subcommand)]
    Domain(DomainCommand),
    /// Gauss and Codazzi residuals of a built-in manifold.
    Curvature(CurvatureArgs),
}

#[derive(Subcommand)]
enum TubeCommand {
    /// Runs a JSON scenario and writes the report as JSON and CSV.
    Run {
        scenario: PathBuf,
        /// Seed for every Monte Carlo component; required when the scenario samples.
        #[arg(long)]
        seed: Option<u64>,
        /// Output path prefix; `.json` and `.csv` are appended.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the pinned constants and closed-form checks.
    VerifyPaper {
        /// Check name or group (moments, nogo, polycore, coxeter, domains, tube, lorentz).
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Order, degrees and orthogonal degree of a reflection group.
    CheckDegree {
        /// Family or full name: A, B, D, I2, H3, F4, H4, or e.g. B3.
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct DomainArgs {
    /// Domain kind: ball, cube, cross_polytope, diamond, regular_polygon, cone_ball, radial2d.
    #[arg(long, required_unless_present = "spec")]
    kind: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Cone parameter of `cone_ball`.
    #[arg(long)]
    b: Option<f64>,
    /// Full JSON descriptor, e.g. '{"kind": "radial2d", "constant": 1, "modes": [[16, 0.2, 0]]}'.
    #[arg(long, conflicts_with = "kind")]
    spec: Option<String>,
    /// Seed for `monte_carlo` descriptors.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum DomainCommand {
    /// Whether all moments up to degree n are rotation invariant.
    CheckSymmetric {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Moment table up to a degree, as JSON.
    Moments {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
}

#[derive(Args)]
struct CurvatureArgs {
    /// circle, sphere, torus, clifford_torus, helix, helicoid, graph, plane.
    #[arg(long)]
    manifold: String,
    /// Parameter override, e.g. `--param major=4` (repeatable).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long, default_value = "euclidean")]
    signature: String,
    #[arg(long)]
    gauss_order: Option<usize>,
    #[arg(long)]
    periodic_nodes: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Tube(c) => tube(c),
        Command::Group(c) => group(c),
        Command::Domain(c) => domain(c),
        Command::Curvature(a) => curvature(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        CliError::invalid(
            THREADS_VAR,
            format!("expected a positive integer, got {v:?}"),
        )
    })?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::invalid(THREADS_VAR, e))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(value).map_err(|e| CliError::invalid("output", e))?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{s}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::invalid("output", e)),
        _ => Ok(()),
    }
}

fn tube(cmd: TubeCommand) -> Result<()> {
    match cmd {
        TubeCommand::Run {
            scenario,
            seed,
            out,
        } => run_scenario(&scenario, seed, out),
        TubeCommand::VerifyPaper { filter, json } => {
            let results = run_checks(filter.as_deref());
            if results.is_empty() {
                return Err(CliError::invalid(
                    "filter",
                    format!("no check matches {filter:?}"),
                ));
            }
            if json {
                print_json(&results)?;
            } else {
                for r in &results {
                    let status = if r.passed { "PASS" } else { "FAIL" };
                    println!(
                        "{status}  {:<9} {:<24} {:>8.3}s  {}",
                        r.group, r.name, r.seconds, r.detail
                    );
                }
            }
            let failed: Vec<&str> = results
                .iter()
                .filter(|r| !r.passed)
                .map(|r| r.name)
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::CheckFailed(format!(
                    "failed checks: {}",
                    failed.join(", ")
                )))
            }
        }
    }
}

fn samples_anything(s: &Scenario) -> bool {
    s.mc.is_some() || matches!(s.domain, DomainSpec::MonteCarlo { .. })
}

fn run_scenario(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<()> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::invalid("scenario", format!("{}: {e}", path.display())))?;
    let scenario = Scenario::from_json(&text)?;
    let seeded = seed.is_some() || scenario.mc.as_ref().is_some_and(|m| m.seed.is_some());
    if samples_anything(&scenario) && !seeded {
        return Err(CliError::invalid(
            "seed",
            "Monte Carlo scenarios need --seed",
        ));
    }
    let report = scenario.run(seed)?;
    let prefix = out
        .or_else(|| scenario.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| path.with_extension("report"));
    let json_path = prefix.with_extension(ext_after(&prefix, "json"));
    let csv_path = prefix.with_extension(ext_after(&prefix, "csv"));
    let body =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::invalid("output", e))? + "\n";
    fs::write(&json_path, body)
        .map_err(|e| CliError::invalid("output", format!("{}: {e}", json_path.display())))?;
    fs::write(&csv_path, report_csv(&report))
        .map_err(|e| CliError::invalid("output", format!("{}: {e}", csv_path.display())))?;
    println!("report {}", json_path.display());
    println!("table  {}", csv_path.display());
    let verdict = &report.verdict;
    if verdict.guaranteed {
        println!("intrinsic: guaranteed ({})", verdict.criterion);
    } else {
        println!("{}", verdict.detail);
    }
    match (report.max_relative_discrepancy, &report.intrinsic_skipped) {
        (Some(d), _) => println!("max relative path discrepancy {d:e}"),
        (None, Some(why)) => println!("intrinsic path skipped: {why}"),
        _ => {}
    }
    Ok(())
}

/// Keeps any existing extension of `prefix`, e.g. `out.v1` -> `out.v1.json`.
fn ext_after(prefix: &Path, ext: &str) -> String {
    match prefix.extension().and_then(|e| e.to_str()) {
        Some(e) => format!("{e}.{ext}"),
        None => ext.into(),
    }
}

fn group(cmd: GroupCommand) -> Result<()> {
    let GroupCommand::CheckDegree { kind, m, k, json } = cmd;
    let gt = GroupType::from_parts(&kind, m, k).map_err(|e| CliError::invalid("type", e))?;
    let group = build_group(gt).map_err(|e| CliError::invalid("type", e))?;
    let degrees = gt.degrees();
    let expected = degrees[1] - 1;
    let computed = group
        .orthogonal_of_degree(degrees[1] + 1)
        .map_err(|e| CliError::invalid("type", e))?;
    let order_ok = group.order() as u64 == gt.order();
    let passed = computed == expected && order_ok;
    if json {
        print_json(&json!({
            "group": gt.to_string(),
            "order": group.order(),
            "classical_order": gt.order(),
            "degrees": degrees,
            "orthogonal_degree": computed,
            "expected": expected,
            "passed": passed,
        }))?;
    } else {
        println!("{computed}");
        eprintln!(
            "{gt}: order {} (classical {}), degrees {:?}, orthogonal degree {computed}, expected d2-1 = {expected}: {}",
            group.order(),
            gt.order(),
            degrees,
            if passed { "PASS" } else { "FAIL" }
        );
    }
    if passed {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!(
            "{gt}: orthogonal degree {computed}, expected {expected}"
        )))
    }
}

fn domain_spec(args: &DomainArgs) -> Result<DomainSpec> {
    let value = match (&args.spec, &args.kind) {
        (Some(s), _) => serde_json::from_str(s).map_err(|e| CliError::invalid("spec", e))?,
        (None, Some(kind)) => {
            let mut obj = Map::new();
            obj.insert("kind".into(), json!(kind));
            if let Some(m) = args.m {
                obj.insert("m".into(), json!(m));
            }
            if let Some(k) = args.k {
                obj.insert("k".into(), json!(k));
            }
            if let Some(b) = args.b {
                obj.insert("b".into(), json!(b));
            }
            Value::Object(obj)
        }
        (None, None) => {
            return Err(CliError::invalid(
                "kind",
                "either --kind or --spec is required",
            ))
        }
    };
    let field = if args.spec.is_some() { "spec" } else { "kind" };
    serde_json::from_value(value).map_err(|e| CliError::invalid(field, e))
}

fn build_domain(args: &DomainArgs) -> Result<tubevol::domains::Domain> {
    let spec = domain_spec(args)?;
    if matches!(spec, DomainSpec::MonteCarlo { .. }) && args.seed.is_none() {
        return Err(CliError::invalid("seed", "monte_carlo domains need --seed"));
    }
    spec.to_domain(args.seed)
        .map_err(|e| CliError::invalid("domain", e))
}

fn domain(cmd: DomainCommand) -> Result<()> {
    match cmd {
        DomainCommand::CheckSymmetric {
            domain,
            n,
            tol,
            json,
        } => {
            let d = build_domain(&domain)?;
            let r = symmetric_of_degree(&d, n, tol).map_err(|e| CliError::invalid("n", e))?;
            if json {
                print_json(&r)?;
            } else {
                let worst = r
                    .worst
                    .as_ref()
                    .map_or("-".to_string(), |a| format!("{:?}", a.exponents()));
                println!(
                    "{} (max defect {:e} at alpha {worst})",
                    r.symmetric, r.max_defect
                );
            }
            Ok(())
        }
        DomainCommand::Moments { domain, degree } => {
            let d = build_domain(&domain)?;
            let table = moments(&d, degree).map_err(|e| CliError::invalid("degree", e))?;
            print_json(&table)
        }
    }
}

fn manifold_defaults(kind: &str) -> Result<Value> {
    Ok(match kind {
        "circle" => json!({"radius": 1.0, "ambient": 3}),
        "sphere" => json!({"radius": 1.0, "dim": 2}),
        "torus" => json!({"major": 3.0, "minor": 1.0}),
        "clifford_torus" => json!({"r1": 1.0, "r2": 0.5, "warp": 0.2}),
        "helix" => json!({"radius": 1.0, "pitch": 0.5, "length": 6.283185307179586}),
        "helicoid" => json!({"pitch": 0.5, "width": 1.0}),
        "graph" => json!({"heights": [[[2, 0, 0.3], [1, 1, 0.1], [0, 2, -0.2]]]}),
        "plane" => json!({}),
        other => {
            return Err(CliError::invalid(
                "manifold",
                format!("unknown manifold kind {other:?}"),
            ))
        }
    })
}

fn curvature(args: CurvatureArgs) -> Result<()> {
    let Value::Object(mut obj) = manifold_defaults(&args.manifold)? else {
        unreachable!("defaults are objects")
    };
    obj.insert("kind".into(), json!(args.manifold));
    for p in &args.params {
        let (key, raw) = p
            .split_once('=')
            .ok_or_else(|| CliError::invalid("param", format!("expected KEY=VALUE, got {p:?}")))?;
        let v = serde_json::from_str(raw).unwrap_or_else(|_| json!(raw));
        obj.insert(key.into(), v);
    }
    let spec: ManifoldSpec =
        serde_json::from_value(Value::Object(obj)).map_err(|e| CliError::invalid("param", e))?;
    let signature: Signature = serde_json::from_value(json!(args.signature))
        .map_err(|e| CliError::invalid("signature", e))?;
    let manifold = Manifold::new(spec, signature).map_err(|e| CliError::invalid("manifold", e))?;
    let mut q = QuadratureSpec::default();
    if let Some(g) = args.gauss_order {
        q.gauss_order = g;
    }
    if let Some(p) = args.periodic_nodes {
        q.periodic_nodes = p;
    }
    let report =
        curvature_report(&manifold, &q, None).map_err(|e| CliError::invalid("manifold", e))?;
    print_json(&report)
}
