//! `curvelab`: analyze curve files, verify the signed bitangent identities,
//! run the jump oracle and render SVG pictures.
//!
//! Exit status: 0 pass, 1 identity violation, 2 genericity rejection,
//! 3 schema or input error.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use curvelab::algebraic::{algebraic_report, trace_real_curve, AlgebraicCurve};
use curvelab::invariants::{self, Inventory, VerificationReport};
use curvelab::schema::{self, CurveFile, CurveModel};
use curvelab::suite::{self, Family};
use curvelab::{
    analyze, infinity_profile, AffineChart, Curve, CurveError, ProjectiveLine, Settings,
};

#[derive(Parser)]
#[command(
    name = "curvelab",
    version,
    about = "Flexes, nodes and signed bitangent counts of plane curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Line at infinity `u,v,w` of the affine chart (overrides the file).
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    line_at_infinity: Option<[f64; 3]>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write an SVG picture here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Subdivision cells per parameter axis; other scans scale with it.
    #[arg(long)]
    resolution: Option<usize>,
    /// Tolerance override `NAME=VALUE` (repeatable; beats CURVELAB_TOL_*).
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Report flexes, nodes, bitangents and the infinity profile.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check one identity on a file, or on a seeded random suite.
    Verify {
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        theorem: Option<Theorem>,
        /// Line `u,v,w` for the pencil check (repeatable; default: random lines).
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        line: Vec<[f64; 3]>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run COUNT random curves instead of a file.
        #[arg(long, value_name = "COUNT")]
        suite: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the ray-count function and match its jumps to the catalogue.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Draw the curve and its features (SVG to --svg, or stdout).
    Render {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Affine,
    #[value(alias = "lemma31")]
    Pencil,
    Projective,
    Algebraic,
    Nodal,
    Jumps,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected u,v,w, got {s}"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| format!("not a number: {p}"))?;
    }
    Ok(out)
}

/// Error type of the front end: a curve error or a plain usage problem.
enum Failure {
    Curve(CurveError),
    Usage(String),
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        Failure::Curve(e)
    }
}

type Outcome = Result<bool, Failure>;

fn exit_code(e: &CurveError) -> u8 {
    if e.is_schema() {
        3
    } else if e.is_genericity() {
        2
    } else {
        1
    }
}

fn settings(common: &Common) -> Result<Settings, CurveError> {
    let mut s = Settings::default();
    s.tol.apply_env(std::env::vars())?;
    for t in &common.tol {
        s.tol.apply_assignment(t)?;
    }
    if let Some(n) = common.resolution {
        if n < 16 {
            return Err(CurveError::SchemaError(
                "--resolution must be at least 16".into(),
            ));
        }
        s.subdivision = n;
        s.scan_samples = 2 * n;
        s.jump_grid = n / 2;
        s.trace_resolution = n / 2;
    }
    Ok(s)
}

struct Loaded {
    file: CurveFile,
    model: CurveModel,
    chart: AffineChart,
}

fn load(path: &Path, common: &Common) -> Result<Loaded, CurveError> {
    let mut file = schema::parse(path)?;
    if let Some(l) = common.line_at_infinity {
        file.line_at_infinity = Some(l);
    }
    let model = file.model()?;
    let chart = file.chart()?;
    Ok(Loaded { file, model, chart })
}

/// The parametric curve behind a model (the traced real locus for algebraic files).
fn parametric(loaded: &Loaded, settings: &Settings) -> Result<Curve, CurveError> {
    match &loaded.model {
        CurveModel::Trig(c) => Ok(c.clone()),
        CurveModel::Algebraic(a) => {
            Ok(trace_real_curve(a, loaded.file.nodal.is_some(), settings)?.curve)
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CurveError> {
    std::fs::write(path, text).map_err(|e| CurveError::Io(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<(), CurveError> {
    if let Some(p) = path {
        write_file(
            p,
            &serde_json::to_string_pretty(value).expect("reports serialize"),
        )?;
    }
    Ok(())
}

fn write_svg(
    path: &Option<PathBuf>,
    curve: &Curve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<(), CurveError> {
    if let Some(p) = path {
        let features = analyze(curve, chart, settings)?;
        let profile = infinity_profile(curve, chart, settings)?;
        write_file(p, &render::render_svg(curve, &features, &profile, chart))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct AnalysisReport {
    schema_version: u32,
    kind: &'static str,
    inputs_digest: String,
    inventory: Inventory,
}

fn run_analyze(path: &Path, common: &Common) -> Outcome {
    let settings = settings(common)?;
    let loaded = load(path, common)?;
    let report = match &loaded.model {
        CurveModel::Trig(curve) => {
            let profile = infinity_profile(curve, &loaded.chart, &settings)?;
            let features = analyze(curve, &loaded.chart, &settings)?;
            let sc = features.signed_count();
            println!(
                "components {}  a {}  flexes {}  nodes {}  bitangents T {} S {}  sigma {}  excess {}",
                curve.components().len(),
                profile.a,
                features.i(),
                features.n(),
                sc.t,
                sc.s,
                sc.sigma,
                profile.excess()
            );
            AnalysisReport {
                schema_version: invariants::REPORT_SCHEMA_VERSION,
                kind: "trig",
                inputs_digest: invariants::curve_digest(curve, &loaded.chart, &settings),
                inventory: Inventory {
                    features: Some(features),
                    infinity: Some(profile),
                    ..Default::default()
                },
            }
        }
        CurveModel::Algebraic(a) => {
            let nodes = loaded.file.nodal.map(|n| n.total);
            let r = algebraic_report(a, &loaded.chart, nodes, &settings)?;
            println!(
                "degree {}  components {}  a {}  real flexes {}  t0 {}  T {} S {}  sigma {}  rho {}  closed form {}",
                r.degree,
                r.components,
                r.a,
                r.real_flexes,
                r.t0,
                r.t,
                r.s,
                r.sigma,
                r.rho,
                r.rhs_doubled as f64 / 2.0
            );
            AnalysisReport {
                schema_version: invariants::REPORT_SCHEMA_VERSION,
                kind: "algebraic",
                inputs_digest: invariants::algebraic_digest(a, nodes, &loaded.chart, &settings),
                inventory: Inventory {
                    algebraic: Some(r),
                    ..Default::default()
                },
            }
        }
    };
    write_json(&common.json, &report)?;
    if common.svg.is_some() {
        let curve = parametric(&loaded, &settings)?;
        write_svg(&common.svg, &curve, &loaded.chart, &settings)?;
    }
    Ok(true)
}

fn print_report(r: &VerificationReport) {
    println!(
        "{:?}: lhs {} rhs {} delta {} -> {}",
        r.theorem,
        r.lhs,
        r.rhs,
        r.delta,
        if r.passed { "PASS" } else { "FAIL" }
    );
    for c in r.checks.iter().filter(|c| !c.passed) {
        println!("  failed check: {}", c.name);
    }
    for d in &r.diagnostics {
        println!("  note: {d}");
    }
}

fn parametric_verifier(
    theorem: Theorem,
    curve: &Curve,
    chart: &AffineChart,
    lines: &[[f64; 3]],
    seed: u64,
    settings: &Settings,
) -> Result<VerificationReport, Failure> {
    Ok(match theorem {
        Theorem::Affine => invariants::verify_affine(curve, chart, settings)?,
        Theorem::Projective => invariants::verify_projective(curve, chart, settings)?,
        Theorem::Jumps => invariants::verify_jump_catalog(curve, chart, settings)?,
        Theorem::Pencil if lines.is_empty() => {
            invariants::verify_lemma31_random(curve, chart, 20, seed, settings)?
        }
        Theorem::Pencil => {
            let lines = lines
                .iter()
                .map(|&l| ProjectiveLine::from_array(l))
                .collect::<Result<Vec<_>, _>>()?;
            invariants::verify_lemma31(curve, chart, &lines, settings)?
        }
        Theorem::Algebraic | Theorem::Nodal => {
            return Err(Failure::Usage(
                "this statement needs an algebraic curve file".into(),
            ))
        }
    })
}

fn run_verify_file(
    path: &Path,
    theorem: Option<Theorem>,
    lines: &[[f64; 3]],
    seed: u64,
    common: &Common,
) -> Outcome {
    let settings = settings(common)?;
    let loaded = load(path, common)?;
    let report = match (&loaded.model, theorem) {
        (CurveModel::Algebraic(a), None | Some(Theorem::Algebraic) | Some(Theorem::Nodal)) => {
            match (theorem, loaded.file.nodal) {
                (Some(Theorem::Nodal) | None, Some(n)) => {
                    invariants::verify_nodal(a, n.total, &loaded.chart, &settings)?
                }
                (Some(Theorem::Nodal), None) => {
                    return Err(Failure::Usage(
                        "nodal verification needs \"nodal\": {\"N\": ...} in the file".into(),
                    ))
                }
                _ => invariants::verify_algebraic(a, &loaded.chart, &settings)?,
            }
        }
        (CurveModel::Trig(c), None) => invariants::verify_projective(c, &loaded.chart, &settings)?,
        (_, Some(t)) => {
            let curve = parametric(&loaded, &settings)?;
            parametric_verifier(t, &curve, &loaded.chart, lines, seed, &settings)?
        }
    };
    print_report(&report);
    write_json(&common.json, &report)?;
    if common.svg.is_some() {
        let curve = parametric(&loaded, &settings)?;
        write_svg(&common.svg, &curve, &loaded.chart, &settings)?;
    }
    Ok(report.passed)
}

#[derive(Serialize)]
struct SuiteEntry {
    index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rejection: Option<String>,
}

#[derive(Serialize)]
struct SuiteReport {
    schema_version: u32,
    theorem: String,
    seed: u64,
    count: usize,
    passed: usize,
    failed: usize,
    rejected: usize,
    entries: Vec<SuiteEntry>,
}

const ALGEBRAIC_FAMILIES: [(u32, u32); 7] =
    [(2, 0), (2, 2), (3, 1), (3, 3), (4, 0), (4, 2), (4, 4)];

fn suite_member(
    theorem: Theorem,
    index: usize,
    seed: u64,
    settings: &Settings,
) -> Result<VerificationReport, Failure> {
    let mut rng = suite::rng(
        seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(index as u64),
    );
    let chart = AffineChart::default();
    let family = match theorem {
        Theorem::Affine => Family::Affine,
        Theorem::Projective => Family::Crossing(1 + index % 3),
        Theorem::Pencil | Theorem::Jumps => match index % 4 {
            0 => Family::Affine,
            k => Family::Crossing(k),
        },
        Theorem::Algebraic => {
            let (d, a) = ALGEBRAIC_FAMILIES[index % ALGEBRAIC_FAMILIES.len()];
            let curve: AlgebraicCurve = suite::random_algebraic(&mut rng, d, a);
            return Ok(invariants::verify_algebraic(&curve, &chart, settings)?);
        }
        Theorem::Nodal => {
            return Err(Failure::Usage(
                "no random suite for nodal curves (N is caller supplied)".into(),
            ))
        }
    };
    let curve = suite::random_curve(&mut rng, family);
    parametric_verifier(theorem, &curve, &chart, &[], index as u64, settings)
}

fn run_suite(theorem: Option<Theorem>, count: usize, seed: u64, common: &Common) -> Outcome {
    let settings = settings(common)?;
    let theorem = theorem.unwrap_or(Theorem::Projective);
    if theorem == Theorem::Nodal {
        return Err(Failure::Usage(
            "no random suite for nodal curves (N is caller supplied)".into(),
        ));
    }
    let results: Vec<Result<VerificationReport, Failure>> = (0..count)
        .into_par_iter()
        .map(|k| suite_member(theorem, k, seed, &settings))
        .collect();
    let mut entries = Vec::with_capacity(count);
    let (mut passed, mut failed, mut rejected) = (0, 0, 0);
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(report) => {
                if report.passed {
                    passed += 1;
                } else {
                    failed += 1;
                    println!("#{index}: identity failed");
                    print_report(&report);
                }
                entries.push(SuiteEntry {
                    index,
                    report: Some(report),
                    rejection: None,
                });
            }
            Err(Failure::Curve(e)) if e.is_genericity() => {
                rejected += 1;
                println!("#{index}: rejected: {e}");
                entries.push(SuiteEntry {
                    index,
                    report: None,
                    rejection: Some(e.to_string()),
                });
            }
            Err(Failure::Curve(e)) => {
                failed += 1;
                println!("#{index}: error: {e}");
                entries.push(SuiteEntry {
                    index,
                    report: None,
                    rejection: Some(e.to_string()),
                });
            }
            Err(usage) => return Err(usage),
        }
    }
    println!("{theorem:?} suite, seed {seed}: {passed} passed, {failed} failed, {rejected} rejected of {count}");
    let summary = SuiteReport {
        schema_version: invariants::REPORT_SCHEMA_VERSION,
        theorem: format!("{theorem:?}").to_lowercase(),
        seed,
        count,
        passed,
        failed,
        rejected,
        entries,
    };
    write_json(&common.json, &summary)?;
    if failed > 0 {
        return Ok(false);
    }
    if 10 * rejected >= 3 * count {
        return Err(Failure::Curve(CurveError::NonGenericTangent(format!(
            "{rejected} of {count} random curves were rejected as non-generic"
        ))));
    }
    Ok(true)
}

fn run_oracle(path: &Path, common: &Common) -> Outcome {
    let settings = settings(common)?;
    let loaded = load(path, common)?;
    let curve = parametric(&loaded, &settings)?;
    let report = invariants::verify_jump_catalog(&curve, &loaded.chart, &settings)?;
    if let Some(j) = &report.inventory.jumps {
        for (k, c) in j.components.iter().enumerate() {
            println!(
                "component {k}: {} events, total jump {}",
                c.events.len(),
                c.total
            );
            for e in &c.events {
                println!("  t = {:.9}  {:?}  {:+}", e.at.t, e.kind, e.jump);
            }
        }
    }
    print_report(&report);
    write_json(&common.json, &report)?;
    write_svg(&common.svg, &curve, &loaded.chart, &settings)?;
    Ok(report.passed)
}

fn run_render(path: &Path, common: &Common) -> Outcome {
    let settings = settings(common)?;
    let loaded = load(path, common)?;
    let curve = parametric(&loaded, &settings)?;
    match &common.svg {
        Some(_) => write_svg(&common.svg, &curve, &loaded.chart, &settings)?,
        None => {
            let features = analyze(&curve, &loaded.chart, &settings)?;
            let profile = infinity_profile(&curve, &loaded.chart, &settings)?;
            print!(
                "{}",
                render::render_svg(&curve, &features, &profile, &loaded.chart)
            );
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze { file, common } => run_analyze(file, common),
        Command::Verify {
            file,
            theorem,
            line,
            seed,
            suite,
            common,
        } => match (file, suite) {
            (Some(f), None) => run_verify_file(f, *theorem, line, *seed, common),
            (None, Some(n)) => run_suite(*theorem, *n, *seed, common),
            _ => Err(Failure::Usage(
                "give either a curve file or --suite COUNT".into(),
            )),
        },
        Command::Oracle { file, common } => run_oracle(file, common),
        Command::Render { file, common } => run_render(file, common),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Curve(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
