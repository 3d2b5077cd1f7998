//! Statement-level verifiers. Each returns a [`VerificationReport`] holding
//! both sides of an integer identity, the full feature inventory, and the
//! boolean gates that must hold alongside it.
//!
//! Genericity rejections are returned as errors; a failed identity is a
//! report with `passed = false`.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebraic::{algebraic_report, AlgebraicCurve, AlgebraicReport};
use crate::config::Settings;
use crate::curve::{
    analyze, infinity_profile, jump_profile, line_crossings, tangents_through_point, Curve,
    CurveComponent, FeatureSet, InfinityProfile, JumpKind, JumpProfile, PencilTangent,
};
use crate::error::{CurveError, Result};
use crate::geometry::{meet, AffineChart, ProjectiveLine};
use crate::suite;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Which identity a report checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    /// `σ = n + i/2` for curves avoiding the line at infinity.
    Affine,
    /// `Σ ε_L = |C∩L| - |C∩L∞|` (plus one when `L` is tangent at infinity).
    Pencil,
    /// `σ = n + i/2 + a(a-2)/2 - Σ(|C∩T| - 1)`.
    Projective,
    /// `ρ = t₀ + σ` against its closed form, smooth algebraic curves.
    Algebraic,
    /// Same with nodes, given the total node count.
    Nodal,
    /// Every jump of the ray-count function is catalogued and they sum to zero.
    JumpCatalog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.into(),
            passed,
        }
    }
}

/// Integer summary of a parametric curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub components: usize,
    pub a: usize,
    pub i: i64,
    pub n: i64,
    pub t: i64,
    pub s: i64,
    pub sigma: i64,
    pub excess: i64,
}

impl Counts {
    fn new(curve: &Curve, features: &FeatureSet, profile: &InfinityProfile) -> Self {
        let sc = features.signed_count();
        Self {
            components: curve.components().len(),
            a: profile.a,
            i: features.i(),
            n: features.n(),
            t: sc.t,
            s: sc.s,
            sigma: sc.sigma,
            excess: profile.excess(),
        }
    }
}

/// One line of a pencil check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilCheck {
    pub line: ProjectiveLine,
    pub tangent_at_infinity: bool,
    pub crossings: usize,
    pub sigma_l: i64,
    pub expected: i64,
    pub tangents: Vec<PencilTangent>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Inventory {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<Counts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features: Option<FeatureSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinity: Option<InfinityProfile>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub pencils: Vec<PencilCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebraic: Option<AlgebraicReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jumps: Option<JumpProfile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub theorem: Statement,
    /// SHA-256 over the curve data, chart and settings.
    pub inputs_digest: String,
    pub lhs: f64,
    pub rhs: f64,
    pub delta: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub inventory: Inventory,
    pub diagnostics: Vec<String>,
    pub wall_time_ms: f64,
}

impl VerificationReport {
    #[allow(clippy::too_many_arguments)]
    fn finish(
        theorem: Statement,
        digest: String,
        lhs2: i64,
        rhs2: i64,
        checks: Vec<Check>,
        inventory: Inventory,
        diagnostics: Vec<String>,
        start: Instant,
    ) -> Self {
        let passed = lhs2 == rhs2 && checks.iter().all(|c| c.passed);
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            theorem,
            inputs_digest: digest,
            lhs: lhs2 as f64 / 2.0,
            rhs: rhs2 as f64 / 2.0,
            delta: (lhs2 - rhs2) as f64 / 2.0,
            passed,
            checks,
            inventory,
            diagnostics,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }

    /// Pretty JSON with the wall time zeroed; identical inputs give identical text.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.wall_time_ms = 0.0;
        serde_json::to_string_pretty(&r).expect("reports always serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

fn hash_f64s<'a>(h: &mut Sha256, xs: impl IntoIterator<Item = &'a f64>) {
    for x in xs {
        h.update(x.to_le_bytes());
    }
}

fn hash_common(h: &mut Sha256, chart: &AffineChart, settings: &Settings) {
    hash_f64s(h, &chart.line_at_infinity().coeffs());
    h.update(serde_json::to_vec(settings).expect("settings serialize"));
}

pub fn curve_digest(curve: &Curve, chart: &AffineChart, settings: &Settings) -> String {
    let mut h = Sha256::new();
    h.update(b"trig");
    for c in curve.components() {
        match c {
            CurveComponent::Trig(t) => {
                h.update((t.cos_coeffs().len() as u64).to_le_bytes());
                for v in t.cos_coeffs().iter().chain(t.sin_coeffs()) {
                    hash_f64s(&mut h, v.iter());
                }
            }
            CurveComponent::Sampled(s) => {
                h.update((s.knots().len() as u64).to_le_bytes());
                for &k in s.knots() {
                    let jet = s.jet(k);
                    h.update(k.to_le_bytes());
                    for v in [jet.p, jet.d1, jet.d2] {
                        hash_f64s(&mut h, v.iter());
                    }
                }
            }
        }
    }
    hash_common(&mut h, chart, settings);
    hex::encode(h.finalize())
}

pub fn algebraic_digest(
    curve: &AlgebraicCurve,
    total_nodes: Option<u32>,
    chart: &AffineChart,
    settings: &Settings,
) -> String {
    let mut h = Sha256::new();
    h.update(b"algebraic");
    h.update(curve.degree().to_le_bytes());
    for m in curve.poly().terms() {
        h.update(m.i.to_le_bytes());
        h.update(m.j.to_le_bytes());
        h.update(m.k.to_le_bytes());
        h.update(m.c.to_le_bytes());
    }
    if let Some(n) = total_nodes {
        h.update(n.to_le_bytes());
    }
    hash_common(&mut h, chart, settings);
    hex::encode(h.finalize())
}

fn measure(
    curve: &Curve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<(FeatureSet, InfinityProfile, Counts)> {
    let profile = infinity_profile(curve, chart, settings)?;
    let features = analyze(curve, chart, settings)?;
    let counts = Counts::new(curve, &features, &profile);
    Ok((features, profile, counts))
}

/// `σ = n + i/2` for a curve that misses the line at infinity.
pub fn verify_affine(
    curve: &Curve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let profile = infinity_profile(curve, chart, settings)?;
    if profile.a > 0 {
        return Err(CurveError::NotAffine(profile.a));
    }
    let (features, profile, c) = measure(curve, chart, settings)?;
    let checks = vec![Check::new("flex count even", c.i % 2 == 0)];
    Ok(VerificationReport::finish(
        Statement::Affine,
        curve_digest(curve, chart, settings),
        2 * c.sigma,
        2 * c.n + c.i,
        checks,
        Inventory {
            counts: Some(c),
            features: Some(features),
            infinity: Some(profile),
            ..Default::default()
        },
        Vec::new(),
        start,
    ))
}

/// `σ = n + i/2 + a(a-2)/2 - Σ_T (|C∩T| - 1)` in the given chart.
pub fn verify_projective(
    curve: &Curve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let (features, profile, c) = measure(curve, chart, settings)?;
    let a = c.a as i64;
    let checks = vec![Check::new(
        "each tangent at infinity is tangent only once",
        profile.entries.iter().all(|e| e.count >= 1),
    )];
    Ok(VerificationReport::finish(
        Statement::Projective,
        curve_digest(curve, chart, settings),
        2 * c.sigma,
        2 * c.n + c.i + a * (a - 2) - 2 * c.excess,
        checks,
        Inventory {
            counts: Some(c),
            features: Some(features),
            infinity: Some(profile),
            ..Default::default()
        },
        Vec::new(),
        start,
    ))
}

fn pencil_check(
    curve: &Curve,
    chart: &AffineChart,
    profile: &InfinityProfile,
    line: &ProjectiveLine,
    settings: &Settings,
) -> Result<PencilCheck> {
    let at_infinity = profile
        .entries
        .iter()
        .find(|e| e.tangent.approx_eq(line, settings.tol.pt));
    let crossings = match at_infinity {
        Some(e) => e.count,
        None => line_crossings(curve, line, settings)?.len(),
    };
    let p = meet(line, chart.line_at_infinity())?;
    let tangents = tangents_through_point(curve, &p, chart, line, settings)?;
    let sigma_l = tangents.iter().map(|t| t.sign as i64).sum();
    let expected = crossings as i64 - profile.a as i64 + at_infinity.is_some() as i64;
    Ok(PencilCheck {
        line: *line,
        tangent_at_infinity: at_infinity.is_some(),
        crossings,
        sigma_l,
        expected,
        tangents,
    })
}

/// Checks the pencil identity on the given lines plus every tangent at infinity.
pub fn verify_lemma31(
    curve: &Curve,
    chart: &AffineChart,
    lines: &[ProjectiveLine],
    settings: &Settings,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let profile = infinity_profile(curve, chart, settings)?;
    let mut all: Vec<ProjectiveLine> = lines.to_vec();
    all.extend(profile.entries.iter().map(|e| e.tangent));
    let mut pencils = Vec::with_capacity(all.len());
    for l in &all {
        pencils.push(pencil_check(curve, chart, &profile, l, settings)?);
    }
    finish_pencils(curve, chart, profile, pencils, Vec::new(), settings, start)
}

/// Like [`verify_lemma31`], with `count` seeded random lines. Random lines that
/// happen to be non-generic for the curve are redrawn and noted in the
/// diagnostics.
pub fn verify_lemma31_random(
    curve: &Curve,
    chart: &AffineChart,
    count: usize,
    seed: u64,
    settings: &Settings,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let profile = infinity_profile(curve, chart, settings)?;
    let mut rng = suite::rng(seed);
    let mut pencils = Vec::new();
    let mut diagnostics = Vec::new();
    let mut draws = 0;
    while pencils.len() < count {
        draws += 1;
        if draws > 4 * count + 16 {
            return Err(CurveError::NonGenericTangent(format!(
                "only {} of {count} random lines were generic",
                pencils.len()
            )));
        }
        let line = random_chart_line(&mut rng, chart);
        match pencil_check(curve, chart, &profile, &line, settings) {
            Ok(p) => pencils.push(p),
            Err(e) if e.is_genericity() => {
                diagnostics.push(format!("redrew line {:?}: {e}", line.coeffs()))
            }
            Err(e) => return Err(e),
        }
    }
    for e in &profile.entries {
        pencils.push(pencil_check(curve, chart, &profile, &e.tangent, settings)?);
    }
    finish_pencils(curve, chart, profile, pencils, diagnostics, settings, start)
}

/// A random line of the chart, drawn as an affine line near the origin.
fn random_chart_line(rng: &mut rand_chacha::ChaCha8Rng, chart: &AffineChart) -> ProjectiveLine {
    let [e1, e2, e3] = chart.frame();
    let theta = rng.gen_range(0.0..std::f64::consts::PI);
    let offset = rng.gen_range(-2.0..2.0);
    // Affine line cos θ x + sin θ y = offset, pulled back through the frame.
    let v = e1 * theta.cos() + e2 * theta.sin() - e3 * offset;
    ProjectiveLine::from_vec(&v).expect("nonzero line")
}

fn finish_pencils(
    curve: &Curve,
    chart: &AffineChart,
    profile: InfinityProfile,
    pencils: Vec<PencilCheck>,
    diagnostics: Vec<String>,
    settings: &Settings,
    start: Instant,
) -> Result<VerificationReport> {
    let lhs: i64 = pencils.iter().map(|p| p.sigma_l).sum();
    let rhs: i64 = pencils.iter().map(|p| p.expected).sum();
    let checks = pencils
        .iter()
        .map(|p| {
            Check::new(
                format!("line {:?}", p.line.coeffs()),
                p.sigma_l == p.expected,
            )
        })
        .collect();
    Ok(VerificationReport::finish(
        Statement::Pencil,
        curve_digest(curve, chart, settings),
        2 * lhs,
        2 * rhs,
        checks,
        Inventory {
            infinity: Some(profile),
            pencils,
            ..Default::default()
        },
        diagnostics,
        start,
    ))
}

fn algebraic_checks(r: &AlgebraicReport) -> Vec<Check> {
    let d = r.degree as i64;
    let a = r.a as i64;
    let worst_bitangent = r.bitangents.iter().map(|b| b.residual).fold(0.0, f64::max);
    vec![
        Check::new("rho even", r.rho_even()),
        Check::new("rho at least (d-a)(d-a-2)/2", r.rho >= r.lower_bound),
        Check::new("lower bound non-negative", r.lower_bound >= 0),
        Check::new("t0 non-negative", r.t0 >= 0),
        Check::new("a at most d", a <= d),
        Check::new("d and a have the same parity", (d - a) % 2 == 0),
        Check::new(
            "each tangent at infinity meets the curve at most d-1 times",
            r.infinity
                .entries
                .iter()
                .all(|e| e.count as i64 - 1 <= d - 2),
        ),
        Check::new("bitangent residuals below 1e-9", worst_bitangent < 1e-9),
    ]
}

fn verify_algebraic_inner(
    curve: &AlgebraicCurve,
    total_nodes: Option<u32>,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let r = algebraic_report(curve, chart, total_nodes, settings)?;
    let mut checks = algebraic_checks(&r);
    if total_nodes.is_none() {
        let d = r.degree as i64;
        checks.push(Check::new(
            "Klein: 2 t0 + i_R = d(d-2)",
            2 * r.t0 + r.real_flexes as i64 == d * (d - 2),
        ));
    }
    let (theorem, diagnostics) = match total_nodes {
        None => (Statement::Algebraic, Vec::new()),
        Some(n) => (
            Statement::Nodal,
            vec![format!("total node count N = {n} supplied by the caller")],
        ),
    };
    Ok(VerificationReport::finish(
        theorem,
        algebraic_digest(curve, total_nodes, chart, settings),
        2 * r.rho,
        r.rhs_doubled,
        checks,
        Inventory {
            algebraic: Some(r),
            ..Default::default()
        },
        diagnostics,
        start,
    ))
}

/// `ρ = t₀ + σ` against `d(d-2)/2 + a(a-2)/2 - Σ(|C∩T| - 1)` for a smooth curve.
pub fn verify_algebraic(
    curve: &AlgebraicCurve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<VerificationReport> {
    verify_algebraic_inner(curve, None, chart, settings)
}

/// Nodal version; `total_nodes` counts real and complex nodes.
pub fn verify_nodal(
    curve: &AlgebraicCurve,
    total_nodes: u32,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<VerificationReport> {
    verify_algebraic_inner(curve, Some(total_nodes), chart, settings)
}

/// Runs the jump oracle. An uncatalogued jump yields a failed report rather
/// than an error.
pub fn verify_jump_catalog(
    curve: &Curve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let (features, profile, c) = measure(curve, chart, settings)?;
    let digest = curve_digest(curve, chart, settings);
    let jumps = match jump_profile(curve, chart, settings) {
        Ok(j) => j,
        Err(e @ CurveError::UncataloguedJump { .. }) => {
            return Ok(VerificationReport::finish(
                Statement::JumpCatalog,
                digest,
                1,
                0,
                vec![Check::new("no uncatalogued jumps", false)],
                Inventory {
                    counts: Some(c),
                    features: Some(features),
                    infinity: Some(profile),
                    ..Default::default()
                },
                vec![e.to_string()],
                start,
            ));
        }
        Err(e) => return Err(e),
    };
    let through: i64 = jumps
        .components
        .iter()
        .flat_map(|cj| &cj.events)
        .filter(|e| e.kind == JumpKind::TangentThroughPT)
        .map(|e| e.jump)
        .sum();
    // Grouped by feature: 4t - 4s - 4n - 2i + 2Σ(|C∩T|-1) + 2Σ_T σ_T.
    let grouped = 4 * c.t - 4 * c.s - 4 * c.n - 2 * c.i + 2 * c.excess + through;
    let mut checks = vec![Check::new("no uncatalogued jumps", true)];
    for (j, cj) in jumps.components.iter().enumerate() {
        checks.push(Check::new(
            format!("component {j} jumps sum to zero"),
            cj.total == 0,
        ));
    }
    checks.push(Check::new(
        "grouped sum matches catalogue",
        grouped == jumps.grand_total,
    ));
    Ok(VerificationReport::finish(
        Statement::JumpCatalog,
        digest,
        2 * jumps.grand_total,
        0,
        checks,
        Inventory {
            counts: Some(c),
            features: Some(features),
            infinity: Some(profile),
            jumps: Some(jumps),
            ..Default::default()
        },
        Vec::new(),
        start,
    ))
}
