//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Run with `cargo test --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use curvelab::algebraic::{algebraic_report, AlgebraicCurve, AlgebraicReport};
use curvelab::invariants::{
    verify_affine, verify_jump_catalog, verify_lemma31_random, verify_projective,
};
use curvelab::suite::{self, Family};
use curvelab::{AffineChart, Curve, ProjectiveLine, Settings, VerificationReport};

const RESIDUAL: f64 = 1e-9;
const GOLDEN_SECONDS: f64 = 5.0;
const AFFINE_CURVES: usize = 50;
const AFFINE_SECONDS: f64 = 120.0;
const PROJECTIVE_CURVES: usize = 50;
const MAX_REJECTION: f64 = 0.30;
const LINES_PER_CURVE: usize = 20;
const MIN_TANGENT_CASES: usize = 5;
const JUMP_CURVES: usize = 50;
const QUARTIC_SUITE: usize = 8;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn chart(l: [f64; 3]) -> AffineChart {
    AffineChart::new(ProjectiveLine::from_array(l).unwrap())
}

/// Largest `|F|/scale` at the polished flexes and largest bitangent residual.
fn worst_residual(f: &AlgebraicCurve, r: &AlgebraicReport) -> f64 {
    let scale = f.poly().scale();
    let flex = r
        .flexes
        .iter()
        .map(|p| (f.eval(p) / scale).abs())
        .fold(0.0, f64::max);
    let bit = r.bitangents.iter().map(|b| b.residual).fold(0.0, f64::max);
    flex.max(bit)
}

#[derive(Default)]
struct AlgebraicLog {
    reports: Vec<(String, u32, AlgebraicReport)>,
}

impl AlgebraicLog {
    fn run(
        &mut self,
        name: &str,
        f: &AlgebraicCurve,
        c: &AffineChart,
        s: &Settings,
    ) -> Result<(AlgebraicReport, f64), String> {
        let start = Instant::now();
        let r = algebraic_report(f, c, None, s).map_err(|e| format!("{name}: {e}"))?;
        let secs = start.elapsed().as_secs_f64();
        self.reports.push((name.to_string(), f.degree(), r.clone()));
        Ok((r, secs))
    }
}

fn golden(log: &mut AlgebraicLog, s: &Settings) -> Outcome {
    let conic = algebraic(2, &[(2, 0, 0, 1.0), (0, 2, 0, -1.0), (0, 0, 2, -1.0)]);
    let cases: [(&str, AlgebraicCurve, AffineChart, usize, i64); 4] = [
        ("conic", conic, AffineChart::default(), 2, 0),
        ("cubic a=1", smooth_cubic(), chart([0.1, 0.2, 1.0]), 1, 0),
        ("cubic a=3", smooth_cubic(), chart([0.3, 1.0, 0.1]), 3, 0),
        ("quartic a=0 (Trott)", trott(), AffineChart::default(), 0, 4),
    ];
    let mut failures = Vec::new();
    let mut slowest: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for (name, f, c, a, rho) in &cases {
        match log.run(name, f, c, s) {
            Ok((r, secs)) => {
                slowest = slowest.max(secs);
                worst = worst.max(worst_residual(f, &r));
                if r.a != *a || r.rho != *rho || r.delta_doubled() != 0 || secs >= GOLDEN_SECONDS {
                    failures.push(format!(
                        "{name}: a={} rho={} delta2={} {secs:.2}s",
                        r.a,
                        r.rho,
                        r.delta_doubled()
                    ));
                }
            }
            Err(e) => failures.push(e),
        }
    }
    let mut rng = suite::rng(2024);
    let mut seen = Vec::new();
    for (a, allowed) in [
        (0u32, &[4i64][..]),
        (2, &[0, 2, 4][..]),
        (4, &[0, 2, 4, 6, 8][..]),
    ] {
        let mut values = Vec::new();
        for k in 0..QUARTIC_SUITE {
            let f = suite::random_algebraic(&mut rng, 4, a);
            let name = format!("quartic a={a} #{k}");
            match log.run(&name, &f, &AffineChart::default(), s) {
                Ok((r, secs)) => {
                    slowest = slowest.max(secs);
                    worst = worst.max(worst_residual(&f, &r));
                    values.push(r.rho);
                    if r.a != a as usize
                        || !allowed.contains(&r.rho)
                        || r.delta_doubled() != 0
                        || secs >= GOLDEN_SECONDS
                    {
                        failures.push(format!(
                            "{name}: a={} rho={} delta2={} {secs:.2}s",
                            r.a,
                            r.rho,
                            r.delta_doubled()
                        ));
                    }
                }
                Err(e) => failures.push(e),
            }
        }
        values.sort_unstable();
        values.dedup();
        seen.push(format!("a={a}: rho in {values:?}"));
    }
    if worst >= RESIDUAL {
        failures.push(format!("feature residual {worst:.1e}"));
    }
    outcome(
        failures.is_empty(),
        format!(
            "conic/cubics rho=0, Trott rho=4, {} ; slowest {slowest:.2}s (< {GOLDEN_SECONDS}s), worst residual {worst:.1e} (< {RESIDUAL:.0e}){}",
            seen.join(", "),
            fail_list(&failures)
        ),
    )
}

fn fail_list(failures: &[String]) -> String {
    if failures.is_empty() {
        String::new()
    } else {
        format!(" ; failures: {}", failures.join("; "))
    }
}

fn affine_suite(s: &Settings, curves: &mut Vec<Curve>) -> Outcome {
    let start = Instant::now();
    let mut rng = suite::rng(1);
    let mut failures = Vec::new();
    for k in 0..AFFINE_CURVES {
        let c = suite::random_curve(&mut rng, Family::Affine);
        match verify_affine(&c, &AffineChart::default(), s) {
            Ok(r) if r.passed => curves.push(c),
            Ok(r) => failures.push(format!("#{k}: delta {}", r.delta)),
            Err(e) => failures.push(format!("#{k}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= AFFINE_SECONDS {
        failures.push(format!("runtime {secs:.1}s"));
    }
    outcome(
        failures.is_empty(),
        format!(
            "{}/{AFFINE_CURVES} curves with sigma = n + i/2 exactly, {secs:.1}s (< {AFFINE_SECONDS}s){}",
            AFFINE_CURVES - failures.len().min(AFFINE_CURVES),
            fail_list(&failures)
        ),
    )
}

fn projective_suite(s: &Settings, curves: &mut Vec<Curve>) -> Outcome {
    let mut rng = suite::rng(2);
    let mut failures = Vec::new();
    let (mut generated, mut rejected, mut accepted) = (0usize, 0usize, 0usize);
    let mut by_a = [0usize; 4];
    while accepted < PROJECTIVE_CURVES && generated < 3 * PROJECTIVE_CURVES {
        let a = 1 + generated % 3;
        generated += 1;
        let c = suite::random_curve(&mut rng, Family::Crossing(a));
        match verify_projective(&c, &AffineChart::default(), s) {
            Ok(r) => {
                accepted += 1;
                by_a[a] += 1;
                if r.passed {
                    curves.push(c);
                } else {
                    failures.push(format!("#{generated}: lhs {} rhs {}", r.lhs, r.rhs));
                }
            }
            Err(e) if e.is_genericity() => rejected += 1,
            Err(e) => failures.push(format!("#{generated}: {e}")),
        }
    }
    let rate = rejected as f64 / generated as f64;
    if rate >= MAX_REJECTION {
        failures.push(format!("rejection rate {:.0}%", 100.0 * rate));
    }
    if accepted < PROJECTIVE_CURVES {
        failures.push(format!("only {accepted} generic curves"));
    }
    outcome(
        failures.is_empty(),
        format!(
            "{accepted} generic curves (a=1: {}, a=2: {}, a=3: {}), full identity exact; rejected {rejected}/{generated} = {:.1}% (< {:.0}%){}",
            by_a[1],
            by_a[2],
            by_a[3],
            100.0 * rate,
            100.0 * MAX_REJECTION,
            fail_list(&failures)
        ),
    )
}

fn pencil_suite(s: &Settings, curves: &[Curve]) -> Outcome {
    let mut failures = Vec::new();
    let (mut lines, mut tangent_cases, mut redraws) = (0usize, 0usize, 0usize);
    for (k, c) in curves.iter().enumerate() {
        match verify_lemma31_random(
            c,
            &AffineChart::default(),
            LINES_PER_CURVE,
            100 + k as u64,
            s,
        ) {
            Ok(r) => {
                lines += r.inventory.pencils.len();
                redraws += r.diagnostics.len();
                tangent_cases += r
                    .inventory
                    .pencils
                    .iter()
                    .filter(|p| p.tangent_at_infinity)
                    .count();
                if !r.passed || r.inventory.pencils.iter().any(|p| p.sigma_l != p.expected) {
                    failures.push(format!("curve {k}"));
                }
            }
            Err(e) => failures.push(format!("curve {k}: {e}")),
        }
    }
    if tangent_cases < MIN_TANGENT_CASES {
        failures.push(format!("only {tangent_cases} tangent-at-infinity cases"));
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} curves x {LINES_PER_CURVE} random lines, {lines} pencils exact, {tangent_cases} with L tangent at infinity (>= {MIN_TANGENT_CASES}), {redraws} non-generic lines redrawn{}",
            curves.len(),
            fail_list(&failures)
        ),
    )
}

fn jump_suite(s: &Settings) -> Outcome {
    let mut rng = suite::rng(3);
    let families = [
        Family::Affine,
        Family::Crossing(1),
        Family::Crossing(2),
        Family::Crossing(3),
    ];
    let mut failures = Vec::new();
    let (mut checked, mut skipped, mut events) = (0usize, 0usize, 0usize);
    let mut k = 0;
    while checked < JUMP_CURVES && k < 3 * JUMP_CURVES {
        let c = suite::random_curve(&mut rng, families[k % 4]);
        k += 1;
        match verify_jump_catalog(&c, &AffineChart::default(), s) {
            Ok(r) => {
                checked += 1;
                let j = r.inventory.jumps.as_ref();
                events += j.map_or(0, |j| j.components.iter().map(|c| c.events.len()).sum());
                if !r.passed {
                    failures.push(format!("#{k}: {}", r.diagnostics.join(", ")));
                }
            }
            Err(e) if e.is_genericity() => skipped += 1,
            Err(e) => failures.push(format!("#{k}: {e}")),
        }
    }
    if checked < JUMP_CURVES {
        failures.push(format!("only {checked} curves checked"));
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checked} curves, {events} jump events all catalogued, per-component sums 0; {skipped} non-generic skipped{}",
            fail_list(&failures)
        ),
    )
}

fn klein(log: &mut AlgebraicLog, s: &Settings) -> Outcome {
    let mut failures = Vec::new();
    for l in [[0.1, 0.2, 1.0], [0.3, 1.0, 0.1]] {
        match log.run("cubic", &smooth_cubic(), &chart(l), s) {
            Ok((r, _)) if r.real_flexes == 3 && r.t0 == 0 => {}
            Ok((r, _)) => failures.push(format!("cubic {l:?}: i_R={} t0={}", r.real_flexes, r.t0)),
            Err(e) => failures.push(e),
        }
    }
    let mut trott_counts = Vec::new();
    for settings in [*s, s.refined()] {
        match log.run("Trott", &trott(), &AffineChart::default(), &settings) {
            Ok((r, _)) => {
                if r.bitangents.len() != 28 || 2 * r.t0 + r.real_flexes as i64 != 8 {
                    failures.push(format!(
                        "Trott: {} split, t0={} i_R={}",
                        r.bitangents.len(),
                        r.t0,
                        r.real_flexes
                    ));
                }
                trott_counts.push((r.bitangents.len(), r.t0, r.real_flexes));
            }
            Err(e) => failures.push(e),
        }
    }
    if trott_counts.len() == 2 && trott_counts[0] != trott_counts[1] {
        failures.push(format!("Trott changes at 2x resolution: {trott_counts:?}"));
    }
    outcome(
        failures.is_empty(),
        format!(
            "cubics i_R=3 t0=0; Trott (split, t0, i_R) = {:?} at 1x and 2x, t0 + i_R/2 = 4{}",
            trott_counts.first(),
            fail_list(&failures)
        ),
    )
}

fn parity(log: &AlgebraicLog) -> Outcome {
    let mut failures = Vec::new();
    for (name, d, r) in &log.reports {
        let (d, a) = (*d as i64, r.a as i64);
        let bound = (d - a) * (d - a - 2) / 2;
        if !r.rho_even() || r.rho < bound || bound < 0 || r.lower_bound != bound {
            failures.push(format!("{name}: rho={} bound={bound}", r.rho));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} algebraic reports, rho even and >= (d-a)(d-a-2)/2 >= 0 in all; {} exceptions{}",
            log.reports.len(),
            failures.len(),
            fail_list(&failures)
        ),
    )
}

fn integers(r: &VerificationReport) -> Vec<i64> {
    let mut v = vec![(2.0 * r.lhs) as i64, (2.0 * r.rhs) as i64];
    if let Some(c) = r.inventory.counts {
        v.extend([
            c.components as i64,
            c.a as i64,
            c.i,
            c.n,
            c.t,
            c.s,
            c.sigma,
            c.excess,
        ]);
    }
    if let Some(a) = &r.inventory.algebraic {
        v.extend([
            a.components as i64,
            a.a as i64,
            a.real_flexes as i64,
            a.t0,
            a.t,
            a.s,
            a.rho,
            a.rhs_doubled,
        ]);
    }
    v
}

fn determinism(s: &Settings, trig: &[Curve]) -> Outcome {
    let fine = s.refined();
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut run = |name: String, f: &dyn Fn(&Settings) -> curvelab::Result<VerificationReport>| {
        cases += 1;
        let (a, b, c) = (f(s), f(s), f(&fine));
        match (a, b, c) {
            (Ok(a), Ok(b), Ok(c)) => {
                if a.canonical_json() != b.canonical_json() {
                    failures.push(format!("{name}: rerun differs"));
                }
                if integers(&a) != integers(&c) || a.passed != c.passed {
                    failures.push(format!(
                        "{name}: {:?} vs {:?} at 2x",
                        integers(&a),
                        integers(&c)
                    ));
                }
            }
            (a, _, c) => failures.push(format!("{name}: {:?} / {:?}", a.err(), c.err())),
        }
    };
    for (k, c) in trig.iter().step_by(10).enumerate() {
        run(format!("trig #{k}"), &|s| {
            verify_projective(c, &AffineChart::default(), s)
        });
    }
    run("cubic a=3".into(), &|s| {
        curvelab::invariants::verify_algebraic(&smooth_cubic(), &chart([0.3, 1.0, 0.1]), s)
    });
    run("nodal cubic".into(), &|s| {
        curvelab::invariants::verify_nodal(&crunodal_cubic(), 1, &chart([0.1, 0.2, 1.0]), s)
    });
    run("acnodal cubic".into(), &|s| {
        curvelab::invariants::verify_nodal(&acnodal_cubic(), 1, &chart([0.1, 0.2, 1.0]), s)
    });
    let mut rng = suite::rng(4);
    for a in [2, 4] {
        let f = suite::random_algebraic(&mut rng, 4, a);
        run(format!("quartic a={a}"), &move |s| {
            curvelab::invariants::verify_algebraic(&f, &AffineChart::default(), s)
        });
    }
    outcome(
        failures.is_empty(),
        format!(
            "{cases} passing cases: identical canonical JSON on rerun, identical integers at 2x subdivision/scan/trace resolution{}",
            fail_list(&failures)
        ),
    )
}

fn main() -> ExitCode {
    let s = Settings::default();
    let t = s.tol;
    println!(
        "tolerances: pt={:e} flex={:e} newton={:e} polish={:e} generic={:e} glue={:e}; subdivision={} scan={} jump_grid={} trace={}",
        t.pt, t.flex, t.newton, t.polish, t.generic, t.glue, s.subdivision, s.scan_samples, s.jump_grid, s.trace_resolution
    );
    let mut log = AlgebraicLog::default();
    let mut affine = Vec::new();
    let mut crossing = Vec::new();
    let mut results = Vec::new();
    let mut timed = |label: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        println!(
            "[{}] {label} ({:.1}s): {}",
            if o.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
        results.push(o.passed);
    };
    timed("1 golden set", &mut || golden(&mut log, &s));
    timed("2 affine suite", &mut || affine_suite(&s, &mut affine));
    timed("3 projective suite", &mut || {
        projective_suite(&s, &mut crossing)
    });
    let both: Vec<Curve> = affine.iter().chain(&crossing).cloned().collect();
    timed("4 pencil suite", &mut || pencil_suite(&s, &both));
    timed("5 jump catalog", &mut || jump_suite(&s));
    timed("6 Klein coupling", &mut || klein(&mut log, &s));
    timed("7 parity and positivity", &mut || parity(&log));
    timed("8 determinism and resolution", &mut || {
        determinism(&s, &both)
    });
    let failed = results.iter().filter(|p| !**p).count();
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
