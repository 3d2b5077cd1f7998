//! Real algebraic curves `F(x, y, z) = 0`: tracing, real flexes, split
//! bitangents, Klein's formula and the signed count `ρ`.

mod poly;
mod trace;

pub use poly::{HomogeneousPoly, Monomial, PolyJet};
pub use trace::{singular_points, NodeKind, RealNode};

use nalgebra::{Matrix3, Matrix6, Vector6};
use serde::{Deserialize, Serialize};

use crate::config::Settings;
use crate::curve::{
    analyze, infinity_profile, Bitangent, Curve, CurveComponent, FeatureSet, InfinityProfile,
};
use crate::error::{CurveError, Result};
use crate::geometry::{AffineChart, HomogeneousPoint, ProjectiveLine, Vec3};
use crate::roots::scan_roots;

use trace::{line_point_count, trace_components};

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicCurve {
    jet: PolyJet,
}

impl AlgebraicCurve {
    pub fn new(poly: HomogeneousPoly) -> Result<Self> {
        if poly.degree() < 2 {
            return Err(CurveError::SchemaError(
                "algebraic curves need degree at least 2".into(),
            ));
        }
        Ok(Self {
            jet: PolyJet::new(poly),
        })
    }

    pub fn degree(&self) -> u32 {
        self.jet.degree()
    }

    pub fn poly(&self) -> &HomogeneousPoly {
        self.jet.poly()
    }

    pub fn jet(&self) -> &PolyJet {
        &self.jet
    }

    pub fn eval(&self, p: &HomogeneousPoint) -> f64 {
        self.jet.eval(&p.vec())
    }

    pub fn grad(&self, p: &HomogeneousPoint) -> Vec3 {
        self.jet.grad(&p.vec())
    }

    pub fn hessian_det(&self, p: &HomogeneousPoint) -> f64 {
        self.jet.hessian_det(&p.vec())
    }

    /// Image of the curve under `p -> m p`.
    pub fn transformed(&self, m: &Matrix3<f64>) -> Result<Self> {
        let inv = m
            .try_inverse()
            .ok_or_else(|| CurveError::SchemaError("singular transformation".into()))?;
        Self::new(self.poly().compose_linear(&inv))
    }
}

/// Traced real locus plus the real singular points.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTrace {
    pub curve: Curve,
    pub nodes: Vec<RealNode>,
}

/// Traces the real locus. With `allow_nodes = false` any real singular point
/// is an error.
pub fn trace_real_curve(
    curve: &AlgebraicCurve,
    allow_nodes: bool,
    settings: &Settings,
) -> Result<RealTrace> {
    let nodes = singular_points(&curve.jet, settings)?;
    if !allow_nodes {
        if let Some(n) = nodes.first() {
            return Err(CurveError::SingularPointHit(n.point.coords()));
        }
    }
    let comps = trace_components(&curve.jet, &nodes, settings)?;
    let curve = Curve::new(comps.into_iter().map(CurveComponent::from).collect())?;
    Ok(RealTrace { curve, nodes })
}

/// Real flexes: sign changes of the Hessian determinant along the trace,
/// polished on `F = det H = 0`. Cross-checked against the parametric count.
pub fn real_flexes(
    curve: &AlgebraicCurve,
    trace: &RealTrace,
    features: &FeatureSet,
    settings: &Settings,
) -> Result<Vec<HomogeneousPoint>> {
    let jet = &curve.jet;
    let mut count = 0;
    for c in trace.curve.components() {
        let ts = c.grid(settings.scan_samples);
        let f = |t: f64| {
            let p = c.point(t).normalize();
            jet.hessian_det(&p)
        };
        let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
        // The Hessian determinant also vanishes at singular points, which each
        // branch through a node passes.
        count += scan_roots(&ts, &vals, f, 0.0)
            .roots
            .iter()
            .filter(|&&t| {
                let p = c.point(t).normalize();
                !trace.nodes.iter().any(|n| {
                    let v = n.point.vec();
                    (p - v).norm().min((p + v).norm()) < 1e-6
                })
            })
            .count();
    }
    if count != features.flexes.len() {
        return Err(CurveError::FlexMismatch {
            algebraic: count,
            parametric: features.flexes.len(),
        });
    }
    let scale = curve.poly().scale();
    let mut out = Vec::new();
    for fl in &features.flexes {
        let mut q = fl.point.vec();
        let hscale = jet.hessian(&q).norm().powi(3).max(f64::MIN_POSITIVE);
        let mut converged = false;
        for _ in 0..30 {
            let r = Vec3::new(
                jet.eval(&q) / scale,
                jet.hessian_det(&q) / hscale,
                q.norm_squared() - 1.0,
            );
            let jm = Matrix3::from_rows(&[
                (jet.grad(&q) / scale).transpose(),
                (jet.hessian_det_grad(&q) / hscale).transpose(),
                (q * 2.0).transpose(),
            ]);
            let Some(step) = jm.lu().solve(&r) else { break };
            q -= step;
            if step.norm() < 1e-14 {
                converged = true;
                break;
            }
        }
        let residual = (jet.eval(&q) / scale).abs();
        if !converged && residual > settings.tol.polish {
            return Err(CurveError::PolishDivergence(fl.point.coords().to_vec()));
        }
        if residual > settings.tol.polish
            || (q.normalize() - fl.point.vec())
                .norm()
                .min((q.normalize() + fl.point.vec()).norm())
                > settings.tol.glue
        {
            return Err(CurveError::PolishDivergence(fl.point.coords().to_vec()));
        }
        out.push(HomogeneousPoint::from_vec(&q)?);
    }
    Ok(out)
}

/// A split bitangent with its algebraically polished tangency points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitBitangent {
    pub bitangent: Bitangent,
    pub first_point: HomogeneousPoint,
    pub second_point: HomogeneousPoint,
    pub polished_line: ProjectiveLine,
    pub residual: f64,
    /// Distance between the polished line and the one found on the trace.
    pub deviation: f64,
}

/// Bitangents of the traced curve, polished on the algebraic system
/// `F(P) = F(Q) = 0`, `∇F(P)·Q = ∇F(Q)·P = 0`.
pub fn split_bitangents(
    curve: &AlgebraicCurve,
    trace: &RealTrace,
    features: &FeatureSet,
    settings: &Settings,
) -> Result<Vec<SplitBitangent>> {
    let jet = &curve.jet;
    let scale = curve.poly().scale();
    let mut out = Vec::new();
    for b in &features.bitangents {
        let mut p = trace
            .curve
            .component(b.first.component)
            .point(b.first.t)
            .normalize();
        let mut q = trace
            .curve
            .component(b.second.component)
            .point(b.second.t)
            .normalize();
        let start: Vec<f64> = p.iter().chain(q.iter()).copied().collect();
        let residual_of = |p: &Vec3, q: &Vec3| {
            let gp = jet.grad(p);
            let gq = jet.grad(q);
            Vector6::new(
                jet.eval(p) / scale,
                jet.eval(q) / scale,
                p.norm_squared() - 1.0,
                q.norm_squared() - 1.0,
                gp.dot(q) / scale,
                gq.dot(p) / scale,
            )
        };
        for _ in 0..30 {
            let r = residual_of(&p, &q);
            let gp = jet.grad(&p) / scale;
            let gq = jet.grad(&q) / scale;
            let hpq = jet.hessian(&p) * q / scale;
            let hqp = jet.hessian(&q) * p / scale;
            let rows = [
                [gp[0], gp[1], gp[2], 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, gq[0], gq[1], gq[2]],
                [2.0 * p[0], 2.0 * p[1], 2.0 * p[2], 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 2.0 * q[0], 2.0 * q[1], 2.0 * q[2]],
                [hpq[0], hpq[1], hpq[2], gp[0], gp[1], gp[2]],
                [gq[0], gq[1], gq[2], hqp[0], hqp[1], hqp[2]],
            ];
            let jm = Matrix6::from_fn(|i, k| rows[i][k]);
            let Some(step) = jm.lu().solve(&r) else { break };
            p -= Vec3::new(step[0], step[1], step[2]);
            q -= Vec3::new(step[3], step[4], step[5]);
            if step.norm() < 1e-15 {
                break;
            }
        }
        let residual = residual_of(&p, &q).amax();
        if !(residual <= settings.tol.polish)
            || p.normalize().cross(&q.normalize()).norm() < settings.tol.generic
        {
            return Err(CurveError::PolishDivergence(start));
        }
        let line = ProjectiveLine::from_vec(&p.cross(&q))?;
        let deviation = line.distance(&b.line);
        if deviation > settings.tol.glue {
            return Err(CurveError::PolishDivergence(start));
        }
        out.push(SplitBitangent {
            bitangent: b.clone(),
            first_point: HomogeneousPoint::from_vec(&p)?,
            second_point: HomogeneousPoint::from_vec(&q)?,
            polished_line: line,
            residual,
            deviation,
        });
    }
    Ok(out)
}

/// `t₀ = d(d-2)/2 - i_R/2` for smooth curves.
pub fn klein_t0(degree: u32, real_flexes: usize) -> Result<i64> {
    let d = degree as i64;
    let twice = d * (d - 2) - real_flexes as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(CurveError::KleinViolation(twice));
    }
    Ok(twice / 2)
}

/// `t₀` from the nodal Klein formula `d + i + 2t₀ = d(d-1) - 2N + 2n₀`.
pub fn klein_t0_nodal(
    degree: u32,
    real_flexes: usize,
    total_nodes: u32,
    isolated: usize,
) -> Result<i64> {
    let d = degree as i64;
    let twice = d * (d - 1) - 2 * total_nodes as i64 + 2 * isolated as i64 - d - real_flexes as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(CurveError::KleinViolation(twice));
    }
    Ok(twice / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodalCounts {
    /// Total number of nodes, real and complex (caller supplied).
    pub total: u32,
    pub real: usize,
    pub isolated: usize,
    pub hyperbolic: usize,
}

/// Everything measured on an algebraic curve, plus both sides of the signed count identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicReport {
    pub degree: u32,
    pub components: usize,
    pub a: usize,
    pub real_flexes: usize,
    pub t0: i64,
    pub t: i64,
    pub s: i64,
    pub sigma: i64,
    pub rho: i64,
    /// Right-hand side, doubled so that it stays an integer.
    pub rhs_doubled: i64,
    pub excess: i64,
    pub lower_bound: i64,
    pub nodal: Option<NodalCounts>,
    pub flexes: Vec<HomogeneousPoint>,
    pub bitangents: Vec<SplitBitangent>,
    pub infinity: InfinityProfile,
    pub real_nodes: Vec<RealNode>,
}

impl AlgebraicReport {
    /// `2ρ - rhs_doubled`; zero when the identity holds.
    pub fn delta_doubled(&self) -> i64 {
        2 * self.rho - self.rhs_doubled
    }

    pub fn rho_even(&self) -> bool {
        self.rho % 2 == 0
    }

    pub fn rho_bounded(&self) -> bool {
        self.rho >= self.lower_bound && self.lower_bound >= 0
    }
}

/// Measures every quantity entering the signed count without asserting the
/// identity. `total_nodes = None` means smooth mode.
pub fn algebraic_report(
    curve: &AlgebraicCurve,
    chart: &AffineChart,
    total_nodes: Option<u32>,
    settings: &Settings,
) -> Result<AlgebraicReport> {
    let trace = trace_real_curve(curve, total_nodes.is_some(), settings)?;
    let features = analyze(&trace.curve, chart, settings)?;
    let profile = infinity_profile(&trace.curve, chart, settings)?;
    let jet = &curve.jet;
    let samples = 64 * curve.degree() as usize;
    let a_alg = line_point_count(jet, &chart.normal(), None, samples)?;
    if a_alg != profile.a {
        return Err(CurveError::TracingGapError(format!(
            "line at infinity meets the real locus {a_alg} times, trace crosses it {} times",
            profile.a
        )));
    }
    for e in &profile.entries {
        let count = line_point_count(jet, &e.tangent.vec(), Some(&e.point.vec()), samples)?;
        if count != e.count {
            return Err(CurveError::TracingGapError(format!(
                "tangent at infinity meets the real locus {count} times, trace says {}",
                e.count
            )));
        }
    }
    let hyperbolic = trace
        .nodes
        .iter()
        .filter(|n| n.kind == NodeKind::Hyperbolic)
        .count();
    let isolated = trace.nodes.len() - hyperbolic;
    if features.nodes.len() != hyperbolic {
        return Err(CurveError::TracingGapError(format!(
            "trace has {} self-crossings but {hyperbolic} real hyperbolic nodes were found",
            features.nodes.len()
        )));
    }
    let flexes = real_flexes(curve, &trace, &features, settings)?;
    let bitangents = split_bitangents(curve, &trace, &features, settings)?;
    let d = curve.degree() as i64;
    let a = profile.a as i64;
    let t0 = match total_nodes {
        None => klein_t0(curve.degree(), flexes.len())?,
        Some(n) => klein_t0_nodal(curve.degree(), flexes.len(), n, isolated)?,
    };
    let sc = features.signed_count();
    let excess = profile.excess();
    let nodal_term = match total_nodes {
        None => 0,
        Some(n) => 2 * trace.nodes.len() as i64 - 2 * n as i64,
    };
    let rhs_doubled = nodal_term + d * (d - 2) + a * (a - 2) - 2 * excess;
    Ok(AlgebraicReport {
        degree: curve.degree(),
        components: trace.curve.components().len(),
        a: profile.a,
        real_flexes: flexes.len(),
        t0,
        t: sc.t,
        s: sc.s,
        sigma: sc.sigma,
        rho: t0 + sc.sigma,
        rhs_doubled,
        excess,
        lower_bound: (d - a) * (d - a - 2) / 2,
        nodal: total_nodes.map(|total| NodalCounts {
            total,
            real: trace.nodes.len(),
            isolated,
            hyperbolic,
        }),
        flexes,
        bitangents,
        infinity: profile,
        real_nodes: trace.nodes,
    })
}

fn checked(report: AlgebraicReport) -> Result<AlgebraicReport> {
    if report.delta_doubled() != 0 {
        return Err(CurveError::IdentityViolation {
            lhs: report.rho as f64,
            rhs: report.rhs_doubled as f64 / 2.0,
        });
    }
    Ok(report)
}

/// The signed count `ρ = t₀ + σ` of a smooth curve, checked against its closed form.
pub fn rho(
    curve: &AlgebraicCurve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<AlgebraicReport> {
    checked(algebraic_report(curve, chart, None, settings)?)
}

/// Nodal version of [`rho`]; `total_nodes` counts real and complex nodes.
pub fn verify_nodal(
    curve: &AlgebraicCurve,
    total_nodes: u32,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<AlgebraicReport> {
    checked(algebraic_report(curve, chart, Some(total_nodes), settings)?)
}
