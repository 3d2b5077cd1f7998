//! Real locus of `F = 0`: singular points, seeds on line pencils, and
//! continuation on the unit sphere.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4x3, Vector4};
use serde::{Deserialize, Serialize};

use crate::config::Settings;
use crate::curve::SampledComponent;
use crate::error::{CurveError, Result};
use crate::geometry::{HomogeneousPoint, Vec3};
use crate::roots::scan_roots;

use super::poly::PolyJet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    /// Two real branches cross.
    Hyperbolic,
    /// The real point is isolated (complex conjugate branches).
    Isolated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealNode {
    pub point: HomogeneousPoint,
    pub kind: NodeKind,
}

/// Orthonormal basis of the plane orthogonal to `q`.
pub(crate) fn complement(q: &Vec3) -> (Vec3, Vec3) {
    let mut axis = 0;
    for i in 1..3 {
        if q[i].abs() < q[axis].abs() {
            axis = i;
        }
    }
    let mut seed = Vec3::zeros();
    seed[axis] = 1.0;
    let q = q.normalize();
    let a = (seed - q * q.dot(&seed)).normalize();
    let b = q.cross(&a);
    (a, b)
}

fn restricted_hessian(jet: &PolyJet, q: &Vec3) -> (Matrix2<f64>, Vec3, Vec3, f64) {
    let h = jet.hessian(q);
    let (a, b) = complement(q);
    let m = Matrix2::new(
        a.dot(&(h * a)),
        a.dot(&(h * b)),
        b.dot(&(h * a)),
        b.dot(&(h * b)),
    );
    (m, a, b, h.norm())
}

/// Real singular points of `F = 0`, one representative per projective point.
pub fn singular_points(jet: &PolyJet, settings: &Settings) -> Result<Vec<RealNode>> {
    let scale = jet.poly().scale();
    let r = (settings.trace_resolution / 4).max(32);
    let mut found: Vec<Vec3> = Vec::new();
    for axis in 0..3 {
        let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
        let point = |iu: usize, iv: usize| {
            let mut q = Vec3::zeros();
            q[axis] = 1.0;
            q[b] = -1.0 + 2.0 * iu as f64 / r as f64;
            q[c] = -1.0 + 2.0 * iv as f64 / r as f64;
            q.normalize()
        };
        let vals: Vec<Vec<f64>> = (0..=r)
            .map(|iu| {
                (0..=r)
                    .map(|iv| jet.grad(&point(iu, iv)).norm_squared())
                    .collect()
            })
            .collect();
        for iu in 0..=r {
            for iv in 0..=r {
                let v = vals[iu][iv];
                let mut is_min = true;
                for du in -1i64..=1 {
                    for dv in -1i64..=1 {
                        let (u2, v2) = (iu as i64 + du, iv as i64 + dv);
                        if (du, dv) == (0, 0) || u2 < 0 || v2 < 0 || u2 > r as i64 || v2 > r as i64
                        {
                            continue;
                        }
                        if vals[u2 as usize][v2 as usize] < v {
                            is_min = false;
                        }
                    }
                }
                if !is_min {
                    continue;
                }
                if let Some(q) = polish_singular(jet, point(iu, iv), scale) {
                    if !found
                        .iter()
                        .any(|p| (p - q).norm() < 1e-7 || (p + q).norm() < 1e-7)
                    {
                        found.push(q);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for q in found {
        let (m, _, _, hn) = restricted_hessian(jet, &q);
        let det = m.determinant() / (hn * hn).max(f64::MIN_POSITIVE);
        let kind = if det < -settings.tol.generic {
            NodeKind::Hyperbolic
        } else if det > settings.tol.generic {
            NodeKind::Isolated
        } else {
            return Err(CurveError::NodeClassificationAmbiguous([q[0], q[1], q[2]]));
        };
        out.push(RealNode {
            point: HomogeneousPoint::from_vec(&q)?,
            kind,
        });
    }
    out.sort_by(|a, b| a.point.coords().partial_cmp(&b.point.coords()).unwrap());
    Ok(out)
}

/// Gauss-Newton on `∇F(q) = 0, |q|² = 1`.
fn polish_singular(jet: &PolyJet, mut q: Vec3, scale: f64) -> Option<Vec3> {
    for _ in 0..40 {
        let g = jet.grad(&q);
        let h = jet.hessian(&q);
        let res = Vector4::new(g[0], g[1], g[2], q.norm_squared() - 1.0);
        let jm = Matrix4x3::from_fn(|i, k| if i < 3 { h[(i, k)] } else { 2.0 * q[k] });
        let jt = jm.transpose();
        let step = (jt * jm).try_inverse()? * (jt * res);
        q -= step;
        if step.norm() < 1e-15 {
            break;
        }
    }
    let q = q.normalize();
    (jet.grad(&q).norm() <= 1e-9 * scale).then_some(q)
}

/// Real points of `F = 0` on a projective line given by two orthonormal
/// spanning vectors, as angles `φ ∈ [0, π)` of `cos φ u + sin φ v`.
pub(crate) fn line_roots(
    jet: &PolyJet,
    u: &Vec3,
    v: &Vec3,
    samples: usize,
) -> (Vec<f64>, Vec<f64>) {
    let scale = jet.poly().scale();
    let g = |phi: f64| jet.eval(&(u * phi.cos() + v * phi.sin())) / scale;
    let ts: Vec<f64> = (0..=samples)
        .map(|i| PI * i as f64 / samples as f64)
        .collect();
    let vals: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
    let scan = scan_roots(&ts, &vals, g, 1e-9);
    let mut roots: Vec<f64> = scan
        .roots
        .into_iter()
        .map(|t| if t >= PI { t - PI } else { t })
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
    if roots.len() >= 2 && (roots[0] + PI - roots[roots.len() - 1]) < 1e-10 {
        roots.pop();
    }
    (roots, scan.near_touches.into_iter().map(|x| x.0).collect())
}

/// Number of real points on the line `n·p = 0`, with the double point at
/// `tangency` (if given) divided out and counted once.
pub(crate) fn line_point_count(
    jet: &PolyJet,
    n: &Vec3,
    tangency: Option<&Vec3>,
    samples: usize,
) -> Result<usize> {
    let (u, v) = match tangency {
        Some(p) => {
            let u = p.normalize();
            (u, n.normalize().cross(&u))
        }
        None => complement(n),
    };
    let scale = jet.poly().scale();
    let g = |phi: f64| {
        let f = jet.eval(&(u * phi.cos() + v * phi.sin())) / scale;
        if tangency.is_some() {
            let s = phi.sin();
            f / (s * s)
        } else {
            f
        }
    };
    // Stay off φ = 0 (the tangency point) when deflating.
    let (lo, hi) = if tangency.is_some() {
        (1e-3, PI - 1e-3)
    } else {
        (0.0, PI)
    };
    let ts: Vec<f64> = (0..=samples)
        .map(|i| lo + (hi - lo) * i as f64 / samples as f64)
        .collect();
    let vals: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
    let scan = scan_roots(&ts, &vals, g, 1e-9);
    if !scan.near_touches.is_empty() {
        return Err(CurveError::NonGenericTangent(
            "line is nearly tangent to the real locus".into(),
        ));
    }
    let mut roots = scan.roots;
    if tangency.is_none()
        && roots.len() >= 2
        && roots[0] < 1e-12
        && (PI - roots[roots.len() - 1]) < 1e-12
    {
        roots.pop();
    }
    Ok(roots.len() + usize::from(tangency.is_some()))
}

/// Seeds on the real locus: real roots of `F` on three pencils of lines.
fn seeds(jet: &PolyJet, settings: &Settings) -> Vec<Vec3> {
    let lines = (settings.trace_resolution / 4).max(16);
    let samples = 32 * jet.degree() as usize;
    let mut out = Vec::new();
    for m in 0..3 {
        let mut e = Vec3::zeros();
        e[m] = 1.0;
        let (a, b) = (Vec3::ith((m + 1) % 3, 1.0), Vec3::ith((m + 2) % 3, 1.0));
        for l in 0..lines {
            let theta = PI * (l as f64 + 0.5) / lines as f64;
            let w = a * theta.cos() + b * theta.sin();
            let (roots, _) = line_roots(jet, &e, &w, samples);
            out.extend(roots.into_iter().map(|phi| e * phi.cos() + w * phi.sin()));
        }
    }
    out
}

/// Largest turning angle (geodesic curvature times step) allowed per step.
const TURN: f64 = 0.004;

struct Tracer<'a> {
    jet: &'a PolyJet,
    scale: f64,
    tol: f64,
    nodes: Vec<Vec3>,
}

impl Tracer<'_> {
    /// Unit tangent of the real locus at `q`, oriented along `reference`.
    fn field(&self, q: &Vec3, reference: &Vec3) -> Option<Vec3> {
        let y = q.cross(&self.jet.grad(q));
        let n = y.norm();
        if !(n > 0.0) {
            return None;
        }
        let x = y / n;
        Some(if x.dot(reference) < 0.0 { -x } else { x })
    }

    /// Acceleration of the arclength parametrization at `q` moving along `x`.
    fn acceleration(&self, q: &Vec3, x: &Vec3) -> Vec3 {
        let g = self.jet.grad(q);
        let h = self.jet.hessian(q);
        let yr = q.cross(&g);
        let n = yr.norm();
        let xr = yr / n;
        let s = if xr.dot(x) < 0.0 { -1.0 } else { 1.0 };
        let dy = x.cross(&g) + q.cross(&(h * x));
        s * (dy - xr * xr.dot(&dy)) / n
    }

    /// Moves `q` back onto `F = 0` along the sphere.
    fn correct(&self, mut q: Vec3) -> Option<Vec3> {
        q = q.normalize();
        for _ in 0..8 {
            let f = self.jet.eval(&q);
            if f.abs() <= 1e-3 * self.tol * self.scale {
                return Some(q);
            }
            let g = self.jet.grad(&q);
            let gt = g - q * g.dot(&q);
            let gn = gt.norm_squared();
            if !(gn > 0.0) {
                return None;
            }
            q = (q - gt * (f / gn)).normalize();
        }
        (self.jet.eval(&q).abs() <= self.tol * self.scale).then_some(q)
    }

    fn rk4(&self, q: &Vec3, x: &Vec3, h: f64) -> Option<(Vec3, Vec3)> {
        let k1 = *x;
        let k2 = self.field(&(q + k1 * (0.5 * h)), &k1)?;
        let k3 = self.field(&(q + k2 * (0.5 * h)), &k2)?;
        let k4 = self.field(&(q + k3 * h), &k3)?;
        let next = self.correct(q + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))?;
        let x_next = self.field(&next, &k4)?;
        Some((next, x_next))
    }

    /// Branch of a hyperbolic node `qn` best aligned with `x`, with its
    /// acceleration.
    fn branch(&self, qn: &Vec3, x: &Vec3) -> (Vec3, Vec3) {
        let (m, a, b, _) = restricted_hessian(self.jet, qn);
        // Null directions of the quadratic form m.
        let (p, r, s) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
        let disc = (r * r - p * s).max(0.0).sqrt();
        let dirs = if p.abs() > s.abs() {
            [((-r + disc) / p, 1.0), ((-r - disc) / p, 1.0)]
        } else {
            [(1.0, (-r + disc) / s), (1.0, (-r - disc) / s)]
        };
        let mut best = Vec3::zeros();
        for (c1, c2) in dirs {
            let d = (a * c1 + b * c2).normalize();
            if d.dot(x).abs() > best.dot(x).abs() {
                best = d;
            }
        }
        if best.dot(x) < 0.0 {
            best = -best;
        }
        let normal = qn.cross(&best);
        let hess = self.jet.hessian(qn);
        let t3 = self.jet.third(qn, &best, &best).dot(&best);
        let alpha = -t3 / (3.0 * best.dot(&(hess * normal)));
        (best, -qn + normal * alpha)
    }

    fn trace_from(
        &self,
        q0: Vec3,
        h: f64,
        max_steps: usize,
        glue: f64,
    ) -> Result<SampledComponent> {
        let gap = |msg: &str| {
            CurveError::TracingGapError(format!("{msg} (seed {:?})", [q0[0], q0[1], q0[2]]))
        };
        let x0 = self
            .field(&q0, &q0.cross(&self.jet.grad(&q0)))
            .ok_or_else(|| gap("zero gradient at seed"))?;
        let mut knots = vec![0.0];
        let mut ps = vec![q0];
        let mut d1s = vec![x0];
        let mut d2s = vec![self.acceleration(&q0, &x0)];
        let (mut q, mut x) = (q0, x0);
        let mut s = 0.0;
        for _ in 0..max_steps {
            // Keep the turning angle per step small where the locus bends sharply.
            let kappa = (d2s[d2s.len() - 1] + q).norm();
            let step = h.min(TURN / kappa.max(f64::MIN_POSITIVE));
            // Close the loop on +q0 (two-sided) or -q0 (one-sided).
            if s > 2.5 * h {
                for sign in [1.0, -1.0] {
                    let target = q0 * sign;
                    let ahead = (target - q).dot(&x);
                    let off = ((target - q) - x * ahead).norm();
                    if ahead > 0.0 && ahead <= 1.5 * step && off < 0.5 * step {
                        let last = self
                            .closing_step(&q, &x, &target, ahead)
                            .ok_or_else(|| gap("closing failed"))?;
                        let (end, x_end) = self
                            .rk4(&q, &x, last)
                            .ok_or_else(|| gap("closing failed"))?;
                        if (end - target).norm() > glue || x_end.dot(&(x0 * sign)) < 0.9 {
                            return Err(gap("loop does not close"));
                        }
                        knots.push(s + last);
                        ps.push(target);
                        d1s.push(x0 * sign);
                        d2s.push(d2s[0] * sign);
                        return SampledComponent::new(knots, ps, d1s, d2s, sign);
                    }
                }
            }
            // Pass through a hyperbolic node along the branch we are on.
            let mut crossed = false;
            for qn in self.nodes.iter().flat_map(|n| [*n, -n]) {
                let dv = qn - q;
                let dist = dv.norm();
                if dist < 1.5 * h && dv.dot(&x) > 0.7 * dist {
                    let (b, c) = self.branch(&qn, &x);
                    s += dist;
                    knots.push(s);
                    ps.push(qn);
                    d1s.push(b);
                    d2s.push(c);
                    let out = self
                        .correct(qn + b * h + c * (0.5 * h * h))
                        .ok_or_else(|| gap("lost the branch after a node"))?;
                    let x_out = self
                        .field(&out, &b)
                        .ok_or_else(|| gap("lost the branch after a node"))?;
                    s += h;
                    q = out;
                    x = x_out;
                    knots.push(s);
                    ps.push(q);
                    d1s.push(x);
                    d2s.push(self.acceleration(&q, &x));
                    crossed = true;
                    break;
                }
            }
            if crossed {
                continue;
            }
            let (next, x_next) = self.rk4(&q, &x, step).ok_or_else(|| gap("step failed"))?;
            s += step;
            q = next;
            x = x_next;
            knots.push(s);
            ps.push(q);
            d1s.push(x);
            d2s.push(self.acceleration(&q, &x));
        }
        Err(gap("component did not close"))
    }

    /// Step length that lands on `target`, by a few secant iterations on the
    /// along-track residual.
    fn closing_step(&self, q: &Vec3, x: &Vec3, target: &Vec3, guess: f64) -> Option<f64> {
        let resid = |h: f64| self.rk4(q, x, h).map(|(p, _)| (target - p).dot(x));
        let (mut h0, mut h1) = (guess, guess * 1.001);
        let (mut r0, mut r1) = (resid(h0)?, resid(h1)?);
        for _ in 0..12 {
            if r1 == r0 {
                break;
            }
            let h2 = h1 - r1 * (h1 - h0) / (r1 - r0);
            h0 = h1;
            r0 = r1;
            h1 = h2;
            r1 = resid(h1)?;
            if r1.abs() < 1e-15 {
                break;
            }
        }
        (h1 > 0.0).then_some(h1)
    }
}

/// Traces every connected component of the real locus.
pub fn trace_components(
    jet: &PolyJet,
    nodes: &[RealNode],
    settings: &Settings,
) -> Result<Vec<SampledComponent>> {
    let h = 2.0 * PI / settings.trace_resolution as f64;
    let hyperbolic: Vec<Vec3> = nodes
        .iter()
        .filter(|n| n.kind == NodeKind::Hyperbolic)
        .map(|n| n.point.vec())
        .collect();
    let all_nodes: Vec<Vec3> = nodes.iter().map(|n| n.point.vec()).collect();
    let tracer = Tracer {
        jet,
        scale: jet.poly().scale(),
        tol: settings.tol.trace,
        nodes: hyperbolic,
    };
    let max_steps = 64 * settings.trace_resolution;
    let mut comps: Vec<SampledComponent> = Vec::new();
    for seed in seeds(jet, settings) {
        let seed = seed.normalize();
        if all_nodes
            .iter()
            .any(|n| (n - seed).norm() < 4.0 * h || (n + seed).norm() < 4.0 * h)
        {
            continue;
        }
        let covered = comps.iter().any(|c| {
            c.samples()
                .iter()
                .any(|p| (p - seed).norm() < 0.8 * h || (p + seed).norm() < 0.8 * h)
        });
        if covered {
            continue;
        }
        let Some(q0) = tracer.correct(seed) else {
            continue;
        };
        comps.push(tracer.trace_from(q0, h, max_steps, settings.tol.glue)?);
    }
    if comps.is_empty() {
        return Err(CurveError::EmptyRealLocus);
    }
    Ok(comps)
}
