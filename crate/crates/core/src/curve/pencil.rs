use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::Settings;
use crate::error::{CurveError, Result};
use crate::geometry::{meet, AffineChart, HomogeneousPoint, ProjectiveLine, Vec3};
use crate::roots::scan_roots;

use super::infinity::crossings;
use super::{Curve, ParamRef};

/// A tangent line through `p_L` and its sign `ε_L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilTangent {
    pub at: ParamRef,
    pub line: ProjectiveLine,
    pub sign: i8,
}

/// Angle of a line through `p` in the pencil at `p`, modulo π.
struct Pencil {
    b1: Vec3,
    b2: Vec3,
}

impl Pencil {
    fn new(p: &Vec3) -> Self {
        let mut axis = 0;
        for i in 1..3 {
            if p[i].abs() < p[axis].abs() {
                axis = i;
            }
        }
        let mut seed = Vec3::zeros();
        seed[axis] = 1.0;
        let b1 = (seed - p * p.dot(&seed)).normalize();
        let b2 = p.cross(&b1);
        Self { b1, b2 }
    }

    fn angle(&self, line: &Vec3) -> f64 {
        line.dot(&self.b2).atan2(line.dot(&self.b1)).rem_euclid(PI)
    }
}

/// Tangent lines to the curve passing through `p`, with `ε_L` relative to the
/// line `line` and the chart's line at infinity (both through `p`).
pub fn tangents_through_point(
    curve: &Curve,
    p: &HomogeneousPoint,
    chart: &AffineChart,
    line: &ProjectiveLine,
    settings: &Settings,
) -> Result<Vec<PencilTangent>> {
    let tol = settings.tol.generic;
    let pv = p.vec();
    let lv = line.vec();
    let nv = chart.normal();
    if lv.dot(&pv).abs() > 1e3 * tol || nv.dot(&pv).abs() > 1e3 * tol {
        return Err(CurveError::NonGenericTangent(
            "p must lie on L and on L∞".into(),
        ));
    }
    // If p is on the curve the tangent there is L itself; divide out its double zero.
    let on_curve: Option<ParamRef> = crossings(curve, chart, settings)?.into_iter().find(|r| {
        curve
            .component(r.component)
            .point(r.t)
            .normalize()
            .cross(&pv)
            .norm()
            < 1e3 * tol
    });
    if let Some(r) = &on_curve {
        let d = curve
            .component(r.component)
            .jet(r.t)
            .tangent_line()
            .normalize();
        if d.cross(&lv).norm() > 1e3 * tol {
            return Err(CurveError::NonGenericTangent(
                "L meets C on L∞ without being tangent there".into(),
            ));
        }
    }
    let pencil = Pencil::new(&pv);
    let theta_l = pencil.angle(&lv);
    let theta_inf = pencil.angle(&nv);
    let mut out = Vec::new();
    if let Some(r) = on_curve {
        out.push(PencilTangent {
            at: r,
            line: *line,
            sign: 0,
        });
    }
    for (k, c) in curve.components().iter().enumerate() {
        let period = c.period();
        let w = PI / period;
        let pinned = on_curve.filter(|r| r.component == k).map(|r| r.t);
        let g = |u: f64| -> f64 {
            let jet = c.jet(u);
            let v = jet.tangent_line().dot(&pv) / (jet.p.norm() * jet.d1.norm());
            match pinned {
                Some(t0) => {
                    let s = (w * (u - t0)).sin();
                    v / (s * s).max(1e-300)
                }
                None => v,
            }
        };
        let ts = c.grid(settings.scan_samples);
        let mut vals: Vec<f64> = ts.iter().map(|&u| g(u)).collect();
        if let Some(t0) = pinned {
            // Replace samples next to the removed zero by their neighbours'
            // sign-preserving limit to avoid 0/0 noise.
            for (i, &u) in ts.iter().enumerate() {
                if c.param_distance(u, t0) < 2.0 * period / settings.scan_samples as f64 {
                    let jet = c.jet(t0);
                    let limit = jet.d1.cross(&jet.d2).dot(&pv)
                        / (2.0 * w * w * jet.p.norm() * jet.d1.norm());
                    let turns = ((u - t0) / period).round() as i64;
                    let flip = if c.lift_sign() < 0.0 && turns.rem_euclid(2) == 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    vals[i] = flip * limit;
                }
            }
        }
        let scan = scan_roots(&ts, &vals, g, tol);
        if let Some(&(u, _)) = scan.near_touches.first() {
            return Err(CurveError::NonSimpleTangency {
                component: k,
                t: c.wrap(u),
            });
        }
        let mut seen: Vec<f64> = Vec::new();
        for u in scan.roots {
            let u = c.wrap(u);
            if seen.iter().any(|&r| c.param_distance(r, u) < 1e-9) {
                continue;
            }
            if let Some(t0) = pinned {
                if c.param_distance(u, t0) < settings.tol.diag {
                    continue;
                }
            }
            seen.push(u);
            let jet = c.jet(u);
            if jet.flex_det_normalized().abs() < tol {
                return Err(CurveError::NonSimpleTangency { component: k, t: u });
            }
            let d = jet.tangent_line().normalize();
            let sign = if d.cross(&lv).norm() < tol {
                0
            } else {
                // Moving along the curve, the tangent line rotates in the
                // pencil towards p × P''.
                let alpha = pv.cross(&jet.p).dot(&d);
                let turn = alpha * d.cross(&pv.cross(&jet.d2)).dot(&pv);
                if turn.abs() < tol * jet.p.norm() * jet.d2.norm() {
                    return Err(CurveError::NonSimpleTangency { component: k, t: u });
                }
                let dir = turn.signum();
                let theta_d = pencil.angle(&d);
                let to_l = (dir * (theta_l - theta_d)).rem_euclid(PI);
                let to_inf = (dir * (theta_inf - theta_d)).rem_euclid(PI);
                if to_l < to_inf {
                    1
                } else {
                    -1
                }
            };
            out.push(PencilTangent {
                at: ParamRef::new(k, u),
                line: ProjectiveLine::from_vec(&d)?,
                sign,
            });
        }
    }
    out.sort_by(|a, b| {
        (a.at.component, a.at.t)
            .partial_cmp(&(b.at.component, b.at.t))
            .unwrap()
    });
    Ok(out)
}

/// `σ_L(C) = Σ ε_L(D)` over tangents `D` through `p_L = L ∩ L∞`.
pub fn sigma_l(
    curve: &Curve,
    line: &ProjectiveLine,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<i64> {
    let p = meet(line, chart.line_at_infinity())?;
    let tangents = tangents_through_point(curve, &p, chart, line, settings)?;
    Ok(tangents.iter().map(|t| t.sign as i64).sum())
}
