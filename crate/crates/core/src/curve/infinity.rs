use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::Settings;
use crate::error::{CurveError, Result};
use crate::geometry::{AffineChart, HomogeneousPoint, ProjectiveLine, Vec3};
use crate::roots::scan_roots;

use super::{Curve, ParamRef};

/// A point of `C ∩ L∞` with its tangent `T` and the number of points of `C ∩ T`
/// (the tangency point counted once).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfinityEntry {
    pub at: ParamRef,
    pub point: HomogeneousPoint,
    pub tangent: ProjectiveLine,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfinityProfile {
    pub a: usize,
    pub entries: Vec<InfinityEntry>,
}

impl InfinityProfile {
    /// `Σ_T (|C ∩ T| - 1)`.
    pub fn excess(&self) -> i64 {
        self.entries.iter().map(|e| e.count as i64 - 1).sum()
    }
}

/// Transverse crossings of the curve with the chart's line at infinity.
pub(crate) fn crossings(
    curve: &Curve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<Vec<ParamRef>> {
    let n = chart.normal();
    let tol = settings.tol.generic;
    let mut out = Vec::new();
    for (j, c) in curve.components().iter().enumerate() {
        let period = c.period();
        let height = |t: f64| {
            let p = c.point(t);
            n.dot(&p) / p.norm()
        };
        let ts = c.grid(settings.scan_samples);
        let vals: Vec<f64> = ts.iter().map(|&t| height(t)).collect();
        let scan = scan_roots(&ts, &vals, height, tol);
        if let Some(&(t, _)) = scan.near_touches.first() {
            return Err(CurveError::NonTransverseInfinity { component: j, t });
        }
        let mut roots: Vec<f64> = Vec::new();
        for t in scan.roots {
            let t = c.wrap(t);
            if roots.iter().any(|&r| c.param_distance(r, t) < 1e-9) {
                continue;
            }
            let jet = c.jet(t);
            let slope = n.dot(&jet.d1).abs() / jet.d1.norm();
            if slope < tol {
                return Err(CurveError::NonTransverseInfinity { component: j, t });
            }
            roots.push(t);
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let _ = period;
        out.extend(roots.into_iter().map(|t| ParamRef { component: j, t }));
    }
    Ok(out)
}

/// Parameters where the curve crosses `line`, plus near-tangencies.
///
/// If `tangent_at` is given, the line is tangent to the curve there and the
/// double zero at that parameter is divided out before scanning.
pub(crate) fn line_hits(
    curve: &Curve,
    line: &Vec3,
    tangent_at: Option<&ParamRef>,
    settings: &Settings,
) -> (Vec<ParamRef>, Vec<ParamRef>) {
    let mut hits = Vec::new();
    let mut touches = Vec::new();
    for (k, c) in curve.components().iter().enumerate() {
        let period = c.period();
        let sign = c.lift_sign();
        let w = PI / period;
        let pinned = tangent_at
            .filter(|r| r.component == k)
            .map(|r| (r.t, c.jet(r.t)));
        let f = |u: f64| -> f64 {
            let Some((t0, jet0)) = pinned else {
                let p = c.point(u);
                return line.dot(&p) / p.norm();
            };
            let delta = u - t0;
            let turns = (delta / period).round();
            let local = delta - turns * period;
            let s = (w * local).sin();
            if local.abs() < 1e-4 * period {
                // Taylor expansion of <line, P> around the tangency.
                let flip = if sign < 0.0 && (turns as i64).rem_euclid(2) == 1 {
                    -1.0
                } else {
                    1.0
                };
                let num = 0.5 * line.dot(&jet0.d2) + line.dot(&jet0.d3) * local / 6.0;
                let scale = if local == 0.0 {
                    w * w
                } else {
                    (s / local).powi(2)
                };
                flip * num / (scale * jet0.p.norm())
            } else {
                let p = c.point(u);
                line.dot(&p) / (p.norm() * s * s)
            }
        };
        let ts = c.grid(settings.scan_samples);
        let vals: Vec<f64> = ts.iter().map(|&u| f(u)).collect();
        let scan = scan_roots(&ts, &vals, f, settings.tol.generic);
        let mut seen: Vec<f64> = Vec::new();
        for u in scan.roots {
            let u = c.wrap(u);
            if seen.iter().any(|&r| c.param_distance(r, u) < 1e-9) {
                continue;
            }
            seen.push(u);
            hits.push(ParamRef { component: k, t: u });
        }
        touches.extend(scan.near_touches.into_iter().map(|(u, _)| ParamRef {
            component: k,
            t: c.wrap(u),
        }));
    }
    hits.sort_by(|a, b| (a.component, a.t).partial_cmp(&(b.component, b.t)).unwrap());
    (hits, touches)
}

/// Transverse intersection parameters of the curve with a line.
pub fn line_crossings(
    curve: &Curve,
    line: &ProjectiveLine,
    settings: &Settings,
) -> Result<Vec<ParamRef>> {
    let (hits, touches) = line_hits(curve, &line.vec(), None, settings);
    if let Some(t) = touches.first() {
        return Err(CurveError::NonGenericTangent(format!(
            "line {:?} is nearly tangent at component {}, t = {}",
            line.coeffs(),
            t.component,
            t.t
        )));
    }
    Ok(hits)
}

/// `a = |C ∩ L∞|` and, for each crossing, the tangent `T` and `|C ∩ T|`.
pub fn infinity_profile(
    curve: &Curve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<InfinityProfile> {
    let tol = settings.tol.generic;
    let mut entries = Vec::new();
    for at in crossings(curve, chart, settings)? {
        let c = curve.component(at.component);
        let jet = c.jet(at.t);
        if jet.flex_det_normalized().abs() < tol {
            return Err(CurveError::NonGenericTangent(format!(
                "crossing with L∞ at component {}, t = {} is a flex",
                at.component, at.t
            )));
        }
        let tangent = jet.tangent_line().normalize();
        let (hits, touches) = line_hits(curve, &tangent, Some(&at), settings);
        if let Some(t) = touches.first() {
            return Err(CurveError::NonGenericTangent(format!(
                "tangent at infinity is tangent again at component {}, t = {}",
                t.component, t.t
            )));
        }
        entries.push(InfinityEntry {
            point: HomogeneousPoint::from_vec(&jet.p)?,
            tangent: ProjectiveLine::from_vec(&tangent)?,
            count: hits.len() + 1,
            at,
        });
    }
    Ok(InfinityProfile {
        a: entries.len(),
        entries,
    })
}
