use serde::{Deserialize, Serialize};

use crate::config::{Settings, Tolerances};
use crate::error::{CurveError, Result};
use crate::geometry::{
    orient_with_tol, AffineChart, AffinePoint, HomogeneousPoint, ProjectiveLine,
};
use crate::roots::scan_roots;

use super::infinity::crossings;
use super::intersect::{cross_coincidences, self_coincidences, DualLoop, PrimalLoop};
use super::Curve;

/// A parameter value on a given component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRef {
    pub component: usize,
    pub t: f64,
}

impl ParamRef {
    pub fn new(component: usize, t: f64) -> Self {
        Self { component, t }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flex {
    pub at: ParamRef,
    pub point: HomogeneousPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub first: ParamRef,
    pub second: ParamRef,
    pub point: HomogeneousPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BitangentKind {
    T,
    S,
}

impl BitangentKind {
    pub fn sign(self) -> i8 {
        match self {
            BitangentKind::T => 1,
            BitangentKind::S => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bitangent {
    pub line: ProjectiveLine,
    pub first: ParamRef,
    pub second: ParamRef,
    pub kind: BitangentKind,
    pub sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedCount {
    pub t: i64,
    pub s: i64,
    pub sigma: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSet {
    pub flexes: Vec<Flex>,
    pub nodes: Vec<Node>,
    pub bitangents: Vec<Bitangent>,
}

impl FeatureSet {
    pub fn i(&self) -> i64 {
        self.flexes.len() as i64
    }

    pub fn n(&self) -> i64 {
        self.nodes.len() as i64
    }

    pub fn signed_count(&self) -> SignedCount {
        signed_count_sigma(&self.bitangents)
    }
}

fn by_param(a: &ParamRef, b: &ParamRef) -> std::cmp::Ordering {
    (a.component, a.t).partial_cmp(&(b.component, b.t)).unwrap()
}

/// Sign changes of `det(P, P', P'')` on every component.
pub fn find_flexes(curve: &Curve, settings: &Settings) -> Result<Vec<Flex>> {
    let tol = settings.tol.flex;
    let mut out = Vec::new();
    for (j, c) in curve.components().iter().enumerate() {
        let f = |t: f64| c.jet(t).flex_det_normalized();
        let ts = c.grid(settings.scan_samples);
        let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
        let scan = scan_roots(&ts, &vals, f, tol);
        if let Some(&(t, _)) = scan.near_touches.first() {
            return Err(CurveError::DegenerateFlex {
                component: j,
                t: c.wrap(t),
            });
        }
        let period = c.period();
        let h = 1e-6 * period;
        let mut roots: Vec<f64> = Vec::new();
        for t in scan.roots {
            let t = c.wrap(t);
            if roots.iter().any(|&r| c.param_distance(r, t) < 1e-9) {
                continue;
            }
            let slope = (f(t + h) - f(t - h)).abs() / (2.0 * h) * period;
            if slope < tol {
                return Err(CurveError::DegenerateFlex { component: j, t });
            }
            roots.push(t);
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for t in roots {
            out.push(Flex {
                at: ParamRef::new(j, t),
                point: HomogeneousPoint::from_vec(&c.point(t))?,
            });
        }
    }
    Ok(out)
}

/// Transverse self-intersections of the curve.
pub fn find_nodes(curve: &Curve, settings: &Settings) -> Result<Vec<Node>> {
    let comps = curve.components();
    let mut pairs = Vec::new();
    for j in 0..comps.len() {
        for (s, t) in self_coincidences(&PrimalLoop(&comps[j]), settings.subdivision, &settings.tol)
        {
            pairs.push((ParamRef::new(j, s), ParamRef::new(j, t)));
        }
        for k in j + 1..comps.len() {
            let found = cross_coincidences(
                &PrimalLoop(&comps[j]),
                &PrimalLoop(&comps[k]),
                settings.subdivision,
                &settings.tol,
            );
            for (s, t) in found {
                pairs.push((ParamRef::new(j, s), ParamRef::new(k, t)));
            }
        }
    }
    let mut out = Vec::new();
    for (first, second) in pairs {
        let a = comps[first.component].jet(first.t);
        let b = comps[second.component].jet(second.t);
        let la = a.tangent_line().normalize();
        let lb = b.tangent_line().normalize();
        if la.cross(&lb).norm() < settings.tol.generic {
            return Err(CurveError::TangentialIntersection(
                first.component,
                first.t,
                second.component,
                second.t,
            ));
        }
        out.push(Node {
            point: HomogeneousPoint::from_vec(&a.p)?,
            first,
            second,
        });
    }
    out.sort_by(|x, y| by_param(&x.first, &y.first).then(by_param(&x.second, &y.second)));
    Ok(out)
}

/// Exterior (T) or interior (S) type of the bitangent tangent at `first` and
/// `second`, read off in the affine chart.
pub fn classify_bitangent(
    curve: &Curve,
    first: &ParamRef,
    second: &ParamRef,
    chart: &AffineChart,
    tol: &Tolerances,
) -> Result<BitangentKind> {
    let a = curve.component(first.component).jet(first.t);
    let b = curve.component(second.component).jet(second.t);
    let ja = chart.map_jet(&a.p, &a.d1, &a.d2, tol.pt)?;
    let jb = chart.map_jet(&b.p, &b.d1, &b.d2, tol.pt)?;
    let p1 = AffinePoint::from(ja[0]);
    let p2 = AffinePoint::from(jb[0]);
    let chord = (p2 - p1).norm();
    if chord == 0.0 {
        return Err(CurveError::AmbiguousSide);
    }
    // Offsets along the acceleration, rescaled to the chord length; only the
    // component normal to the bitangent matters for the side.
    let side = |p: &AffinePoint, acc: nalgebra::Vector2<f64>| -> Result<i8> {
        let len = acc.norm();
        if len == 0.0 {
            return Err(CurveError::AmbiguousSide);
        }
        let offset = p + acc * (chord / len);
        match orient_with_tol(&p1, &p2, &offset, tol.generic * chord * chord) {
            0 => Err(CurveError::AmbiguousSide),
            s => Ok(s),
        }
    };
    let s1 = side(&p1, ja[2])?;
    let s2 = side(&p2, jb[2])?;
    Ok(if s1 == s2 {
        BitangentKind::T
    } else {
        BitangentKind::S
    })
}

/// All bitangents, classified in `chart`.
pub fn find_bitangents(
    curve: &Curve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<Vec<Bitangent>> {
    let tol = &settings.tol;
    let comps = curve.components();
    let mut pairs = Vec::new();
    for j in 0..comps.len() {
        for (s, t) in self_coincidences(&DualLoop(&comps[j]), settings.subdivision, tol) {
            pairs.push((ParamRef::new(j, s), ParamRef::new(j, t)));
        }
        for k in j + 1..comps.len() {
            let found = cross_coincidences(
                &DualLoop(&comps[j]),
                &DualLoop(&comps[k]),
                settings.subdivision,
                tol,
            );
            for (s, t) in found {
                pairs.push((ParamRef::new(j, s), ParamRef::new(k, t)));
            }
        }
    }
    let at_infinity: Vec<_> = crossings(curve, chart, settings)?
        .into_iter()
        .map(|r| comps[r.component].point(r.t).normalize())
        .collect();
    let mut out: Vec<Bitangent> = Vec::new();
    for (first, second) in pairs {
        let a = comps[first.component].jet(first.t);
        let b = comps[second.component].jet(second.t);
        if a.p.normalize().cross(&b.p.normalize()).norm() < tol.generic {
            return Err(CurveError::TangentialIntersection(
                first.component,
                first.t,
                second.component,
                second.t,
            ));
        }
        for (r, jet) in [(&first, &a), (&second, &b)] {
            if jet.flex_det_normalized().abs() < tol.generic {
                return Err(CurveError::NonGenericTangent(format!(
                    "bitangent touches at a flex (component {}, t = {})",
                    r.component, r.t
                )));
            }
        }
        let line = a.tangent_line().normalize();
        if at_infinity.iter().any(|q| line.dot(q).abs() < tol.generic) {
            return Err(CurveError::InfinityTangency);
        }
        if out
            .iter()
            .any(|d| d.line.vec().cross(&line).norm() < tol.generic)
        {
            return Err(CurveError::TripleTangent);
        }
        let kind = classify_bitangent(curve, &first, &second, chart, tol)?;
        out.push(Bitangent {
            line: ProjectiveLine::from_vec(&line)?,
            first,
            second,
            kind,
            sign: kind.sign(),
        });
    }
    out.sort_by(|x, y| by_param(&x.first, &y.first).then(by_param(&x.second, &y.second)));
    Ok(out)
}

/// `(t, s, t - s)` for a list of classified bitangents.
pub fn signed_count_sigma(bitangents: &[Bitangent]) -> SignedCount {
    let t = bitangents
        .iter()
        .filter(|b| b.kind == BitangentKind::T)
        .count() as i64;
    let s = bitangents.len() as i64 - t;
    SignedCount { t, s, sigma: t - s }
}

/// Flexes, nodes and classified bitangents of a validated curve.
pub fn analyze(curve: &Curve, chart: &AffineChart, settings: &Settings) -> Result<FeatureSet> {
    curve.validate(settings)?;
    let flexes = find_flexes(curve, settings)?;
    let nodes = find_nodes(curve, settings)?;
    let bitangents = find_bitangents(curve, chart, settings)?;
    // A flex tangent through a point of C ∩ L∞ breaks the infinity bookkeeping.
    let at_infinity = crossings(curve, chart, settings)?;
    // The miss is measured as the angle it subtends at the flex, so flexes
    // that merely lie close to L∞ are not rejected.
    for f in &flexes {
        let jet = curve.component(f.at.component).jet(f.at.t);
        let line = jet.tangent_line().normalize();
        let p = jet.p.normalize();
        for r in &at_infinity {
            let q = curve.component(r.component).point(r.t).normalize();
            if line.dot(&q).abs() < settings.tol.generic * p.cross(&q).norm() {
                return Err(CurveError::NonGenericTangent(format!(
                    "flex tangent at component {}, t = {} passes through a point of C ∩ L∞",
                    f.at.component, f.at.t
                )));
            }
        }
    }
    let normal = chart.normal();
    for node in &nodes {
        if normal.dot(&node.point.vec()).abs() < settings.tol.generic {
            return Err(CurveError::NodeOnInfinity);
        }
    }
    Ok(FeatureSet {
        flexes,
        nodes,
        bitangents,
    })
}
