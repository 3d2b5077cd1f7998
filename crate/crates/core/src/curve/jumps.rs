use serde::{Deserialize, Serialize};

use crate::config::Settings;
use crate::error::{CurveError, Result};
use crate::geometry::{AffineChart, HomogeneousPoint};

use super::features::{analyze, BitangentKind, FeatureSet};
use super::infinity::{infinity_profile, line_hits, InfinityProfile};
use super::pencil::tangents_through_point;
use super::{Curve, ParamRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpKind {
    Node,
    Flex,
    BitangentT,
    BitangentS,
    InfinityCrossing,
    TangentThroughPT,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub at: ParamRef,
    pub kind: JumpKind,
    pub jump: i64,
}

/// Samples of `f_j` and the events of one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentJumps {
    pub samples: Vec<(f64, i64)>,
    pub events: Vec<JumpEvent>,
    pub total: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpProfile {
    pub components: Vec<ComponentJumps>,
    /// Sum of all catalogued jumps over all components.
    pub grand_total: i64,
}

/// Every parameter where some `f_j` is expected to jump, with the jump value.
pub fn jump_catalog(
    curve: &Curve,
    features: &FeatureSet,
    profile: &InfinityProfile,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<Vec<JumpEvent>> {
    let mut events = Vec::new();
    for f in &features.flexes {
        events.push(JumpEvent {
            at: f.at,
            kind: JumpKind::Flex,
            jump: -2,
        });
    }
    for n in &features.nodes {
        for at in [n.first, n.second] {
            events.push(JumpEvent {
                at,
                kind: JumpKind::Node,
                jump: -2,
            });
        }
    }
    for b in &features.bitangents {
        let (kind, jump) = match b.kind {
            BitangentKind::T => (JumpKind::BitangentT, 2),
            BitangentKind::S => (JumpKind::BitangentS, -2),
        };
        for at in [b.first, b.second] {
            events.push(JumpEvent { at, kind, jump });
        }
    }
    for e in &profile.entries {
        events.push(JumpEvent {
            at: e.at,
            kind: JumpKind::InfinityCrossing,
            jump: 2 * (e.count as i64 - 1),
        });
        let p = HomogeneousPoint::from_vec(&curve.component(e.at.component).point(e.at.t))?;
        for d in tangents_through_point(curve, &p, chart, &e.tangent, settings)? {
            if d.sign != 0 {
                events.push(JumpEvent {
                    at: d.at,
                    kind: JumpKind::TangentThroughPT,
                    jump: 2 * d.sign as i64,
                });
            }
        }
    }
    events.sort_by(|a, b| {
        (a.at.component, a.at.t)
            .partial_cmp(&(b.at.component, b.at.t))
            .unwrap()
    });
    Ok(events)
}

/// `f_j(t)`: points of `C` on the forward tangent ray minus points on the
/// backward ray, the tangency point itself excluded.
fn ray_balance(
    curve: &Curve,
    at: ParamRef,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<i64> {
    let jet = curve.component(at.component).jet(at.t);
    let [x, v, _] = chart.map_jet(&jet.p, &jet.d1, &jet.d2, settings.tol.pt)?;
    let line = jet.tangent_line().normalize();
    let (hits, _) = line_hits(curve, &line, Some(&at), settings);
    let mut f = 0;
    for h in hits {
        let q = curve.component(h.component).point(h.t);
        let Ok(y) = chart.map_vec(&q, settings.tol.pt) else {
            continue;
        };
        let lambda = (y.coords - x).dot(&v);
        f += if lambda > 0.0 { 1 } else { -1 };
    }
    Ok(f)
}

/// Samples each `f_j` on a grid and checks that every change between
/// neighbouring samples is accounted for by catalogued events.
pub fn jump_profile(
    curve: &Curve,
    chart: &AffineChart,
    settings: &Settings,
) -> Result<JumpProfile> {
    let features = analyze(curve, chart, settings)?;
    let profile = infinity_profile(curve, chart, settings)?;
    let events = jump_catalog(curve, &features, &profile, chart, settings)?;
    let mut components = Vec::new();
    for (j, c) in curve.components().iter().enumerate() {
        let period = c.period();
        let mine: Vec<JumpEvent> = events
            .iter()
            .filter(|e| e.at.component == j)
            .cloned()
            .collect();
        let n = settings.jump_grid.max(4);
        let keep_off = 1e-5 * period;
        let mut grid: Vec<f64> = Vec::with_capacity(n);
        for i in 0..n {
            let mut t = period * (i as f64 + 0.5) / n as f64;
            while mine.iter().any(|e| c.param_distance(e.at.t, t) < keep_off) {
                t += 2.0 * keep_off;
            }
            grid.push(t);
        }
        let f = |t: f64| ray_balance(curve, ParamRef::new(j, c.wrap(t)), chart, settings);
        let mut samples = Vec::with_capacity(n);
        for &t in &grid {
            samples.push((t, f(t)?));
        }
        for i in 0..n {
            let (a, fa) = samples[i];
            let (b, fb) = if i + 1 < n {
                samples[i + 1]
            } else {
                (samples[0].0 + period, samples[0].1)
            };
            let mut inside: Vec<(f64, i64)> = Vec::new();
            for e in &mine {
                for shift in [0.0, period] {
                    let t = e.at.t + shift;
                    if t > a && t <= b {
                        inside.push((t, e.jump));
                    }
                }
            }
            inside.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            check_interval(j, a, fa, b, fb, &inside, &f)?;
        }
        let total = mine.iter().map(|e| e.jump).sum();
        components.push(ComponentJumps {
            samples,
            events: mine,
            total,
        });
    }
    let grand_total = components.iter().map(|c| c.total).sum();
    Ok(JumpProfile {
        components,
        grand_total,
    })
}

fn check_interval<F: Fn(f64) -> Result<i64>>(
    component: usize,
    a: f64,
    fa: i64,
    b: f64,
    fb: i64,
    events: &[(f64, i64)],
    f: &F,
) -> Result<()> {
    let expected: i64 = events.iter().map(|e| e.1).sum();
    // Split between the two middle events so each event is checked on its own.
    if events.len() >= 2 {
        let k = events.len() / 2;
        let (lo, hi) = (events[k - 1].0, events[k].0);
        if hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid)?;
            check_interval(component, a, fa, mid, fm, &events[..k], f)?;
            return check_interval(component, mid, fm, b, fb, &events[k..], f);
        }
    }
    if fb - fa == expected {
        return Ok(());
    }
    Err(CurveError::UncataloguedJump {
        component,
        from: a,
        to: b,
        observed: fb - fa,
        expected,
    })
}
