//! Subdivision + Gauss-Newton search for coincidences `V(s) ∥ W(t)` between
//! closed loops of unit vectors.
//!
//! Nodes are self-intersections of the lifted curve, bitangents are
//! self-intersections of the dual curve `t -> P × P'`, so both reduce to the
//! same search. For a loop against itself the cross product is divided by
//! `sin(π (t - s) / T)`, which removes the trivial zero on the diagonal.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::config::Tolerances;
use crate::geometry::Vec3;

use super::{unit_with_derivative, CurveComponent};

pub(crate) trait UnitLoop: Sync {
    fn period(&self) -> f64;
    fn lift_sign(&self) -> f64;
    fn eval(&self, t: f64) -> (Vec3, Vec3);
}

pub(crate) struct PrimalLoop<'a>(pub &'a CurveComponent);

impl UnitLoop for PrimalLoop<'_> {
    fn period(&self) -> f64 {
        self.0.period()
    }
    fn lift_sign(&self) -> f64 {
        self.0.lift_sign()
    }
    fn eval(&self, t: f64) -> (Vec3, Vec3) {
        let j = self.0.jet(t);
        unit_with_derivative(j.p, j.d1)
    }
}

/// The dual curve `t -> P × P'` (tangent lines); its lift is always periodic.
pub(crate) struct DualLoop<'a>(pub &'a CurveComponent);

impl UnitLoop for DualLoop<'_> {
    fn period(&self) -> f64 {
        self.0.period()
    }
    fn lift_sign(&self) -> f64 {
        1.0
    }
    fn eval(&self, t: f64) -> (Vec3, Vec3) {
        let j = self.0.jet(t);
        unit_with_derivative(j.p.cross(&j.d1), j.p.cross(&j.d2))
    }
}

fn sign_bits(v: &Vec3) -> u8 {
    let mut bits = 0u8;
    for c in 0..3 {
        let x = v[c];
        if x >= 0.0 {
            bits |= 1 << (2 * c);
        }
        if x <= 0.0 {
            bits |= 2 << (2 * c);
        }
    }
    bits
}

const ALL_SIGNS: u8 = 0b11_1111;

struct Samples {
    v: Vec<Vec3>,
    dv: Vec<Vec3>,
    ts: Vec<f64>,
}

fn sample(l: &dyn UnitLoop, n: usize) -> Samples {
    let period = l.period();
    let ts: Vec<f64> = (0..=n).map(|i| period * i as f64 / n as f64).collect();
    let (v, dv) = ts.iter().map(|&t| l.eval(t)).unzip();
    Samples { v, dv, ts }
}

/// Value of the diagonal-divided cross product at grid nodes `(i, j)`.
fn self_value(s: &Samples, i: usize, j: usize, n: usize, period: f64, lift_sign: f64) -> Vec3 {
    if i == j {
        return s.v[i].cross(&s.dv[i]) * (period / PI);
    }
    if (i == 0 && j == n) || (i == n && j == 0) {
        return -s.v[0].cross(&s.dv[0]) * (lift_sign * period / PI);
    }
    let d = (PI * (j as f64 - i as f64) / n as f64).sin();
    s.v[i].cross(&s.v[j]) / d
}

/// All parameter pairs `s < t` (mod period) with `V(s) ∥ V(t)`, excluding the
/// diagonal guard band.
pub(crate) fn self_coincidences(l: &dyn UnitLoop, n: usize, tol: &Tolerances) -> Vec<(f64, f64)> {
    let period = l.period();
    let lift_sign = l.lift_sign();
    let s = sample(l, n);
    const CHUNK: usize = 32;
    let starts: Vec<usize> = (0..n.saturating_sub(1)).step_by(CHUNK).collect();
    let candidates: Vec<(usize, usize)> = starts
        .par_iter()
        .flat_map_iter(|&r0| {
            let r1 = (r0 + CHUNK).min(n - 1);
            let rows: Vec<Vec<u8>> = (r0..(r1 + 2).min(n + 1))
                .map(|i| {
                    (0..=n)
                        .map(|j| sign_bits(&self_value(&s, i, j, n, period, lift_sign)))
                        .collect()
                })
                .collect();
            let mut found = Vec::new();
            for i in r0..r1 {
                let local = i - r0;
                for j in i.saturating_sub(2)..n - 1 {
                    let mut bits = 0u8;
                    for a in 0..3 {
                        let row = &rows[local + a];
                        bits |= row[j] | row[j + 1] | row[j + 2];
                    }
                    if bits == ALL_SIGNS {
                        found.push((i, j));
                    }
                }
            }
            found.into_iter()
        })
        .collect();
    let h = period / n as f64;
    let polished: Vec<(f64, f64)> = candidates
        .par_iter()
        .filter_map(|&(i, j)| polish(l, l, true, s.ts[i + 1], s.ts[j + 1], 4.0 * h, tol))
        .collect();
    let guard = tol.diag;
    let accepted = polished.into_iter().filter_map(|(a, b)| {
        let a = a.rem_euclid(period);
        let b = b.rem_euclid(period);
        let d = (a - b).abs();
        if d.min(period - d) < guard {
            None
        } else if a < b {
            Some((a, b))
        } else {
            Some((b, a))
        }
    });
    dedup(accepted, period, period, true)
}

/// All parameter pairs `(s, t)` with `A(s) ∥ B(t)` for two different loops.
pub(crate) fn cross_coincidences(
    a: &dyn UnitLoop,
    b: &dyn UnitLoop,
    n: usize,
    tol: &Tolerances,
) -> Vec<(f64, f64)> {
    let sa = sample(a, n);
    let sb = sample(b, n);
    let pa = a.period();
    let pb = b.period();
    const CHUNK: usize = 32;
    let starts: Vec<usize> = (0..n.saturating_sub(1)).step_by(CHUNK).collect();
    let candidates: Vec<(usize, usize)> = starts
        .par_iter()
        .flat_map_iter(|&r0| {
            let r1 = (r0 + CHUNK).min(n - 1);
            let rows: Vec<Vec<u8>> = (r0..(r1 + 2).min(n + 1))
                .map(|i| {
                    (0..=n)
                        .map(|j| sign_bits(&sa.v[i].cross(&sb.v[j])))
                        .collect()
                })
                .collect();
            let mut found = Vec::new();
            for i in r0..r1 {
                let local = i - r0;
                for j in 0..n - 1 {
                    let mut bits = 0u8;
                    for k in 0..3 {
                        let row = &rows[local + k];
                        bits |= row[j] | row[j + 1] | row[j + 2];
                    }
                    if bits == ALL_SIGNS {
                        found.push((i, j));
                    }
                }
            }
            found.into_iter()
        })
        .collect();
    let step = 4.0 * (pa.max(pb)) / n as f64;
    let polished: Vec<(f64, f64)> = candidates
        .par_iter()
        .filter_map(|&(i, j)| polish(a, b, false, sa.ts[i + 1], sb.ts[j + 1], step, tol))
        .collect();
    dedup(
        polished
            .into_iter()
            .map(|(s, t)| (s.rem_euclid(pa), t.rem_euclid(pb))),
        pa,
        pb,
        false,
    )
}

fn periodic_gap(x: f64, y: f64, period: f64) -> f64 {
    let d = (x - y).rem_euclid(period);
    d.min(period - d)
}

fn dedup<I: Iterator<Item = (f64, f64)>>(
    roots: I,
    pa: f64,
    pb: f64,
    symmetric: bool,
) -> Vec<(f64, f64)> {
    const TOL: f64 = 1e-7;
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut all: Vec<(f64, f64)> = roots.collect();
    all.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for r in all {
        let dup = out.iter().any(|o| {
            (periodic_gap(o.0, r.0, pa) < TOL && periodic_gap(o.1, r.1, pb) < TOL)
                || (symmetric
                    && periodic_gap(o.0, r.1, pa) < TOL
                    && periodic_gap(o.1, r.0, pb) < TOL)
        });
        if !dup {
            out.push(r);
        }
    }
    out
}

/// Gauss-Newton on `A(s) × B(t) = 0` (divided by the diagonal factor when
/// `same`), started at `(s, t)` with steps capped at `max_step`.
fn polish(
    a: &dyn UnitLoop,
    b: &dyn UnitLoop,
    same: bool,
    mut s: f64,
    mut t: f64,
    max_step: f64,
    tol: &Tolerances,
) -> Option<(f64, f64)> {
    let period = a.period();
    let k = PI / period;
    for _ in 0..60 {
        let (va, da) = a.eval(s);
        let (vb, db) = b.eval(t);
        let f = va.cross(&vb);
        let mut fs = da.cross(&vb);
        let mut ft = va.cross(&db);
        let mut r = f;
        if same {
            let d = (k * (t - s)).sin();
            if d.abs() < 1e-9 {
                return None;
            }
            let dd = k * (k * (t - s)).cos();
            fs = (fs * d + f * dd) / (d * d);
            ft = (ft * d - f * dd) / (d * d);
            r = f / d;
        }
        let converged = f.norm() <= tol.newton;
        let (a11, a12, a22) = (fs.dot(&fs), fs.dot(&ft), ft.dot(&ft));
        let (g1, g2) = (fs.dot(&r), ft.dot(&r));
        let det = a11 * a22 - a12 * a12;
        if !(det.abs() > 1e-300) {
            return converged.then_some((s, t));
        }
        let mut ds = -(a22 * g1 - a12 * g2) / det;
        let mut dt = -(a11 * g2 - a12 * g1) / det;
        let len = (ds * ds + dt * dt).sqrt();
        if !len.is_finite() {
            return None;
        }
        if len > max_step {
            ds *= max_step / len;
            dt *= max_step / len;
        }
        s += ds;
        t += dt;
        if converged && len < 1e-13 * period {
            break;
        }
    }
    let (va, _) = a.eval(s);
    let (vb, _) = b.eval(t);
    (va.cross(&vb).norm() <= tol.newton).then_some((s, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::TrigComponent;

    #[test]
    fn limacon_has_one_self_crossing() {
        // x = (1 + 2 cos t) cos t, y = (1 + 2 cos t) sin t.
        let c: CurveComponent =
            TrigComponent::affine(&[1.0, 1.0, 1.0], &[0.0; 3], &[0.0; 3], &[0.0, 1.0, 1.0])
                .unwrap()
                .into();
        let roots = self_coincidences(&PrimalLoop(&c), 512, &Tolerances::default());
        assert_eq!(roots.len(), 1, "{roots:?}");
        let (s, t) = roots[0];
        // 1 + 2 cos t = 0 at t = 2π/3 and 4π/3: both map to the origin.
        assert!((s - 2.0 * PI / 3.0).abs() < 1e-10);
        assert!((t - 4.0 * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn ellipses_cross_four_times() {
        let a: CurveComponent =
            TrigComponent::affine(&[0.0, 2.0], &[0.0; 2], &[0.0; 2], &[0.0, 1.0])
                .unwrap()
                .into();
        let b: CurveComponent =
            TrigComponent::affine(&[0.0, 1.0], &[0.0; 2], &[0.0; 2], &[0.0, 2.0])
                .unwrap()
                .into();
        let roots = cross_coincidences(
            &PrimalLoop(&a),
            &PrimalLoop(&b),
            256,
            &Tolerances::default(),
        );
        assert_eq!(roots.len(), 4);
    }
}
