//! Fixtures and brute-force oracles shared by the integration tests. The
//! oracles only use curve evaluation (checked against finite differences in
//! `parametric.rs`), never the engine's root finders.

#![allow(dead_code)]

use curvelab::algebraic::{AlgebraicCurve, HomogeneousPoly, Monomial};
use curvelab::{Curve, CurveComponent, TrigComponent, Vec3};

pub fn circle_at(cx: f64, cy: f64, r: f64) -> TrigComponent {
    TrigComponent::affine(&[cx, r], &[0.0, 0.0], &[cy, 0.0], &[0.0, r]).unwrap()
}

pub fn circle() -> Curve {
    Curve::single(circle_at(0.0, 0.0, 1.0))
}

/// `(1 + 2 cos t)(cos t, sin t)`.
pub fn limacon() -> Curve {
    Curve::single(
        TrigComponent::affine(&[1.0, 1.0, 1.0], &[0.0; 3], &[0.0; 3], &[0.0, 1.0, 1.0]).unwrap(),
    )
}

pub fn two_circles() -> Curve {
    Curve::new(vec![
        circle_at(0.0, 0.0, 1.0).into(),
        circle_at(4.0, 0.0, 1.0).into(),
    ])
    .unwrap()
}

/// `x²/4 + y² = 1` and `x² + y²/4 = 1`.
pub fn crossing_ellipses() -> Curve {
    let a = TrigComponent::affine(&[0.0, 2.0], &[0.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]).unwrap();
    let b = TrigComponent::affine(&[0.0, 1.0], &[0.0, 0.0], &[0.0, 0.0], &[0.0, 2.0]).unwrap();
    Curve::new(vec![a.into(), b.into()]).unwrap()
}

/// `(cos t, sin t + 0.3 sin 3t)`.
pub fn wave_ellipse() -> Curve {
    Curve::single(
        TrigComponent::affine(
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0; 4],
            &[0.0; 4],
            &[0.0, 1.0, 0.0, 0.3],
        )
        .unwrap(),
    )
}

/// `[1 : sin t : cos t]`, the hyperbola `x² - y² = 1`.
pub fn hyperbola() -> Curve {
    Curve::single(
        TrigComponent::from_arrays(
            &[1.0, 0.0],
            &[0.0, 0.0],
            &[0.0, 0.0],
            &[0.0, 1.0],
            &[0.0, 1.0],
            &[0.0, 0.0],
        )
        .unwrap(),
    )
}

pub fn algebraic(degree: u32, terms: &[(u32, u32, u32, f64)]) -> AlgebraicCurve {
    let ms: Vec<Monomial> = terms
        .iter()
        .map(|&(i, j, k, c)| Monomial { i, j, k, c })
        .collect();
    AlgebraicCurve::new(HomogeneousPoly::new(degree, &ms).unwrap()).unwrap()
}

pub fn trott() -> AlgebraicCurve {
    algebraic(
        4,
        &[
            (4, 0, 0, 144.0),
            (0, 4, 0, 144.0),
            (2, 2, 0, 350.0),
            (2, 0, 2, -225.0),
            (0, 2, 2, -225.0),
            (0, 0, 4, 81.0),
        ],
    )
}

/// `y²z = x³ - xz²`, two real components.
pub fn smooth_cubic() -> AlgebraicCurve {
    algebraic(3, &[(0, 2, 1, 1.0), (3, 0, 0, -1.0), (1, 0, 2, 1.0)])
}

/// `y²z = x²(x + z)`: one hyperbolic node at the origin.
pub fn crunodal_cubic() -> AlgebraicCurve {
    algebraic(3, &[(0, 2, 1, 1.0), (3, 0, 0, -1.0), (2, 0, 1, -1.0)])
}

/// `y²z = x²(x - z)`: one isolated real node at the origin.
pub fn acnodal_cubic() -> AlgebraicCurve {
    algebraic(3, &[(0, 2, 1, 1.0), (3, 0, 0, -1.0), (2, 0, 1, 1.0)])
}

/// Number of sign changes of `det(P, P', P'')` on `n` uniform samples per component.
pub fn dense_flex_count(curve: &Curve, n: usize) -> usize {
    let mut count = 0;
    for c in curve.components() {
        let sign = |k: usize| {
            let t = c.period() * k as f64 / n as f64;
            c.jet(t).flex_det().signum()
        };
        let first = sign(0);
        let mut prev = first;
        for k in 1..n {
            let s = sign(k);
            if s != prev {
                count += 1;
            }
            prev = s;
        }
        // Lifts with sign -1 flip det(P, P', P'') after one period.
        let wrap = first * c.lift_sign();
        if wrap != prev {
            count += 1;
        }
    }
    count
}

fn affine_polyline(c: &CurveComponent, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| {
            let p = c.point(c.period() * k as f64 / n as f64);
            (p[0] / p[2], p[1] / p[2])
        })
        .collect()
}

fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let o = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| {
        (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
    };
    o(a, b, c) * o(a, b, d) < 0.0 && o(c, d, a) * o(c, d, b) < 0.0
}

/// Self-crossings of the closed affine polylines (curves inside `z = 1` charts).
pub fn dense_node_count(curve: &Curve, n: usize) -> usize {
    let polys: Vec<Vec<(f64, f64)>> = curve
        .components()
        .iter()
        .map(|c| affine_polyline(c, n))
        .collect();
    let mut count = 0;
    for (i, a) in polys.iter().enumerate() {
        for (j, b) in polys.iter().enumerate().skip(i) {
            for s in 0..a.len() {
                let (a0, a1) = (a[s], a[(s + 1) % a.len()]);
                let start = if i == j { s + 2 } else { 0 };
                for u in start..b.len() {
                    if i == j && s == 0 && u == b.len() - 1 {
                        continue;
                    }
                    if segments_cross(a0, a1, b[u], b[(u + 1) % b.len()]) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Unit tangent lines `P × P'` along each component as closed spherical
/// polylines. The dual lift closes even for one-sided loops, since both `P`
/// and `P'` flip sign after one period.
pub fn dual_polylines(curve: &Curve, n: usize) -> Vec<Vec<Vec3>> {
    curve
        .components()
        .iter()
        .map(|c| {
            (0..n)
                .map(|k| {
                    c.jet(c.period() * k as f64 / n as f64)
                        .tangent_line()
                        .normalize()
                })
                .collect()
        })
        .collect()
}

fn arcs_cross(a0: &Vec3, a1: &Vec3, b0: &Vec3, b1: &Vec3) -> bool {
    if a0.dot(b0) <= 0.0 {
        return false;
    }
    let na = a0.cross(a1);
    let nb = b0.cross(b1);
    na.dot(b0) * na.dot(b1) < 0.0 && nb.dot(a0) * nb.dot(a1) < 0.0
}

fn crossings(a: &[Vec3], b: &[Vec3], sign: f64, skip_adjacent: bool) -> usize {
    let (na, nb) = (a.len(), b.len());
    let mut count = 0;
    for s in 0..na {
        for u in 0..nb {
            if skip_adjacent && (u <= s + 1 || (s == 0 && u == nb - 1)) {
                continue;
            }
            if arcs_cross(
                &a[s],
                &a[(s + 1) % na],
                &(b[u] * sign),
                &(b[(u + 1) % nb] * sign),
            ) {
                count += 1;
            }
        }
    }
    count
}

/// Bitangent count as self-crossings of the dual curve in RP², found on
/// dense spherical polylines. Each line has two lifts, so every pair of
/// components is compared with both signs.
pub fn dense_bitangent_count(curve: &Curve, n: usize) -> usize {
    let polys = dual_polylines(curve, n);
    let mut count = 0;
    for (i, a) in polys.iter().enumerate() {
        count += crossings(a, a, 1.0, true);
        // Pairs (s, u) and (u, s) both show up against the antipodal copy.
        count += crossings(a, a, -1.0, false) / 2;
        for b in &polys[i + 1..] {
            count += crossings(a, b, 1.0, false) + crossings(a, b, -1.0, false);
        }
    }
    count
}
