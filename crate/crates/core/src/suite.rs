//! Seeded random generators for the property suites.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebraic::{AlgebraicCurve, HomogeneousPoly, Monomial};
use crate::curve::{Curve, CurveComponent, TrigComponent};
use crate::geometry::{ProjectiveLine, Vec3};

/// Which kind of random curve to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Curves avoiding the line `z = 0`.
    Affine,
    /// Curves crossing `z = 0` transversally at the given number of points (1, 2 or 3).
    Crossing(usize),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeff(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    rng.gen_range(-scale..scale)
}

fn affine_component(rng: &mut ChaCha8Rng, center: (f64, f64), size: f64) -> TrigComponent {
    let degree = rng.gen_range(2..=4);
    let mut x_cos = vec![0.0; degree + 1];
    let mut x_sin = vec![0.0; degree + 1];
    let mut y_cos = vec![0.0; degree + 1];
    let mut y_sin = vec![0.0; degree + 1];
    x_cos[0] = center.0;
    y_cos[0] = center.1;
    let phase = rng.gen_range(0.0..PI);
    let (a, b) = (rng.gen_range(0.7..1.4), rng.gen_range(0.7..1.4));
    x_cos[1] = size * a * phase.cos();
    x_sin[1] = -size * b * phase.sin();
    y_cos[1] = size * a * phase.sin();
    y_sin[1] = size * b * phase.cos();
    for k in 2..=degree {
        let s = size * 0.6 / k as f64;
        x_cos[k] = coeff(rng, s);
        x_sin[k] = coeff(rng, s);
        y_cos[k] = coeff(rng, s);
        y_sin[k] = coeff(rng, s);
    }
    let z_cos = {
        let mut z = vec![0.0; degree + 1];
        z[0] = 1.0;
        z
    };
    TrigComponent::from_arrays(
        &x_cos,
        &x_sin,
        &y_cos,
        &y_sin,
        &z_cos,
        &vec![0.0; degree + 1],
    )
    .expect("well-formed arrays")
}

/// A random closed curve of the requested family.
pub fn random_curve(rng: &mut ChaCha8Rng, family: Family) -> Curve {
    match family {
        Family::Affine => {
            if rng.gen_bool(0.25) {
                let gap = rng.gen_range(1.0..3.0);
                let a = affine_component(rng, (0.0, 0.0), 1.0);
                let dy = coeff(rng, 0.5);
                let size = rng.gen_range(0.5..1.2);
                let b = affine_component(rng, (gap, dy), size);
                Curve::new(vec![a.into(), b.into()]).expect("two components")
            } else {
                Curve::single(affine_component(rng, (0.0, 0.0), 1.0))
            }
        }
        Family::Crossing(a) => Curve::single(crossing_component(rng, a)),
    }
}

fn crossing_component(rng: &mut ChaCha8Rng, a: usize) -> CurveComponent {
    match a {
        2 => {
            // z = c + cos(t + φ) + small harmonics has two simple zeros.
            let degree = rng.gen_range(2..=3);
            let mut cos = vec![Vec3::zeros(); degree + 1];
            let mut sin = vec![Vec3::zeros(); degree + 1];
            let c = coeff(rng, 0.6);
            let phi = rng.gen_range(0.0..2.0 * PI);
            cos[0] = Vec3::new(coeff(rng, 0.5), coeff(rng, 0.5), c);
            cos[1] = Vec3::new(rng.gen_range(0.6..1.4), coeff(rng, 0.4), phi.cos());
            sin[1] = Vec3::new(coeff(rng, 0.4), rng.gen_range(0.6..1.4), -phi.sin());
            for k in 2..=degree {
                let s = 0.5 / k as f64;
                cos[k] = Vec3::new(coeff(rng, s), coeff(rng, s), coeff(rng, 0.1));
                sin[k] = Vec3::new(coeff(rng, s), coeff(rng, s), coeff(rng, 0.1));
            }
            TrigComponent::new(cos, sin).expect("well-formed").into()
        }
        1 | 3 => {
            // Odd harmonics only: a one-sided loop; z is dominated by cos(a t).
            let mut cos = vec![Vec3::zeros(); 4];
            let mut sin = vec![Vec3::zeros(); 4];
            let phi = rng.gen_range(0.0..2.0 * PI);
            let other = if a == 1 { 3 } else { 1 };
            cos[a][2] = phi.cos();
            sin[a][2] = -phi.sin();
            cos[other][2] = coeff(rng, 0.2);
            sin[other][2] = coeff(rng, 0.2);
            for k in [1, 3] {
                let s = if k == 1 { 1.0 } else { 0.5 };
                cos[k][0] = coeff(rng, s);
                sin[k][0] = coeff(rng, s);
                cos[k][1] = coeff(rng, s);
                sin[k][1] = coeff(rng, s);
            }
            cos[1][0] += 1.0;
            sin[1][1] += 1.0;
            TrigComponent::new(cos, sin).expect("well-formed").into()
        }
        _ => panic!("crossing family supports a = 1, 2, 3"),
    }
}

/// A random line meeting the unit disc region where test curves live.
pub fn random_line(rng: &mut ChaCha8Rng) -> ProjectiveLine {
    let theta = rng.gen_range(0.0..PI);
    let offset = rng.gen_range(-2.0..2.0);
    ProjectiveLine::new(theta.cos(), theta.sin(), -offset).expect("nonzero normal")
}

/// A random smooth-looking algebraic curve of degree `d` meeting `z = 0` in
/// exactly `a` real points (`a ≤ d`, same parity).
///
/// The top form `F(x, y, 0)` is a product of `a` real linear factors and
/// positive definite quadratics; lower-order terms are random. For `a = 0`
/// the `z^d` coefficient is negative so the real locus is nonempty.
pub fn random_algebraic(rng: &mut ChaCha8Rng, degree: u32, a: u32) -> AlgebraicCurve {
    assert!(
        a <= degree && (degree - a).is_multiple_of(2),
        "need a <= d with d - a even"
    );
    // Binary form as coefficients of x^(n-m) y^m.
    let mut top = vec![1.0];
    let mul = |f: &[f64], g: &[f64]| {
        let mut out = vec![0.0; f.len() + g.len() - 1];
        for (i, a) in f.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    };
    let mut roots: Vec<f64> = Vec::new();
    while roots.len() < a as usize {
        let r = rng.gen_range(-2.0..2.0);
        if roots.iter().all(|&s: &f64| (s - r).abs() > 0.3) {
            roots.push(r);
        }
    }
    for r in roots {
        top = mul(&top, &[1.0, -r]);
    }
    for _ in 0..(degree - a) / 2 {
        let u = rng.gen_range(-1.0..1.0);
        let v: f64 = rng.gen_range(0.5..1.5);
        top = mul(&top, &[1.0, -2.0 * u, u * u + v * v]);
    }
    let d = degree;
    let mut terms: Vec<Monomial> = top
        .iter()
        .enumerate()
        .map(|(m, &c)| Monomial {
            i: d - m as u32,
            j: m as u32,
            k: 0,
            c,
        })
        .collect();
    for k in 1..=d {
        for j in 0..=(d - k) {
            let i = d - k - j;
            let c = if k == d {
                if a == 0 {
                    -rng.gen_range(0.3..1.0)
                } else {
                    coeff(rng, 1.0)
                }
            } else {
                coeff(rng, 0.8)
            };
            terms.push(Monomial { i, j, k, c });
        }
    }
    AlgebraicCurve::new(HomogeneousPoly::new(degree, &terms).expect("homogeneous by construction"))
        .expect("degree at least 2")
}
