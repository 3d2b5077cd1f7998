use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::error::{CurveError, Result};
use crate::geometry::Vec3;

use super::Jet;

/// A closed component `t -> [X(t) : Y(t) : Z(t)]` whose homogeneous
/// coordinates are trigonometric polynomials.
///
/// `cos[k]` and `sin[k]` hold the coefficient vectors of `cos(k t)` and
/// `sin(k t)`. The projective period is derived from the harmonics present:
/// with `m` the gcd of the active frequencies the lift is `2π/m`-periodic,
/// and when every active frequency is an odd multiple of `m` the lift flips
/// sign after `π/m`, so the projective curve closes up after half the time
/// as a one-sided loop.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigComponent {
    cos: Vec<Vec3>,
    sin: Vec<Vec3>,
    period: f64,
    lift_sign: f64,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl TrigComponent {
    /// Builds a component from per-coordinate coefficient arrays
    /// (`x_cos[k]` multiplies `cos(k t)` and so on; `*_sin[0]` is ignored).
    pub fn from_arrays(
        x_cos: &[f64],
        x_sin: &[f64],
        y_cos: &[f64],
        y_sin: &[f64],
        z_cos: &[f64],
        z_sin: &[f64],
    ) -> Result<Self> {
        let len = x_cos.len();
        let arrays = [x_cos, x_sin, y_cos, y_sin, z_cos, z_sin];
        if len == 0 || arrays.iter().any(|a| a.len() != len) {
            return Err(CurveError::SchemaError(
                "trig coefficient arrays must be nonempty and of equal length".into(),
            ));
        }
        let cos = (0..len)
            .map(|k| Vec3::new(x_cos[k], y_cos[k], z_cos[k]))
            .collect();
        let sin = (0..len)
            .map(|k| {
                if k == 0 {
                    Vec3::zeros()
                } else {
                    Vec3::new(x_sin[k], y_sin[k], z_sin[k])
                }
            })
            .collect();
        Self::new(cos, sin)
    }

    pub fn new(cos: Vec<Vec3>, mut sin: Vec<Vec3>) -> Result<Self> {
        if cos.len() != sin.len() || cos.is_empty() {
            return Err(CurveError::SchemaError(
                "cos and sin coefficient lists must have equal nonzero length".into(),
            ));
        }
        if cos
            .iter()
            .chain(sin.iter())
            .any(|v| !v.iter().all(|c| c.is_finite()))
        {
            return Err(CurveError::SchemaError(
                "non-finite trig coefficient".into(),
            ));
        }
        sin[0] = Vec3::zeros();
        let active: Vec<usize> = (0..cos.len())
            .filter(|&k| cos[k] != Vec3::zeros() || sin[k] != Vec3::zeros())
            .collect();
        if active.is_empty() {
            return Err(CurveError::EmptyCurve);
        }
        let m = active.iter().fold(0, |g, &k| gcd(g, k));
        if m == 0 {
            return Err(CurveError::NotImmersed {
                component: 0,
                t: 0.0,
            });
        }
        let all_odd = active.iter().all(|&k| (k / m) % 2 == 1);
        let (period, lift_sign) = if all_odd {
            (PI / m as f64, -1.0)
        } else {
            (2.0 * PI / m as f64, 1.0)
        };
        Ok(Self {
            cos,
            sin,
            period,
            lift_sign,
        })
    }

    /// Affine curve `(x(t), y(t), 1)`.
    pub fn affine(x_cos: &[f64], x_sin: &[f64], y_cos: &[f64], y_sin: &[f64]) -> Result<Self> {
        let len = x_cos.len();
        let mut z = vec![0.0; len.max(1)];
        z[0] = 1.0;
        Self::from_arrays(x_cos, x_sin, y_cos, y_sin, &z, &vec![0.0; len.max(1)])
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn cos_coeffs(&self) -> &[Vec3] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[Vec3] {
        &self.sin
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn lift_sign(&self) -> f64 {
        self.lift_sign
    }

    /// Same trace with the opposite orientation (`t -> -t`).
    pub fn reversed(&self) -> Self {
        Self {
            cos: self.cos.clone(),
            sin: self.sin.iter().map(|v| -v).collect(),
            ..*self
        }
    }

    /// Applies a linear map to the lift, i.e. a projective transformation.
    pub fn transformed(&self, m: &Matrix3<f64>) -> Self {
        Self {
            cos: self.cos.iter().map(|v| m * v).collect(),
            sin: self.sin.iter().map(|v| m * v).collect(),
            ..*self
        }
    }

    pub fn point(&self, t: f64) -> Vec3 {
        let mut p = self.cos[0];
        for k in 1..self.cos.len() {
            let (s, c) = (k as f64 * t).sin_cos();
            p += self.cos[k] * c + self.sin[k] * s;
        }
        p
    }

    pub fn jet(&self, t: f64) -> Jet {
        let mut jet = Jet {
            p: self.cos[0],
            d1: Vec3::zeros(),
            d2: Vec3::zeros(),
            d3: Vec3::zeros(),
        };
        for k in 1..self.cos.len() {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            let a = self.cos[k];
            let b = self.sin[k];
            let even = a * c + b * s;
            let odd = b * c - a * s;
            jet.p += even;
            jet.d1 += odd * kf;
            jet.d2 -= even * (kf * kf);
            jet.d3 -= odd * (kf * kf * kf);
        }
        jet
    }
}
