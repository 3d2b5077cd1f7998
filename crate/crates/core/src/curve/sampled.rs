use crate::error::{CurveError, Result};
use crate::geometry::Vec3;

use super::Jet;

/// A closed component given by samples of its lift with first and second
/// derivatives, interpolated by a C² quintic Hermite spline.
///
/// Used for traced real loci of algebraic curves. The last knot closes the
/// loop: `p[n] = lift_sign * p[0]` (and likewise for the derivatives).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledComponent {
    knots: Vec<f64>,
    p: Vec<Vec3>,
    d1: Vec<Vec3>,
    d2: Vec<Vec3>,
    lift_sign: f64,
}

impl SampledComponent {
    pub fn new(
        knots: Vec<f64>,
        p: Vec<Vec3>,
        d1: Vec<Vec3>,
        d2: Vec<Vec3>,
        lift_sign: f64,
    ) -> Result<Self> {
        let n = knots.len();
        if n < 4 || p.len() != n || d1.len() != n || d2.len() != n {
            return Err(CurveError::TracingGapError(
                "sampled component needs at least four consistent knots".into(),
            ));
        }
        if knots[0] != 0.0 || knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CurveError::TracingGapError(
                "knots must start at 0 and increase".into(),
            ));
        }
        if lift_sign.abs() != 1.0 {
            return Err(CurveError::TracingGapError(
                "lift sign must be +1 or -1".into(),
            ));
        }
        Ok(Self {
            knots,
            p,
            d1,
            d2,
            lift_sign,
        })
    }

    pub fn period(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    pub fn lift_sign(&self) -> f64 {
        self.lift_sign
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn samples(&self) -> &[Vec3] {
        &self.p
    }

    pub fn reversed(&self) -> Self {
        let period = self.period();
        let n = self.knots.len();
        let knots = (0..n)
            .map(|i| period - self.knots[n - 1 - i])
            .collect::<Vec<_>>();
        let mut knots = knots;
        knots[0] = 0.0;
        Self {
            knots,
            p: self.p.iter().rev().copied().collect(),
            d1: self.d1.iter().rev().map(|v| -v).collect(),
            d2: self.d2.iter().rev().copied().collect(),
            lift_sign: self.lift_sign,
        }
    }

    pub fn transformed(&self, m: &nalgebra::Matrix3<f64>) -> Self {
        Self {
            knots: self.knots.clone(),
            p: self.p.iter().map(|v| m * v).collect(),
            d1: self.d1.iter().map(|v| m * v).collect(),
            d2: self.d2.iter().map(|v| m * v).collect(),
            lift_sign: self.lift_sign,
        }
    }

    pub fn jet(&self, t: f64) -> Jet {
        let period = self.period();
        let turns = (t / period).floor();
        let mut local = t - turns * period;
        if local >= period {
            local = period;
        }
        let sign = if self.lift_sign < 0.0 && (turns as i64).rem_euclid(2) == 1 {
            -1.0
        } else {
            1.0
        };
        let k = match self
            .knots
            .binary_search_by(|x| x.partial_cmp(&local).unwrap())
        {
            Ok(i) => i.min(self.knots.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.knots.len() - 2),
        };
        let h = self.knots[k + 1] - self.knots[k];
        let u = (local - self.knots[k]) / h;
        let jet = hermite5(
            u,
            h,
            [&self.p[k], &self.d1[k], &self.d2[k]],
            [&self.p[k + 1], &self.d1[k + 1], &self.d2[k + 1]],
        );
        Jet {
            p: jet.p * sign,
            d1: jet.d1 * sign,
            d2: jet.d2 * sign,
            d3: jet.d3 * sign,
        }
    }
}

/// Quintic Hermite interpolation on a segment of length `h`, evaluated at the
/// unit parameter `u`, returning derivatives with respect to the global
/// parameter.
fn hermite5(u: f64, h: f64, a: [&Vec3; 3], b: [&Vec3; 3]) -> Jet {
    let u2 = u * u;
    let u3 = u2 * u;
    let u4 = u3 * u;
    let u5 = u4 * u;
    // Basis values and their first three u-derivatives, ordered
    // (p0, v0, a0, a1, v1, p1); the p0 row is not needed.
    let basis = [
        [0.0; 4],
        [
            u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5,
            1.0 - 18.0 * u2 + 32.0 * u3 - 15.0 * u4,
            -36.0 * u + 96.0 * u2 - 60.0 * u3,
            -36.0 + 192.0 * u - 180.0 * u2,
        ],
        [
            0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5),
            0.5 * (2.0 * u - 9.0 * u2 + 12.0 * u3 - 5.0 * u4),
            0.5 * (2.0 - 18.0 * u + 36.0 * u2 - 20.0 * u3),
            0.5 * (-18.0 + 72.0 * u - 60.0 * u2),
        ],
        [
            0.5 * (u3 - 2.0 * u4 + u5),
            0.5 * (3.0 * u2 - 8.0 * u3 + 5.0 * u4),
            0.5 * (6.0 * u - 24.0 * u2 + 20.0 * u3),
            0.5 * (6.0 - 48.0 * u + 60.0 * u2),
        ],
        [
            -4.0 * u3 + 7.0 * u4 - 3.0 * u5,
            -12.0 * u2 + 28.0 * u3 - 15.0 * u4,
            -24.0 * u + 84.0 * u2 - 60.0 * u3,
            -24.0 + 168.0 * u - 180.0 * u2,
        ],
        [
            10.0 * u3 - 15.0 * u4 + 6.0 * u5,
            30.0 * u2 - 60.0 * u3 + 30.0 * u4,
            60.0 * u - 180.0 * u2 + 120.0 * u3,
            60.0 - 360.0 * u + 360.0 * u2,
        ],
    ];
    // The p0 basis is one minus the p1 basis, so only the difference p1 - p0
    // enters; this keeps derivatives free of cancellation between large values.
    let data = [
        a[1] * h,
        a[2] * (h * h),
        b[2] * (h * h),
        b[1] * h,
        b[0] - a[0],
    ];
    let mut out = [*a[0], Vec3::zeros(), Vec3::zeros(), Vec3::zeros()];
    for (row, v) in basis[1..].iter().zip(data.iter()) {
        for (o, w) in out.iter_mut().zip(row.iter()) {
            *o += v * *w;
        }
    }
    Jet {
        p: out[0],
        d1: out[1] / h,
        d2: out[2] / (h * h),
        d3: out[3] / (h * h * h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_quintic_polynomials() {
        let f = |t: f64| {
            Vec3::new(
                t.powi(5) - 2.0 * t.powi(3),
                3.0 * t.powi(4) + t,
                1.0 - t * t,
            )
        };
        let f1 = |t: f64| {
            Vec3::new(
                5.0 * t.powi(4) - 6.0 * t * t,
                12.0 * t.powi(3) + 1.0,
                -2.0 * t,
            )
        };
        let f2 = |t: f64| Vec3::new(20.0 * t.powi(3) - 12.0 * t, 36.0 * t * t, -2.0);
        let f3 = |t: f64| Vec3::new(60.0 * t * t - 12.0, 72.0 * t, 0.0);
        let (t0, t1) = (0.3, 0.75);
        let h = t1 - t0;
        for &u in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            let t = t0 + u * h;
            let j = hermite5(u, h, [&f(t0), &f1(t0), &f2(t0)], [&f(t1), &f1(t1), &f2(t1)]);
            assert!((j.p - f(t)).norm() < 1e-13);
            assert!((j.d1 - f1(t)).norm() < 1e-12);
            assert!((j.d2 - f2(t)).norm() < 1e-11);
            assert!((j.d3 - f3(t)).norm() < 1e-9);
        }
    }

    #[test]
    fn circle_samples_interpolate_accurately() {
        let n = 64;
        let period = 2.0 * std::f64::consts::PI;
        let knots: Vec<f64> = (0..=n).map(|k| k as f64 * period / n as f64).collect();
        let p = knots
            .iter()
            .map(|t| Vec3::new(t.cos(), t.sin(), 1.0))
            .collect();
        let d1 = knots
            .iter()
            .map(|t| Vec3::new(-t.sin(), t.cos(), 0.0))
            .collect();
        let d2 = knots
            .iter()
            .map(|t| Vec3::new(-t.cos(), -t.sin(), 0.0))
            .collect();
        let c = SampledComponent::new(knots, p, d1, d2, 1.0).unwrap();
        for &t in &[0.01, 1.234, 5.5, 7.0, -1.0] {
            let j = c.jet(t);
            assert!((j.p - Vec3::new(t.cos(), t.sin(), 1.0)).norm() < 1e-9);
            assert!((j.d1 - Vec3::new(-t.sin(), t.cos(), 0.0)).norm() < 1e-7);
        }
        let r = c.reversed();
        let j = r.jet(1.0);
        assert!((j.p - Vec3::new((-1.0f64).cos(), (-1.0f64).sin(), 1.0)).norm() < 1e-9);
    }
}
