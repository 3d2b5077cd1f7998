//! Projective points and lines, affine charts, and the orientation predicate.

use nalgebra::{Point2, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};

pub type Vec3 = Vector3<f64>;
pub type AffinePoint = Point2<f64>;

/// Scales `v` to unit length with its first nonzero coordinate positive.
///
/// Vectors already in that form are returned untouched, which makes the map
/// bitwise idempotent.
pub fn normalize_projective(v: [f64; 3]) -> Option<[f64; 3]> {
    let norm_sq = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if !(norm_sq > 0.0) || !norm_sq.is_finite() {
        return None;
    }
    let lead = v.iter().copied().find(|c| *c != 0.0).unwrap_or(0.0);
    if lead > 0.0 && (norm_sq - 1.0).abs() <= 8.0 * f64::EPSILON {
        return Some(v);
    }
    let scale = lead.signum() / norm_sq.sqrt();
    Some([v[0] * scale, v[1] * scale, v[2] * scale])
}

fn projective_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let plus = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
    let minus = ((a[0] + b[0]).powi(2) + (a[1] + b[1]).powi(2) + (a[2] + b[2]).powi(2)).sqrt();
    plus.min(minus)
}

macro_rules! projective_triple {
    ($name:ident, $field:ident) => {
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        pub struct $name {
            $field: [f64; 3],
        }

        impl $name {
            pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
                Self::from_array([a, b, c])
            }

            pub fn from_array(v: [f64; 3]) -> Result<Self> {
                normalize_projective(v)
                    .map(|$field| Self { $field })
                    .ok_or_else(|| {
                        CurveError::SchemaError(format!(
                            "{} needs a finite nonzero triple, got {:?}",
                            stringify!($name),
                            v
                        ))
                    })
            }

            pub fn from_vec(v: &Vec3) -> Result<Self> {
                Self::from_array([v.x, v.y, v.z])
            }

            pub fn $field(&self) -> [f64; 3] {
                self.$field
            }

            pub fn vec(&self) -> Vec3 {
                Vec3::new(self.$field[0], self.$field[1], self.$field[2])
            }

            /// Equality as projective objects: unit representatives agree up to sign.
            pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
                projective_distance(&self.$field, &other.$field) < tol
            }

            pub fn distance(&self, other: &Self) -> f64 {
                projective_distance(&self.$field, &other.$field)
            }
        }
    };
}

projective_triple!(HomogeneousPoint, coords);
projective_triple!(ProjectiveLine, coeffs);

impl ProjectiveLine {
    /// The default line at infinity `z = 0`.
    pub fn z_infinity() -> Self {
        Self {
            coeffs: [0.0, 0.0, 1.0],
        }
    }

    /// Unit-normalized incidence value `<l, p>`.
    pub fn incidence(&self, p: &HomogeneousPoint) -> f64 {
        self.vec().dot(&p.vec())
    }
}

pub const DEFAULT_TOL_PT: f64 = 1e-9;

/// The line through two distinct points.
pub fn join(p: &HomogeneousPoint, q: &HomogeneousPoint) -> Result<ProjectiveLine> {
    join_with_tol(p, q, DEFAULT_TOL_PT)
}

pub fn join_with_tol(
    p: &HomogeneousPoint,
    q: &HomogeneousPoint,
    tol: f64,
) -> Result<ProjectiveLine> {
    let cross = p.vec().cross(&q.vec());
    if cross.norm() < tol {
        return Err(CurveError::CoincidentPoints);
    }
    ProjectiveLine::from_vec(&cross)
}

/// The intersection point of two distinct lines.
pub fn meet(l: &ProjectiveLine, m: &ProjectiveLine) -> Result<HomogeneousPoint> {
    meet_with_tol(l, m, DEFAULT_TOL_PT)
}

pub fn meet_with_tol(l: &ProjectiveLine, m: &ProjectiveLine, tol: f64) -> Result<HomogeneousPoint> {
    let cross = l.vec().cross(&m.vec());
    if cross.norm() < tol {
        return Err(CurveError::CoincidentLines);
    }
    HomogeneousPoint::from_vec(&cross)
}

pub const DEFAULT_TOL_ORIENT: f64 = 1e-10;

/// Sign of `det[b - a, c - a]`, zero within `DEFAULT_TOL_ORIENT`.
pub fn orient(a: &AffinePoint, b: &AffinePoint, c: &AffinePoint) -> i8 {
    orient_with_tol(a, b, c, DEFAULT_TOL_ORIENT)
}

pub fn orient_with_tol(a: &AffinePoint, b: &AffinePoint, c: &AffinePoint, tol: f64) -> i8 {
    let u = b - a;
    let v = c - a;
    let det = u.x * v.y - u.y * v.x;
    if det.abs() <= tol {
        0
    } else if det > 0.0 {
        1
    } else {
        -1
    }
}

/// An affine chart `RP^2 \ L∞ -> R^2` with an orthonormal frame.
///
/// `e3` is the unit normal of the line at infinity and `(e1, e2, e3)` is a
/// right-handed orthonormal basis, so a homogeneous point `P` maps to
/// `(P·e1 / P·e3, P·e2 / P·e3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineChart {
    line_at_infinity: ProjectiveLine,
    e1: Vec3,
    e2: Vec3,
    e3: Vec3,
}

impl Default for AffineChart {
    fn default() -> Self {
        Self::new(ProjectiveLine::z_infinity())
    }
}

impl AffineChart {
    pub fn new(line_at_infinity: ProjectiveLine) -> Self {
        let e3 = line_at_infinity.vec();
        // Complete with the coordinate axis least aligned with e3 (first on ties).
        let mut axis = 0;
        for i in 1..3 {
            if e3[i].abs() < e3[axis].abs() {
                axis = i;
            }
        }
        let mut seed = Vec3::zeros();
        seed[axis] = 1.0;
        let e1 = (seed - e3 * e3.dot(&seed)).normalize();
        let e2 = e3.cross(&e1);
        Self {
            line_at_infinity,
            e1,
            e2,
            e3,
        }
    }

    pub fn line_at_infinity(&self) -> &ProjectiveLine {
        &self.line_at_infinity
    }

    pub fn normal(&self) -> Vec3 {
        self.e3
    }

    pub fn frame(&self) -> [Vec3; 3] {
        [self.e1, self.e2, self.e3]
    }

    /// Signed "height" of a lift above L∞; zero exactly on L∞.
    pub fn weight(&self, p: &Vec3) -> f64 {
        p.dot(&self.e3)
    }

    pub fn map_vec(&self, p: &Vec3, tol: f64) -> Result<AffinePoint> {
        let w = self.weight(p);
        if w.abs() <= tol * p.norm() {
            return Err(CurveError::OnInfinity);
        }
        Ok(AffinePoint::new(p.dot(&self.e1) / w, p.dot(&self.e2) / w))
    }

    pub fn map(&self, p: &HomogeneousPoint) -> Result<AffinePoint> {
        self.map_vec(&p.vec(), DEFAULT_TOL_PT)
    }

    pub fn unmap(&self, q: &AffinePoint) -> HomogeneousPoint {
        let v = self.e1 * q.x + self.e2 * q.y + self.e3;
        HomogeneousPoint::from_vec(&v).expect("e3 component keeps the lift nonzero")
    }

    /// Affine position, velocity and acceleration of a lifted curve germ
    /// `P, P', P''`.
    pub fn map_jet(&self, p: &Vec3, d1: &Vec3, d2: &Vec3, tol: f64) -> Result<[Vector2<f64>; 3]> {
        let w = self.weight(p);
        if w.abs() <= tol * p.norm() {
            return Err(CurveError::OnInfinity);
        }
        let w1 = self.weight(d1);
        let w2 = self.weight(d2);
        let mut out = [Vector2::zeros(); 3];
        for (k, e) in [self.e1, self.e2].iter().enumerate() {
            let a = p.dot(e);
            let a1 = d1.dot(e);
            let a2 = d2.dot(e);
            let x = a / w;
            let x1 = (a1 * w - a * w1) / (w * w);
            let x2 = (a2 * w - a * w2) / (w * w) - 2.0 * w1 * x1 / w;
            out[0][k] = x;
            out[1][k] = x1;
            out[2][k] = x2;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: f64, b: f64, c: f64) -> HomogeneousPoint {
        HomogeneousPoint::new(a, b, c).unwrap()
    }

    fn line(a: f64, b: f64, c: f64) -> ProjectiveLine {
        ProjectiveLine::new(a, b, c).unwrap()
    }

    #[test]
    fn join_examples() {
        let l = join(&pt(1.0, 0.0, 1.0), &pt(0.0, 1.0, 1.0)).unwrap();
        assert!(l.approx_eq(&line(-1.0, -1.0, 1.0), 1e-12));
        let inf = join(&pt(1.0, 0.0, 0.0), &pt(0.0, 1.0, 0.0)).unwrap();
        assert!(inf.approx_eq(&ProjectiveLine::z_infinity(), 1e-15));
        let p = pt(0.3, -2.0, 1.0);
        assert_eq!(join(&p, &p), Err(CurveError::CoincidentPoints));
    }

    #[test]
    fn meet_examples() {
        let q = meet(&line(1.0, 0.0, 0.0), &line(0.0, 0.0, 1.0)).unwrap();
        assert!(q.approx_eq(&pt(0.0, 1.0, 0.0), 1e-15));
        let p_l = meet(&line(1.0, 0.0, -1.0), &ProjectiveLine::z_infinity()).unwrap();
        assert!(p_l.approx_eq(&pt(0.0, 1.0, 0.0), 1e-15));
        let l = line(1.0, 2.0, 3.0);
        assert_eq!(meet(&l, &l), Err(CurveError::CoincidentLines));
    }

    #[test]
    fn orient_examples() {
        let o = AffinePoint::new(0.0, 0.0);
        let x = AffinePoint::new(1.0, 0.0);
        let y = AffinePoint::new(0.0, 1.0);
        assert_eq!(orient(&o, &x, &y), 1);
        assert_eq!(orient(&o, &x, &AffinePoint::new(2.0, 0.0)), 0);
        assert_eq!(orient(&o, &y, &x), -1);
    }

    #[test]
    fn normalization_sign_and_idempotence() {
        let p = pt(-3.0, 4.0, 0.0);
        assert!((p.coords()[0] - 0.6).abs() < 1e-15);
        assert!((p.coords()[1] + 0.8).abs() < 1e-15);
        let again = HomogeneousPoint::from_array(p.coords()).unwrap();
        assert_eq!(again.coords(), p.coords());
        assert!(HomogeneousPoint::new(0.0, 0.0, 0.0).is_err());
        assert!(pt(1.0, 2.0, 3.0).approx_eq(&pt(-2.0, -4.0, -6.0), 1e-15));
    }

    #[test]
    fn default_chart_is_standard() {
        let chart = AffineChart::default();
        let q = chart.map(&pt(2.0, 3.0, 2.0)).unwrap();
        assert!((q.x - 1.0).abs() < 1e-15 && (q.y - 1.5).abs() < 1e-15);
        assert_eq!(chart.map(&pt(1.0, 1.0, 0.0)), Err(CurveError::OnInfinity));
    }

    #[test]
    fn chart_round_trip_general_line() {
        let chart = AffineChart::new(line(0.3, -0.5, 0.8));
        for &(x, y) in &[(0.0, 0.0), (1.5, -2.0), (-7.0, 3.25)] {
            let q = AffinePoint::new(x, y);
            let back = chart.map(&chart.unmap(&q)).unwrap();
            assert!((back - q).norm() < 1e-12);
        }
    }

    #[test]
    fn map_jet_matches_finite_differences() {
        let chart = AffineChart::new(line(0.2, 0.1, 1.0));
        let curve = |t: f64| Vec3::new(t.cos() + 0.3, t.sin(), 2.0 + 0.5 * (2.0 * t).cos());
        let t0 = 0.7;
        let h = 1e-4;
        let p = curve(t0);
        let d1 = (curve(t0 + h) - curve(t0 - h)) / (2.0 * h);
        let d2 = (curve(t0 + h) - 2.0 * p + curve(t0 - h)) / (h * h);
        let jet = chart.map_jet(&p, &d1, &d2, 1e-12).unwrap();
        let aff = |t: f64| chart.map_vec(&curve(t), 1e-12).unwrap().coords;
        let v = (aff(t0 + h) - aff(t0 - h)) / (2.0 * h);
        let a = (aff(t0 + h) - 2.0 * aff(t0) + aff(t0 - h)) / (h * h);
        assert!((jet[1] - v).norm() < 1e-6);
        assert!((jet[2] - a).norm() < 1e-4);
    }
}
