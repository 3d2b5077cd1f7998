//! Closed curves in RP² and their feature finders.
//!
//! A [`Curve`] is a list of closed components, each a smooth map from a
//! circle of length `period()` into RP², given by a lift into R³. Lifts of
//! one-sided components (pseudo-lines) come back with the opposite sign
//! after one period; see [`CurveComponent::lift_sign`].

mod features;
mod infinity;
mod intersect;
mod jumps;
mod pencil;
mod sampled;
mod trig;

pub use features::{
    analyze, classify_bitangent, find_bitangents, find_flexes, find_nodes, signed_count_sigma,
    Bitangent, BitangentKind, FeatureSet, Flex, Node, ParamRef, SignedCount,
};
pub use infinity::{infinity_profile, line_crossings, InfinityEntry, InfinityProfile};
pub use jumps::{jump_catalog, jump_profile, ComponentJumps, JumpEvent, JumpKind, JumpProfile};
pub use pencil::{sigma_l, tangents_through_point, PencilTangent};
pub use sampled::SampledComponent;
pub use trig::TrigComponent;

use nalgebra::Matrix3;

use crate::config::Settings;
use crate::error::{CurveError, Result};
use crate::geometry::Vec3;

/// Lift of a curve germ: point and first three derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub p: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
}

impl Jet {
    /// Homogeneous tangent line `P × P'`.
    pub fn tangent_line(&self) -> Vec3 {
        self.p.cross(&self.d1)
    }

    /// `det(P, P', P'')`; its sign changes exactly at flexes.
    pub fn flex_det(&self) -> f64 {
        self.p.cross(&self.d1).dot(&self.d2)
    }

    /// Scale-free version of [`Jet::flex_det`].
    pub fn flex_det_normalized(&self) -> f64 {
        let pn = self.p.norm();
        let scale = pn * self.d1.norm() * self.d2.norm().max(self.d1.norm() * self.d1.norm() / pn);
        if scale > 0.0 {
            self.flex_det() / scale
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveComponent {
    Trig(TrigComponent),
    Sampled(SampledComponent),
}

impl From<TrigComponent> for CurveComponent {
    fn from(c: TrigComponent) -> Self {
        CurveComponent::Trig(c)
    }
}

impl From<SampledComponent> for CurveComponent {
    fn from(c: SampledComponent) -> Self {
        CurveComponent::Sampled(c)
    }
}

impl CurveComponent {
    pub fn period(&self) -> f64 {
        match self {
            CurveComponent::Trig(c) => c.period(),
            CurveComponent::Sampled(c) => c.period(),
        }
    }

    /// `+1` if the lift is periodic, `-1` if `P(t + period) = -P(t)`.
    pub fn lift_sign(&self) -> f64 {
        match self {
            CurveComponent::Trig(c) => c.lift_sign(),
            CurveComponent::Sampled(c) => c.lift_sign(),
        }
    }

    pub fn jet(&self, t: f64) -> Jet {
        match self {
            CurveComponent::Trig(c) => c.jet(t),
            CurveComponent::Sampled(c) => c.jet(t),
        }
    }

    pub fn point(&self, t: f64) -> Vec3 {
        match self {
            CurveComponent::Trig(c) => c.point(t),
            CurveComponent::Sampled(c) => c.jet(t).p,
        }
    }

    pub fn reversed(&self) -> Self {
        match self {
            CurveComponent::Trig(c) => c.reversed().into(),
            CurveComponent::Sampled(c) => c.reversed().into(),
        }
    }

    pub fn transformed(&self, m: &Matrix3<f64>) -> Self {
        match self {
            CurveComponent::Trig(c) => c.transformed(m).into(),
            CurveComponent::Sampled(c) => c.transformed(m).into(),
        }
    }

    /// Parameter reduced into `[0, period)`.
    pub fn wrap(&self, t: f64) -> f64 {
        let period = self.period();
        let r = t.rem_euclid(period);
        if r >= period {
            0.0
        } else {
            r
        }
    }

    /// Distance between two parameters on the parameter circle.
    pub fn param_distance(&self, s: f64, t: f64) -> f64 {
        let period = self.period();
        let d = (s - t).rem_euclid(period);
        d.min(period - d)
    }

    /// `n + 1` equally spaced parameters covering `[0, period]`.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let period = self.period();
        (0..=n).map(|i| period * i as f64 / n as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    components: Vec<CurveComponent>,
}

impl Curve {
    pub fn new(components: Vec<CurveComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(CurveError::EmptyCurve);
        }
        Ok(Self { components })
    }

    pub fn single(component: impl Into<CurveComponent>) -> Self {
        Self {
            components: vec![component.into()],
        }
    }

    pub fn components(&self) -> &[CurveComponent] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &CurveComponent {
        &self.components[j]
    }

    /// Reverses the orientation of component `j`.
    pub fn with_reversed(&self, j: usize) -> Self {
        let mut components = self.components.clone();
        components[j] = components[j].reversed();
        Self { components }
    }

    /// Applies the projective transformation `m` to every lift.
    pub fn transformed(&self, m: &Matrix3<f64>) -> Self {
        Self {
            components: self.components.iter().map(|c| c.transformed(m)).collect(),
        }
    }

    /// Checks that every component is an immersion: `P × P'` never vanishes.
    pub fn validate(&self, settings: &Settings) -> Result<()> {
        for (j, c) in self.components.iter().enumerate() {
            let grid = c.grid(settings.scan_samples);
            let mut speeds = Vec::with_capacity(grid.len());
            for &t in &grid {
                let jet = c.jet(t);
                let pn = jet.p.norm();
                if !(pn > 0.0) || !pn.is_finite() {
                    return Err(CurveError::NotImmersed { component: j, t });
                }
                speeds.push((t, jet.tangent_line().norm() / (pn * pn)));
            }
            let max = speeds.iter().map(|s| s.1).fold(0.0, f64::max);
            if let Some(&(t, _)) = speeds
                .iter()
                .find(|s| !(s.1 > settings.tol.generic * max) || max == 0.0)
            {
                return Err(CurveError::NotImmersed { component: j, t });
            }
        }
        Ok(())
    }
}

/// Unit-normalized lift and its derivative: `V = W/|W|`, `V' = (W' - V (V·W'))/|W|`.
pub(crate) fn unit_with_derivative(w: Vec3, dw: Vec3) -> (Vec3, Vec3) {
    let n = w.norm();
    let v = w / n;
    (v, (dw - v * v.dot(&dw)) / n)
}
