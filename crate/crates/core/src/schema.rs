//! JSON curve files.
//!
//! ```json
//! { "schema_version": 1, "kind": "trig",
//!   "components": [ { "x_cos": [0, 1], "x_sin": [0, 0], "y_cos": [0, 0],
//!                     "y_sin": [0, 1], "z_cos": [1, 0], "z_sin": [0, 0] } ],
//!   "line_at_infinity": [0, 0, 1] }
//! ```
//!
//! Algebraic files carry `degree` and `monomials` (`{"i","j","k","c"}` for
//! `c · x^i y^j z^k`) instead of `components`, and optionally `"nodal": {"N": n}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebraic::{AlgebraicCurve, HomogeneousPoly, Monomial};
use crate::curve::{Curve, CurveComponent, TrigComponent};
use crate::error::{CurveError, Result};
use crate::geometry::{AffineChart, ProjectiveLine};

pub const CURVE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Trig,
    Algebraic,
}

/// Coefficients of one trigonometric component. All six arrays have the same
/// length; index `k` multiplies `cos(k t)` or `sin(k t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentCoeffs {
    pub x_cos: Vec<f64>,
    pub x_sin: Vec<f64>,
    pub y_cos: Vec<f64>,
    pub y_sin: Vec<f64>,
    pub z_cos: Vec<f64>,
    pub z_sin: Vec<f64>,
}

impl ComponentCoeffs {
    pub fn from_component(c: &TrigComponent) -> Self {
        let pick = |list: &[crate::geometry::Vec3], axis: usize| {
            list.iter().map(|v| v[axis]).collect::<Vec<_>>()
        };
        let (cos, sin) = (c.cos_coeffs(), c.sin_coeffs());
        Self {
            x_cos: pick(cos, 0),
            x_sin: pick(sin, 0),
            y_cos: pick(cos, 1),
            y_sin: pick(sin, 1),
            z_cos: pick(cos, 2),
            z_sin: pick(sin, 2),
        }
    }

    fn validate(&self, index: usize) -> Result<TrigComponent> {
        let arrays = [
            ("x_cos", &self.x_cos),
            ("x_sin", &self.x_sin),
            ("y_cos", &self.y_cos),
            ("y_sin", &self.y_sin),
            ("z_cos", &self.z_cos),
            ("z_sin", &self.z_sin),
        ];
        let len = self.x_cos.len();
        for (name, a) in arrays {
            if a.len() != len || a.is_empty() {
                return Err(CurveError::SchemaError(format!(
                    "components[{index}].{name}: length {}, expected {} (nonzero, same as x_cos)",
                    a.len(),
                    len.max(1)
                )));
            }
        }
        TrigComponent::from_arrays(
            &self.x_cos,
            &self.x_sin,
            &self.y_cos,
            &self.y_sin,
            &self.z_cos,
            &self.z_sin,
        )
        .map_err(|e| match e {
            CurveError::SchemaError(m) => {
                CurveError::SchemaError(format!("components[{index}]: {m}"))
            }
            other => other,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodalMeta {
    /// Total node count, real and complex.
    #[serde(rename = "N")]
    pub total: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub schema_version: u32,
    pub kind: CurveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ComponentCoeffs>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomials: Option<Vec<Monomial>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_at_infinity: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodal: Option<NodalMeta>,
}

/// A validated curve file.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveModel {
    Trig(Curve),
    Algebraic(AlgebraicCurve),
}

impl CurveFile {
    pub fn trig(curve: &Curve) -> Result<Self> {
        let components = curve
            .components()
            .iter()
            .map(|c| match c {
                CurveComponent::Trig(t) => Ok(ComponentCoeffs::from_component(t)),
                CurveComponent::Sampled(_) => Err(CurveError::SchemaError(
                    "sampled components cannot be written as trig coefficients".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            schema_version: CURVE_SCHEMA_VERSION,
            kind: CurveKind::Trig,
            components: Some(components),
            degree: None,
            monomials: None,
            line_at_infinity: None,
            nodal: None,
        })
    }

    pub fn algebraic(curve: &AlgebraicCurve) -> Self {
        Self {
            schema_version: CURVE_SCHEMA_VERSION,
            kind: CurveKind::Algebraic,
            components: None,
            degree: Some(curve.degree()),
            monomials: Some(curve.poly().terms().to_vec()),
            line_at_infinity: None,
            nodal: None,
        }
    }

    pub fn with_line_at_infinity(mut self, line: [f64; 3]) -> Self {
        self.line_at_infinity = Some(line);
        self
    }

    pub fn with_nodes(mut self, total: u32) -> Self {
        self.nodal = Some(NodalMeta { total });
        self
    }

    /// Parses JSON text; syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CurveFile =
            serde_json::from_str(text).map_err(|e| CurveError::SchemaError(e.to_string()))?;
        if file.schema_version != CURVE_SCHEMA_VERSION {
            return Err(CurveError::SchemaError(format!(
                "schema_version: unsupported value {}, expected {CURVE_SCHEMA_VERSION}",
                file.schema_version
            )));
        }
        file.model()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve files always serialize")
    }

    /// The chart, defaulting to `z = 0` as the line at infinity.
    pub fn chart(&self) -> Result<AffineChart> {
        match self.line_at_infinity {
            None => Ok(AffineChart::default()),
            Some(l) => ProjectiveLine::from_array(l)
                .map(AffineChart::new)
                .map_err(|_| {
                    CurveError::SchemaError(
                        "line_at_infinity: must be a nonzero finite triple".into(),
                    )
                }),
        }
    }

    pub fn model(&self) -> Result<CurveModel> {
        self.chart()?;
        match self.kind {
            CurveKind::Trig => {
                if self.degree.is_some() || self.monomials.is_some() {
                    return Err(CurveError::SchemaError(
                        "trig files take no degree or monomials".into(),
                    ));
                }
                let comps = self.components.as_ref().ok_or_else(|| {
                    CurveError::SchemaError("components: missing for kind trig".into())
                })?;
                if comps.is_empty() {
                    return Err(CurveError::EmptyCurve);
                }
                let comps = comps
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.validate(i).map(CurveComponent::from))
                    .collect::<Result<Vec<_>>>()?;
                Ok(CurveModel::Trig(Curve::new(comps)?))
            }
            CurveKind::Algebraic => {
                if self.components.is_some() {
                    return Err(CurveError::SchemaError(
                        "algebraic files take no components".into(),
                    ));
                }
                let degree = self.degree.ok_or_else(|| {
                    CurveError::SchemaError("degree: missing for kind algebraic".into())
                })?;
                let monomials = self.monomials.as_ref().ok_or_else(|| {
                    CurveError::SchemaError("monomials: missing for kind algebraic".into())
                })?;
                AlgebraicCurve::new(HomogeneousPoly::new(degree, monomials)?)
                    .map(CurveModel::Algebraic)
            }
        }
    }
}

pub fn parse(path: &Path) -> Result<CurveFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CurveError::Io(format!("{}: {e}", path.display())))?;
    CurveFile::from_json(&text)
}

pub fn emit(file: &CurveFile, path: &Path) -> Result<()> {
    std::fs::write(path, file.to_json())
        .map_err(|e| CurveError::Io(format!("{}: {e}", path.display())))
}
