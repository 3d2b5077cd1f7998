//! Named tolerances and resolution knobs.
//!
//! Every tolerance can be overridden by name, either through
//! `CURVELAB_TOL_<NAME>` environment variables or explicitly (the CLI's
//! `--tol NAME=VALUE`, which takes precedence).

use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Projective equality of unit-normalized points and lines.
    pub pt: f64,
    /// Collinearity threshold of the orientation predicate.
    pub orient: f64,
    /// Normalized curvature-derivative floor below which a flex is degenerate.
    pub flex: f64,
    /// Residual target of the Newton polishers.
    pub newton: f64,
    /// Parameter guard around the diagonal of the node and bitangent systems.
    pub diag: f64,
    /// Normalized margin below which a genericity predicate counts as violated.
    pub generic: f64,
    /// Admissible |F| (coefficient-normalized) at trace samples.
    pub trace: f64,
    /// Closing gap when a traced component returns to its start.
    pub glue: f64,
    /// Residual bound for algebraic polishing of flexes and bitangents.
    pub polish: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pt: 1e-9,
            orient: 1e-10,
            flex: 1e-7,
            newton: 1e-12,
            diag: 1e-3,
            generic: 1e-6,
            trace: 1e-10,
            glue: 1e-6,
            polish: 1e-10,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 9] = [
        "pt", "orient", "flex", "newton", "diag", "generic", "trace", "glue", "polish",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name.to_ascii_lowercase().as_str() {
            "pt" => &mut self.pt,
            "orient" => &mut self.orient,
            "flex" => &mut self.flex,
            "newton" => &mut self.newton,
            "diag" => &mut self.diag,
            "generic" => &mut self.generic,
            "trace" => &mut self.trace,
            "glue" => &mut self.glue,
            "polish" => &mut self.polish,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(CurveError::SchemaError(format!(
                "tolerance {name} must be positive and finite, got {value}"
            )));
        }
        match self.slot(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(CurveError::SchemaError(format!("unknown tolerance {name}"))),
        }
    }

    /// Parses `NAME=VALUE`.
    pub fn apply_assignment(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment.split_once('=').ok_or_else(|| {
            CurveError::SchemaError(format!("expected NAME=VALUE, got {assignment}"))
        })?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CurveError::SchemaError(format!("bad tolerance value in {assignment}")))?;
        self.set(name.trim(), value)
    }

    /// Applies `CURVELAB_TOL_*` overrides from an iterator of environment pairs.
    pub fn apply_env<I, K, V>(&mut self, vars: I) -> Result<()>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        for (key, value) in vars {
            if let Some(name) = key.as_ref().strip_prefix("CURVELAB_TOL_") {
                self.apply_assignment(&format!("{}={}", name, value.as_ref()))?;
            }
        }
        Ok(())
    }
}

/// Tolerances plus the resolutions of the various scans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub tol: Tolerances,
    /// Cells per parameter axis in the node/bitangent subdivision.
    pub subdivision: usize,
    /// Samples per component for one-dimensional root scans.
    pub scan_samples: usize,
    /// Grid points per component for the jump-function oracle.
    pub jump_grid: usize,
    /// Resolution of real-locus tracing (seed lines per pencil, target steps per turn).
    pub trace_resolution: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            subdivision: 2048,
            scan_samples: 4096,
            jump_grid: 1024,
            trace_resolution: 1024,
        }
    }
}

impl Settings {
    /// Doubles every resolution knob, leaving tolerances alone.
    pub fn refined(&self) -> Self {
        Self {
            tol: self.tol,
            subdivision: self.subdivision * 2,
            scan_samples: self.scan_samples * 2,
            jump_grid: self.jump_grid * 2,
            trace_resolution: self.trace_resolution * 2,
        }
    }
}
