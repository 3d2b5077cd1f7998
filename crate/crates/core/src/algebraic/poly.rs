use std::collections::BTreeMap;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};
use crate::geometry::Vec3;

/// One term `c · x^i y^j z^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub c: f64,
}

/// A homogeneous polynomial in `x, y, z`, stored sparsely with exponents
/// sorted lexicographically (descending in `x`, then `y`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousPoly {
    degree: u32,
    terms: Vec<Monomial>,
}

impl HomogeneousPoly {
    /// Collects like terms and drops zeros. Fails on inhomogeneous input or an
    /// identically zero polynomial.
    pub fn new(degree: u32, terms: &[Monomial]) -> Result<Self> {
        let p = Self::from_terms_unchecked(degree, terms)?;
        if p.terms.is_empty() {
            return Err(CurveError::EmptyCurve);
        }
        Ok(p)
    }

    fn from_terms_unchecked(degree: u32, terms: &[Monomial]) -> Result<Self> {
        let mut acc: BTreeMap<(u32, u32, u32), f64> = BTreeMap::new();
        for m in terms {
            if m.i + m.j + m.k != degree {
                return Err(CurveError::DegreeMismatch {
                    i: m.i,
                    j: m.j,
                    k: m.k,
                    degree,
                });
            }
            if !m.c.is_finite() {
                return Err(CurveError::SchemaError(format!(
                    "coefficient of x^{} y^{} z^{} is not finite",
                    m.i, m.j, m.k
                )));
            }
            *acc.entry((m.i, m.j, m.k)).or_insert(0.0) += m.c;
        }
        let mut out: Vec<Monomial> = acc
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|((i, j, k), c)| Monomial { i, j, k, c })
            .collect();
        out.sort_by_key(|m| std::cmp::Reverse((m.i, m.j)));
        Ok(Self { degree, terms: out })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest absolute coefficient.
    pub fn scale(&self) -> f64 {
        self.terms.iter().map(|m| m.c.abs()).fold(0.0, f64::max)
    }

    pub fn eval(&self, p: &Vec3) -> f64 {
        let d = self.degree as usize;
        let mut pw = [[1.0f64; 16]; 3];
        for a in 0..3 {
            for e in 1..=d.min(15) {
                pw[a][e] = pw[a][e - 1] * p[a];
            }
        }
        if d > 15 {
            return self
                .terms
                .iter()
                .map(|m| {
                    m.c * p[0].powi(m.i as i32) * p[1].powi(m.j as i32) * p[2].powi(m.k as i32)
                })
                .sum();
        }
        self.terms
            .iter()
            .map(|m| m.c * pw[0][m.i as usize] * pw[1][m.j as usize] * pw[2][m.k as usize])
            .sum()
    }

    /// Partial derivative with respect to coordinate `axis` (0 = x, 1 = y, 2 = z).
    pub fn derivative(&self, axis: usize) -> Self {
        let degree = self.degree.saturating_sub(1);
        let terms: Vec<Monomial> = self
            .terms
            .iter()
            .filter_map(|m| {
                let e = [m.i, m.j, m.k];
                if e[axis] == 0 {
                    return None;
                }
                let mut f = e;
                f[axis] -= 1;
                Some(Monomial {
                    i: f[0],
                    j: f[1],
                    k: f[2],
                    c: m.c * e[axis] as f64,
                })
            })
            .collect();
        Self::from_terms_unchecked(degree, &terms).expect("derivative stays homogeneous")
    }

    /// The polynomial `G(p) = F(m p)`.
    pub fn compose_linear(&self, m: &Matrix3<f64>) -> Self {
        // Each variable becomes a linear form; expand term by term.
        let forms: Vec<BTreeMap<(u32, u32, u32), f64>> = (0..3)
            .map(|r| {
                let mut f = BTreeMap::new();
                f.insert((1, 0, 0), m[(r, 0)]);
                f.insert((0, 1, 0), m[(r, 1)]);
                f.insert((0, 0, 1), m[(r, 2)]);
                f
            })
            .collect();
        let mul = |a: &BTreeMap<(u32, u32, u32), f64>, b: &BTreeMap<(u32, u32, u32), f64>| {
            let mut out = BTreeMap::new();
            for (ea, ca) in a {
                for (eb, cb) in b {
                    *out.entry((ea.0 + eb.0, ea.1 + eb.1, ea.2 + eb.2))
                        .or_insert(0.0) += ca * cb;
                }
            }
            out
        };
        let mut total: BTreeMap<(u32, u32, u32), f64> = BTreeMap::new();
        for t in &self.terms {
            let mut prod = BTreeMap::new();
            prod.insert((0, 0, 0), t.c);
            for (axis, e) in [t.i, t.j, t.k].into_iter().enumerate() {
                for _ in 0..e {
                    prod = mul(&prod, &forms[axis]);
                }
            }
            for (e, c) in prod {
                *total.entry(e).or_insert(0.0) += c;
            }
        }
        let terms: Vec<Monomial> = total
            .into_iter()
            .map(|((i, j, k), c)| Monomial { i, j, k, c })
            .collect();
        Self::from_terms_unchecked(self.degree, &terms).expect("composition stays homogeneous")
    }
}

/// A polynomial with its partial derivatives up to order three.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyJet {
    f: HomogeneousPoly,
    d1: Vec<HomogeneousPoly>,
    d2: Vec<HomogeneousPoly>,
    d3: Vec<HomogeneousPoly>,
}

fn idx2(a: usize, b: usize) -> usize {
    3 * a + b
}

fn idx3(a: usize, b: usize, c: usize) -> usize {
    9 * a + 3 * b + c
}

impl PolyJet {
    pub fn new(f: HomogeneousPoly) -> Self {
        let d1: Vec<_> = (0..3).map(|a| f.derivative(a)).collect();
        let d2: Vec<_> = (0..9).map(|ab| d1[ab / 3].derivative(ab % 3)).collect();
        let d3: Vec<_> = (0..27).map(|abc| d2[abc / 3].derivative(abc % 3)).collect();
        Self { f, d1, d2, d3 }
    }

    pub fn poly(&self) -> &HomogeneousPoly {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.f.degree()
    }

    pub fn eval(&self, p: &Vec3) -> f64 {
        self.f.eval(p)
    }

    pub fn grad(&self, p: &Vec3) -> Vec3 {
        Vec3::new(self.d1[0].eval(p), self.d1[1].eval(p), self.d1[2].eval(p))
    }

    pub fn hessian(&self, p: &Vec3) -> Matrix3<f64> {
        Matrix3::from_fn(|a, b| self.d2[idx2(a, b)].eval(p))
    }

    pub fn hessian_det(&self, p: &Vec3) -> f64 {
        self.hessian(p).determinant()
    }

    /// Third derivative tensor contracted twice: `Σ F_abc u_b v_c`.
    pub fn third(&self, p: &Vec3, u: &Vec3, v: &Vec3) -> Vec3 {
        let mut out = Vec3::zeros();
        for a in 0..3 {
            let mut s = 0.0;
            for b in 0..3 {
                for c in 0..3 {
                    if u[b] != 0.0 && v[c] != 0.0 {
                        s += self.d3[idx3(a, b, c)].eval(p) * u[b] * v[c];
                    }
                }
            }
            out[a] = s;
        }
        out
    }

    /// Gradient of `det H` via Jacobi's formula.
    pub fn hessian_det_grad(&self, p: &Vec3) -> Vec3 {
        let h = self.hessian(p);
        let adj = adjugate(&h);
        let mut g = Vec3::zeros();
        for m in 0..3 {
            let dh = Matrix3::from_fn(|a, b| self.d3[idx3(a, b, m)].eval(p));
            g[m] = (adj * dh).trace();
        }
        g
    }
}

pub(crate) fn adjugate(h: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
        h[(r0, c0)] * h[(r1, c1)] - h[(r0, c1)] * h[(r1, c0)]
    };
    // Transposed cofactor matrix.
    Matrix3::new(
        c(1, 2, 1, 2),
        -c(0, 2, 1, 2),
        c(0, 1, 1, 2),
        -c(1, 2, 0, 2),
        c(0, 2, 0, 2),
        -c(0, 1, 0, 2),
        c(1, 2, 0, 1),
        -c(0, 2, 0, 1),
        c(0, 1, 0, 1),
    )
}
