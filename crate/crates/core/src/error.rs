use thiserror::Error;

/// Failure modes of the curve engine.
///
/// Variants fall into three families: genericity rejections (the input is
/// outside the class of curves the signed counts are defined for), identity
/// violations, and input/schema problems. [`CurveError::is_genericity`] and
/// [`CurveError::is_schema`] let front ends map them to distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("points coincide; no unique line through them")]
    CoincidentPoints,
    #[error("lines coincide; no unique intersection point")]
    CoincidentLines,
    #[error("point lies on the line at infinity of the chart")]
    OnInfinity,
    #[error("component {component} is not immersed near t = {t}")]
    NotImmersed { component: usize, t: f64 },
    #[error("degenerate flex on component {component} near t = {t} (curvature vanishes to higher order)")]
    DegenerateFlex { component: usize, t: f64 },
    #[error("tangential intersection between ({0}, {1}) and ({2}, {3})")]
    TangentialIntersection(usize, f64, usize, f64),
    #[error("line is tangent at three or more points")]
    TripleTangent,
    #[error("bitangent passes through a point of C on the line at infinity")]
    InfinityTangency,
    #[error("cannot decide the side of a bitangent (tangency at or near a flex)")]
    AmbiguousSide,
    #[error("curve is not transverse to the line at infinity near component {component}, t = {t}")]
    NonTransverseInfinity { component: usize, t: f64 },
    #[error("non-generic tangent: {0}")]
    NonGenericTangent(String),
    #[error("node lies on the line at infinity")]
    NodeOnInfinity,
    #[error("tangent through the pencil point is not simple near component {component}, t = {t}")]
    NonSimpleTangency { component: usize, t: f64 },
    #[error("uncatalogued jump of f on component {component} in ({from}, {to}): observed {observed}, expected {expected}")]
    UncataloguedJump {
        component: usize,
        from: f64,
        to: f64,
        observed: i64,
        expected: i64,
    },
    #[error("curve meets the line at infinity (a = {0}); affine identity does not apply")]
    NotAffine(usize),
    #[error("real locus is empty")]
    EmptyRealLocus,
    #[error("real singular point on the curve at {0:?}")]
    SingularPointHit([f64; 3]),
    #[error("tracing failed: {0}")]
    TracingGapError(String),
    #[error("flex count mismatch: algebraic {algebraic}, parametric {parametric}")]
    FlexMismatch { algebraic: usize, parametric: usize },
    #[error("Newton polish diverged from candidate {0:?}")]
    PolishDivergence(Vec<f64>),
    #[error("Klein's formula violated: t0 = {0}/2 is negative or not an integer")]
    KleinViolation(i64),
    #[error("identity violated: lhs = {lhs}, rhs = {rhs}")]
    IdentityViolation { lhs: f64, rhs: f64 },
    #[error("cannot classify real node at {0:?}")]
    NodeClassificationAmbiguous([f64; 3]),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("monomial x^{i} y^{j} z^{k} does not have degree {degree}")]
    DegreeMismatch { i: u32, j: u32, k: u32, degree: u32 },
    #[error("curve has no components or an all-zero defining polynomial")]
    EmptyCurve,
    #[error("i/o error: {0}")]
    Io(String),
}

impl CurveError {
    /// True for rejections caused by a non-generic input curve.
    pub fn is_genericity(&self) -> bool {
        use CurveError::*;
        matches!(
            self,
            NotImmersed { .. }
                | DegenerateFlex { .. }
                | TangentialIntersection(..)
                | TripleTangent
                | InfinityTangency
                | AmbiguousSide
                | NonTransverseInfinity { .. }
                | NonGenericTangent(_)
                | NodeOnInfinity
                | NonSimpleTangency { .. }
                | NotAffine(_)
                | SingularPointHit(_)
                | NodeClassificationAmbiguous(_)
                | CoincidentPoints
                | CoincidentLines
                | OnInfinity
        )
    }

    pub fn is_schema(&self) -> bool {
        matches!(
            self,
            CurveError::SchemaError(_)
                | CurveError::DegreeMismatch { .. }
                | CurveError::EmptyCurve
                | CurveError::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, CurveError>;
