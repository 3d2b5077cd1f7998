//! Flexes, nodes and signed bitangent counts of closed curves in the real
//! projective plane, for trigonometric parametrizations and for real
//! algebraic curves.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebraic;
pub mod config;
pub mod curve;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod roots;
pub mod schema;
pub mod suite;

pub use config::{Settings, Tolerances};
pub use curve::{
    analyze, classify_bitangent, find_bitangents, find_flexes, find_nodes, infinity_profile,
    jump_catalog, jump_profile, line_crossings, sigma_l, signed_count_sigma,
    tangents_through_point, Bitangent, BitangentKind, Curve, CurveComponent, FeatureSet, Flex,
    InfinityEntry, InfinityProfile, Jet, JumpEvent, JumpKind, JumpProfile, Node, ParamRef,
    PencilTangent, SampledComponent, SignedCount, TrigComponent,
};
pub use error::{CurveError, Result};
pub use geometry::{
    join, meet, orient, AffineChart, AffinePoint, HomogeneousPoint, ProjectiveLine, Vec3,
};
pub use invariants::{Statement, VerificationReport};
pub use schema::{CurveFile, CurveModel};
