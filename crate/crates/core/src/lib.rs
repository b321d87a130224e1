//! Shape signatures of closed planar curves built from bidimensional
//! degree-0 persistence, augmented by the reflections of the plane.
//!
//! Two generic curves share the signatures of all four reflected copies exactly
//! when one is a reparameterization of the other. The crate computes those
//! signatures, compares them, and inverts them back to the curve image.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod error;
pub mod foliation;
pub mod geometry;
pub mod inverse;
pub mod io;
pub mod matching;
pub mod persistence;

pub use curve::{
    check_class_bound, check_generic, generate, perturb_smooth, reflect, reparameterize,
    ClassBoundReport, CorpusKind, CorpusParams, GenericityReport, Orientation, Reflection,
    SampledCurve,
};
pub use error::{CurveSigError, Result};
pub use foliation::{line_diagram, rank_via_line, reduce, AdmissibleLine, LineGrid};
pub use geometry::Point;
pub use inverse::{
    alternating_sum, build_reparameterization, reconstruct_image, BoundingBox, CurveOracle,
    OccupancyGrid, ProbeRectangle, RankOracle, Reparameterization,
};
pub use matching::{
    decide_equivalence, diagram_distance, dmatch, sigma2_distance, EquivalenceVerdict,
    Sigma2DistanceTable, Verdict,
};
pub use persistence::{circle_diagram, diagram_rank, rank_h0, PersistenceDiagram};
