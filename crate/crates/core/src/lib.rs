//! Fibre surfaces Σ(p,q) of torus links, the curve systems they carry, and
//! certified checks of the crossing-number bounds built from them.
//!
//! The pipeline is: [`build_surface`] → [`enumerate_system`] →
//! [`coarse_matrix`] → [`greedy_prune`], with [`bounds`] evaluating the
//! inequalities at scales where no matrix can be built.

pub mod bounds;
pub mod crossings;
pub mod curves;
pub mod error;
pub mod prune;
pub mod render;
pub mod report;
pub mod surface;
pub mod verify;

pub use bounds::{
    binomial_constant_check, chi_embedding_check, growth_check, hp_lower, lower_bound_chain_check,
    plan_parameters, step_ii_threshold, theorem_bounds, theorem_lower, theorem_upper, Alpha,
    BinomialConstantCheck, ChiCheck, GrowthCheck, HpLower, Interval, LowerChainCheck, Plan,
    PowerFloor, TheoremBounds, Threshold, DEFAULT_PRECISION,
};
pub use crossings::{
    chord_crossings_at_vertex, chord_crossings_for_pair, chord_diagram, coarse_matrix,
    coarse_pair_bound, coarse_summary, total_coarse, upper_overlap, ChordDiagram, CoarseTotal,
    CrossingEntry, LaneAssignment, OverlapClass, SparseCrossingMatrix,
};
pub use curves::{
    distinguishing_vertex, enumerate_system, is_null_homologous, realize_curve, system_size,
    CurveId, CurveSystem, CurveWalk, Distinguisher, LowerSet,
};
pub use error::{Error, Result};
pub use prune::{chain_dominates, greedy_prune, pruned_bound, ChainCertificate, PruneStep, PruneTrace};
pub use report::{bound_report, BoundReport};
pub use surface::{
    build_surface, euler_characteristic, surface_summary, trace_boundary, BoundaryWalk, Direction,
    Edge, RibbonGraph, Side, Step, SurfaceSummary, Vertex,
};
