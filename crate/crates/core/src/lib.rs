//! Constant 2-labellings of weighted cycles and `(r, a, b)`-codes of the
//! square grid under the Manhattan metric.
//!
//! A diagonal coloring of `Z²` is an `(r, a, b)`-code exactly when its line
//! pattern is a constant 2-labelling of the cycle obtained by projecting a
//! radius-`r` ball along the diagonal and folding it modulo the period.

pub mod codes;
pub mod cycles;
pub mod error;
pub mod label;
pub mod lattice;
pub mod weight;

pub use codes::{
    end_to_end, family_cycle, generate_code, theorem_table, CodePreset, CodeTableRow, Family,
    FamilySpec, PipelineReport, Variant,
};
pub use cycles::{
    build_cycle, cross_check, pattern_class, predicted_rows, rotation, rotation_instance,
    CrossCheckReport, CycleFamily, CycleSpec, PatternClass, PredictedRow, WeightMode,
    WeightedCycle,
};
pub use error::{Error, Result};
pub use label::{
    classify_labelling, complement_coloring, complete_graph_admits_nontrivial,
    enumerate_labellings, Automorphism, Color, Coloring, LabellingInstance, LabellingVerdict,
    VerdictKind, VertexWeighting,
};
pub use lattice::{
    build_diagonal_coloring, closed_form_profile, fold_profile, manhattan_ball_size, project_ball,
    verify_code, CodeReport, LinePattern, Orientation, PeriodicColoring, ProjectionProfile,
};
pub use weight::{Rational, RelationSet, Symbol, WeightExpr};
