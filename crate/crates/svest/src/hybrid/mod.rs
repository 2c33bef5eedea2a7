//! Hybrid-system estimation on exact rational polygons.
//!
//! [`geometry`] provides the convex-polygon calculus (intersection,
//! affine images, canonical forms) over arbitrary-precision rationals;
//! [`twotank`] builds the quantized two-tank benchmark on top of it.

pub mod geometry;
pub mod twotank;

pub use geometry::{integer, ratio, Mat2, Point2, Rational, RationalPolygon};
pub use twotank::{
    collapsed_count, observed_symbols, run_experiment, symbolic_step, twotank_aggregation_suite,
    twotank_complexity, twotank_feasibility_oracle, CollapsedCount, ExperimentReport,
    ExperimentStep, SymbolicEstimate, TwoTankAutomatonReport, TwoTankComplexity, TwoTankModel,
    TwoTankOracle, TwoTankSymbol, TwoTankTrace, TwoTankView,
};
