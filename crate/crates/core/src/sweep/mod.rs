//! Parameter sweeps, 1-D optimization and multi-scheme comparison tables.

pub mod compare;
pub mod exec;
pub mod golden;
pub mod optimize;

pub use compare::{compare_schemes, compare_schemes_with, Comparison, SchemeColumn};
pub use exec::{
    evaluate_at, map_points, run_sweep, run_sweep_with, Axis, ExecutionMode, Range, Scale, SweepResult, SweepRow,
    SweepSpec,
};
pub use golden::{golden_section_max, GoldenMax};
pub use optimize::{optimize, Objective, OptimizeSpec, Optimum};
