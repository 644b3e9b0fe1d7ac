//! Config parsing, the time loop, convergence studies, presets and output files.

mod config;
mod convergence;
mod output;
mod presets;
mod run;

pub use config::{
    DiagnosticsSection, MeshSection, OutputSection, ProblemSection, RunConfig, SchemePair, SchemeSection, Study,
    SweepSection,
    TimeSection,
};
pub use convergence::{convergence_study, least_squares_slope, log_log_slope, ConvergenceRow, ConvergenceTable};
pub use output::{emit_convergence, emit_outputs, OutputPaths, FIELD_HEADER, SERIES_HEADER};
pub use presets::{find_preset, Preset, PRESETS};
pub use run::{run, run_all, run_parallel, RunOutcome, RunRecord, RunSummary, DIVERGENCE_BOUND};
