//! Experiment configuration, batch execution and result output.
//!
//! Every run draws from its own generator, seeded from a hash of the base
//! seed, the cell coordinates and the run index, so results do not depend on
//! scheduling or on the number of worker threads.

mod config;
mod output;
mod report;
mod runner;
mod sweep;

pub use config::{
    default_budget, derive_seed, AlgorithmConfig, AlgorithmKind, ExperimentConfig, DEFAULT_RUNS,
    DEFAULT_SEED,
};
pub use output::{
    csv_string, json_string, read_csv, read_trace_csv, write_csv, write_file, write_json,
    write_trace_csv, CsvRow, ResultsDocument, TraceRow, EVALUATION_ACCOUNTING,
};
pub use report::{AggregateReport, Summary};
pub use runner::{run_batch, run_single, Outcome, RunRecord, TracePoint};
pub use sweep::{bernoulli_p_grid, gaussian_q_grid, run_cells, sweep, NoiseGrid, SweepGrid};
