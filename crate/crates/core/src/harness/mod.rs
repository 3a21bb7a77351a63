//! Experiment driver: test sets, error measurement against the
//! extended-precision reference, timing, and the command line.

mod bench;
mod cli;
mod functions;
mod measure;
mod testset;

pub use bench::{bench_csv, bench_suite, bench_timing, process_cpu_ns, TimingRecord};
pub use cli::{exit_code, run_cli, THREADS_ENV};
pub use functions::{TestFunction, TEST_FUNCTIONS};
pub use measure::{measure_errors, Aggregate, ErrorReport, Interpolant, NodeMode, PointErrors};
pub use testset::{
    build_test_set, Anchor, TestSet, INTERVALS, NEIGHBOURS_PER_SIDE, UNIFORM_PER_INTERVAL,
};
