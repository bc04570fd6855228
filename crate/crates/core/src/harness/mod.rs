//! Experiment configuration, BER sweeps, batch execution, timing reports
//! and output formats.

mod batch;
mod config;
mod csv;
mod sweep;
mod timing;
mod verify;

pub use batch::{run_parallel_batch, BatchItem};
pub use config::{SimulationConfig, DEFAULT_PARALLEL_WIDTH, THREADS_ENV};
pub use csv::{csv_string, format_float, write_csv, CSV_HEADER};
pub use sweep::{
    collect_timings, mean_decode_times, run_ber_sweep, run_ber_sweep_with_width, BerRecord,
    TimingSample, ANNEAL_STREAM_TAG,
};
pub use timing::{timing_report, TimingReport, TimingRow};
pub use verify::{verify_closed_form, VerifyReport, DEFAULT_VERIFY_TOLERANCE, VERIFY_MAX_USERS};
