//! File formats, benchmark harness and statistics around the
//! `carptdsc-core` solver.

pub mod annotation;
pub mod carp_file;
pub mod error;
pub mod experiment;
pub mod io;
pub mod solomon;
pub mod solution_text;
pub mod stats;

pub use annotation::{generate_td, TdAnnotation, TdFamily};
pub use carp_file::{parse_carp, StaticInstanceFile};
pub use error::{Error, Result};
pub use experiment::{compare, run_experiment, ExperimentReport, RunConfig};
pub use solomon::parse_solomon;
pub use stats::{pdr, wilcoxon_rank_sum, Verdict};
