#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! File formats, noise injection, benchmarking and CLI plumbing around
//! [`vsi_stereo_core`].

pub mod bench;
pub mod config;
pub mod dump;
mod error;
pub mod imgio;
pub mod noise;
pub mod pnm;
pub mod report;
pub mod timing;

pub use error::{Error, Result};
pub use vsi_stereo_core as core;

/// Worker cap from `STEREO_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("STEREO_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}
