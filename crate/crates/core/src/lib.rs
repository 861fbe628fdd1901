//! Dense two-frame stereo matching kernels.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure,
//! allocation-bounded image kernels:
//!
//! - [`gradient`]: 3×3 template convolution, gradient magnitude and the
//!   per-pixel direction factor.
//! - [`cost`]: census transform, Hamming cost, exponential cost mapping and
//!   the gradient-gated combined cost volume.
//! - [`aggregation`]: direction-modulated cross arms, support-region mean
//!   aggregation and the fixed-window baseline.
//! - [`disparity`]: winner-take-all, left–right consistency, hole filling
//!   and median cleanup.
//! - [`eval`]: bad-pixel rates and error overlays.
//! - [`pipeline`]: the end-to-end matcher for both algorithms.
//!
//! File formats, noise injection and the CLI live in the `vsi-stereo` crate.
//! Enable the `rayon` feature to process rows and disparity planes in
//! parallel; results are identical for any thread count.
#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod aggregation;
pub mod cost;
pub mod disparity;
mod error;
pub mod eval;
pub mod gradient;
mod image;
mod par;
pub mod pipeline;

pub use error::{Error, Result};
pub use image::{GroundTruth, Image, Mask, RgbImage};
