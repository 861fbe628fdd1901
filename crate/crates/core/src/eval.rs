//! Bad-pixel evaluation against ground truth.

use alloc::string::String;
use alloc::vec::Vec;

use crate::disparity::DisparityMap;
use crate::pipeline::Algorithm;
use crate::{Error, GroundTruth, Image, Mask, Result, RgbImage};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MismatchStats {
    pub evaluated: usize,
    pub bad: usize,
    /// `100 × bad / evaluated`.
    pub percent: f64,
}

fn check(pred: &DisparityMap, gt: &GroundTruth, mask: Option<&Mask>, bad_thresh: f64) -> Result<()> {
    Error::check_dims(gt.dims(), pred.dims())?;
    if let Some(m) = mask {
        Error::check_dims(gt.dims(), (m.width, m.height))?;
    }
    if !(bad_thresh > 0.0) {
        return Err(Error::param("bad_thresh", "must be positive"));
    }
    Ok(())
}

#[inline]
fn evaluated(gt: &GroundTruth, mask: Option<&Mask>, i: usize) -> bool {
    !gt.unknown[i] && mask.is_none_or(|m| m.data[i])
}

#[inline]
fn is_bad(pred: &DisparityMap, gt: &GroundTruth, i: usize, bad_thresh: f64) -> bool {
    libm::fabs(pred.disp[i] - gt.disparity[i]) > bad_thresh
}

/// Percentage of evaluated pixels whose error exceeds `bad_thresh`.
///
/// A pixel is evaluated when its ground truth is known and the optional mask
/// (e.g. non-occluded pixels) is set.
pub fn mismatch_rate(
    pred: &DisparityMap,
    gt: &GroundTruth,
    mask: Option<&Mask>,
    bad_thresh: f64,
) -> Result<MismatchStats> {
    check(pred, gt, mask, bad_thresh)?;
    let (mut n, mut bad) = (0usize, 0usize);
    for i in 0..gt.disparity.len() {
        if evaluated(gt, mask, i) {
            n += 1;
            bad += usize::from(is_bad(pred, gt, i, bad_thresh));
        }
    }
    if n == 0 {
        return Err(Error::NothingEvaluated);
    }
    Ok(MismatchStats {
        evaluated: n,
        bad,
        percent: 100.0 * bad as f64 / n as f64,
    })
}

pub const RED: [u8; 3] = [255, 0, 0];

/// Gray `base` promoted to RGB with bad pixels painted pure red.
pub fn error_overlay(
    pred: &DisparityMap,
    gt: &GroundTruth,
    base: &Image,
    mask: Option<&Mask>,
    bad_thresh: f64,
) -> Result<RgbImage> {
    check(pred, gt, mask, bad_thresh)?;
    Error::check_dims(gt.dims(), base.dims())?;
    let mut out = RgbImage::from_gray(base);
    for (i, px) in out.data.iter_mut().enumerate() {
        if evaluated(gt, mask, i) && is_bad(pred, gt, i, bad_thresh) {
            *px = RED;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalEntry {
    pub name: String,
    pub algorithm: Algorithm,
    pub noise: f64,
    pub evaluated: usize,
    pub bad: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub name: String,
    pub algorithm: Algorithm,
    pub noise: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Average {
    pub algorithm: Algorithm,
    pub noise: f64,
    pub images: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalReport {
    pub bad_thresh: f64,
    pub entries: Vec<EvalEntry>,
    pub failures: Vec<CellFailure>,
}

impl EvalReport {
    pub fn new(bad_thresh: f64) -> Self {
        EvalReport {
            bad_thresh,
            ..Default::default()
        }
    }

    /// Arithmetic mean of `percent` per (algorithm, noise), in order of
    /// first appearance.
    pub fn averages(&self) -> Vec<Average> {
        let mut out: Vec<(Average, f64)> = Vec::new();
        for e in &self.entries {
            let slot = out
                .iter_mut()
                .find(|(a, _)| a.algorithm == e.algorithm && a.noise.to_bits() == e.noise.to_bits());
            match slot {
                Some((a, sum)) => {
                    a.images += 1;
                    *sum += e.percent;
                }
                None => out.push((
                    Average {
                        algorithm: e.algorithm,
                        noise: e.noise,
                        images: 1,
                        percent: 0.0,
                    },
                    e.percent,
                )),
            }
        }
        out.into_iter()
            .map(|(mut a, sum)| {
                a.percent = sum / a.images as f64;
                a
            })
            .collect()
    }

    pub fn average(&self, algorithm: Algorithm, noise: f64) -> Option<f64> {
        self.averages()
            .into_iter()
            .find(|a| a.algorithm == algorithm && a.noise == noise)
            .map(|a| a.percent)
    }

    pub fn entry(&self, name: &str, algorithm: Algorithm, noise: f64) -> Option<&EvalEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name && e.algorithm == algorithm && e.noise == noise)
    }
}
