#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vsi_stereo_core::aggregation::{Arms, CrossArms};
use vsi_stereo_core::cost::CostVolume;
use vsi_stereo_core::Image;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer-valued texture in `[lo, hi]`.
pub fn texture(rng: &mut impl Rng, w: usize, h: usize, lo: u32, hi: u32) -> Image {
    let data = (0..w * h).map(|_| f64::from(rng.random_range(lo..=hi))).collect();
    Image::new(w, h, data).unwrap()
}

/// `(left, right)` where the right view is the left shifted by `shift`
/// pixels: `right(x) = left(x + shift)`.
pub fn shifted_pair(rng: &mut impl Rng, w: usize, h: usize, shift: usize) -> (Image, Image) {
    let wide = texture(rng, w + shift, h, 0, 255);
    let left = Image::from_fn(w, h, |x, y| wide.get(x, y));
    let right = Image::from_fn(w, h, |x, y| wide.get(x + shift, y));
    (left, right)
}

pub fn random_volume(rng: &mut impl Rng, w: usize, h: usize, d: usize) -> CostVolume {
    let cost = (0..w * h * d).map(|_| rng.random_range(0.0f32..10.0)).collect();
    CostVolume::new(w, h, d, cost).unwrap()
}

/// Random arms that respect the image border.
pub fn random_arms(rng: &mut impl Rng, w: usize, h: usize) -> CrossArms {
    let mut arms = CrossArms::zero(w, h);
    for y in 0..h {
        for x in 0..w {
            arms.arms[y * w + x] = Arms {
                left: rng.random_range(0..=x) as u32,
                right: rng.random_range(0..=(w - 1 - x)) as u32,
                up: rng.random_range(0..=y) as u32,
                down: rng.random_range(0..=(h - 1 - y)) as u32,
            };
        }
    }
    arms
}

/// Explicit support region of `(x, y)`: every pixel on the horizontal
/// segment of every pixel on the vertical segment.
pub fn support_region(arms: &CrossArms, x: usize, y: usize) -> Vec<(usize, usize)> {
    let a = arms.get(x, y);
    let mut region = Vec::new();
    for qy in y - a.up as usize..=y + a.down as usize {
        let b = arms.get(x, qy);
        for qx in x - b.left as usize..=x + b.right as usize {
            region.push((qx, qy));
        }
    }
    region
}

/// Brute-force region mean, accumulated in f64.
pub fn brute_force_aggregate(vol: &CostVolume, arms: &CrossArms) -> Vec<f64> {
    let mut out = Vec::with_capacity(vol.cost.len());
    for y in 0..vol.height {
        for x in 0..vol.width {
            let region = support_region(arms, x, y);
            for d in 0..vol.disp_count {
                let sum: f64 = region.iter().map(|&(qx, qy)| f64::from(vol.get(qx, qy, d))).sum();
                out.push(sum / region.len() as f64);
            }
        }
    }
    out
}

/// Independent bad-pixel count with a plain double loop.
pub fn double_loop_count(
    pred: &[f64],
    gt: &[f64],
    unknown: &[bool],
    mask: Option<&[bool]>,
    w: usize,
    h: usize,
    thresh: f64,
) -> (usize, usize) {
    let (mut n, mut bad) = (0, 0);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if unknown[i] || mask.is_some_and(|m| !m[i]) {
                continue;
            }
            n += 1;
            if (pred[i] - gt[i]).abs() > thresh {
                bad += 1;
            }
        }
    }
    (n, bad)
}
