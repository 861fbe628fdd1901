//! Cross-based adaptive support regions and cost aggregation.
//!
//! Each pixel grows four arms (left, right, up, down). An arm keeps
//! extending while the new pixel stays close in intensity to the reference
//! pixel and to the previous pixel on the arm. The reference threshold is
//! modulated by how well the arm lines up with the gradient direction, and
//! switches to the stricter far-zone threshold once the arm reaches `l1`.
//! The support region of `p` is the union of the horizontal segments of all
//! pixels on `p`'s vertical segment.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::cost::CostVolume;
use crate::gradient::GradientField;
use crate::par::for_each_chunk_mut;
use crate::{Error, Image, Result};

/// How the direction factor adjusts a gray threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdMode {
    /// `τ · (1 + α|cos Δ|)`: looser along the gradient direction.
    #[default]
    Relax,
    /// `τ / (1 + α|cos Δ|)`: stricter along the gradient direction.
    Tighten,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossParams {
    /// End of the near zone (exclusive), in pixels.
    pub l1: usize,
    /// Hard arm-length cap (exclusive), in pixels.
    pub l2: usize,
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: f64,
    pub alpha: f64,
    pub mode: ThresholdMode,
}

impl Default for CrossParams {
    fn default() -> Self {
        CrossParams {
            l1: 5,
            l2: 10,
            tau1: 40.0,
            tau2: 40.0,
            tau3: 15.0,
            alpha: 0.5,
            mode: ThresholdMode::Relax,
        }
    }
}

impl CrossParams {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [("tau1", self.tau1), ("tau2", self.tau2), ("tau3", self.tau3)] {
            if !(v > 0.0) {
                return Err(Error::param(field, "must be positive"));
            }
        }
        if !(self.tau3 < self.tau2) {
            return Err(Error::param("tau3", "must be below tau2"));
        }
        if !(self.tau2 <= self.tau1) {
            return Err(Error::param("tau2", "must not exceed tau1"));
        }
        if self.l1 >= self.l2 {
            return Err(Error::param("l1", "must be below l2"));
        }
        if self.l2 > u32::MAX as usize {
            return Err(Error::param("l2", "too large"));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::param("alpha", "must be finite and non-negative"));
        }
        Ok(())
    }
}

/// `τ · (1 + α·|cos(arm_dir − θ)|)`.
#[inline]
pub fn modulated_threshold(tau: f64, arm_dir: f64, theta: f64, alpha: f64) -> f64 {
    tau * alignment_factor(arm_dir, theta, alpha)
}

#[inline]
fn alignment_factor(arm_dir: f64, theta: f64, alpha: f64) -> f64 {
    1.0 + alpha * libm::fabs(libm::cos(arm_dir - theta))
}

fn threshold(mode: ThresholdMode, tau: f64, factor: f64) -> f64 {
    match mode {
        ThresholdMode::Relax => tau * factor,
        ThresholdMode::Tighten => tau / factor,
    }
}

/// Arm lengths of one pixel, excluding the pixel itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Arms {
    pub left: u32,
    pub right: u32,
    pub up: u32,
    pub down: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArmDirection {
    Left,
    Right,
    Up,
    Down,
}

impl ArmDirection {
    pub const ALL: [ArmDirection; 4] = [
        ArmDirection::Left,
        ArmDirection::Right,
        ArmDirection::Up,
        ArmDirection::Down,
    ];

    /// Angle in image coordinates (y grows downward).
    pub fn angle(self) -> f64 {
        match self {
            ArmDirection::Right => 0.0,
            ArmDirection::Down => FRAC_PI_2,
            ArmDirection::Left => PI,
            ArmDirection::Up => -FRAC_PI_2,
        }
    }

    fn step(self) -> (isize, isize) {
        match self {
            ArmDirection::Left => (-1, 0),
            ArmDirection::Right => (1, 0),
            ArmDirection::Up => (0, -1),
            ArmDirection::Down => (0, 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossArms {
    pub width: usize,
    pub height: usize,
    pub arms: Vec<Arms>,
}

impl CrossArms {
    /// Arms of zero length everywhere.
    pub fn zero(width: usize, height: usize) -> Self {
        CrossArms {
            width,
            height,
            arms: vec![Arms::default(); width * height],
        }
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Arms {
        self.arms[y * self.width + x]
    }

    pub fn length(&self, x: usize, y: usize, dir: ArmDirection) -> u32 {
        let a = self.get(x, y);
        match dir {
            ArmDirection::Left => a.left,
            ArmDirection::Right => a.right,
            ArmDirection::Up => a.up,
            ArmDirection::Down => a.down,
        }
    }

    /// One arm direction as an image (lengths clamped to 255).
    pub fn arm_image(&self, dir: ArmDirection) -> Image {
        Image::from_fn(self.width, self.height, |x, y| f64::from(self.length(x, y, dir)))
    }

    /// Checks the border invariant: arms never leave the image.
    pub fn fits(&self) -> bool {
        (0..self.height).all(|y| {
            (0..self.width).all(|x| {
                let a = self.get(x, y);
                a.left as usize <= x
                    && a.up as usize <= y
                    && x + (a.right as usize) < self.width
                    && y + (a.down as usize) < self.height
            })
        })
    }
}

/// Grows the four arms of every pixel.
pub fn grow_arms(img: &Image, grad: &GradientField, params: &CrossParams) -> Result<CrossArms> {
    params.validate()?;
    Error::check_dims(img.dims(), grad.dims())?;
    let (w, h) = img.dims();
    let mut arms = vec![Arms::default(); w * h];
    for_each_chunk_mut(&mut arms, w.max(1), |y, row| {
        for (x, a) in row.iter_mut().enumerate() {
            let theta = grad.theta[y * w + x];
            let mut len = [0u32; 4];
            for (slot, dir) in len.iter_mut().zip(ArmDirection::ALL) {
                *slot = grow_one(img, x, y, dir, theta, params);
            }
            *a = Arms {
                left: len[0],
                right: len[1],
                up: len[2],
                down: len[3],
            };
        }
    });
    Ok(CrossArms {
        width: w,
        height: h,
        arms,
    })
}

fn grow_one(img: &Image, x: usize, y: usize, dir: ArmDirection, theta: f64, p: &CrossParams) -> u32 {
    let (w, h) = (img.width() as isize, img.height() as isize);
    let (sx, sy) = dir.step();
    let factor = alignment_factor(dir.angle(), theta, p.alpha);
    let near = threshold(p.mode, p.tau1, factor);
    let far = threshold(p.mode, p.tau3, factor);
    let reference = img.get(x, y);
    let mut prev = reference;
    let mut len = 0;
    for k in 1..p.l2 {
        let px = x as isize + sx * k as isize;
        let py = y as isize + sy * k as isize;
        if px < 0 || py < 0 || px >= w || py >= h {
            break;
        }
        let v = img.get(px as usize, py as usize);
        let limit = if k < p.l1 { near } else { far };
        if !(libm::fabs(v - reference) < limit && libm::fabs(v - prev) < p.tau2) {
            break;
        }
        prev = v;
        len = k as u32;
    }
    len
}

/// Mean of the cost over each pixel's cross support region, per disparity.
///
/// Horizontal segment sums come from row prefix sums, then the vertical
/// pass sums those over the reference pixel's vertical segment. The divisor
/// is the exact number of pixels in the region.
pub fn aggregate(vol: &CostVolume, arms: &CrossArms) -> Result<CostVolume> {
    Error::check_dims(vol.dims(), arms.dims())?;
    let (w, h) = vol.dims();
    let dn = vol.disp_count;
    if w == 0 || h == 0 || dn == 0 {
        return Ok(vol.clone());
    }
    let stride = w * dn;

    // Horizontal segment sums, then turned in place into column prefix sums.
    let mut hsum = vec![0f64; h * stride];
    for_each_chunk_mut(&mut hsum, stride, |y, out| {
        let src = &vol.cost[y * stride..(y + 1) * stride];
        let mut pref = vec![0f64; (w + 1) * dn];
        for x in 0..w {
            for d in 0..dn {
                pref[(x + 1) * dn + d] = pref[x * dn + d] + f64::from(src[x * dn + d]);
            }
        }
        for x in 0..w {
            let a = arms.get(x, y);
            let lo = (x - a.left as usize) * dn;
            let hi = (x + a.right as usize + 1) * dn;
            for d in 0..dn {
                out[x * dn + d] = pref[hi + d] - pref[lo + d];
            }
        }
    });
    for y in 1..h {
        let (done, rest) = hsum.split_at_mut(y * stride);
        let above = &done[(y - 1) * stride..];
        for (v, a) in rest[..stride].iter_mut().zip(above) {
            *v += a;
        }
    }

    let mut hcount = vec![0u64; (h + 1) * w];
    for y in 0..h {
        for x in 0..w {
            let a = arms.get(x, y);
            hcount[(y + 1) * w + x] = hcount[y * w + x] + u64::from(a.left + a.right + 1);
        }
    }

    let mut cost = vec![0f32; h * stride];
    for_each_chunk_mut(&mut cost, stride, |y, out| {
        for x in 0..w {
            let a = arms.get(x, y);
            let top = y - a.up as usize;
            let bottom = y + a.down as usize;
            let count = (hcount[(bottom + 1) * w + x] - hcount[top * w + x]) as f64;
            let hi = &hsum[bottom * stride + x * dn..bottom * stride + (x + 1) * dn];
            for d in 0..dn {
                let below = if top == 0 {
                    0.0
                } else {
                    hsum[(top - 1) * stride + x * dn + d]
                };
                out[x * dn + d] = ((hi[d] - below) / count) as f32;
            }
        }
    });
    CostVolume::new(w, h, dn, cost)
}

/// Repeats [`aggregate`] `passes` times; zero passes returns the input.
pub fn aggregate_passes(vol: &CostVolume, arms: &CrossArms, passes: usize) -> Result<CostVolume> {
    Error::check_dims(vol.dims(), arms.dims())?;
    let mut out = vol.clone();
    for _ in 0..passes {
        out = aggregate(&out, arms)?;
    }
    Ok(out)
}

/// Box-filter mean over a `(2r+1)²` clamp-to-edge window on every
/// disparity slice.
pub fn aggregate_fixed(vol: &CostVolume, radius: usize) -> CostVolume {
    let (w, h) = vol.dims();
    let dn = vol.disp_count;
    if radius == 0 || w == 0 || h == 0 || dn == 0 {
        return vol.clone();
    }
    let stride = w * dn;
    let r = radius as isize;
    let clamp = |i: isize, n: usize| i.clamp(0, n as isize - 1) as usize;

    let mut horiz = vec![0f64; h * stride];
    for_each_chunk_mut(&mut horiz, stride, |y, out| {
        let src = &vol.cost[y * stride..(y + 1) * stride];
        for x in 0..w {
            for i in -r..=r {
                let sx = clamp(x as isize + i, w);
                for d in 0..dn {
                    out[x * dn + d] += f64::from(src[sx * dn + d]);
                }
            }
        }
    });
    let area = ((2 * radius + 1) * (2 * radius + 1)) as f64;
    let mut cost = vec![0f32; h * stride];
    for_each_chunk_mut(&mut cost, stride, |y, out| {
        let mut acc = vec![0f64; stride];
        for j in -r..=r {
            let sy = clamp(y as isize + j, h);
            for (a, v) in acc.iter_mut().zip(&horiz[sy * stride..(sy + 1) * stride]) {
                *a += v;
            }
        }
        for (o, a) in out.iter_mut().zip(&acc) {
            *o = (a / area) as f32;
        }
    });
    CostVolume {
        width: w,
        height: h,
        disp_count: dn,
        cost,
    }
}
