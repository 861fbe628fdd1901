//! Disparity selection and refinement.

use alloc::vec;
use alloc::vec::Vec;

use crate::cost::CostVolume;
use crate::image::round_to_u8;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelState {
    Valid,
    Invalid,
    /// Was invalid; the disparity comes from [`fill_invalid`].
    Filled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisparityMap {
    pub width: usize,
    pub height: usize,
    /// Number of candidate disparities the map was selected from.
    pub disp_count: usize,
    pub disp: Vec<f64>,
    pub state: Vec<PixelState>,
}

impl DisparityMap {
    /// A map with every pixel valid.
    pub fn new(width: usize, height: usize, disp_count: usize, disp: Vec<f64>) -> Result<Self> {
        if disp.len() != width * height {
            return Err(Error::BadDataLength {
                width,
                height,
                len: disp.len(),
            });
        }
        Ok(DisparityMap {
            width,
            height,
            disp_count,
            state: vec![PixelState::Valid; disp.len()],
            disp,
        })
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.disp[y * self.width + x]
    }

    #[inline]
    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        self.state[y * self.width + x] == PixelState::Valid
    }

    pub fn count(&self, state: PixelState) -> usize {
        self.state.iter().filter(|&&s| s == state).count()
    }

    /// Mirrors the map left-to-right.
    pub fn flip_horizontal(&self) -> DisparityMap {
        let mut out = self.clone();
        for y in 0..self.height {
            let row = y * self.width..(y + 1) * self.width;
            out.disp[row.clone()].reverse();
            out.state[row].reverse();
        }
        out
    }

    /// Stored gray levels `round(disp × scale)`, clamped to `[0, 255]`.
    pub fn to_gray(&self, scale: f64) -> Vec<u8> {
        self.disp.iter().map(|&d| round_to_u8(d * scale)).collect()
    }
}

/// Per-pixel argmin over disparities; ties go to the smallest disparity.
pub fn winner_take_all(vol: &CostVolume) -> DisparityMap {
    let disp = vol
        .cost
        .chunks_exact(vol.disp_count.max(1))
        .map(|costs| {
            let mut best = 0;
            for (d, &c) in costs.iter().enumerate().skip(1) {
                if c < costs[best] {
                    best = d;
                }
            }
            best as f64
        })
        .collect::<Vec<_>>();
    let n = disp.len();
    DisparityMap {
        width: vol.width,
        height: vol.height,
        disp_count: vol.disp_count,
        disp,
        state: vec![PixelState::Valid; n],
    }
}

/// Left–right consistency: `(x, y)` stays valid iff `x − dl ≥ 0` and
/// `|dl(x, y) − dr(x − dl, y)| ≤ t_lr`.
pub fn left_right_check(dl: &DisparityMap, dr: &DisparityMap, t_lr: f64) -> Result<DisparityMap> {
    Error::check_dims(dl.dims(), dr.dims())?;
    if !(t_lr >= 0.0) {
        return Err(Error::param("t_lr", "must be non-negative"));
    }
    let mut out = dl.clone();
    for y in 0..dl.height {
        for x in 0..dl.width {
            let i = y * dl.width + x;
            if out.state[i] != PixelState::Valid {
                continue;
            }
            let xr = libm::round(x as f64 - dl.disp[i]);
            let consistent =
                xr >= 0.0 && (xr as usize) < dl.width && libm::fabs(dl.disp[i] - dr.get(xr as usize, y)) <= t_lr;
            if !consistent {
                out.state[i] = PixelState::Invalid;
            }
        }
    }
    Ok(out)
}

/// Fills each invalid pixel with the smaller of the nearest valid
/// disparities to its left and right on the same row. Rows without any
/// valid pixel are filled with 0.
pub fn fill_invalid(dm: &DisparityMap) -> DisparityMap {
    let mut out = dm.clone();
    let w = dm.width;
    for y in 0..dm.height {
        let row = y * w..(y + 1) * w;
        let disp = &dm.disp[row.clone()];
        let state = &dm.state[row.clone()];
        let valid = |x: usize| state[x] != PixelState::Invalid;

        let mut from_left = vec![None; w];
        let mut last = None;
        for x in 0..w {
            if valid(x) {
                last = Some(disp[x]);
            }
            from_left[x] = last;
        }
        let mut next = None;
        for x in (0..w).rev() {
            if valid(x) {
                next = Some(disp[x]);
                continue;
            }
            let fill = match (from_left[x], next) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => 0.0,
            };
            out.disp[row.start + x] = fill;
            out.state[row.start + x] = PixelState::Filled;
        }
    }
    out
}

/// 3×3 clamp-to-edge median of the disparities; states are kept.
pub fn median_filter_3x3(dm: &DisparityMap) -> DisparityMap {
    let (w, h) = dm.dims();
    let mut out = dm.clone();
    if w == 0 || h == 0 {
        return out;
    }
    let at = |x: isize, y: isize| {
        let x = x.clamp(0, w as isize - 1) as usize;
        let y = y.clamp(0, h as isize - 1) as usize;
        dm.disp[y * w + x]
    };
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut win = [0f64; 9];
            let mut k = 0;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    win[k] = at(x + dx, y + dy);
                    k += 1;
                }
            }
            win.sort_unstable_by(f64::total_cmp);
            out.disp[y as usize * w + x as usize] = win[4];
        }
    }
    out
}
