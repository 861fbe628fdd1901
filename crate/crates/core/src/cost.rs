//! Matching costs: census/Hamming, the exponential mapping and the
//! gradient-gated combined cost volume.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::gradient::GradientField;
use crate::par::for_each_chunk_mut;
use crate::{Error, Image, Result};

/// Per-pixel census bitstrings.
///
/// Neighbor `i` (raster order over the window, center skipped) is stored in
/// word `i / 64`, bit `i % 64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusImage {
    width: usize,
    height: usize,
    bits: usize,
    words: usize,
    data: Vec<u64>,
}

impl CensusImage {
    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Bits per pixel, `(2r+1)² − 1`.
    #[inline]
    pub fn bits(&self) -> usize {
        self.bits
    }

    #[inline]
    pub fn code(&self, x: usize, y: usize) -> &[u64] {
        let i = (y * self.width + x) * self.words;
        &self.data[i..i + self.words]
    }

    #[inline]
    pub fn bit(&self, x: usize, y: usize, i: usize) -> bool {
        self.code(x, y)[i / 64] >> (i % 64) & 1 == 1
    }

    /// The code as a `0`/`1` string, first neighbor first.
    pub fn bit_string(&self, x: usize, y: usize) -> String {
        (0..self.bits)
            .map(|i| if self.bit(x, y, i) { '1' } else { '0' })
            .collect()
    }
}

#[inline]
pub fn hamming_distance(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

/// Census transform: bit set iff the neighbor is strictly darker than the
/// center. Borders use clamp-to-edge.
pub fn census_transform(img: &Image, radius: usize) -> Result<CensusImage> {
    if radius == 0 {
        return Err(Error::param("census_radius", "must be at least 1"));
    }
    let win = 2 * radius + 1;
    let (w, h) = img.dims();
    if w < win || h < win {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            window: win,
        });
    }
    let bits = win * win - 1;
    let words = bits.div_ceil(64);
    let r = radius as isize;
    let mut data = vec![0u64; w * h * words];
    for_each_chunk_mut(&mut data, w * words, |y, row| {
        let y = y as isize;
        for x in 0..w {
            let center = img.get(x, y as usize);
            let code = &mut row[x * words..(x + 1) * words];
            let mut i = 0;
            for dy in -r..=r {
                for dx in -r..=r {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    if img.get_clamped(x as isize + dx, y + dy) < center {
                        code[i / 64] |= 1 << (i % 64);
                    }
                    i += 1;
                }
            }
        }
    });
    Ok(CensusImage {
        width: w,
        height: h,
        bits,
        words,
        data,
    })
}

/// `H × W × D` matching costs, disparity fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVolume {
    pub width: usize,
    pub height: usize,
    pub disp_count: usize,
    pub cost: Vec<f32>,
}

impl CostVolume {
    pub fn new(width: usize, height: usize, disp_count: usize, cost: Vec<f32>) -> Result<Self> {
        if cost.len() != width * height * disp_count {
            return Err(Error::BadDataLength {
                width,
                height,
                len: cost.len(),
            });
        }
        Ok(CostVolume {
            width,
            height,
            disp_count,
            cost,
        })
    }

    pub fn filled(width: usize, height: usize, disp_count: usize, value: f32) -> Self {
        CostVolume {
            width,
            height,
            disp_count,
            cost: vec![value; width * height * disp_count],
        }
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, d: usize) -> f32 {
        self.cost[(y * self.width + x) * self.disp_count + d]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, d: usize, v: f32) {
        self.cost[(y * self.width + x) * self.disp_count + d] = v;
    }

    /// All disparity costs of one pixel.
    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> &[f32] {
        let i = (y * self.width + x) * self.disp_count;
        &self.cost[i..i + self.disp_count]
    }
}

/// `C_s(p, d) = popcount(L(x, y) ^ R(x − d, y))`; `x − d < 0` costs the
/// full bit width.
pub fn hamming_cost(left: &CensusImage, right: &CensusImage, max_disp: usize) -> Result<CostVolume> {
    Error::check_dims(left.dims(), right.dims())?;
    if left.bits != right.bits {
        return Err(Error::param("census_radius", "left and right codes differ in width"));
    }
    if max_disp == 0 {
        return Err(Error::param("max_disp", "must be at least 1"));
    }
    let (w, h) = left.dims();
    let worst = left.bits as f32;
    let mut cost = vec![0f32; w * h * max_disp];
    for_each_chunk_mut(&mut cost, w * max_disp, |y, row| {
        for x in 0..w {
            let l = left.code(x, y);
            for (d, c) in row[x * max_disp..(x + 1) * max_disp].iter_mut().enumerate() {
                *c = if d > x {
                    worst
                } else {
                    hamming_distance(l, right.code(x - d, y)) as f32
                };
            }
        }
    });
    CostVolume::new(w, h, max_disp, cost)
}

/// Largest `f64` strictly below one.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// `1 − exp(−c / λ)`, kept strictly below 1.
#[inline]
pub fn map_cost(c: f64, lambda: f64) -> f64 {
    (-libm::expm1(-c / lambda)).min(BELOW_ONE)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub census_radius: usize,
    pub max_disp: usize,
    pub lambda_s: f64,
    pub lambda_g: f64,
    /// Largest accepted `|G_L − G_R|`.
    pub gate_t: f64,
    /// Cost assigned when the gate rejects a candidate.
    pub penalty: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            census_radius: 2,
            max_disp: 64,
            lambda_s: 8.0,
            lambda_g: 25.0,
            gate_t: 150.0,
            penalty: 2.5,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        if self.census_radius == 0 {
            return Err(Error::param("census_radius", "must be at least 1"));
        }
        if self.max_disp == 0 {
            return Err(Error::param("max_disp", "must be at least 1"));
        }
        if !(self.lambda_s.is_finite() && self.lambda_s > 0.0) {
            return Err(Error::param("lambda_s", "must be positive"));
        }
        if !(self.lambda_g.is_finite() && self.lambda_g > 0.0) {
            return Err(Error::param("lambda_g", "must be positive"));
        }
        if !(self.gate_t >= 0.0) {
            return Err(Error::param("gate_t", "must be non-negative"));
        }
        if !(self.penalty.is_finite() && self.penalty >= 2.0) {
            return Err(Error::param("penalty", "must be finite and at least 2"));
        }
        Ok(())
    }
}

/// Gradient-gated census cost.
///
/// For each candidate the census distance `C_s` and the magnitude difference
/// `C_g = |G_L(p) − G_R(p − d)|` are computed. When `C_g > gate_t` the
/// candidate gets `penalty`; otherwise `map_cost(C_s, λ_s) + map_cost(C_g, λ_g)`.
/// Candidates that fall off the right image also get `penalty`.
pub fn vsi_cost_volume(
    left: &Image,
    right: &Image,
    left_grad: &GradientField,
    right_grad: &GradientField,
    params: &CostParams,
) -> Result<CostVolume> {
    params.validate()?;
    let dims = left.dims();
    Error::check_dims(dims, right.dims())?;
    Error::check_dims(dims, left_grad.dims())?;
    Error::check_dims(dims, right_grad.dims())?;
    let cl = census_transform(left, params.census_radius)?;
    let cr = census_transform(right, params.census_radius)?;
    let (w, h) = dims;
    let dn = params.max_disp;
    let penalty = params.penalty as f32;
    let mut cost = vec![0f32; w * h * dn];
    for_each_chunk_mut(&mut cost, w * dn, |y, row| {
        let gl = &left_grad.mag[y * w..(y + 1) * w];
        let gr = &right_grad.mag[y * w..(y + 1) * w];
        for x in 0..w {
            let code = cl.code(x, y);
            for (d, c) in row[x * dn..(x + 1) * dn].iter_mut().enumerate() {
                if d > x {
                    *c = penalty;
                    continue;
                }
                let cg = libm::fabs(gl[x] - gr[x - d]);
                *c = if cg > params.gate_t {
                    penalty
                } else {
                    let cs = f64::from(hamming_distance(code, cr.code(x - d, y)));
                    (map_cost(cs, params.lambda_s) + map_cost(cg, params.lambda_g)) as f32
                };
            }
        }
    });
    CostVolume::new(w, h, dn, cost)
}

/// Raw census/Hamming costs, no mapping or gate.
pub fn census_cost_volume(left: &Image, right: &Image, params: &CostParams) -> Result<CostVolume> {
    params.validate()?;
    Error::check_dims(left.dims(), right.dims())?;
    let cl = census_transform(left, params.census_radius)?;
    let cr = census_transform(right, params.census_radius)?;
    hamming_cost(&cl, &cr, params.max_disp)
}
