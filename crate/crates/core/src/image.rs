use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Single-channel intensity image, row-major, values in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::BadDataLength {
                width,
                height,
                len: data.len(),
            });
        }
        if let Some((index, &value)) = data
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && (0.0..=255.0).contains(*v)))
        {
            return Err(Error::PixelOutOfRange { index, value });
        }
        Ok(Image { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        let value = value.clamp(0.0, 255.0);
        Image {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Builds an image from `f(x, y)`; results are clamped to `[0, 255]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let v = f(x, y);
                data.push(if v.is_nan() { 0.0 } else { v.clamp(0.0, 255.0) });
            }
        }
        Image { width, height, data }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Clamp-to-edge access.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.data[y * self.width + x]
    }

    pub fn transpose(&self) -> Image {
        Image::from_fn(self.height, self.width, |x, y| self.get(y, x))
    }

    pub fn flip_horizontal(&self) -> Image {
        let w = self.width;
        Image::from_fn(w, self.height, |x, y| self.get(w - 1 - x, y))
    }
}

/// Per-pixel boolean grid, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub width: usize,
    pub height: usize,
    pub data: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::BadDataLength {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(Mask { width, height, data })
    }

    pub fn all(width: usize, height: usize, value: bool) -> Self {
        Mask {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}

/// 8-bit RGB image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<[u8; 3]>,
}

impl RgbImage {
    /// Promotes a gray image to RGB, rounding half-up.
    pub fn from_gray(img: &Image) -> Self {
        let data = img
            .data()
            .iter()
            .map(|&v| {
                let g = round_to_u8(v);
                [g, g, g]
            })
            .collect();
        RgbImage {
            width: img.width(),
            height: img.height(),
            data,
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.data[y * self.width + x]
    }
}

/// Round half-up and clamp into a byte.
#[inline]
pub(crate) fn round_to_u8(v: f64) -> u8 {
    let r = libm::floor(v + 0.5);
    if r.is_nan() || r <= 0.0 {
        0
    } else if r >= 255.0 {
        255
    } else {
        r as u8
    }
}

/// Ground-truth disparity decoded from a scaled gray image.
///
/// Stored gray 0 means "unknown"; everything else is `gray / scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub width: usize,
    pub height: usize,
    pub disparity: Vec<f64>,
    pub scale: f64,
    pub unknown: Vec<bool>,
}

impl GroundTruth {
    pub fn from_stored(width: usize, height: usize, stored: &[u16], scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::param("scale", "must be a positive finite number"));
        }
        if stored.len() != width * height {
            return Err(Error::BadDataLength {
                width,
                height,
                len: stored.len(),
            });
        }
        let unknown: Vec<bool> = stored.iter().map(|&g| g == 0).collect();
        let disparity = stored
            .iter()
            .map(|&g| if g == 0 { 0.0 } else { f64::from(g) / scale })
            .collect();
        Ok(GroundTruth {
            width,
            height,
            disparity,
            scale,
            unknown,
        })
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn is_known(&self, x: usize, y: usize) -> bool {
        !self.unknown[y * self.width + x]
    }

    pub fn unknown_count(&self) -> usize {
        self.unknown.iter().filter(|&&u| u).count()
    }
}
