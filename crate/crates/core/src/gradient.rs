//! Template convolution, gradient magnitude and the direction factor.
//!
//! The default templates are the 3×3 Sobel pair. `gx` responds to
//! left-to-right brightness change and `gy` to top-to-bottom change, so the
//! direction `theta = atan2(gy, gx)` is expressed in image coordinates
//! (x to the right, y downward).

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Image, Mask, Result};

/// A 3×3 correlation template, indexed `[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel(pub [[f64; 3]; 3]);

impl Kernel {
    pub const SOBEL_X: Kernel = Kernel([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]]);
    pub const SOBEL_Y: Kernel = Kernel([[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]]);
    pub const PREWITT_X: Kernel = Kernel([[-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0]]);
    pub const PREWITT_Y: Kernel = Kernel([[-1.0, -1.0, -1.0], [0.0, 0.0, 0.0], [1.0, 1.0, 1.0]]);
    pub const IDENTITY: Kernel = Kernel([[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]);

    pub fn transpose(&self) -> Kernel {
        let k = &self.0;
        Kernel([
            [k[0][0], k[1][0], k[2][0]],
            [k[0][1], k[1][1], k[2][1]],
            [k[0][2], k[1][2], k[2][2]],
        ])
    }
}

/// Signed real-valued grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Plane {
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn transpose(&self) -> Plane {
        let mut data = Vec::with_capacity(self.data.len());
        for x in 0..self.width {
            for y in 0..self.height {
                data.push(self.get(x, y));
            }
        }
        Plane {
            width: self.height,
            height: self.width,
            data,
        }
    }
}

/// Applies `k` correlation-style at every pixel with clamp-to-edge borders.
pub fn convolve(img: &Image, k: &Kernel) -> Result<Plane> {
    let (w, h) = img.dims();
    if w < 3 || h < 3 {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            window: 3,
        });
    }
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = 0.0;
            for (j, row) in k.0.iter().enumerate() {
                for (i, &c) in row.iter().enumerate() {
                    if c != 0.0 {
                        acc += c * img.get_clamped(x + i as isize - 1, y + j as isize - 1);
                    }
                }
            }
            data.push(acc);
        }
    }
    Ok(Plane {
        width: w,
        height: h,
        data,
    })
}

/// How `gx`/`gy` are combined into the magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MagnitudeMode {
    /// `sqrt(gx² + gy²)`.
    #[default]
    Euclidean,
    /// `|gx| + |gy|`.
    AbsSum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientOptions {
    pub hx: Kernel,
    pub hy: Kernel,
    pub magnitude: MagnitudeMode,
}

impl Default for GradientOptions {
    fn default() -> Self {
        GradientOptions {
            hx: Kernel::SOBEL_X,
            hy: Kernel::SOBEL_Y,
            magnitude: MagnitudeMode::Euclidean,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    pub width: usize,
    pub height: usize,
    pub gx: Vec<f64>,
    pub gy: Vec<f64>,
    pub mag: Vec<f64>,
    /// Direction in radians, in `(-π, π]`; 0 where the gradient vanishes.
    pub theta: Vec<f64>,
}

impl GradientField {
    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Magnitude clamped into a displayable image.
    pub fn magnitude_image(&self) -> Image {
        Image::from_fn(self.width, self.height, |x, y| self.mag[y * self.width + x])
    }

    /// Direction mapped linearly from `(-π, π]` onto `[0, 255]`.
    pub fn theta_image(&self) -> Image {
        Image::from_fn(self.width, self.height, |x, y| {
            (self.theta[y * self.width + x] + PI) / (2.0 * PI) * 255.0
        })
    }
}

/// Quadrant-aware direction of `(gx, gy)`, in `(-π, π]`, 0 for the zero vector.
#[inline]
pub fn direction(gx: f64, gy: f64) -> f64 {
    if gx == 0.0 && gy == 0.0 {
        return 0.0;
    }
    let t = libm::atan2(gy, gx);
    if t <= -PI {
        PI
    } else {
        t
    }
}

/// Sobel gradient field with Euclidean magnitude.
pub fn gradient_field(img: &Image) -> Result<GradientField> {
    gradient_field_with(img, &GradientOptions::default())
}

pub fn gradient_field_with(img: &Image, opts: &GradientOptions) -> Result<GradientField> {
    let gx = convolve(img, &opts.hx)?.data;
    let gy = convolve(img, &opts.hy)?.data;
    let mag = gx
        .iter()
        .zip(&gy)
        .map(|(&x, &y)| match opts.magnitude {
            MagnitudeMode::Euclidean => libm::sqrt(x * x + y * y),
            MagnitudeMode::AbsSum => libm::fabs(x) + libm::fabs(y),
        })
        .collect();
    let theta = gx.iter().zip(&gy).map(|(&x, &y)| direction(x, y)).collect();
    Ok(GradientField {
        width: img.width(),
        height: img.height(),
        gx,
        gy,
        mag,
        theta,
    })
}

/// Marks pixels whose gradient magnitude reaches `t_sens`.
pub fn sensitivity_mask(field: &GradientField, t_sens: f64) -> Mask {
    Mask {
        width: field.width,
        height: field.height,
        data: field.mag.iter().map(|&m| m >= t_sens).collect(),
    }
}
