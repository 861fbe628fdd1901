//! Loading and saving images, ground truth, masks and disparity maps.

use std::fs;
use std::path::Path;

use vsi_stereo_core::disparity::DisparityMap;
use vsi_stereo_core::{GroundTruth, Image, Mask, RgbImage};

use crate::error::{Error, Result};
use crate::pnm::{self, PnmKind, Raster};

const LUMA: [f64; 3] = [0.299, 0.587, 0.114];

fn read_raster(path: &Path) -> Result<Raster> {
    let bytes = fs::read(path).map_err(Error::io(path))?;
    pnm::decode(&bytes).map_err(|source| Error::Pnm {
        path: path.to_path_buf(),
        source,
    })
}

/// Converts decoded samples to a gray image in `[0, 255]`. Color goes
/// through ITU-R 601 luma; other bit depths are rescaled.
pub fn raster_to_image(r: &Raster) -> Image {
    let scale = 255.0 / f64::from(r.maxval);
    let data: Vec<f64> = match r.channels() {
        1 => r.samples.iter().map(|&v| f64::from(v) * scale).collect(),
        _ => r
            .samples
            .chunks_exact(3)
            .map(|c| {
                let y: f64 = c.iter().zip(LUMA).map(|(&v, w)| f64::from(v) * w).sum();
                y * scale
            })
            .collect(),
    };
    Image::from_fn(r.width, r.height, |x, y| data[y * r.width + x])
}

pub fn load_image(path: impl AsRef<Path>) -> Result<Image> {
    Ok(raster_to_image(&read_raster(path.as_ref())?))
}

/// Writes a binary P5, rounding half-up.
pub fn save_image(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let px: Vec<u8> = RgbImage::from_gray(img).data.iter().map(|p| p[0]).collect();
    write(path.as_ref(), &pnm::encode_pgm(img.width(), img.height(), &px))
}

pub fn save_rgb(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &pnm::encode_ppm(img.width, img.height, &img.data))
}

/// Ground truth from a PGM: `disparity = stored / scale`, stored 0 unknown.
pub fn load_ground_truth(path: impl AsRef<Path>, scale: f64) -> Result<GroundTruth> {
    let path = path.as_ref();
    let r = read_raster(path)?;
    if r.kind != PnmKind::GrayAscii && r.kind != PnmKind::GrayBinary {
        return Err(Error::Pnm {
            path: path.to_path_buf(),
            source: pnm::PnmError::UnsupportedMagic {
                offset: 0,
                magic: "PPM ground truth".into(),
            },
        });
    }
    Ok(GroundTruth::from_stored(r.width, r.height, &r.samples, scale)?)
}

/// Evaluation mask: any nonzero sample (any channel) is `true`.
pub fn load_mask(path: impl AsRef<Path>) -> Result<Mask> {
    let r = read_raster(path.as_ref())?;
    let data = r
        .samples
        .chunks_exact(r.channels())
        .map(|c| c.iter().any(|&v| v != 0))
        .collect();
    Ok(Mask::new(r.width, r.height, data)?)
}

/// Disparity as P5 with `round(disp × scale)` clamped to 255.
pub fn save_disparity(map: &DisparityMap, scale: f64, path: impl AsRef<Path>) -> Result<()> {
    write(
        path.as_ref(),
        &pnm::encode_pgm(map.width, map.height, &map.to_gray(scale)),
    )
}

/// Reads a disparity PGM written by [`save_disparity`].
pub fn load_disparity(path: impl AsRef<Path>, scale: f64, disp_count: usize) -> Result<DisparityMap> {
    let r = read_raster(path.as_ref())?;
    if r.channels() != 1 {
        return Err(Error::Config(format!(
            "{}: disparity map must be a gray image",
            path.as_ref().display()
        )));
    }
    let disp = r.samples.iter().map(|&v| f64::from(v) / scale).collect();
    Ok(DisparityMap::new(r.width, r.height, disp_count, disp)?)
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(Error::io(path))
}
