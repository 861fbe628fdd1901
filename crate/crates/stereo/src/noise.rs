//! Additive Gaussian noise for robustness sweeps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use vsi_stereo_core::Image;

use crate::error::{Error, Result};

/// Adds zero-mean Gaussian noise with `σ = level% × 255`, clamped to
/// `[0, 255]`. Level 0 returns the input unchanged.
pub fn add_gaussian_noise(img: &Image, level: f64, seed: u64) -> Result<Image> {
    if !(level >= 0.0 && level.is_finite()) {
        return Err(Error::NegativeNoise(level));
    }
    if level == 0.0 {
        return Ok(img.clone());
    }
    let sigma = level / 100.0 * 255.0;
    let normal = Normal::new(0.0, sigma).expect("sigma is finite and positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy: Vec<f64> = img
        .data()
        .iter()
        .map(|&v| (v + normal.sample(&mut rng)).clamp(0.0, 255.0))
        .collect();
    Ok(Image::new(img.width(), img.height(), noisy)?)
}

/// Seed for one image, noise level and view of a sweep. Depends only on its
/// arguments, so repeated levels reproduce the same noise.
pub fn derive_seed(seed: u64, name: &str, level: f64, view: u8) -> u64 {
    // FNV-1a over the key, then a splitmix64 finalizer.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    eat(&seed.to_le_bytes());
    eat(name.as_bytes());
    eat(&level.to_bits().to_le_bytes());
    eat(&[view]);
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
