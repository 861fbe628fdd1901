#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vsi_stereo::config::{BenchImage, PipelineConfig};
use vsi_stereo::pnm::encode_pgm;

pub fn write_pgm(path: &Path, w: usize, h: usize, px: &[u8]) {
    std::fs::write(path, encode_pgm(w, h, px)).unwrap();
}

/// Random texture with horizontal correlation, so gradients are not pure noise.
pub fn texture(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Vec<u8> {
    let mut px = vec![0u8; w * h];
    for y in 0..h {
        let mut v: i32 = rng.random_range(40..216);
        for x in 0..w {
            v = (v + rng.random_range(-40..=40)).clamp(0, 255);
            px[y * w + x] = v as u8;
        }
    }
    px
}

/// Two fronto-parallel planes: background at `bg`, a centred rectangle at `fg`.
/// Returns `(left, right, disparity)`, with `left(x) = right(x - d)`.
pub fn two_plane_scene(seed: u64, w: usize, h: usize, bg: usize, fg: usize) -> (Vec<u8>, Vec<u8>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let right = texture(&mut rng, w, h);
    let fg_tex = texture(&mut rng, w, h);
    let mut left = vec![0u8; w * h];
    let mut disp = vec![0u8; w * h];
    let in_fg = |x: usize, y: usize| (w / 3..2 * w / 3).contains(&x) && (h / 4..3 * h / 4).contains(&y);
    for y in 0..h {
        for x in 0..w {
            let d = if in_fg(x, y) { fg } else { bg };
            disp[y * w + x] = d as u8;
            left[y * w + x] = if in_fg(x, y) {
                fg_tex[y * w + x]
            } else {
                right[y * w + x.saturating_sub(d)]
            };
        }
    }
    // The foreground surface seen from the right view.
    let mut right = right;
    for y in 0..h {
        for x in 0..w {
            if in_fg(x, y) && x >= fg {
                right[y * w + x - fg] = fg_tex[y * w + x];
            }
        }
    }
    (left, right, disp)
}

/// Writes `names` as synthetic entries under `dir` and returns a config
/// whose image table lists them.
pub fn synthetic_dataset(dir: &Path, names: &[&str], w: usize, h: usize) -> PipelineConfig {
    let scale = 8.0;
    let mut images = BTreeMap::new();
    for (i, name) in names.iter().enumerate() {
        let (l, r, d) = two_plane_scene(100 + i as u64, w, h, 2, 6);
        let sub = dir.join(name);
        std::fs::create_dir_all(&sub).unwrap();
        write_pgm(&sub.join("left.pgm"), w, h, &l);
        write_pgm(&sub.join("right.pgm"), w, h, &r);
        let gt: Vec<u8> = d.iter().map(|&v| v * scale as u8).collect();
        write_pgm(&sub.join("gt.pgm"), w, h, &gt);
        images.insert(name.to_string(), BenchImage { max_disp: 12, scale });
    }
    PipelineConfig {
        images,
        ..Default::default()
    }
}
