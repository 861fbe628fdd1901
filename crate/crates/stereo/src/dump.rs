//! Debug dumps: raw cost volumes, arm lengths and gradient images.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use vsi_stereo_core::aggregation::{ArmDirection, CrossArms};
use vsi_stereo_core::cost::CostVolume;
use vsi_stereo_core::gradient::GradientField;

use crate::error::{Error, Result};
use crate::imgio::save_image;

/// `"H W D\n"` followed by `H·W·D` little-endian `f32`, disparity fastest.
pub fn write_cost_volume<W: Write>(vol: &CostVolume, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {} {}", vol.height, vol.width, vol.disp_count)?;
    let mut buf = Vec::with_capacity(vol.cost.len() * 4);
    for c in &vol.cost {
        buf.extend_from_slice(&c.to_le_bytes());
    }
    out.write_all(&buf)?;
    out.flush()
}

pub fn save_cost_volume(vol: &CostVolume, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let f = std::fs::File::create(path).map_err(Error::io(path))?;
    write_cost_volume(vol, std::io::BufWriter::new(f)).map_err(Error::io(path))
}

pub fn read_cost_volume<R: Read>(input: R) -> Result<CostVolume> {
    let mut r = BufReader::new(input);
    let mut header = String::new();
    r.read_line(&mut header)
        .map_err(|e| Error::Config(format!("cost volume header: {e}")))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("bad cost volume header {header:?}")))?;
    let [h, w, d] = dims[..] else {
        return Err(Error::Config(format!("bad cost volume header {header:?}")));
    };
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)
        .map_err(|e| Error::Config(format!("cost volume payload: {e}")))?;
    if raw.len() != h * w * d * 4 {
        return Err(Error::Config(format!(
            "cost volume payload has {} bytes, expected {}",
            raw.len(),
            h * w * d * 4
        )));
    }
    let cost = raw
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .collect();
    Ok(CostVolume::new(w, h, d, cost)?)
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// One PGM per arm direction: `<prefix>_left.pgm`, `_right`, `_up`, `_down`.
pub fn save_arms(arms: &CrossArms, prefix: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (dir, tag) in ArmDirection::ALL.into_iter().zip(["left", "right", "up", "down"]) {
        let path = suffixed(prefix.as_ref(), &format!("_{tag}.pgm"));
        save_image(&arms.arm_image(dir), &path)?;
        written.push(path);
    }
    Ok(written)
}

/// `<prefix>_mag.pgm` and `<prefix>_theta.pgm`.
pub fn save_gradient(field: &GradientField, prefix: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let mag = suffixed(prefix.as_ref(), "_mag.pgm");
    let theta = suffixed(prefix.as_ref(), "_theta.pgm");
    save_image(&field.magnitude_image(), &mag)?;
    save_image(&field.theta_image(), &theta)?;
    Ok(vec![mag, theta])
}
