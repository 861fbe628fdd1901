//! CSV report output.

use std::io::Write;
use std::path::Path;

use vsi_stereo_core::eval::EvalReport;

use crate::error::{Error, Result};

pub const HEADER: [&str; 6] = ["name", "algorithm", "noise", "evaluated", "bad", "percent"];

pub fn write_csv<W: Write>(report: &EvalReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for e in &report.entries {
        w.write_record([
            e.name.clone(),
            e.algorithm.to_string(),
            e.noise.to_string(),
            e.evaluated.to_string(),
            e.bad.to_string(),
            format!("{:.4}", e.percent),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn save_csv(report: &EvalReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(Error::io(path))?;
    write_csv(report, std::io::BufWriter::new(file))
}

/// Human-readable per-(algorithm, noise) averages.
pub fn summary(report: &EvalReport) -> String {
    let mut s = String::new();
    for a in report.averages() {
        s += &format!(
            "{:<8} noise {:>5}%  avg {:>7.3}%  ({} images)\n",
            a.algorithm, a.noise, a.percent, a.images
        );
    }
    for f in &report.failures {
        s += &format!("FAILED {} {} noise {}%: {}\n", f.name, f.algorithm, f.noise, f.message);
    }
    s
}
