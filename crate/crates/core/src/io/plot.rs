//! Histogram plus fitted-density curves for visual comparison of GD and GGD
//! fits, written as a two-section whitespace table.

use std::io::Write;
use std::path::Path;

use crate::distributions::{gd_pdf, ggd_pdf, GaussianParams, GgdParams};
use crate::error::{Error, Result};

use super::dataset_csv::fmt_f64;

pub const CURVE_POINTS: usize = 512;
pub const MIN_PLOT_SAMPLES: usize = 10;
pub const MIN_BINS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    /// count / (n · width), so the histogram integrates to one.
    pub density: f64,
}

impl HistogramBin {
    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub gd: f64,
    pub ggd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub histogram: Vec<HistogramBin>,
    pub curves: Vec<CurvePoint>,
}

impl PlotData {
    pub fn histogram_integral(&self) -> f64 {
        self.histogram
            .iter()
            .map(|b| b.density * (b.hi - b.lo))
            .sum()
    }
}

/// Normalized histogram of `errors` over their range and both densities
/// evaluated on [`CURVE_POINTS`] points spanning the range widened by three
/// GD standard deviations on each side.
pub fn plot_data(
    errors: &[f64],
    gd: &GaussianParams,
    ggd: &GgdParams,
    bins: usize,
) -> Result<PlotData> {
    if errors.len() < MIN_PLOT_SAMPLES {
        return Err(Error::arg(format!(
            "need at least {MIN_PLOT_SAMPLES} samples, got {}",
            errors.len()
        )));
    }
    if bins < MIN_BINS {
        return Err(Error::arg(format!(
            "need at least {MIN_BINS} bins, got {bins}"
        )));
    }
    if errors.iter().any(|x| !x.is_finite()) {
        return Err(Error::arg("samples must be finite"));
    }
    let lo = errors.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = errors.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return Err(Error::arg("samples span a zero-width range"));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in errors {
        let k = (((x - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let n = errors.len() as f64;
    let histogram = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| HistogramBin {
            lo: lo + k as f64 * width,
            hi: if k + 1 == bins {
                hi
            } else {
                lo + (k + 1) as f64 * width
            },
            density: c as f64 / (n * width),
        })
        .collect();

    let pad = 3.0 * gd.sigma();
    let (a, b) = (lo - pad, hi + pad);
    let step = (b - a) / (CURVE_POINTS - 1) as f64;
    let curves = (0..CURVE_POINTS)
        .map(|i| {
            let x = if i + 1 == CURVE_POINTS {
                b
            } else {
                a + i as f64 * step
            };
            CurvePoint {
                x,
                gd: gd_pdf(x, gd),
                ggd: ggd_pdf(x, ggd),
            }
        })
        .collect();
    Ok(PlotData { histogram, curves })
}

pub fn write_plot_data<W: Write>(mut w: W, data: &PlotData) -> Result<()> {
    writeln!(w, "# histogram")?;
    writeln!(w, "bin_center density")?;
    for b in &data.histogram {
        writeln!(w, "{} {}", fmt_f64(b.center()), fmt_f64(b.density))?;
    }
    writeln!(w)?;
    writeln!(w, "# curves")?;
    writeln!(w, "x gd_pdf ggd_pdf")?;
    for p in &data.curves {
        writeln!(w, "{} {} {}", fmt_f64(p.x), fmt_f64(p.gd), fmt_f64(p.ggd))?;
    }
    Ok(())
}

/// Compute and write plot data to `path`.
pub fn emit_plot_data(
    errors: &[f64],
    gd: &GaussianParams,
    ggd: &GgdParams,
    bins: usize,
    path: impl AsRef<Path>,
) -> Result<PlotData> {
    let data = plot_data(errors, gd, ggd, bins)?;
    write_plot_data(super::create(path.as_ref())?, &data)?;
    Ok(data)
}
