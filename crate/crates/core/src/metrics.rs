//! Fidelity metrics. Perfect agreement is reported as `f64::INFINITY`.

use crate::error::{usage, Result};
use crate::grid::{DenseImage, DenseSignal};

/// Fraction of samples ignored at each end when computing SNR.
pub const DEFAULT_EDGE_IGNORE: f64 = 0.10;

fn ratio_db(signal: f64, error: f64) -> f64 {
    if error == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (signal / error).log10()
    }
}

fn interior(n: usize, edge_ignore_frac: f64) -> Result<std::ops::Range<usize>> {
    if !(0.0..0.5).contains(&edge_ignore_frac) {
        return Err(usage(format!(
            "edge_ignore_frac must lie in [0, 0.5), got {edge_ignore_frac}"
        )));
    }
    let skip = (edge_ignore_frac * n as f64).ceil() as usize;
    Ok(skip..n.saturating_sub(skip).max(skip))
}

/// Slice-level SNR over `[ceil(frac n), n - ceil(frac n))`.
pub fn snr_db_slice(reference: &[f64], estimate: &[f64], edge_ignore_frac: f64) -> Result<f64> {
    if reference.len() != estimate.len() {
        return Err(usage(format!(
            "length mismatch: reference {} vs estimate {}",
            reference.len(),
            estimate.len()
        )));
    }
    let range = interior(reference.len(), edge_ignore_frac)?;
    let (mut sig, mut err) = (0.0, 0.0);
    for i in range {
        sig += reference[i] * reference[i];
        let d = reference[i] - estimate[i];
        err += d * d;
    }
    Ok(ratio_db(sig, err))
}

/// Interior SNR in dB between a reference and an estimate.
pub fn snr_db(
    reference: &DenseSignal,
    estimate: &DenseSignal,
    edge_ignore_frac: f64,
) -> Result<f64> {
    snr_db_slice(reference.values(), estimate.values(), edge_ignore_frac)
}

/// Slice-level 2-D SNR excluding a border frame of `frac` on every side.
pub fn snr2d_db_slice(
    reference: &[f64],
    estimate: &[f64],
    width: usize,
    edge_ignore_frac: f64,
) -> Result<f64> {
    if reference.len() != estimate.len() || width == 0 || !reference.len().is_multiple_of(width) {
        return Err(usage("image dimensions differ"));
    }
    let height = reference.len() / width;
    let xs = interior(width, edge_ignore_frac)?;
    let ys = interior(height, edge_ignore_frac)?;
    let (mut sig, mut err) = (0.0, 0.0);
    for y in ys {
        for x in xs.clone() {
            let i = y * width + x;
            sig += reference[i] * reference[i];
            let d = reference[i] - estimate[i];
            err += d * d;
        }
    }
    Ok(ratio_db(sig, err))
}

pub fn snr2d_db(
    reference: &DenseImage,
    estimate: &DenseImage,
    edge_ignore_frac: f64,
) -> Result<f64> {
    if reference.width() != estimate.width() || reference.height() != estimate.height() {
        return Err(usage(format!(
            "image dimensions differ: {}x{} vs {}x{}",
            reference.width(),
            reference.height(),
            estimate.width(),
            estimate.height()
        )));
    }
    snr2d_db_slice(
        reference.values(),
        estimate.values(),
        reference.width(),
        edge_ignore_frac,
    )
}

/// `10 log10(max^2 / MSE)` over equally sized pixel slices.
pub fn psnr_db_slice(reference: &[f64], estimate: &[f64], max_value: f64) -> Result<f64> {
    if reference.len() != estimate.len() {
        return Err(usage(format!(
            "pixel count mismatch: {} vs {}",
            reference.len(),
            estimate.len()
        )));
    }
    if !(max_value > 0.0) {
        return Err(usage(format!(
            "max_value must be positive, got {max_value}"
        )));
    }
    let sse: f64 = reference
        .iter()
        .zip(estimate)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let mse = sse / reference.len() as f64;
    Ok(ratio_db(max_value * max_value, mse))
}

pub fn psnr_db(reference: &DenseImage, estimate: &DenseImage, max_value: f64) -> Result<f64> {
    if reference.width() != estimate.width() || reference.height() != estimate.height() {
        return Err(usage("image dimensions differ"));
    }
    psnr_db_slice(reference.values(), estimate.values(), max_value)
}
