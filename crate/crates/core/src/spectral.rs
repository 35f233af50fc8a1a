//! Ideal lowpass filtering through the DFT.
//!
//! The filter is circular and its length is always the fine-grid length. A
//! bin lying exactly on the cutoff is scaled by `edge_weight`; every other bin
//! is either passed or removed.

use std::cell::RefCell;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{config, Result};
use crate::grid::{DenseImage, DenseSignal, GridSpec};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

const EDGE_TOL: f64 = 1e-9;

/// Passband of an ideal lowpass filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowpassSpec {
    cutoff: f64,
    edge_weight: f64,
}

impl LowpassSpec {
    pub const DEFAULT_EDGE_WEIGHT: f64 = 0.5;

    /// `cutoff` in cycles per fine tick, `0 < cutoff <= 0.5`.
    pub fn new(cutoff: f64) -> Result<Self> {
        Self::with_edge_weight(cutoff, Self::DEFAULT_EDGE_WEIGHT)
    }

    pub fn with_edge_weight(cutoff: f64, edge_weight: f64) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff <= 0.5) {
            return Err(config(format!(
                "lowpass cutoff must lie in (0, 0.5], got {cutoff}"
            )));
        }
        if !(0.0..=1.0).contains(&edge_weight) {
            return Err(config(format!(
                "edge weight must lie in [0, 1], got {edge_weight}"
            )));
        }
        Ok(Self {
            cutoff,
            edge_weight,
        })
    }

    /// Filter matched to the signal band of `grid`.
    pub fn band_edge(grid: &GridSpec) -> Self {
        Self {
            cutoff: grid.band_edge(),
            edge_weight: Self::DEFAULT_EDGE_WEIGHT,
        }
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn edge_weight(&self) -> f64 {
        self.edge_weight
    }

    /// Gain applied to DFT bin `bin` of an `n`-point transform.
    pub fn bin_gain(&self, bin: usize, n: usize) -> f64 {
        let j = signed_bin(bin, n).unsigned_abs() as f64;
        let edge = self.cutoff * n as f64;
        if j < edge - EDGE_TOL {
            1.0
        } else if j > edge + EDGE_TOL {
            0.0
        } else {
            self.edge_weight
        }
    }

    fn gains(&self, n: usize) -> Vec<f64> {
        (0..n).map(|b| self.bin_gain(b, n)).collect()
    }
}

/// Signed frequency index of DFT bin `bin` in an `n`-point transform.
pub fn signed_bin(bin: usize, n: usize) -> i64 {
    if bin <= n / 2 {
        bin as i64
    } else {
        bin as i64 - n as i64
    }
}

/// Forward DFT of a real sequence (unnormalized).
pub fn dft(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    buf
}

/// Inverse DFT, normalized by `1/n`, keeping the real part.
pub fn idft_real(spectrum: &[Complex64]) -> Vec<f64> {
    let mut buf = spectrum.to_vec();
    inverse(&mut buf);
    buf.iter().map(|c| c.re).collect()
}

pub(crate) fn forward(buf: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(buf);
}

pub(crate) fn inverse(buf: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    fft.process(buf);
    let scale = 1.0 / buf.len() as f64;
    for c in buf.iter_mut() {
        *c *= scale;
    }
}

/// In-place 2-D transform of a row-major complex field.
pub(crate) fn forward2d(buf: &mut [Complex64], width: usize) {
    transform2d(buf, width, forward);
}

pub(crate) fn inverse2d(buf: &mut [Complex64], width: usize) {
    transform2d(buf, width, inverse);
}

fn transform2d(buf: &mut [Complex64], width: usize, f: fn(&mut [Complex64])) {
    let height = buf.len() / width;
    buf.par_chunks_mut(width).for_each(f);
    let mut col = vec![Complex64::new(0.0, 0.0); height];
    for x in 0..width {
        for y in 0..height {
            col[y] = buf[y * width + x];
        }
        f(&mut col);
        for y in 0..height {
            buf[y * width + x] = col[y];
        }
    }
}

fn filter_line(line: &mut [f64], gains: &[f64], scratch: &mut Vec<Complex64>) {
    scratch.clear();
    scratch.extend(line.iter().map(|&v| Complex64::new(v, 0.0)));
    forward(scratch);
    for (c, g) in scratch.iter_mut().zip(gains) {
        *c *= *g;
    }
    inverse(scratch);
    for (v, c) in line.iter_mut().zip(scratch.iter()) {
        *v = c.re;
    }
}

pub(crate) fn lowpass_in_place(values: &mut [f64], spec: &LowpassSpec) {
    let gains = spec.gains(values.len());
    let mut scratch = Vec::with_capacity(values.len());
    filter_line(values, &gains, &mut scratch);
}

/// Filters every row of a row-major `width x height` field.
pub(crate) fn lowpass_rows(values: &mut [f64], width: usize, spec: &LowpassSpec) {
    let gains = spec.gains(width);
    values.par_chunks_mut(width).for_each_init(
        || Vec::with_capacity(width),
        |scratch, row| filter_line(row, &gains, scratch),
    );
}

/// Filters every column of a row-major `width x height` field.
pub(crate) fn lowpass_cols(values: &mut [f64], width: usize, spec: &LowpassSpec) {
    let height = values.len() / width;
    let mut t = transpose(values, width, height);
    lowpass_rows(&mut t, height, spec);
    let back = transpose(&t, height, width);
    values.copy_from_slice(&back);
}

pub(crate) fn transpose(values: &[f64], width: usize, height: usize) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    for y in 0..height {
        for x in 0..width {
            out[x * height + y] = values[y * width + x];
        }
    }
    out
}

/// Ideal lowpass of a 1-D signal.
pub fn lowpass(x: &DenseSignal, spec: &LowpassSpec) -> DenseSignal {
    let mut values = x.values().to_vec();
    lowpass_in_place(&mut values, spec);
    DenseSignal::from_parts(*x.grid(), values)
}

/// Separable ideal lowpass: rows with `spec_x`, then columns with `spec_y`.
pub fn lowpass2d(img: &DenseImage, spec_x: &LowpassSpec, spec_y: &LowpassSpec) -> DenseImage {
    let mut values = img.values().to_vec();
    lowpass_rows(&mut values, img.width(), spec_x);
    lowpass_cols(&mut values, img.width(), spec_y);
    DenseImage::from_parts(*img.grid_x(), *img.grid_y(), values)
}
