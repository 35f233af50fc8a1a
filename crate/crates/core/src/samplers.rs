//! The sampling operator: pick coarse samples off the fine grid and
//! re-interpolate them with a zero-order (sample-and-hold) or first-order
//! (linear) hold. Both holds are zero-phase and wrap circularly.

use std::fmt;
use std::str::FromStr;

use crate::error::{config, Error, Result};
use crate::grid::{DenseImage, DenseSignal, GridSpec};
use crate::spectral::transpose;

/// Interpolating hold used by the D/A stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterpKind {
    SampleAndHold,
    LinearInterp,
}

impl InterpKind {
    /// Power of `sinc(fT)` in the hold's frequency response.
    pub fn distortion_exponent(self) -> i32 {
        match self {
            InterpKind::SampleAndHold => 1,
            InterpKind::LinearInterp => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            InterpKind::SampleAndHold => "sh",
            InterpKind::LinearInterp => "li",
        }
    }
}

impl fmt::Display for InterpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InterpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sh" | "s&h" | "zoh" | "sample-and-hold" => Ok(InterpKind::SampleAndHold),
            "li" | "foh" | "linear" => Ok(InterpKind::LinearInterp),
            other => Err(config(format!(
                "unknown interpolator `{other}` (expected sh or li)"
            ))),
        }
    }
}

/// Samples taken at every `R`-th fine tick.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseSamples {
    grid: GridSpec,
    values: Vec<f64>,
}

impl CoarseSamples {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_coarse() {
            return Err(config(format!(
                "{} samples supplied for a grid of {}",
                values.len(),
                grid.n_coarse()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Samples on a rectangular lattice, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseImage {
    grid_x: GridSpec,
    grid_y: GridSpec,
    values: Vec<f64>,
}

impl CoarseImage {
    pub fn new(grid_x: GridSpec, grid_y: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid_x.n_coarse() * grid_y.n_coarse() {
            return Err(config(format!(
                "{} lattice samples supplied for a {}x{} lattice",
                values.len(),
                grid_x.n_coarse(),
                grid_y.n_coarse()
            )));
        }
        Ok(Self {
            grid_x,
            grid_y,
            values,
        })
    }

    pub fn grid_x(&self) -> &GridSpec {
        &self.grid_x
    }

    pub fn grid_y(&self) -> &GridSpec {
        &self.grid_y
    }

    pub fn width(&self) -> usize {
        self.grid_x.n_coarse()
    }

    pub fn height(&self) -> usize {
        self.grid_y.n_coarse()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `values[n] = x[n R]`.
pub fn sample(x: &DenseSignal) -> CoarseSamples {
    let r = x.grid().ticks_per_sample();
    let values = x.values().iter().step_by(r).copied().collect();
    CoarseSamples {
        grid: *x.grid(),
        values,
    }
}

pub fn sample2d(img: &DenseImage) -> CoarseImage {
    let (rx, ry) = (
        img.grid_x().ticks_per_sample(),
        img.grid_y().ticks_per_sample(),
    );
    let w = img.width();
    let values = img
        .values()
        .chunks(w)
        .step_by(ry)
        .flat_map(|row| row.iter().step_by(rx).copied())
        .collect();
    CoarseImage {
        grid_x: *img.grid_x(),
        grid_y: *img.grid_y(),
        values,
    }
}

/// Interpolates one periodic line of samples onto `ticks_per_sample` ticks each.
///
/// The hold window of sample `n` is centered on tick `n R`. When `R` is even
/// the tick halfway between two samples belongs to both windows and takes
/// their average, which keeps the kernel symmetric.
pub fn interpolate_values(samples: &[f64], ticks_per_sample: usize, kind: InterpKind) -> Vec<f64> {
    let n = samples.len();
    let r = ticks_per_sample;
    let mut out = Vec::with_capacity(n * r);
    for base in 0..n {
        let a = samples[base];
        let b = samples[(base + 1) % n];
        for o in 0..r {
            let v = match kind {
                InterpKind::SampleAndHold => match (2 * o).cmp(&r) {
                    std::cmp::Ordering::Less => a,
                    std::cmp::Ordering::Greater => b,
                    std::cmp::Ordering::Equal => 0.5 * (a + b),
                },
                InterpKind::LinearInterp => {
                    let t = o as f64 / r as f64;
                    a + (b - a) * t
                }
            };
            out.push(v);
        }
    }
    out
}

pub fn interpolate(s: &CoarseSamples, kind: InterpKind) -> DenseSignal {
    let values = interpolate_values(&s.values, s.grid.ticks_per_sample(), kind);
    DenseSignal::from_parts(s.grid, values)
}

/// Separable tensor-product hold: rows first, then columns.
pub fn interpolate2d(s: &CoarseImage, kind: InterpKind) -> DenseImage {
    let (rx, ry) = (s.grid_x.ticks_per_sample(), s.grid_y.ticks_per_sample());
    let (nx, ny) = (s.width(), s.height());
    let fine_w = nx * rx;
    let rows: Vec<f64> = s
        .values
        .chunks(nx)
        .flat_map(|row| interpolate_values(row, rx, kind))
        .collect();
    let cols = transpose(&rows, fine_w, ny);
    let cols: Vec<f64> = cols
        .chunks(ny)
        .flat_map(|col| interpolate_values(col, ry, kind))
        .collect();
    let values = transpose(&cols, ny * ry, fine_w);
    DenseImage::from_parts(s.grid_x, s.grid_y, values)
}
