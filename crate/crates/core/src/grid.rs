//! Fine-grid conventions shared by every operator.
//!
//! Continuous time is emulated by a uniform grid with `ticks_per_sample` fine
//! ticks per sampling interval `T`. Signals are one period of a periodic
//! signal, so every filter acts circularly.

use crate::error::{config, Result};

/// Sampling geometry along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n_coarse: usize,
    ticks_per_sample: usize,
    rate_multiple: f64,
}

impl GridSpec {
    /// `n_coarse` samples, `ticks_per_sample` fine ticks per interval and a
    /// sampling rate `rate_multiple` times the Nyquist rate of the signal band.
    pub fn new(n_coarse: usize, ticks_per_sample: usize, rate_multiple: f64) -> Result<Self> {
        if n_coarse < 4 {
            return Err(config(format!(
                "n_coarse must be at least 4, got {n_coarse}"
            )));
        }
        if ticks_per_sample < 2 {
            return Err(config(format!(
                "ticks_per_sample must be at least 2, got {ticks_per_sample}"
            )));
        }
        if !(rate_multiple.is_finite() && rate_multiple >= 1.0) {
            return Err(config(format!(
                "k_rate must be finite and >= 1, got {rate_multiple}"
            )));
        }
        Ok(Self {
            n_coarse,
            ticks_per_sample,
            rate_multiple,
        })
    }

    /// Nyquist-rate grid.
    pub fn nyquist(n_coarse: usize, ticks_per_sample: usize) -> Result<Self> {
        Self::new(n_coarse, ticks_per_sample, 1.0)
    }

    pub fn n_coarse(&self) -> usize {
        self.n_coarse
    }

    /// Fine ticks per sampling interval (the `R` of the grid).
    pub fn ticks_per_sample(&self) -> usize {
        self.ticks_per_sample
    }

    pub fn rate_multiple(&self) -> f64 {
        self.rate_multiple
    }

    /// Number of fine ticks, `n_coarse * ticks_per_sample`.
    pub fn fine_len(&self) -> usize {
        self.n_coarse * self.ticks_per_sample
    }

    /// Signal band edge in cycles per fine tick: `1 / (2 k R)`.
    pub fn band_edge(&self) -> f64 {
        1.0 / (2.0 * self.rate_multiple * self.ticks_per_sample as f64)
    }

    /// Sampling Nyquist frequency `1 / (2T)` in cycles per fine tick.
    pub fn nyquist_edge(&self) -> f64 {
        1.0 / (2.0 * self.ticks_per_sample as f64)
    }

    /// Same grid at a different sampling-rate multiple.
    pub fn with_rate(&self, rate_multiple: f64) -> Result<Self> {
        Self::new(self.n_coarse, self.ticks_per_sample, rate_multiple)
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(config(format!("non-finite value at index {i}"))),
        None => Ok(()),
    }
}

/// Real signal on a fine 1-D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSignal {
    grid: GridSpec,
    values: Vec<f64>,
}

impl DenseSignal {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.fine_len() {
            return Err(config(format!(
                "signal has {} values but the grid holds {}",
                values.len(),
                grid.fine_len()
            )));
        }
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    /// Builder for operator outputs whose length is correct by construction.
    pub(crate) fn from_parts(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.fine_len());
        Self { grid, values }
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self::from_parts(grid, vec![value; grid.fine_len()])
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Mean-square value over the whole period.
    pub fn power(&self) -> f64 {
        mean_square(&self.values)
    }
}

/// Real field on a fine rectangular grid, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseImage {
    grid_x: GridSpec,
    grid_y: GridSpec,
    values: Vec<f64>,
}

impl DenseImage {
    pub fn new(grid_x: GridSpec, grid_y: GridSpec, values: Vec<f64>) -> Result<Self> {
        let expected = grid_x.fine_len() * grid_y.fine_len();
        if values.len() != expected {
            return Err(config(format!(
                "image has {} values but the grids hold {expected}",
                values.len()
            )));
        }
        check_finite(&values)?;
        Ok(Self {
            grid_x,
            grid_y,
            values,
        })
    }

    pub(crate) fn from_parts(grid_x: GridSpec, grid_y: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid_x.fine_len() * grid_y.fine_len());
        Self {
            grid_x,
            grid_y,
            values,
        }
    }

    pub fn constant(grid_x: GridSpec, grid_y: GridSpec, value: f64) -> Self {
        Self::from_parts(
            grid_x,
            grid_y,
            vec![value; grid_x.fine_len() * grid_y.fine_len()],
        )
    }

    /// Outer product `column[y] * row[x]`.
    pub fn outer(column: &DenseSignal, row: &DenseSignal) -> Self {
        let values = column
            .values()
            .iter()
            .flat_map(|&c| row.values().iter().map(move |&r| c * r))
            .collect();
        Self::from_parts(*row.grid(), *column.grid(), values)
    }

    pub fn width(&self) -> usize {
        self.grid_x.fine_len()
    }

    pub fn height(&self) -> usize {
        self.grid_y.fine_len()
    }

    pub fn grid_x(&self) -> &GridSpec {
        &self.grid_x
    }

    pub fn grid_y(&self) -> &GridSpec {
        &self.grid_y
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width() + x]
    }

    pub fn power(&self) -> f64 {
        mean_square(&self.values)
    }
}

pub(crate) fn mean_square(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64
}
