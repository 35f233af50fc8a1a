//! Modular compensation: multiply the interpolated signal by a truncated sum
//! of sampling harmonics, `1 + 2 sum_{m=1..N} cos(2 pi m t / T)`, then lowpass.
//!
//! The harmonics shift the spectral images of the hold back into baseband, so
//! the effective gain on the signal band becomes `sum_{|m|<=N} sinc^p(fT - m)`.

use std::f64::consts::PI;

use crate::grid::{DenseImage, DenseSignal};
use crate::samplers::{interpolate, interpolate2d, CoarseImage, CoarseSamples, InterpKind};
use crate::spectral::{lowpass, lowpass2d, LowpassSpec};

/// Number of cosine harmonics mixed in. Zero leaves the signal untouched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ModuleCount(pub u32);

impl ModuleCount {
    pub const NONE: ModuleCount = ModuleCount(0);

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_none(self) -> bool {
        self.0 == 0
    }
}

impl From<u32> for ModuleCount {
    fn from(n: u32) -> Self {
        ModuleCount(n)
    }
}

/// One period (`ticks_per_sample` values) of the mixer, phase-locked so that
/// tick 0 is a sample instant.
pub fn mixer_period(ticks_per_sample: usize, modules: ModuleCount) -> Vec<f64> {
    let r = ticks_per_sample as f64;
    (0..ticks_per_sample)
        .map(|i| {
            let harmonics: f64 = (1..=modules.0)
                .map(|m| (2.0 * PI * m as f64 * i as f64 / r).cos())
                .sum();
            1.0 + 2.0 * harmonics
        })
        .collect()
}

pub(crate) fn mix_values(values: &mut [f64], ticks_per_sample: usize, modules: ModuleCount) {
    if modules.is_none() {
        return;
    }
    let period = mixer_period(ticks_per_sample, modules);
    for (v, m) in values.iter_mut().zip(period.iter().cycle()) {
        *v *= m;
    }
}

pub fn cosine_mix(s: &DenseSignal, modules: ModuleCount) -> DenseSignal {
    let mut values = s.values().to_vec();
    mix_values(&mut values, s.grid().ticks_per_sample(), modules);
    DenseSignal::from_parts(*s.grid(), values)
}

pub(crate) fn mix2d_values(
    values: &mut [f64],
    width: usize,
    ticks_x: usize,
    ticks_y: usize,
    modules: ModuleCount,
) {
    if modules.is_none() {
        return;
    }
    let px = mixer_period(ticks_x, modules);
    let py = mixer_period(ticks_y, modules);
    for (row, my) in values.chunks_mut(width).zip(py.iter().cycle()) {
        for (v, mx) in row.iter_mut().zip(px.iter().cycle()) {
            *v *= mx * my;
        }
    }
}

/// Separable 2-D mixer `m_x(i) m_y(j)`. For one module this is exactly
/// `1 + 2cos(x) + 2cos(y) + 4cos(x)cos(y)` on the lattice phases.
pub fn cosine_mix2d(img: &DenseImage, modules: ModuleCount) -> DenseImage {
    let mut values = img.values().to_vec();
    mix2d_values(
        &mut values,
        img.width(),
        img.grid_x().ticks_per_sample(),
        img.grid_y().ticks_per_sample(),
        modules,
    );
    DenseImage::from_parts(*img.grid_x(), *img.grid_y(), values)
}

/// One-shot modular reconstruction: lowpass(mix(interpolate(samples))).
pub fn modular_reconstruct(
    samples: &CoarseSamples,
    kind: InterpKind,
    modules: ModuleCount,
    lpf: &LowpassSpec,
) -> DenseSignal {
    lowpass(&cosine_mix(&interpolate(samples, kind), modules), lpf)
}

pub fn modular_reconstruct2d(
    samples: &CoarseImage,
    kind: InterpKind,
    modules: ModuleCount,
    lpf_x: &LowpassSpec,
    lpf_y: &LowpassSpec,
) -> DenseImage {
    lowpass2d(
        &cosine_mix2d(&interpolate2d(samples, kind), modules),
        lpf_x,
        lpf_y,
    )
}
