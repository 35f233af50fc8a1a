//! Grayscale image enlargement and PSNR benchmarking.
//!
//! A low-resolution image is treated as Nyquist-rate lattice samples of a
//! band-limited field whose fine grid is the target resolution
//! (`ticks_per_sample = factor`). Reconstruction runs on a mirror-extended
//! copy so the periodic FFT model sees no artificial border jumps; the
//! result is cropped, then clamped and rounded once at the very end.

mod pgm;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use pgm::{decode_pgm, encode_pgm, encode_pgm_ascii, read_pgm, write_pgm};

use crate::error::{config, usage, Result};
use crate::grid::GridSpec;
use crate::metrics::psnr_db_slice;
use crate::modular::ModuleCount;
use crate::samplers::{CoarseImage, InterpKind};
use crate::solver::{iterate2d, Acceleration, ReconConfig, ReconOperator2d};
use crate::spectral::{lowpass_cols, lowpass_rows, LowpassSpec};

/// Peak value used for PSNR.
pub const PEAK: f64 = 255.0;

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(config(format!(
                "image must be at least 2x2, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(usage(format!(
                "{} pixels do not fill a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Rounds and clamps floating-point values into an image.
    pub fn quantize(width: usize, height: usize, values: &[f64]) -> Result<Self> {
        let pixels = values
            .iter()
            .map(|v| v.round().clamp(0.0, PEAK) as u8)
            .collect();
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.pixels.iter().map(|&p| f64::from(p)).collect()
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().map(|&p| f64::from(p)).sum::<f64>() / self.pixels.len() as f64
    }
}

fn check_divisible(img: &GrayImage, factor: usize) -> Result<()> {
    if factor == 0 || !img.width.is_multiple_of(factor) || !img.height.is_multiple_of(factor) {
        return Err(usage(format!(
            "{}x{} image is not divisible by factor {factor}",
            img.width, img.height
        )));
    }
    Ok(())
}

/// Direct subsampling: `out[i, j] = in[i * factor, j * factor]`.
pub fn decimate(img: &GrayImage, factor: usize) -> Result<GrayImage> {
    check_divisible(img, factor)?;
    let pixels = img
        .pixels
        .chunks(img.width)
        .step_by(factor)
        .flat_map(|row| row.iter().step_by(factor).copied())
        .collect();
    GrayImage::new(img.width / factor, img.height / factor, pixels)
}

/// Mirror-extends a `width x height` field to `2width x 2height`.
fn mirror_extend(values: &[f64], width: usize, height: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(4 * values.len());
    let rows = values.chunks(width).chain(values.chunks(width).rev());
    for row in rows {
        out.extend_from_slice(row);
        out.extend(row.iter().rev());
    }
    debug_assert_eq!(out.len(), 4 * width * height);
    out
}

fn crop(values: &[f64], width: usize, new_width: usize, new_height: usize) -> Vec<f64> {
    values
        .chunks(width)
        .take(new_height)
        .flat_map(|row| row[..new_width].iter().copied())
        .collect()
}

/// Ideal lowpass to the decimated band (on a mirror-extended copy), then
/// direct subsampling. The result is rounded to 8 bits.
pub fn decimate_antialiased(img: &GrayImage, factor: usize) -> Result<GrayImage> {
    check_divisible(img, factor)?;
    if factor == 1 {
        return Ok(img.clone());
    }
    let (w, h) = (img.width, img.height);
    let mut ext = mirror_extend(&img.to_f64(), w, h);
    let spec = LowpassSpec::new(0.5 / factor as f64)?;
    lowpass_rows(&mut ext, 2 * w, &spec);
    lowpass_cols(&mut ext, 2 * w, &spec);
    let low: Vec<f64> = ext
        .chunks(2 * w)
        .take(h)
        .step_by(factor)
        .flat_map(|row| row[..w].iter().step_by(factor).copied())
        .collect();
    GrayImage::quantize(w / factor, h / factor, &low)
}

/// How the benchmark produces its low-resolution input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decimation {
    /// Pick every `factor`-th pixel.
    Direct,
    /// Ideal anti-alias lowpass before subsampling.
    #[default]
    Antialiased,
}

impl Decimation {
    pub fn apply(self, img: &GrayImage, factor: usize) -> Result<GrayImage> {
        match self {
            Decimation::Direct => decimate(img, factor),
            Decimation::Antialiased => decimate_antialiased(img, factor),
        }
    }
}

impl FromStr for Decimation {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Decimation::Direct),
            "antialiased" | "aa" => Ok(Decimation::Antialiased),
            _ => Err(usage(format!(
                "unknown decimation '{s}' (direct, antialiased)"
            ))),
        }
    }
}

impl fmt::Display for Decimation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decimation::Direct => "direct",
            Decimation::Antialiased => "antialiased",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnlargeMethod {
    Bilinear,
    Iterative { iterations: usize },
    Hybrid { iterations: usize, modules: u32 },
}

impl EnlargeMethod {
    pub fn label(&self) -> &'static str {
        match self {
            EnlargeMethod::Bilinear => "bilinear",
            EnlargeMethod::Iterative { .. } => "iterative",
            EnlargeMethod::Hybrid { .. } => "hybrid",
        }
    }

    pub fn iterations(&self) -> usize {
        match *self {
            EnlargeMethod::Bilinear => 0,
            EnlargeMethod::Iterative { iterations } | EnlargeMethod::Hybrid { iterations, .. } => {
                iterations
            }
        }
    }

    pub fn modules(&self) -> u32 {
        match *self {
            EnlargeMethod::Hybrid { modules, .. } => modules,
            _ => 0,
        }
    }
}

/// `bilinear`, `iterative:N` or `hybrid:N:M`.
impl FromStr for EnlargeMethod {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| -> Result<usize> {
            p.parse()
                .map_err(|_| usage(format!("bad number '{p}' in method '{s}'")))
        };
        match parts.as_slice() {
            ["bilinear"] => Ok(EnlargeMethod::Bilinear),
            ["iterative", n] => Ok(EnlargeMethod::Iterative {
                iterations: num(n)?,
            }),
            ["hybrid", n, m] => Ok(EnlargeMethod::Hybrid {
                iterations: num(n)?,
                modules: num(m)? as u32,
            }),
            _ => Err(usage(format!(
                "unknown method '{s}' (bilinear, iterative:N, hybrid:N:M)"
            ))),
        }
    }
}

impl fmt::Display for EnlargeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnlargeMethod::Bilinear => f.write_str("bilinear"),
            EnlargeMethod::Iterative { iterations } => write!(f, "iterative:{iterations}"),
            EnlargeMethod::Hybrid {
                iterations,
                modules,
            } => write!(f, "hybrid:{iterations}:{modules}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnlargeConfig {
    /// Enlargement per dimension.
    pub factor: usize,
    pub method: EnlargeMethod,
    pub lambda: f64,
    pub acceleration: Acceleration,
}

impl EnlargeConfig {
    pub fn new(factor: usize, method: EnlargeMethod) -> Self {
        Self {
            factor,
            method,
            lambda: 1.0,
            acceleration: Acceleration::None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.factor < 2 {
            return Err(config(format!(
                "enlargement factor must be at least 2, got {}",
                self.factor
            )));
        }
        if self.method != EnlargeMethod::Bilinear && self.method.iterations() < 1 {
            return Err(config("iterative enlargement needs at least one iteration"));
        }
        Ok(())
    }
}

/// Bilinear enlargement with edge replication past the last row/column.
pub fn bilinear(low: &GrayImage, factor: usize) -> Vec<f64> {
    let (w, h) = (low.width, low.height);
    let f = factor as f64;
    let at = |x: usize, y: usize| f64::from(low.get(x.min(w - 1), y.min(h - 1)));
    let mut out = Vec::with_capacity(w * h * factor * factor);
    for y in 0..h * factor {
        let (y0, fy) = (y / factor, (y % factor) as f64 / f);
        for x in 0..w * factor {
            let (x0, fx) = (x / factor, (x % factor) as f64 / f);
            let top = at(x0, y0) * (1.0 - fx) + at(x0 + 1, y0) * fx;
            let bottom = at(x0, y0 + 1) * (1.0 - fx) + at(x0 + 1, y0 + 1) * fx;
            out.push(top * (1.0 - fy) + bottom * fy);
        }
    }
    out
}

/// Enlarged field in floating point, before clamping and rounding.
/// Row-major, `factor * width` by `factor * height`.
pub fn enlarge_values(low: &GrayImage, cfg: &EnlargeConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let modules = match cfg.method {
        EnlargeMethod::Bilinear => return Ok(bilinear(low, cfg.factor)),
        EnlargeMethod::Iterative { .. } => 0,
        EnlargeMethod::Hybrid { modules, .. } => modules,
    };
    let (w, h) = (low.width, low.height);
    let grid_x = GridSpec::nyquist(2 * w, cfg.factor)?;
    let grid_y = GridSpec::nyquist(2 * h, cfg.factor)?;
    let lattice = CoarseImage::new(grid_x, grid_y, mirror_extend(&low.to_f64(), w, h))?;
    let op = ReconOperator2d::new(
        InterpKind::SampleAndHold,
        ModuleCount(modules),
        grid_x,
        grid_y,
    );
    let recon = ReconConfig {
        operator: op,
        lambda: cfg.lambda,
        iterations: cfg.method.iterations(),
        acceleration: cfg.acceleration,
    };
    let report = iterate2d(&lattice, &recon, None)?;
    Ok(crop(
        report.estimate.values(),
        grid_x.fine_len(),
        w * cfg.factor,
        h * cfg.factor,
    ))
}

pub fn enlarge(low: &GrayImage, cfg: &EnlargeConfig) -> Result<GrayImage> {
    let values = enlarge_values(low, cfg)?;
    GrayImage::quantize(low.width * cfg.factor, low.height * cfg.factor, &values)
}

/// One benchmark line.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub config: EnlargeConfig,
    /// `+inf` for a perfect reconstruction.
    pub psnr_db: f64,
    pub mean_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutcome {
    pub rows: Vec<BenchRow>,
    /// Low-resolution input of each row.
    pub decimated: Vec<GrayImage>,
    pub reconstructions: Vec<GrayImage>,
}

fn mean_abs_error(a: &GrayImage, b: &GrayImage) -> f64 {
    a.pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&x, &y)| f64::from(x.abs_diff(y)))
        .sum::<f64>()
        / a.pixels.len() as f64
}

/// Decimates `original`, enlarges it with every method and scores the
/// result. Rows follow the order of `methods`.
pub fn benchmark(
    original: &GrayImage,
    methods: &[EnlargeConfig],
    decimation: Decimation,
) -> Result<BenchOutcome> {
    let reference = original.to_f64();
    let results: Vec<Result<(BenchRow, GrayImage, GrayImage)>> = methods
        .par_iter()
        .map(|cfg| {
            let low = decimation.apply(original, cfg.factor)?;
            let recon = enlarge(&low, cfg)?;
            let psnr_db = psnr_db_slice(&reference, &recon.to_f64(), PEAK)?;
            let row = BenchRow {
                config: *cfg,
                psnr_db,
                mean_abs_error: mean_abs_error(original, &recon),
            };
            Ok((row, low, recon))
        })
        .collect();
    let mut out = BenchOutcome {
        rows: Vec::with_capacity(methods.len()),
        decimated: Vec::with_capacity(methods.len()),
        reconstructions: Vec::with_capacity(methods.len()),
    };
    for r in results {
        let (row, low, recon) = r?;
        out.rows.push(row);
        out.decimated.push(low);
        out.reconstructions.push(recon);
    }
    Ok(out)
}

pub fn psnr_benchmark(
    original: &GrayImage,
    methods: &[EnlargeConfig],
    decimation: Decimation,
) -> Result<Vec<BenchRow>> {
    Ok(benchmark(original, methods, decimation)?.rows)
}

/// Absolute-difference images on one shared scale: the largest error over
/// all reconstructions maps to 255.
pub fn error_images(original: &GrayImage, reconstructions: &[GrayImage]) -> Result<Vec<GrayImage>> {
    let max = reconstructions
        .iter()
        .flat_map(|r| {
            original
                .pixels
                .iter()
                .zip(&r.pixels)
                .map(|(&a, &b)| a.abs_diff(b))
        })
        .max()
        .unwrap_or(0);
    let scale = if max == 0 { 0.0 } else { PEAK / f64::from(max) };
    reconstructions
        .iter()
        .map(|r| {
            if (r.width, r.height) != (original.width, original.height) {
                return Err(usage("reconstruction size differs from the original"));
            }
            let diff: Vec<f64> = original
                .pixels
                .iter()
                .zip(&r.pixels)
                .map(|(&a, &b)| f64::from(a.abs_diff(b)) * scale)
                .collect();
            GrayImage::quantize(original.width, original.height, &diff)
        })
        .collect()
}
