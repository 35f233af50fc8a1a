//! Test-signal generation and noise injection.
//!
//! All randomness comes from [`rng`]: a ChaCha8 stream seeded from a `u64`,
//! which produces the same sequence on every platform. Gaussian variates use
//! the ziggurat sampler of `rand_distr::StandardNormal`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;

use crate::error::{config, Result};
use crate::grid::{mean_square, DenseImage, DenseSignal, GridSpec};
use crate::spectral;

/// Seeded generator used for every random draw in the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn db_to_power(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn scale_to_power(values: &mut [f64], power_db: f64) {
    let current = mean_square(values);
    if current > 0.0 {
        let s = (db_to_power(power_db) / current).sqrt();
        values.iter_mut().for_each(|v| *v *= s);
    }
}

fn check_power(power_db: f64) -> Result<()> {
    if power_db.is_finite() {
        Ok(())
    } else {
        Err(config(format!(
            "signal power must be finite, got {power_db} dB"
        )))
    }
}

/// Band-limited Gaussian test signal.
///
/// White Gaussian noise is passed through an ideal DFT lowpass that keeps the
/// bins strictly below the band edge `1 / (2 k T)`; the bin on the edge itself
/// is removed because at the Nyquist rate its sine component has all-zero
/// samples. The result is rescaled to a mean-square power of `power_db`.
pub fn gen_bandlimited(seed: u64, grid: GridSpec, power_db: f64) -> Result<DenseSignal> {
    check_power(power_db)?;
    let n = grid.fine_len();
    let mut rng = rng(seed);
    let white = gaussian(&mut rng, n);
    let mut spectrum = spectral::dft(&white);
    let edge = grid.band_edge() * n as f64;
    for (b, c) in spectrum.iter_mut().enumerate() {
        if spectral::signed_bin(b, n).unsigned_abs() as f64 >= edge - 1e-9 {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    let mut values = spectral::idft_real(&spectrum);
    scale_to_power(&mut values, power_db);
    DenseSignal::new(grid, values)
}

/// Shape of the two-dimensional passband used for random test fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BandShape {
    /// Isotropic: `(fx/bx)^2 + (fy/by)^2 < 1`.
    #[default]
    Disc,
    /// Full rectangle `|fx| < bx, |fy| < by`.
    Rectangle,
}

impl std::str::FromStr for BandShape {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disc" => Ok(BandShape::Disc),
            "rect" | "rectangle" => Ok(BandShape::Rectangle),
            _ => Err(config(format!("unknown band shape `{s}` (disc or rect)"))),
        }
    }
}

/// Band-limited Gaussian random field on a rectangular lattice.
pub fn gen_bandlimited2d(
    seed: u64,
    grid_x: GridSpec,
    grid_y: GridSpec,
    power_db: f64,
    shape: BandShape,
) -> Result<DenseImage> {
    check_power(power_db)?;
    let (w, h) = (grid_x.fine_len(), grid_y.fine_len());
    let mut rng = rng(seed);
    let mut buf: Vec<Complex64> = gaussian(&mut rng, w * h)
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    spectral::forward2d(&mut buf, w);
    let (ex, ey) = (grid_x.band_edge() * w as f64, grid_y.band_edge() * h as f64);
    for y in 0..h {
        let fy = spectral::signed_bin(y, h).unsigned_abs() as f64;
        for x in 0..w {
            let fx = spectral::signed_bin(x, w).unsigned_abs() as f64;
            let keep = match shape {
                BandShape::Disc => (fx / ex).powi(2) + (fy / ey).powi(2) < 1.0 - 1e-12,
                BandShape::Rectangle => fx < ex - 1e-9 && fy < ey - 1e-9,
            };
            if !keep {
                buf[y * w + x] = Complex64::new(0.0, 0.0);
            }
        }
    }
    spectral::inverse2d(&mut buf, w);
    let mut values: Vec<f64> = buf.iter().map(|c| c.re).collect();
    scale_to_power(&mut values, power_db);
    DenseImage::new(grid_x, grid_y, values)
}

fn noise(seed: u64, n: usize, noise_power_db: f64) -> Vec<f64> {
    let sigma = db_to_power(noise_power_db).sqrt();
    let mut rng = rng(seed);
    gaussian(&mut rng, n)
        .into_iter()
        .map(|v| sigma * v)
        .collect()
}

/// Adds i.i.d. zero-mean Gaussian noise of variance `10^(noise_power_db/10)`.
pub fn add_awgn(x: &DenseSignal, noise_power_db: f64, seed: u64) -> DenseSignal {
    let n = noise(seed, x.len(), noise_power_db);
    let values = x.values().iter().zip(n).map(|(a, b)| a + b).collect();
    DenseSignal::from_parts(*x.grid(), values)
}

pub fn add_awgn2d(img: &DenseImage, noise_power_db: f64, seed: u64) -> DenseImage {
    let n = noise(seed, img.values().len(), noise_power_db);
    let values = img.values().iter().zip(n).map(|(a, b)| a + b).collect();
    DenseImage::from_parts(*img.grid_x(), *img.grid_y(), values)
}
