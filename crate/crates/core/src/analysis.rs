//! Closed-form and numerical convergence analysis.
//!
//! Everything here works on the per-frequency gain of the hybrid operator,
//! `H_N(f) = sum_{|m| <= N} sinc^p(fT - m)` with `p = 1` for sample-and-hold
//! and `p = 2` for linear interpolation. The error of the relaxed iteration
//! shrinks at frequency `f` by `|1 - lambda H_N(f)|` per step.

use std::f64::consts::PI;

use crate::error::{usage, Result};
use crate::modular::ModuleCount;
use crate::samplers::InterpKind;

/// Frequency samples used for the band maximum (endpoints are added).
pub const FREQUENCY_GRID: usize = 20_000;

/// Normalized sinc, `sin(pi u) / (pi u)` with `sinc(0) = 1`.
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        let x = PI * u;
        x.sin() / x
    }
}

/// `H_N(fT)` for `|fT| <= 1/2`.
pub fn distortion_gain(kind: InterpKind, modules: ModuleCount, ft: f64) -> f64 {
    let p = kind.distortion_exponent();
    let n = modules.get() as i64;
    (-n..=n).map(|m| sinc(ft - m as f64).powi(p)).sum()
}

fn band_frequencies(k_rate: f64) -> impl Iterator<Item = f64> {
    let top = 0.5 / k_rate;
    (0..=FREQUENCY_GRID).map(move |i| top * i as f64 / FREQUENCY_GRID as f64)
}

/// `max |1 - lambda H_N(fT)|` over `fT in [0, 1/(2k)]`.
pub fn contraction_factor(kind: InterpKind, modules: ModuleCount, lambda: f64, k_rate: f64) -> f64 {
    band_frequencies(k_rate)
        .map(|f| (1.0 - lambda * distortion_gain(kind, modules, f)).abs())
        .fold(0.0, f64::max)
}

/// Frequency (in `fT`) where the contraction maximum is attained.
pub fn contraction_argmax(kind: InterpKind, modules: ModuleCount, lambda: f64, k_rate: f64) -> f64 {
    band_frequencies(k_rate)
        .map(|f| (f, (1.0 - lambda * distortion_gain(kind, modules, f)).abs()))
        .fold(
            (0.0, -1.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        )
        .0
}

/// Closed-form relaxation `1 / H_1(1/2)`, next to the value printed in the
/// literature for the same quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaOpt {
    pub recomputed: f64,
    pub printed: f64,
}

impl LambdaOpt {
    /// True when the printed figure agrees with the recomputation to two decimals.
    pub fn printed_matches(&self) -> bool {
        (self.recomputed - self.printed).abs() < 0.005
    }
}

/// Band-edge optimal relaxation for one module.
pub fn lambda_opt_paper(kind: InterpKind, modules: ModuleCount) -> Result<LambdaOpt> {
    if modules.get() != 1 {
        return Err(usage(format!(
            "the closed-form optimal lambda exists only for one module, got {}",
            modules.get()
        )));
    }
    let printed = match kind {
        InterpKind::SampleAndHold => 0.94,
        InterpKind::LinearInterp => 1.31,
    };
    Ok(LambdaOpt {
        recomputed: 1.0 / distortion_gain(kind, modules, 0.5),
        printed,
    })
}

/// Contraction factor printed in the literature where it differs from the
/// recomputed value.
pub fn printed_contraction_factor(kind: InterpKind, modules: ModuleCount) -> Option<f64> {
    match (kind, modules.get()) {
        (InterpKind::LinearInterp, 1) => Some(0.234),
        _ => None,
    }
}

/// `argmin_lambda contraction_factor` on `(0, 2)`, refined to 1e-4.
pub fn lambda_opt_minimax(kind: InterpKind, modules: ModuleCount, k_rate: f64) -> f64 {
    let r = |l: f64| contraction_factor(kind, modules, l, k_rate);
    // the objective is a max of convex functions in lambda, so coarse grid
    // plus ternary search on the bracketing cell suffices
    let steps = 200;
    let h = 2.0 / steps as f64;
    let best = (1..steps)
        .map(|i| i as f64 * h)
        .min_by(|a, b| r(*a).total_cmp(&r(*b)))
        .unwrap_or(1.0);
    let (mut lo, mut hi) = ((best - h).max(1e-6), (best + h).min(2.0 - 1e-6));
    while hi - lo > 1e-5 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if r(m1) <= r(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

/// Noise-tolerance bound coefficient `c lambda^(2-k)`.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseCoeff {
    Known(f64),
    Unavailable(String),
}

impl NoiseCoeff {
    pub fn value(&self) -> Option<f64> {
        match self {
            NoiseCoeff::Known(v) => Some(*v),
            NoiseCoeff::Unavailable(_) => None,
        }
    }
}

/// Published bound constants: 0.318 for plain sample-and-hold iteration and
/// 0.531 for the one-module hybrid. Other combinations have no published
/// constant.
pub fn noise_tolerance_coeff(
    kind: InterpKind,
    modules: ModuleCount,
    lambda: f64,
    iteration: u32,
) -> NoiseCoeff {
    // printed three-digit constants, not 1/pi
    #[allow(clippy::approx_constant)]
    let base = match (kind, modules.get()) {
        (InterpKind::SampleAndHold, 0) => 0.318,
        (InterpKind::SampleAndHold, 1) => 0.531,
        _ => {
            return NoiseCoeff::Unavailable(format!(
                "no published noise bound for {kind} with {} module(s)",
                modules.get()
            ))
        }
    };
    NoiseCoeff::Known(base * lambda.powi(2 - iteration as i32))
}

/// Per-sample real operation counts of `M` iterations with FFT block `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpCounts {
    pub additions: u64,
    pub multiplications: u64,
}

impl OpCounts {
    /// 2-D cost for `K x K` images.
    pub fn for_image(self, k: u64) -> OpCounts {
        OpCounts {
            additions: self.additions * 2 * k,
            multiplications: self.multiplications * 2 * k,
        }
    }
}

/// `M(4 log2(2N) + 2)` additions and `M(2 log2(2N) + 1)` multiplications,
/// plus `2M` of each for the one-module hybrid.
pub fn op_counts(iterations: u64, fft_block: u64, hybrid_one_module: bool) -> Result<OpCounts> {
    if iterations < 1 {
        return Err(usage("op_counts needs at least one iteration"));
    }
    if !fft_block.is_power_of_two() {
        return Err(usage(format!(
            "FFT block must be a power of two, got {fft_block}"
        )));
    }
    let l = u64::from((2 * fft_block).trailing_zeros());
    let extra = if hybrid_one_module { 2 } else { 0 };
    Ok(OpCounts {
        additions: iterations * (4 * l + 2 + extra),
        multiplications: iterations * (2 * l + 1 + extra),
    })
}

/// SNR gain per iteration, `-20 log10(r)`.
pub fn predicted_gain_db(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(usage(format!(
            "contraction factor must lie in (0, 1), got {r}"
        )));
    }
    Ok(-20.0 * r.log10())
}

/// Summary of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisResult {
    pub kind: InterpKind,
    pub modules: ModuleCount,
    pub lambda: f64,
    pub k_rate: f64,
    pub r: f64,
    /// Frequency `fT` where `r` is attained.
    pub r_argmax: f64,
    pub r_printed: Option<f64>,
    pub lambda_opt: Option<LambdaOpt>,
    pub lambda_minimax: f64,
    pub db_per_iter: Option<f64>,
    pub noise_coeff: NoiseCoeff,
}

/// Evaluates every analysis quantity for one configuration.
/// The noise coefficient is reported for iteration 2.
pub fn analyze(
    kind: InterpKind,
    modules: ModuleCount,
    lambda: f64,
    k_rate: f64,
) -> Result<AnalysisResult> {
    if !(lambda > 0.0 && lambda < 2.0) {
        return Err(usage(format!("lambda must lie in (0, 2), got {lambda}")));
    }
    if !(k_rate >= 1.0 && k_rate.is_finite()) {
        return Err(usage(format!("k_rate must be at least 1, got {k_rate}")));
    }
    let r = contraction_factor(kind, modules, lambda, k_rate);
    Ok(AnalysisResult {
        kind,
        modules,
        lambda,
        k_rate,
        r,
        r_argmax: contraction_argmax(kind, modules, lambda, k_rate),
        r_printed: printed_contraction_factor(kind, modules),
        lambda_opt: lambda_opt_paper(kind, modules).ok(),
        lambda_minimax: lambda_opt_minimax(kind, modules, k_rate),
        db_per_iter: predicted_gain_db(r).ok(),
        noise_coeff: noise_tolerance_coeff(kind, modules, lambda, 2),
    })
}
