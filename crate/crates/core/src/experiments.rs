//! Monte-Carlo experiments and their CSV output.
//!
//! Every experiment draws `trials` random band-limited signals with seeds
//! `seed, seed + 1, ...`, runs them in parallel and averages the per-trial
//! SNR (in dB) in trial order, so results are identical for any thread
//! count.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analysis::{self, AnalysisResult, NoiseCoeff};
use crate::error::{config, Error, Result};
use crate::grid::{DenseImage, DenseSignal, GridSpec};
use crate::imagebench::{self, BenchRow, Decimation, EnlargeConfig, GrayImage};
use crate::metrics::{snr2d_db, snr_db, DEFAULT_EDGE_IGNORE};
use crate::modular::ModuleCount;
use crate::samplers::{interpolate, interpolate2d, sample, sample2d, InterpKind};
use crate::signal::{add_awgn, add_awgn2d, gen_bandlimited, gen_bandlimited2d, BandShape};
use crate::solver::{
    iterate, iterate2d, Acceleration, ReconConfig, ReconOperator, ReconOperator2d,
};

pub const DEFAULT_TRIALS: usize = 50;
pub const DEFAULT_POWER_DB: f64 = 34.0;
pub const DEFAULT_SEED: u64 = 1;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "HYBRID_RECON_OUT";

/// Traces above this level are treated as saturated when measuring slopes.
pub const SATURATION_DB: f64 = 200.0;

/// Offset that separates noise seeds from signal seeds.
const NOISE_SEED_OFFSET: u64 = 0x5eed_0000_0000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dims {
    One,
    Two,
}

/// Random signal ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ensemble {
    pub dims: Dims,
    pub trials: usize,
    pub seed: u64,
    pub power_db: f64,
    pub n_coarse: usize,
    pub ticks_per_sample: usize,
    /// Spectral support of 2-D fields.
    pub shape: BandShape,
}

impl Ensemble {
    /// 128 samples at 16 ticks each.
    pub fn one_d() -> Self {
        Self {
            dims: Dims::One,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            power_db: DEFAULT_POWER_DB,
            n_coarse: 128,
            ticks_per_sample: 16,
            shape: BandShape::default(),
        }
    }

    /// 32 x 32 samples at 8 x 8 ticks each.
    pub fn two_d() -> Self {
        Self {
            dims: Dims::Two,
            n_coarse: 32,
            ticks_per_sample: 8,
            ..Self::one_d()
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(config("trials must be at least 1"));
        }
        if !self.power_db.is_finite() {
            return Err(config(format!(
                "power must be finite, got {} dB",
                self.power_db
            )));
        }
        GridSpec::nyquist(self.n_coarse, self.ticks_per_sample)?;
        Ok(())
    }

    fn grid(&self, k_rate: f64) -> Result<GridSpec> {
        GridSpec::new(self.n_coarse, self.ticks_per_sample, k_rate)
    }
}

/// One curve of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSpec {
    pub kind: InterpKind,
    pub modules: u32,
    pub lambda: f64,
    pub k_rate: f64,
    pub iterations: usize,
    pub acceleration: Acceleration,
    /// AWGN added to the dense signal before sampling.
    pub noise_power_db: Option<f64>,
}

impl TraceSpec {
    pub fn new(kind: InterpKind, modules: u32, iterations: usize) -> Self {
        Self {
            kind,
            modules,
            lambda: 1.0,
            k_rate: 1.0,
            iterations,
            acceleration: Acceleration::None,
            noise_power_db: None,
        }
    }

    pub fn lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn k_rate(mut self, k_rate: f64) -> Self {
        self.k_rate = k_rate;
        self
    }

    pub fn chebyshev(mut self, a: f64, b: f64) -> Self {
        self.acceleration = Acceleration::Chebyshev { a, b };
        self
    }

    pub fn noise(mut self, noise_power_db: f64) -> Self {
        self.noise_power_db = Some(noise_power_db);
        self
    }

    /// Method label used in CSV output.
    pub fn method(&self) -> String {
        match self.acceleration {
            Acceleration::None => self.kind.label().to_string(),
            Acceleration::Chebyshev { .. } => format!("{}-chebyshev", self.kind.label()),
        }
    }
}

/// Ensemble-averaged SNR trace.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanTrace {
    pub spec: TraceSpec,
    /// Mean SNR of the starting iterate.
    pub initial_snr_db: f64,
    /// Mean SNR of iterations `1..=iterations`.
    pub snr_db: Vec<f64>,
    /// Mean SNR of the plain interpolated (uncompensated) samples.
    pub interpolated_snr_db: f64,
    /// Trials whose run was stopped as non-contracting.
    pub diverged_trials: usize,
}

impl MeanTrace {
    pub fn peak(&self) -> f64 {
        self.snr_db
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn last(&self) -> f64 {
        self.snr_db.last().copied().unwrap_or(f64::NAN)
    }

    /// Mean dB gained per iteration from iteration 1 until saturation.
    pub fn slope_db_per_iteration(&self) -> f64 {
        let diffs: Vec<f64> = self
            .snr_db
            .windows(2)
            .take_while(|w| w[0] < SATURATION_DB && w[1] < SATURATION_DB)
            .map(|w| w[1] - w[0])
            .collect();
        if diffs.is_empty() {
            f64::NAN
        } else {
            diffs.iter().sum::<f64>() / diffs.len() as f64
        }
    }
}

struct TrialResult {
    initial: f64,
    trace: Vec<f64>,
    interpolated: f64,
    diverged: bool,
}

fn pad(mut trace: Vec<f64>, len: usize) -> Vec<f64> {
    if let Some(&last) = trace.last() {
        trace.resize(len, last);
    }
    trace
}

fn trial_1d(ens: &Ensemble, spec: &TraceSpec, t: usize) -> Result<TrialResult> {
    let grid = ens.grid(spec.k_rate)?;
    let seed = ens.seed.wrapping_add(t as u64);
    let x = gen_bandlimited(seed, grid, ens.power_db)?;
    let observed: DenseSignal = match spec.noise_power_db {
        Some(db) => add_awgn(&x, db, seed.wrapping_add(NOISE_SEED_OFFSET)),
        None => x.clone(),
    };
    let samples = sample(&observed);
    let op = ReconOperator::new(spec.kind, ModuleCount(spec.modules), grid);
    let cfg = ReconConfig {
        operator: op,
        lambda: spec.lambda,
        iterations: spec.iterations,
        acceleration: spec.acceleration,
    };
    let report = iterate(&samples, &cfg, Some(&x))?;
    Ok(TrialResult {
        initial: report.initial_snr.unwrap_or(f64::NAN),
        trace: pad(report.snr_trace, spec.iterations),
        interpolated: snr_db(&x, &interpolate(&samples, spec.kind), DEFAULT_EDGE_IGNORE)?,
        diverged: report.diverged,
    })
}

fn trial_2d(ens: &Ensemble, spec: &TraceSpec, t: usize) -> Result<TrialResult> {
    let grid = ens.grid(spec.k_rate)?;
    let seed = ens.seed.wrapping_add(t as u64);
    let x = gen_bandlimited2d(seed, grid, grid, ens.power_db, ens.shape)?;
    let observed: DenseImage = match spec.noise_power_db {
        Some(db) => add_awgn2d(&x, db, seed.wrapping_add(NOISE_SEED_OFFSET)),
        None => x.clone(),
    };
    let samples = sample2d(&observed);
    let op = ReconOperator2d::new(spec.kind, ModuleCount(spec.modules), grid, grid);
    let cfg = ReconConfig {
        operator: op,
        lambda: spec.lambda,
        iterations: spec.iterations,
        acceleration: spec.acceleration,
    };
    let report = iterate2d(&samples, &cfg, Some(&x))?;
    Ok(TrialResult {
        initial: report.initial_snr.unwrap_or(f64::NAN),
        trace: pad(report.snr_trace, spec.iterations),
        interpolated: snr2d_db(&x, &interpolate2d(&samples, spec.kind), DEFAULT_EDGE_IGNORE)?,
        diverged: report.diverged,
    })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

/// Runs one curve over the whole ensemble.
pub fn mean_trace(ens: &Ensemble, spec: &TraceSpec) -> Result<MeanTrace> {
    ens.validate()?;
    if spec.iterations < 1 {
        return Err(config("iterations must be at least 1"));
    }
    let results: Vec<TrialResult> = (0..ens.trials)
        .into_par_iter()
        .map(|t| match ens.dims {
            Dims::One => trial_1d(ens, spec, t),
            Dims::Two => trial_2d(ens, spec, t),
        })
        .collect::<Result<_>>()?;
    let snr_db = (0..spec.iterations)
        .map(|i| mean(results.iter().map(|r| r.trace[i])))
        .collect();
    Ok(MeanTrace {
        spec: *spec,
        initial_snr_db: mean(results.iter().map(|r| r.initial)),
        snr_db,
        interpolated_snr_db: mean(results.iter().map(|r| r.interpolated)),
        diverged_trials: results.iter().filter(|r| r.diverged).count(),
    })
}

/// One trace per module count.
pub fn convergence(ens: &Ensemble, base: &TraceSpec, modules: &[u32]) -> Result<Vec<MeanTrace>> {
    modules
        .iter()
        .map(|&m| {
            mean_trace(
                ens,
                &TraceSpec {
                    modules: m,
                    ..*base
                },
            )
        })
        .collect()
}

/// Same experiment under added noise.
pub fn noise(
    ens: &Ensemble,
    base: &TraceSpec,
    modules: &[u32],
    noise_power_db: f64,
) -> Result<Vec<MeanTrace>> {
    convergence(ens, &base.noise(noise_power_db), modules)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    /// `(SNR after the last iteration - SNR of x_0) / iterations`.
    pub avg_db_per_iteration: f64,
}

pub fn lambda_sweep(ens: &Ensemble, base: &TraceSpec, lambdas: &[f64]) -> Result<Vec<SweepPoint>> {
    if lambdas.is_empty() {
        return Err(config("lambda grid is empty"));
    }
    lambdas
        .iter()
        .map(|&lambda| {
            if !(lambda > 0.0 && lambda < 2.0) {
                return Err(config(format!("lambda must lie in (0, 2), got {lambda}")));
            }
            let tr = mean_trace(ens, &base.lambda(lambda))?;
            Ok(SweepPoint {
                lambda,
                avg_db_per_iteration: (tr.last() - tr.initial_snr_db) / base.iterations as f64,
            })
        })
        .collect()
}

/// Sweep point with the largest average gain.
pub fn sweep_argmax(points: &[SweepPoint]) -> Option<SweepPoint> {
    points
        .iter()
        .copied()
        .max_by(|a, b| a.avg_db_per_iteration.total_cmp(&b.avg_db_per_iteration))
}

/// Evenly spaced lambda grid from `start` to `stop` inclusive.
pub fn lambda_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || stop < start {
        return Err(config(format!("bad lambda grid {start}:{step}:{stop}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateOutcome {
    pub traces: Vec<MeanTrace>,
    pub slopes: Vec<f64>,
    /// Slope of the last rate minus slope of the first.
    pub gain_difference_db: f64,
}

pub fn rate(ens: &Ensemble, base: &TraceSpec, k_rates: &[f64]) -> Result<RateOutcome> {
    if k_rates.is_empty() {
        return Err(config("no sampling rates given"));
    }
    let traces: Vec<MeanTrace> = k_rates
        .iter()
        .map(|&k| mean_trace(ens, &base.k_rate(k)))
        .collect::<Result<_>>()?;
    let slopes: Vec<f64> = traces
        .iter()
        .map(MeanTrace::slope_db_per_iteration)
        .collect();
    Ok(RateOutcome {
        gain_difference_db: slopes[slopes.len() - 1] - slopes[0],
        traces,
        slopes,
    })
}

fn num(v: f64) -> String {
    v.to_string()
}

fn csv_err(path: Option<&Path>, e: csv::Error) -> Error {
    let path = path.map(Path::to_path_buf).unwrap_or_default();
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io { path, source },
        other => Error::Io {
            path,
            source: std::io::Error::other(format!("{other:?}")),
        },
    }
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(|e| csv_err(None, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| csv_err(None, e))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: PathBuf::new(),
        source,
    })
}

pub const CONVERGENCE_HEADER: [&str; 8] = [
    "method",
    "modules",
    "lambda",
    "k_rate",
    "iteration",
    "mean_snr_db",
    "trials",
    "seed",
];

fn trace_rows(ens: &Ensemble, traces: &[MeanTrace], noise: bool) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for tr in traces {
        for (i, snr) in tr.snr_db.iter().enumerate() {
            let mut row = vec![
                tr.spec.method(),
                tr.spec.modules.to_string(),
                num(tr.spec.lambda),
                num(tr.spec.k_rate),
                (i + 1).to_string(),
                num(*snr),
                ens.trials.to_string(),
                ens.seed.to_string(),
            ];
            if noise {
                row.push(num(tr.spec.noise_power_db.unwrap_or(f64::NEG_INFINITY)));
                row.push(num(tr.interpolated_snr_db));
                row.push(num(tr.initial_snr_db));
            }
            rows.push(row);
        }
    }
    rows
}

/// `method,modules,lambda,k_rate,iteration,mean_snr_db,trials,seed`.
pub fn write_convergence_csv<W: Write>(out: W, ens: &Ensemble, traces: &[MeanTrace]) -> Result<()> {
    write_rows(out, &CONVERGENCE_HEADER, &trace_rows(ens, traces, false))
}

/// Convergence columns plus `noise_power_db`, the realized SNR of the plain
/// interpolated noisy samples (`initial_interp_snr_db`) and of the starting
/// iterate (`initial_iterate_snr_db`).
pub fn write_noise_csv<W: Write>(out: W, ens: &Ensemble, traces: &[MeanTrace]) -> Result<()> {
    let mut header = CONVERGENCE_HEADER.to_vec();
    header.extend([
        "noise_power_db",
        "initial_interp_snr_db",
        "initial_iterate_snr_db",
    ]);
    write_rows(out, &header, &trace_rows(ens, traces, true))
}

pub fn write_sweep_csv<W: Write>(out: W, points: &[SweepPoint]) -> Result<()> {
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| vec![num(p.lambda), num(p.avg_db_per_iteration)])
        .collect();
    write_rows(out, &["lambda", "avg_db_per_iteration"], &rows)
}

/// Per-rate traces in the convergence layout.
pub fn write_rate_csv<W: Write>(out: W, ens: &Ensemble, outcome: &RateOutcome) -> Result<()> {
    write_convergence_csv(out, ens, &outcome.traces)
}

/// `k_rate,slope_db_per_iteration,gain_difference_db` (difference to the first rate).
pub fn write_rate_summary_csv<W: Write>(out: W, outcome: &RateOutcome) -> Result<()> {
    let first = outcome.slopes[0];
    let rows: Vec<Vec<String>> = outcome
        .traces
        .iter()
        .zip(&outcome.slopes)
        .map(|(t, &s)| vec![num(t.spec.k_rate), num(s), num(s - first)])
        .collect();
    write_rows(
        out,
        &["k_rate", "slope_db_per_iteration", "gain_difference_db"],
        &rows,
    )
}

/// Analysis plus operation counts for `iterations` passes with FFT block `fft_block`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub result: AnalysisResult,
    pub iterations: u64,
    pub fft_block: u64,
    pub conventional_ops: analysis::OpCounts,
    pub hybrid_ops: analysis::OpCounts,
}

pub fn analysis_report(
    kind: InterpKind,
    modules: u32,
    lambda: f64,
    k_rate: f64,
    iterations: u64,
    fft_block: u64,
) -> Result<AnalysisReport> {
    Ok(AnalysisReport {
        result: analysis::analyze(kind, ModuleCount(modules), lambda, k_rate)?,
        iterations,
        fft_block,
        conventional_ops: analysis::op_counts(iterations, fft_block, false)?,
        hybrid_ops: analysis::op_counts(iterations, fft_block, true)?,
    })
}

impl AnalysisReport {
    /// `(key, value)` pairs; absent values are empty strings.
    pub fn entries(&self) -> Vec<(String, String)> {
        let r = &self.result;
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        let mut e = vec![
            ("kind", r.kind.label().to_string()),
            ("modules", r.modules.get().to_string()),
            ("lambda", num(r.lambda)),
            ("k_rate", num(r.k_rate)),
            ("contraction_factor", num(r.r)),
            ("contraction_argmax_fT", num(r.r_argmax)),
            ("contraction_factor_printed", opt(r.r_printed)),
            (
                "lambda_opt_recomputed",
                opt(r.lambda_opt.map(|l| l.recomputed)),
            ),
            ("lambda_opt_printed", opt(r.lambda_opt.map(|l| l.printed))),
            ("lambda_minimax", num(r.lambda_minimax)),
            ("predicted_db_per_iteration", opt(r.db_per_iter)),
            ("noise_coeff_iteration2", opt(r.noise_coeff.value())),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect::<Vec<_>>();
        if let NoiseCoeff::Unavailable(why) = &r.noise_coeff {
            e.push(("noise_coeff_note".into(), why.clone()));
        }
        e.extend([
            ("op_iterations".into(), self.iterations.to_string()),
            ("op_fft_block".into(), self.fft_block.to_string()),
            (
                "conventional_additions".into(),
                self.conventional_ops.additions.to_string(),
            ),
            (
                "conventional_multiplications".into(),
                self.conventional_ops.multiplications.to_string(),
            ),
            (
                "hybrid_additions".into(),
                self.hybrid_ops.additions.to_string(),
            ),
            (
                "hybrid_multiplications".into(),
                self.hybrid_ops.multiplications.to_string(),
            ),
        ]);
        e
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let rows: Vec<Vec<String>> = self
            .entries()
            .into_iter()
            .map(|(k, v)| vec![k, v])
            .collect();
        write_rows(out, &["quantity", "value"], &rows)
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |source| Error::Io {
            path: PathBuf::new(),
            source,
        };
        for (k, v) in self.entries() {
            writeln!(out, "{k:<30} {}", if v.is_empty() { "-" } else { &v }).map_err(io)?;
        }
        Ok(())
    }
}

/// Runs the image benchmark and writes the decimated input, every
/// reconstruction, shared-scale error images and `psnr.csv` into `out_dir`.
pub fn image_experiment(
    original: &GrayImage,
    methods: &[EnlargeConfig],
    decimation: Decimation,
    out_dir: &Path,
) -> Result<Vec<BenchRow>> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let outcome = imagebench::benchmark(original, methods, decimation)?;
    let errors = imagebench::error_images(original, &outcome.reconstructions)?;
    let mut written_factors = Vec::new();
    for (i, row) in outcome.rows.iter().enumerate() {
        let f = row.config.factor;
        if !written_factors.contains(&f) {
            imagebench::write_pgm(
                &outcome.decimated[i],
                out_dir.join(format!("decimated_x{f}.pgm")),
            )?;
            written_factors.push(f);
        }
        let stem = format!("{i:02}_{}", row.config.method.to_string().replace(':', "_"));
        imagebench::write_pgm(
            &outcome.reconstructions[i],
            out_dir.join(format!("recon_{stem}.pgm")),
        )?;
        imagebench::write_pgm(&errors[i], out_dir.join(format!("error_{stem}.pgm")))?;
    }
    let path = out_dir.join("psnr.csv");
    let file = fs::File::create(&path).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    write_psnr_csv(file, &outcome.rows).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io { path, source },
        other => other,
    })?;
    Ok(outcome.rows)
}

/// `method,factor,iters,modules,lambda,psnr_db`.
pub fn write_psnr_csv<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let m = r.config.method;
            vec![
                m.label().to_string(),
                r.config.factor.to_string(),
                m.iterations().to_string(),
                m.modules().to_string(),
                num(r.config.lambda),
                num(r.psnr_db),
            ]
        })
        .collect();
    write_rows(
        out,
        &["method", "factor", "iters", "modules", "lambda", "psnr_db"],
        &rows,
    )
}
