//! Iterative reconstruction.
//!
//! The reconstruction operator is `G = P . Mix . Hold . Sample`. With zero
//! modules it is the plain band-limited iteration; with modules it is the
//! hybrid modular-iterative method. The unknown signal enters only through
//! its coarse samples, which give the observation `Gx`; a dense reference,
//! when supplied, is used for nothing but the SNR trace.
//!
//! Relaxed recursion:
//!
//! ```text
//! x_0     = lambda Gx
//! x_{k+1} = lambda Gx + x_k - lambda G x_k
//! ```
//!
//! Chebyshev recursion with frame bounds `A <= B` and `c = 2 / (A + B)`:
//!
//! ```text
//! x_0 = 0,  x_1 = c Gx
//! x_n = lambda_n (x_{n-1} - x_{n-2} + c (Gx - G x_{n-1})) + x_{n-2}
//! ```
//!
//! `x_1` needs only the observation, like the relaxed `x_0`, so iteration
//! `k` of a Chebyshev run reports `x_{k+1}`. Both recursions then spend
//! `k + 1` applications of `G` to reach iteration `k`.

use crate::error::{config, Result};
use crate::grid::{DenseImage, DenseSignal, GridSpec};
use crate::metrics::{snr2d_db_slice, snr_db_slice, DEFAULT_EDGE_IGNORE};
use crate::modular::{mix2d_values, mix_values, ModuleCount};
use crate::samplers::{
    interpolate_values, sample, sample2d, CoarseImage, CoarseSamples, InterpKind,
};
use crate::spectral::{lowpass_in_place, lowpass_rows, transpose, LowpassSpec};

/// Number of consecutive growing updates that marks a run as non-contracting.
pub const DIVERGENCE_RUN: usize = 3;

/// Updates smaller than this fraction of the iterate norm are round-off and
/// never count towards divergence.
const ROUNDOFF_FLOOR: f64 = 1e-10;

/// Common interface of the 1-D and 2-D reconstruction operators.
pub trait ReconstructionOperator {
    type Field;
    type Samples;

    /// `G` applied to a dense field given as raw values.
    fn apply_values(&self, x: &[f64]) -> Vec<f64>;

    /// `Gx` computed from the samples of the unknown `x`.
    fn observe_values(&self, samples: &Self::Samples) -> Result<Vec<f64>>;

    fn field(&self, values: Vec<f64>) -> Self::Field;

    fn field_values<'a>(&self, field: &'a Self::Field) -> &'a [f64];

    /// Interior SNR of `estimate` against `reference`.
    fn snr(&self, reference: &[f64], estimate: &[f64]) -> f64;
}

/// One-dimensional `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconOperator {
    pub kind: InterpKind,
    pub modules: ModuleCount,
    pub lpf: LowpassSpec,
    pub grid: GridSpec,
}

impl ReconOperator {
    /// Hybrid operator with the lowpass matched to the signal band.
    pub fn new(kind: InterpKind, modules: ModuleCount, grid: GridSpec) -> Self {
        Self {
            kind,
            modules,
            lpf: LowpassSpec::band_edge(&grid),
            grid,
        }
    }

    /// Plain `G = PS`.
    pub fn standard(kind: InterpKind, grid: GridSpec) -> Self {
        Self::new(kind, ModuleCount::NONE, grid)
    }

    pub fn with_lowpass(mut self, lpf: LowpassSpec) -> Self {
        self.lpf = lpf;
        self
    }

    fn expand_samples(&self, samples: &[f64]) -> Vec<f64> {
        let r = self.grid.ticks_per_sample();
        let mut v = interpolate_values(samples, r, self.kind);
        mix_values(&mut v, r, self.modules);
        lowpass_in_place(&mut v, &self.lpf);
        v
    }

    /// `G x`.
    pub fn apply(&self, x: &DenseSignal) -> DenseSignal {
        DenseSignal::from_parts(self.grid, self.apply_values(x.values()))
    }

    /// `G x` from the coarse samples of `x`.
    pub fn observe(&self, samples: &CoarseSamples) -> Result<DenseSignal> {
        Ok(DenseSignal::from_parts(
            self.grid,
            self.observe_values(samples)?,
        ))
    }
}

impl ReconstructionOperator for ReconOperator {
    type Field = DenseSignal;
    type Samples = CoarseSamples;

    fn apply_values(&self, x: &[f64]) -> Vec<f64> {
        let r = self.grid.ticks_per_sample();
        let s: Vec<f64> = x.iter().step_by(r).copied().collect();
        self.expand_samples(&s)
    }

    fn observe_values(&self, samples: &CoarseSamples) -> Result<Vec<f64>> {
        if samples.grid() != &self.grid {
            return Err(config(
                "samples were taken on a different grid than the operator's",
            ));
        }
        Ok(self.expand_samples(samples.values()))
    }

    fn field(&self, values: Vec<f64>) -> DenseSignal {
        DenseSignal::from_parts(self.grid, values)
    }

    fn field_values<'a>(&self, field: &'a DenseSignal) -> &'a [f64] {
        field.values()
    }

    fn snr(&self, reference: &[f64], estimate: &[f64]) -> f64 {
        snr_db_slice(reference, estimate, DEFAULT_EDGE_IGNORE).unwrap_or(f64::NAN)
    }
}

/// Two-dimensional separable `G` on a rectangular lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconOperator2d {
    pub kind: InterpKind,
    pub modules: ModuleCount,
    pub lpf_x: LowpassSpec,
    pub lpf_y: LowpassSpec,
    pub grid_x: GridSpec,
    pub grid_y: GridSpec,
}

impl ReconOperator2d {
    pub fn new(kind: InterpKind, modules: ModuleCount, grid_x: GridSpec, grid_y: GridSpec) -> Self {
        Self {
            kind,
            modules,
            lpf_x: LowpassSpec::band_edge(&grid_x),
            lpf_y: LowpassSpec::band_edge(&grid_y),
            grid_x,
            grid_y,
        }
    }

    fn expand_lattice(&self, lattice: &[f64]) -> Vec<f64> {
        let (nx, ny) = (self.grid_x.n_coarse(), self.grid_y.n_coarse());
        let (rx, ry) = (
            self.grid_x.ticks_per_sample(),
            self.grid_y.ticks_per_sample(),
        );
        let fine_w = nx * rx;
        let rows: Vec<f64> = lattice
            .chunks(nx)
            .flat_map(|row| interpolate_values(row, rx, self.kind))
            .collect();
        // columns are filtered while transposed to keep them contiguous
        let mut cols: Vec<f64> = transpose(&rows, fine_w, ny)
            .chunks(ny)
            .flat_map(|col| interpolate_values(col, ry, self.kind))
            .collect();
        let fine_h = ny * ry;
        let mut v = transpose(&cols, fine_h, fine_w);
        mix2d_values(&mut v, fine_w, rx, ry, self.modules);
        lowpass_rows(&mut v, fine_w, &self.lpf_x);
        cols = transpose(&v, fine_w, fine_h);
        lowpass_rows(&mut cols, fine_h, &self.lpf_y);
        transpose(&cols, fine_h, fine_w)
    }

    pub fn apply(&self, x: &DenseImage) -> DenseImage {
        DenseImage::from_parts(self.grid_x, self.grid_y, self.apply_values(x.values()))
    }

    pub fn observe(&self, samples: &CoarseImage) -> Result<DenseImage> {
        Ok(DenseImage::from_parts(
            self.grid_x,
            self.grid_y,
            self.observe_values(samples)?,
        ))
    }
}

impl ReconstructionOperator for ReconOperator2d {
    type Field = DenseImage;
    type Samples = CoarseImage;

    fn apply_values(&self, x: &[f64]) -> Vec<f64> {
        let (rx, ry) = (
            self.grid_x.ticks_per_sample(),
            self.grid_y.ticks_per_sample(),
        );
        let w = self.grid_x.fine_len();
        let lattice: Vec<f64> = x
            .chunks(w)
            .step_by(ry)
            .flat_map(|row| row.iter().step_by(rx).copied())
            .collect();
        self.expand_lattice(&lattice)
    }

    fn observe_values(&self, samples: &CoarseImage) -> Result<Vec<f64>> {
        if samples.grid_x() != &self.grid_x || samples.grid_y() != &self.grid_y {
            return Err(config("lattice samples do not match the operator's grids"));
        }
        Ok(self.expand_lattice(samples.values()))
    }

    fn field(&self, values: Vec<f64>) -> DenseImage {
        DenseImage::from_parts(self.grid_x, self.grid_y, values)
    }

    fn field_values<'a>(&self, field: &'a DenseImage) -> &'a [f64] {
        field.values()
    }

    fn snr(&self, reference: &[f64], estimate: &[f64]) -> f64 {
        snr2d_db_slice(
            reference,
            estimate,
            self.grid_x.fine_len(),
            DEFAULT_EDGE_IGNORE,
        )
        .unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Acceleration {
    #[default]
    None,
    /// Chebyshev acceleration with frame bounds `0 < a <= b`.
    Chebyshev { a: f64, b: f64 },
}

/// Relaxation sequence of the Chebyshev recursion:
/// `rho = (B - A)/(B + A)`, `lambda_1 = 2`, `lambda_{n+1} = 1 / (1 - rho^2 lambda_n / 4)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSchedule {
    a: f64,
    b: f64,
    rho: f64,
    lambdas: Vec<f64>,
}

impl ChebyshevSchedule {
    pub fn new(a: f64, b: f64, len: usize) -> Result<Self> {
        if !(a > 0.0 && a <= b && b.is_finite()) {
            return Err(config(format!(
                "Chebyshev frame bounds need 0 < A <= B, got A={a}, B={b}"
            )));
        }
        let rho = (b - a) / (b + a);
        let mut lambdas = Vec::with_capacity(len);
        let mut lam = 2.0;
        for _ in 0..len {
            lambdas.push(lam);
            lam = 1.0 / (1.0 - rho * rho * lam / 4.0);
        }
        Ok(Self { a, b, rho, lambdas })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Step size `2 / (A + B)`.
    pub fn step(&self) -> f64 {
        2.0 / (self.a + self.b)
    }

    /// `lambda_n` for `n >= 1`.
    pub fn lambda(&self, n: usize) -> f64 {
        self.lambdas[n - 1]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

/// Run parameters for an iterative reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconConfig<O> {
    pub operator: O,
    /// Relaxation parameter, `0 < lambda < 2`.
    pub lambda: f64,
    pub iterations: usize,
    pub acceleration: Acceleration,
}

impl<O> ReconConfig<O> {
    pub fn new(operator: O, lambda: f64, iterations: usize) -> Self {
        Self {
            operator,
            lambda,
            iterations,
            acceleration: Acceleration::None,
        }
    }

    pub fn chebyshev(mut self, a: f64, b: f64) -> Self {
        self.acceleration = Acceleration::Chebyshev { a, b };
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 2.0) {
            return Err(config(format!(
                "lambda must lie in (0, 2), got {}",
                self.lambda
            )));
        }
        if self.iterations < 1 {
            return Err(config("iterations must be at least 1"));
        }
        if let Acceleration::Chebyshev { a, b } = self.acceleration {
            ChebyshevSchedule::new(a, b, 0)?;
        }
        Ok(())
    }
}

/// Outcome of a reconstruction run.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconReport<F> {
    /// Final iterate `x_{iterations_run}`.
    pub estimate: F,
    /// SNR of the starting iterate (relaxed `x_0`, Chebyshev `x_1`), when a
    /// reference was supplied.
    pub initial_snr: Option<f64>,
    /// SNR after each iteration; empty without a reference.
    pub snr_trace: Vec<f64>,
    pub iterations_run: usize,
    /// Applications of `G`, the observation included.
    pub operator_applications: usize,
    /// Set when the update norm grew for [`DIVERGENCE_RUN`] consecutive steps.
    pub diverged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

struct DivergenceWatch {
    last: Option<f64>,
    run: usize,
}

impl DivergenceWatch {
    fn new() -> Self {
        Self { last: None, run: 0 }
    }

    /// Feeds `||x_{k+1} - x_k||`; returns true once the run is non-contracting.
    fn update(&mut self, step: f64, scale: f64) -> bool {
        let growing = matches!(self.last, Some(prev) if step > prev)
            && step > ROUNDOFF_FLOOR * scale.max(f64::MIN_POSITIVE);
        self.run = if growing { self.run + 1 } else { 0 };
        self.last = Some(step);
        self.run >= DIVERGENCE_RUN || !step.is_finite()
    }
}

fn run_relaxed<O: ReconstructionOperator>(
    cfg: &ReconConfig<O>,
    observation: &[f64],
    reference: Option<&[f64]>,
) -> ReconReport<O::Field> {
    let op = &cfg.operator;
    let lam = cfg.lambda;
    let mut x: Vec<f64> = observation.iter().map(|b| lam * b).collect();
    let initial_snr = reference.map(|r| op.snr(r, &x));
    let mut trace = Vec::new();
    let mut watch = DivergenceWatch::new();
    let mut applications = 1;
    let mut diverged = false;
    let mut iterations_run = 0;
    for _ in 0..cfg.iterations {
        let gx = op.apply_values(&x);
        applications += 1;
        let mut step = 0.0;
        for ((xi, gi), bi) in x.iter_mut().zip(&gx).zip(observation) {
            let next = lam * bi + *xi - lam * gi;
            step += (next - *xi) * (next - *xi);
            *xi = next;
        }
        iterations_run += 1;
        if let Some(r) = reference {
            trace.push(op.snr(r, &x));
        }
        if watch.update(step.sqrt(), norm(&x)) {
            diverged = true;
            break;
        }
    }
    ReconReport {
        estimate: op.field(x),
        initial_snr,
        snr_trace: trace,
        iterations_run,
        operator_applications: applications,
        diverged,
    }
}

fn run_chebyshev<O: ReconstructionOperator>(
    cfg: &ReconConfig<O>,
    schedule: &ChebyshevSchedule,
    observation: &[f64],
    reference: Option<&[f64]>,
) -> ReconReport<O::Field> {
    let op = &cfg.operator;
    let c = schedule.step();
    let mut prev = vec![0.0; observation.len()];
    let mut x: Vec<f64> = observation.iter().map(|b| c * b).collect();
    let initial_snr = reference.map(|r| op.snr(r, &x));
    let mut trace = Vec::new();
    let mut watch = DivergenceWatch::new();
    let mut applications = 1;
    let mut diverged = false;
    let mut iterations_run = 0;
    for n in 2..=cfg.iterations + 1 {
        let lam = schedule.lambda(n);
        let gx = op.apply_values(&x);
        applications += 1;
        let mut step = 0.0;
        let next: Vec<f64> = x
            .iter()
            .zip(&prev)
            .zip(gx.iter().zip(observation))
            .map(|((&xn, &xp), (&g, &b))| {
                let v = lam * (xn - xp + c * (b - g)) + xp;
                step += (v - xn) * (v - xn);
                v
            })
            .collect();
        prev = std::mem::replace(&mut x, next);
        iterations_run += 1;
        if let Some(r) = reference {
            trace.push(op.snr(r, &x));
        }
        if watch.update(step.sqrt(), norm(&x)) {
            diverged = true;
            break;
        }
    }
    ReconReport {
        estimate: op.field(x),
        initial_snr,
        snr_trace: trace,
        iterations_run,
        operator_applications: applications,
        diverged,
    }
}

/// Runs the configured recursion on any reconstruction operator.
pub fn reconstruct<O: ReconstructionOperator>(
    samples: &O::Samples,
    cfg: &ReconConfig<O>,
    reference: Option<&O::Field>,
) -> Result<ReconReport<O::Field>> {
    cfg.validate()?;
    let observation = cfg.operator.observe_values(samples)?;
    let reference = reference.map(|r| cfg.operator.field_values(r));
    if let Some(r) = reference {
        if r.len() != observation.len() {
            return Err(crate::error::usage(
                "reference does not match the operator's grid",
            ));
        }
    }
    Ok(match cfg.acceleration {
        Acceleration::None => run_relaxed(cfg, &observation, reference),
        Acceleration::Chebyshev { a, b } => {
            let schedule = ChebyshevSchedule::new(a, b, cfg.iterations + 1)?;
            run_chebyshev(cfg, &schedule, &observation, reference)
        }
    })
}

/// `G x` for a 1-D operator.
pub fn apply_g(x: &DenseSignal, op: &ReconOperator) -> DenseSignal {
    op.apply(x)
}

/// Standard or hybrid iteration in 1-D (Chebyshev if so configured).
pub fn iterate(
    observed: &CoarseSamples,
    cfg: &ReconConfig<ReconOperator>,
    reference: Option<&DenseSignal>,
) -> Result<ReconReport<DenseSignal>> {
    reconstruct(observed, cfg, reference)
}

/// Chebyshev-accelerated iteration; the config must carry frame bounds.
pub fn chebyshev_iterate(
    observed: &CoarseSamples,
    cfg: &ReconConfig<ReconOperator>,
    reference: Option<&DenseSignal>,
) -> Result<ReconReport<DenseSignal>> {
    if cfg.acceleration == Acceleration::None {
        return Err(config(
            "chebyshev_iterate needs Chebyshev frame bounds in the config",
        ));
    }
    reconstruct(observed, cfg, reference)
}

pub fn iterate2d(
    observed: &CoarseImage,
    cfg: &ReconConfig<ReconOperator2d>,
    reference: Option<&DenseImage>,
) -> Result<ReconReport<DenseImage>> {
    reconstruct(observed, cfg, reference)
}

/// Convenience: sample `x` and reconstruct it, tracing SNR against `x`.
pub fn reconstruct_signal(
    x: &DenseSignal,
    cfg: &ReconConfig<ReconOperator>,
) -> Result<ReconReport<DenseSignal>> {
    iterate(&sample(x), cfg, Some(x))
}

pub fn reconstruct_image(
    x: &DenseImage,
    cfg: &ReconConfig<ReconOperator2d>,
) -> Result<ReconReport<DenseImage>> {
    iterate2d(&sample2d(x), cfg, Some(x))
}
