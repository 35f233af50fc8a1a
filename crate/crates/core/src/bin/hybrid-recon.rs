use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use hybrid_recon::experiments::{self, Dims, Ensemble, TraceSpec, OUT_DIR_ENV};
use hybrid_recon::imagebench::{read_pgm, Decimation, EnlargeConfig, EnlargeMethod};
use hybrid_recon::samplers::InterpKind;
use hybrid_recon::signal::BandShape;
use hybrid_recon::solver::Acceleration;

/// Reconstruction experiments: band-limited recovery from sample-and-hold
/// or linearly interpolated samples.
#[derive(Parser)]
#[command(name = "hybrid-recon", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mean SNR per iteration for several module counts.
    Convergence {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        modules: Vec<u32>,
        #[arg(long, default_value_t = 30)]
        iterations: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Average dB gained per iteration over a grid of relaxation values.
    LambdaSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        modules: u32,
        /// Explicit lambda values; overrides the start/stop/step grid.
        #[arg(long, value_delimiter = ',')]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        lambda_start: f64,
        #[arg(long, default_value_t = 1.5)]
        lambda_stop: f64,
        #[arg(long, default_value_t = 0.05)]
        lambda_step: f64,
        #[arg(long, default_value_t = 10)]
        iterations: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Convergence with white Gaussian noise added before sampling.
    Noise {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        modules: Vec<u32>,
        #[arg(long, default_value_t = -20.0, allow_negative_numbers = true)]
        noise_db: f64,
        #[arg(long, default_value_t = 30)]
        iterations: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Per-iteration gain at several multiples of the Nyquist rate.
    Rate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        modules: u32,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        k_rates: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        iterations: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Closed-form contraction factor, optimal relaxation, noise bound and op counts.
    Analyze {
        #[arg(long, default_value = "sh")]
        kind: InterpKind,
        #[arg(long, default_value_t = 1)]
        modules: u32,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        k_rate: f64,
        /// Iterations for the operation count.
        #[arg(long, default_value_t = 1)]
        op_iterations: u64,
        /// FFT block size for the operation count.
        #[arg(long, default_value_t = 2)]
        fft_block: u64,
        /// Emit CSV instead of aligned text.
        #[arg(long)]
        csv: bool,
        /// Output file (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decimate a PGM image, enlarge it back with each method, score PSNR.
    Image {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        factor: usize,
        /// bilinear, iterative:N or hybrid:N:M
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "bilinear,iterative:2,iterative:10,hybrid:2:1"
        )]
        methods: Vec<EnlargeMethod>,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value = "antialiased")]
        decimation: Decimation,
        /// Output directory (default: $HYBRID_RECON_OUT or the current directory).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "sh")]
    kind: InterpKind,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    k_rate: f64,
    #[arg(long, default_value_t = experiments::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = experiments::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = experiments::DEFAULT_POWER_DB, allow_negative_numbers = true)]
    power_db: f64,
    /// 1 for signals, 2 for images on a square lattice.
    #[arg(long, default_value_t = 1)]
    dims: u8,
    /// Coarse samples per axis (default 128 in 1-D, 32 in 2-D).
    #[arg(long)]
    n_coarse: Option<usize>,
    /// Fine ticks per sample (default 16 in 1-D, 8 in 2-D).
    #[arg(long)]
    ticks: Option<usize>,
    /// Passband of random 2-D fields: disc or rect.
    #[arg(long, default_value = "disc")]
    band: BandShape,
    /// Chebyshev acceleration with frame bounds --frame-a, --frame-b.
    #[arg(long)]
    chebyshev: bool,
    #[arg(long, default_value_t = 1.0)]
    frame_a: f64,
    #[arg(long, default_value_t = 2.0)]
    frame_b: f64,
}

impl Common {
    fn ensemble(&self) -> anyhow::Result<Ensemble> {
        let mut ens = match self.dims {
            1 => Ensemble::one_d(),
            2 => Ensemble::two_d(),
            d => bail!("--dims must be 1 or 2, got {d}"),
        };
        debug_assert!(matches!(ens.dims, Dims::One | Dims::Two));
        ens.trials = self.trials;
        ens.seed = self.seed;
        ens.power_db = self.power_db;
        ens.shape = self.band;
        if let Some(n) = self.n_coarse {
            ens.n_coarse = n;
        }
        if let Some(r) = self.ticks {
            ens.ticks_per_sample = r;
        }
        ens.validate()
            .context("--trials/--n-coarse/--ticks/--power-db")?;
        Ok(ens)
    }

    fn spec(&self, modules: u32, iterations: usize) -> anyhow::Result<TraceSpec> {
        if !(self.lambda > 0.0 && self.lambda < 2.0) {
            bail!("--lambda must lie in (0, 2), got {}", self.lambda);
        }
        if !(self.k_rate >= 1.0 && self.k_rate.is_finite()) {
            bail!("--k-rate must be at least 1, got {}", self.k_rate);
        }
        if iterations < 1 {
            bail!("--iterations must be at least 1");
        }
        let mut spec = TraceSpec::new(self.kind, modules, iterations)
            .lambda(self.lambda)
            .k_rate(self.k_rate);
        if self.chebyshev {
            spec.acceleration = Acceleration::Chebyshev {
                a: self.frame_a,
                b: self.frame_b,
            };
        }
        Ok(spec)
    }
}

#[derive(Args)]
struct Out {
    /// Output CSV (default: <$HYBRID_RECON_OUT or .>/<subcommand>.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

impl Out {
    fn path(&self, name: &str) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| default_dir().join(format!("{name}.csv")))
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("{}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("{}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Cmd::Convergence {
            common,
            modules,
            iterations,
            out,
        } => {
            let ens = common.ensemble()?;
            let traces = experiments::convergence(&ens, &common.spec(0, iterations)?, &modules)?;
            let path = out.path("convergence");
            experiments::write_convergence_csv(create(&path)?, &ens, &traces)?;
            eprintln!("wrote {}", path.display());
        }
        Cmd::LambdaSweep {
            common,
            modules,
            lambdas,
            lambda_start,
            lambda_stop,
            lambda_step,
            iterations,
            out,
        } => {
            let ens = common.ensemble()?;
            let grid = if lambdas.is_empty() {
                experiments::lambda_grid(lambda_start, lambda_stop, lambda_step)
                    .context("--lambda-start/--lambda-stop/--lambda-step")?
            } else {
                lambdas
            };
            let points = experiments::lambda_sweep(&ens, &common.spec(modules, iterations)?, &grid)
                .context("--lambdas")?;
            let path = out.path("lambda_sweep");
            experiments::write_sweep_csv(create(&path)?, &points)?;
            if let Some(best) = experiments::sweep_argmax(&points) {
                eprintln!(
                    "best lambda {} ({:.3} dB/iteration); wrote {}",
                    best.lambda,
                    best.avg_db_per_iteration,
                    path.display()
                );
            }
        }
        Cmd::Noise {
            common,
            modules,
            noise_db,
            iterations,
            out,
        } => {
            if !noise_db.is_finite() {
                bail!("--noise-db must be finite, got {noise_db}");
            }
            let ens = common.ensemble()?;
            let traces =
                experiments::noise(&ens, &common.spec(0, iterations)?, &modules, noise_db)?;
            let path = out.path("noise");
            experiments::write_noise_csv(create(&path)?, &ens, &traces)?;
            eprintln!("wrote {}", path.display());
        }
        Cmd::Rate {
            common,
            modules,
            k_rates,
            iterations,
            out,
        } => {
            if let Some(k) = k_rates.iter().find(|k| !(**k >= 1.0 && k.is_finite())) {
                bail!("--k-rates entries must be at least 1, got {k}");
            }
            let ens = common.ensemble()?;
            let outcome = experiments::rate(&ens, &common.spec(modules, iterations)?, &k_rates)?;
            let path = out.path("rate");
            experiments::write_rate_csv(create(&path)?, &ens, &outcome)?;
            let summary = path.with_file_name(format!(
                "{}_summary.csv",
                path.file_stem().and_then(|s| s.to_str()).unwrap_or("rate")
            ));
            experiments::write_rate_summary_csv(create(&summary)?, &outcome)?;
            eprintln!(
                "gain difference {:.3} dB/iteration; wrote {} and {}",
                outcome.gain_difference_db,
                path.display(),
                summary.display()
            );
        }
        Cmd::Analyze {
            kind,
            modules,
            lambda,
            k_rate,
            op_iterations,
            fft_block,
            csv,
            out,
        } => {
            let report = experiments::analysis_report(
                kind,
                modules,
                lambda,
                k_rate,
                op_iterations,
                fft_block,
            )?;
            let sink: Box<dyn Write> = match &out {
                Some(p) => Box::new(create(p)?),
                None => Box::new(io::stdout().lock()),
            };
            if csv {
                report.write_csv(sink)?;
            } else {
                report.write_text(sink)?;
            }
        }
        Cmd::Image {
            input,
            factor,
            methods,
            lambda,
            decimation,
            out_dir,
        } => {
            let original = read_pgm(&input)?;
            let configs: Vec<EnlargeConfig> = methods
                .into_iter()
                .map(|m| EnlargeConfig {
                    lambda,
                    ..EnlargeConfig::new(factor, m)
                })
                .collect();
            let dir = out_dir.unwrap_or_else(default_dir);
            let rows = experiments::image_experiment(&original, &configs, decimation, &dir)?;
            for r in rows {
                eprintln!("{:<16} {:>8.3} dB", r.config.method.to_string(), r.psnr_db);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hybrid-recon: {e:#}");
            ExitCode::FAILURE
        }
    }
}
