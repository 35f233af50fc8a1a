//! Empirical relaxation sweep against the analytic optimum.

use hybrid_recon::analysis::{lambda_opt_minimax, lambda_opt_paper};
use hybrid_recon::experiments::{lambda_grid, lambda_sweep, sweep_argmax, Ensemble, TraceSpec};
use hybrid_recon::modular::ModuleCount;
use hybrid_recon::samplers::InterpKind;

fn main() -> hybrid_recon::Result<()> {
    let kind = InterpKind::SampleAndHold;
    let closed = lambda_opt_paper(kind, ModuleCount(1))?;
    let minimax = lambda_opt_minimax(kind, ModuleCount(1), 1.0);
    println!(
        "closed form {:.4}, minimax {:.4}",
        closed.recomputed, minimax
    );

    let ens = Ensemble::one_d().with_trials(10);
    let points = lambda_sweep(
        &ens,
        &TraceSpec::new(kind, 1, 10),
        &lambda_grid(0.80, 1.10, 0.02)?,
    )?;
    for p in &points {
        println!("{:.2}  {:7.2} dB/iter", p.lambda, p.avg_db_per_iteration);
    }
    if let Some(best) = sweep_argmax(&points) {
        println!("best lambda {:.2}", best.lambda);
    }
    Ok(())
}
