//! Doubling the sampling rate relative to the band edge speeds up
//! convergence. Slope is mean dB gained per iteration.

use hybrid_recon::experiments::{rate, Ensemble, TraceSpec};
use hybrid_recon::samplers::InterpKind;

fn main() -> hybrid_recon::Result<()> {
    let ens = Ensemble::one_d().with_trials(10);
    let out = rate(
        &ens,
        &TraceSpec::new(InterpKind::SampleAndHold, 1, 8),
        &[1.0, 2.0],
    )?;
    for (t, slope) in out.traces.iter().zip(&out.slopes) {
        println!("k={}  {slope:6.2} dB/iter", t.spec.k_rate);
    }
    println!("difference {:.2} dB/iter", out.gain_difference_db);
    Ok(())
}
