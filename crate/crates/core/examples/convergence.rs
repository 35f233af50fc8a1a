//! Mean SNR per iteration for the standard iteration and the hybrid with one
//! and two cosine modules, over an ensemble of random band-limited signals.
//!
//! ```text
//! cargo run --release --example convergence
//! ```

use hybrid_recon::experiments::{convergence, Ensemble, TraceSpec};
use hybrid_recon::samplers::InterpKind;

fn main() -> hybrid_recon::Result<()> {
    let ens = Ensemble::one_d().with_trials(20);
    let base = TraceSpec::new(InterpKind::SampleAndHold, 0, 8);
    let traces = convergence(&ens, &base, &[0, 1, 2])?;

    print!("{:>4}", "iter");
    for t in &traces {
        print!("  {:>10}", format!("N={}", t.spec.modules));
    }
    println!();
    for k in 0..base.iterations {
        print!("{:>4}", k + 1);
        for t in &traces {
            print!("  {:>10.1}", t.snr_db[k]);
        }
        println!();
    }
    Ok(())
}
