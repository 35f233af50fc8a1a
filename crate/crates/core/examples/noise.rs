//! Reconstruction with additive white noise on the fine grid. The traces
//! climb, peak and then settle once the noise floor is reached.

use hybrid_recon::experiments::{noise, Ensemble, TraceSpec};
use hybrid_recon::samplers::InterpKind;

fn main() -> hybrid_recon::Result<()> {
    let ens = Ensemble::one_d().with_trials(10);
    let base = TraceSpec::new(InterpKind::SampleAndHold, 0, 15);
    for t in noise(&ens, &base, &[0, 1, 2], -20.0)? {
        let at = t
            .snr_db
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(i, _)| i + 1);
        println!(
            "N={}  interpolated {:6.2}  peak {:.4} at iteration {at}  final {:.4}",
            t.spec.modules,
            t.interpolated_snr_db,
            t.peak(),
            t.last()
        );
    }
    Ok(())
}
