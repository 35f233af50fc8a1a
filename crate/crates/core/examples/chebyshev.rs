//! Chebyshev-accelerated hybrid iteration on 2-D fields, next to the plain
//! relaxed iteration. Every row uses the same number of operator applications.
//! The frame bounds [1, 2] fit the 4-module operator; without modules they do
//! not, and acceleration then loses to the plain iteration.

use hybrid_recon::experiments::{mean_trace, Ensemble, TraceSpec};
use hybrid_recon::samplers::InterpKind::SampleAndHold;
use hybrid_recon::solver::ChebyshevSchedule;

fn main() -> hybrid_recon::Result<()> {
    let sched = ChebyshevSchedule::new(1.0, 2.0, 6)?;
    println!("rho = {:.4}, step = {:.4}", sched.rho(), sched.step());
    println!("lambda_n = {:?}", sched.lambdas());

    let ens = Ensemble::two_d().with_trials(5);
    let runs = [
        ("relaxed, N=0", TraceSpec::new(SampleAndHold, 0, 6)),
        (
            "chebyshev, N=0",
            TraceSpec::new(SampleAndHold, 0, 6).chebyshev(1.0, 2.0),
        ),
        (
            "chebyshev, N=4",
            TraceSpec::new(SampleAndHold, 4, 6).chebyshev(1.0, 2.0),
        ),
    ];
    for (name, spec) in runs {
        let t = mean_trace(&ens, &spec)?;
        let row: Vec<String> = t.snr_db.iter().map(|v| format!("{v:6.1}")).collect();
        println!("{name:>16}: {}", row.join(" "));
    }
    Ok(())
}
