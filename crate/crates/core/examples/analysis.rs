//! Closed-form quantities: contraction factors, optimal relaxation, predicted
//! dB per iteration, noise coefficients and operation counts.

use std::io::stdout;

use hybrid_recon::analysis::{contraction_factor, op_counts};
use hybrid_recon::experiments::analysis_report;
use hybrid_recon::modular::ModuleCount;
use hybrid_recon::samplers::InterpKind;

fn main() -> hybrid_recon::Result<()> {
    println!("contraction factor r at lambda = 1, k = 1");
    for kind in [InterpKind::SampleAndHold, InterpKind::LinearInterp] {
        let r: Vec<String> = (0..=3)
            .map(|n| format!("{:.4}", contraction_factor(kind, ModuleCount(n), 1.0, 1.0)))
            .collect();
        println!("  {kind}: N=0..3 -> {}", r.join("  "));
    }
    println!();

    analysis_report(InterpKind::SampleAndHold, 1, 1.0, 1.0, 10, 256)?.write_text(stdout())?;

    let (plain, hybrid) = (op_counts(10, 256, false)?, op_counts(10, 256, true)?);
    println!();
    println!("per sample, 10 iterations, 256-point FFT");
    println!(
        "  standard: {} adds, {} mults",
        plain.additions, plain.multiplications
    );
    println!(
        "  hybrid:   {} adds, {} mults",
        hybrid.additions, hybrid.multiplications
    );
    Ok(())
}
