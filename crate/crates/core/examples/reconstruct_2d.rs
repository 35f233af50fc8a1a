//! Hybrid reconstruction of a band-limited 2-D field sampled on a lattice.

use hybrid_recon::prelude::*;

fn main() -> hybrid_recon::Result<()> {
    let g = GridSpec::nyquist(32, 8)?;
    let field = gen_bandlimited2d(11, g, g, 34.0, BandShape::Disc)?;
    let samples = sample2d(&field);

    for modules in [0, 1, 4] {
        let op = ReconOperator2d::new(InterpKind::SampleAndHold, ModuleCount(modules), g, g);
        let report = iterate2d(&samples, &ReconConfig::new(op, 1.0, 4), Some(&field))?;
        let trace: Vec<String> = report
            .snr_trace
            .iter()
            .map(|v| format!("{v:6.1}"))
            .collect();
        println!(
            "N={modules}  x0 {:6.1}  then {}",
            report.initial_snr.unwrap_or(f64::NAN),
            trace.join(" ")
        );
    }
    Ok(())
}
