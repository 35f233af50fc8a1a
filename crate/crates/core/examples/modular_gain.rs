//! One-shot modular compensation: interpolate, mix with cosine harmonics,
//! lowpass. No iteration at all.

use hybrid_recon::analysis::distortion_gain;
use hybrid_recon::prelude::*;

fn main() -> hybrid_recon::Result<()> {
    let grid = GridSpec::nyquist(128, 16)?;
    let x = gen_bandlimited(3, grid, 34.0)?;
    let s = sample(&x);
    let lpf = LowpassSpec::band_edge(&grid);

    for kind in [InterpKind::SampleAndHold, InterpKind::LinearInterp] {
        println!("{kind}:");
        for n in 0..=4 {
            let y = modular_reconstruct(&s, kind, ModuleCount(n), &lpf);
            let snr = snr_db(&x, &y, DEFAULT_EDGE_IGNORE)?;
            // worst-case passband gain at the band edge fT = 1/2
            let edge = distortion_gain(kind, ModuleCount(n), 0.5);
            println!("  N={n}  SNR {snr:6.2} dB  edge gain {edge:.4}");
        }
    }
    Ok(())
}
