//! Enlarges a decimated grayscale image and scores each method by PSNR.
//!
//! ```text
//! cargo run --release --example image_enlarge -- [input.pgm] [out_dir]
//! ```
//!
//! Without arguments the bundled 512x512 test image is used and nothing is
//! written to disk.

use std::env;
use std::path::{Path, PathBuf};

use hybrid_recon::experiments::image_experiment;
use hybrid_recon::imagebench::{
    psnr_benchmark, read_pgm, Decimation, EnlargeConfig, EnlargeMethod,
};

fn main() -> anyhow::Result<()> {
    let mut args = env::args().skip(1);
    let input = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/camera.pgm"));
    let img = read_pgm(&input)?;
    let methods: Vec<EnlargeConfig> = ["bilinear", "iterative:2", "iterative:10", "hybrid:2:1"]
        .iter()
        .map(|m| Ok(EnlargeConfig::new(2, m.parse::<EnlargeMethod>()?)))
        .collect::<hybrid_recon::Result<_>>()?;

    let rows = match args.next() {
        Some(dir) => image_experiment(&img, &methods, Decimation::Antialiased, Path::new(&dir))?,
        None => psnr_benchmark(&img, &methods, Decimation::Antialiased)?,
    };
    println!(
        "{} ({}x{}), factor 2",
        input.display(),
        img.width(),
        img.height()
    );
    for r in rows {
        println!(
            "  {:<14} {:6.2} dB   mean |err| {:.2}",
            r.config.method.to_string(),
            r.psnr_db,
            r.mean_abs_error
        );
    }
    Ok(())
}
