use std::path::PathBuf;

use hybrid_recon::grid::GridSpec;
use hybrid_recon::imagebench::{
    benchmark, decimate, decimate_antialiased, decode_pgm, encode_pgm, encode_pgm_ascii, enlarge,
    enlarge_values, psnr_benchmark, read_pgm, write_pgm, Decimation, EnlargeConfig, EnlargeMethod,
    GrayImage,
};
use hybrid_recon::signal::{gen_bandlimited2d, BandShape};
use hybrid_recon::Error;
use proptest::prelude::*;

fn camera() -> GrayImage {
    read_pgm(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/camera.pgm")).unwrap()
}

fn method(s: &str) -> EnlargeMethod {
    s.parse().unwrap()
}

/// Smooth band-limited test image, well inside the 8-bit range.
fn smooth(n: usize, seed: u64) -> GrayImage {
    let g = GridSpec::nyquist(n / 4, 4).unwrap();
    let field = gen_bandlimited2d(seed, g, g, 20.0 * 20f64.log10(), BandShape::Disc).unwrap();
    GrayImage::quantize(
        n,
        n,
        &field.values().iter().map(|v| 128.0 + v).collect::<Vec<_>>(),
    )
    .unwrap()
}

#[test]
fn pgm_round_trip_and_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let img = GrayImage::new(2, 2, vec![0, 255, 128, 64]).unwrap();
    let path = tmp.path().join("a.pgm");
    write_pgm(&img, &path).unwrap();
    assert_eq!(read_pgm(&path).unwrap(), img);
    assert_eq!(
        decode_pgm(&encode_pgm_ascii(&img)).unwrap(),
        decode_pgm(&encode_pgm(&img)).unwrap()
    );
    let deep = b"P2\n2 2\n65535\n0 0 0 0\n";
    assert!(matches!(decode_pgm(deep), Err(Error::Format { .. })));
    let missing = tmp.path().join("missing.pgm");
    match read_pgm(&missing) {
        Err(Error::Io { path, .. }) => assert_eq!(path, missing),
        other => panic!("{other:?}"),
    }
}

#[test]
fn camera_fixture_loads() {
    let img = camera();
    assert_eq!((img.width(), img.height()), (512, 512));
}

#[test]
fn decimating_an_enlarged_band_limited_image_recovers_it() {
    let low = smooth(32, 4);
    for m in ["iterative:40", "hybrid:20:1"] {
        let up = enlarge(&low, &EnlargeConfig::new(2, method(m))).unwrap();
        let back = decimate(&up, 2).unwrap();
        let worst = low
            .pixels()
            .iter()
            .zip(back.pixels())
            .map(|(a, b)| a.abs_diff(*b))
            .max()
            .unwrap();
        assert!(worst <= 1, "{m}: {worst}");
    }
}

#[test]
fn enlargement_preserves_mean() {
    let low = decimate_antialiased(&camera(), 4).unwrap();
    for m in ["bilinear", "iterative:4", "hybrid:2:1"] {
        let v = enlarge_values(&low, &EnlargeConfig::new(2, method(m))).unwrap();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!(
            (mean - low.mean()).abs() < 0.5,
            "{m}: {mean} vs {}",
            low.mean()
        );
    }
}

#[test]
fn clamping_happens_only_at_output() {
    // a bright square on black overshoots (Gibbs) in the float field
    let mut px = vec![0u8; 16 * 16];
    for y in 4..12 {
        for x in 4..12 {
            px[y * 16 + x] = 255;
        }
    }
    let low = GrayImage::new(16, 16, px).unwrap();
    let cfg = EnlargeConfig::new(2, method("iterative:5"));
    let v = enlarge_values(&low, &cfg).unwrap();
    assert!(v.iter().any(|&p| p > 255.0) && v.iter().any(|&p| p < 0.0));
    let out = enlarge(&low, &cfg).unwrap();
    for (q, f) in out.pixels().iter().zip(&v) {
        assert_eq!(*q, f.round().clamp(0.0, 255.0) as u8);
    }
}

#[test]
fn benchmark_contracts() {
    let flat = GrayImage::filled(16, 16, 90).unwrap();
    let methods: Vec<EnlargeConfig> = ["bilinear", "iterative:2", "hybrid:2:1"]
        .iter()
        .map(|m| EnlargeConfig::new(2, method(m)))
        .collect();
    let rows = psnr_benchmark(&flat, &methods, Decimation::Direct).unwrap();
    assert!(rows.iter().all(|r| r.psnr_db == f64::INFINITY));
    let order: Vec<_> = rows.iter().map(|r| r.config.method).collect();
    assert_eq!(order, methods.iter().map(|c| c.method).collect::<Vec<_>>());
    assert!(matches!(
        psnr_benchmark(
            &GrayImage::filled(15, 16, 0).unwrap(),
            &methods,
            Decimation::Direct
        ),
        Err(Error::Usage(_))
    ));
}

#[test]
fn camera_benchmark_properties() {
    let img = camera();
    let methods: Vec<EnlargeConfig> = [
        "bilinear",
        "iterative:1",
        "iterative:2",
        "iterative:5",
        "iterative:10",
        "hybrid:2:1",
    ]
    .iter()
    .map(|m| EnlargeConfig::new(2, method(m)))
    .collect();
    let out = benchmark(&img, &methods, Decimation::Antialiased).unwrap();
    let psnr: Vec<f64> = out.rows.iter().map(|r| r.psnr_db).collect();
    // plain iteration improves monotonically
    assert!(
        psnr[1] <= psnr[2] && psnr[2] <= psnr[3] && psnr[3] <= psnr[4],
        "{psnr:?}"
    );
    // both band-limited reconstructions beat bilinear, also in mean absolute error
    assert!(psnr[5] > psnr[0] && psnr[4] > psnr[0]);
    assert!(out.rows[5].mean_abs_error < out.rows[0].mean_abs_error);
    // identical reruns
    let again = benchmark(&img, &methods[..2], Decimation::Antialiased).unwrap();
    assert_eq!(again.rows, out.rows[..2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pgm_round_trip_any_image((w, h, px) in (2usize..12, 2usize..12).prop_flat_map(|(w, h)| (Just(w), Just(h), prop::collection::vec(any::<u8>(), w * h)))) {
        let img = GrayImage::new(w, h, px).unwrap();
        prop_assert_eq!(decode_pgm(&encode_pgm(&img)).unwrap(), img.clone());
        prop_assert_eq!(decode_pgm(&encode_pgm_ascii(&img)).unwrap(), img);
    }
}
