#![allow(clippy::approx_constant)]

use hybrid_recon::analysis::{
    contraction_argmax, contraction_factor, distortion_gain, lambda_opt_minimax, lambda_opt_paper,
    noise_tolerance_coeff, op_counts, predicted_gain_db, NoiseCoeff, OpCounts,
};
use hybrid_recon::modular::ModuleCount;
use hybrid_recon::samplers::InterpKind::{self, LinearInterp, SampleAndHold};
use proptest::prelude::*;

const KINDS: [InterpKind; 2] = [SampleAndHold, LinearInterp];

#[test]
fn contraction_shrinks_with_modules_and_stays_below_one() {
    for kind in KINDS {
        for k in 1..=4 {
            let rs: Vec<f64> = (0..=6)
                .map(|n| contraction_factor(kind, ModuleCount(n), 1.0, k as f64))
                .collect();
            for w in rs.windows(2) {
                assert!(w[1] <= w[0] + 1e-15, "{kind} k={k}: {rs:?}");
            }
            assert!(rs.iter().all(|&r| (0.0..1.0).contains(&r)));
        }
    }
}

#[test]
fn band_error_strictly_decreases_with_modules() {
    for kind in KINDS {
        let errs: Vec<f64> = (0..=6)
            .map(|n| contraction_factor(kind, ModuleCount(n), 1.0, 1.0))
            .collect();
        for w in errs.windows(2) {
            assert!(w[1] < w[0], "{kind}: {errs:?}");
        }
    }
}

#[test]
fn closed_form_lambda_and_contraction() {
    let opt = lambda_opt_paper(SampleAndHold, ModuleCount(1)).unwrap();
    assert!(
        contraction_factor(SampleAndHold, ModuleCount(1), opt.recomputed, 1.0)
            <= contraction_factor(SampleAndHold, ModuleCount(1), 1.0, 1.0)
    );
    // For linear interpolation 1/H(1/2) over-relaxes DC, where H = 1:
    // |1 - 1.169| = 0.169 exceeds the lambda = 1 factor 0.144.
    let li = lambda_opt_paper(LinearInterp, ModuleCount(1)).unwrap();
    assert_eq!(li.printed, 1.31);
    assert!((li.recomputed - 1.169).abs() < 1e-3);
    let r_opt = contraction_factor(LinearInterp, ModuleCount(1), li.recomputed, 1.0);
    assert!((r_opt - (li.recomputed - 1.0)).abs() < 1e-12);
    assert!(r_opt > contraction_factor(LinearInterp, ModuleCount(1), 1.0, 1.0));
}

#[test]
fn maximum_at_band_edge_for_every_rate() {
    for kind in KINDS {
        for k in [1.0, 2.0, 3.0] {
            let f = contraction_argmax(kind, ModuleCount(1), 1.0, k);
            assert!((f - 0.5 / k).abs() < 1e-12, "{kind} k={k}: {f}");
        }
    }
}

#[test]
fn gain_predictions() {
    let r = contraction_factor(SampleAndHold, ModuleCount(1), 1.0, 1.0);
    let r0 = contraction_factor(SampleAndHold, ModuleCount(0), 1.0, 1.0);
    let (g1, g0) = (
        predicted_gain_db(r).unwrap(),
        predicted_gain_db(r0).unwrap(),
    );
    assert!((g1 - 24.4).abs() < 0.3 && (g0 - 8.8).abs() < 0.1 && g1 > g0);
    let diff = predicted_gain_db(0.05).unwrap() - predicted_gain_db(0.15).unwrap();
    assert!((diff - 10.0 * 9f64.log10()).abs() < 1e-12);
}

#[test]
fn noise_coefficients() {
    let conv = noise_tolerance_coeff(SampleAndHold, ModuleCount(0), 1.0, 2)
        .value()
        .unwrap();
    let hyb = noise_tolerance_coeff(SampleAndHold, ModuleCount(1), 1.0, 2)
        .value()
        .unwrap();
    assert_eq!((conv, hyb), (0.318, 0.531));
    for lambda in [0.5, 0.9, 1.3] {
        for k in 0..6 {
            let c = noise_tolerance_coeff(SampleAndHold, ModuleCount(0), lambda, k)
                .value()
                .unwrap();
            let h = noise_tolerance_coeff(SampleAndHold, ModuleCount(1), lambda, k)
                .value()
                .unwrap();
            assert!(h > c);
            assert!((c - 0.318 * lambda.powi(2 - k as i32)).abs() < 1e-12);
        }
    }
    assert!(matches!(
        noise_tolerance_coeff(LinearInterp, ModuleCount(1), 1.0, 2),
        NoiseCoeff::Unavailable(_)
    ));
}

#[test]
fn op_count_matrix() {
    for m in [1u64, 2, 5, 10] {
        for exp in 1..12 {
            let n = 1u64 << exp;
            let l = (2 * n).ilog2() as u64;
            let conv = op_counts(m, n, false).unwrap();
            let hyb = op_counts(m, n, true).unwrap();
            assert_eq!(
                conv,
                OpCounts {
                    additions: m * (4 * l + 2),
                    multiplications: m * (2 * l + 1)
                }
            );
            assert_eq!(
                hyb,
                OpCounts {
                    additions: m * (4 * l + 4),
                    multiplications: m * (2 * l + 3)
                }
            );
            assert_eq!(hyb.additions - conv.additions, 2 * m);
            assert_eq!(hyb.multiplications - conv.multiplications, 2 * m);
            assert_eq!(conv.for_image(256).additions, conv.additions * 512);
        }
    }
}

#[test]
fn minimax_stays_inside_range() {
    for kind in KINDS {
        for n in 0..4 {
            for k in [1.0, 2.0] {
                let l = lambda_opt_minimax(kind, ModuleCount(n), k);
                assert!(l > 0.0 && l < 2.0);
                let r = contraction_factor(kind, ModuleCount(n), l, k);
                for probe in [0.5, 0.9, 1.0, 1.1, 1.5] {
                    assert!(r <= contraction_factor(kind, ModuleCount(n), probe, k) + 1e-9);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn gain_is_even_and_unit_at_dc(ft in 0.0f64..0.5, n in 0u32..7) {
        for kind in KINDS {
            let a = distortion_gain(kind, ModuleCount(n), ft);
            let b = distortion_gain(kind, ModuleCount(n), -ft);
            prop_assert!((a - b).abs() < 1e-14);
            prop_assert_eq!(distortion_gain(kind, ModuleCount(n), 0.0), 1.0);
        }
    }
}
