//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;

use hybrid_recon::analysis::{
    contraction_factor, lambda_opt_minimax, lambda_opt_paper, op_counts, printed_contraction_factor,
};
use hybrid_recon::experiments::{
    lambda_grid, lambda_sweep, mean_trace, rate, sweep_argmax, Ensemble, TraceSpec,
};
use hybrid_recon::grid::GridSpec;
use hybrid_recon::imagebench::{
    psnr_benchmark, read_pgm, Decimation, EnlargeConfig, EnlargeMethod,
};
use hybrid_recon::modular::ModuleCount;
use hybrid_recon::oracle::fixed_point_oracle;
use hybrid_recon::samplers::{sample, InterpKind};
use hybrid_recon::signal::gen_bandlimited;
use hybrid_recon::solver::{
    apply_g, iterate, reconstruct_signal, ChebyshevSchedule, ReconConfig, ReconOperator,
};

use InterpKind::{LinearInterp as LI, SampleAndHold as SH};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn within(v: f64, target: f64, tol: f64) -> bool {
    (v - target).abs() <= tol
}

fn rms(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64).sqrt()
}

fn ensemble_1d(trials: usize) -> Ensemble {
    Ensemble::one_d().with_trials(trials)
}

fn c1_contraction() -> Outcome {
    let r = |k, n, l, rate| contraction_factor(k, ModuleCount(n), l, rate);
    let vals = [
        (r(SH, 1, 1.0, 1.0), 0.06, 0.005),
        (r(SH, 0, 1.0, 1.0), 0.3634, 0.001),
        (r(LI, 0, 1.0, 1.0), 0.5947, 0.001),
        (r(SH, 1, 1.0, 2.0), 0.02, 0.005),
        (r(LI, 1, 1.0, 1.0), 0.1444, 0.005),
    ];
    let ok = vals.iter().all(|&(v, t, tol)| within(v, t, tol))
        && printed_contraction_factor(LI, ModuleCount(1)) == Some(0.234);
    let shown: Vec<String> = vals.iter().map(|v| format!("{:.4}", v.0)).collect();
    (
        ok,
        format!(
            "r = [{}] (LI 1-module printed 0.234 kept as reference)",
            shown.join(", ")
        ),
    )
}

fn c2_lambda() -> Outcome {
    let closed = lambda_opt_paper(SH, ModuleCount(1)).unwrap();
    let minimax = lambda_opt_minimax(SH, ModuleCount(1), 1.0);
    let sweep1 = lambda_sweep(
        &ensemble_1d(20),
        &TraceSpec::new(SH, 1, 10),
        &lambda_grid(0.80, 1.10, 0.01).unwrap(),
    )
    .unwrap();
    let best1 = sweep_argmax(&sweep1).unwrap().lambda;
    let sweep2 = lambda_sweep(
        &Ensemble::two_d().with_trials(10),
        &TraceSpec::new(SH, 0, 5),
        &lambda_grid(0.95, 1.45, 0.05).unwrap(),
    )
    .unwrap();
    let best2 = sweep_argmax(&sweep2).unwrap().lambda;
    let ok = within(closed.recomputed, 0.9425, 0.001)
        && (0.90..=1.00).contains(&minimax)
        && (0.90..=1.00).contains(&best1)
        && (1.05..=1.25).contains(&best2);
    (
        ok,
        format!(
            "closed form {:.4}, minimax {:.4}, 1-D sweep argmax {:.2}, 2-D sweep argmax {:.2}",
            closed.recomputed, minimax, best1, best2
        ),
    )
}

fn c3_magnitudes() -> Outcome {
    let ens = ensemble_1d(20);
    let at2 = |m| mean_trace(&ens, &TraceSpec::new(SH, m, 2)).unwrap().snr_db[1];
    let (conv, one, two) = (at2(0), at2(1), at2(2));
    let ok = (25.0..=50.0).contains(&conv) && (60.0..=110.0).contains(&one) && two >= one;
    (
        ok,
        format!(
            "iteration 2: conventional {conv:.1} dB, 1 module {one:.1} dB, 2 modules {two:.1} dB"
        ),
    )
}

fn c4_saturation() -> Outcome {
    let tr = mean_trace(&ensemble_1d(20), &TraceSpec::new(SH, 1, 30)).unwrap();
    let mut prev = tr.initial_snr_db;
    let mut monotone = true;
    for &s in &tr.snr_db {
        if prev > 200.0 {
            break;
        }
        monotone &= s >= prev;
        prev = s;
    }
    let first = tr.snr_db.iter().position(|&s| s > 200.0);
    let ok = monotone && first.is_some();
    (
        ok,
        format!(
            "monotone before saturation: {monotone}; first > 200 dB at iteration {}; plateau {:.1} dB",
            first.map_or("none".into(), |i| (i + 1).to_string()),
            tr.peak()
        ),
    )
}

fn c5_rate() -> Outcome {
    let out = rate(&ensemble_1d(20), &TraceSpec::new(SH, 1, 10), &[1.0, 2.0]).unwrap();
    let d = out.gain_difference_db;
    (
        (6.5..=12.5).contains(&d),
        format!(
            "slopes {:.2} / {:.2} dB per iteration, difference {d:.2} dB",
            out.slopes[0], out.slopes[1]
        ),
    )
}

fn c6_reduction() -> Outcome {
    let g = GridSpec::nyquist(128, 16).unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let x = gen_bandlimited(seed, g, 34.0).unwrap();
        for kind in [SH, LI] {
            let hybrid = ReconOperator::new(kind, ModuleCount(0), g);
            let plain = ReconOperator::standard(kind, g);
            let a = reconstruct_signal(&x, &ReconConfig::new(hybrid, 1.0, 5)).unwrap();
            let b = reconstruct_signal(&x, &ReconConfig::new(plain, 1.0, 5)).unwrap();
            for (p, q) in a.estimate.values().iter().zip(b.estimate.values()) {
                worst = worst.max((p - q).abs());
            }
        }
    }
    (
        worst <= 1e-15,
        format!("max per-sample difference {worst:.1e}"),
    )
}

fn c7_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for (n, r) in [(8, 8), (16, 16), (32, 16)] {
        let g = GridSpec::nyquist(n, r).unwrap();
        let x = gen_bandlimited(n as u64, g, 0.0).unwrap();
        let s = sample(&x);
        for kind in [SH, LI] {
            for m in [0, 1] {
                let op = ReconOperator::new(kind, ModuleCount(m), g);
                let y = fixed_point_oracle(&s, &op).unwrap();
                for lambda in [0.8, 1.0] {
                    let rep = iterate(&s, &ReconConfig::new(op, lambda, 50), None).unwrap();
                    worst = worst.max(rms(rep.estimate.values(), y.values()));
                    cases += 1;
                }
            }
        }
    }
    (
        worst <= 1e-9,
        format!("{cases} cases, worst RMS gap {worst:.1e}"),
    )
}

fn c8_contraction_realized() -> Outcome {
    let g = GridSpec::nyquist(128, 16).unwrap();
    let mut worst_margin = f64::NEG_INFINITY;
    let mut label = String::new();
    for seed in 0..3 {
        let x = gen_bandlimited(seed, g, 34.0).unwrap();
        let scale = rms(x.values(), &vec![0.0; x.len()]);
        for kind in [SH, LI] {
            for m in [0, 1, 2] {
                for lambda in [0.8, 1.0] {
                    let op = ReconOperator::new(kind, ModuleCount(m), g);
                    let r = contraction_factor(kind, ModuleCount(m), lambda, 1.0);
                    let mut errs = vec![rms(
                        apply_g(&x, &op)
                            .values()
                            .iter()
                            .map(|v| lambda * v)
                            .collect::<Vec<_>>()
                            .as_slice(),
                        x.values(),
                    )];
                    for k in 1..=10 {
                        let est = reconstruct_signal(&x, &ReconConfig::new(op, lambda, k))
                            .unwrap()
                            .estimate;
                        errs.push(rms(est.values(), x.values()));
                    }
                    for k in 2..10 {
                        if 20.0 * (scale / errs[k + 1]).log10() >= 200.0 {
                            break;
                        }
                        let margin = errs[k + 1] / errs[k] - (r + 0.02);
                        if margin > worst_margin {
                            worst_margin = margin;
                            label = format!("{kind} N={m} lambda={lambda} k={k}");
                        }
                    }
                }
            }
        }
    }
    (
        worst_margin <= 0.0,
        format!("worst ratio - (r + 0.02) = {worst_margin:+.4} ({label})"),
    )
}

fn c9_noise() -> Outcome {
    let ens = ensemble_1d(20);
    let traces: Vec<_> = [0, 1, 2]
        .iter()
        .map(|&m| mean_trace(&ens, &TraceSpec::new(SH, m, 30).noise(-20.0)).unwrap())
        .collect();
    let peaks: Vec<f64> = traces.iter().map(|t| t.peak()).collect();
    let peaked = traces.iter().all(|t| t.peak() > t.last());
    let hybrid_ge = peaks[1] >= peaks[0];
    let modules_ge = peaks[2] >= peaks[1] && peaks[1] >= peaks[0];
    (
        peaked && hybrid_ge && modules_ge,
        format!(
            "peaks 0/1/2 modules {:.4}/{:.4}/{:.4} dB, final {:.4} dB; peak then decline: {peaked}; hybrid >= conventional: {hybrid_ge} ({:+.4} dB); more modules >= : {modules_ge}",
            peaks[0],
            peaks[1],
            peaks[2],
            traces[0].last(),
            peaks[1] - peaks[0]
        ),
    )
}

fn c10_chebyshev() -> Outcome {
    let sched = ChebyshevSchedule::new(1.0, 2.0, 2).unwrap();
    let exact = sched.lambda(1) == 2.0 && sched.lambda(2) == 18.0 / 17.0;
    let ens = Ensemble::two_d().with_trials(10);
    let iters = 8;
    let accel_hybrid = mean_trace(&ens, &TraceSpec::new(SH, 4, iters).chebyshev(1.0, 2.0)).unwrap();
    let traditional = mean_trace(&ens, &TraceSpec::new(SH, 0, iters)).unwrap();
    let accel_plain = mean_trace(&ens, &TraceSpec::new(SH, 0, iters).chebyshev(1.0, 2.0)).unwrap();
    let plain_hybrid = mean_trace(&ens, &TraceSpec::new(SH, 4, iters)).unwrap();
    let margin = (2..iters)
        .map(|i| accel_hybrid.snr_db[i] - traditional.snr_db[i].max(accel_plain.snr_db[i]))
        .fold(f64::INFINITY, f64::min);
    let same_op = (2..iters)
        .map(|i| accel_hybrid.snr_db[i] - plain_hybrid.snr_db[i])
        .fold(f64::INFINITY, f64::min);
    (
        exact && margin >= 0.0,
        format!(
            "lambda_2 = 18/17: {exact}; accelerated 4-module hybrid minus best of traditional / accelerated plain, iterations >= 3: {margin:+.2} dB (info: vs unaccelerated 4-module hybrid {same_op:+.2} dB)"
        ),
    )
}

fn c11_image() -> Outcome {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/camera.pgm");
    let img = read_pgm(path).unwrap();
    let methods: Vec<EnlargeConfig> = ["bilinear", "hybrid:2:1", "iterative:2", "iterative:10"]
        .iter()
        .map(|m| EnlargeConfig::new(2, m.parse::<EnlargeMethod>().unwrap()))
        .collect();
    let p: Vec<f64> = psnr_benchmark(&img, &methods, Decimation::Antialiased)
        .unwrap()
        .iter()
        .map(|r| r.psnr_db)
        .collect();
    let (bil, hyb, it2, it10) = (p[0], p[1], p[2], p[3]);
    let a = hyb >= bil + 3.0;
    let b = (hyb - it10).abs() <= 1.5;
    let c = it10 >= it2;
    (
        a && b && c,
        format!(
            "512x512 cameraman, factor 2: bilinear {bil:.2}, hybrid(2,1) {hyb:.2}, iterative 2/10 {it2:.2}/{it10:.2} dB; hybrid >= bilinear + 3: {a} ({:+.2} dB); |hybrid - iterative10| <= 1.5: {b}; iterative10 >= iterative2: {c}",
            hyb - bil
        ),
    )
}

fn c12_op_counts() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    for m in 1..=12u64 {
        for e in 1..=16u32 {
            let n = 1u64 << e;
            let l = u64::from(e) + 1;
            let conv = op_counts(m, n, false).unwrap();
            let hyb = op_counts(m, n, true).unwrap();
            ok &= conv.additions == m * (4 * l + 2) && conv.multiplications == m * (2 * l + 1);
            ok &= hyb.additions == m * (4 * l + 4) && hyb.multiplications == m * (2 * l + 3);
            ok &= hyb.additions - conv.additions == 2 * m
                && hyb.multiplications - conv.multiplications == 2 * m;
            checked += 1;
        }
    }
    (ok, format!("{checked} (M, N) pairs checked"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("analytic contraction factors", c1_contraction),
        ("optimal relaxation", c2_lambda),
        ("convergence magnitudes", c3_magnitudes),
        ("saturation", c4_saturation),
        ("rate doubling", c5_rate),
        ("reduction property", c6_reduction),
        ("oracle equivalence", c7_oracle),
        ("contraction realization", c8_contraction_realized),
        ("noise robustness", c9_noise),
        ("chebyshev acceleration", c10_chebyshev),
        ("image benchmark", c11_image),
        ("complexity formulas", c12_op_counts),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] {:>2} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
