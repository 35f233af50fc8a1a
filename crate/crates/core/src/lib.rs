//! Reconstruction of band-limited signals and images from interpolated
//! samples.
//!
//! Sample-and-hold and linear interpolation attenuate the signal band by
//! `sinc(fT)` and `sinc^2(fT)`. This crate compensates that distortion three
//! ways: a one-shot cosine mixer that folds spectral replicas back into
//! baseband ([`modular`]), the relaxed fixed-point iteration
//! `x_{k+1} = lambda Gx + (I - lambda G) x_k` ([`solver`]), and the hybrid of
//! both, optionally with Chebyshev acceleration. Continuous time is emulated
//! on a fine grid ([`grid`]); all filtering is an ideal FFT lowpass
//! ([`spectral`]).
//!
//! ```
//! use hybrid_recon::prelude::*;
//!
//! let grid = GridSpec::nyquist(64, 16).unwrap();
//! let x = gen_bandlimited(7, grid, 34.0).unwrap();
//! let op = ReconOperator::new(InterpKind::SampleAndHold, ModuleCount(1), grid);
//! let report = reconstruct_signal(&x, &ReconConfig::new(op, 1.0, 3)).unwrap();
//! assert!(report.snr_trace[2] > 80.0);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod imagebench;
pub mod metrics;
pub mod modular;
pub mod oracle;
pub mod samplers;
pub mod signal;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};

/// The types and functions most programs need.
pub mod prelude {
    pub use crate::analysis::{contraction_factor, distortion_gain, predicted_gain_db};
    pub use crate::error::{Error, Result};
    pub use crate::grid::{DenseImage, DenseSignal, GridSpec};
    pub use crate::metrics::{psnr_db, snr2d_db, snr_db, DEFAULT_EDGE_IGNORE};
    pub use crate::modular::{modular_reconstruct, modular_reconstruct2d, ModuleCount};
    pub use crate::samplers::{
        interpolate, sample, sample2d, CoarseImage, CoarseSamples, InterpKind,
    };
    pub use crate::signal::{add_awgn, add_awgn2d, gen_bandlimited, gen_bandlimited2d, BandShape};
    pub use crate::solver::{
        iterate, iterate2d, reconstruct_image, reconstruct_signal, Acceleration, ReconConfig,
        ReconOperator, ReconOperator2d, ReconReport,
    };
    pub use crate::spectral::{lowpass, lowpass2d, LowpassSpec};
}
