//! Dense direct solve of the reconstruction fixed point, for small grids.
//!
//! The fixed point of the relaxed recursion satisfies `G y = Gx` with `y`
//! in the passband of `P`. Restricting `G` to an orthonormal real Fourier
//! basis `Q` of the strict passband gives the small system
//! `Q^T G Q c = Q^T Gx`, solved here by SVD; `y = Q c`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{usage, Error, Result};
use crate::grid::DenseSignal;
use crate::samplers::CoarseSamples;
use crate::solver::{ReconOperator, ReconstructionOperator};

/// Largest fine grid the oracle accepts.
pub const ORACLE_MAX_FINE_LEN: usize = 512;

/// Condition threshold below which the restricted operator counts as singular.
pub const SINGULAR_RCOND: f64 = 1e-12;

/// Orthonormal real Fourier basis of the bins strictly inside `cutoff`
/// (cycles per tick), one column per basis vector.
pub fn passband_basis(fine_len: usize, cutoff: f64) -> DMatrix<f64> {
    let n = fine_len;
    let max_bin = (0..=n / 2)
        .take_while(|&j| (j as f64) < cutoff * n as f64 - 1e-9)
        .last()
        .unwrap_or(0);
    let cols = 1 + 2 * max_bin;
    let mut q = DMatrix::zeros(n, cols);
    let dc = 1.0 / (n as f64).sqrt();
    let ac = (2.0 / n as f64).sqrt();
    for t in 0..n {
        q[(t, 0)] = dc;
        for j in 1..=max_bin {
            let phase = 2.0 * PI * (j * t % n) as f64 / n as f64;
            q[(t, 2 * j - 1)] = ac * phase.cos();
            q[(t, 2 * j)] = ac * phase.sin();
        }
    }
    q
}

/// Solves for the exact fixed point of the iteration driven by `samples`.
pub fn fixed_point_oracle(samples: &CoarseSamples, op: &ReconOperator) -> Result<DenseSignal> {
    let n = op.grid.fine_len();
    if n > ORACLE_MAX_FINE_LEN {
        return Err(usage(format!(
            "oracle is limited to {ORACLE_MAX_FINE_LEN} fine ticks, grid has {n}"
        )));
    }
    let b = DVector::from_vec(op.observe_values(samples)?);
    let q = passband_basis(n, op.lpf.cutoff());
    let mut gq = DMatrix::zeros(n, q.ncols());
    for (c, col) in q.column_iter().enumerate() {
        let v: Vec<f64> = col.iter().copied().collect();
        gq.set_column(c, &DVector::from_vec(op.apply_values(&v)));
    }
    let m = q.transpose() * gq;
    let rhs = q.transpose() * b;
    let svd = m.svd(true, true);
    let (lo, hi) = svd
        .singular_values
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &s| {
            (lo.min(s), hi.max(s))
        });
    if !(hi > 0.0) || lo / hi < SINGULAR_RCOND {
        return Err(Error::Singular(format!(
            "restricted operator has condition ratio {:.3e}",
            if hi > 0.0 { lo / hi } else { 0.0 }
        )));
    }
    let c = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::Singular(e.to_string()))?;
    let y = q * c;
    Ok(DenseSignal::from_parts(
        op.grid,
        y.iter().copied().collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::modular::ModuleCount;
    use crate::samplers::{sample, InterpKind};
    use crate::signal::gen_bandlimited;

    #[test]
    fn basis_is_orthonormal() {
        let q = passband_basis(64, 0.1);
        assert_eq!(q.ncols(), 1 + 2 * 6);
        let gram = q.transpose() * &q;
        let err = (gram - DMatrix::identity(13, 13)).abs().max();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn recovers_bandlimited_signal() {
        let grid = GridSpec::nyquist(16, 16).unwrap();
        let x = gen_bandlimited(9, grid, 0.0).unwrap();
        for kind in [InterpKind::SampleAndHold, InterpKind::LinearInterp] {
            let op = ReconOperator::new(kind, ModuleCount(1), grid);
            let y = fixed_point_oracle(&sample(&x), &op).unwrap();
            let err = x
                .values()
                .iter()
                .zip(y.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-9, "{kind}: {err}");
        }
    }

    #[test]
    fn rejects_large_grid() {
        let grid = GridSpec::nyquist(64, 16).unwrap();
        let x = DenseSignal::constant(grid, 1.0);
        let op = ReconOperator::standard(InterpKind::SampleAndHold, grid);
        assert!(matches!(
            fixed_point_oracle(&sample(&x), &op),
            Err(Error::Usage(_))
        ));
    }
}
