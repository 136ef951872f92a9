//! Frame reconstruction `f = sum <S^{-1} f, E_{mb} T_{na} g> E_{mb} T_{na} g`
//! on a fixed analysis window.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{conjugate_gradient, power_iteration};
use crate::signal::{modulate, translate, ModUnit, SampledSignal, ShiftUnit};

use super::windowed::WindowedOperator;
use super::WhSystem;

/// Reconstructs `f` through the frame coefficients `<S^{-1} f, E_{mb} T_{na} g>`.
///
/// The analysis window is the support of `f` padded by the window width plus
/// one shift on each side; `S^{-1} f` is computed there by conjugate
/// gradients on the compressed operator, then the coefficient double sum is
/// resynthesized and restricted back to the window. Relative reconstruction
/// error is bounded by the conjugate-gradient tolerance.
pub fn frame_reconstruct(
    f: &SampledSignal,
    sys: &WhSystem,
    cg_tol: f64,
) -> Result<SampledSignal> {
    let grid = *sys.grid();
    let margin = sys.window().len() as i64 + grid.p();
    let lo = f.start_step() - margin;
    let hi = f.end_step() + margin;
    let sys_w = sys.extended_to_cover(lo, hi);
    let op = WindowedOperator::new(sys, (lo, hi));
    let n = op.dim();
    let apply = |x: &[Complex64]| op.apply(x);

    // Positive-definiteness probe before committing to the solve: power
    // iteration on the shifted operator bounds the spectral floor without
    // inner solves, so it tolerates a kernel.
    let (lambda_max, _) = power_iteration(apply, n, 1e-3, 1000, 201)?;
    if lambda_max <= 0.0 {
        return Err(Error::SingularFrameOperator { lambda_min: 0.0 });
    }
    let sigma = lambda_max * (1.0 + 1e-6);
    let shifted = |x: &[Complex64]| -> Vec<Complex64> {
        let ax = op.apply(x);
        x.iter()
            .zip(ax)
            .map(|(xi, axi)| Complex64::new(sigma, 0.0) * xi - axi)
            .collect()
    };
    let (mu, _) = power_iteration(shifted, n, 1e-3, 1500, 202)?;
    let lambda_min = sigma - mu;
    if lambda_min.is_nan() || lambda_min <= 1e-6 * lambda_max {
        return Err(Error::SingularFrameOperator { lambda_min });
    }

    let rhs: Vec<Complex64> = (lo..hi).map(|i| f.value_at_step(i)).collect();
    let sol = conjugate_gradient(apply, &rhs, cg_tol, 20 * n + 500)?;
    let dual = SampledSignal::new(grid, lo, sol);

    // Resynthesize by the definition and restrict to the analysis window.
    let q = grid.q();
    let mut acc = SampledSignal::zero(grid);
    for nn in sys_w.n_range() {
        let tg = translate(sys_w.window(), nn, ShiftUnit::ShiftA);
        for m in 0..q {
            let atom = modulate(&tg, m, ModUnit::ModB);
            let c = crate::signal::inner_product(&dual, &atom)?;
            acc = acc.add(&atom.scaled(c))?;
        }
    }
    let restricted: Vec<Complex64> = (lo..hi).map(|i| acc.value_at_step(i)).collect();
    Ok(SampledSignal::new(grid, lo, restricted).trimmed(0.0))
}
