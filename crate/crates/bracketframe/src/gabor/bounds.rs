//! Frame-bound estimators: bracket ranges, singular values of the synthesis
//! map, spectral bounds of the windowed frame operator, and probe-batch
//! a-frame ratios.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bracket::{bracket, ess_range, DEFAULT_ZERO_EPS};
use crate::error::{Error, Result};
use crate::linalg::{inverse_iteration, power_iteration, HermitianMatrix};
use crate::signal::{
    inner_product, translate, LatticeGrid, Period, SampledSignal, ShiftUnit,
};

use super::windowed::WindowedOperator;
use super::WhSystem;

/// Riesz-sequence bounds `(A, B)` of the modulates of `g`: the grid range of
/// `<g,g>_P`, optionally restricted to its support.
pub fn riesz_sequence_bounds(
    g: &SampledSignal,
    period: Period,
    support_eps: Option<f64>,
) -> Result<(f64, f64)> {
    if g.max_abs() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    ess_range(&bracket(g, g, period)?, support_eps)
}

/// Extreme squared singular values of the synthesis map `phi -> ext(phi) * g`
/// from one period onto the line, obtained by materializing the map column by
/// column and taking the eigenvalue extremes of its Gram matrix.
///
/// An independent route to the same bounds as [`riesz_sequence_bounds`].
pub fn synthesis_gram_extremes(
    g: &SampledSignal,
    period: Period,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, f64)> {
    if g.max_abs() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let grid = *g.grid();
    let steps = period.steps(&grid) as usize;
    let dt = grid.dt();

    // Column j: the periodic extension of the j-th unit sample times g.
    let columns: Vec<SampledSignal> = (0..steps)
        .map(|j| {
            let samples: Vec<Complex64> = g
                .samples()
                .iter()
                .enumerate()
                .map(|(k, z)| {
                    let i = g.offset() + k as i64;
                    if i.rem_euclid(steps as i64) as usize == j {
                        *z
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            SampledSignal::new(grid, g.offset(), samples)
        })
        .collect();

    let mut gram = HermitianMatrix::zeros(steps);
    for i in 0..steps {
        for j in 0..=i {
            // Squared singular values are eigenvalues of the unweighted
            // normal matrix; the quadrature weights cancel.
            let v = inner_product(&columns[j], &columns[i])? / dt;
            gram.set(i, j, v);
            gram.set(j, i, v.conj());
        }
    }
    gram.extreme_eigenvalues(tol, max_iter)
}

/// Spectral bounds `(lambda_min, lambda_max)` of the frame operator restricted
/// to signals supported on the step window `[lo, hi)`.
///
/// `lambda_max` comes from power iteration, `lambda_min` from inverse
/// iteration with conjugate-gradient inner solves; both stop when successive
/// Rayleigh quotients differ by at most `tol` relatively. Near the spectral
/// edges of a windowed operator eigenvalues cluster, so the results are inner
/// estimates of the optimal bounds.
///
/// Inverse iteration needs a positive definite operator, so the bottom of the
/// spectrum is probed first by power iteration on the shift `sigma I - S`
/// (which has no inner solves and tolerates a kernel). Systems whose floor
/// sits below `1e-6 * lambda_max` are reported with that crude floor, clamped
/// to zero: at this resolution they are not frames.
pub fn spectral_frame_bounds(
    sys: &WhSystem,
    window: (i64, i64),
    tol: f64,
    max_iter: usize,
) -> Result<(f64, f64)> {
    let op = WindowedOperator::new(sys, window);
    let n = op.dim();
    let apply = |x: &[Complex64]| op.apply(x);
    let (lambda_max, _) = power_iteration(apply, n, tol, max_iter, 101)?;
    if lambda_max <= 0.0 {
        return Ok((0.0, 0.0));
    }

    let sigma = lambda_max * (1.0 + 1e-6);
    let shifted = |x: &[Complex64]| -> Vec<Complex64> {
        let ax = op.apply(x);
        x.iter()
            .zip(ax)
            .map(|(xi, axi)| Complex64::new(sigma, 0.0) * xi - axi)
            .collect()
    };
    let probe_tol = tol.max(1e-3);
    let (mu, _) = power_iteration(shifted, n, probe_tol, max_iter.min(1500), 103)?;
    let floor = sigma - mu;
    if floor <= 1e-6 * lambda_max {
        return Ok((floor.max(0.0), lambda_max));
    }

    let (lambda_min, _) = inverse_iteration(apply, n, tol, max_iter, 102)?;
    Ok((lambda_min, lambda_max))
}

/// Deterministic batch of dense random probes supported on `[lo, hi)`.
pub fn probe_batch(
    grid: LatticeGrid,
    window: (i64, i64),
    count: usize,
    seed: u64,
) -> Vec<SampledSignal> {
    use rand::{Rng, SeedableRng};
    let (lo, hi) = window;
    assert!(hi > lo, "probe window must be nonempty");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let samples = (lo..hi)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            SampledSignal::new(grid, lo, samples)
        })
        .collect()
}

/// Pointwise a-frame ratios of the translate family `(T_{na} g)` in the
/// 1/b-bracket, scanned over a probe batch:
///
/// `ratio(t) = b^{-1} sum_n |<f, T_{na} g>_{1/b}(t)|^2 / <f,f>_{1/b}(t)`
///
/// evaluated wherever the probe's pointwise norm exceeds `eps` times its
/// peak. The `b^{-1}` carries the fiberization scaling, so the returned
/// `(inf, sup)` lives on the same scale as the frame-operator spectrum.
pub fn a_frame_bounds(
    g: &SampledSignal,
    grid: &LatticeGrid,
    probes: &[SampledSignal],
    eps: f64,
) -> Result<(f64, f64)> {
    if probes.is_empty() {
        return Err(Error::EmptyProbeSet);
    }
    if g.max_abs() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let inv_b = grid.inv_modulation();
    let q = grid.q() as usize;

    let per_probe: Vec<Result<(f64, f64)>> = probes
        .par_iter()
        .map(|f| {
            if f.grid() != grid {
                return Err(Error::GridMismatch);
            }
            let sys = WhSystem::covering(g.clone(), f);
            let mut numer = vec![0.0f64; q];
            for n in sys.n_range() {
                let tg = translate(g, n, ShiftUnit::ShiftA);
                let br = bracket(f, &tg, Period::InvB)?;
                for (r, z) in br.samples().iter().enumerate() {
                    numer[r] += z.norm_sqr();
                }
            }
            let denom = bracket(f, f, Period::InvB)?;
            let cutoff = eps.max(DEFAULT_ZERO_EPS) * denom.max_abs();
            let mut inf = f64::INFINITY;
            let mut sup = f64::NEG_INFINITY;
            for (r, d) in denom.samples().iter().enumerate() {
                if d.re > cutoff {
                    let ratio = inv_b * numer[r] / d.re;
                    inf = inf.min(ratio);
                    sup = sup.max(ratio);
                }
            }
            Ok((inf, sup))
        })
        .collect();

    let mut inf = f64::INFINITY;
    let mut sup = f64::NEG_INFINITY;
    for r in per_probe {
        let (i, s) = r?;
        inf = inf.min(i);
        sup = sup.max(s);
    }
    if inf > sup {
        // Every probe had vanishing pointwise norm: nothing was scanned.
        return Err(Error::EmptyProbeSet);
    }
    Ok((inf, sup))
}
