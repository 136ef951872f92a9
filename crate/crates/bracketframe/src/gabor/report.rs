//! Aggregated frame analysis: one window in, one serializable report out.

use serde::{Deserialize, Serialize};

use crate::bracket::{bracket, ess_range};
use crate::error::Result;
use crate::signal::{Period, SampledSignal};

use super::{
    a_frame_bounds, completeness_check, probe_batch, riesz_sequence_bounds,
    spectral_frame_bounds, synthesis_gram_extremes, tight_frame_check, CompletenessReport,
    WhSystem,
};

/// Knobs for [`frame_analyze`]; every tolerance lands in the report so a run
/// is reproducible from its own output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalyzeOptions {
    /// Residual tolerance for tightness flags.
    pub tol: f64,
    /// Relative threshold declaring a fiber cell zero.
    pub zero_tol: f64,
    /// Stagnation tolerance for the spectral iterations.
    pub spectral_tol: f64,
    pub max_iterations: usize,
    /// Probe count for the a-frame ratio scan.
    pub probes: usize,
    pub seed: u64,
    /// Analysis window in grid steps; `None` derives one from the window
    /// support padded by a shift.
    pub window_steps: Option<(i64, i64)>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            tol: 1e-10,
            zero_tol: 1e-6,
            spectral_tol: 1e-8,
            max_iterations: 30_000,
            probes: 20,
            seed: 17,
            window_steps: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub l: i64,
    pub p: i64,
    pub q: i64,
    /// `ab` reduced to lowest terms.
    pub ab: (i64, i64),
    pub a: f64,
    pub b: f64,
    /// Exact rational flag `ab <= 1` (recorded, never used as a proof).
    pub ab_at_most_one: bool,
}

/// Verdicts and numbers for one Weyl-Heisenberg system.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrameReport {
    pub lattice: LatticeSummary,
    pub options: AnalyzeOptions,

    /// Grid range of `G_0 = <g,g>_a`.
    pub g0_range: (f64, f64),
    /// Grid range of `G_0 / b`, the quantity pinched by the frame bounds.
    pub g0_over_b_range: (f64, f64),
    /// `sup |G_k|` for `k = 1..` up to the support bound.
    pub gk_residuals: Vec<(i64, f64)>,

    pub tight: bool,
    pub tight_deviation: f64,
    pub frame_bound_if_tight: Option<f64>,
    pub normalized_tight: bool,
    pub normalized_tight_deviation: f64,
    pub orthonormal_basis: bool,
    /// Max `|<g, E_{n/a} T_{m/b} g>|` over small `(n,m) != (0,0)`.
    pub cross_gram_residual: f64,
    pub norm_sq_minus_ab: f64,

    /// Range of `<g,g>_a`: Riesz-sequence bounds of the modulates.
    pub riesz_bounds: (f64, f64),
    /// Same, restricted to the support of `<g,g>_a`.
    pub riesz_bounds_on_support: (f64, f64),
    /// Extreme squared singular values of the synthesis map (cross-check).
    pub synthesis_extremes: (f64, f64),
    /// `sup sum_n |g(t - n/b)|^2`, the dual-lattice upper-bound necessity.
    pub dual_g0_max: f64,

    /// `(lambda_min, lambda_max)` of the windowed frame operator.
    pub spectral_bounds: (f64, f64),
    pub spectral_window_steps: (i64, i64),

    /// `(inf, sup)` of the probe-batch a-frame ratios.
    pub a_frame_bounds: (f64, f64),

    /// Present only at critical density (`p == q`).
    pub completeness: Option<CompletenessReport>,

    /// Strict gate: lambda_min clearly positive at this resolution.
    pub is_frame: bool,
}

/// Runs the whole analysis battery on one window.
pub fn frame_analyze(g: &SampledSignal, opts: &AnalyzeOptions) -> Result<FrameReport> {
    let grid = *g.grid();
    let b = grid.modulation();
    let (ab_num, ab_den) = grid.ab_rational();

    let window_steps = opts.window_steps.unwrap_or_else(|| {
        // Pad the support by one lattice period, but cap the width at eight
        // periods around the support midpoint: the operator is lattice
        // periodic, so a few periods already expose its spectral range, and
        // the window used is recorded below.
        let pad = grid.p().max(grid.q());
        let (lo, hi) = (g.start_step() - pad, g.end_step() + pad);
        let cap = 8 * pad;
        if hi - lo <= cap {
            (lo, hi)
        } else {
            let mid = (lo + hi) / 2;
            (mid - cap / 2, mid + cap / 2)
        }
    });

    let sys = WhSystem::covering_steps(g.clone(), window_steps.0, window_steps.1);
    let verdict = tight_frame_check(&sys, opts.tol)?;

    let g0_range = verdict.g0_range;
    let g0_over_b_range = (g0_range.0 / b, g0_range.1 / b);

    let riesz_bounds = riesz_sequence_bounds(g, Period::ShiftA, None)?;
    let riesz_on_support =
        riesz_sequence_bounds(g, Period::ShiftA, Some(crate::bracket::DEFAULT_ZERO_EPS))?;
    let synthesis_extremes =
        synthesis_gram_extremes(g, Period::ShiftA, opts.spectral_tol, opts.max_iterations)?;
    let dual_g0_max = ess_range(&bracket(g, g, Period::InvB)?, None)?.1;

    let spectral_bounds =
        spectral_frame_bounds(&sys, window_steps, opts.spectral_tol, opts.max_iterations)?;

    let probes = probe_batch(grid, window_steps, opts.probes, opts.seed);
    let a_frame = a_frame_bounds(g, &grid, &probes, opts.zero_tol)?;

    let completeness = if grid.is_critical() {
        Some(completeness_check(g, &grid, opts.zero_tol)?)
    } else {
        None
    };

    let is_frame = spectral_bounds.0 > opts.zero_tol * spectral_bounds.1.max(1.0);

    Ok(FrameReport {
        lattice: LatticeSummary {
            l: grid.l(),
            p: grid.p(),
            q: grid.q(),
            ab: (ab_num, ab_den),
            a: grid.shift(),
            b,
            ab_at_most_one: ab_num <= ab_den,
        },
        options: opts.clone(),
        g0_range,
        g0_over_b_range,
        gk_residuals: verdict.gk_residuals.clone(),
        tight: verdict.tight,
        tight_deviation: verdict.tight_deviation,
        frame_bound_if_tight: verdict.frame_bound,
        normalized_tight: verdict.normalized_tight,
        normalized_tight_deviation: verdict.normalized_deviation,
        orthonormal_basis: verdict.orthonormal_basis,
        cross_gram_residual: verdict.cross_gram_residual,
        norm_sq_minus_ab: verdict.norm_sq_minus_ab,
        riesz_bounds,
        riesz_bounds_on_support: riesz_on_support,
        synthesis_extremes,
        dual_g0_max,
        spectral_bounds,
        spectral_window_steps: window_steps,
        a_frame_bounds: a_frame,
        completeness,
        is_frame,
    })
}
