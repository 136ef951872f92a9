//! Weyl-Heisenberg (Gabor) system analysis.
//!
//! A system is a window `g` together with the lattice `(a, b)` carried by its
//! grid. Modulations live on the grid: `e^{2 pi i m b t}` at step `i` is a
//! rational rotation by `m*i/q` turns, so indices `m` and `m + q` coincide on
//! every sample and `m in {0, .., q-1}` enumerates all grid-distinct
//! modulations. With that index set and left-endpoint quadrature the discrete
//! Parseval identity is exact:
//!
//! `sum_{m=0}^{q-1} |<f, E_{mb} T_{na} g>|^2 = b^{-1} * || <f, T_{na} g>_{1/b} ||^2`
//!
//! where the right side is the period quadrature of the 1/b-bracket. The
//! factor `b^{-1}` is fixed once here and verified against the brute-force
//! coefficient sum in the tests.

mod bounds;
mod complete;
mod reconstruct;
mod report;
mod windowed;

pub use bounds::{a_frame_bounds, probe_batch, riesz_sequence_bounds, spectral_frame_bounds, synthesis_gram_extremes};
pub use complete::{completeness_check, CompletenessReport, CompletenessVerdict};
pub use reconstruct::frame_reconstruct;
pub use report::{frame_analyze, AnalyzeOptions, FrameReport};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bracket::{a_norm, bracket, scale_by_periodic};
use crate::error::{Error, Result};
use crate::ortho::project_modulation_span;
use crate::signal::{
    inner_product, modulate, translate, LatticeGrid, ModUnit, Period, PeriodicSignal,
    SampledSignal, ShiftUnit,
};

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    (a + b - 1).div_euclid(b)
}

/// A window plus the translation range used by the analysis operators.
///
/// `n_range` must cover every `n` for which `T_{na} g` meets the analysis
/// domain; over-coverage is harmless (extra terms vanish identically).
#[derive(Clone, Debug)]
pub struct WhSystem {
    window: SampledSignal,
    n_lo: i64,
    n_hi: i64,
}

impl WhSystem {
    pub fn new(window: SampledSignal, n_range: std::ops::RangeInclusive<i64>) -> Self {
        WhSystem { window, n_lo: *n_range.start(), n_hi: *n_range.end() }
    }

    /// System whose translates cover the step interval `[lo, hi)`.
    pub fn covering_steps(window: SampledSignal, lo: i64, hi: i64) -> Self {
        let p = window.grid().p();
        let (o, len) = (window.start_step(), window.len() as i64);
        let n_lo = ceil_div(lo - o - len + 1, p);
        let n_hi = (hi - 1 - o).div_euclid(p);
        WhSystem { window, n_lo, n_hi: n_hi.max(n_lo - 1) }
    }

    /// System whose translates cover the support of `f`.
    pub fn covering(window: SampledSignal, f: &SampledSignal) -> Self {
        Self::covering_steps(window, f.start_step(), f.end_step())
    }

    pub fn window(&self) -> &SampledSignal {
        &self.window
    }

    pub fn grid(&self) -> &LatticeGrid {
        self.window.grid()
    }

    pub fn n_range(&self) -> std::ops::RangeInclusive<i64> {
        self.n_lo..=self.n_hi
    }

    /// Number of grid-distinct modulations (`q`).
    pub fn m_count(&self) -> i64 {
        self.grid().q()
    }

    /// Widens the range so it also covers `[lo, hi)`.
    pub fn extended_to_cover(&self, lo: i64, hi: i64) -> Self {
        let other = Self::covering_steps(self.window.clone(), lo, hi);
        WhSystem {
            window: self.window.clone(),
            n_lo: self.n_lo.min(other.n_lo),
            n_hi: self.n_hi.max(other.n_hi),
        }
    }
}

/// Correlation function `G_k(t) = sum_n g(t-na) conj(g(t-na-k/b))`, one period
/// of length `a`. `G_0` is real and nonnegative; every sum is exactly finite.
pub fn gk_function(g: &SampledSignal, k: i64) -> PeriodicSignal {
    let grid = *g.grid();
    let p = grid.p();
    let shift = k * grid.q();
    let mut out = vec![Complex64::new(0.0, 0.0); p as usize];
    let lo = g.start_step().max(g.start_step() + shift);
    let hi = g.end_step().min(g.end_step() + shift);
    for i in lo..hi {
        let r = i.rem_euclid(p) as usize;
        out[r] += g.value_at_step(i) * g.value_at_step(i - shift).conj();
    }
    PeriodicSignal::new(grid, out)
}

/// Largest `|k|` for which `G_k` can be nonzero: beyond it the supports of
/// `g` and `T_{k/b} g` are disjoint.
pub fn gk_support_bound(g: &SampledSignal) -> i64 {
    if g.is_empty() {
        return 0;
    }
    (g.len() as i64 - 1) / g.grid().q()
}

/// Frame coefficient `<f, E_{mb} T_{na} g>` with `0 <= m < q`.
pub fn wh_coefficient(
    f: &SampledSignal,
    sys: &WhSystem,
    m: i64,
    n: i64,
) -> Result<Complex64> {
    let q = sys.grid().q();
    if m < 0 || m >= q {
        return Err(Error::IndexOutOfRange { m, q });
    }
    let atom = modulate(&translate(sys.window(), n, ShiftUnit::ShiftA), m, ModUnit::ModB);
    inner_product(f, &atom)
}

/// Coefficient energy of one fiber, computed from the 1/b-bracket:
/// the period quadrature `dt * sum_r |<f, T_{na} g>_{1/b}(r)|^2`.
///
/// Equals `b * sum_{m=0}^{q-1} |<f, E_{mb} T_{na} g>|^2` exactly on the grid
/// (discrete Parseval; see the module docs for the scaling).
pub fn fiber_energy(f: &SampledSignal, sys: &WhSystem, n: i64) -> Result<f64> {
    let tg = translate(sys.window(), n, ShiftUnit::ShiftA);
    let br = bracket(f, &tg, Period::InvB)?;
    Ok(f.grid().dt() * br.samples().iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// Total coefficient energy `sum_{n,m} |<f, E_{mb} T_{na} g>|^2` over the
/// system's translation range, via the fiberized form.
pub fn coefficient_energy(f: &SampledSignal, sys: &WhSystem) -> Result<f64> {
    let b = sys.grid().modulation();
    let mut total = 0.0;
    for n in sys.n_range() {
        total += fiber_energy(f, sys, n)? / b;
    }
    Ok(total)
}

fn accumulate(
    grid: LatticeGrid,
    terms: Vec<SampledSignal>,
) -> SampledSignal {
    let mut out = SampledSignal::zero(grid);
    for t in terms {
        out = out.add(&t).expect("terms share the grid");
    }
    out
}

/// Fan out over the translation range only when the work amortizes the
/// scheduling overhead; the iterative solvers call the operators thousands
/// of times on small windows.
fn map_translates<F>(sys: &WhSystem, per_n: F) -> Vec<SampledSignal>
where
    F: Fn(i64) -> SampledSignal + Sync + Send,
{
    let ns: Vec<i64> = sys.n_range().collect();
    let work = ns.len() as i64 * sys.window().len() as i64;
    if work >= 1_000_000 {
        ns.into_par_iter().map(per_n).collect()
    } else {
        ns.into_iter().map(per_n).collect()
    }
}

/// Frame operator by the definition: the double sum
/// `S f = sum_{n} sum_{m=0}^{q-1} <f, E_{mb} T_{na} g> E_{mb} T_{na} g`.
pub fn frame_operator_naive(f: &SampledSignal, sys: &WhSystem) -> Result<SampledSignal> {
    let grid = *sys.grid();
    let q = grid.q();
    let terms = map_translates(sys, |n| {
        let tg = translate(sys.window(), n, ShiftUnit::ShiftA);
        let mut acc = SampledSignal::zero(grid);
        for m in 0..q {
            let atom = modulate(&tg, m, ModUnit::ModB);
            let c = inner_product(f, &atom).expect("same grid");
            acc = acc.add(&atom.scaled(c)).expect("same grid");
        }
        acc
    });
    Ok(accumulate(grid, terms))
}

/// Frame operator in compressed (fiberized) form:
/// `S f = b^{-1} sum_n <f, T_{na} g>_{1/b} T_{na} g`.
/// No modulation loop; agrees with the naive double sum on every input.
pub fn frame_operator_compressed(f: &SampledSignal, sys: &WhSystem) -> Result<SampledSignal> {
    let grid = *sys.grid();
    let inv_b = Complex64::new(grid.inv_modulation(), 0.0);
    let terms = map_translates(sys, |n| {
        let tg = translate(sys.window(), n, ShiftUnit::ShiftA);
        let coeff = bracket(f, &tg, Period::InvB).expect("same grid");
        scale_by_periodic(&tg, &coeff).expect("same grid").scaled(inv_b)
    });
    Ok(accumulate(grid, terms))
}

/// The projection form of the compressed operator:
/// `S f = b^{-1} sum_n (P_n f) * T_{na} |g|^2_{1/b}`,
/// where `P_n` projects onto the modulation span of `T_{na} g`.
pub fn frame_operator_projection_form(
    f: &SampledSignal,
    sys: &WhSystem,
) -> Result<SampledSignal> {
    let grid = *sys.grid();
    let inv_b = Complex64::new(grid.inv_modulation(), 0.0);
    let norm_sq = {
        let n = a_norm(sys.window(), Period::InvB);
        n.mul(&n)
    };
    let mut out = SampledSignal::zero(grid);
    for n in sys.n_range() {
        let tg = translate(sys.window(), n, ShiftUnit::ShiftA);
        let pn = match project_modulation_span(f, &tg, Period::InvB) {
            Ok(p) => p,
            Err(Error::ZeroWindow) => continue,
            Err(e) => return Err(e),
        };
        // T_{na} |g|^2_{1/b}: rotate the periodic factor by n*p steps.
        let rotated = norm_sq.rotated((n * grid.p()).rem_euclid(grid.q()));
        out = out.add(&scale_by_periodic(&pn, &rotated)?.scaled(inv_b))?;
    }
    Ok(out)
}

/// All four quantities of the frame identity for one `(f, g)` pair.
#[derive(Clone, Copy, Debug)]
pub struct WhFrameIdentity {
    /// `b^{-1} int |f|^2 G_0`.
    pub f1: f64,
    /// `b^{-1} sum_{k != 0} int conj(f(t)) f(t - k/b) G_k(t) dt`.
    pub f2: f64,
    /// Brute-force coefficient double sum `sum_{n,m} |<f, E_{mb} T_{na} g>|^2`.
    pub total_direct: f64,
    /// The same energy in bracket form:
    /// `b^{-1} sum_k int_0^a <T_{k/b} f, f>_a <g, T_{k/b} g>_a`.
    pub total_bracket: f64,
}

/// Evaluates the frame identity along three independent routes.
pub fn wh_frame_identity(
    f: &SampledSignal,
    g: &SampledSignal,
    grid: &LatticeGrid,
) -> Result<WhFrameIdentity> {
    if f.grid() != grid || g.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let dt = grid.dt();
    let p = grid.p();
    let q = grid.q();
    let inv_b = grid.inv_modulation();

    // k-range: both G_k and the f-correlation vanish once |k|/b exceeds the
    // relevant support width.
    let k_max = gk_support_bound(g).min(if f.is_empty() { 0 } else { (f.len() as i64 - 1) / q });

    // Route 1: F1 + F2 from the G_k functions.
    let g0 = gk_function(g, 0);
    let mut f1 = 0.0;
    for (j, z) in f.samples().iter().enumerate() {
        let i = f.offset() + j as i64;
        f1 += z.norm_sqr() * g0.value_at_step(i.rem_euclid(p)).re;
    }
    f1 *= dt * inv_b;

    let mut f2_c = Complex64::new(0.0, 0.0);
    for k in -k_max..=k_max {
        if k == 0 {
            continue;
        }
        let gk = gk_function(g, k);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, z) in f.samples().iter().enumerate() {
            let i = f.offset() + j as i64;
            acc += z.conj() * f.value_at_step(i - k * q) * gk.value_at_step(i.rem_euclid(p));
        }
        f2_c += acc;
    }
    f2_c *= dt * inv_b;
    let f2 = f2_c.re;

    // Route 2: brute-force coefficient double sum.
    let sys = WhSystem::covering(g.clone(), f);
    let mut total_direct = 0.0;
    for n in sys.n_range() {
        for m in 0..q {
            total_direct += wh_coefficient(f, &sys, m, n)?.norm_sqr();
        }
    }

    // Route 3: bracket form over the shift period.
    let mut total_bracket_c = Complex64::new(0.0, 0.0);
    for k in -k_max..=k_max {
        let tkf = translate(f, k, ShiftUnit::InvB);
        let left = bracket(&tkf, f, Period::ShiftA)?;
        let right = bracket(g, &translate(g, k, ShiftUnit::InvB), Period::ShiftA)?;
        total_bracket_c += left.mul(&right).integral();
    }
    total_bracket_c *= inv_b;
    let total_bracket = total_bracket_c.re;

    Ok(WhFrameIdentity { f1, f2, total_direct, total_bracket })
}

/// Tightness verdict together with the residuals it is based on.
#[derive(Clone, Debug)]
pub struct TightFrameVerdict {
    /// `A = B`: `G_0` constant and every `G_k`, `k != 0`, flat zero.
    pub tight: bool,
    /// `(sup G_0 - inf G_0)/b` combined with the largest `G_k` residual.
    pub tight_deviation: f64,
    /// The common frame bound `G_0/b` when tight.
    pub frame_bound: Option<f64>,
    /// `G_0 = b` and all `G_k = 0`.
    pub normalized_tight: bool,
    pub normalized_deviation: f64,
    /// Normalized tight with a unit-norm window.
    pub orthonormal_basis: bool,
    pub g0_range: (f64, f64),
    /// `sup |G_k|` per `k >= 1` up to the support bound.
    pub gk_residuals: Vec<(i64, f64)>,
    /// Max `|<g, E_{n/a} T_{m/b} g>|` over small `(n, m) != (0, 0)`.
    pub cross_gram_residual: f64,
    /// `||g||^2 - ab`.
    pub norm_sq_minus_ab: f64,
}

/// Checks the tight-frame conditions: `G_0` flat (tight), `G_0 = b`
/// (normalized tight), the dual-lattice orthogonality residuals and the
/// `||g||^2 = ab` balance.
pub fn tight_frame_check(sys: &WhSystem, tol: f64) -> Result<TightFrameVerdict> {
    let g = sys.window();
    let grid = sys.grid();
    let b = grid.modulation();

    let g0 = gk_function(g, 0);
    let (inf_g0, sup_g0) = crate::bracket::ess_range(&g0, None)?;

    let k_bound = gk_support_bound(g);
    let mut gk_residuals = Vec::new();
    let mut max_gk = 0.0f64;
    for k in 1..=k_bound {
        let r = gk_function(g, k).max_abs();
        max_gk = max_gk.max(r);
        gk_residuals.push((k, r));
    }

    let tight_deviation = ((sup_g0 - inf_g0) / b).max(max_gk);
    let tight = tight_deviation <= tol;
    let normalized_deviation = (sup_g0 - b).abs().max((inf_g0 - b).abs()).max(max_gk);
    let normalized_tight = normalized_deviation <= tol;

    let norm_sq = g.l2_norm_sq();
    let (ab_num, ab_den) = grid.ab_rational();
    let ab = ab_num as f64 / ab_den as f64;
    let orthonormal_basis = normalized_tight && (norm_sq.sqrt() - 1.0).abs() <= tol;

    // Dual-lattice cross Gram: <g, E_{n/a} T_{m/b} g> for small (n, m).
    let m_bound = ((g.len() as i64 - 1) / grid.q()).min(3);
    let mut cross = 0.0f64;
    for n in -3i64..=3 {
        for m in -m_bound..=m_bound {
            if n == 0 && m == 0 {
                continue;
            }
            let atom = modulate(&translate(g, m, ShiftUnit::InvB), n, ModUnit::InvA);
            cross = cross.max(inner_product(g, &atom)?.norm());
        }
    }

    Ok(TightFrameVerdict {
        tight,
        tight_deviation,
        frame_bound: tight.then_some((0.5 * (sup_g0 + inf_g0)) / b),
        normalized_tight,
        normalized_deviation,
        orthonormal_basis,
        g0_range: (inf_g0, sup_g0),
        gk_residuals,
        cross_gram_residual: cross,
        norm_sq_minus_ab: norm_sq - ab,
    })
}
