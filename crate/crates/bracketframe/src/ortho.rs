//! Orthogonality in the bracket calculus: a-orthonormal systems, the
//! Gram-Schmidt recursion, Bessel defects, projections onto modulation spans
//! and the representer construction for factorable operators.

use num_complex::Complex64;

use crate::bracket::{a_norm, bracket, normalize_a, scale_by_periodic, DEFAULT_ZERO_EPS};
use crate::error::{Error, Result};
use crate::signal::{translate, LatticeGrid, Period, PeriodicSignal, SampledSignal, ShiftUnit};
use crate::window::indicator;

/// A finite family that is pairwise a-orthogonal with self-brackets equal to
/// one on their supports (and zero off them).
#[derive(Clone, Debug)]
pub struct OrthoSystem {
    period: Period,
    members: Vec<SampledSignal>,
}

/// Residuals certifying (or refuting) a-orthonormality of a family.
#[derive(Clone, Copy, Debug)]
pub struct OrthoResiduals {
    /// Max over i != j of sup |<g_i, g_j>_P|.
    pub max_pairwise: f64,
    /// Max over i of sup |<g_i,g_i>_P - {0,1}| (distance to the nearer of 0 and 1).
    pub max_self_deviation: f64,
}

impl OrthoSystem {
    /// Wraps a family after checking the orthonormality residuals against `tol`.
    pub fn new(members: Vec<SampledSignal>, period: Period, tol: f64) -> Result<Self> {
        let sys = OrthoSystem { period, members };
        let r = sys.residuals()?;
        if r.max_pairwise > tol || r.max_self_deviation > tol {
            return Err(Error::NotOrthonormal {
                residual: r.max_pairwise.max(r.max_self_deviation),
                tol,
            });
        }
        Ok(sys)
    }

    /// Wraps without validation; used by constructions that are orthonormal
    /// by algebra (and tested as such).
    pub fn new_unchecked(members: Vec<SampledSignal>, period: Period) -> Self {
        OrthoSystem { period, members }
    }

    pub fn period(&self) -> Period {
        self.period
    }

    pub fn members(&self) -> &[SampledSignal] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn residuals(&self) -> Result<OrthoResiduals> {
        let mut max_pairwise = 0.0f64;
        let mut max_self = 0.0f64;
        for (i, gi) in self.members.iter().enumerate() {
            for (j, gj) in self.members.iter().enumerate() {
                let b = bracket(gi, gj, self.period)?;
                if i == j {
                    for z in b.samples() {
                        let d = (z.re - 1.0).hypot(z.im).min(z.norm());
                        max_self = max_self.max(d);
                    }
                } else {
                    max_pairwise = max_pairwise.max(b.max_abs());
                }
            }
        }
        Ok(OrthoResiduals { max_pairwise, max_self_deviation: max_self })
    }
}

/// Tests `f perp_P g`. The residual is the sup of the pointwise bracket; the
/// verdict compares it against `tol` scaled by the peak a-norms.
pub fn is_a_orthogonal(
    f: &SampledSignal,
    g: &SampledSignal,
    period: Period,
    tol: f64,
) -> Result<(bool, f64)> {
    let b = bracket(f, g, period)?;
    let residual = b.max_abs();
    let scale = a_norm(f, period).max_abs() * a_norm(g, period).max_abs();
    Ok((residual <= tol * scale.max(f64::MIN_POSITIVE), residual))
}

/// Gram-Schmidt in the bracket calculus:
/// `e_1 = N(g_1)`, `e_{n+1} = N(g_{n+1} - sum_i <g_{n+1}, e_i>_P e_i)`.
///
/// Inputs whose residual a-norm stays below `dep_tol` times the scale of the
/// input everywhere are reported as dependent with their index.
pub fn gram_schmidt(
    inputs: &[SampledSignal],
    period: Period,
    dep_tol: f64,
) -> Result<OrthoSystem> {
    let mut members: Vec<SampledSignal> = Vec::with_capacity(inputs.len());
    for (index, g) in inputs.iter().enumerate() {
        let mut h = g.clone();
        for e in &members {
            let coeff = bracket(g, e, period)?;
            h = h.sub(&scale_by_periodic(e, &coeff)?)?;
        }
        let hnorm = a_norm(&h, period);
        let scale = a_norm(g, period).max_abs();
        if hnorm.max_abs() <= dep_tol * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::ADependent(index));
        }
        members.push(normalize_a(&h, period, DEFAULT_ZERO_EPS));
    }
    Ok(OrthoSystem::new_unchecked(members, period))
}

/// Pointwise Bessel defect `<f,f>_P - sum_n |<f,g_n>_P|^2`.
///
/// Nonnegative for an a-orthonormal system; identically zero when `f` lies in
/// the system's modulation span.
pub fn bessel_defect(f: &SampledSignal, sys: &OrthoSystem) -> Result<PeriodicSignal> {
    let mut defect = bracket(f, f, sys.period())?;
    for g in sys.members() {
        let b = bracket(f, g, sys.period())?;
        let sq: Vec<Complex64> = b
            .samples()
            .iter()
            .map(|z| Complex64::new(z.norm_sqr(), 0.0))
            .collect();
        defect = defect.sub(&PeriodicSignal::new(*f.grid(), sq));
    }
    Ok(defect)
}

/// Orthogonal projection of `f` onto the modulation span of a single window:
/// `P f = <f,g>_P / <g,g>_P * g`, with the quotient set to zero wherever the
/// window's pointwise norm vanishes.
pub fn project_modulation_span(
    f: &SampledSignal,
    g: &SampledSignal,
    period: Period,
) -> Result<SampledSignal> {
    let denom = bracket(g, g, period)?;
    let peak = denom.max_abs();
    if peak == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let numer = bracket(f, g, period)?;
    let cutoff = DEFAULT_ZERO_EPS * peak;
    let quotient: Vec<Complex64> = numer
        .samples()
        .iter()
        .zip(denom.samples())
        .map(|(n, d)| {
            if d.re > cutoff {
                n / d.re
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    scale_by_periodic(g, &PeriodicSignal::new(*f.grid(), quotient))
}

/// Orthogonal projection onto the joint modulation span of an a-orthonormal
/// system: `P f = sum_n <f,g_n>_P g_n`.
pub fn project_multi(f: &SampledSignal, sys: &OrthoSystem) -> Result<SampledSignal> {
    let mut out = SampledSignal::zero(*f.grid());
    for g in sys.members() {
        let coeff = bracket(f, g, sys.period())?;
        out = out.add(&scale_by_periodic(g, &coeff)?)?;
    }
    Ok(out)
}

/// Recovers the representing window of a factorable operator
/// `L : signal -> periodic` as `g = sum_k conj(ext(L(cell_k))) * cell_k`,
/// where `cell_k` is the indicator of the k-th period cell and `k` ranges
/// over the caller-supplied window.
///
/// Factorability (`L` commutes with the period's modulations) is spot-checked
/// on probe signals first; operators that fail the check are rejected.
pub fn riesz_representer<F>(
    op: F,
    grid: LatticeGrid,
    period: Period,
    k_range: std::ops::RangeInclusive<i64>,
) -> Result<SampledSignal>
where
    F: Fn(&SampledSignal) -> Result<PeriodicSignal>,
{
    let steps = period.steps(&grid);
    let tol = 1e-8;

    // Probe: a ramp over two adjacent cells catches shift-variant operators.
    let k0 = *k_range.start();
    let probe_samples: Vec<Complex64> = (0..2 * steps)
        .map(|j| Complex64::new(1.0 + j as f64 / steps as f64, 0.3))
        .collect();
    let probe = SampledSignal::new(grid, k0 * steps, probe_samples);
    let base = op(&probe)?;
    let scale = base.max_abs().max(1.0);
    for m in [1i64, 2] {
        let modulated_probe = modulate_by_period(&probe, m, period);
        let lhs = op(&modulated_probe)?;
        let rhs = base.modulated(m);
        let residual = lhs
            .samples()
            .iter()
            .zip(rhs.samples())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        if residual > tol * scale {
            return Err(Error::NotFactorable { residual, tol: tol * scale });
        }
    }

    let mut out = SampledSignal::zero(grid);
    for k in k_range {
        let cell = indicator(grid, k * steps, steps as usize);
        let lk = op(&cell)?;
        out = out.add(&scale_by_periodic(&cell, &lk.conj())?)?;
    }
    Ok(out)
}

/// Modulation at frequency `m / P` for the given bracket period: these are
/// exactly the modulations a P-factorable operator must commute with.
pub fn modulate_by_period(f: &SampledSignal, m: i64, period: Period) -> SampledSignal {
    use crate::signal::{modulate, ModUnit};
    match period {
        Period::ShiftA => modulate(f, m, ModUnit::InvA),
        Period::InvB => modulate(f, m, ModUnit::ModB),
    }
}

/// Convenience: the translates `T_{k a} g` (or `T_{k/b} g`) for `k` in a range.
pub fn translates(
    g: &SampledSignal,
    unit: ShiftUnit,
    range: std::ops::RangeInclusive<i64>,
) -> Vec<SampledSignal> {
    range.map(|k| translate(g, k, unit)).collect()
}
