//! Grid-aware sampled signals and the unitary translation, modulation and
//! dilation operators acting on them.
//!
//! Everything lives on a rational lattice: base step `dt = 1/L`, shift length
//! `a = p/L`, modulation period `1/b = q/L`. Keeping `(L, p, q)` as integers
//! makes every translate by `a` or `1/b` an exact index shift; floating point
//! enters only through sample values and quadrature. Quadrature is the
//! left-endpoint Riemann sum `dt * sum`, which turns the discrete Parseval
//! identities used downstream into exact identities on the grid.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

/// Rational lattice parameters: grid density `L`, shift steps `p`, modulation
/// period steps `q`.
///
/// `dt = 1/L`, `a = p/L`, `1/b = q/L` (so `b = L/q`); `a` and `1/b` are exact
/// grid multiples by construction and `ab = p/q` as an exact rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeGrid {
    l: i64,
    p: i64,
    q: i64,
}

impl LatticeGrid {
    pub fn new(l: i64, p: i64, q: i64) -> Result<Self> {
        if l <= 0 || p <= 0 || q <= 0 {
            return Err(Error::InvalidLattice);
        }
        Ok(LatticeGrid { l, p, q })
    }

    /// Critical-style lattice with `p = q = L` (`a = 1/b = 1`).
    pub fn unit(l: i64) -> Result<Self> {
        Self::new(l, l, l)
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    /// Shift length in grid steps (`a = p/L`).
    pub fn p(&self) -> i64 {
        self.p
    }

    /// Modulation period in grid steps (`1/b = q/L`).
    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.l as f64
    }

    /// The shift parameter `a = p/L`.
    pub fn shift(&self) -> f64 {
        self.p as f64 / self.l as f64
    }

    /// The modulation parameter `b = L/q`.
    pub fn modulation(&self) -> f64 {
        self.l as f64 / self.q as f64
    }

    /// The modulation period `1/b = q/L`.
    pub fn inv_modulation(&self) -> f64 {
        self.q as f64 / self.l as f64
    }

    /// `ab = p/q` reduced to lowest terms.
    pub fn ab_rational(&self) -> (i64, i64) {
        let g = gcd(self.p, self.q);
        (self.p / g, self.q / g)
    }

    /// Exact test for the critical density `ab = 1`.
    pub fn is_critical(&self) -> bool {
        self.p == self.q
    }
}

/// Unit for translations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftUnit {
    /// Multiples of the shift length `a` (`p` grid steps).
    ShiftA,
    /// Multiples of the modulation period `1/b` (`q` grid steps).
    InvB,
    /// Raw grid steps.
    RawSteps,
}

/// Frequency unit for modulations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModUnit {
    /// Multiples of `b = L/q`: sample at absolute step `i` picks up `e^{2*pi*i*m*i/q}`.
    ModB,
    /// Multiples of `1/a = L/p`.
    InvA,
}

/// Period selector for bracket products and other periodized quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Period {
    /// Period `a` (`p` grid steps).
    ShiftA,
    /// Period `1/b` (`q` grid steps).
    InvB,
}

impl Period {
    pub fn steps(&self, grid: &LatticeGrid) -> i64 {
        match self {
            Period::ShiftA => grid.p(),
            Period::InvB => grid.q(),
        }
    }

    pub fn length(&self, grid: &LatticeGrid) -> f64 {
        self.steps(grid) as f64 * grid.dt()
    }
}

/// A compactly supported signal sampled on a lattice.
///
/// Sample `j` sits at `t = (offset + j) * dt`; the signal vanishes outside
/// `[offset*dt, (offset+len)*dt)`. Values are immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSignal {
    grid: LatticeGrid,
    offset: i64,
    samples: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(grid: LatticeGrid, offset: i64, samples: Vec<Complex64>) -> Self {
        SampledSignal { grid, offset, samples }
    }

    pub fn zero(grid: LatticeGrid) -> Self {
        SampledSignal { grid, offset: 0, samples: Vec::new() }
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// First absolute step of the support.
    pub fn start_step(&self) -> i64 {
        self.offset
    }

    /// One past the last absolute step of the support.
    pub fn end_step(&self) -> i64 {
        self.offset + self.samples.len() as i64
    }

    /// Value at absolute grid step `i` (zero outside the stored support).
    pub fn value_at_step(&self, i: i64) -> Complex64 {
        let j = i - self.offset;
        if j < 0 || j >= self.samples.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.samples[j as usize]
        }
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.grid.dt() * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn same_grid(&self, other: &SampledSignal) -> bool {
        self.grid == other.grid
    }

    pub fn scaled(&self, c: Complex64) -> SampledSignal {
        SampledSignal {
            grid: self.grid,
            offset: self.offset,
            samples: self.samples.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &SampledSignal) -> Result<SampledSignal> {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &SampledSignal) -> Result<SampledSignal> {
        self.combine(other, Complex64::new(-1.0, 0.0))
    }

    fn combine(&self, other: &SampledSignal, w: Complex64) -> Result<SampledSignal> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        if self.is_empty() {
            return Ok(other.scaled(w));
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let start = self.start_step().min(other.start_step());
        let end = self.end_step().max(other.end_step());
        let mut samples = vec![Complex64::new(0.0, 0.0); (end - start) as usize];
        for (j, z) in self.samples.iter().enumerate() {
            samples[(self.offset - start) as usize + j] += z;
        }
        for (j, z) in other.samples.iter().enumerate() {
            samples[(other.offset - start) as usize + j] += w * z;
        }
        Ok(SampledSignal { grid: self.grid, offset: start, samples })
    }

    /// Drops zero margins so that support bounds are tight. Used before
    /// support-driven range computations; comparisons never depend on it.
    pub fn trimmed(&self, tol: f64) -> SampledSignal {
        let first = self.samples.iter().position(|z| z.norm() > tol);
        let last = self.samples.iter().rposition(|z| z.norm() > tol);
        match (first, last) {
            (Some(f), Some(l)) => SampledSignal {
                grid: self.grid,
                offset: self.offset + f as i64,
                samples: self.samples[f..=l].to_vec(),
            },
            _ => SampledSignal::zero(self.grid),
        }
    }
}

/// One period of a periodic function on the grid; sample `r` sits at
/// `t = r*dt` and evaluation elsewhere wraps modulo the period.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicSignal {
    grid: LatticeGrid,
    samples: Vec<Complex64>,
}

impl PeriodicSignal {
    pub fn new(grid: LatticeGrid, samples: Vec<Complex64>) -> Self {
        assert!(!samples.is_empty(), "a periodic signal needs a positive period");
        PeriodicSignal { grid, samples }
    }

    pub fn constant(grid: LatticeGrid, period_steps: i64, value: Complex64) -> Self {
        PeriodicSignal::new(grid, vec![value; period_steps as usize])
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn period_steps(&self) -> i64 {
        self.samples.len() as i64
    }

    /// Period length `P = period_steps * dt`.
    pub fn period(&self) -> f64 {
        self.samples.len() as f64 * self.grid.dt()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Value at absolute grid step `i`, wrapping modulo the period.
    pub fn value_at_step(&self, i: i64) -> Complex64 {
        let p = self.samples.len() as i64;
        self.samples[i.rem_euclid(p) as usize]
    }

    /// Translate by `s` grid steps: `(T_s h)(t) = h(t - s*dt)`.
    pub fn rotated(&self, s: i64) -> PeriodicSignal {
        let p = self.samples.len() as i64;
        let samples = (0..p)
            .map(|r| self.samples[(r - s).rem_euclid(p) as usize])
            .collect();
        PeriodicSignal { grid: self.grid, samples }
    }

    /// Modulate by `e^{2*pi*i*m*r/P}` (frequency `m/P`), staying periodic.
    pub fn modulated(&self, m: i64) -> PeriodicSignal {
        let p = self.samples.len() as i64;
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(r, z)| z * unit_phase(m * r as i64, p))
            .collect();
        PeriodicSignal { grid: self.grid, samples }
    }

    pub fn conj(&self) -> PeriodicSignal {
        PeriodicSignal {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> PeriodicSignal {
        PeriodicSignal {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &PeriodicSignal) -> PeriodicSignal {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PeriodicSignal) -> PeriodicSignal {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &PeriodicSignal) -> PeriodicSignal {
        self.zip(other, |a, b| a * b)
    }

    fn zip(
        &self,
        other: &PeriodicSignal,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> PeriodicSignal {
        assert_eq!(
            self.samples.len(),
            other.samples.len(),
            "periodic operands must share a period"
        );
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| f(*a, *b))
            .collect();
        PeriodicSignal { grid: self.grid, samples }
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Quadrature over one period: `dt * sum`.
    pub fn integral(&self) -> Complex64 {
        self.grid.dt() * self.samples.iter().sum::<Complex64>()
    }
}

/// `e^{2*pi*i*num/den}` with the angle reduced exactly in integer arithmetic
/// first, so that full-period phases alias to exactly 1.
pub(crate) fn unit_phase(num: i64, den: i64) -> Complex64 {
    let r = (num as i128).rem_euclid(den as i128) as f64 / den as f64;
    Complex64::from_polar(1.0, TAU * r)
}

/// Translation `T f(x) = f(x - k*unit)`; exact offset arithmetic, no
/// interpolation.
pub fn translate(f: &SampledSignal, k: i64, unit: ShiftUnit) -> SampledSignal {
    let steps = match unit {
        ShiftUnit::ShiftA => k * f.grid().p(),
        ShiftUnit::InvB => k * f.grid().q(),
        ShiftUnit::RawSteps => k,
    };
    SampledSignal {
        grid: f.grid,
        offset: f.offset + steps,
        samples: f.samples.clone(),
    }
}

/// Modulation `E f(x) = e^{2*pi*i*(m*beta)*x} f(x)` with `beta = b` or `1/a`.
///
/// On the grid the phase at absolute step `i` is a rational rotation
/// (`m*i/q` or `m*i/p` turns), reduced exactly before the trig call, so
/// modulation indices alias with period `q` (resp. `p`) exactly.
pub fn modulate(f: &SampledSignal, m: i64, unit: ModUnit) -> SampledSignal {
    let den = match unit {
        ModUnit::ModB => f.grid().q(),
        ModUnit::InvA => f.grid().p(),
    };
    let samples = f
        .samples
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let i = f.offset + j as i64;
            z * unit_phase(m * i, den)
        })
        .collect();
    SampledSignal { grid: f.grid, offset: f.offset, samples }
}

/// Dilation `D f(x) = |c|^{-1/2} f(x/c)` with `c = num/den`, realized as an
/// exact change of grid density `L -> L*den/num`.
///
/// Sample contents are untouched apart from the amplitude factor: the signal
/// keeps its integer offset and length, only the step size changes. Lattice
/// steps `p, q` rescale along so shift and modulation lengths are preserved
/// as real numbers whenever they stay integral.
pub fn dilate(f: &SampledSignal, num: i64, den: i64) -> Result<SampledSignal> {
    if num <= 0 || den <= 0 {
        return Err(Error::IncompatibleDilation { num, den });
    }
    let g = f.grid();
    let map = |v: i64| -> Result<i64> {
        if (v * den) % num != 0 {
            Err(Error::IncompatibleDilation { num, den })
        } else {
            Ok(v * den / num)
        }
    };
    let grid = LatticeGrid::new(map(g.l())?, map(g.p())?, map(g.q())?)?;
    let amp = (den as f64 / num as f64).sqrt();
    Ok(SampledSignal {
        grid,
        offset: f.offset,
        samples: f.samples.iter().map(|z| z * amp).collect(),
    })
}

/// `<f, g> = dt * sum_j f_j conj(g_j)` over the overlapping support.
pub fn inner_product(f: &SampledSignal, g: &SampledSignal) -> Result<Complex64> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    let lo = f.start_step().max(g.start_step());
    let hi = f.end_step().min(g.end_step());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in lo..hi {
        acc += f.samples[(i - f.offset) as usize] * g.samples[(i - g.offset) as usize].conj();
    }
    Ok(f.grid().dt() * acc)
}

/// Wiener amalgam norm: sum over the blocks `[a*n, a*(n+1))` (each `a_steps`
/// grid steps, aligned to t = 0) of the max modulus inside the block.
pub fn wiener_amalgam_norm(g: &SampledSignal, a_steps: i64) -> f64 {
    assert!(a_steps > 0, "block length must be positive");
    let mut total = 0.0;
    let mut block = i64::MIN;
    let mut block_max = 0.0f64;
    for (j, z) in g.samples.iter().enumerate() {
        let i = g.offset + j as i64;
        let b = i.div_euclid(a_steps);
        if b != block {
            total += block_max;
            block = b;
            block_max = 0.0;
        }
        block_max = block_max.max(z.norm());
    }
    total + block_max
}
