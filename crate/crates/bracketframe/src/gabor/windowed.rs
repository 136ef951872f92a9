//! Preallocated kernel for the frame operator restricted to a step window.
//!
//! The spectral estimators and the reconstruction solver apply the operator
//! thousands of times on the same window; rebuilding the translated windows
//! per call would be allocation-bound. This caches them once and applies
//!
//! `(S f)(i) = b^{-1} sum_n <f, T_{na} g>_{1/b}(i mod q) * (T_{na} g)(i)`
//!
//! with two reusable scratch walks per translate, restricting the output to
//! the window. Identical to composing the public compressed operator with
//! embedding and restriction.

use num_complex::Complex64;

use super::WhSystem;

pub(crate) struct WindowedOperator {
    lo: i64,
    len: usize,
    inv_b: f64,
    q: i64,
    /// Start step and samples of each `T_{na} g` meeting the window.
    translates: Vec<(i64, Vec<Complex64>)>,
}

impl WindowedOperator {
    pub(crate) fn new(sys: &WhSystem, window: (i64, i64)) -> Self {
        let (lo, hi) = window;
        assert!(hi > lo, "window must be nonempty");
        let grid = sys.grid();
        let sys_w = sys.extended_to_cover(lo, hi);
        let g = sys_w.window();
        let translates = sys_w
            .n_range()
            .map(|n| (g.start_step() + n * grid.p(), g.samples().to_vec()))
            .collect();
        WindowedOperator {
            lo,
            len: (hi - lo) as usize,
            inv_b: grid.inv_modulation(),
            q: grid.q(),
            translates,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.len
    }

    pub(crate) fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.len);
        let mut out = vec![Complex64::new(0.0, 0.0); self.len];
        let mut fiber = vec![Complex64::new(0.0, 0.0); self.q as usize];
        for (start, tg) in &self.translates {
            for z in fiber.iter_mut() {
                *z = Complex64::new(0.0, 0.0);
            }
            for (j, v) in tg.iter().enumerate() {
                let k = start + j as i64 - self.lo;
                if k >= 0 && (k as usize) < self.len {
                    let r = (start + j as i64).rem_euclid(self.q) as usize;
                    fiber[r] += x[k as usize] * v.conj();
                }
            }
            for (j, v) in tg.iter().enumerate() {
                let i = start + j as i64;
                let k = i - self.lo;
                if k >= 0 && (k as usize) < self.len {
                    let r = i.rem_euclid(self.q) as usize;
                    out[k as usize] += self.inv_b * fiber[r] * v;
                }
            }
        }
        out
    }

}
