//! Built-in window generators.

use num_complex::Complex64;

use crate::signal::{LatticeGrid, SampledSignal};

/// Indicator of `[start_step*dt, (start_step+len_steps)*dt)`.
pub fn indicator(grid: LatticeGrid, start_step: i64, len_steps: usize) -> SampledSignal {
    SampledSignal::new(grid, start_step, vec![Complex64::new(1.0, 0.0); len_steps])
}

/// Gaussian `e^{-c t^2}` sampled on `[-half_width, half_width]`, endpoints
/// included. The truncation radius is the caller's choice; nothing is
/// inferred from the decay.
pub fn gaussian(grid: LatticeGrid, c: f64, half_width: f64) -> SampledSignal {
    let hw_steps = (half_width * grid.l() as f64).round() as i64;
    let dt = grid.dt();
    let samples = (-hw_steps..=hw_steps)
        .map(|i| {
            let t = i as f64 * dt;
            Complex64::new((-c * t * t).exp(), 0.0)
        })
        .collect();
    SampledSignal::new(grid, -hw_steps, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_symmetric_and_peaks_at_zero() {
        let g = LatticeGrid::unit(64).unwrap();
        let f = gaussian(g, 1.0, 8.0);
        assert_eq!(f.start_step(), -512);
        assert_eq!(f.len(), 1025);
        assert_eq!(f.value_at_step(0).re, 1.0);
        assert_eq!(f.value_at_step(64), f.value_at_step(-64));
        assert!((f.value_at_step(64).re - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn indicator_support() {
        let g = LatticeGrid::unit(4).unwrap();
        let chi = indicator(g, -2, 6);
        assert_eq!(chi.start_step(), -2);
        assert_eq!(chi.end_step(), 4);
        assert_eq!(chi.value_at_step(-3).re, 0.0);
        assert_eq!(chi.value_at_step(3).re, 1.0);
    }
}
