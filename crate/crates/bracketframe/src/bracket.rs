//! The bracket (a-pointwise) inner product calculus.
//!
//! `<f,g>_a(t) = sum_n f(t-na) conj(g(t-na))` is an a-periodic function, here
//! materialized as one stored period. Supports are compact so every sum is
//! exactly finite; the period integral of a bracket reproduces the plain L2
//! inner product without quadrature error.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal::{Period, PeriodicSignal, SampledSignal};

/// Relative threshold used when a pointwise a-norm must be treated as zero.
pub const DEFAULT_ZERO_EPS: f64 = 1e-12;

/// Bracket product `<f,g>_P(t) = sum_n f(t-nP) conj(g(t-nP))` with period
/// `P = a` or `P = 1/b`, stored as one period of `P` grid steps.
pub fn bracket(f: &SampledSignal, g: &SampledSignal, period: Period) -> Result<PeriodicSignal> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    let steps = period.steps(f.grid());
    let mut out = vec![Complex64::new(0.0, 0.0); steps as usize];
    let lo = f.start_step().max(g.start_step());
    let hi = f.end_step().min(g.end_step());
    for i in lo..hi {
        let r = i.rem_euclid(steps) as usize;
        out[r] += f.samples()[(i - f.offset()) as usize]
            * g.samples()[(i - g.offset()) as usize].conj();
    }
    Ok(PeriodicSignal::new(*f.grid(), out))
}

/// Pointwise a-norm `|f|_P(t) = sqrt(<f,f>_P(t))`, real and nonnegative.
pub fn a_norm(f: &SampledSignal, period: Period) -> PeriodicSignal {
    let self_bracket = bracket(f, f, period).expect("same signal, same grid");
    let samples = self_bracket
        .samples()
        .iter()
        .map(|z| Complex64::new(z.re.max(0.0).sqrt(), 0.0))
        .collect();
    PeriodicSignal::new(*f.grid(), samples)
}

/// Pointwise normalization: divide each sample by the a-norm at its position,
/// zeroing samples where the a-norm does not exceed `eps * max a-norm`.
pub fn normalize_a(f: &SampledSignal, period: Period, eps: f64) -> SampledSignal {
    let norm = a_norm(f, period);
    let cutoff = eps * norm.max_abs();
    let samples = f
        .samples()
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let i = f.offset() + j as i64;
            let n = norm.value_at_step(i).re;
            if n > cutoff {
                z / n
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    SampledSignal::new(*f.grid(), f.offset(), samples)
}

/// Multiply a signal pointwise by the periodic extension of `h`.
///
/// Satisfies `<f h, g>_P = h <f,g>_P` exactly on the grid whenever the period
/// of `h` divides the bracket period.
pub fn scale_by_periodic(f: &SampledSignal, h: &PeriodicSignal) -> Result<SampledSignal> {
    if f.grid() != h.grid() {
        return Err(Error::GridMismatch);
    }
    let samples = f
        .samples()
        .iter()
        .enumerate()
        .map(|(j, z)| z * h.value_at_step(f.offset() + j as i64))
        .collect();
    Ok(SampledSignal::new(*f.grid(), f.offset(), samples))
}

/// Grid min and max of a real-valued periodic function, optionally restricted
/// to its support `{t : h(t) > support_eps * max h}`.
///
/// These are grid approximations of the essential bounds; no measure theory
/// happens here.
pub fn ess_range(h: &PeriodicSignal, support_eps: Option<f64>) -> Result<(f64, f64)> {
    let max_imag = h.max_imag_abs();
    if max_imag > 1e-10 {
        return Err(Error::NotRealValued { max_imag });
    }
    let values: Vec<f64> = h.samples().iter().map(|z| z.re).collect();
    let filtered: Vec<f64> = match support_eps {
        Some(eps) => {
            let cutoff = eps * values.iter().cloned().fold(f64::MIN, f64::max);
            values.iter().cloned().filter(|v| *v > cutoff).collect()
        }
        None => values,
    };
    if filtered.is_empty() {
        // Nothing above the support threshold: the function is flat zero.
        return Ok((0.0, 0.0));
    }
    let inf = filtered.iter().cloned().fold(f64::INFINITY, f64::min);
    let sup = filtered.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((inf, sup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{inner_product, translate, LatticeGrid, ShiftUnit};
    use crate::window::{gaussian, indicator};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_signal(
        grid: LatticeGrid,
        offset: i64,
        len: usize,
        seed: u64,
    ) -> SampledSignal {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..len)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        SampledSignal::new(grid, offset, samples)
    }

    /// Direct-summation oracle: sum_{|n| <= n_max} f(t-nP) conj(g(t-nP)) at a
    /// single absolute step, evaluated straight from the definition.
    fn bracket_point_oracle(
        f: &SampledSignal,
        g: &SampledSignal,
        period_steps: i64,
        step: i64,
        n_max: i64,
    ) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for n in -n_max..=n_max {
            let i = step + n * period_steps;
            acc += f.value_at_step(i) * g.value_at_step(i).conj();
        }
        acc
    }

    #[test]
    fn indicator_brackets_are_constant() {
        let g = LatticeGrid::unit(64).unwrap();
        let chi1 = indicator(g, 0, 64);
        let b1 = bracket(&chi1, &chi1, Period::ShiftA).unwrap();
        assert!(b1.samples().iter().all(|z| *z == c(1.0, 0.0)));

        let chi2 = indicator(g, 0, 128);
        let b2 = bracket(&chi2, &chi2, Period::ShiftA).unwrap();
        assert!(b2.samples().iter().all(|z| *z == c(2.0, 0.0)));
    }

    #[test]
    fn gaussian_bracket_matches_direct_sum_oracle() {
        let g = LatticeGrid::unit(64).unwrap();
        let f = gaussian(g, 1.0, 8.0);
        let b = bracket(&f, &f, Period::ShiftA).unwrap();
        // sum_n e^{-2n^2} = 1.2713415221890153... at t = 0
        let at0 = bracket_point_oracle(&f, &f, 64, 0, 10);
        assert_relative_eq!(b.value_at_step(0).re, at0.re, max_relative = 1e-14);
        assert!((b.value_at_step(0).re - 1.271_341_522_189_015).abs() < 1e-12);
        // sum_n e^{-2(n-1/2)^2} = 1.2352867658538900... at t = 1/2 (step 32)
        let at_half = bracket_point_oracle(&f, &f, 64, 32, 10);
        assert_relative_eq!(b.value_at_step(32).re, at_half.re, max_relative = 1e-14);
        assert!((b.value_at_step(32).re - 1.235_286_765_853_89).abs() < 1e-12);
    }

    #[test]
    fn period_integral_reproduces_inner_product() {
        let g = LatticeGrid::new(64, 32, 96).unwrap();
        for seed in 0..5u64 {
            let f = random_signal(g, -37, 200, seed);
            let h = random_signal(g, -11, 150, seed + 100);
            for period in [Period::ShiftA, Period::InvB] {
                let b = bracket(&f, &h, period).unwrap();
                let direct = inner_product(&f, &h).unwrap();
                let diff = (b.integral() - direct).norm();
                assert!(diff <= 1e-10 * direct.norm().max(1.0), "diff {diff:e}");
            }
        }
    }

    #[test]
    fn a_norm_basics() {
        let g = LatticeGrid::unit(32).unwrap();
        let chi = indicator(g, 0, 32);
        let n = a_norm(&chi, Period::ShiftA);
        assert!(n.samples().iter().all(|z| *z == c(1.0, 0.0)));

        let zero = SampledSignal::zero(g);
        let nz = a_norm(&zero, Period::ShiftA);
        assert!(nz.samples().iter().all(|z| *z == c(0.0, 0.0)));

        let f = gaussian(g, 1.0, 8.0);
        let nf = a_norm(&f, Period::ShiftA);
        assert!((nf.value_at_step(0).re - 1.271_341_522_189_015f64.sqrt()).abs() < 1e-12);
        // || |f|_a ||_{L2[0,a]} = ||f||_{L2}
        let norm_sq: f64 =
            g.dt() * nf.samples().iter().map(|z| z.re * z.re).sum::<f64>();
        assert_relative_eq!(norm_sq, f.l2_norm_sq(), max_relative = 1e-12);
    }

    #[test]
    fn normalize_constant_bracket() {
        let g = LatticeGrid::unit(32).unwrap();
        let chi2 = indicator(g, 0, 64);
        let n = normalize_a(&chi2, Period::ShiftA, DEFAULT_ZERO_EPS);
        for z in n.samples() {
            assert_relative_eq!(z.re, 1.0 / 2.0f64.sqrt(), max_relative = 1e-15);
        }
    }

    #[test]
    fn normalize_is_idempotent_and_flattens_bracket() {
        let g = LatticeGrid::unit(64).unwrap();
        let f = gaussian(g, 1.0, 8.0);
        let n1 = normalize_a(&f, Period::ShiftA, DEFAULT_ZERO_EPS);
        let n2 = normalize_a(&n1, Period::ShiftA, DEFAULT_ZERO_EPS);
        for (a, b) in n1.samples().iter().zip(n2.samples()) {
            assert!((a - b).norm() < 1e-12);
        }
        let b = bracket(&n1, &n1, Period::ShiftA).unwrap();
        for z in b.samples() {
            assert!((z.re - 1.0).abs() < 1e-10 && z.im.abs() < 1e-14);
        }
    }

    #[test]
    fn normalized_l2_norm_equals_support_measure() {
        // ||N_a(f)||^2 = measure of supp |f|_a inside one period.
        let g = LatticeGrid::unit(32).unwrap();
        let half = indicator(g, 0, 16); // chi_[0,1/2): bracket support is half the period
        let n = normalize_a(&half, Period::ShiftA, DEFAULT_ZERO_EPS);
        assert_relative_eq!(n.l2_norm_sq(), 0.5, max_relative = 1e-12);

        let full = gaussian(g, 1.0, 8.0);
        let nf = normalize_a(&full, Period::ShiftA, DEFAULT_ZERO_EPS);
        assert_relative_eq!(nf.l2_norm_sq(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn scale_by_periodic_factors_out_of_brackets() {
        let g = LatticeGrid::new(32, 16, 64).unwrap();
        let f = random_signal(g, -20, 90, 11);
        let h_sig = random_signal(g, 0, 16, 12);
        let h = bracket(&h_sig, &h_sig, Period::ShiftA).unwrap(); // any periodic factor
        let gg = random_signal(g, -7, 70, 13);

        let fh = scale_by_periodic(&f, &h).unwrap();
        let lhs = bracket(&fh, &gg, Period::ShiftA).unwrap();
        let rhs = bracket(&f, &gg, Period::ShiftA).unwrap().mul(&h);
        let err = lhs
            .samples()
            .iter()
            .zip(rhs.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-12 * lhs.max_abs().max(1.0), "err {err:e}");

        // h == 1 leaves the signal alone; h == c scales the bracket by c.
        let one = PeriodicSignal::constant(g, 16, c(1.0, 0.0));
        assert_eq!(scale_by_periodic(&f, &one).unwrap(), f);
        let two = PeriodicSignal::constant(g, 16, c(2.0, 0.0));
        let b2 = bracket(&scale_by_periodic(&f, &two).unwrap(), &gg, Period::ShiftA).unwrap();
        let b1 = bracket(&f, &gg, Period::ShiftA).unwrap();
        for (x, y) in b2.samples().iter().zip(b1.samples()) {
            assert!((x - 2.0 * y).norm() < 1e-12 * b1.max_abs().max(1.0));
        }
    }

    #[test]
    fn ess_range_cases() {
        let g = LatticeGrid::unit(64).unwrap();
        let one = PeriodicSignal::constant(g, 64, c(1.0, 0.0));
        assert_eq!(ess_range(&one, None).unwrap(), (1.0, 1.0));

        let f = gaussian(g, 1.0, 8.0);
        let b = bracket(&f, &f, Period::ShiftA).unwrap();
        let (inf, sup) = ess_range(&b, None).unwrap();
        assert!((inf - 1.235_286_765_853_89).abs() < 1e-12);
        assert!((sup - 1.271_341_522_189_015).abs() < 1e-12);

        // chi_[0,1/2): (0,1) over the full period, (1,1) on the support.
        let half = indicator(g, 0, 32);
        let hb = bracket(&half, &half, Period::ShiftA).unwrap();
        assert_eq!(ess_range(&hb, None).unwrap(), (0.0, 1.0));
        assert_eq!(ess_range(&hb, Some(1e-9)).unwrap(), (1.0, 1.0));

        let complex = PeriodicSignal::constant(g, 4, c(0.0, 1.0));
        assert!(matches!(
            ess_range(&complex, None),
            Err(Error::NotRealValued { .. })
        ));

        // Flat zero with a support filter: empty support, range (0, 0).
        let zero = PeriodicSignal::constant(g, 4, c(0.0, 0.0));
        assert_eq!(ess_range(&zero, Some(1e-9)).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn translation_covariance() {
        // <T_s f, T_s g>_P = T_s <f,g>_P and <T_s f, g>_P = T_s <f, T_{-s} g>_P
        let g = LatticeGrid::new(32, 24, 40).unwrap();
        let f = random_signal(g, -15, 70, 21);
        let h = random_signal(g, -3, 65, 22);
        for period in [Period::ShiftA, Period::InvB] {
            let steps = period.steps(&g);
            for s in [1i64, 7, -13] {
                let tf = translate(&f, s, ShiftUnit::RawSteps);
                let th = translate(&h, s, ShiftUnit::RawSteps);
                let lhs = bracket(&tf, &th, period).unwrap();
                let rhs = bracket(&f, &h, period).unwrap().rotated(s.rem_euclid(steps));
                assert!(lhs
                    .samples()
                    .iter()
                    .zip(rhs.samples())
                    .all(|(a, b)| (a - b).norm() < 1e-12));

                let lhs2 = bracket(&tf, &h, period).unwrap();
                let rhs2 = bracket(&f, &translate(&h, -s, ShiftUnit::RawSteps), period)
                    .unwrap()
                    .rotated(s.rem_euclid(steps));
                assert!(lhs2
                    .samples()
                    .iter()
                    .zip(rhs2.samples())
                    .all(|(a, b)| (a - b).norm() < 1e-12));
            }
        }
    }

    #[test]
    fn pointwise_cauchy_schwarz_and_parallelogram() {
        let g = LatticeGrid::unit(64).unwrap();
        for seed in 0..8u64 {
            let f = random_signal(g, -40, 170, seed * 3 + 1);
            let h = random_signal(g, -25, 140, seed * 3 + 2);
            let fh = bracket(&f, &h, Period::ShiftA).unwrap();
            let nf = a_norm(&f, Period::ShiftA);
            let nh = a_norm(&h, Period::ShiftA);
            for r in 0..64 {
                let lhs = fh.samples()[r].norm();
                let rhs = nf.samples()[r].re * nh.samples()[r].re;
                assert!(lhs <= rhs + 1e-12, "CS violated: {lhs} > {rhs}");
            }
            // parallelogram law, pointwise
            let sum = f.add(&h).unwrap();
            let diff = f.sub(&h).unwrap();
            let bs = bracket(&sum, &sum, Period::ShiftA).unwrap();
            let bd = bracket(&diff, &diff, Period::ShiftA).unwrap();
            let bf = bracket(&f, &f, Period::ShiftA).unwrap();
            let bh = bracket(&h, &h, Period::ShiftA).unwrap();
            for r in 0..64 {
                let lhs = bs.samples()[r].re + bd.samples()[r].re;
                let rhs = 2.0 * (bf.samples()[r].re + bh.samples()[r].re);
                assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn dilation_exchange_between_periods() {
        // <f,g>_a = (1/sqrt(ab)) D_{ab} <D_{1/ab} f, D_{1/ab} g>_{1/b}
        // Lattice (L,p,q) = (64,64,128): ab = 1/2, 1/(ab) = 2.
        use crate::signal::dilate;
        let g = LatticeGrid::new(64, 64, 128).unwrap();
        let f = random_signal(g, -30, 120, 31);
        let h = random_signal(g, -10, 100, 32);
        let lhs = bracket(&f, &h, Period::ShiftA).unwrap();

        let df = dilate(&f, 2, 1).unwrap(); // D_{1/(ab)} with 1/(ab) = 2
        let dh = dilate(&h, 2, 1).unwrap();
        let inner = bracket(&df, &dh, Period::InvB).unwrap();
        // D_{ab} halves the argument back: on the coarse grid (L' = 32) the
        // inner bracket has period q' = 64 steps; D_{ab} followed by the
        // 1/sqrt(ab) amplitude is index-exact, total factor (1/ab).
        let ab = 0.5;
        let p_steps = g.p() as usize;
        let mut err = 0.0f64;
        for r in 0..p_steps {
            let want = inner.samples()[r] / ab;
            err = err.max((lhs.samples()[r] - want).norm());
        }
        assert!(err <= 1e-10 * lhs.max_abs().max(1.0), "err {err:e}");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn signal_strategy(seed_tag: u8) -> impl Strategy<Value = SampledSignal> {
            (
                proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..120),
                -60i64..60,
            )
                .prop_map(move |(vals, offset)| {
                    let grid = LatticeGrid::new(16, 8, 24).unwrap();
                    let samples = vals.iter().map(|(re, im)| c(*re, *im)).collect();
                    let _ = seed_tag;
                    SampledSignal::new(grid, offset, samples)
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn bracket_conjugate_symmetry(f in signal_strategy(0), g in signal_strategy(1)) {
                let fg = bracket(&f, &g, Period::ShiftA).unwrap();
                let gf = bracket(&g, &f, Period::ShiftA).unwrap();
                let err = fg
                    .samples()
                    .iter()
                    .zip(gf.samples())
                    .map(|(a, b)| (a - b.conj()).norm())
                    .fold(0.0, f64::max);
                prop_assert!(err <= 1e-12 * fg.max_abs().max(1.0));
            }

            #[test]
            fn bracket_linear_in_first_argument(
                f in signal_strategy(0),
                g in signal_strategy(1),
                h in signal_strategy(2),
                re in -2.0f64..2.0,
                im in -2.0f64..2.0,
            ) {
                let alpha = c(re, im);
                let lhs = bracket(&f.scaled(alpha).add(&h).unwrap(), &g, Period::InvB).unwrap();
                let rhs = bracket(&f, &g, Period::InvB).unwrap().scaled(alpha)
                    .add(&bracket(&h, &g, Period::InvB).unwrap());
                let err = lhs
                    .samples()
                    .iter()
                    .zip(rhs.samples())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                prop_assert!(err <= 1e-11 * lhs.max_abs().max(1.0));
            }

            #[test]
            fn period_integral_matches_inner_product(
                f in signal_strategy(0),
                g in signal_strategy(1),
            ) {
                let b = bracket(&f, &g, Period::ShiftA).unwrap();
                let direct = inner_product(&f, &g).unwrap();
                prop_assert!((b.integral() - direct).norm() <= 1e-11 * direct.norm().max(1.0));
            }
        }
    }
}
