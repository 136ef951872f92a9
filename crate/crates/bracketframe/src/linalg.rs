//! Small complex linear-algebra kernels shared by the spectral estimators:
//! conjugate gradients, power/inverse iteration and dense Hermitian extremes.
//!
//! Everything works on `Vec<Complex64>` with the plain (unweighted) dot
//! product; quadrature weights cancel in every Rayleigh quotient they would
//! appear in.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn axpy(y: &mut [Complex64], alpha: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale_in_place(x: &mut [Complex64], s: f64) {
    for xi in x.iter_mut() {
        *xi *= s;
    }
}

/// Deterministic pseudorandom start vector for the iterative solvers.
pub fn seeded_vector(n: usize, seed: u64) -> Vec<Complex64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Conjugate gradients for a Hermitian positive definite operator.
/// Converges when the residual drops below `tol * |b|`.
pub fn conjugate_gradient<A>(
    apply: A,
    b: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<Complex64>>
where
    A: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let n = b.len();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rsq = dot(&r, &r).re;
    for _ in 0..max_iter {
        if rsq.sqrt() <= tol * b_norm {
            return Ok(x);
        }
        let ap = apply(&p);
        let denom = dot(&p, &ap).re;
        if denom <= 0.0 {
            // Not positive definite on this subspace.
            return Err(Error::SingularFrameOperator { lambda_min: denom });
        }
        let alpha = rsq / denom;
        axpy(&mut x, Complex64::new(alpha, 0.0), &p);
        axpy(&mut r, Complex64::new(-alpha, 0.0), &ap);
        let rsq_new = dot(&r, &r).re;
        let beta = rsq_new / rsq;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + Complex64::new(beta, 0.0) * *pi;
        }
        rsq = rsq_new;
    }
    if rsq.sqrt() <= tol * b_norm {
        Ok(x)
    } else {
        Err(Error::NotConverged(max_iter))
    }
}

/// Largest eigenvalue of a Hermitian operator by power iteration; stops when
/// successive Rayleigh quotients differ by at most `tol` relatively.
pub fn power_iteration<A>(
    apply: A,
    n: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<(f64, Vec<Complex64>)>
where
    A: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let mut v = seeded_vector(n, seed);
    let v0 = norm(&v);
    scale_in_place(&mut v, 1.0 / v0);
    let mut lambda = 0.0f64;
    for it in 0..max_iter {
        let mut av = apply(&v);
        let new_lambda = dot(&av, &v).re;
        let an = norm(&av);
        if an == 0.0 {
            return Ok((0.0, v)); // operator annihilates the iterate
        }
        scale_in_place(&mut av, 1.0 / an);
        v = av;
        if it > 2 && (new_lambda - lambda).abs() <= tol * new_lambda.abs().max(1e-300) {
            return Ok((new_lambda, v));
        }
        lambda = new_lambda;
    }
    Err(Error::NotConverged(max_iter))
}

/// Smallest eigenvalue of a Hermitian positive definite operator by inverse
/// iteration, solving each inner system with conjugate gradients.
pub fn inverse_iteration<A>(
    apply: A,
    n: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<(f64, Vec<Complex64>)>
where
    A: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let mut v = seeded_vector(n, seed);
    let v0 = norm(&v);
    scale_in_place(&mut v, 1.0 / v0);
    let mut lambda = f64::INFINITY;
    let inner_tol = (tol * 1e-2).max(1e-14);
    for it in 0..max_iter {
        let mut y = conjugate_gradient(&apply, &v, inner_tol, 50 * n + 200)?;
        let yn = norm(&y);
        if yn == 0.0 {
            return Err(Error::SingularFrameOperator { lambda_min: 0.0 });
        }
        scale_in_place(&mut y, 1.0 / yn);
        let av = apply(&y);
        let new_lambda = dot(&av, &y).re;
        v = y;
        if it > 1 && (new_lambda - lambda).abs() <= tol * new_lambda.abs().max(1e-300) {
            return Ok((new_lambda, v));
        }
        lambda = new_lambda;
    }
    Err(Error::NotConverged(max_iter))
}

/// Dense Hermitian matrix in row-major storage.
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Extreme eigenvalues `(min, max)` via power iteration on the matrix and
    /// on its spectral shift `sigma I - A`. Adequate for the small PSD
    /// matrices used in the bound cross-checks.
    pub fn extreme_eigenvalues(&self, tol: f64, max_iter: usize) -> Result<(f64, f64)> {
        // Gershgorin upper bound keeps the shift safely above the spectrum.
        let mut sigma = 0.0f64;
        for i in 0..self.n {
            let row_sum: f64 = (0..self.n).map(|j| self.get(i, j).norm()).sum();
            sigma = sigma.max(row_sum);
        }
        let (lambda_max, _) = power_iteration(|x| self.apply(x), self.n, tol, max_iter, 7)?;
        let shifted = |x: &[Complex64]| -> Vec<Complex64> {
            let ax = self.apply(x);
            x.iter()
                .zip(ax)
                .map(|(xi, axi)| Complex64::new(sigma, 0.0) * xi - axi)
                .collect()
        };
        let (mu_max, _) = power_iteration(shifted, self.n, tol, max_iter, 8)?;
        Ok((sigma - mu_max, lambda_max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = HermitianMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, c(rng.gen_range(0.0..4.0) + n as f64, 0.0));
            for j in 0..i {
                let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m.set(i, j, v);
                m.set(j, i, v.conj());
            }
        }
        m
    }

    #[test]
    fn cg_solves_hermitian_system() {
        let m = random_hermitian(20, 3);
        let x_true = seeded_vector(20, 4);
        let b = m.apply(&x_true);
        let x = conjugate_gradient(|v| m.apply(v), &b, 1e-12, 2000).unwrap();
        let err: f64 = x
            .iter()
            .zip(&x_true)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-8 * norm(&x_true), "err {err:e}");
    }

    #[test]
    fn extremes_match_nalgebra_on_random_hermitian() {
        use nalgebra::{Complex, DMatrix};
        for seed in [1u64, 2, 9] {
            let m = random_hermitian(16, seed);
            let (lo, hi) = m.extreme_eigenvalues(1e-13, 200_000).unwrap();
            let dm = DMatrix::from_fn(16, 16, |i, j| {
                let z = m.get(i, j);
                Complex::new(z.re, z.im)
            });
            let eig = dm.symmetric_eigen();
            let mut evs: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
            evs.sort_by(f64::total_cmp);
            assert!((lo - evs[0]).abs() < 1e-8 * evs[0].abs().max(1.0), "{lo} vs {}", evs[0]);
            assert!(
                (hi - evs[15]).abs() < 1e-8 * evs[15].abs().max(1.0),
                "{hi} vs {}",
                evs[15]
            );
        }
    }

    #[test]
    fn iteration_budget_exhaustion_is_reported() {
        let d = [3.0f64, 1.0];
        let apply = |x: &[Complex64]| -> Vec<Complex64> {
            x.iter().zip(&d).map(|(xi, di)| xi * *di).collect()
        };
        assert!(matches!(
            power_iteration(apply, 2, 1e-30, 2, 1),
            Err(crate::error::Error::NotConverged(2))
        ));
        assert!(matches!(
            inverse_iteration(apply, 2, 1e-30, 2, 1),
            Err(crate::error::Error::NotConverged(2))
        ));
    }

    #[test]
    fn power_and_inverse_iteration_on_diagonal_operator() {
        let d = [4.0f64, 2.5, 1.0, 0.25];
        let apply = |x: &[Complex64]| -> Vec<Complex64> {
            x.iter().zip(&d).map(|(xi, di)| xi * *di).collect()
        };
        let (hi, _) = power_iteration(apply, 4, 1e-13, 10_000, 1).unwrap();
        assert!((hi - 4.0).abs() < 1e-9);
        let (lo, _) = inverse_iteration(apply, 4, 1e-13, 10_000, 2).unwrap();
        assert!((lo - 0.25).abs() < 1e-9);
    }
}
