use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

use super::matrix::{dot, norm_sq, DenseMatrix};

/// Iteration count used when none is given.
pub const DEFAULT_POWER_ITERATIONS: usize = 100;

/// Relative change in successive Rayleigh quotients that ends an early-stopping run.
pub const EARLY_STOP_RTOL: f64 = 1e-12;

/// An eigenvalue with its unit-norm eigenvector.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Power iteration on a symmetric PSD operator.
///
/// Runs `iterations` steps of `v <- M v / ‖M v‖` and reports the Rayleigh
/// quotient `vᵀ M v` of the final iterate. With `early_stop` the loop also ends
/// once two successive quotients agree to [`EARLY_STOP_RTOL`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerMethod {
    pub iterations: usize,
    pub early_stop: bool,
}

impl Default for PowerMethod {
    fn default() -> Self {
        PowerMethod::new(DEFAULT_POWER_ITERATIONS)
    }
}

impl PowerMethod {
    pub fn new(iterations: usize) -> Self {
        PowerMethod {
            iterations,
            early_stop: false,
        }
    }

    pub fn with_early_stop(mut self, early_stop: bool) -> Self {
        self.early_stop = early_stop;
        self
    }

    /// Runs from an explicit start vector (normalised here).
    pub fn run<F>(&self, mut v: Vec<f64>, mut apply: F) -> Result<EigenPair>
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        if v.is_empty() {
            return Err(Error::input(
                "power method needs an operator of dimension >= 1",
            ));
        }
        if self.iterations == 0 {
            return Err(Error::input("power method needs at least one iteration"));
        }
        let n0 = norm_sq(&v).sqrt();
        if !(n0.is_finite() && n0 > 0.0) {
            return Err(Error::input(
                "power method start vector must be nonzero and finite",
            ));
        }
        v.iter_mut().for_each(|x| *x /= n0);

        let mut w = vec![0.0; v.len()];
        apply(&v, &mut w);
        let mut lambda = dot(&v, &w);
        for _ in 0..self.iterations {
            let nw = norm_sq(&w).sqrt();
            if !nw.is_finite() {
                return Err(Error::Numerical(
                    "power method produced a non-finite iterate".into(),
                ));
            }
            if nw == 0.0 {
                // v lies in the null space; nothing to iterate on
                return Ok(EigenPair {
                    value: 0.0,
                    vector: v,
                });
            }
            for (vi, wi) in v.iter_mut().zip(&w) {
                *vi = wi / nw;
            }
            apply(&v, &mut w);
            let next = dot(&v, &w);
            if !next.is_finite() {
                return Err(Error::Numerical(
                    "power method produced a non-finite estimate".into(),
                ));
            }
            let settled = (next - lambda).abs() <= EARLY_STOP_RTOL * next.abs();
            lambda = next;
            if self.early_stop && settled {
                break;
            }
        }
        Ok(EigenPair {
            value: lambda.max(0.0),
            vector: v,
        })
    }
}

/// Standard Gaussian vector scaled to unit length.
pub fn gaussian_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let nv = norm_sq(&v).sqrt();
        if nv > 0.0 {
            return v.into_iter().map(|x| x / nv).collect();
        }
    }
}

/// Power method on an `n`-dimensional operator from a seeded Gaussian start.
pub fn power_method<F>(n: usize, apply: F, iterations: usize, seed: u64) -> Result<EigenPair>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = gaussian_unit_vector(&mut rng, n);
    PowerMethod::new(iterations).run(start, apply)
}

/// Applies `x -> Aᵀ(A x)` using `scratch` (length `L`) for the intermediate.
pub fn apply_normal_operator(a: &DenseMatrix, x: &[f64], scratch: &mut [f64], out: &mut [f64]) {
    for (s, r) in scratch.iter_mut().zip(a.row_iter()) {
        *s = dot(r, x);
    }
    out.iter_mut().for_each(|o| *o = 0.0);
    for (r, &s) in a.row_iter().zip(scratch.iter()) {
        if s != 0.0 {
            super::matrix::axpy(s, r, out);
        }
    }
}

/// Dominant eigenpair of `AᵀA` (i.e. `σ₁²` and the first right singular
/// vector) at `O(LJ)` per iteration.
pub fn principal_right_singular_vector(
    a: &DenseMatrix,
    iterations: usize,
    seed: u64,
) -> Result<EigenPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = gaussian_unit_vector(&mut rng, a.cols());
    principal_right_singular_vector_from(a, start, PowerMethod::new(iterations))
}

pub fn principal_right_singular_vector_from(
    a: &DenseMatrix,
    start: Vec<f64>,
    method: PowerMethod,
) -> Result<EigenPair> {
    let mut scratch = vec![0.0; a.rows()];
    method.run(start, |x, out| {
        apply_normal_operator(a, x, &mut scratch, out)
    })
}

/// Power method on a dense symmetric matrix.
pub fn dense_power_method(
    m: &DenseMatrix,
    method: PowerMethod,
    start: Vec<f64>,
) -> Result<EigenPair> {
    assert!(m.is_square());
    method.run(start, |x, out| {
        for (o, r) in out.iter_mut().zip(m.row_iter()) {
            *o = dot(r, x);
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(m: &DenseMatrix) -> impl FnMut(&[f64], &mut [f64]) + '_ {
        move |x, out| out.copy_from_slice(&m.mul_vec(x))
    }

    #[test]
    fn diagonal_operator() {
        let m = DenseMatrix::from_diagonal(&[4.0, 1.0]);
        let p = power_method(2, dense(&m), 50, 7).unwrap();
        assert!((p.value - 4.0).abs() < 1e-9);
        assert!((p.vector[0].abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_by_two_analytic() {
        let m = DenseMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let p = power_method(2, dense(&m), 100, 1).unwrap();
        assert!((p.value - 3.0).abs() < 1e-9);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.vector[0].abs() - s).abs() < 1e-9 && (p.vector[1].abs() - s).abs() < 1e-9);
        assert!(p.vector[0] * p.vector[1] > 0.0);
        assert!((norm_sq(&p.vector) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_operator_returns_start() {
        let p = power_method(3, |_, out: &mut [f64]| out.fill(0.0), 10, 5).unwrap();
        assert_eq!(p.value, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(p.vector, gaussian_unit_vector(&mut rng, 3));
    }

    #[test]
    fn nan_is_reported() {
        let err = power_method(2, |_, out: &mut [f64]| out.fill(f64::NAN), 3, 0).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(power_method(0, |_, _: &mut [f64]| {}, 3, 0).is_err());
        assert!(power_method(2, |_, _: &mut [f64]| {}, 0, 0).is_err());
    }

    #[test]
    fn singular_value_of_scaled_rows() {
        let a = DenseMatrix::from_rows(&[[3.0, 0.0], [0.0, 1.0]]).unwrap();
        let p = principal_right_singular_vector(&a, 100, 3).unwrap();
        assert!((p.value - 9.0).abs() < 1e-9);
        assert!((p.vector[0].abs() - 1.0).abs() < 1e-9);

        // orthogonal rows of norms 2 and 1
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = DenseMatrix::from_rows(&[[2.0 * s, 2.0 * s, 0.0], [s, -s, 0.0]]).unwrap();
        let p = principal_right_singular_vector(&b, 100, 3).unwrap();
        assert!((p.value - 4.0).abs() < 1e-9);
    }

    #[test]
    fn estimate_is_monotone_in_iterations() {
        let m =
            DenseMatrix::from_rows(&[[3.0, 1.0, 0.5], [1.0, 2.5, 0.2], [0.5, 0.2, 2.0]]).unwrap();
        let mut prev = 0.0;
        for it in 1..40 {
            let p = power_method(3, dense(&m), it, 9).unwrap();
            assert!(
                p.value >= prev - 1e-12,
                "iteration {it}: {} < {prev}",
                p.value
            );
            prev = p.value;
        }
    }

    #[test]
    fn early_stop_matches_full_run() {
        let m = DenseMatrix::from_diagonal(&[5.0, 1.0, 0.5]);
        let start = vec![1.0, 1.0, 1.0];
        let full = PowerMethod::new(200).run(start.clone(), dense(&m)).unwrap();
        let early = PowerMethod::new(200)
            .with_early_stop(true)
            .run(start, dense(&m))
            .unwrap();
        assert!((full.value - early.value).abs() < 1e-10);
    }
}
