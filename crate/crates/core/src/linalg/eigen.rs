//! Dense symmetric eigensolver (cyclic Jacobi), symmetric square root and a
//! rank-revealing Cholesky factorisation.

use crate::error::{Error, Result};

use super::matrix::DenseMatrix;

/// Largest dimension accepted by the dense cubic-cost solvers.
pub const MAX_DENSE_EIGEN_DIM: usize = 5000;

/// Relative asymmetry tolerated on input (`max |m_ij - m_ji| / max |m_ij|`).
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Eigenvalues below `-NEGATIVE_EIGEN_TOL * max(1, λ_max)` make a matrix non-PSD.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition `M = V diag(values) Vᵀ`, values descending.
/// Column `i` of `vectors` pairs with `values[i]`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Option<DenseMatrix>,
}

fn check_symmetric(m: &DenseMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::input(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() > MAX_DENSE_EIGEN_DIM {
        return Err(Error::input(format!(
            "dense eigensolve limited to n <= {MAX_DENSE_EIGEN_DIM}, got {}",
            m.rows()
        )));
    }
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::input(format!(
            "matrix is not symmetric (relative asymmetry {asym:e})"
        )));
    }
    Ok(())
}

/// Descending eigenvalues of a symmetric matrix.
pub fn eigenvalues_sym(m: &DenseMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(m, false)?.values)
}

/// Full eigendecomposition of a symmetric matrix.
pub fn eigen_sym(m: &DenseMatrix) -> Result<SymmetricEigen> {
    jacobi(m, true)
}

fn jacobi(m: &DenseMatrix, want_vectors: bool) -> Result<SymmetricEigen> {
    check_symmetric(m)?;
    let n = m.rows();
    let mut a = DenseMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let mut v = want_vectors.then(|| DenseMatrix::identity(n));
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                // rotation already below rounding of both diagonal entries
                if apq.abs() * 1e18 < app.abs().min(aqq.abs()) {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, p, q, c, s);
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = v.map(|v| DenseMatrix::from_fn(n, n, |r, c| v[(r, order[c])]));
    Ok(SymmetricEigen { values, vectors })
}

/// `A <- Jᵀ A J` for the plane rotation on `(p, q)`.
fn rotate(a: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
}

/// Largest eigenvalue of a symmetric matrix via the dense solver.
pub fn largest_eigenvalue(m: &DenseMatrix) -> Result<f64> {
    if m.rows() == 0 {
        return Ok(0.0);
    }
    Ok(eigenvalues_sym(m)?[0])
}

/// Symmetric PSD square root `S` with `S S = Σ`.
pub fn symmetric_sqrt(sigma: &DenseMatrix) -> Result<DenseMatrix> {
    let eig = eigen_sym(sigma)?;
    let n = sigma.rows();
    let top = eig.values.first().copied().unwrap_or(0.0);
    let floor = -NEGATIVE_EIGEN_TOL * top.abs().max(1.0);
    if let Some(&bad) = eig.values.iter().find(|&&l| l < floor) {
        return Err(Error::NotPsd { eigenvalue: bad });
    }
    let v = eig.vectors.expect("vectors requested");
    let roots: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let mut s = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x: f64 = (0..n).map(|k| v[(i, k)] * roots[k] * v[(j, k)]).sum();
            s[(i, j)] = x;
            s[(j, i)] = x;
        }
    }
    Ok(s)
}

/// Lower-triangular Cholesky factor `M = R Rᵀ` of a symmetric PSD matrix.
#[derive(Clone, Debug)]
pub struct Cholesky {
    lower: DenseMatrix,
}

impl Cholesky {
    /// Factorises `m`, failing with the offending pivot index when a pivot falls
    /// to `rel_tol * max_i m_ii` or below (numerical rank deficiency).
    pub fn new(m: &DenseMatrix, rel_tol: f64) -> std::result::Result<Self, usize> {
        let n = m.rows();
        let max_diag = (0..n).map(|i| m[(i, i)]).fold(0.0_f64, f64::max);
        let threshold = rel_tol * max_diag;
        let mut r = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = m[(j, j)];
            for k in 0..j {
                d -= r[(j, k)] * r[(j, k)];
            }
            if d.is_nan() || d <= threshold.max(0.0) {
                return Err(j);
            }
            let djj = d.sqrt();
            r[(j, j)] = djj;
            for i in j + 1..n {
                let mut x = m[(i, j)];
                for k in 0..j {
                    x -= r[(i, k)] * r[(j, k)];
                }
                r[(i, j)] = x / djj;
            }
        }
        Ok(Cholesky { lower: r })
    }

    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    /// Solves `R x = b` in place (forward substitution).
    pub fn solve_lower_in_place(&self, b: &mut [f64]) {
        let r = &self.lower;
        for i in 0..b.len() {
            let mut x = b[i];
            for k in 0..i {
                x -= r[(i, k)] * b[k];
            }
            b[i] = x / r[(i, i)];
        }
    }

    /// Solves `M x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let r = &self.lower;
        let mut x = b.to_vec();
        self.solve_lower_in_place(&mut x);
        for i in (0..x.len()).rev() {
            let mut v = x[i];
            for k in i + 1..x.len() {
                v -= r[(k, i)] * x[k];
            }
            x[i] = v / r[(i, i)];
        }
        x
    }
}
