//! PCA lower bounds: no choice of `k` observed links beats the best rank-`k`
//! subspace, so with `λ₁ ≥ λ₂ ≥ …` the eigenvalues of `AᵀA`
//!
//! ```text
//! trace(Σ_err(O)) ≥ Σ_{j>k} λ_j        ρ(Σ_err(O)) ≥ λ_{k+1}
//! ```

use crate::design::Criterion;
use crate::error::{Error, Result};
use crate::heuristics::SelectionResult;
use crate::linalg::{eigenvalues_sym, DenseMatrix};

/// Eigenvalues below this fraction of `λ₁` are treated as exact zeros.
pub const SPECTRUM_CLAMP_RTOL: f64 = 1e-12;

/// Allowed shortfall of an error below its bound, relative to `1 + bound`.
pub const CERTIFY_TOL: f64 = 1e-7;

/// Descending, clamped eigenvalues of `AᵀA`, obtained from the smaller Gram matrix.
pub fn pca_spectrum(a: &DenseMatrix) -> Result<Vec<f64>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(Vec::new());
    }
    let mut values = eigenvalues_sym(&a.smaller_gram())?;
    let cutoff = SPECTRUM_CLAMP_RTOL * values.first().copied().unwrap_or(0.0).max(0.0);
    for v in &mut values {
        if *v < cutoff {
            *v = 0.0;
        }
    }
    Ok(values)
}

/// Bound values for one criterion at `k = 0..=k_max`, with the spectrum they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCurve {
    pub criterion: Criterion,
    pub values: Vec<f64>,
    pub spectrum: Vec<f64>,
}

impl BoundCurve {
    pub fn new(a: &DenseMatrix, criterion: Criterion, k_max: usize) -> Result<Self> {
        Ok(Self::from_spectrum(pca_spectrum(a)?, criterion, k_max))
    }

    pub fn from_spectrum(spectrum: Vec<f64>, criterion: Criterion, k_max: usize) -> Self {
        let values = match criterion {
            Criterion::Trace => {
                let suffix = suffix_sums(&spectrum);
                (0..=k_max)
                    .map(|k| suffix.get(k).copied().unwrap_or(0.0))
                    .collect()
            }
            Criterion::Spectral => (0..=k_max)
                .map(|k| spectrum.get(k).copied().unwrap_or(0.0))
                .collect(),
        };
        BoundCurve {
            criterion,
            values,
            spectrum,
        }
    }

    /// Bound at `k`; zero beyond the rank.
    pub fn at(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }
}

/// `s[k] = Σ_{j ≥ k} λ_j`, accumulated from the tail; `s.len() = λ.len() + 1`.
fn suffix_sums(spectrum: &[f64]) -> Vec<f64> {
    let mut s = vec![0.0; spectrum.len() + 1];
    for k in (0..spectrum.len()).rev() {
        s[k] = s[k + 1] + spectrum[k];
    }
    s
}

/// `Σ_{j>k} λ_j(AᵀA)`.
pub fn pca_trace_bound(a: &DenseMatrix, k: usize) -> Result<f64> {
    let spectrum = pca_spectrum(a)?;
    Ok(spectrum.iter().skip(k).rev().sum())
}

/// `λ_{k+1}(AᵀA)`, zero once `k` reaches the rank.
pub fn pca_spectral_bound(a: &DenseMatrix, k: usize) -> Result<f64> {
    Ok(pca_spectrum(a)?.get(k).copied().unwrap_or(0.0))
}

/// Optimality gap of one step.
#[derive(Clone, Debug, PartialEq)]
pub struct GapEntry {
    pub k: usize,
    pub error: f64,
    pub bound: f64,
    pub gap: f64,
    /// `error / bound`, only when the bound is positive.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    pub criterion: Criterion,
    pub steps: Vec<GapEntry>,
}

impl CertificateReport {
    pub fn final_gap(&self) -> Option<&GapEntry> {
        self.steps.last()
    }

    pub fn max_gap(&self) -> f64 {
        self.steps.iter().map(|s| s.gap).fold(0.0, f64::max)
    }
}

/// Compares `result.error_trajectory` with the PCA bound of `a` (the matrix the
/// selection ran on) at every step.
///
/// A shortfall beyond [`CERTIFY_TOL`] is a [`Error::BoundViolation`].
pub fn certify(result: &SelectionResult, a: &DenseMatrix) -> Result<CertificateReport> {
    let k_max = result.error_trajectory.len().saturating_sub(1);
    let curve = BoundCurve::new(a, result.criterion, k_max)?;
    certify_against(result, &curve)
}

/// [`certify`] with a precomputed curve.
pub fn certify_against(result: &SelectionResult, curve: &BoundCurve) -> Result<CertificateReport> {
    if curve.criterion != result.criterion {
        return Err(Error::input(format!(
            "bound curve is for the {} criterion, result for {}",
            curve.criterion, result.criterion
        )));
    }
    let mut steps = Vec::with_capacity(result.error_trajectory.len());
    for (k, &error) in result.error_trajectory.iter().enumerate() {
        let bound = curve.at(k);
        let gap = error - bound;
        if gap < -CERTIFY_TOL * (1.0 + bound.abs()) {
            return Err(Error::BoundViolation { k, error, bound });
        }
        steps.push(GapEntry {
            k,
            error,
            bound,
            gap,
            ratio: (bound > 0.0).then(|| error / bound),
        });
    }
    Ok(CertificateReport {
        criterion: result.criterion,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv21() -> DenseMatrix {
        DenseMatrix::from_rows(&[[2.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap()
    }

    #[test]
    fn trace_bound_examples() {
        let a = sv21();
        assert_eq!(pca_trace_bound(&a, 1).unwrap(), 1.0);
        assert_eq!(pca_trace_bound(&a, 0).unwrap(), a.frobenius_norm_sq());
        assert!(pca_trace_bound(&a, 2).unwrap().abs() < 1e-9);
    }

    #[test]
    fn spectral_bound_examples() {
        let a = sv21();
        assert!((pca_spectral_bound(&a, 0).unwrap() - 4.0).abs() < 1e-12);
        assert!((pca_spectral_bound(&a, 1).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(pca_spectral_bound(&a, 2).unwrap(), 0.0);
        assert_eq!(pca_spectral_bound(&a, 7).unwrap(), 0.0);
    }

    #[test]
    fn rank_deficient_tail_is_clamped() {
        let a =
            DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [1.0, 0.0, 1.0]]).unwrap();
        let s = pca_spectrum(&a).unwrap();
        assert_eq!(s[2], 0.0);
        assert!(s.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn curves_telescope_and_decrease() {
        let a = DenseMatrix::from_fn(6, 9, |i, j| ((i * 7 + j * 3) % 5) as f64 + 0.5 * i as f64);
        let trace = BoundCurve::new(&a, Criterion::Trace, 6).unwrap();
        let spec = BoundCurve::new(&a, Criterion::Spectral, 6).unwrap();
        for k in 0..6 {
            let step = trace.values[k] - trace.values[k + 1];
            assert!((step - trace.spectrum[k]).abs() <= 1e-12 * trace.values[0]);
            assert!(trace.values[k + 1] <= trace.values[k]);
            assert!(spec.values[k + 1] <= spec.values[k]);
            assert_eq!(spec.values[k], spec.spectrum.get(k).copied().unwrap_or(0.0));
        }
        assert!((trace.values[0] - a.frobenius_norm_sq()).abs() < 1e-9 * trace.values[0]);
    }

    #[test]
    fn empty_matrix_has_zero_bounds() {
        let a = DenseMatrix::zeros(3, 0);
        assert_eq!(pca_trace_bound(&a, 0).unwrap(), 0.0);
        assert_eq!(
            BoundCurve::new(&a, Criterion::Spectral, 2).unwrap().values,
            vec![0.0; 3]
        );
    }
}
