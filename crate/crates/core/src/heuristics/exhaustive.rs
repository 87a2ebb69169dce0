use std::time::Instant;

use crate::design::{conditional_link_covariance, Criterion, MonitoringProblem};
use crate::error::{Error, Result};
use crate::linalg::{dot, largest_eigenvalue, Cholesky, DenseMatrix};

use super::{
    replay_deflation, run, AlgorithmKind, AlgorithmSpec, RawSelection, SelectionResult, TIE_RTOL,
};
use crate::design::GRAM_RANK_TOL;

/// Largest number of subsets the exhaustive search will enumerate.
pub const EXHAUSTIVE_LIMIT: u128 = 2_000_000;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Global optimum over all `K`-subsets with exact objectives; the
/// lexicographically smallest subset wins ties. Refuses when `C(L, K)`
/// exceeds [`EXHAUSTIVE_LIMIT`].
pub fn exhaustive(problem: &MonitoringProblem) -> Result<SelectionResult> {
    run(problem, &AlgorithmSpec::new(AlgorithmKind::Exhaustive))
}

pub(super) fn select(problem: &MonitoringProblem) -> Result<RawSelection> {
    let (l, k) = (problem.link_count(), problem.budget());
    let count = binomial(l, k);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::TooManySubsets {
            count,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let started = Instant::now();
    let a = problem.effective();
    let sigma = a.gram_rows();
    let criterion = problem.criterion();
    let mut subset: Vec<usize> = (0..k).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let v = subset_error(a, &sigma, &subset, criterion)?;
        let better = match &best {
            None => true,
            Some((b, _)) => v < b - TIE_RTOL * b.abs(),
        };
        if better {
            best = Some((v, subset.clone()));
        }
        if !next_combination(&mut subset, l) {
            break;
        }
    }
    let (_, selected) = best.expect("at least one subset");
    Ok(RawSelection {
        stopped_early: false,
        trajectory: None,
        selected,
        elapsed: started.elapsed(),
        observed: false,
    })
}

/// Advances to the next subset in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

fn subset_error(
    a: &DenseMatrix,
    sigma: &DenseMatrix,
    subset: &[usize],
    criterion: Criterion,
) -> Result<f64> {
    let direct = match criterion {
        Criterion::Trace => trace_error(sigma, subset),
        Criterion::Spectral => match conditional_link_covariance(sigma.clone(), subset) {
            Ok(err) => largest_eigenvalue(&err).map(Some)?,
            Err(Error::RedundantSelection { .. }) => None,
            Err(e) => return Err(e),
        },
    };
    match direct {
        Some(v) => Ok(v.max(0.0)),
        None => {
            // dependent rows: the projection onto their span is still well defined
            let last = replay_deflation(a, subset, |_, _| Ok(()))?;
            let v = match criterion {
                Criterion::Trace => last.frobenius_norm_sq(),
                Criterion::Spectral => largest_eigenvalue(&last.smaller_gram())?,
            };
            Ok(v.max(0.0))
        }
    }
}

/// `trace(Σ) - Σ_l ‖R⁻¹Σ_{o,l}‖²`, or `None` when the Gram block is singular.
fn trace_error(sigma: &DenseMatrix, subset: &[usize]) -> Option<f64> {
    let chol = Cholesky::new(&sigma.principal_submatrix(subset), GRAM_RANK_TOL).ok()?;
    let mut w = vec![0.0; subset.len()];
    let mut total = 0.0;
    for l in 0..sigma.rows() {
        for (slot, &o) in w.iter_mut().zip(subset) {
            *slot = sigma[(o, l)];
        }
        chol.solve_lower_in_place(&mut w);
        total += sigma[(l, l)] - dot(&w, &w);
    }
    Some(total)
}
