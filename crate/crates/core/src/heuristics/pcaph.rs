use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::design::{Criterion, MonitoringProblem};
use crate::error::Result;
use crate::linalg::{dot, gaussian_unit_vector, principal_right_singular_vector_from};

use super::{
    live_rows, pick_max, run, AlgorithmKind, AlgorithmSpec, Deflation, Hook, RawSelection,
    SelectionResult,
};

/// PCA projection heuristic: take the leading right singular vector `v₁` of
/// `A⁽ᵏ⁻¹⁾` and pick the link whose current row has the longest projection
/// `|v₁ᵀ aᵢ|`.
pub fn pcaph(problem: &MonitoringProblem, m: usize, seed: u64) -> Result<SelectionResult> {
    let spec = AlgorithmSpec::new(AlgorithmKind::Pcaph)
        .with_m(m)
        .with_seed(seed);
    run(problem, &spec)
}

pub(super) fn select(
    problem: &MonitoringProblem,
    spec: &AlgorithmSpec,
    hook: &mut Hook,
) -> Result<RawSelection> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let method = spec.power();
    let track_trace = problem.criterion() == Criterion::Trace;
    let mut d = Deflation::start(problem, hook);
    let mut trajectory = vec![d.a.frobenius_norm_sq()];
    while d.selected.len() < problem.budget() {
        let live = live_rows(&d.a, &d.taken);
        if live.is_empty() {
            break;
        }
        let start = gaussian_unit_vector(&mut rng, d.a.cols());
        let v1 = principal_right_singular_vector_from(&d.a, start, method)?.vector;
        let proj: Vec<(usize, f64)> = live
            .iter()
            .map(|&(i, _)| (i, dot(d.a.row(i), &v1).abs()))
            .collect();
        let Some(best) = pick_max(&proj)? else { break };
        d.pick(best, hook)?;
        if track_trace {
            trajectory.push(d.a.frobenius_norm_sq());
        }
    }
    Ok(d.finish(problem.budget(), track_trace.then_some(trajectory)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    #[test]
    fn orthogonal_rows() {
        let a =
            DenseMatrix::from_rows(&[[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        let p = MonitoringProblem::from_matrix(a, 2, Criterion::Trace).unwrap();
        let r = pcaph(&p, 100, 1).unwrap();
        assert_eq!(r.selected, vec![0, 1]);
        assert!((r.final_error() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_is_cleared_in_one_pick() {
        let u = [1.0, 2.0, 0.5, 3.0];
        let v = [1.0, -1.0, 2.0];
        let a = DenseMatrix::from_fn(4, 3, |i, j| u[i] * v[j]);
        for criterion in [Criterion::Trace, Criterion::Spectral] {
            let p = MonitoringProblem::from_matrix(a.clone(), 1, criterion).unwrap();
            let r = pcaph(&p, 50, 2).unwrap();
            assert!(r.final_error() < 1e-9);
        }
        let p = MonitoringProblem::from_matrix(a, 3, Criterion::Trace).unwrap();
        let r = pcaph(&p, 50, 2).unwrap();
        assert_eq!(r.selected.len(), 1);
        assert!(r.stopped_early);
    }
}
