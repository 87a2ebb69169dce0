use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::design::MonitoringProblem;
use crate::error::Result;
use crate::linalg::{gaussian_unit_vector, norm_sq, DenseMatrix};

use super::{
    live_rows, pick_min, run, AlgorithmKind, AlgorithmSpec, Deflation, Hook, RawSelection,
    SelectionResult,
};

/// Fast greedy randomized (spectral only).
///
/// Draws `m` unit Gaussian probes `xᵢ ∈ ℝᴸ` once. Each step forms
/// `uᵢ = A⁽ᵏ⁻¹⁾ᵀxᵢ`, caches `cᵢ = ‖uᵢ‖²` and scores candidate `j` by
/// `maxᵢ [cᵢ - (xᵢᵀA aⱼ)² / ‖aⱼ‖²]`, a sampled lower estimate of the
/// spectral error after picking `j`. The smallest score wins.
pub fn fgr(problem: &MonitoringProblem, m: usize, seed: u64) -> Result<SelectionResult> {
    let spec = AlgorithmSpec::new(AlgorithmKind::Fgr)
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
    let mut d = Deflation::start(problem, hook);
    let l = d.a.rows();
    let mut probes = DenseMatrix::zeros(spec.m, l);
    for i in 0..spec.m {
        probes
            .row_mut(i)
            .copy_from_slice(&gaussian_unit_vector(&mut rng, l));
    }
    while d.selected.len() < problem.budget() {
        let live = live_rows(&d.a, &d.taken);
        if live.is_empty() {
            break;
        }
        let scores = probe_scores(&probes, &d.a, &live);
        let Some(best) = pick_min(&scores)? else {
            break;
        };
        d.pick(best, hook)?;
    }
    Ok(d.finish(problem.budget(), None))
}

/// `(j, maxᵢ [cᵢ - (uᵢ·aⱼ)²/nⱼ])` for each live `(j, nⱼ = ‖aⱼ‖²)`.
fn probe_scores(probes: &DenseMatrix, a: &DenseMatrix, live: &[(usize, f64)]) -> Vec<(usize, f64)> {
    // (xᵢᵀA) first: U = X A, then xᵢᵀ A aⱼ = uᵢ · aⱼ
    let u = probes.matmul(a);
    let c: Vec<f64> = u.row_iter().map(norm_sq).collect();
    let s = u.mul_transpose(a);
    live.iter()
        .map(|&(j, n)| {
            let worst = (0..probes.rows())
                .map(|i| c[i] - s[(i, j)] * s[(i, j)] / n)
                .fold(f64::NEG_INFINITY, f64::max);
            (j, worst)
        })
        .collect()
}
