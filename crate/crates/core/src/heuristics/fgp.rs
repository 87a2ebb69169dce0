use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::design::MonitoringProblem;
use crate::error::Result;
use crate::linalg::{dot, gaussian_unit_vector, DEGENERATE_NORM_SQ};

use super::{
    pick_min, run, AlgorithmKind, AlgorithmSpec, Deflation, Hook, RawSelection, SelectionResult,
};

/// Fast greedy power (spectral only): for each candidate `i`, estimate
/// `λ₁(G - bᵢbᵢᵀ/G_ii)` with `G = A⁽ᵏ⁻¹⁾A⁽ᵏ⁻¹⁾ᵀ` and `bᵢ = G eᵢ` by `m`
/// power iterations, then pick the smallest estimate. `G` is formed once per
/// step and every candidate starts from the same random vector.
pub fn fgp(problem: &MonitoringProblem, m: usize, seed: u64) -> Result<SelectionResult> {
    let spec = AlgorithmSpec::new(AlgorithmKind::Fgp)
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
    let mut d = Deflation::start(problem, hook);
    let l = d.a.rows();
    while d.selected.len() < problem.budget() {
        let gram = d.a.gram_rows();
        let start = gaussian_unit_vector(&mut rng, l);
        let mut estimates = Vec::with_capacity(l);
        for i in 0..l {
            let n = gram[(i, i)];
            if d.taken[i] || n <= DEGENERATE_NORM_SQ {
                continue;
            }
            let b = gram.row(i);
            let pair = method.run(start.clone(), |x, out| {
                let c = dot(b, x) / n;
                for ((o, r), bi) in out.iter_mut().zip(gram.row_iter()).zip(b) {
                    *o = dot(r, x) - c * bi;
                }
            })?;
            estimates.push((i, pair.value));
        }
        let Some(best) = pick_min(&estimates)? else {
            break;
        };
        d.pick(best, hook)?;
    }
    Ok(d.finish(problem.budget(), None))
}
