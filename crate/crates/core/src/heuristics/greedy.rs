use std::time::Instant;

use crate::design::{
    conditional_link_covariance, objective, Criterion, ErrorCovariance, MonitoringProblem,
};
use crate::error::{Error, Result};

use super::{pick_max, run, AlgorithmKind, AlgorithmSpec, RawSelection, SelectionResult};

/// Classical greedy: every step evaluates `Z(O ∪ {j})` for all remaining `j`
/// with the direct covariance formula and keeps the largest reduction.
///
/// Spectral objectives use `power_m` power iterations from `seed` for more
/// than 64 links, and a dense eigensolve otherwise.
pub fn naive_greedy(
    problem: &MonitoringProblem,
    power_m: usize,
    seed: u64,
) -> Result<SelectionResult> {
    let spec = AlgorithmSpec::new(AlgorithmKind::NaiveGreedy)
        .with_m(power_m)
        .with_seed(seed);
    run(problem, &spec)
}

pub(super) fn select(problem: &MonitoringProblem, spec: &AlgorithmSpec) -> Result<RawSelection> {
    let started = Instant::now();
    let criterion = problem.criterion();
    let sigma = problem.effective().gram_rows();
    let l = sigma.rows();
    let z = |m| {
        objective(
            &ErrorCovariance::from_trusted(m),
            criterion,
            spec.m,
            spec.seed,
        )
    };

    let mut selected: Vec<usize> = Vec::with_capacity(problem.budget());
    let mut taken = vec![false; l];
    let mut current = z(sigma.clone())?;
    let mut trajectory = vec![current];
    let mut trial = Vec::with_capacity(problem.budget());
    while selected.len() < problem.budget() {
        let mut deltas = Vec::with_capacity(l);
        let mut values = Vec::with_capacity(l);
        for j in (0..l).filter(|&j| !taken[j]) {
            trial.clear();
            trial.extend_from_slice(&selected);
            trial.push(j);
            match conditional_link_covariance(sigma.clone(), &trial) {
                Ok(err) => {
                    let v = z(err)?;
                    deltas.push((j, current - v));
                    values.push(v);
                }
                Err(Error::RedundantSelection { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        let Some(best) = pick_max(&deltas)? else {
            break;
        };
        let pos = deltas
            .iter()
            .position(|&(j, _)| j == best)
            .expect("picked from deltas");
        if deltas[pos].1 <= 0.0 {
            break;
        }
        current = values[pos];
        selected.push(best);
        taken[best] = true;
        trajectory.push(current);
    }
    let elapsed = started.elapsed();
    Ok(RawSelection {
        stopped_early: selected.len() < problem.budget(),
        // power-method spectral values are estimates; audit those
        trajectory: (criterion == Criterion::Trace).then_some(trajectory),
        selected,
        elapsed,
        observed: false,
    })
}
