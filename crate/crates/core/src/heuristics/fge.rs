use crate::design::MonitoringProblem;
use crate::error::Result;
use crate::linalg::DEGENERATE_NORM_SQ;

use super::{
    pick_max, run, AlgorithmKind, AlgorithmSpec, Deflation, Hook, RawSelection, SelectionResult,
};

/// Fast greedy exact (trace only): with `G = A⁽ᵏ⁻¹⁾A⁽ᵏ⁻¹⁾ᵀ`, picking link `i`
/// lowers the trace by exactly `Σ_j G_ij² / G_ii`, so the greedy step needs no
/// covariance solves.
pub fn fge(problem: &MonitoringProblem) -> Result<SelectionResult> {
    run(problem, &AlgorithmSpec::new(AlgorithmKind::Fge))
}

/// Step-one scores `(i, Σ_j G_ij²/G_ii)` of the live links.
pub(super) fn scores(gram: &crate::linalg::DenseMatrix, taken: &[bool]) -> Vec<(usize, f64)> {
    (0..gram.rows())
        .filter(|&i| !taken[i] && gram[(i, i)] > DEGENERATE_NORM_SQ)
        .map(|i| {
            let row = gram.row(i);
            (i, crate::linalg::norm_sq(row) / row[i])
        })
        .collect()
}

pub(super) fn select(problem: &MonitoringProblem, hook: &mut Hook) -> Result<RawSelection> {
    let mut d = Deflation::start(problem, hook);
    let mut z = d.a.frobenius_norm_sq();
    let mut trajectory = vec![z];
    while d.selected.len() < problem.budget() {
        let gram = d.a.gram_rows();
        let s = scores(&gram, &d.taken);
        let Some(best) = pick_max(&s)? else { break };
        let gain = s
            .iter()
            .find(|&&(i, _)| i == best)
            .expect("picked from scores")
            .1;
        d.pick(best, hook)?;
        z = (z - gain).max(0.0);
        trajectory.push(z);
    }
    Ok(d.finish(problem.budget(), Some(trajectory)))
}
