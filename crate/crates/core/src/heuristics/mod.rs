//! Link-selection algorithms.
//!
//! Every algorithm except the naive greedy and the exhaustive search keeps a
//! working copy `A⁽ᵏ⁾` of the effective matrix and deflates it after each pick,
//! `A⁽ᵏ⁾ = A⁽ᵏ⁻¹⁾ (I - a aᵀ/‖a‖²)` with `a` the chosen (already projected)
//! row, so that `A⁽ᵏ⁾ A⁽ᵏ⁾ᵀ = Σ_err(O_k)`.
//!
//! Error trajectories are *audited*: trace values are `‖A⁽ᵏ⁾‖²_F` and
//! spectral values come from [`audited_objective`], independent of whatever
//! estimate a heuristic used internally.

mod ensemble;
mod exhaustive;
mod fge;
mod fgp;
mod fgr;
mod greedy;
mod pcaph;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::BoundCurve;
use crate::design::{Criterion, MonitoringProblem};
use crate::error::{Error, Result};
use crate::linalg::{
    gaussian_unit_vector, largest_eigenvalue, norm_sq, principal_right_singular_vector_from,
    project_out_row_in_place, DenseMatrix, PowerMethod, DEFAULT_POWER_ITERATIONS,
    DEGENERATE_NORM_SQ,
};

pub use ensemble::{ensemble, EnsembleResult, EnsembleSpec};
pub use exhaustive::{binomial, exhaustive, EXHAUSTIVE_LIMIT};
pub use fge::fge;
pub use fgp::fgp;
pub use fgr::fgr;
pub use greedy::naive_greedy;
pub use pcaph::pcaph;

/// Scores within this relative distance of the best are ties; the lowest link index wins.
pub const TIE_RTOL: f64 = 1e-9;

/// Spectral audits use a dense eigensolve while `min(L, J)` stays at or below this.
pub const AUDIT_EXACT_LIMIT: usize = 64;

/// Power iterations (with early stop) for spectral audits above [`AUDIT_EXACT_LIMIT`].
pub const AUDIT_POWER_ITERATIONS: usize = 1000;

/// Seed for the start vector of power-method audits.
pub const AUDIT_SEED: u64 = 0x5eed_a0d1;

/// Allowed relative increase between consecutive trajectory entries.
pub const MONOTONE_RTOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    NaiveGreedy,
    Pcaph,
    Fge,
    Fgp,
    Fgr,
    Exhaustive,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 6] = [
        AlgorithmKind::NaiveGreedy,
        AlgorithmKind::Pcaph,
        AlgorithmKind::Fge,
        AlgorithmKind::Fgp,
        AlgorithmKind::Fgr,
        AlgorithmKind::Exhaustive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::NaiveGreedy => "greedy",
            AlgorithmKind::Pcaph => "pcaph",
            AlgorithmKind::Fge => "fge",
            AlgorithmKind::Fgp => "fgp",
            AlgorithmKind::Fgr => "fgr",
            AlgorithmKind::Exhaustive => "exact",
        }
    }

    /// Whether `m` and `seed` influence the result.
    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            AlgorithmKind::Pcaph | AlgorithmKind::Fgp | AlgorithmKind::Fgr
        )
    }

    pub fn supports(self, criterion: Criterion) -> bool {
        match self {
            AlgorithmKind::Fge => criterion == Criterion::Trace,
            AlgorithmKind::Fgp | AlgorithmKind::Fgr => criterion == Criterion::Spectral,
            _ => true,
        }
    }

    pub(crate) fn check(self, criterion: Criterion) -> Result<()> {
        if self.supports(criterion) {
            Ok(())
        } else {
            Err(Error::UnsupportedCriterion {
                algorithm: self.name(),
                criterion: criterion.name(),
            })
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "greedy" | "naive" | "naive-greedy" => AlgorithmKind::NaiveGreedy,
            "pcaph" => AlgorithmKind::Pcaph,
            "fge" => AlgorithmKind::Fge,
            "fgp" => AlgorithmKind::Fgp,
            "fgr" => AlgorithmKind::Fgr,
            "exact" | "exhaustive" => AlgorithmKind::Exhaustive,
            other => return Err(Error::input(format!("unknown algorithm `{other}`"))),
        })
    }
}

/// Algorithm plus its parameters.
///
/// `m` is the power-iteration count for PCAPH and FGP, the number of random
/// probe vectors for FGR and the power-iteration count of spectral objectives
/// in the naive greedy. `early_stop` enables the power method's convergence
/// test (PCAPH, FGP).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlgorithmSpec {
    pub kind: AlgorithmKind,
    pub m: usize,
    pub seed: u64,
    pub early_stop: bool,
}

impl AlgorithmSpec {
    pub fn new(kind: AlgorithmKind) -> Self {
        AlgorithmSpec {
            kind,
            m: DEFAULT_POWER_ITERATIONS,
            seed: 0,
            early_stop: false,
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_early_stop(mut self, early_stop: bool) -> Self {
        self.early_stop = early_stop;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 && (self.kind.is_randomized() || self.kind == AlgorithmKind::NaiveGreedy) {
            return Err(Error::input(format!("{} needs m >= 1", self.kind)));
        }
        Ok(())
    }

    pub(crate) fn power(&self) -> PowerMethod {
        PowerMethod::new(self.m).with_early_stop(self.early_stop)
    }
}

/// Outcome of one selection run.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionResult {
    /// Links in the order they were picked.
    pub selected: Vec<usize>,
    /// `Z(O_k)` for `k = 0..=selected.len()`.
    pub error_trajectory: Vec<f64>,
    /// PCA bound for the same `k`.
    pub bound_trajectory: Vec<f64>,
    /// Selection phase only; audits and bounds are excluded.
    pub wall_time: Duration,
    pub algorithm: AlgorithmSpec,
    pub criterion: Criterion,
    /// Fewer than `K` links were picked (degenerate candidates or no improvement left).
    pub stopped_early: bool,
}

impl SelectionResult {
    pub fn final_error(&self) -> f64 {
        *self
            .error_trajectory
            .last()
            .expect("trajectory always holds k = 0")
    }

    /// Checks the structural invariants against a problem with `links` links.
    pub fn validate(&self, links: usize) -> Result<()> {
        let n = self.selected.len();
        if self.error_trajectory.len() != n + 1 || self.bound_trajectory.len() != n + 1 {
            return Err(Error::input(format!(
                "trajectories must hold {} entries (got {} errors, {} bounds)",
                n + 1,
                self.error_trajectory.len(),
                self.bound_trajectory.len()
            )));
        }
        let mut seen = vec![false; links];
        for &s in &self.selected {
            if s >= links || std::mem::replace(&mut seen[s], true) {
                return Err(Error::input(format!(
                    "selected link {s} is out of range or repeated"
                )));
            }
        }
        for (k, w) in self.error_trajectory.windows(2).enumerate() {
            if w[1] > w[0] + MONOTONE_RTOL * w[0].abs().max(f64::MIN_POSITIVE) {
                return Err(Error::Numerical(format!(
                    "error trajectory increases at step {}: {} -> {}",
                    k + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        for (k, (&e, &b)) in self
            .error_trajectory
            .iter()
            .zip(&self.bound_trajectory)
            .enumerate()
        {
            if e < b - crate::bounds::CERTIFY_TOL * (1.0 + b.abs()) {
                return Err(Error::BoundViolation {
                    k,
                    error: e,
                    bound: b,
                });
            }
        }
        Ok(())
    }
}

/// Callback receiving `(k, O_k, A⁽ᵏ⁾)` after every deflation, starting at `k = 0`.
pub type StepObserver<'a> = dyn FnMut(usize, &[usize], &DenseMatrix) + 'a;

pub(crate) struct Hook<'a, 'b>(Option<&'a mut StepObserver<'b>>);

impl Hook<'_, '_> {
    pub(crate) fn none() -> Self {
        Hook(None)
    }

    pub(crate) fn emit(&mut self, k: usize, selected: &[usize], a: &DenseMatrix) {
        if let Some(f) = self.0.as_mut() {
            f(k, selected, a);
        }
    }

    fn is_active(&self) -> bool {
        self.0.is_some()
    }
}

/// What an algorithm hands back before auditing.
pub(crate) struct RawSelection {
    pub selected: Vec<usize>,
    pub stopped_early: bool,
    /// Trajectory computed during selection, if the algorithm has an exact one.
    pub trajectory: Option<Vec<f64>>,
    pub elapsed: Duration,
    /// Whether the hook already saw every step.
    pub observed: bool,
}

/// Runs any algorithm by spec.
pub fn run(problem: &MonitoringProblem, spec: &AlgorithmSpec) -> Result<SelectionResult> {
    run_with(problem, spec, Hook::none())
}

/// [`run`] with a per-step observer. Deflating algorithms call it from inside
/// the selection loop; the naive greedy and exhaustive search replay their
/// final order afterwards.
pub fn run_observed(
    problem: &MonitoringProblem,
    spec: &AlgorithmSpec,
    observer: &mut StepObserver<'_>,
) -> Result<SelectionResult> {
    run_with(problem, spec, Hook(Some(observer)))
}

fn run_with(
    problem: &MonitoringProblem,
    spec: &AlgorithmSpec,
    mut hook: Hook,
) -> Result<SelectionResult> {
    spec.validate()?;
    spec.kind.check(problem.criterion())?;
    let raw = match spec.kind {
        AlgorithmKind::NaiveGreedy => greedy::select(problem, spec)?,
        AlgorithmKind::Pcaph => pcaph::select(problem, spec, &mut hook)?,
        AlgorithmKind::Fge => fge::select(problem, &mut hook)?,
        AlgorithmKind::Fgp => fgp::select(problem, spec, &mut hook)?,
        AlgorithmKind::Fgr => fgr::select(problem, spec, &mut hook)?,
        AlgorithmKind::Exhaustive => exhaustive::select(problem)?,
    };
    if hook.is_active() && !raw.observed {
        let mut prefix = Vec::with_capacity(raw.selected.len());
        replay_deflation(problem.effective(), &raw.selected, |k, a| {
            if k > 0 {
                prefix.push(raw.selected[k - 1]);
            }
            hook.emit(k, &prefix, a);
            Ok(())
        })?;
    }
    finish(problem, *spec, raw)
}

fn finish(
    problem: &MonitoringProblem,
    spec: AlgorithmSpec,
    raw: RawSelection,
) -> Result<SelectionResult> {
    let a = problem.effective();
    let criterion = problem.criterion();
    let error_trajectory = match raw.trajectory {
        Some(t) => t,
        None => audit_trajectory(a, &raw.selected, criterion)?,
    };
    let bounds = BoundCurve::new(a, criterion, raw.selected.len())?;
    Ok(SelectionResult {
        bound_trajectory: bounds.values,
        selected: raw.selected,
        error_trajectory,
        wall_time: raw.elapsed,
        algorithm: spec,
        criterion,
        stopped_early: raw.stopped_early,
    })
}

/// Deflates `a` by the rows in `order`, calling `visit(k, A⁽ᵏ⁾)` for
/// `k = 0..=order.len()`. Rows already inside the span of earlier picks are
/// degenerate and leave the matrix unchanged. Returns the final matrix.
pub fn replay_deflation(
    a: &DenseMatrix,
    order: &[usize],
    mut visit: impl FnMut(usize, &DenseMatrix) -> Result<()>,
) -> Result<DenseMatrix> {
    let mut cur = a.clone();
    visit(0, &cur)?;
    for (k, &link) in order.iter().enumerate() {
        if link >= cur.rows() {
            return Err(Error::input(format!(
                "link {link} out of range 0..{}",
                cur.rows()
            )));
        }
        let dir = cur.row(link).to_vec();
        if norm_sq(&dir) > DEGENERATE_NORM_SQ {
            project_out_row_in_place(&mut cur, &dir)?;
        }
        visit(k + 1, &cur)?;
    }
    Ok(cur)
}

/// `Z(O)` read off a deflated matrix, `A⁽ᵏ⁾ A⁽ᵏ⁾ᵀ = Σ_err(O_k)`.
pub fn audited_objective(deflated: &DenseMatrix, criterion: Criterion) -> Result<f64> {
    let (l, j) = deflated.shape();
    let value = match criterion {
        Criterion::Trace => deflated.frobenius_norm_sq(),
        Criterion::Spectral if l == 0 || j == 0 => 0.0,
        Criterion::Spectral if l.min(j) <= AUDIT_EXACT_LIMIT => {
            largest_eigenvalue(&deflated.smaller_gram())?
        }
        Criterion::Spectral => {
            let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED);
            let start = gaussian_unit_vector(&mut rng, j);
            let method = PowerMethod::new(AUDIT_POWER_ITERATIONS).with_early_stop(true);
            principal_right_singular_vector_from(deflated, start, method)?.value
        }
    };
    Ok(value.max(0.0))
}

/// Audited `Z(O_k)` for every prefix of `order`.
pub fn audit_trajectory(
    a: &DenseMatrix,
    order: &[usize],
    criterion: Criterion,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(order.len() + 1);
    replay_deflation(a, order, |_, cur| {
        out.push(audited_objective(cur, criterion)?);
        Ok(())
    })?;
    Ok(out)
}

/// Audited `Z(O)` of an unordered link set.
pub fn audited_error(problem: &MonitoringProblem, links: &[usize]) -> Result<f64> {
    let last = replay_deflation(problem.effective(), links, |_, _| Ok(()))?;
    audited_objective(&last, problem.criterion())
}

/// Lowest index whose score is within [`TIE_RTOL`] of the maximum.
/// `scores` must come in ascending index order.
pub(crate) fn pick_max(scores: &[(usize, f64)]) -> Result<Option<usize>> {
    pick(
        scores,
        |best, s| s >= best - TIE_RTOL * best.abs(),
        f64::max,
    )
}

/// Lowest index whose score is within [`TIE_RTOL`] of the minimum.
pub(crate) fn pick_min(scores: &[(usize, f64)]) -> Result<Option<usize>> {
    pick(
        scores,
        |best, s| s <= best + TIE_RTOL * best.abs(),
        f64::min,
    )
}

fn pick(
    scores: &[(usize, f64)],
    near: impl Fn(f64, f64) -> bool,
    fold: impl Fn(f64, f64) -> f64,
) -> Result<Option<usize>> {
    if let Some(&(i, _)) = scores.iter().find(|(_, s)| s.is_nan()) {
        return Err(Error::Numerical(format!(
            "score of candidate link {i} is NaN"
        )));
    }
    let Some(best) = scores.iter().map(|&(_, s)| s).reduce(fold) else {
        return Ok(None);
    };
    Ok(scores
        .iter()
        .find(|&&(_, s)| near(best, s))
        .map(|&(i, _)| i))
}

/// Candidate links: unselected rows with squared norm above the degeneracy threshold.
pub(crate) fn live_rows(a: &DenseMatrix, taken: &[bool]) -> Vec<(usize, f64)> {
    a.row_iter()
        .enumerate()
        .filter(|(i, _)| !taken[*i])
        .map(|(i, r)| (i, norm_sq(r)))
        .filter(|&(_, n)| n > DEGENERATE_NORM_SQ)
        .collect()
}

/// Bookkeeping shared by the deflating algorithms.
pub(crate) struct Deflation {
    pub a: DenseMatrix,
    pub selected: Vec<usize>,
    pub taken: Vec<bool>,
    started: Instant,
    paused: Duration,
}

impl Deflation {
    pub(crate) fn start(problem: &MonitoringProblem, hook: &mut Hook) -> Self {
        let a = problem.effective().clone();
        let taken = vec![false; a.rows()];
        let mut d = Deflation {
            a,
            selected: Vec::with_capacity(problem.budget()),
            taken,
            started: Instant::now(),
            paused: Duration::ZERO,
        };
        d.notify(hook);
        d
    }

    /// Projects out the current row `link` and records the pick.
    pub(crate) fn pick(&mut self, link: usize, hook: &mut Hook) -> Result<()> {
        let dir = self.a.row(link).to_vec();
        project_out_row_in_place(&mut self.a, &dir)?;
        self.selected.push(link);
        self.taken[link] = true;
        self.notify(hook);
        Ok(())
    }

    // observer time is not selection time
    fn notify(&mut self, hook: &mut Hook) {
        if hook.is_active() {
            let t = Instant::now();
            hook.emit(self.selected.len(), &self.selected, &self.a);
            self.paused += t.elapsed();
        }
    }

    pub(crate) fn finish(self, budget: usize, trajectory: Option<Vec<f64>>) -> RawSelection {
        RawSelection {
            stopped_early: self.selected.len() < budget,
            elapsed: self.started.elapsed().saturating_sub(self.paused),
            selected: self.selected,
            trajectory,
            observed: true,
        }
    }
}
