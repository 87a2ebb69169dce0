//! The kriging model behind link selection: the problem definition, the
//! prediction-error covariance of a monitoring set, the trace/spectral
//! objectives, the BLUP itself and the flow-covariance / link-weight
//! transforms.
//!
//! Flows are modelled as `x ~ N(μ_x, Σ_x)` and link loads as `y = A x`. With
//! `Ã = G^{1/2} A Σ_x^{1/2}` (the *effective matrix*) the link covariance in
//! weighted units is `Ã Ãᵀ`, and observing the links `O` leaves
//!
//! ```text
//! Σ_err(O) = Ã Ãᵀ - Ã Ã_oᵀ (Ã_o Ã_oᵀ)⁻¹ Ã_o Ãᵀ
//! ```
//!
//! as the full `L x L` error covariance (rows and columns of observed links are
//! numerically zero).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{
    dense_power_method, dot, gaussian_unit_vector, largest_eigenvalue, symmetric_sqrt, Cholesky,
    DenseMatrix, PowerMethod,
};
use crate::topology::RoutingMatrix;

/// Gram pivots at or below this fraction of the largest diagonal count as rank deficiency.
pub const GRAM_RANK_TOL: f64 = 1e-10;

/// Up to this dimension the spectral objective is evaluated by a dense eigensolve.
pub const EXACT_SPECTRAL_LIMIT: usize = 64;

/// Optimality criterion for the error covariance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// A-optimality: `trace(Σ_err)`, the total prediction variance.
    Trace,
    /// E-optimality: `ρ(Σ_err)`, the largest eigenvalue.
    Spectral,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::Trace => "trace",
            Criterion::Spectral => "spectral",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trace" | "a" | "a-optimal" => Ok(Criterion::Trace),
            "spectral" | "e" | "e-optimal" => Ok(Criterion::Spectral),
            other => Err(Error::input(format!("unknown criterion `{other}`"))),
        }
    }
}

/// A monitoring-design instance: routing matrix, budget, criterion and the
/// optional flow mean, flow covariance square root and link weights.
///
/// The effective matrix is computed once when a transform is attached.
#[derive(Clone, Debug)]
pub struct MonitoringProblem {
    base: DenseMatrix,
    budget: usize,
    criterion: Criterion,
    mu_x: Option<Vec<f64>>,
    sigma_x_sqrt: Option<DenseMatrix>,
    weights: Option<Vec<f64>>,
    effective: DenseMatrix,
}

impl MonitoringProblem {
    pub fn new(routing: RoutingMatrix, budget: usize, criterion: Criterion) -> Result<Self> {
        Self::from_matrix(routing.into_matrix(), budget, criterion)
    }

    /// Builds a problem on an arbitrary finite matrix, e.g. one whose flow
    /// covariance is already folded in. Entries may be negative.
    pub fn from_matrix(a: DenseMatrix, budget: usize, criterion: Criterion) -> Result<Self> {
        let effective = a.clone();
        let p = MonitoringProblem {
            base: a,
            budget: 0,
            criterion,
            mu_x: None,
            sigma_x_sqrt: None,
            weights: None,
            effective,
        };
        p.with_budget(budget)
    }

    pub fn with_budget(mut self, budget: usize) -> Result<Self> {
        let l = self.link_count();
        if budget == 0 || budget > l {
            return Err(Error::input(format!(
                "budget K = {budget} must lie in 1..={l}"
            )));
        }
        self.budget = budget;
        Ok(self)
    }

    pub fn with_criterion(mut self, criterion: Criterion) -> Self {
        self.criterion = criterion;
        self
    }

    pub fn with_flow_mean(mut self, mu_x: Vec<f64>) -> Result<Self> {
        if mu_x.len() != self.flow_count() {
            return Err(Error::input(format!(
                "flow mean has length {}, expected J = {}",
                mu_x.len(),
                self.flow_count()
            )));
        }
        if mu_x.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("flow mean must be finite"));
        }
        self.mu_x = Some(mu_x);
        Ok(self)
    }

    /// Attaches `Σ_x^{1/2}` directly.
    pub fn with_flow_covariance_sqrt(mut self, sqrt: DenseMatrix) -> Result<Self> {
        let j = self.flow_count();
        if sqrt.shape() != (j, j) {
            return Err(Error::input(format!(
                "flow covariance square root is {}x{}, expected {j}x{j}",
                sqrt.rows(),
                sqrt.cols()
            )));
        }
        self.sigma_x_sqrt = Some(sqrt);
        self.refresh_effective()?;
        Ok(self)
    }

    /// Attaches `Σ_x`, storing its symmetric square root.
    pub fn with_flow_covariance(self, sigma_x: &DenseMatrix) -> Result<Self> {
        let sqrt = symmetric_sqrt(sigma_x)?;
        self.with_flow_covariance_sqrt(sqrt)
    }

    pub fn with_link_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        validate_weights(&weights, self.link_count())?;
        self.weights = Some(weights);
        self.refresh_effective()?;
        Ok(self)
    }

    fn refresh_effective(&mut self) -> Result<()> {
        self.effective = effective_matrix(
            &self.base,
            self.sigma_x_sqrt.as_ref(),
            self.weights.as_deref(),
        )?;
        Ok(())
    }

    /// The matrix the problem was built from, before any transform.
    pub fn base_matrix(&self) -> &DenseMatrix {
        &self.base
    }

    /// `G^{1/2} A Σ_x^{1/2}`, the matrix every algorithm works on.
    pub fn effective(&self) -> &DenseMatrix {
        &self.effective
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn criterion(&self) -> Criterion {
        self.criterion
    }

    pub fn link_count(&self) -> usize {
        self.base.rows()
    }

    pub fn flow_count(&self) -> usize {
        self.base.cols()
    }

    pub fn flow_mean(&self) -> Option<&[f64]> {
        self.mu_x.as_deref()
    }

    pub fn flow_covariance_sqrt(&self) -> Option<&DenseMatrix> {
        self.sigma_x_sqrt.as_ref()
    }

    pub fn link_weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Link means in weighted units, `G^{1/2} A μ_x` (zero when no mean is set).
    pub fn link_mean(&self) -> Vec<f64> {
        let mut mu = match &self.mu_x {
            Some(mu_x) => self.base.mul_vec(mu_x),
            None => vec![0.0; self.link_count()],
        };
        if let Some(w) = &self.weights {
            for (m, wi) in mu.iter_mut().zip(w) {
                *m *= wi.sqrt();
            }
        }
        mu
    }
}

fn validate_weights(weights: &[f64], links: usize) -> Result<()> {
    if weights.len() != links {
        return Err(Error::input(format!(
            "link weights have length {}, expected L = {links}",
            weights.len()
        )));
    }
    if let Some((l, w)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(w.is_finite() && **w > 0.0))
    {
        return Err(Error::input(format!(
            "link weight {l} is {w}; weights must be positive"
        )));
    }
    Ok(())
}

/// `G^{1/2} A Σ_x^{1/2}`, applying only the transforms that are present.
/// Absent transforms leave `A` bit-for-bit unchanged.
pub fn effective_matrix(
    a: &DenseMatrix,
    sigma_x_sqrt: Option<&DenseMatrix>,
    weights: Option<&[f64]>,
) -> Result<DenseMatrix> {
    let mut out = match sigma_x_sqrt {
        Some(s) => {
            if s.shape() != (a.cols(), a.cols()) {
                return Err(Error::input(
                    "flow covariance square root has the wrong shape",
                ));
            }
            a.matmul(s)
        }
        None => a.clone(),
    };
    if let Some(w) = weights {
        validate_weights(w, a.rows())?;
        let roots: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
        out.scale_rows(&roots);
    }
    Ok(out)
}

/// `L x L` prediction-error covariance `Σ_err(O)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorCovariance(DenseMatrix);

impl ErrorCovariance {
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::input("error covariance must be square"));
        }
        if matrix.asymmetry() > 1e-9 {
            return Err(Error::input("error covariance must be symmetric"));
        }
        Ok(ErrorCovariance(matrix))
    }

    pub(crate) fn from_trusted(matrix: DenseMatrix) -> Self {
        ErrorCovariance(matrix)
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Principal block on `links`.
    pub fn restricted(&self, links: &[usize]) -> DenseMatrix {
        self.0.principal_submatrix(links)
    }
}

pub(crate) fn validate_observed(observed: &[usize], links: usize) -> Result<()> {
    let mut seen = HashSet::with_capacity(observed.len());
    for &o in observed {
        if o >= links {
            return Err(Error::input(format!(
                "observed link {o} out of range 0..{links}"
            )));
        }
        if !seen.insert(o) {
            return Err(Error::input(format!("observed link {o} listed twice")));
        }
    }
    Ok(())
}

/// `Σ_err(O)` from the Gram-system formula (Cholesky solve, no explicit inverse).
pub fn error_covariance_direct(a: &DenseMatrix, observed: &[usize]) -> Result<ErrorCovariance> {
    validate_observed(observed, a.rows())?;
    conditional_link_covariance(a.gram_rows(), observed).map(ErrorCovariance)
}

/// `Σ - Σ_{·o} Σ_oo⁻¹ Σ_{o·}` for a precomputed link covariance `Σ = A Aᵀ`.
/// `observed` must already be validated.
pub(crate) fn conditional_link_covariance(
    mut sigma: DenseMatrix,
    observed: &[usize],
) -> Result<DenseMatrix> {
    if observed.is_empty() {
        return Ok(sigma);
    }
    let k = observed.len();
    let gram = sigma.principal_submatrix(observed);
    let chol = Cholesky::new(&gram, GRAM_RANK_TOL).map_err(|_| Error::RedundantSelection {
        observed: observed.to_vec(),
    })?;
    // w_l = R⁻¹ Σ_{o,l}; then Σ_err = Σ - Wᵀ W
    let l = sigma.rows();
    let mut w = DenseMatrix::zeros(l, k);
    for link in 0..l {
        let row = w.row_mut(link);
        for (slot, &o) in row.iter_mut().zip(observed) {
            *slot = sigma[(o, link)];
        }
        chol.solve_lower_in_place(row);
    }
    for i in 0..l {
        for j in i..l {
            let v = sigma[(i, j)] - dot(w.row(i), w.row(j));
            sigma[(i, j)] = v;
            sigma[(j, i)] = v;
        }
    }
    Ok(sigma)
}

/// Objective value `Z(O)` of an error covariance.
///
/// Trace sums the diagonal. Spectral uses a dense eigensolve up to
/// [`EXACT_SPECTRAL_LIMIT`] links and otherwise `power_m` power iterations from
/// a Gaussian start drawn with `seed`.
pub fn objective(
    err: &ErrorCovariance,
    criterion: Criterion,
    power_m: usize,
    seed: u64,
) -> Result<f64> {
    let m = err.matrix();
    let value = match criterion {
        Criterion::Trace => m.trace(),
        Criterion::Spectral if m.rows() == 0 => 0.0,
        Criterion::Spectral if m.rows() <= EXACT_SPECTRAL_LIMIT => largest_eigenvalue(m)?,
        Criterion::Spectral => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = gaussian_unit_vector(&mut rng, m.rows());
            dense_power_method(m, PowerMethod::new(power_m), start)?.value
        }
    };
    Ok(value.max(0.0))
}

/// Best linear unbiased prediction of the unobserved link loads.
#[derive(Clone, Debug)]
pub struct KrigingPrediction {
    /// Unobserved links `U = L \ O`, ascending; `values[i]` predicts link `unobserved[i]`.
    pub unobserved: Vec<usize>,
    pub values: Vec<f64>,
    /// `Σ_uu - Σ_uo Σ_oo⁻¹ Σ_ou`, the conditional covariance of `y_u | y_o`.
    pub conditional_covariance: DenseMatrix,
}

/// `ŷ_u = μ_u + Σ_uo Σ_oo⁻¹ (y_o - μ_o)`.
///
/// `observed_loads[i]` is the load on `observed[i]`, in the problem's
/// effective units (multiply raw loads by `√w` first when weights are set, see
/// [`weight_loads`]).
pub fn kriging_predict(
    problem: &MonitoringProblem,
    observed: &[usize],
    observed_loads: &[f64],
) -> Result<KrigingPrediction> {
    let l = problem.link_count();
    validate_observed(observed, l)?;
    if observed_loads.len() != observed.len() {
        return Err(Error::input(format!(
            "{} loads supplied for {} observed links",
            observed_loads.len(),
            observed.len()
        )));
    }
    let sigma = problem.effective().gram_rows();
    let mu = problem.link_mean();
    let in_o: HashSet<usize> = observed.iter().copied().collect();
    let unobserved: Vec<usize> = (0..l).filter(|i| !in_o.contains(i)).collect();

    let k = observed.len();
    let gram = sigma.principal_submatrix(observed);
    let chol = Cholesky::new(&gram, GRAM_RANK_TOL).map_err(|_| Error::RedundantSelection {
        observed: observed.to_vec(),
    })?;
    let resid: Vec<f64> = observed
        .iter()
        .zip(observed_loads)
        .map(|(&o, &y)| y - mu[o])
        .collect();
    let alpha = chol.solve(&resid);

    let mut w = DenseMatrix::zeros(unobserved.len(), k);
    let mut values = Vec::with_capacity(unobserved.len());
    for (r, &u) in unobserved.iter().enumerate() {
        let cross: Vec<f64> = observed.iter().map(|&o| sigma[(u, o)]).collect();
        values.push(mu[u] + dot(&cross, &alpha));
        let row = w.row_mut(r);
        row.copy_from_slice(&cross);
        chol.solve_lower_in_place(row);
    }
    let n = unobserved.len();
    let mut cov = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = sigma[(unobserved[i], unobserved[j])] - dot(w.row(i), w.row(j));
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    Ok(KrigingPrediction {
        unobserved,
        values,
        conditional_covariance: cov,
    })
}

/// Simulated flow and link loads, one sample per row.
#[derive(Clone, Debug)]
pub struct TrafficSample {
    /// `n x J` flow loads.
    pub flows: DenseMatrix,
    /// `n x L` link loads `y = A x` in raw (unweighted) units.
    pub links: DenseMatrix,
}

/// Draws `x = μ_x + Σ_x^{1/2} z` with `z ~ N(0, I_J)` and returns `(x, A x)`.
pub fn simulate_traffic(
    problem: &MonitoringProblem,
    seed: u64,
    n_samples: usize,
) -> Result<TrafficSample> {
    if n_samples == 0 {
        return Err(Error::input("n_samples must be at least 1"));
    }
    let a = problem.base_matrix();
    let j = a.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flows = DenseMatrix::zeros(n_samples, j);
    let mut links = DenseMatrix::zeros(n_samples, a.rows());
    for s in 0..n_samples {
        let z: Vec<f64> = (0..j).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut x = match problem.flow_covariance_sqrt() {
            Some(sq) => sq.mul_vec(&z),
            None => z,
        };
        if let Some(mu) = problem.flow_mean() {
            x.iter_mut().zip(mu).for_each(|(xi, m)| *xi += m);
        }
        links.row_mut(s).copy_from_slice(&a.mul_vec(&x));
        flows.row_mut(s).copy_from_slice(&x);
    }
    Ok(TrafficSample { flows, links })
}

/// Raw loads to weighted units: `y^G = G^{1/2} y`.
pub fn weight_loads(loads: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    validate_weights(weights, loads.len())?;
    Ok(loads
        .iter()
        .zip(weights)
        .map(|(y, w)| y * w.sqrt())
        .collect())
}

/// Weighted prediction back to original units: `ŷ = G^{-1/2} ŷ^G`.
pub fn unweight_prediction(weighted: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    validate_weights(weights, weighted.len())?;
    Ok(weighted
        .iter()
        .zip(weights)
        .map(|(y, w)| y / w.sqrt())
        .collect())
}
