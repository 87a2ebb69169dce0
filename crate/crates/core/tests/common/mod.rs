//! Test fixtures and oracles built on nalgebra, independent of the crate's own kernels.
#![allow(dead_code)]

use nalgebra::DMatrix;
use netkrig_core::heuristics::SelectionResult;
use netkrig_core::linalg::DenseMatrix;
use netkrig_core::topology::{
    generate_preferential_attachment, parse_edge_list, parse_flow_list, routing_matrix_for,
    sample_flows,
};
use netkrig_core::{certify, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const INTERNET2_EDGES: &str = include_str!("../../../../data/internet2_like.edges");
pub const INTERNET2_FLOWS: &str = include_str!("../../../../data/internet2_like.flows");

pub fn gaussian(l: usize, j: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(l, j, |_, _| StandardNormal.sample(&mut rng))
}

/// Random 0/1 matrix with density `p`; every column gets at least one entry.
pub fn random_incidence(l: usize, j: usize, p: f64, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DenseMatrix::from_fn(l, j, |_, _| f64::from(u8::from(rng.random_bool(p))));
    for c in 0..j {
        if a.column(c).iter().all(|&v| v == 0.0) {
            let r = rng.random_range(0..l);
            a[(r, c)] = 1.0;
        }
    }
    a
}

pub fn internet2_like() -> DenseMatrix {
    let topo = parse_edge_list(INTERNET2_EDGES, "edges")
        .unwrap()
        .with_flows(parse_flow_list(INTERNET2_FLOWS, "flows").unwrap())
        .unwrap();
    routing_matrix_for(&topo).unwrap().into_matrix()
}

/// Shortest-path routing matrix on a preferential-attachment graph.
pub fn pa_routing(nodes: usize, attach: usize, flows: usize, seed: u64) -> DenseMatrix {
    let t = generate_preferential_attachment(nodes, attach, seed).unwrap();
    routing_matrix_for(&sample_flows(t, flows, seed ^ 0x9e37).unwrap())
        .unwrap()
        .into_matrix()
}

pub fn to_na(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn rel_frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// `A (I - A_oᵀ (A_o A_oᵀ)⁻¹ A_o) Aᵀ` with an explicit inverse.
pub fn oracle_error_covariance(a: &DenseMatrix, observed: &[usize]) -> Option<DMatrix<f64>> {
    let a = to_na(a);
    if observed.is_empty() {
        return Some(&a * a.transpose());
    }
    let rows: Vec<_> = observed.iter().map(|&o| a.row(o).clone_owned()).collect();
    let ao = DMatrix::from_rows(&rows);
    let gram = &ao * ao.transpose();
    let inv = gram.clone().try_inverse()?;
    // reject numerically singular Gram blocks
    let cond = gram.norm() * inv.norm();
    if !cond.is_finite() || cond > 1e10 {
        return None;
    }
    let j = a.ncols();
    let p = DMatrix::identity(j, j) - ao.transpose() * inv * &ao;
    Some(&a * p * a.transpose())
}

pub fn oracle_objective(sigma: &DMatrix<f64>, criterion: Criterion) -> f64 {
    match criterion {
        Criterion::Trace => sigma.trace(),
        Criterion::Spectral => sigma
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(0.0, f64::max),
    }
}

/// Greedy on the oracle objective; lowest index within `1e-9` relative of the best.
pub fn oracle_greedy(a: &DenseMatrix, k: usize, criterion: Criterion) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut current = oracle_objective(&oracle_error_covariance(a, &[]).unwrap(), criterion);
    while chosen.len() < k {
        let mut cands = Vec::new();
        for j in (0..a.rows()).filter(|j| !chosen.contains(j)) {
            let mut o = chosen.clone();
            o.push(j);
            if let Some(s) = oracle_error_covariance(a, &o) {
                cands.push((j, oracle_objective(&s, criterion)));
            }
        }
        let deltas: Vec<(usize, f64)> = cands.iter().map(|&(j, v)| (j, current - v)).collect();
        let Some(best) = deltas.iter().map(|d| d.1).reduce(f64::max) else {
            break;
        };
        if best <= 0.0 {
            break;
        }
        let pos = deltas
            .iter()
            .position(|d| d.1 >= best - 1e-9 * best)
            .unwrap();
        let pick = cands[pos];
        chosen.push(pick.0);
        current = pick.1;
    }
    chosen
}

/// Brute-force optimum of `Z` over `k`-subsets using the oracle formula.
pub fn oracle_optimum(a: &DenseMatrix, k: usize, criterion: Criterion) -> f64 {
    fn rec(
        a: &DenseMatrix,
        start: usize,
        k: usize,
        cur: &mut Vec<usize>,
        crit: Criterion,
        best: &mut f64,
    ) {
        if cur.len() == k {
            if let Some(s) = oracle_error_covariance(a, cur) {
                *best = best.min(oracle_objective(&s, crit));
            }
            return;
        }
        for j in start..a.rows() {
            cur.push(j);
            rec(a, j + 1, k, cur, crit, best);
            cur.pop();
        }
    }
    let mut best = f64::INFINITY;
    rec(a, 0, k, &mut Vec::new(), criterion, &mut best);
    best
}

/// Structural invariants plus the PCA certificate; panics on any violation.
pub fn certified(result: &SelectionResult, effective: &DenseMatrix) {
    result
        .validate(effective.rows())
        .expect("selection invariants");
    certify(result, effective).expect("PCA bound certificate");
}

/// Random symmetric PSD `n x n` matrix with `λ₁ / λ₂ ≥ gap`, plus its exact `λ₁`.
pub fn psd_with_gap(n: usize, gap: f64, seed: u64) -> (DenseMatrix, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: DMatrix<f64> = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
    let q = g.qr().q();
    let mut lambda: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    lambda.sort_by(|x, y| y.partial_cmp(x).unwrap());
    lambda[0] = lambda[1] * rng.random_range(gap..2.0 * gap);
    let d: DMatrix<f64> = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lambda.clone()));
    let m: DMatrix<f64> = &q * d * q.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let exact = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::MIN, f64::max);
    let dense = DenseMatrix::from_fn(n, n, |i, j| m[(i, j)]);
    (dense, exact)
}
