use std::collections::HashSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::design::MonitoringProblem;
use crate::error::{Error, Result};

use super::{run, AlgorithmSpec, SelectionResult};

/// `r` independently seeded runs of one randomized algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub base: AlgorithmSpec,
    pub seeds: Vec<u64>,
}

impl EnsembleSpec {
    pub fn new(base: AlgorithmSpec, seeds: Vec<u64>) -> Result<Self> {
        let spec = EnsembleSpec { base, seeds };
        spec.validate()?;
        Ok(spec)
    }

    /// Member `i` runs with `master_seed + i` (wrapping).
    pub fn from_master_seed(base: AlgorithmSpec, runs: usize, master_seed: u64) -> Result<Self> {
        let seeds = (0..runs as u64)
            .map(|i| master_seed.wrapping_add(i))
            .collect();
        Self::new(base, seeds)
    }

    pub fn runs(&self) -> usize {
        self.seeds.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.base.kind.is_randomized() {
            return Err(Error::input(format!(
                "ensembles need a randomized base algorithm, got {}",
                self.base.kind
            )));
        }
        if self.seeds.is_empty() {
            return Err(Error::input("an ensemble needs at least one run"));
        }
        let distinct: HashSet<_> = self.seeds.iter().collect();
        if distinct.len() != self.seeds.len() {
            return Err(Error::input("ensemble seeds must be distinct"));
        }
        self.base.validate()
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleResult {
    /// The winning member, unchanged.
    pub best: SelectionResult,
    pub best_index: usize,
    /// Audited final error of every member, in seed order.
    pub member_errors: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Elapsed time of the whole parallel run, audits included.
    pub wall_time: Duration,
}

/// Runs every member (in parallel) and keeps the smallest audited final
/// error; equal errors go to the lowest member index.
pub fn ensemble(problem: &MonitoringProblem, spec: &EnsembleSpec) -> Result<EnsembleResult> {
    spec.validate()?;
    let started = Instant::now();
    let members: Vec<SelectionResult> = spec
        .seeds
        .par_iter()
        .map(|&seed| run(problem, &spec.base.with_seed(seed)))
        .collect::<Result<_>>()?;
    let wall_time = started.elapsed();
    let member_errors: Vec<f64> = members.iter().map(SelectionResult::final_error).collect();
    let mut best_index = 0;
    for (i, &e) in member_errors.iter().enumerate() {
        if e < member_errors[best_index] {
            best_index = i;
        }
    }
    let best = members
        .into_iter()
        .nth(best_index)
        .expect("index within members");
    Ok(EnsembleResult {
        best,
        best_index,
        member_errors,
        seeds: spec.seeds.clone(),
        wall_time,
    })
}
