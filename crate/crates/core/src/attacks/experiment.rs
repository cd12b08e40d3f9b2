//! Success-rate experiments over planted instances.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng;
use crate::varieties::AbelianVariety;
use crate::Result;

use super::planted::{planted, planted_on};
use super::{run_attack, AttackName};

/// Per-attack summary. `mean_ms` is wall-clock and the only field that varies between runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub attack: String,
    pub class: String,
    pub trials: usize,
    pub successes: usize,
    pub mean_ms: f64,
    pub seed: u64,
}

/// Outcome of one trial: the planted value and what the attack returned.
#[derive(Clone, Debug)]
pub struct Trial {
    pub truth: u64,
    pub result: Result<u64>,
    pub ms: f64,
}

/// Trial `i` draws everything from stream `i` of `seed`; trials run in parallel and are
/// returned in index order.
pub fn run_trials(name: AttackName, trials: usize, seed: u64) -> Result<Vec<Trial>> {
    run_trials_on(name, None, trials, seed)
}

/// As [`run_trials`], on an explicit `(backend, l)` instead of the default class.
pub fn run_trials_on(name: AttackName, class: Option<(&Arc<AbelianVariety>, u64)>, trials: usize, seed: u64) -> Result<Vec<Trial>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let inst = match class {
                Some((av, ell)) => planted_on(name, av, ell, &mut r)?,
                None => planted(name, i, &mut r)?,
            };
            let t0 = Instant::now();
            let result = run_attack(name, &inst, &mut r);
            Ok(Trial { truth: inst.truth.expect("planted"), result, ms: t0.elapsed().as_secs_f64() * 1e3 })
        })
        .collect()
}

pub fn run_experiment(name: AttackName, trials: usize, seed: u64) -> Result<ExperimentReport> {
    run_experiment_on(name, None, trials, seed)
}

pub fn run_experiment_on(
    name: AttackName,
    class: Option<(&Arc<AbelianVariety>, u64)>,
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let ts = run_trials_on(name, class, trials, seed)?;
    let successes = ts.iter().filter(|t| t.result.as_ref().ok() == Some(&t.truth)).count();
    let mean_ms = if ts.is_empty() { 0.0 } else { ts.iter().map(|t| t.ms).sum::<f64>() / ts.len() as f64 };
    Ok(ExperimentReport {
        attack: name.as_str().into(),
        class: name.class().into(),
        trials,
        successes,
        mean_ms,
        seed,
    })
}
