//! Randomized decision for "at most one selected node", with no
//! certificates: nodes holding a 1 flip a biased coin, everyone else accepts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{Decision, NodeDecision, Verdict};
use crate::error::RandomizedError;
use crate::graph::{input_as_bit, Instance};

/// `(sqrt(5) - 1) / 2`, the probability that balances the error on one
/// selected node against the error on two.
pub fn default_p() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OnesClass {
    ZeroOnes,
    OneOne,
    ManyOnes,
}

impl OnesClass {
    pub fn of(inst: &Instance) -> OnesClass {
        match ones(inst).len() {
            0 => OnesClass::ZeroOnes,
            1 => OnesClass::OneOne,
            _ => OnesClass::ManyOnes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomizedVerdictStats {
    pub trials: u64,
    pub accepted: u64,
    pub accept_frequency: f64,
    pub ones: usize,
    pub class: OnesClass,
    pub p: f64,
    pub seed: u64,
}

/// Node indices whose input is a 1. Malformed inputs count as 1 so that
/// they never get a free pass.
fn ones(inst: &Instance) -> Vec<usize> {
    (0..inst.node_count())
        .filter(|&v| input_as_bit(inst.input(v)) != Some(false))
        .collect()
}

fn check_p(p: f64) -> Result<(), RandomizedError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(RandomizedError::InvalidProbability(p))
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn coin(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.gen_bool(p)
}

/// One run of the randomized decider, deterministic in `seed`.
pub fn amos_random_decide(inst: &Instance, p: f64, seed: u64) -> Result<Verdict, RandomizedError> {
    check_p(p)?;
    let selected = ones(inst);
    let mut rng = trial_rng(seed, 0);
    let mut accept = vec![true; inst.node_count()];
    for &v in &selected {
        accept[v] = coin(&mut rng, p);
    }
    let nodes: Vec<NodeDecision> = (0..inst.node_count())
        .map(|v| NodeDecision {
            id: inst.id(v),
            decision: Decision::from_bool(accept[v]),
        })
        .collect();
    Ok(Verdict {
        global: Decision::from_bool(accept.iter().all(|&a| a)),
        certificate_bits: 0,
        nodes,
    })
}

/// Monte Carlo estimate of the acceptance probability. Trial `t` draws its
/// coins from stream `t` of a generator seeded with `seed`.
pub fn estimate_acceptance(
    inst: &Instance,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<RandomizedVerdictStats, RandomizedError> {
    check_p(p)?;
    if trials == 0 {
        return Err(RandomizedError::NoTrials);
    }
    let count = ones(inst).len();
    let accepted = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = trial_rng(seed, t);
            (0..count).all(|_| coin(&mut rng, p))
        })
        .count() as u64;
    Ok(RandomizedVerdictStats {
        trials,
        accepted,
        accept_frequency: accepted as f64 / trials as f64,
        ones: count,
        class: OnesClass::of(inst),
        p,
        seed,
    })
}
