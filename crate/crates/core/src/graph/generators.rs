//! Instance families. Every generator is a pure function of its parameters
//! and seed, and every output passes `validate_instance`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, EdgeAttrs, Graph, Instance};
use crate::error::GraphError;

fn check_distinct(ids: &[u64]) -> Result<(), GraphError> {
    let mut seen = HashSet::with_capacity(ids.len());
    if ids.iter().all(|id| seen.insert(*id)) {
        Ok(())
    } else {
        Err(GraphError::DuplicateIds)
    }
}

/// Path visiting the nodes in the order of `ids`.
pub fn make_path(ids: &[u64]) -> Result<Instance, GraphError> {
    if ids.is_empty() {
        return Err(GraphError::Infeasible("a path needs at least one node".into()));
    }
    check_distinct(ids)?;
    let pairs: Vec<_> = (1..ids.len()).map(|i| (i - 1, i)).collect();
    Instance::from_graph(Graph::from_pairs(ids.len(), &pairs)?, ids.to_vec())
}

/// Cycle visiting the nodes in the order of `ids` and closing back to the first.
pub fn make_cycle(ids: &[u64]) -> Result<Instance, GraphError> {
    if ids.len() < 3 {
        return Err(GraphError::Infeasible(format!(
            "a cycle needs at least 3 nodes, got {}",
            ids.len()
        )));
    }
    check_distinct(ids)?;
    let n = ids.len();
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Instance::from_graph(Graph::from_pairs(n, &pairs)?, ids.to_vec())
}

/// Identifiers `1..=n`.
pub fn sequential_ids(n: usize) -> Vec<u64> {
    (1..=n as u64).collect()
}

pub(crate) fn shuffled_ids(n: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut ids = sequential_ids(n);
    ids.shuffle(rng);
    ids
}

/// Uniform random labeled tree (Prüfer decoding) with shuffled ids `1..=n`.
pub fn make_random_tree(n: usize, seed: u64) -> Result<Instance, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = random_tree_pairs(n, &mut rng)?;
    let ids = shuffled_ids(n, &mut rng);
    Instance::from_graph(Graph::from_pairs(n, &pairs)?, ids)
}

pub(crate) fn random_tree_pairs(
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>, GraphError> {
    match n {
        0 => Err(GraphError::Infeasible("a tree needs at least one node".into())),
        1 => Ok(Vec::new()),
        2 => Ok(vec![(0, 1)]),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            let mut degree = vec![1usize; n];
            for &s in &seq {
                degree[s] += 1;
            }
            let mut pairs = Vec::with_capacity(n - 1);
            for &s in &seq {
                let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
                pairs.push((leaf, s));
                degree[leaf] -= 1;
                degree[s] -= 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
            pairs.push((rest[0], rest[1]));
            Ok(pairs)
        }
    }
}

/// Random connected simple graph with exactly `m` edges: a uniform random
/// tree plus `m - (n - 1)` distinct extra edges.
pub fn make_random_connected(n: usize, m: usize, seed: u64) -> Result<Instance, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = random_connected_pairs(n, m, &mut rng)?;
    let ids = shuffled_ids(n, &mut rng);
    Instance::from_graph(Graph::from_pairs(n, &pairs)?, ids)
}

pub(crate) fn random_connected_pairs(
    n: usize,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>, GraphError> {
    let max = n.saturating_mul(n.saturating_sub(1)) / 2;
    if n == 0 || m + 1 < n || m > max {
        return Err(GraphError::Infeasible(format!(
            "no connected simple graph with n = {n} and m = {m}"
        )));
    }
    let mut pairs = random_tree_pairs(n, rng)?;
    let present: HashSet<(usize, usize)> = pairs.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let mut extra: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|p| !present.contains(p))
        .collect();
    extra.shuffle(rng);
    pairs.extend(extra.into_iter().take(m - (n - 1)));
    Ok(pairs)
}

/// [`make_random_connected`] with weights uniform in `[1, w]` and declared bound `w`.
pub fn make_random_weighted(n: usize, m: usize, w: u64, seed: u64) -> Result<Instance, GraphError> {
    if w == 0 {
        return Err(GraphError::Infeasible("weight bound must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = random_connected_pairs(n, m, &mut rng)?;
    let edges = pairs
        .into_iter()
        .map(|(u, v)| Edge {
            u,
            v,
            attrs: EdgeAttrs::weighted(rng.gen_range(1..=w)),
        })
        .collect();
    let mut g = Graph::new(n, edges)?;
    g.set_weight_bound(Some(w));
    let ids = shuffled_ids(n, &mut rng);
    Instance::from_graph(g, ids)
}

/// Same configuration, identifiers permuted among the nodes by a seeded shuffle.
pub fn relabel_ids(inst: &Instance, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids = inst.ids().to_vec();
    ids.shuffle(&mut rng);
    relabel_ids_with(inst, ids).expect("a permutation keeps the id count")
}

/// Same configuration with the given fresh identifiers (node `v` gets `ids[v]`).
pub fn relabel_ids_with(inst: &Instance, ids: Vec<u64>) -> Result<Instance, GraphError> {
    check_distinct(&ids)?;
    inst.clone().with_ids(ids)
}
