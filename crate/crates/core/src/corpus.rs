//! Seeded yes-instances for every scheme in the registry.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::{ceil_log2, BitString};
use crate::error::GraphError;
use crate::graph::algo::{bipartition, k_coloring, maximum_bipartite_matching, minimum_spanning_tree, DisjointSet};
use crate::graph::generators::{random_connected_pairs, random_tree_pairs, shuffled_ids};
use crate::graph::{make_cycle, make_path, make_symmetric_dumbbell, EdgeAttrs, Graph, Instance};

fn err(message: impl Into<String>) -> GraphError {
    GraphError::Infeasible(message.into())
}

fn connected(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> Result<Instance, GraphError> {
    let m = (n.saturating_sub(1) + extra).min(n * n.saturating_sub(1) / 2);
    let pairs = random_connected_pairs(n, m, rng)?;
    let ids = shuffled_ids(n, rng);
    Instance::from_graph(Graph::from_pairs(n, &pairs)?, ids)
}

fn tree(n: usize, rng: &mut ChaCha8Rng) -> Result<Instance, GraphError> {
    let pairs = random_tree_pairs(n, rng)?;
    let ids = shuffled_ids(n, rng);
    Instance::from_graph(Graph::from_pairs(n, &pairs)?, ids)
}

fn set_selected(inst: &mut Instance, chosen: &[usize]) {
    for e in 0..inst.graph().edge_count() {
        let mut a = inst.graph().edge(e).attrs;
        a.selected = Some(chosen.contains(&e));
        inst.graph_mut().set_edge_attrs(e, a);
    }
}

fn set_bits(inst: &mut Instance, ones: &[usize]) {
    for v in 0..inst.node_count() {
        inst.set_input(v, Some(BitString::from_uint(u64::from(ones.contains(&v)), 1)));
    }
}

/// A graph that is k-colorable: a tree for `k <= 2`, otherwise a sparse
/// random graph retried until the coloring search succeeds.
fn colorable(n: usize, k: u64, rng: &mut ChaCha8Rng) -> Result<(Instance, Vec<usize>), GraphError> {
    if k == 1 && n > 1 {
        return Err(err("only single nodes are 1-colorable"));
    }
    if k >= 3 {
        for _ in 0..16 {
            let inst = connected(n, n / 3, rng)?;
            if let Some(colors) = k_coloring(inst.graph(), k as usize) {
                return Ok((inst, colors));
            }
        }
    }
    let inst = tree(n, rng)?;
    let colors = k_coloring(inst.graph(), k as usize).ok_or_else(|| err("tree coloring failed"))?;
    Ok((inst, colors))
}

/// Star plus random chords: diameter at most 2.
fn hub(n: usize, rng: &mut ChaCha8Rng) -> Result<Instance, GraphError> {
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
    let chords: Vec<(usize, usize)> = (1..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(0.2))
        .collect();
    pairs.extend(chords);
    let ids = shuffled_ids(n, rng);
    Instance::from_graph(Graph::from_pairs(n, &pairs)?, ids)
}

fn complete(n: usize, rng: &mut ChaCha8Rng) -> Result<Instance, GraphError> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let ids = shuffled_ids(n, rng);
    Instance::from_graph(Graph::from_pairs(n, &pairs)?, ids)
}

/// Random spanning tree: Kruskal over a shuffled edge order.
fn random_spanning_tree(g: &Graph, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    let mut dsu = DisjointSet::new(g.node_count());
    order.into_iter().filter(|&e| dsu.union(g.edge(e).u, g.edge(e).v)).collect()
}

/// Connected bipartite graph: a tree plus random edges across its sides.
fn bipartite(n: usize, rng: &mut ChaCha8Rng) -> Result<Instance, GraphError> {
    let base = tree(n, rng)?;
    let side = bipartition(base.graph()).expect("trees are bipartite");
    let mut g = base.graph().clone();
    for u in 0..n {
        for v in u + 1..n {
            if side[u] != side[v] && !g.has_edge(u, v) && rng.gen_bool(1.5 / n as f64) {
                g.add_edge(u, v, EdgeAttrs::default())?;
            }
        }
    }
    Instance::from_graph(g, base.ids().to_vec())
}

/// A yes-instance with `n` nodes for the named scheme (see
/// [`crate::schemes::scheme_by_name`]). Deterministic in `(name, n, seed)`.
/// Dumbbell instances round `n` to the nearest feasible size.
pub fn yes_instance(name: &str, n: usize, seed: u64) -> Result<Instance, GraphError> {
    if n == 0 {
        return Err(err("instances have at least one node"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (head, param) = match name.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (name, None),
    };
    let number = |p: Option<&str>| -> Result<u64, GraphError> {
        p.and_then(|x| x.parse().ok()).ok_or_else(|| err(format!("scheme {name:?} needs a numeric parameter")))
    };
    match head {
        "proper-coloring" => {
            let k = number(param)?;
            let (mut inst, colors) = colorable(n, k, &mut rng)?;
            for (v, c) in colors.into_iter().enumerate() {
                inst.set_input(v, Some(BitString::from_uint(c as u64, ceil_log2(k))));
            }
            Ok(inst)
        }
        "k-colorability" => Ok(colorable(n, number(param)?, &mut rng)?.0),
        "amos" => {
            let mut inst = connected(n, n / 4, &mut rng)?;
            let ones: Vec<usize> = if rng.gen_bool(0.5) { vec![rng.gen_range(0..n)] } else { vec![] };
            set_bits(&mut inst, &ones);
            Ok(inst)
        }
        "exact-count" => {
            let k = number(param)? as usize;
            if k > n {
                return Err(err(format!("cannot place {k} ones on {n} nodes")));
            }
            let mut inst = connected(n, n / 4, &mut rng)?;
            let mut nodes: Vec<usize> = (0..n).collect();
            nodes.shuffle(&mut rng);
            set_bits(&mut inst, &nodes[..k]);
            Ok(inst)
        }
        "spanning-tree" => {
            let mut inst = connected(n, n / 2, &mut rng)?;
            let chosen = random_spanning_tree(inst.graph(), &mut rng);
            set_selected(&mut inst, &chosen);
            Ok(inst)
        }
        "mst" => {
            let m = (n - 1 + n / 2).min(n * (n - 1) / 2);
            let mut inst = crate::graph::make_random_weighted(n, m, 100, rng.gen())?;
            let chosen = minimum_spanning_tree(&inst).ok_or_else(|| err("weighted graph without a tree"))?;
            set_selected(&mut inst, &chosen);
            Ok(inst)
        }
        "bipartite-matching" => {
            let mut inst = bipartite(n, &mut rng)?;
            let side = bipartition(inst.graph()).expect("built bipartite");
            let matching = maximum_bipartite_matching(inst.graph(), &side);
            set_selected(&mut inst, &matching);
            Ok(inst)
        }
        "universal" => match param.unwrap_or("") {
            "cycle" => make_cycle(&shuffled_ids(n.max(3), &mut rng)),
            "path" => make_path(&shuffled_ids(n, &mut rng)),
            p => {
                let (kind, k) = p.split_once(':').ok_or_else(|| err(format!("unknown predicate {p:?}")))?;
                let k: usize = k.parse().map_err(|_| err("predicate parameter must be an integer"))?;
                match kind {
                    "dumbbell" => {
                        let s = (n.saturating_sub(2 * k + 1) / 2).max(1);
                        let base = tree(s, &mut rng)?;
                        let sym = make_symmetric_dumbbell(base.graph(), k)?;
                        let ids = shuffled_ids(sym.node_count(), &mut rng);
                        sym.with_ids(ids)
                    }
                    "diameter" => match k {
                        0 => make_path(&[1]),
                        1 => complete(n, &mut rng),
                        _ => hub(n, &mut rng),
                    },
                    _ => Err(err(format!("unknown predicate {p:?}"))),
                }
            }
        },
        "path" | "degree2" | "const1bit" | "parity" | "mod-counter" => make_path(&shuffled_ids(n, &mut rng)),
        _ => Err(err(format!("no generator for scheme {name:?}"))),
    }
}
