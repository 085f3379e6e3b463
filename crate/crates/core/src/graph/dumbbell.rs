//! Dumbbell graphs: two copies of a base graph joined by a path of `2k + 1`
//! nodes, plus the brute-force isomorphism tests used to tell the
//! symmetric and perturbed variants apart.

use super::algo::{components, is_connected};
use super::{generators::sequential_ids, Edge, EdgeAttrs, Graph, Instance};
use crate::error::GraphError;

#[derive(Debug, Clone)]
pub struct DumbbellPair {
    pub symmetric: Instance,
    pub asymmetric: Instance,
    /// The flipped pair of base-graph nodes in the second copy.
    pub flipped: (usize, usize),
}

/// Builds the symmetric dumbbell over `base` with a bridge of `2k + 1`
/// nodes, and the variant whose second copy differs by one edge flip that
/// breaks isomorphism. Base node 0 is the attachment point of each copy.
pub fn make_dumbbell(base: &Graph, k: usize) -> Result<DumbbellPair, GraphError> {
    if k == 0 {
        return Err(GraphError::Infeasible("bridge radius k must be at least 1".into()));
    }
    if !is_connected(base) {
        return Err(GraphError::Infeasible("base graph must be connected".into()));
    }
    let s = base.node_count();
    let mut flipped = None;
    'search: for i in 0..s {
        for j in i + 1..s {
            let candidate = flip_edge(base, i, j);
            if is_connected(&candidate) && !isomorphic(base, &candidate) {
                flipped = Some((i, j, candidate));
                break 'search;
            }
        }
    }
    let (i, j, perturbed) = flipped.ok_or(GraphError::PerturbationImpossible)?;
    Ok(DumbbellPair {
        symmetric: assemble(base, base, k)?,
        asymmetric: assemble(base, &perturbed, k)?,
        flipped: (i, j),
    })
}

/// Only the symmetric variant; works for every connected base graph.
pub fn make_symmetric_dumbbell(base: &Graph, k: usize) -> Result<Instance, GraphError> {
    if k == 0 {
        return Err(GraphError::Infeasible("bridge radius k must be at least 1".into()));
    }
    if !is_connected(base) {
        return Err(GraphError::Infeasible("base graph must be connected".into()));
    }
    assemble(base, base, k)
}

fn flip_edge(g: &Graph, a: usize, b: usize) -> Graph {
    let mut out = g.clone();
    match g.edge_between(a, b) {
        Some(idx) => {
            out.remove_edge(idx);
        }
        None => {
            out.add_edge(a, b, EdgeAttrs::default()).expect("nodes in range");
        }
    }
    out
}

fn assemble(left: &Graph, right: &Graph, k: usize) -> Result<Instance, GraphError> {
    let s = left.node_count();
    let bridge = 2 * k + 1;
    let n = 2 * s + bridge;
    let mut edges: Vec<Edge> = left.edges().to_vec();
    edges.extend(right.edges().iter().map(|e| Edge {
        u: e.u + s,
        v: e.v + s,
        attrs: e.attrs,
    }));
    let first = 2 * s;
    let plain = |u, v| Edge {
        u,
        v,
        attrs: EdgeAttrs::default(),
    };
    edges.push(plain(0, first));
    for p in first..first + bridge - 1 {
        edges.push(plain(p, p + 1));
    }
    edges.push(plain(first + bridge - 1, s));
    Instance::from_graph(Graph::new(n, edges)?, sequential_ids(n))
}

/// Brute-force isomorphism test with backtracking; intended for small graphs.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    iso_search(a, b, None)
}

/// Isomorphism that must map `root_a` to `root_b`.
pub fn rooted_isomorphic(a: &Graph, root_a: usize, b: &Graph, root_b: usize) -> bool {
    iso_search(a, b, Some((root_a, root_b)))
}

fn iso_search(a: &Graph, b: &Graph, roots: Option<(usize, usize)>) -> bool {
    let n = a.node_count();
    if n != b.node_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    if let Some((ra, rb)) = roots {
        if da[ra] != db[rb] {
            return false;
        }
    }
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    if let Some((ra, rb)) = roots {
        map[ra] = rb;
        used[rb] = true;
        order.retain(|&v| v != ra);
    }
    extend_map(a, b, &order, 0, &mut map, &mut used)
}

fn extend_map(a: &Graph, b: &Graph, order: &[usize], pos: usize, map: &mut [usize], used: &mut [bool]) -> bool {
    let Some(&v) = order.get(pos) else {
        return true;
    };
    for w in 0..b.node_count() {
        if used[w] || a.degree(v) != b.degree(w) {
            continue;
        }
        let consistent = (0..a.node_count())
            .filter(|&x| map[x] != usize::MAX)
            .all(|x| a.has_edge(v, x) == b.has_edge(w, map[x]));
        if consistent {
            map[v] = w;
            used[w] = true;
            if extend_map(a, b, order, pos + 1, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[w] = false;
        }
    }
    false
}

/// Subgraph induced by `nodes`; node `i` of the result is `nodes[i]`.
pub fn induced_subgraph(g: &Graph, nodes: &[usize]) -> Graph {
    let mut index = vec![usize::MAX; g.node_count()];
    for (i, &v) in nodes.iter().enumerate() {
        index[v] = i;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| index[e.u] != usize::MAX && index[e.v] != usize::MAX)
        .map(|e| Edge {
            u: index[e.u],
            v: index[e.v],
            attrs: e.attrs,
        })
        .collect();
    Graph::new(nodes.len(), edges).expect("indices in range")
}

/// True iff `g` splits into `H1 - bridge - H2` where the bridge is a chain of
/// `2k + 1` degree-2 nodes and `(H1, x)` and `(H2, y)` are isomorphic as
/// graphs rooted at their attachment nodes.
pub fn is_symmetric_dumbbell(g: &Graph, k: usize) -> bool {
    let bridge = 2 * k + 1;
    let n = g.node_count();
    if k == 0 || !is_connected(g) || n < bridge + 2 {
        return false;
    }
    for start in (0..n).filter(|&v| g.degree(v) == 2) {
        for &(first_step, _) in g.neighbors(start) {
            let Some(chain) = walk_chain(g, start, first_step, bridge) else {
                continue;
            };
            let other = |v: usize, not: usize| g.neighbors(v).iter().map(|&(w, _)| w).find(|&w| w != not);
            let (Some(x), Some(y)) = (other(start, first_step), other(chain[bridge - 1], chain[bridge - 2])) else {
                continue;
            };
            if chain.contains(&x) || chain.contains(&y) || x == y {
                continue;
            }
            if halves_match(g, &chain, x, y) {
                return true;
            }
        }
    }
    false
}

/// `len` distinct degree-2 nodes starting `start, next, ...`.
fn walk_chain(g: &Graph, start: usize, next: usize, len: usize) -> Option<Vec<usize>> {
    let mut chain = vec![start];
    let (mut prev, mut cur) = (start, next);
    while chain.len() < len {
        if g.degree(cur) != 2 || chain.contains(&cur) {
            return None;
        }
        chain.push(cur);
        let step = g.neighbors(cur).iter().map(|&(w, _)| w).find(|&w| w != prev)?;
        prev = cur;
        cur = step;
    }
    Some(chain)
}

fn halves_match(g: &Graph, chain: &[usize], x: usize, y: usize) -> bool {
    let rest: Vec<usize> = (0..g.node_count()).filter(|v| !chain.contains(v)).collect();
    let sub = induced_subgraph(g, &rest);
    let labels = components(&sub);
    if labels.iter().max().copied() != Some(1) {
        return false;
    }
    let xi = rest.iter().position(|&v| v == x).expect("x outside chain");
    let yi = rest.iter().position(|&v| v == y).expect("y outside chain");
    if labels[xi] == labels[yi] {
        return false;
    }
    let side = |label: usize| -> Vec<usize> {
        (0..rest.len()).filter(|&i| labels[i] == label).map(|i| rest[i]).collect()
    };
    let (hx, hy) = (side(labels[xi]), side(labels[yi]));
    let gx = induced_subgraph(g, &hx);
    let gy = induced_subgraph(g, &hy);
    let rx = hx.iter().position(|&v| v == x).expect("x in its half");
    let ry = hy.iter().position(|&v| v == y).expect("y in its half");
    rooted_isomorphic(&gx, rx, &gy, ry)
}
