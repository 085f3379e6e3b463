//! Centralized graph algorithms used by provers and membership oracles.

use std::cmp::Ordering;
use std::collections::VecDeque;

use super::{Graph, Instance};

pub fn bfs_distances(g: &Graph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    let mut queue = VecDeque::new();
    dist[src] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued nodes have a distance");
        for &(w, _) in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Component label per node, labels numbered in order of first node.
pub fn components(g: &Graph) -> Vec<usize> {
    let mut label = vec![usize::MAX; g.node_count()];
    let mut next = 0;
    for s in 0..g.node_count() {
        if label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = next;
        while let Some(u) = stack.pop() {
            for &(w, _) in g.neighbors(u) {
                if label[w] == usize::MAX {
                    label[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn component_count(g: &Graph) -> usize {
    components(g).into_iter().max().map_or(0, |m| m + 1)
}

pub fn is_connected(g: &Graph) -> bool {
    g.node_count() > 0 && component_count(g) == 1
}

/// No self-loops and no parallel edges.
pub fn is_simple(g: &Graph) -> bool {
    let mut seen = std::collections::HashSet::new();
    g.edges()
        .iter()
        .all(|e| e.u != e.v && seen.insert((e.u.min(e.v), e.u.max(e.v))))
}

/// `None` when the graph is disconnected or empty.
pub fn diameter(g: &Graph) -> Option<usize> {
    if !is_connected(g) {
        return None;
    }
    (0..g.node_count())
        .map(|s| bfs_distances(g, s).into_iter().flatten().max().unwrap_or(0))
        .max()
}

pub fn is_path(g: &Graph) -> bool {
    let n = g.node_count();
    is_connected(g)
        && is_simple(g)
        && g.edge_count() + 1 == n
        && (0..n).all(|v| g.degree(v) <= 2)
}

pub fn is_cycle(g: &Graph) -> bool {
    let n = g.node_count();
    n >= 3 && is_connected(g) && is_simple(g) && g.edge_count() == n && (0..n).all(|v| g.degree(v) == 2)
}

/// Nodes of a path graph in order, starting from the endpoint with the smaller index.
pub fn path_order(g: &Graph) -> Option<Vec<usize>> {
    if !is_path(g) {
        return None;
    }
    let n = g.node_count();
    if n == 1 {
        return Some(vec![0]);
    }
    let start = (0..n).find(|&v| g.degree(v) == 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < n {
        let next = g
            .neighbors(cur)
            .iter()
            .map(|&(w, _)| w)
            .find(|&w| w != prev)?;
        prev = cur;
        cur = next;
        order.push(cur);
    }
    Some(order)
}

/// Two-coloring witnessing bipartiteness, side of node 0 in each component is `false`.
pub fn bipartition(g: &Graph) -> Option<Vec<bool>> {
    let n = g.node_count();
    let mut side: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let su = side[u].expect("assigned");
            for &(w, _) in g.neighbors(u) {
                match side[w] {
                    None => {
                        side[w] = Some(!su);
                        queue.push_back(w);
                    }
                    Some(sw) if sw == su => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(side.into_iter().map(|s| s.expect("assigned")).collect())
}

pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns `false` if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Total order on weighted edges: weight, then smaller endpoint id, then larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub weight: u64,
    pub lo: u64,
    pub hi: u64,
}

impl EdgeKey {
    pub fn new(weight: u64, a: u64, b: u64) -> Self {
        EdgeKey {
            weight,
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn of(inst: &Instance, edge: usize) -> Option<EdgeKey> {
        let e = inst.graph().edge(edge);
        Some(EdgeKey::new(e.attrs.weight?, inst.id(e.u), inst.id(e.v)))
    }

    pub fn other_end(&self, id: u64) -> Option<u64> {
        if self.lo == id {
            Some(self.hi)
        } else if self.hi == id {
            Some(self.lo)
        } else {
            None
        }
    }
}

/// Kruskal under the [`EdgeKey`] order. `None` if an edge lacks a weight or
/// the graph is disconnected. Edge indices are returned sorted.
pub fn minimum_spanning_tree(inst: &Instance) -> Option<Vec<usize>> {
    let g = inst.graph();
    let mut keyed = Vec::with_capacity(g.edge_count());
    for i in 0..g.edge_count() {
        keyed.push((EdgeKey::of(inst, i)?, i));
    }
    keyed.sort();
    let mut dsu = DisjointSet::new(g.node_count());
    let mut tree: Vec<usize> = keyed
        .into_iter()
        .filter(|&(_, i)| dsu.union(g.edge(i).u, g.edge(i).v))
        .map(|(_, i)| i)
        .collect();
    if tree.len() + 1 != g.node_count() {
        return None;
    }
    tree.sort_unstable();
    Some(tree)
}

/// True iff the edge set is a spanning tree of `g`.
pub fn is_spanning_tree(g: &Graph, edges: &[usize]) -> bool {
    let n = g.node_count();
    if n == 0 || edges.len() + 1 != n {
        return false;
    }
    let mut dsu = DisjointSet::new(n);
    edges.iter().all(|&i| dsu.union(g.edge(i).u, g.edge(i).v))
}

/// Every node is incident to at most one of the edges, and none is a self-loop.
pub fn is_matching(g: &Graph, edges: &[usize]) -> bool {
    let mut used = vec![false; g.node_count()];
    for &i in edges {
        let e = g.edge(i);
        if e.u == e.v || used[e.u] || used[e.v] {
            return false;
        }
        used[e.u] = true;
        used[e.v] = true;
    }
    true
}

/// Maximum matching of a bipartite graph by augmenting paths, as edge indices.
pub fn maximum_bipartite_matching(g: &Graph, side: &[bool]) -> Vec<usize> {
    let n = g.node_count();
    let mut mate: Vec<Option<(usize, usize)>> = vec![None; n];
    for s in (0..n).filter(|&v| !side[v]) {
        let mut visited = vec![false; n];
        augment(g, s, &mut mate, &mut visited);
    }
    let mut edges: Vec<usize> = (0..n)
        .filter(|&v| !side[v])
        .filter_map(|v| mate[v].map(|(_, e)| e))
        .collect();
    edges.sort_unstable();
    edges
}

fn augment(g: &Graph, u: usize, mate: &mut [Option<(usize, usize)>], visited: &mut [bool]) -> bool {
    for &(w, e) in g.neighbors(u) {
        if visited[w] {
            continue;
        }
        visited[w] = true;
        let free = match mate[w] {
            None => true,
            Some((x, _)) => augment(g, x, mate, visited),
        };
        if free {
            mate[w] = Some((u, e));
            mate[u] = Some((w, e));
            return true;
        }
    }
    false
}

/// König cover from a maximum matching: with `Z` the nodes reachable from
/// unmatched left nodes by alternating paths, the cover is
/// `(left \ Z) ∪ (right ∩ Z)`. Contains exactly one endpoint of each matching edge.
pub fn koenig_cover(g: &Graph, side: &[bool], matching: &[usize]) -> Vec<bool> {
    let n = g.node_count();
    let mut mate = vec![None; n];
    for &i in matching {
        let e = g.edge(i);
        mate[e.u] = Some(e.v);
        mate[e.v] = Some(e.u);
    }
    let mut reached = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| !side[v] && mate[v].is_none()).collect();
    for &v in &queue {
        reached[v] = true;
    }
    while let Some(u) = queue.pop_front() {
        // Left nodes leave along non-matching edges, right nodes along their matching edge.
        if !side[u] {
            for &(w, _) in g.neighbors(u) {
                if mate[u] != Some(w) && !reached[w] {
                    reached[w] = true;
                    queue.push_back(w);
                }
            }
        } else if let Some(w) = mate[u] {
            if !reached[w] {
                reached[w] = true;
                queue.push_back(w);
            }
        }
    }
    (0..n).map(|v| if side[v] { reached[v] } else { !reached[v] }).collect()
}

/// A proper coloring with colors `0..k`, found by backtracking in
/// saturation order. Depends only on the graph structure, never on ids.
pub fn k_coloring(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let n = g.node_count();
    if n == 0 {
        return Some(Vec::new());
    }
    if k == 0 || g.edges().iter().any(|e| e.u == e.v) {
        return None;
    }
    let mut colors: Vec<Option<usize>> = vec![None; n];
    if color_rec(g, k, &mut colors, 0) {
        Some(colors.into_iter().map(|c| c.expect("colored")).collect())
    } else {
        None
    }
}

fn color_rec(g: &Graph, k: usize, colors: &mut [Option<usize>], done: usize) -> bool {
    if done == colors.len() {
        return true;
    }
    // Most saturated uncolored node, ties by degree then index.
    let v = (0..colors.len())
        .filter(|&v| colors[v].is_none())
        .max_by_key(|&v| {
            let mut seen = vec![false; k];
            let sat = g
                .neighbors(v)
                .iter()
                .filter_map(|&(w, _)| colors[w])
                .filter(|&c| !std::mem::replace(&mut seen[c], true))
                .count();
            (sat, g.degree(v), std::cmp::Reverse(v))
        })
        .expect("an uncolored node remains");
    for c in 0..k {
        if g.neighbors(v).iter().all(|&(w, _)| colors[w] != Some(c)) {
            colors[v] = Some(c);
            if color_rec(g, k, colors, done + 1) {
                return true;
            }
            colors[v] = None;
        }
    }
    false
}
