use std::collections::HashSet;

use serde::Serialize;

use crate::bits::{bit_width, BitString};
use crate::engine::{decide, local_decisions, CertificateMap, Scheme};
use crate::error::FalsifierError;
use crate::graph::algo::path_order;
use crate::graph::{Edge, EdgeAttrs, Graph, Instance};
use crate::views::Model;

use super::AttackOutcome;

/// A path segment of `2k+1` nodes cut from an accepted path, together with
/// the certificates it carried there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledChunk {
    pub ids: Vec<u64>,
    pub inputs: Vec<Option<BitString>>,
    pub certs: Vec<BitString>,
    /// `edge_attrs[t]` sits between nodes `t` and `t + 1`.
    pub edge_attrs: Vec<EdgeAttrs>,
    pub id_bits: u32,
}

impl LabeledChunk {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// The same chunk with identifiers shifted up by `offset`.
    fn shifted(&self, offset: u64) -> LabeledChunk {
        LabeledChunk {
            ids: self.ids.iter().map(|&id| id + offset).collect(),
            ..self.clone()
        }
    }
}

/// Cuts an accepted path into consecutive chunks of `2k+1` nodes, walking
/// from the endpoint [`path_order`] starts at. A short tail is dropped.
pub fn chunks_from_path(
    path: &Instance,
    certs: &CertificateMap,
    k: usize,
) -> Result<Vec<LabeledChunk>, FalsifierError> {
    let order = path_order(path.graph()).ok_or(FalsifierError::NotAPath)?;
    let indexed = certs.indexed(path)?;
    let size = 2 * k + 1;
    let chunks = order
        .chunks_exact(size)
        .map(|nodes| LabeledChunk {
            ids: nodes.iter().map(|&v| path.id(v)).collect(),
            inputs: nodes.iter().map(|&v| path.input(v).cloned()).collect(),
            certs: nodes.iter().map(|&v| indexed[v].clone()).collect(),
            edge_attrs: nodes
                .windows(2)
                .map(|w| {
                    let e = path.graph().edge_between(w[0], w[1]).expect("path edge");
                    path.graph().edge(e).attrs
                })
                .collect(),
            id_bits: path.id_bits(),
        })
        .collect();
    Ok(chunks)
}

/// Chunks joined end to start by edges with default attributes; the last
/// chunk is joined back to the first when `close` is set.
fn concatenate(chunks: &[&LabeledChunk], id_bits: u32, close: bool) -> (Instance, CertificateMap) {
    let n: usize = chunks.iter().map(|c| c.len()).sum();
    let mut edges = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    let mut inputs = Vec::with_capacity(n);
    let mut certs = CertificateMap::new();
    let mut offset = 0;
    for (t, chunk) in chunks.iter().enumerate() {
        for (s, attrs) in chunk.edge_attrs.iter().enumerate() {
            edges.push(Edge {
                u: offset + s,
                v: offset + s + 1,
                attrs: *attrs,
            });
        }
        let next = offset + chunk.len();
        if t + 1 < chunks.len() {
            edges.push(Edge {
                u: next - 1,
                v: next,
                attrs: EdgeAttrs::default(),
            });
        } else if close {
            edges.push(Edge {
                u: next - 1,
                v: 0,
                attrs: EdgeAttrs::default(),
            });
        }
        ids.extend_from_slice(&chunk.ids);
        inputs.extend(chunk.inputs.iter().cloned());
        for (&id, c) in chunk.ids.iter().zip(&chunk.certs) {
            certs.insert(id, c.clone());
        }
        offset = next;
    }
    let g = Graph::new(n, edges).expect("indices in range");
    (Instance::new(g, ids, id_bits, inputs).expect("sizes match"), certs)
}

/// Directed graph on chunks: `P -> P'` when, in the path `P` followed by
/// `P'`, every node within distance `k` of the joining edge accepts. Those
/// are exactly the nodes whose radius-`k` ball crosses the join.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlugGraph {
    pub arcs: Vec<Vec<bool>>,
}

impl PlugGraph {
    pub fn build<S: Scheme + ?Sized>(scheme: &S, chunks: &[LabeledChunk], k: usize, id_bits: u32) -> PlugGraph {
        let arcs = chunks
            .iter()
            .map(|p| chunks.iter().map(|q| plugs(scheme, p, q, k, id_bits)).collect())
            .collect();
        PlugGraph { arcs }
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().flatten().filter(|&&a| a).count()
    }

    /// First directed cycle of length at least 2 in depth-first order,
    /// as a list of chunk indices.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let n = self.arcs.len();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut stack: Vec<usize> = Vec::new();
        for root in 0..n {
            if state[root] == 0 {
                if let Some(c) = self.dfs(root, &mut state, &mut stack) {
                    return Some(c);
                }
            }
        }
        None
    }

    fn dfs(&self, u: usize, state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        state[u] = 1;
        stack.push(u);
        for w in 0..self.arcs.len() {
            if w == u || !self.arcs[u][w] {
                continue;
            }
            if state[w] == 1 {
                let start = stack.iter().position(|&x| x == w).expect("on stack");
                return Some(stack[start..].to_vec());
            }
            if state[w] == 0 {
                if let Some(c) = self.dfs(w, state, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        state[u] = 2;
        None
    }

    pub fn self_loop(&self) -> Option<usize> {
        (0..self.arcs.len()).find(|&i| self.arcs[i][i])
    }
}

fn plugs<S: Scheme + ?Sized>(scheme: &S, p: &LabeledChunk, q: &LabeledChunk, k: usize, id_bits: u32) -> bool {
    let q = if std::ptr::eq(p, q) {
        // Plugging a chunk into itself is tested on an id-disjoint copy.
        let offset = p.ids.iter().max().copied().unwrap_or(0) + 1;
        std::borrow::Cow::Owned(q.shifted(offset))
    } else {
        std::borrow::Cow::Borrowed(q)
    };
    let (inst, certs) = concatenate(&[p, &q], id_bits, false);
    let indexed = certs.indexed(&inst).expect("complete map");
    let decisions = local_decisions(&inst, &indexed, scheme);
    let join = p.len();
    decisions[join - 1 - k..=join + k].iter().all(|&ok| ok)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutAndPlugReport {
    pub chunks: usize,
    pub arcs: usize,
    /// Chunk indices around the plug cycle; a self-plug lists one index.
    pub cycle: Option<Vec<usize>>,
    #[serde(flatten)]
    pub outcome: AttackOutcome,
}

/// Looks for chunks that plug into one another in a cycle, then glues them
/// into a cycle instance and checks whether every node accepts.
///
/// The scheme must run in `Lcp { radius: k }`. Chunk identifiers must be
/// disjoint across the pool. A chunk that only plugs into itself is
/// realized with two copies, the second under fresh identifiers.
pub fn cut_and_plug_search<S: Scheme + ?Sized>(
    scheme: &S,
    pool: &[LabeledChunk],
    k: usize,
) -> Result<CutAndPlugReport, FalsifierError> {
    if scheme.model() != (Model::Lcp { radius: k }) {
        return Err(FalsifierError::WrongModel(format!("lcp:{k}")));
    }
    if pool.is_empty() {
        return Err(FalsifierError::EmptyPool);
    }
    let mut seen = HashSet::new();
    for chunk in pool {
        if chunk.len() != 2 * k + 1 || chunk.certs.len() != chunk.len() || chunk.edge_attrs.len() + 1 != chunk.len() {
            return Err(FalsifierError::ChunkLength {
                expected: 2 * k + 1,
                got: chunk.len(),
            });
        }
        if !chunk.ids.iter().all(|&id| seen.insert(id)) {
            return Err(FalsifierError::OverlappingIds);
        }
    }
    let max_id = seen.iter().max().copied().unwrap_or(0);
    // Room for one shifted copy of any chunk.
    let id_bits = pool
        .iter()
        .map(|c| c.id_bits)
        .max()
        .unwrap_or(1)
        .max(bit_width(2 * max_id + 1));
    let plug_graph = PlugGraph::build(scheme, pool, k, id_bits);
    let mut report = CutAndPlugReport {
        chunks: pool.len(),
        arcs: plug_graph.arc_count(),
        cycle: None,
        outcome: AttackOutcome::NoAttackFound,
    };
    let copy;
    let parts: Vec<&LabeledChunk> = if let Some(cycle) = plug_graph.find_cycle() {
        report.cycle = Some(cycle.clone());
        cycle.iter().map(|&i| &pool[i]).collect()
    } else if let Some(i) = plug_graph.self_loop() {
        report.cycle = Some(vec![i]);
        copy = pool[i].shifted(pool[i].ids.iter().max().copied().unwrap_or(0) + 1);
        vec![&pool[i], &copy]
    } else {
        return Ok(report);
    };
    let (instance, certificates) = concatenate(&parts, id_bits, true);
    if decide(&instance, &certificates, scheme)?.accepted() && !scheme.is_member(&instance) {
        report.outcome = AttackOutcome::Fooled {
            instance,
            certificates,
        };
    }
    Ok(report)
}
