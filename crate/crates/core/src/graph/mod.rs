//! Configurations and instances.
//!
//! A [`Configuration`] is a graph with optional node inputs and edge
//! attributes. Languages are predicates over configurations. An [`Instance`]
//! adds distinct identifiers, which verifiers may see but which never decide
//! membership.

pub mod algo;
pub mod dumbbell;
pub mod generators;
pub mod json;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bits::{bit_width, ceil_log2, BitString};
use crate::error::GraphError;

pub use dumbbell::{make_dumbbell, make_symmetric_dumbbell, rooted_isomorphic, DumbbellPair};
pub use generators::{
    make_cycle, make_path, make_random_connected, make_random_tree, make_random_weighted,
    relabel_ids, relabel_ids_with, sequential_ids,
};

/// Per-edge input record.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeAttrs {
    pub weight: Option<u64>,
    pub selected: Option<bool>,
}

impl EdgeAttrs {
    pub fn weighted(weight: u64) -> Self {
        EdgeAttrs {
            weight: Some(weight),
            selected: None,
        }
    }

    pub fn is_selected(&self) -> bool {
        self.selected == Some(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub attrs: EdgeAttrs,
}

/// Undirected graph over node indices `0..n`.
///
/// Construction only rejects out-of-range endpoints; self-loops, duplicate
/// edges and disconnection are reported by [`validate_instance`] instead.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
    weight_bound: Option<u64>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.weight_bound == other.weight_bound
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(GraphError::EdgeOutOfRange { u: e.u, v: e.v, n });
            }
        }
        let mut g = Graph {
            n,
            edges,
            adj: Vec::new(),
            weight_bound: None,
        };
        g.rebuild_adjacency();
        Ok(g)
    }

    /// Unweighted graph from plain index pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        Graph::new(
            n,
            pairs
                .iter()
                .map(|&(u, v)| Edge {
                    u,
                    v,
                    attrs: EdgeAttrs::default(),
                })
                .collect(),
        )
    }

    fn rebuild_adjacency(&mut self) {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            if e.u != e.v {
                adj[e.v].push((e.u, i));
            }
        }
        self.adj = adj;
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    /// `(neighbor, edge index)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].iter().find(|&&(w, _)| w == v).map(|&(_, i)| i)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_between(u, v).is_some()
    }

    /// Declared weight bound `W`, falling back to the largest weight present.
    pub fn weight_bound(&self) -> Option<u64> {
        self.weight_bound
            .or_else(|| self.edges.iter().filter_map(|e| e.attrs.weight).max())
    }

    pub fn declared_weight_bound(&self) -> Option<u64> {
        self.weight_bound
    }

    pub fn set_weight_bound(&mut self, bound: Option<u64>) {
        self.weight_bound = bound;
    }

    pub fn set_edge_attrs(&mut self, i: usize, attrs: EdgeAttrs) {
        self.edges[i].attrs = attrs;
    }

    pub fn add_edge(&mut self, u: usize, v: usize, attrs: EdgeAttrs) -> Result<usize, GraphError> {
        if u >= self.n || v >= self.n {
            return Err(GraphError::EdgeOutOfRange { u, v, n: self.n });
        }
        self.edges.push(Edge { u, v, attrs });
        self.rebuild_adjacency();
        Ok(self.edges.len() - 1)
    }

    pub fn remove_edge(&mut self, i: usize) -> Edge {
        let e = self.edges.remove(i);
        self.rebuild_adjacency();
        e
    }

    pub fn selected_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&i| self.edges[i].attrs.is_selected())
    }
}

/// A graph with node inputs and no identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub graph: Graph,
    pub inputs: Vec<Option<BitString>>,
}

impl Configuration {
    pub fn new(graph: Graph) -> Self {
        let n = graph.node_count();
        Configuration {
            graph,
            inputs: vec![None; n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Input of `v` read as a single bit. An absent input reads as `0`;
    /// an input of any other length is malformed.
    pub fn input_bit(&self, v: usize) -> Option<bool> {
        input_as_bit(self.inputs[v].as_ref())
    }
}

pub(crate) fn input_as_bit(input: Option<&BitString>) -> Option<bool> {
    match input {
        None => Some(false),
        Some(b) if b.len() == 1 => b.get(0),
        Some(_) => None,
    }
}

/// A configuration plus distinct identifiers written on `id_bits` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    config: Configuration,
    ids: Vec<u64>,
    id_bits: u32,
}

impl Instance {
    pub fn new(
        graph: Graph,
        ids: Vec<u64>,
        id_bits: u32,
        inputs: Vec<Option<BitString>>,
    ) -> Result<Self, GraphError> {
        let n = graph.node_count();
        if ids.len() != n {
            return Err(GraphError::IdCountMismatch {
                expected: n,
                got: ids.len(),
            });
        }
        if inputs.len() != n {
            return Err(GraphError::IdCountMismatch {
                expected: n,
                got: inputs.len(),
            });
        }
        Ok(Instance {
            config: Configuration { graph, inputs },
            ids,
            id_bits,
        })
    }

    /// Instance with no inputs and the smallest admissible `id_bits`.
    pub fn from_graph(graph: Graph, ids: Vec<u64>) -> Result<Self, GraphError> {
        let bits = default_id_bits(graph.node_count(), &ids);
        let n = graph.node_count();
        Instance::new(graph, ids, bits, vec![None; n])
    }

    pub fn configuration(&self) -> &Configuration {
        &self.config
    }

    pub fn into_configuration(self) -> Configuration {
        self.config
    }

    pub fn graph(&self) -> &Graph {
        &self.config.graph
    }

    pub fn graph_mut(&mut self) -> &mut Graph {
        &mut self.config.graph
    }

    pub fn node_count(&self) -> usize {
        self.config.graph.node_count()
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn id_bits(&self) -> u32 {
        self.id_bits
    }

    pub fn set_id_bits(&mut self, bits: u32) {
        self.id_bits = bits;
    }

    pub fn inputs(&self) -> &[Option<BitString>] {
        &self.config.inputs
    }

    pub fn input(&self, v: usize) -> Option<&BitString> {
        self.config.inputs[v].as_ref()
    }

    pub fn set_input(&mut self, v: usize, input: Option<BitString>) {
        self.config.inputs[v] = input;
    }

    pub fn with_inputs(mut self, inputs: Vec<Option<BitString>>) -> Result<Self, GraphError> {
        if inputs.len() != self.node_count() {
            return Err(GraphError::IdCountMismatch {
                expected: self.node_count(),
                got: inputs.len(),
            });
        }
        self.config.inputs = inputs;
        Ok(self)
    }

    /// Replaces identifiers; `id_bits` grows if needed to keep ids representable.
    pub fn with_ids(mut self, ids: Vec<u64>) -> Result<Self, GraphError> {
        if ids.len() != self.node_count() {
            return Err(GraphError::IdCountMismatch {
                expected: self.node_count(),
                got: ids.len(),
            });
        }
        self.id_bits = self.id_bits.max(default_id_bits(ids.len(), &ids));
        self.ids = ids;
        Ok(self)
    }

    /// Node index holding identifier `id` (first match if ids collide).
    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    pub fn id_index(&self) -> HashMap<u64, usize> {
        self.ids.iter().enumerate().map(|(i, &id)| (id, i)).collect()
    }
}

/// Smallest `id_bits` satisfying both `id < 2^id_bits` and `id_bits >= ceil(log2 n)`.
pub fn default_id_bits(n: usize, ids: &[u64]) -> u32 {
    let max_id = ids.iter().copied().max().unwrap_or(0);
    bit_width(max_id).max(ceil_log2(n as u64)).max(1)
}

/// One violated instance invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Empty,
    Disconnected { components: usize },
    SelfLoop { id: u64 },
    DuplicateEdge { u: u64, v: u64 },
    DuplicateId { id: u64 },
    IdOverflow { id: u64, id_bits: u32 },
    IdBitsTooSmall { id_bits: u32, required: u32 },
    WeightOutOfRange { u: u64, v: u64, weight: u64, bound: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_instance(inst: &Instance) -> ValidationReport {
    let g = inst.graph();
    let n = g.node_count();
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation::Empty);
        return ValidationReport { violations };
    }
    let components = algo::component_count(g);
    if components > 1 {
        violations.push(Violation::Disconnected { components });
    }
    let mut seen_edges = HashSet::new();
    for e in g.edges() {
        let (u, v) = (inst.id(e.u), inst.id(e.v));
        if e.u == e.v {
            violations.push(Violation::SelfLoop { id: u });
        } else if !seen_edges.insert((e.u.min(e.v), e.u.max(e.v))) {
            violations.push(Violation::DuplicateEdge { u, v });
        }
        if let (Some(w), Some(bound)) = (e.attrs.weight, g.declared_weight_bound()) {
            if w == 0 || w > bound {
                violations.push(Violation::WeightOutOfRange { u, v, weight: w, bound });
            }
        } else if e.attrs.weight == Some(0) {
            violations.push(Violation::WeightOutOfRange { u, v, weight: 0, bound: 0 });
        }
    }
    let mut seen_ids = HashSet::new();
    let mut reported = HashSet::new();
    for &id in inst.ids() {
        if !seen_ids.insert(id) && reported.insert(id) {
            violations.push(Violation::DuplicateId { id });
        }
        if inst.id_bits() < 64 && id >> inst.id_bits() != 0 {
            violations.push(Violation::IdOverflow {
                id,
                id_bits: inst.id_bits(),
            });
        }
    }
    let required = ceil_log2(n as u64);
    if inst.id_bits() < required {
        violations.push(Violation::IdBitsTooSmall {
            id_bits: inst.id_bits(),
            required,
        });
    }
    ValidationReport { violations }
}
