//! Certification models and the per-node views they grant.
//!
//! * `Pls`: own id, input and certificate, plus one record per incident edge
//!   holding the edge attributes and the neighbor's certificate. No neighbor
//!   identifiers.
//! * `Lcp(T)`: the ball of radius `T` around the node with every identifier,
//!   input, certificate and edge inside it.
//! * `Nld`: the `Pls` view; the extra constraint (certificates independent of
//!   identifiers) is a property of the prover, checked by the engine.

use std::borrow::Cow;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::error::{EngineError, ParseError};
use crate::graph::{EdgeAttrs, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase", tag = "model")]
pub enum Model {
    Pls,
    Lcp { radius: usize },
    Nld,
}

impl Model {
    pub fn exposes_neighbor_ids(&self) -> bool {
        matches!(self, Model::Lcp { .. })
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Pls => f.write_str("pls"),
            Model::Lcp { radius } => write!(f, "lcp:{radius}"),
            Model::Nld => f.write_str("nld"),
        }
    }
}

impl FromStr for Model {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pls" => Ok(Model::Pls),
            "nld" => Ok(Model::Nld),
            _ => {
                let radius = s
                    .strip_prefix("lcp:")
                    .and_then(|r| r.parse::<usize>().ok())
                    .filter(|&r| r >= 1)
                    .ok_or_else(|| ParseError::Document(format!("unknown model {s:?}")))?;
                Ok(Model::Lcp { radius })
            }
        }
    }
}

/// What a neighbor contributes to a PLS/NLD view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NeighborRecord<'a> {
    pub edge: EdgeAttrs,
    pub certificate: &'a BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallNode<'a> {
    pub id: u64,
    pub input: Option<&'a BitString>,
    pub certificate: &'a BitString,
    pub distance: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BallEdge {
    pub a: usize,
    pub b: usize,
    pub attrs: EdgeAttrs,
}

/// Induced subgraph of radius `T`; `a`/`b` in edges index into `nodes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ball<'a> {
    pub center: usize,
    pub nodes: Vec<BallNode<'a>>,
    pub edges: Vec<BallEdge>,
}

impl<'a> Ball<'a> {
    /// `(neighbor index in nodes, edge attrs)` for every edge at the center.
    pub fn center_edges(&self) -> impl Iterator<Item = (usize, EdgeAttrs)> + '_ {
        self.edges.iter().filter_map(move |e| {
            if e.a == self.center && e.b != self.center {
                Some((e.b, e.attrs))
            } else if e.b == self.center && e.a != self.center {
                Some((e.a, e.attrs))
            } else {
                None
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Neighborhood<'a> {
    Incident(Vec<NeighborRecord<'a>>),
    Ball(Ball<'a>),
}

/// Everything one node's verifier may read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct View<'a> {
    pub model: Model,
    /// Width of identifier fields, a global parameter of the instance.
    pub id_bits: u32,
    pub center_id: u64,
    pub center_input: Option<&'a BitString>,
    pub center_certificate: &'a BitString,
    pub center_degree: usize,
    pub neighborhood: Neighborhood<'a>,
}

impl<'a> View<'a> {
    /// Incident-edge records. For ball views they are derived from the
    /// center's edges, so PLS verifiers also run under LCP.
    pub fn neighbor_records(&self) -> Cow<'_, [NeighborRecord<'a>]> {
        match &self.neighborhood {
            Neighborhood::Incident(records) => Cow::Borrowed(records),
            Neighborhood::Ball(ball) => Cow::Owned(
                ball.center_edges()
                    .map(|(i, attrs)| NeighborRecord {
                        edge: attrs,
                        certificate: ball.nodes[i].certificate,
                    })
                    .collect(),
            ),
        }
    }

    pub fn ball(&self) -> Option<&Ball<'a>> {
        match &self.neighborhood {
            Neighborhood::Ball(b) => Some(b),
            Neighborhood::Incident(_) => None,
        }
    }

    /// Reorders neighbor records (PLS/NLD) or ball nodes (LCP) at random.
    /// A well-formed verifier decides identically before and after.
    pub fn shuffle_neighbors<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        match &mut self.neighborhood {
            Neighborhood::Incident(records) => records.shuffle(rng),
            Neighborhood::Ball(ball) => {
                let mut perm: Vec<usize> = (0..ball.nodes.len()).collect();
                perm.shuffle(rng);
                // perm[new] = old
                let mut new_of_old = vec![0; perm.len()];
                for (new, &old) in perm.iter().enumerate() {
                    new_of_old[old] = new;
                }
                ball.nodes = perm.iter().map(|&old| ball.nodes[old].clone()).collect();
                ball.center = new_of_old[ball.center];
                for e in &mut ball.edges {
                    e.a = new_of_old[e.a];
                    e.b = new_of_old[e.b];
                    if rng.gen_bool(0.5) {
                        std::mem::swap(&mut e.a, &mut e.b);
                    }
                }
                ball.edges.shuffle(rng);
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("views serialize")
    }
}

/// The view of node `v` (a node index) under `model`.
///
/// `certs[i]` is the certificate of node index `i`.
pub fn view_of<'a>(inst: &'a Instance, certs: &[&'a BitString], v: usize, model: Model) -> View<'a> {
    let g = inst.graph();
    let neighborhood = match model {
        Model::Pls | Model::Nld => Neighborhood::Incident(
            g.neighbors(v)
                .iter()
                .map(|&(w, e)| NeighborRecord {
                    edge: g.edge(e).attrs,
                    certificate: certs[w],
                })
                .collect(),
        ),
        Model::Lcp { radius } => Neighborhood::Ball(ball_of(inst, certs, v, radius)),
    };
    View {
        model,
        id_bits: inst.id_bits(),
        center_id: inst.id(v),
        center_input: inst.input(v),
        center_certificate: certs[v],
        center_degree: g.degree(v),
        neighborhood,
    }
}

fn ball_of<'a>(inst: &'a Instance, certs: &[&'a BitString], v: usize, radius: usize) -> Ball<'a> {
    let g = inst.graph();
    let mut local = vec![usize::MAX; g.node_count()];
    let mut nodes = Vec::new();
    let mut queue = VecDeque::new();
    local[v] = 0;
    nodes.push(BallNode {
        id: inst.id(v),
        input: inst.input(v),
        certificate: certs[v],
        distance: 0,
    });
    queue.push_back(v);
    while let Some(u) = queue.pop_front() {
        let d = nodes[local[u]].distance;
        if d == radius {
            continue;
        }
        for &(w, _) in g.neighbors(u) {
            if local[w] == usize::MAX {
                local[w] = nodes.len();
                nodes.push(BallNode {
                    id: inst.id(w),
                    input: inst.input(w),
                    certificate: certs[w],
                    distance: d + 1,
                });
                queue.push_back(w);
            }
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| local[e.u] != usize::MAX && local[e.v] != usize::MAX)
        .map(|e| BallEdge {
            a: local[e.u],
            b: local[e.v],
            attrs: e.attrs,
        })
        .collect();
    Ball {
        center: 0,
        nodes,
        edges,
    }
}

/// Id-keyed wrapper over [`view_of`].
pub fn extract_view<'a>(
    inst: &'a Instance,
    certs: &'a crate::engine::CertificateMap,
    node_id: u64,
    model: Model,
) -> Result<View<'a>, EngineError> {
    let v = inst.index_of(node_id).ok_or(EngineError::UnknownNode(node_id))?;
    let indexed = certs.indexed(inst)?;
    Ok(view_of(inst, &indexed, v, model))
}

/// True iff no verifier could tell the two views apart.
///
/// PLS/NLD: equal center fields and equal multisets of neighbor records.
/// LCP: the balls are isomorphic preserving every identifier, input and
/// certificate. Identifiers are distinct within a ball, so the isomorphism is
/// forced to match nodes by id.
pub fn views_indistinguishable(a: &View<'_>, b: &View<'_>) -> Result<bool, EngineError> {
    if a.model != b.model {
        return Err(EngineError::ModelMismatch);
    }
    let centers_equal = a.id_bits == b.id_bits
        && a.center_id == b.center_id
        && a.center_input == b.center_input
        && a.center_certificate == b.center_certificate
        && a.center_degree == b.center_degree;
    if !centers_equal {
        return Ok(false);
    }
    Ok(match (&a.neighborhood, &b.neighborhood) {
        (Neighborhood::Incident(ra), Neighborhood::Incident(rb)) => {
            let mut ra = ra.clone();
            let mut rb = rb.clone();
            ra.sort();
            rb.sort();
            ra == rb
        }
        (Neighborhood::Ball(ba), Neighborhood::Ball(bb)) => balls_equivalent(ba, bb),
        _ => false,
    })
}

type BallSignature<'a> = (
    BTreeMap<u64, (Option<&'a BitString>, &'a BitString, usize)>,
    Vec<(u64, u64, EdgeAttrs)>,
);

fn ball_signature<'a>(ball: &Ball<'a>) -> Option<BallSignature<'a>> {
    let mut nodes = BTreeMap::new();
    for n in &ball.nodes {
        if nodes.insert(n.id, (n.input, n.certificate, n.distance)).is_some() {
            return None;
        }
    }
    let mut edges: Vec<_> = ball
        .edges
        .iter()
        .map(|e| {
            let (x, y) = (ball.nodes[e.a].id, ball.nodes[e.b].id);
            (x.min(y), x.max(y), e.attrs)
        })
        .collect();
    edges.sort();
    Some((nodes, edges))
}

fn balls_equivalent(a: &Ball<'_>, b: &Ball<'_>) -> bool {
    if a.nodes[a.center].id != b.nodes[b.center].id {
        return false;
    }
    match (ball_signature(a), ball_signature(b)) {
        (Some(sa), Some(sb)) => sa == sb,
        _ => false,
    }
}
