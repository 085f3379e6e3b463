//! Universal certification: every node receives a full description of the
//! instance and checks it against its own neighborhood.
//!
//! Certificate layout:
//!
//! ```text
//! my_id                         id_bits
//! has_inputs has_edge_attrs     2 bits
//! gamma(n)                      only when a flag is set
//! id table                      n * id_bits
//! adjacency matrix              n * n, row-major
//! input table                   per node: present bit, gamma(len), bits
//! edge attribute table          per edge i < j in row-major order:
//!                               weight present bit, gamma(weight),
//!                               selected as 00 absent, 10 false, 11 true
//! ```
//!
//! With both flags clear the node count follows from the length.

use std::fmt;
use std::str::FromStr;

use crate::bits::{BitReader, BitString};
use crate::engine::{Descriptor, Scheme};
use crate::error::SchemeError;
use crate::graph::algo::{diameter, is_connected, is_cycle, is_path};
use crate::graph::dumbbell::is_symmetric_dumbbell;
use crate::graph::{Edge, EdgeAttrs, Graph, Instance};
use crate::views::{Model, View};

use super::{bad, descriptor};

/// Decoded tables refuse node counts above this.
const MAX_NODES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    Cycle,
    Path,
    SymmetricDumbbell { k: usize },
    DiameterAtMost { k: usize },
}

impl Predicate {
    pub fn holds(&self, g: &Graph) -> bool {
        match *self {
            Predicate::Cycle => is_cycle(g),
            Predicate::Path => is_path(g),
            Predicate::SymmetricDumbbell { k } => is_symmetric_dumbbell(g, k),
            Predicate::DiameterAtMost { k } => diameter(g).is_some_and(|d| d <= k),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Cycle => f.write_str("cycle"),
            Predicate::Path => f.write_str("path"),
            Predicate::SymmetricDumbbell { k } => write!(f, "dumbbell:{k}"),
            Predicate::DiameterAtMost { k } => write!(f, "diameter:{k}"),
        }
    }
}

impl FromStr for Predicate {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let number = |p: &str| {
            p.parse::<usize>()
                .map_err(|_| bad("universal", format!("predicate parameter {p:?} is not an integer")))
        };
        match s.split_once(':') {
            None if s == "cycle" => Ok(Predicate::Cycle),
            None if s == "path" => Ok(Predicate::Path),
            Some(("dumbbell", k)) => {
                let k = number(k)?;
                if k == 0 {
                    return Err(bad("universal", "dumbbell bridge radius must be at least 1".into()));
                }
                Ok(Predicate::SymmetricDumbbell { k })
            }
            Some(("diameter", k)) => Ok(Predicate::DiameterAtMost { k: number(k)? }),
            _ => Err(bad("universal", format!("unknown predicate {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalCertificate {
    pub ids: Vec<u64>,
    /// Row-major `n * n` matrix.
    pub adjacency: Vec<bool>,
    pub inputs: Option<Vec<Option<BitString>>>,
    /// Attributes of each edge `i < j`, in row-major order of the matrix.
    pub edge_attrs: Option<Vec<EdgeAttrs>>,
}

impl UniversalCertificate {
    pub fn from_instance(inst: &Instance) -> Self {
        let g = inst.graph();
        let n = g.node_count();
        let mut adjacency = vec![false; n * n];
        for e in g.edges() {
            adjacency[e.u * n + e.v] = true;
            adjacency[e.v * n + e.u] = true;
        }
        let inputs = inst
            .inputs()
            .iter()
            .any(Option::is_some)
            .then(|| inst.inputs().to_vec());
        let has_attrs = g.edges().iter().any(|e| e.attrs != EdgeAttrs::default());
        let edge_attrs = has_attrs.then(|| {
            let mut out = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if adjacency[i * n + j] {
                        let e = g.edge_between(i, j).expect("matrix mirrors edges");
                        out.push(g.edge(e).attrs);
                    }
                }
            }
            out
        });
        UniversalCertificate {
            ids: inst.ids().to_vec(),
            adjacency,
            inputs,
            edge_attrs,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.node_count() + j]
    }

    pub fn encode_body(&self, id_bits: u32) -> BitString {
        let n = self.node_count();
        let mut b = BitString::new();
        b.push(self.inputs.is_some());
        b.push(self.edge_attrs.is_some());
        if self.inputs.is_some() || self.edge_attrs.is_some() {
            b.push_gamma(n as u64);
        }
        for &id in &self.ids {
            b.push_uint(id, id_bits);
        }
        for &bit in &self.adjacency {
            b.push(bit);
        }
        if let Some(inputs) = &self.inputs {
            for input in inputs {
                b.push(input.is_some());
                if let Some(x) = input {
                    b.push_gamma(x.len() as u64);
                    b.extend_from(x);
                }
            }
        }
        if let Some(attrs) = &self.edge_attrs {
            for a in attrs {
                b.push(a.weight.is_some());
                if let Some(w) = a.weight {
                    b.push_gamma(w);
                }
                match a.selected {
                    None => b.push_uint(0, 2),
                    Some(false) => b.push_uint(2, 2),
                    Some(true) => b.push_uint(3, 2),
                }
            }
        }
        b
    }

    pub fn encode(&self, my_id: u64, id_bits: u32) -> BitString {
        let mut b = BitString::from_uint(my_id, id_bits);
        b.extend_from(&self.encode_body(id_bits));
        b
    }

    /// Strict decoding of a body; every bit must be consumed.
    pub fn decode_body(body: &BitString, id_bits: u32) -> Option<Self> {
        let mut r = body.reader();
        let has_inputs = r.read_bit()?;
        let has_attrs = r.read_bit()?;
        let n = if has_inputs || has_attrs {
            usize::try_from(r.read_gamma()?).ok()?
        } else {
            let rest = r.remaining();
            let w = id_bits as usize;
            let mut n = 0usize;
            while (n + 1) * w + (n + 1) * (n + 1) <= rest {
                n += 1;
            }
            n
        };
        if n == 0 || n > MAX_NODES || r.remaining() < n * id_bits as usize + n * n {
            return None;
        }
        let ids = (0..n).map(|_| r.read_uint(id_bits)).collect::<Option<Vec<_>>>()?;
        let adjacency = (0..n * n).map(|_| r.read_bit()).collect::<Option<Vec<_>>>()?;
        let inputs = if has_inputs {
            Some((0..n).map(|_| read_input(&mut r)).collect::<Option<Vec<_>>>()?)
        } else {
            None
        };
        let edge_attrs = if has_attrs {
            let count = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| adjacency[i * n + j])
                .count();
            Some((0..count).map(|_| read_attrs(&mut r)).collect::<Option<Vec<_>>>()?)
        } else {
            None
        };
        if !r.is_exhausted() {
            return None;
        }
        Some(UniversalCertificate {
            ids,
            adjacency,
            inputs,
            edge_attrs,
        })
    }

    /// Splits a full certificate into `my_id` and the decoded body.
    pub fn decode(cert: &BitString, id_bits: u32) -> Option<(u64, Self)> {
        let my_id = cert.reader().read_uint(id_bits)?;
        let body = cert.slice(id_bits as usize, cert.len());
        Some((my_id, Self::decode_body(&body, id_bits)?))
    }

    /// The described graph, or `None` if the matrix is not symmetric with
    /// a zero diagonal.
    pub fn graph(&self) -> Option<Graph> {
        let n = self.node_count();
        let mut edges = Vec::new();
        let mut attrs = self.edge_attrs.as_ref().map(|a| a.iter());
        for i in 0..n {
            if self.adjacent(i, i) {
                return None;
            }
            for j in i + 1..n {
                if self.adjacent(i, j) != self.adjacent(j, i) {
                    return None;
                }
                if self.adjacent(i, j) {
                    let a = match attrs.as_mut() {
                        Some(it) => *it.next()?,
                        None => EdgeAttrs::default(),
                    };
                    edges.push(Edge { u: i, v: j, attrs: a });
                }
            }
        }
        Graph::new(n, edges).ok()
    }
}

fn read_input(r: &mut BitReader<'_>) -> Option<Option<BitString>> {
    if !r.read_bit()? {
        return Some(None);
    }
    let len = usize::try_from(r.read_gamma()?).ok()?;
    if len > r.remaining() {
        return None;
    }
    Some(Some(r.read_bits(len)?))
}

fn read_attrs(r: &mut BitReader<'_>) -> Option<EdgeAttrs> {
    let weight = if r.read_bit()? { Some(r.read_gamma()?) } else { None };
    let selected = match r.read_uint(2)? {
        0 => None,
        2 => Some(false),
        3 => Some(true),
        _ => return None,
    };
    Some(EdgeAttrs { weight, selected })
}

/// Accepts exactly the instances whose configuration satisfies the predicate.
#[derive(Debug, Clone, Copy)]
pub struct Universal {
    pub predicate: Predicate,
}

impl Universal {
    fn check(&self, view: &View<'_>) -> Option<bool> {
        let id_bits = view.id_bits;
        let own = view.center_certificate;
        let w = id_bits as usize;
        let my_id = own.reader().read_uint(id_bits)?;
        if my_id != view.center_id {
            return Some(false);
        }
        let body = own.slice(w, own.len());
        let records = view.neighbor_records();
        let mut neighbor_ids = Vec::with_capacity(records.len());
        for r in records.iter() {
            let their_id = r.certificate.reader().read_uint(id_bits)?;
            if r.certificate.slice(w, r.certificate.len()) != body {
                return Some(false);
            }
            neighbor_ids.push((their_id, r.edge));
        }
        let table = UniversalCertificate::decode_body(&body, id_bits)?;
        let n = table.node_count();
        let mut sorted = table.ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n {
            return Some(false);
        }
        let p = table.ids.iter().position(|&id| id == my_id)?;
        let g = table.graph()?;
        let mut row: Vec<u64> = (0..n).filter(|&j| table.adjacent(p, j)).map(|j| table.ids[j]).collect();
        let mut seen: Vec<u64> = neighbor_ids.iter().map(|&(id, _)| id).collect();
        row.sort_unstable();
        seen.sort_unstable();
        if row != seen {
            return Some(false);
        }
        let own_input = table.inputs.as_ref().and_then(|t| t[p].as_ref());
        if own_input != view.center_input {
            return Some(false);
        }
        for &(their_id, attrs) in &neighbor_ids {
            let q = table.ids.iter().position(|&id| id == their_id)?;
            let e = g.edge_between(p, q)?;
            if g.edge(e).attrs != attrs {
                return Some(false);
            }
        }
        Some(is_connected(&g) && self.predicate.holds(&g))
    }
}

impl Scheme for Universal {
    fn name(&self) -> String {
        format!("universal:{}", self.predicate)
    }

    fn model(&self) -> Model {
        Model::Pls
    }

    fn descriptor(&self) -> Descriptor {
        descriptor(
            self.name(),
            self.model(),
            "any (copied into the certificate)",
            "any (copied into the certificate)",
            "(n + 1) id_bits + n^2 + 2, plus tables",
        )
    }

    fn membership(&self, inst: &Instance) -> Result<(), String> {
        if self.predicate.holds(inst.graph()) {
            Ok(())
        } else {
            Err(format!("predicate {} does not hold", self.predicate))
        }
    }

    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        let table = UniversalCertificate::from_instance(inst);
        let body = table.encode_body(inst.id_bits());
        Ok((0..inst.node_count())
            .map(|v| {
                let mut b = BitString::from_uint(inst.id(v), inst.id_bits());
                b.extend_from(&body);
                b
            })
            .collect())
    }

    fn verify(&self, view: &View<'_>) -> bool {
        self.check(view).unwrap_or(false)
    }
}
