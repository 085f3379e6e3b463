//! JSON instance documents and DOT export.
//!
//! ```json
//! {"id_bits": 2,
//!  "nodes": [{"id": 1, "input": "1:8"}, {"id": 2, "input": null}],
//!  "edges": [{"u": 1, "v": 2, "weight": 3, "selected": true}]}
//! ```
//!
//! Edges refer to nodes by identifier. An optional `weight_bound` key carries
//! the declared `W` when one exists.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Edge, EdgeAttrs, Graph, Instance};
use crate::bits::BitString;
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub id_bits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_bound: Option<u64>,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: u64,
    pub input: Option<BitString>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub u: u64,
    pub v: u64,
    pub weight: Option<u64>,
    pub selected: Option<bool>,
}

impl InstanceDoc {
    pub fn from_instance(inst: &Instance) -> Self {
        let g = inst.graph();
        InstanceDoc {
            id_bits: inst.id_bits(),
            weight_bound: g.declared_weight_bound(),
            nodes: (0..inst.node_count())
                .map(|v| NodeDoc {
                    id: inst.id(v),
                    input: inst.input(v).cloned(),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    u: inst.id(e.u),
                    v: inst.id(e.v),
                    weight: e.attrs.weight,
                    selected: e.attrs.selected,
                })
                .collect(),
        }
    }

    /// Rejects documents whose edges cannot be resolved: unknown endpoint ids
    /// or ids used by two nodes. Other invariant violations are left to
    /// `validate_instance`.
    pub fn into_instance(self) -> Result<Instance, ParseError> {
        let mut index = HashMap::with_capacity(self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            if index.insert(node.id, i).is_some() {
                return Err(ParseError::Document(format!("node id {} appears twice", node.id)));
            }
        }
        let lookup = |id: u64| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| ParseError::Document(format!("edge endpoint {id} is not a node")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            edges.push(Edge {
                u: lookup(e.u)?,
                v: lookup(e.v)?,
                attrs: EdgeAttrs {
                    weight: e.weight,
                    selected: e.selected,
                },
            });
        }
        let mut g = Graph::new(self.nodes.len(), edges)
            .map_err(|e| ParseError::Document(e.to_string()))?;
        g.set_weight_bound(self.weight_bound);
        let ids = self.nodes.iter().map(|n| n.id).collect();
        let inputs = self.nodes.into_iter().map(|n| n.input).collect();
        Instance::new(g, ids, self.id_bits, inputs).map_err(|e| ParseError::Document(e.to_string()))
    }
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        InstanceDoc::from_instance(self).serialize(serializer)
    }
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceDoc::from_instance(inst)).expect("instance documents serialize")
}

pub fn instance_from_json(text: &str) -> Result<Instance, ParseError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    doc.into_instance()
}

/// Graphviz rendering; selected edges are bold, weights become labels.
pub fn instance_to_dot(inst: &Instance) -> String {
    let mut out = String::from("graph instance {\n");
    for v in 0..inst.node_count() {
        let label = match inst.input(v) {
            Some(b) => format!("{}\\n{}", inst.id(v), b.to_binary_string()),
            None => inst.id(v).to_string(),
        };
        let _ = writeln!(out, "  n{} [label=\"{}\"];", inst.id(v), label);
    }
    for e in inst.graph().edges() {
        let mut attrs = Vec::new();
        if let Some(w) = e.attrs.weight {
            attrs.push(format!("label=\"{w}\""));
        }
        if e.attrs.is_selected() {
            attrs.push("style=bold".to_string());
        }
        let suffix = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        let _ = writeln!(out, "  n{} -- n{}{};", inst.id(e.u), inst.id(e.v), suffix);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_path, make_random_weighted, validate_instance};
    use proptest::prelude::*;

    #[test]
    fn document_shape() {
        let mut p = make_path(&[1, 2]).unwrap();
        p.set_input(0, Some(BitString::from_binary_str("1").unwrap()));
        let json = instance_to_json(&p);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["id_bits"], 2);
        assert_eq!(value["nodes"][0]["input"], "1:8");
        assert!(value["nodes"][1]["input"].is_null());
        assert_eq!(value["edges"][0]["u"], 1);
        assert!(value["edges"][0]["weight"].is_null());
        assert!(value.get("weight_bound").is_none());
    }

    #[test]
    fn unresolvable_documents_rejected() {
        let dup = r#"{"id_bits":2,"nodes":[{"id":1,"input":null},{"id":1,"input":null}],"edges":[]}"#;
        assert!(instance_from_json(dup).is_err());
        let dangling = r#"{"id_bits":2,"nodes":[{"id":1,"input":null}],"edges":[{"u":1,"v":5,"weight":null,"selected":null}]}"#;
        assert!(instance_from_json(dangling).is_err());
        assert!(instance_from_json("{").is_err());
    }

    #[test]
    fn disconnected_document_parses_but_fails_validation() {
        let text = r#"{"id_bits":2,"nodes":[{"id":1,"input":null},{"id":2,"input":null},{"id":3,"input":null}],"edges":[{"u":1,"v":2,"weight":null,"selected":null}]}"#;
        let inst = instance_from_json(text).unwrap();
        assert!(!validate_instance(&inst).is_valid());
    }

    #[test]
    fn dot_mentions_every_edge() {
        let inst = make_random_weighted(5, 6, 9, 2).unwrap();
        let dot = instance_to_dot(&inst);
        assert_eq!(dot.matches(" -- ").count(), 6);
    }

    proptest! {
        #[test]
        fn json_round_trip(n in 1usize..20, extra in 0usize..10, seed in any::<u64>(), sel in any::<u64>()) {
            let m = (n - 1 + extra).min(n * (n - 1) / 2);
            let mut inst = make_random_weighted(n, m, 50, seed).unwrap();
            for i in 0..m {
                let mut a = inst.graph().edge(i).attrs;
                a.selected = match (sel >> (i % 64)) & 3 { 0 => None, 1 => Some(false), _ => Some(true) };
                inst.graph_mut().set_edge_attrs(i, a);
            }
            for v in 0..n {
                if (sel >> (v % 64)) & 1 == 1 {
                    inst.set_input(v, Some(BitString::from_uint(v as u64 % 4, 2)));
                }
            }
            let text = instance_to_json(&inst);
            let back = instance_from_json(&text).unwrap();
            prop_assert_eq!(&back, &inst);
            prop_assert_eq!(instance_to_json(&back), text);
        }
    }
}
