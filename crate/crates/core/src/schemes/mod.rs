//! The scheme catalog and its name registry.
//!
//! Names understood by [`scheme_by_name`]:
//!
//! | name | language | model |
//! |---|---|---|
//! | `proper-coloring:<k>` | node inputs form a proper coloring with colors `< k` | lcp:1 |
//! | `k-colorability:<k>` | the graph is k-colorable | nld |
//! | `amos` | at most one node has input 1 | pls |
//! | `path` | the graph is a path | pls |
//! | `spanning-tree` | selected edges form a spanning tree | pls |
//! | `exact-count:<k>` | exactly k nodes have input 1 | pls |
//! | `mst` | selected edges form the minimum spanning tree | pls |
//! | `bipartite-matching` | bipartite, selected edges are a maximum matching | pls |
//! | `universal:<predicate>` | `cycle`, `path`, `dumbbell:<k>`, `diameter:<k>` | pls |
//! | `degree2`, `const1bit`, `parity`, `mod-counter:<b>` | deliberately unsound path schemes | pls |

mod amos;
mod coloring;
mod counting;
mod matching;
pub mod mst;
mod path;
mod pseudo;
mod spanning_tree;
pub mod universal;

pub use amos::Amos;
pub use coloring::{color_input, KColorability, ProperColoring};
pub use counting::{CountCertificate, ExactCount};
pub use matching::BipartiteMaxMatching;
pub use mst::{MstCertificate, MstScheme};
pub use path::PathLanguage;
pub use pseudo::{Const1Bit, Degree2, ModCounter};
pub use spanning_tree::{SpanningTree, SpanningTreeCertificate};
pub use universal::{Predicate, Universal, UniversalCertificate};

use crate::engine::{Descriptor, Scheme};
use crate::error::SchemeError;
use crate::graph::EdgeAttrs;
use crate::views::Model;

/// Schemes exercised by the completeness and model-hygiene suites.
pub const CATALOG: &[&str] = &[
    "proper-coloring:3",
    "k-colorability:3",
    "amos",
    "path",
    "spanning-tree",
    "exact-count:3",
    "mst",
    "bipartite-matching",
    "universal:cycle",
    "universal:dumbbell:1",
    "universal:diameter:3",
];

pub const PSEUDO_SCHEMES: &[&str] = &["degree2", "const1bit", "parity", "mod-counter:2"];

pub fn scheme_by_name(spec: &str) -> Result<Box<dyn Scheme>, SchemeError> {
    let (head, param) = match spec.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (spec, None),
    };
    let number = |what: &str| -> Result<u64, SchemeError> {
        param
            .ok_or_else(|| bad(head, format!("missing {what}, write {head}:<{what}>")))?
            .parse::<u64>()
            .map_err(|_| bad(head, format!("{what} must be a non-negative integer")))
    };
    let no_param = || match param {
        Some(_) => Err(bad(head, "takes no parameter".into())),
        None => Ok(()),
    };
    let scheme: Box<dyn Scheme> = match head {
        "proper-coloring" => Box::new(ProperColoring::new(number("k")?)?),
        "k-colorability" => Box::new(KColorability::new(number("k")?)?),
        "amos" => no_param().map(|_| Box::new(Amos) as Box<dyn Scheme>)?,
        "path" => no_param().map(|_| Box::new(PathLanguage) as Box<dyn Scheme>)?,
        "spanning-tree" => no_param().map(|_| Box::new(SpanningTree) as Box<dyn Scheme>)?,
        "exact-count" => Box::new(ExactCount { k: number("k")? }),
        "mst" => no_param().map(|_| Box::new(MstScheme) as Box<dyn Scheme>)?,
        "bipartite-matching" => no_param().map(|_| Box::new(BipartiteMaxMatching) as Box<dyn Scheme>)?,
        "universal" => {
            let predicate = param
                .ok_or_else(|| bad(head, "missing predicate".into()))?
                .parse::<Predicate>()?;
            Box::new(Universal { predicate })
        }
        "degree2" => no_param().map(|_| Box::new(Degree2) as Box<dyn Scheme>)?,
        "const1bit" => no_param().map(|_| Box::new(Const1Bit) as Box<dyn Scheme>)?,
        "parity" => no_param().map(|_| Box::new(ModCounter::new(1).expect("1 bit")) as Box<dyn Scheme>)?,
        "mod-counter" => Box::new(ModCounter::new(number("bits")?)?),
        _ => return Err(SchemeError::Unknown(spec.to_string())),
    };
    Ok(scheme)
}

pub(crate) fn bad(scheme: &str, message: String) -> SchemeError {
    SchemeError::BadParameter {
        scheme: scheme.to_string(),
        message,
    }
}

pub(crate) fn selected(attrs: &EdgeAttrs) -> bool {
    attrs.selected == Some(true)
}

pub(crate) fn descriptor(
    name: String,
    model: Model,
    node_inputs: &str,
    edge_inputs: &str,
    certificate_bits: &str,
) -> Descriptor {
    Descriptor {
        name,
        model: model.to_string(),
        node_inputs: node_inputs.to_string(),
        edge_inputs: edge_inputs.to_string(),
        certificate_bits: certificate_bits.to_string(),
    }
}
