//! Local certification of graph properties.
//!
//! An [`graph::Instance`] is a connected graph with distinct identifiers and
//! optional node and edge inputs. A [`engine::Scheme`] pairs a prover, which
//! assigns a bitstring certificate to every node, with a verifier that sees
//! only the node's [`views::View`]. The instance is accepted when every node
//! accepts.
//!
//! ```
//! use certilab::engine::{decide, Scheme};
//! use certilab::graph::make_path;
//! use certilab::schemes::PathLanguage;
//!
//! let path = make_path(&[3, 1, 4, 5, 2]).unwrap();
//! let certs = PathLanguage.prove(&path).unwrap();
//! assert!(decide(&path, &certs, &PathLanguage).unwrap().accepted());
//! ```

pub mod bits;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod falsifier;
pub mod graph;
pub mod randomized;
pub mod schemes;
pub mod views;

pub use bits::BitString;
pub use engine::{decide, CertificateMap, Scheme, Verdict};
pub use error::{EngineError, FalsifierError, GraphError, ParseError, RandomizedError, SchemeError};
pub use graph::{Configuration, Graph, Instance};
pub use views::{Model, View};
