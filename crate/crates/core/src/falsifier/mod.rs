//! Searching for certificates that fool a verifier.
//!
//! [`exhaustive`] enumerates every labeling up to a bit budget,
//! [`mutation`] replays honest certificates on perturbed instances, and
//! [`crossing`] and [`cut_and_plug`] build fooling cycles out of accepted
//! paths.

pub mod crossing;
pub mod cut_and_plug;
pub mod exhaustive;
pub mod mutation;

use serde::Serialize;

use crate::engine::CertificateMap;
use crate::graph::Instance;

pub use crossing::{crossing_attack, CrossingPair, CrossingReport};
pub use cut_and_plug::{chunks_from_path, cut_and_plug_search, CutAndPlugReport, LabeledChunk, PlugGraph};
pub use exhaustive::{assignment_count, default_cap, exhaustive_soundness, SoundnessOutcome, SoundnessReport, DEFAULT_CAP};
pub use mutation::{mutation_soundness, selection_flips, standard_mutations, Mutation, MutationReport};

/// Result of a constructive attack. A fooled instance has been re-checked:
/// every node accepts and the membership oracle says no.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum AttackOutcome {
    NoAttackFound,
    Fooled {
        instance: Instance,
        certificates: CertificateMap,
    },
}

impl AttackOutcome {
    pub fn is_fooled(&self) -> bool {
        matches!(self, AttackOutcome::Fooled { .. })
    }
}
