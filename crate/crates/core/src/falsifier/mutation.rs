use serde::Serialize;

use crate::engine::{decide, CertificateMap, Scheme};
use crate::error::FalsifierError;
use crate::graph::{validate_instance, EdgeAttrs, Instance};

/// A single local change to a yes-instance. Edge indices refer to the
/// original instance; added edges name their endpoints by identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mutation {
    FlipSelected { edge: usize },
    PerturbWeight { edge: usize, weight: u64 },
    DeleteEdge { edge: usize },
    AddEdge { u: u64, v: u64, attrs: EdgeAttrs },
    /// Deselect one edge and select another.
    SwapSelected { deselect: usize, select: usize },
}

impl Mutation {
    /// The mutated instance, or `None` when the result is not a valid
    /// instance (disconnected, multi-edge, bad index).
    pub fn apply(&self, inst: &Instance) -> Option<Instance> {
        let mut out = inst.clone();
        let m = inst.graph().edge_count();
        match *self {
            Mutation::FlipSelected { edge } if edge < m => {
                let mut a = inst.graph().edge(edge).attrs;
                a.selected = Some(!a.is_selected());
                out.graph_mut().set_edge_attrs(edge, a);
            }
            Mutation::PerturbWeight { edge, weight } if edge < m => {
                let mut a = inst.graph().edge(edge).attrs;
                a.weight = Some(weight);
                out.graph_mut().set_edge_attrs(edge, a);
            }
            Mutation::DeleteEdge { edge } if edge < m => {
                out.graph_mut().remove_edge(edge);
            }
            Mutation::AddEdge { u, v, attrs } => {
                let (a, b) = (inst.index_of(u)?, inst.index_of(v)?);
                out.graph_mut().add_edge(a, b, attrs).ok()?;
            }
            Mutation::SwapSelected { deselect, select } if deselect < m && select < m && deselect != select => {
                let mut a = inst.graph().edge(deselect).attrs;
                let mut b = inst.graph().edge(select).attrs;
                a.selected = Some(false);
                b.selected = Some(true);
                out.graph_mut().set_edge_attrs(deselect, a);
                out.graph_mut().set_edge_attrs(select, b);
            }
            _ => return None,
        }
        validate_instance(&out).is_valid().then_some(out)
    }
}

/// One mutation per edge, toggling its selection bit.
pub fn selection_flips(inst: &Instance) -> Vec<Mutation> {
    (0..inst.graph().edge_count())
        .map(|edge| Mutation::FlipSelected { edge })
        .collect()
}

/// Flips, swaps, weight changes of one unit, single deletions, and
/// additions of every missing edge.
pub fn standard_mutations(inst: &Instance) -> Vec<Mutation> {
    let g = inst.graph();
    let m = g.edge_count();
    let mut out = selection_flips(inst);
    let selected: Vec<usize> = g.selected_edges().collect();
    for &s in &selected {
        for e in (0..m).filter(|e| !selected.contains(e)) {
            out.push(Mutation::SwapSelected { deselect: s, select: e });
        }
    }
    let bound = g.weight_bound().unwrap_or(u64::MAX);
    for (edge, e) in g.edges().iter().enumerate() {
        if let Some(w) = e.attrs.weight {
            if w > 1 {
                out.push(Mutation::PerturbWeight { edge, weight: w - 1 });
            }
            if w < bound {
                out.push(Mutation::PerturbWeight { edge, weight: w + 1 });
            }
        }
    }
    out.extend((0..m).map(|edge| Mutation::DeleteEdge { edge }));
    let uses_selection = g.edges().iter().any(|e| e.attrs.selected.is_some());
    let uses_weights = g.edges().iter().any(|e| e.attrs.weight.is_some());
    for a in 0..g.node_count() {
        for b in a + 1..g.node_count() {
            if !g.has_edge(a, b) {
                let attrs = EdgeAttrs {
                    weight: uses_weights.then(|| bound.min(100)),
                    selected: uses_selection.then_some(false),
                };
                out.push(Mutation::AddEdge {
                    u: inst.id(a),
                    v: inst.id(b),
                    attrs,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationReport {
    pub scheme: String,
    /// Mutations that produced a no-instance and were replayed.
    pub tested: usize,
    /// Of those, how many had at least one rejecting node.
    pub caught: usize,
    pub skipped_yes: usize,
    pub skipped_invalid: usize,
    /// Mutations whose no-instance accepted the original certificates.
    pub silent: Vec<Mutation>,
}

impl MutationReport {
    pub fn all_caught(&self) -> bool {
        self.silent.is_empty()
    }
}

/// Replays the prover's certificates for `yes_inst` on every mutated
/// no-instance and counts how many are rejected somewhere.
pub fn mutation_soundness<S: Scheme + ?Sized>(
    scheme: &S,
    yes_inst: &Instance,
    mutations: &[Mutation],
) -> Result<MutationReport, FalsifierError> {
    let certs = scheme.prove(yes_inst)?;
    replay(scheme, yes_inst, &certs, mutations)
}

/// Like [`mutation_soundness`] with certificates supplied by the caller.
pub fn replay<S: Scheme + ?Sized>(
    scheme: &S,
    yes_inst: &Instance,
    certs: &CertificateMap,
    mutations: &[Mutation],
) -> Result<MutationReport, FalsifierError> {
    let mut report = MutationReport {
        scheme: scheme.name(),
        tested: 0,
        caught: 0,
        skipped_yes: 0,
        skipped_invalid: 0,
        silent: Vec::new(),
    };
    for mutation in mutations {
        let Some(mutated) = mutation.apply(yes_inst) else {
            report.skipped_invalid += 1;
            continue;
        };
        if scheme.is_member(&mutated) {
            report.skipped_yes += 1;
            continue;
        }
        report.tested += 1;
        if decide(&mutated, certs, scheme)?.accepted() {
            report.silent.push(*mutation);
        } else {
            report.caught += 1;
        }
    }
    Ok(report)
}
