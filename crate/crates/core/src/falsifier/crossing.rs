use serde::Serialize;

use crate::bits::BitString;
use crate::engine::{decide, CertificateMap, Scheme};
use crate::error::FalsifierError;
use crate::graph::algo::path_order;
use crate::graph::{Edge, EdgeAttrs, Graph, Instance};
use crate::views::{extract_view, views_indistinguishable, Model};

use super::AttackOutcome;

/// Two disjoint path edges `(a, b)` and `(c, d)`, in this order along the
/// path, with `cert(a) = cert(c)` and `cert(b) = cert(d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossingPair {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    /// Nodes on the segment from `b` to `c`.
    pub segment_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingReport {
    pub candidates: usize,
    pub first_candidate: Option<CrossingPair>,
    /// The pair the fooled cycle was built from.
    pub used: Option<CrossingPair>,
    /// Every cycle node sees exactly what it saw on the path.
    pub views_preserved: Option<bool>,
    #[serde(flatten)]
    pub outcome: AttackOutcome,
}

fn segment_cycle(
    inst: &Instance,
    order: &[usize],
    i: usize,
    j: usize,
    closing: EdgeAttrs,
) -> Instance {
    let nodes = &order[i + 1..=j];
    let len = nodes.len();
    let mut edges: Vec<Edge> = (0..len - 1)
        .map(|t| {
            let e = inst.graph().edge_between(nodes[t], nodes[t + 1]).expect("consecutive path nodes");
            Edge {
                u: t,
                v: t + 1,
                attrs: inst.graph().edge(e).attrs,
            }
        })
        .collect();
    edges.push(Edge {
        u: len - 1,
        v: 0,
        attrs: closing,
    });
    let mut g = Graph::new(len, edges).expect("in range");
    g.set_weight_bound(inst.graph().declared_weight_bound());
    let ids = nodes.iter().map(|&v| inst.id(v)).collect();
    let inputs = nodes.iter().map(|&v| inst.input(v).cloned()).collect();
    Instance::new(g, ids, inst.id_bits(), inputs).expect("sizes match")
}

/// Crosses two equally-labeled edges of an accepted path to close the
/// segment between them into a cycle that keeps the original certificates.
///
/// Candidates are scanned in path order. A candidate yields a cycle when the
/// segment has at least three nodes and both edges carry the same
/// attributes; the first cycle that every node accepts is returned.
pub fn crossing_attack<S: Scheme + ?Sized>(
    scheme: &S,
    path: &Instance,
    certs: &CertificateMap,
) -> Result<CrossingReport, FalsifierError> {
    let model = scheme.model();
    if !matches!(model, Model::Pls | Model::Nld) {
        return Err(FalsifierError::WrongModel("pls".into()));
    }
    let order = path_order(path.graph()).ok_or(FalsifierError::NotAPath)?;
    if !decide(path, certs, scheme)?.accepted() {
        return Err(FalsifierError::NotAccepting);
    }
    let indexed: Vec<&BitString> = certs.indexed(path)?;
    let cert = |pos: usize| indexed[order[pos]];
    let attrs = |pos: usize| {
        let e = path.graph().edge_between(order[pos], order[pos + 1]).expect("path edge");
        path.graph().edge(e).attrs
    };
    let edge_count = order.len().saturating_sub(1);
    let mut report = CrossingReport {
        candidates: 0,
        first_candidate: None,
        used: None,
        views_preserved: None,
        outcome: AttackOutcome::NoAttackFound,
    };
    for i in 0..edge_count {
        for j in i + 2..edge_count {
            if cert(i) != cert(j) || cert(i + 1) != cert(j + 1) {
                continue;
            }
            let pair = CrossingPair {
                a: path.id(order[i]),
                b: path.id(order[i + 1]),
                c: path.id(order[j]),
                d: path.id(order[j + 1]),
                segment_len: j - i,
            };
            report.candidates += 1;
            report.first_candidate.get_or_insert(pair);
            if report.used.is_some() || j < i + 3 || attrs(i) != attrs(j) {
                continue;
            }
            let cycle = segment_cycle(path, &order, i, j, attrs(i));
            let cycle_certs: CertificateMap = cycle
                .ids()
                .iter()
                .map(|&id| (id, certs.get(id).expect("subset of path ids").clone()))
                .collect();
            if !decide(&cycle, &cycle_certs, scheme)?.accepted() || scheme.is_member(&cycle) {
                continue;
            }
            let mut preserved = true;
            for &id in cycle.ids() {
                let before = extract_view(path, certs, id, model)?;
                let after = extract_view(&cycle, &cycle_certs, id, model)?;
                preserved &= views_indistinguishable(&before, &after)?;
            }
            report.used = Some(pair);
            report.views_preserved = Some(preserved);
            report.outcome = AttackOutcome::Fooled {
                instance: cycle,
                certificates: cycle_certs,
            };
        }
    }
    Ok(report)
}
