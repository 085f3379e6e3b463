//! Local decision: run a scheme's verifier at every node and take the AND.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{EngineError, ParseError};
use crate::graph::{relabel_ids_with, Instance};
use crate::views::{view_of, Model, View};

/// Certificates longer than this are treated as an engine fault.
pub const MAX_CERTIFICATE_BITS: usize = 1 << 20;

/// Below this node count `decide` evaluates nodes on the calling thread.
const PARALLEL_THRESHOLD: usize = 256;

/// One bitstring per node, keyed by node identifier.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CertificateMap {
    certs: BTreeMap<u64, BitString>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    certificates: BTreeMap<String, BitString>,
    #[serde(default)]
    max_bits: Option<usize>,
}

impl CertificateMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every node gets the empty bitstring.
    pub fn empty_for(inst: &Instance) -> Self {
        inst.ids().iter().map(|&id| (id, BitString::new())).collect()
    }

    /// `certs[v]` becomes the certificate of node index `v`.
    pub fn from_indexed(inst: &Instance, certs: Vec<BitString>) -> Self {
        assert_eq!(certs.len(), inst.node_count(), "one certificate per node");
        inst.ids().iter().copied().zip(certs).collect()
    }

    pub fn insert(&mut self, id: u64, cert: BitString) -> Option<BitString> {
        self.certs.insert(id, cert)
    }

    pub fn get(&self, id: u64) -> Option<&BitString> {
        self.certs.get(&id)
    }

    pub fn get_mut(&mut self, id: u64) -> Option<&mut BitString> {
        self.certs.get_mut(&id)
    }

    pub fn len(&self) -> usize {
        self.certs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BitString)> {
        self.certs.iter().map(|(&id, c)| (id, c))
    }

    pub fn max_bits(&self) -> usize {
        certificate_size_bits(self)
    }

    /// Certificates in node-index order, after checking that the map covers
    /// exactly the instance's nodes and respects the length limit.
    pub fn indexed<'a>(&'a self, inst: &Instance) -> Result<Vec<&'a BitString>, EngineError> {
        if let Some(&id) = self.certs.keys().find(|&&id| inst.index_of(id).is_none()) {
            return Err(EngineError::UnknownNode(id));
        }
        inst.ids()
            .iter()
            .map(|&id| {
                let cert = self.certs.get(&id).ok_or(EngineError::MissingCertificate(id))?;
                if cert.len() > MAX_CERTIFICATE_BITS {
                    return Err(EngineError::OverlongCertificate {
                        id,
                        len: cert.len(),
                        limit: MAX_CERTIFICATE_BITS,
                    });
                }
                Ok(cert)
            })
            .collect()
    }

    /// `{"certificates": {"<id>": "<len>:<hex>"}, "max_bits": N}`
    pub fn to_json(&self) -> String {
        let doc = CertificateDoc {
            certificates: self.certs.iter().map(|(id, c)| (id.to_string(), c.clone())).collect(),
            max_bits: Some(self.max_bits()),
        };
        serde_json::to_string_pretty(&doc).expect("certificate documents serialize")
    }

    /// Parses a certificate document. `max_bits`, when present, must match.
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let doc: CertificateDoc = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        let mut map = CertificateMap::new();
        for (key, cert) in doc.certificates {
            let id = key
                .parse::<u64>()
                .map_err(|_| ParseError::Document(format!("certificate key {key:?} is not a node id")))?;
            if map.insert(id, cert).is_some() {
                return Err(ParseError::Document(format!("node id {id} appears twice")));
            }
        }
        if let Some(declared) = doc.max_bits {
            if declared != map.max_bits() {
                return Err(ParseError::Document(format!(
                    "max_bits says {declared} but the largest certificate has {} bits",
                    map.max_bits()
                )));
            }
        }
        Ok(map)
    }
}

/// Serializes as `{"<id>": "<len>:<hex>"}`.
impl Serialize for CertificateMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.certs.iter().map(|(id, c)| (id.to_string(), c)))
    }
}

impl FromIterator<(u64, BitString)> for CertificateMap {
    fn from_iter<I: IntoIterator<Item = (u64, BitString)>>(iter: I) -> Self {
        CertificateMap {
            certs: iter.into_iter().collect(),
        }
    }
}

/// Maximum label length; 0 for an empty map.
pub fn certificate_size_bits(certs: &CertificateMap) -> usize {
    certs.certs.values().map(BitString::len).max().unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn from_bool(accept: bool) -> Self {
        if accept {
            Decision::Accept
        } else {
            Decision::Reject
        }
    }

    pub fn is_accept(self) -> bool {
        self == Decision::Accept
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDecision {
    pub id: u64,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub global: Decision,
    pub certificate_bits: usize,
    pub nodes: Vec<NodeDecision>,
}

impl Verdict {
    fn from_decisions(nodes: Vec<NodeDecision>, certificate_bits: usize) -> Self {
        let global = Decision::from_bool(nodes.iter().all(|n| n.decision.is_accept()));
        Verdict {
            global,
            certificate_bits,
            nodes,
        }
    }

    pub fn accepted(&self) -> bool {
        self.global.is_accept()
    }

    pub fn rejecting_nodes(&self) -> Vec<u64> {
        self.nodes
            .iter()
            .filter(|n| !n.decision.is_accept())
            .map(|n| n.id)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdicts serialize")
    }
}

/// Machine-readable summary of a scheme, exposed by the registry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Descriptor {
    pub name: String,
    pub model: String,
    pub node_inputs: String,
    pub edge_inputs: String,
    pub certificate_bits: String,
}

/// A prover/verifier pair for one language.
pub trait Scheme: Send + Sync {
    fn name(&self) -> String;

    fn model(&self) -> Model;

    fn descriptor(&self) -> Descriptor;

    /// Centralized membership oracle. `Err` carries a human-readable reason.
    fn membership(&self, inst: &Instance) -> Result<(), String>;

    /// Certificates in node-index order; only called on members.
    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String>;

    /// The local decision. Must be a pure function of the view and must not
    /// depend on the order of neighbor records.
    fn verify(&self, view: &View<'_>) -> bool;

    fn is_member(&self, inst: &Instance) -> bool {
        self.membership(inst).is_ok()
    }

    /// The prover. Calling it on a no-instance is a fault.
    fn prove(&self, inst: &Instance) -> Result<CertificateMap, EngineError> {
        self.membership(inst).map_err(EngineError::NotMember)?;
        let certs = self.certify(inst).map_err(EngineError::Prover)?;
        if certs.len() != inst.node_count() {
            return Err(EngineError::Prover(format!(
                "prover produced {} certificates for {} nodes",
                certs.len(),
                inst.node_count()
            )));
        }
        Ok(CertificateMap::from_indexed(inst, certs))
    }
}

impl<S: Scheme + ?Sized> Scheme for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn model(&self) -> Model {
        (**self).model()
    }
    fn descriptor(&self) -> Descriptor {
        (**self).descriptor()
    }
    fn membership(&self, inst: &Instance) -> Result<(), String> {
        (**self).membership(inst)
    }
    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        (**self).certify(inst)
    }
    fn verify(&self, view: &View<'_>) -> bool {
        (**self).verify(view)
    }
}

/// Runs a scheme's prover and verifier unchanged under a different model.
pub struct WithModel<S> {
    pub inner: S,
    pub model: Model,
}

impl<S: Scheme> Scheme for WithModel<S> {
    fn name(&self) -> String {
        self.inner.name()
    }
    fn model(&self) -> Model {
        self.model
    }
    fn descriptor(&self) -> Descriptor {
        Descriptor {
            model: self.model.to_string(),
            ..self.inner.descriptor()
        }
    }
    fn membership(&self, inst: &Instance) -> Result<(), String> {
        self.inner.membership(inst)
    }
    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        self.inner.certify(inst)
    }
    fn verify(&self, view: &View<'_>) -> bool {
        self.inner.verify(view)
    }
}

/// Local decisions in node-index order from pre-indexed certificates.
pub fn local_decisions<S: Scheme + ?Sized>(inst: &Instance, certs: &[&BitString], scheme: &S) -> Vec<bool> {
    let model = scheme.model();
    let run = |v: usize| scheme.verify(&view_of(inst, certs, v, model));
    if inst.node_count() >= PARALLEL_THRESHOLD {
        (0..inst.node_count()).into_par_iter().map(run).collect()
    } else {
        (0..inst.node_count()).map(run).collect()
    }
}

/// Global decision with early exit on the first rejecting node.
pub fn accepts_all<S: Scheme + ?Sized>(inst: &Instance, certs: &[&BitString], scheme: &S) -> bool {
    let model = scheme.model();
    (0..inst.node_count()).all(|v| scheme.verify(&view_of(inst, certs, v, model)))
}

pub fn decide<S: Scheme + ?Sized>(inst: &Instance, certs: &CertificateMap, scheme: &S) -> Result<Verdict, EngineError> {
    let indexed = certs.indexed(inst)?;
    let decisions = local_decisions(inst, &indexed, scheme);
    let nodes = decisions
        .into_iter()
        .enumerate()
        .map(|(v, ok)| NodeDecision {
            id: inst.id(v),
            decision: Decision::from_bool(ok),
        })
        .collect();
    let verdict = Verdict::from_decisions(nodes, certificate_size_bits(certs));
    debug_assert_eq!(
        verdict.accepted(),
        verdict.nodes.iter().all(|n| n.decision.is_accept())
    );
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub scheme: String,
    pub n: usize,
    pub id_bits: u32,
    pub passed: bool,
    pub certificate_bits: usize,
    pub rejecting: Vec<u64>,
}

/// Prove, then decide. Faults when the instance is not a member.
pub fn check_completeness<S: Scheme + ?Sized>(scheme: &S, inst: &Instance) -> Result<CompletenessReport, EngineError> {
    let certs = scheme.prove(inst)?;
    let verdict = decide(inst, &certs, scheme)?;
    Ok(CompletenessReport {
        scheme: scheme.name(),
        n: inst.node_count(),
        id_bits: inst.id_bits(),
        passed: verdict.accepted(),
        certificate_bits: verdict.certificate_bits,
        rejecting: verdict.rejecting_nodes(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NldViolation {
    pub trial: usize,
    pub node_index: usize,
    pub original: BitString,
    pub relabeled: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NldReport {
    pub trials: usize,
    pub invariant: bool,
    pub first_violation: Option<NldViolation>,
}

/// Fresh distinct identifiers below `2^id_bits`, none equal to `avoid`.
fn fresh_ids(rng: &mut ChaCha8Rng, count: usize, id_bits: u32, avoid: Option<u64>) -> Vec<u64> {
    let space = if id_bits >= 24 { 1usize << 24 } else { 1usize << id_bits };
    let skip = usize::from(avoid.is_some_and(|a| (a as usize) < space));
    let picked = sample(rng, space - skip, count);
    picked
        .into_iter()
        .map(|x| {
            let x = x as u64;
            match avoid {
                Some(a) if skip == 1 && x >= a => x + 1,
                _ => x,
            }
        })
        .collect()
}

/// Compares the prover's output, node by node position, across random
/// identifier reassignments. Any scheme can be checked; the report says
/// whether its certificates happen to be identifier-independent.
pub fn check_nld_invariance<S: Scheme + ?Sized>(
    scheme: &S,
    inst: &Instance,
    trials: usize,
    seed: u64,
) -> Result<NldReport, EngineError> {
    let original = scheme.prove(inst)?;
    let original = original.indexed(inst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let ids = fresh_ids(&mut rng, inst.node_count(), inst.id_bits(), None);
        let mut relabeled = relabel_ids_with(inst, ids).expect("fresh ids are distinct");
        relabeled.set_id_bits(inst.id_bits());
        let certs = scheme.prove(&relabeled)?;
        let certs = certs.indexed(&relabeled)?;
        if let Some(v) = (0..inst.node_count()).find(|&v| original[v] != certs[v]) {
            return Ok(NldReport {
                trials: trial + 1,
                invariant: false,
                first_violation: Some(NldViolation {
                    trial,
                    node_index: v,
                    original: original[v].clone(),
                    relabeled: certs[v].clone(),
                }),
            });
        }
    }
    Ok(NldReport {
        trials,
        invariant: true,
        first_violation: None,
    })
}

/// Id of the first node whose decision changes when its neighbor records
/// (or ball nodes) are shuffled `permutations` times.
pub fn check_order_invariance<S: Scheme + ?Sized>(
    scheme: &S,
    inst: &Instance,
    certs: &CertificateMap,
    permutations: usize,
    seed: u64,
) -> Result<Option<u64>, EngineError> {
    let indexed = certs.indexed(inst)?;
    let model = scheme.model();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in 0..inst.node_count() {
        let view = view_of(inst, &indexed, v, model);
        let base = scheme.verify(&view);
        for _ in 0..permutations {
            let mut shuffled = view.clone();
            shuffled.shuffle_neighbors(&mut rng);
            if scheme.verify(&shuffled) != base {
                return Ok(Some(inst.id(v)));
            }
        }
    }
    Ok(None)
}

/// For PLS/NLD schemes: id of the first node whose decision changes when
/// every other node gets a fresh identifier while certificates stay put.
/// LCP schemes see identifiers legitimately and always pass.
pub fn check_id_blindness<S: Scheme + ?Sized>(
    scheme: &S,
    inst: &Instance,
    certs: &CertificateMap,
    trials: usize,
    seed: u64,
) -> Result<Option<u64>, EngineError> {
    if scheme.model().exposes_neighbor_ids() {
        return Ok(None);
    }
    let indexed: Vec<BitString> = certs.indexed(inst)?.into_iter().cloned().collect();
    let model = scheme.model();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in 0..inst.node_count() {
        let center = inst.id(v);
        let base = {
            let refs: Vec<&BitString> = indexed.iter().collect();
            scheme.verify(&view_of(inst, &refs, v, model))
        };
        for _ in 0..trials {
            let mut ids = fresh_ids(&mut rng, inst.node_count(), inst.id_bits(), Some(center));
            ids[v] = center;
            let mut relabeled = relabel_ids_with(inst, ids).expect("fresh ids avoid the center");
            relabeled.set_id_bits(inst.id_bits());
            let refs: Vec<&BitString> = indexed.iter().collect();
            if scheme.verify(&view_of(&relabeled, &refs, v, model)) != base {
                return Ok(Some(center));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_path, make_random_tree};
    use proptest::prelude::*;

    /// Accepts iff its own certificate is empty.
    struct EmptyOnly;

    impl Scheme for EmptyOnly {
        fn name(&self) -> String {
            "empty-only".into()
        }
        fn model(&self) -> Model {
            Model::Pls
        }
        fn descriptor(&self) -> Descriptor {
            Descriptor {
                name: self.name(),
                model: "pls".into(),
                node_inputs: "none".into(),
                edge_inputs: "none".into(),
                certificate_bits: "0".into(),
            }
        }
        fn membership(&self, inst: &Instance) -> Result<(), String> {
            if inst.node_count() < 10 {
                Ok(())
            } else {
                Err("too big".into())
            }
        }
        fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
            Ok(vec![BitString::new(); inst.node_count()])
        }
        fn verify(&self, view: &View<'_>) -> bool {
            view.center_certificate.is_empty()
        }
    }

    #[test]
    fn size_is_max_length() {
        let p = make_path(&[1, 2, 3]).unwrap();
        let mut certs = CertificateMap::empty_for(&p);
        assert_eq!(certificate_size_bits(&certs), 0);
        certs.insert(2, BitString::from_uint(5, 7));
        assert_eq!(certificate_size_bits(&certs), 7);
        assert_eq!(certificate_size_bits(&CertificateMap::new()), 0);
    }

    #[test]
    fn decide_conjunction_and_faults() {
        let p = make_path(&[1, 2, 3]).unwrap();
        let mut certs = CertificateMap::empty_for(&p);
        assert!(decide(&p, &certs, &EmptyOnly).unwrap().accepted());
        certs.insert(3, BitString::from_uint(1, 1));
        let verdict = decide(&p, &certs, &EmptyOnly).unwrap();
        assert!(!verdict.accepted());
        assert_eq!(verdict.rejecting_nodes(), vec![3]);
        let mut missing = CertificateMap::empty_for(&p);
        missing.certs.remove(&2);
        assert_eq!(decide(&p, &missing, &EmptyOnly).unwrap_err(), EngineError::MissingCertificate(2));
        let mut extra = CertificateMap::empty_for(&p);
        extra.insert(99, BitString::new());
        assert_eq!(decide(&p, &extra, &EmptyOnly).unwrap_err(), EngineError::UnknownNode(99));
        let mut long = CertificateMap::empty_for(&p);
        long.insert(1, BitString::from_bools(std::iter::repeat(false).take(MAX_CERTIFICATE_BITS + 1)));
        assert!(matches!(
            decide(&p, &long, &EmptyOnly).unwrap_err(),
            EngineError::OverlongCertificate { id: 1, .. }
        ));
    }

    #[test]
    fn prover_faults_on_no_instances() {
        let big = make_path(&(1..=12).collect::<Vec<_>>()).unwrap();
        assert!(matches!(check_completeness(&EmptyOnly, &big), Err(EngineError::NotMember(_))));
        let small = make_path(&[4]).unwrap();
        let report = check_completeness(&EmptyOnly, &small).unwrap();
        assert!(report.passed);
        assert_eq!(report.certificate_bits, 0);
    }

    #[test]
    fn verdict_json_shape() {
        let p = make_path(&[1, 2]).unwrap();
        let verdict = decide(&p, &CertificateMap::empty_for(&p), &EmptyOnly).unwrap();
        let value: serde_json::Value = serde_json::from_str(&verdict.to_json()).unwrap();
        assert_eq!(value["global"], "accept");
        assert_eq!(value["nodes"][1]["id"], 2);
    }

    #[test]
    fn certificate_json_rejects_bad_documents() {
        assert!(CertificateMap::from_json(r#"{"certificates":{"x":"0:"}}"#).is_err());
        assert!(CertificateMap::from_json(r#"{"certificates":{"1":"3:f"}}"#).is_err());
        assert!(CertificateMap::from_json(r#"{"certificates":{"1":"3:e"},"max_bits":2}"#).is_err());
        let ok = CertificateMap::from_json(r#"{"certificates":{"1":"3:e","2":"0:"}}"#).unwrap();
        assert_eq!(ok.max_bits(), 3);
    }

    #[test]
    fn empty_scheme_is_nld_invariant() {
        let t = make_random_tree(8, 3).unwrap();
        let report = check_nld_invariance(&EmptyOnly, &t, 5, 1).unwrap();
        assert!(report.invariant);
    }

    #[test]
    fn fresh_ids_avoid_center() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let ids = fresh_ids(&mut rng, 7, 3, Some(5));
            assert!(ids.iter().all(|&x| x < 8 && x != 5));
            let mut sorted = ids.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), 7);
        }
    }

    proptest! {
        #[test]
        fn certificate_json_round_trip(lens in proptest::collection::vec(0usize..70, 1..12), seed in any::<u64>()) {
            let n = lens.len();
            let t = make_random_tree(n, seed).unwrap();
            let certs = CertificateMap::from_indexed(
                &t,
                lens.iter().enumerate().map(|(i, &l)| BitString::from_bools((0..l).map(|j| (seed >> ((i + j) % 64)) & 1 == 1))).collect(),
            );
            let back = CertificateMap::from_json(&certs.to_json()).unwrap();
            prop_assert_eq!(back, certs);
        }
    }
}
