//! Minimum spanning tree certified by a recorded Borůvka run.
//!
//! A certificate holds one field per round. At round `i` the nodes are
//! partitioned into fragments, each labelled by its root's identifier and
//! spanned by selected edges. Every node stores its distance to the root
//! inside the fragment tree and the lightest edge leaving its subtree
//! (`subtree_min`). The root of a fragment is the inner endpoint of the
//! fragment's lightest outgoing edge, so the root's `subtree_min` is the
//! edge along which the fragment merges.
//!
//! Layout, all integers MSB first:
//!
//! ```text
//! my_id                                   id_bits
//! gamma(R) gamma(D) gamma(Wb)             header
//! round 0:   flag [weight lo hi]          root and distance implicit
//! round 1..R-1: root dist flag [weight lo hi]
//! round R:   root dist                    no outgoing edges remain
//! ```
//!
//! `D` is the distance width, weights are stored as `weight - 1` on `Wb`
//! bits and edge endpoints on `id_bits` bits each. With `R = 0` (a single
//! node) only `my_id` and the header are present.

use std::collections::VecDeque;

use crate::bits::{bit_width, ceil_log2, BitString};
use crate::engine::{Descriptor, Scheme};
use crate::graph::algo::{minimum_spanning_tree, DisjointSet, EdgeKey};
use crate::graph::Instance;
use crate::views::{Model, View};

use super::{descriptor, selected};

/// Upper limit on decoded round counts, far above `ceil(log2 n)` for any
/// instance that fits in memory.
const MAX_ROUNDS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundField {
    pub root_id: u64,
    pub distance: u64,
    /// `None` stands for "no outgoing edge in the subtree".
    pub subtree_min: Option<EdgeKey>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MstCertificate {
    pub my_id: u64,
    pub distance_bits: u32,
    pub weight_bits: u32,
    /// Rounds `0..=R`.
    pub rounds: Vec<RoundField>,
}

impl MstCertificate {
    pub fn round_count(&self) -> usize {
        self.rounds.len() - 1
    }

    fn push_key(b: &mut BitString, key: Option<EdgeKey>, id_bits: u32, weight_bits: u32) {
        b.push(key.is_some());
        if let Some(k) = key {
            b.push_uint(k.weight - 1, weight_bits);
            b.push_uint(k.lo, id_bits);
            b.push_uint(k.hi, id_bits);
        }
    }

    fn read_key(r: &mut crate::bits::BitReader<'_>, id_bits: u32, weight_bits: u32) -> Option<Option<EdgeKey>> {
        if !r.read_bit()? {
            return Some(None);
        }
        let weight = r.read_uint(weight_bits)?.checked_add(1)?;
        let lo = r.read_uint(id_bits)?;
        let hi = r.read_uint(id_bits)?;
        (lo < hi).then_some(Some(EdgeKey { weight, lo, hi }))
    }

    /// Panics if a field does not fit its width; the prover sizes them.
    pub fn encode(&self, id_bits: u32) -> BitString {
        let r = self.round_count();
        let mut b = BitString::new();
        b.push_uint(self.my_id, id_bits);
        b.push_gamma(r as u64);
        b.push_gamma(u64::from(self.distance_bits));
        b.push_gamma(u64::from(self.weight_bits));
        for (i, f) in self.rounds.iter().enumerate() {
            if i > 0 {
                b.push_uint(f.root_id, id_bits);
                b.push_uint(f.distance, self.distance_bits);
            }
            if i < r {
                Self::push_key(&mut b, f.subtree_min, id_bits, self.weight_bits);
            }
        }
        b
    }

    /// Strict decoding: every bit must be consumed.
    pub fn decode(cert: &BitString, id_bits: u32) -> Option<Self> {
        let mut r = cert.reader();
        let my_id = r.read_uint(id_bits)?;
        let round_count = r.read_gamma()?;
        let distance_bits = r.read_gamma()?;
        let weight_bits = r.read_gamma()?;
        if round_count > MAX_ROUNDS || distance_bits > 64 || weight_bits > 63 {
            return None;
        }
        let (distance_bits, weight_bits) = (distance_bits as u32, weight_bits as u32);
        let mut rounds = Vec::with_capacity(round_count as usize + 1);
        for i in 0..=round_count {
            let (root_id, distance) = if i == 0 {
                (my_id, 0)
            } else {
                (r.read_uint(id_bits)?, r.read_uint(distance_bits)?)
            };
            let subtree_min = if i < round_count {
                Self::read_key(&mut r, id_bits, weight_bits)?
            } else {
                None
            };
            rounds.push(RoundField {
                root_id,
                distance,
                subtree_min,
            });
        }
        if !r.is_exhausted() {
            return None;
        }
        Some(MstCertificate {
            my_id,
            distance_bits,
            weight_bits,
            rounds,
        })
    }
}

/// Selected edges form the minimum spanning tree under the
/// `(weight, min id, max id)` order.
#[derive(Debug, Clone, Copy, Default)]
pub struct MstScheme;

/// Per-node fields of one Borůvka round.
struct RoundLayout {
    root: Vec<usize>,
    distance: Vec<u64>,
    subtree_min: Vec<Option<EdgeKey>>,
}

/// Borůvka with every fragment merging along its lightest outgoing edge.
/// Returns the round layouts (when asked for) and the merge edges of each round.
fn boruvka(inst: &Instance, with_layout: bool) -> Result<(Vec<RoundLayout>, Vec<Vec<usize>>), String> {
    let g = inst.graph();
    let n = g.node_count();
    let keys: Vec<EdgeKey> = (0..g.edge_count())
        .map(|e| EdgeKey::of(inst, e).ok_or_else(|| "an edge has no weight".to_string()))
        .collect::<Result<_, _>>()?;
    let mut dsu = DisjointSet::new(n);
    let mut rounds = Vec::new();
    let mut merges = Vec::new();
    loop {
        let label: Vec<usize> = (0..n).map(|v| dsu.find(v)).collect();
        let mut best: Vec<Option<usize>> = vec![None; n];
        for (e, edge) in g.edges().iter().enumerate() {
            if label[edge.u] == label[edge.v] {
                continue;
            }
            for side in [label[edge.u], label[edge.v]] {
                if best[side].map_or(true, |b| keys[e] < keys[b]) {
                    best[side] = Some(e);
                }
            }
        }
        let mut root = vec![usize::MAX; n];
        let final_round = best.iter().all(Option::is_none);
        for v in 0..n {
            let f = label[v];
            root[v] = match best[f] {
                Some(e) => {
                    let edge = g.edge(e);
                    if label[edge.u] == f {
                        edge.u
                    } else {
                        edge.v
                    }
                }
                None => (0..n)
                    .filter(|&w| label[w] == f)
                    .min_by_key(|&w| inst.id(w))
                    .expect("fragment is non-empty"),
            };
        }
        if with_layout {
            rounds.push(layout(inst, &label, &root, &keys)?);
        }
        if final_round {
            break;
        }
        let mut merged = Vec::new();
        for e in best.iter().flatten().copied() {
            if !merged.contains(&e) {
                merged.push(e);
            }
        }
        for &e in &merged {
            dsu.union(g.edge(e).u, g.edge(e).v);
        }
        merges.push(merged);
    }
    Ok((rounds, merges))
}

/// Fragment trees along selected edges, rooted at `root[v]`, with the
/// convergecast of the lightest outgoing edge.
fn layout(inst: &Instance, label: &[usize], root: &[usize], keys: &[EdgeKey]) -> Result<RoundLayout, String> {
    let g = inst.graph();
    let n = g.node_count();
    let mut distance = vec![u64::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for v in 0..n {
        if root[v] == v {
            distance[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &(w, e) in g.neighbors(u) {
            if selected(&g.edge(e).attrs) && label[w] == label[u] && distance[w] == u64::MAX {
                distance[w] = distance[u] + 1;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    if order.len() != n {
        return Err("selected edges do not span a fragment".into());
    }
    let mut subtree_min: Vec<Option<EdgeKey>> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&(w, _)| label[w] != label[v])
                .map(|&(_, e)| keys[e])
                .min()
        })
        .collect();
    for &v in order.iter().rev() {
        if parent[v] != usize::MAX {
            let p = parent[v];
            subtree_min[p] = match (subtree_min[p], subtree_min[v]) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
    }
    Ok(RoundLayout {
        root: root.to_vec(),
        distance,
        subtree_min,
    })
}

/// Decoded neighbor: its certificate plus the edge leading to it.
struct Neighbor {
    cert: MstCertificate,
    key: EdgeKey,
    selected: bool,
}

impl MstScheme {
    fn verify_round(own: &MstCertificate, neighbors: &[Neighbor], i: usize) -> bool {
        let r = own.round_count();
        let me = own.rounds[i];
        if me.distance == 0 && me.root_id != own.my_id {
            return false;
        }
        let mut below = 0;
        let mut best: Option<EdgeKey> = None;
        let mut consider = |k: Option<EdgeKey>| {
            if let Some(k) = k {
                best = Some(best.map_or(k, |b: EdgeKey| b.min(k)));
            }
        };
        for nb in neighbors {
            let them = nb.cert.rounds[i];
            if them.root_id != me.root_id {
                if i == r {
                    return false;
                }
                consider(Some(nb.key));
                continue;
            }
            if !nb.selected {
                continue;
            }
            if them.distance == me.distance + 1 {
                consider(them.subtree_min);
            } else if me.distance > 0 && them.distance + 1 == me.distance {
                below += 1;
            } else {
                return false;
            }
        }
        if me.distance > 0 && below != 1 {
            return false;
        }
        if i == r {
            return true;
        }
        if best != me.subtree_min {
            return false;
        }
        if me.distance == 0 {
            let Some(merge) = me.subtree_min else {
                return false;
            };
            let Some(other) = merge.other_end(own.my_id) else {
                return false;
            };
            let incident = neighbors
                .iter()
                .any(|nb| nb.cert.my_id == other && nb.key == merge && nb.selected);
            if !incident {
                return false;
            }
        }
        true
    }

    /// The selected edge towards `nb` is some round's merge edge of a
    /// fragment rooted at one of its endpoints.
    fn edge_is_merge_edge(own: &MstCertificate, nb: &Neighbor) -> bool {
        let r = own.round_count();
        (0..r).any(|i| {
            let mine = own.rounds[i];
            let theirs = nb.cert.rounds[i];
            (mine.distance == 0 && mine.subtree_min == Some(nb.key))
                || (theirs.distance == 0 && theirs.subtree_min == Some(nb.key))
        })
    }
}

impl Scheme for MstScheme {
    fn name(&self) -> String {
        "mst".into()
    }

    fn model(&self) -> Model {
        Model::Pls
    }

    fn descriptor(&self) -> Descriptor {
        descriptor(
            self.name(),
            self.model(),
            "none",
            "weight (required), selected",
            "id_bits + header + R (3 id_bits + ceil(log2 W) + D + 1), R <= ceil(log2 n)",
        )
    }

    fn membership(&self, inst: &Instance) -> Result<(), String> {
        let g = inst.graph();
        if g.edges().iter().any(|e| e.attrs.weight.map_or(true, |w| w == 0)) {
            return Err("every edge needs a positive weight".into());
        }
        let mst = minimum_spanning_tree(inst).ok_or("graph is disconnected")?;
        let chosen: Vec<usize> = g.selected_edges().collect();
        if chosen == mst {
            Ok(())
        } else {
            Err(format!(
                "selected edges {:?} differ from the minimum spanning tree {:?}",
                chosen.iter().map(|&e| (inst.id(g.edge(e).u), inst.id(g.edge(e).v))).collect::<Vec<_>>(),
                mst.iter().map(|&e| (inst.id(g.edge(e).u), inst.id(g.edge(e).v))).collect::<Vec<_>>()
            ))
        }
    }

    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        let (rounds, _) = boruvka(inst, true)?;
        let g = inst.graph();
        let weight_bound = g.weight_bound().unwrap_or(1);
        let weight_bits = ceil_log2(weight_bound);
        let max_distance = rounds.iter().flat_map(|l| l.distance.iter().copied()).max().unwrap_or(0);
        let distance_bits = bit_width(max_distance);
        Ok((0..g.node_count())
            .map(|v| {
                MstCertificate {
                    my_id: inst.id(v),
                    distance_bits,
                    weight_bits,
                    rounds: rounds
                        .iter()
                        .map(|l| RoundField {
                            root_id: inst.id(l.root[v]),
                            distance: l.distance[v],
                            subtree_min: l.subtree_min[v],
                        })
                        .collect(),
                }
                .encode(inst.id_bits())
            })
            .collect())
    }

    fn verify(&self, view: &View<'_>) -> bool {
        let Some(own) = MstCertificate::decode(view.center_certificate, view.id_bits) else {
            return false;
        };
        if own.my_id != view.center_id {
            return false;
        }
        let max_weight = 1u64 << own.weight_bits;
        let mut neighbors = Vec::with_capacity(view.center_degree);
        for rec in view.neighbor_records().iter() {
            let Some(cert) = MstCertificate::decode(rec.certificate, view.id_bits) else {
                return false;
            };
            if cert.rounds.len() != own.rounds.len()
                || cert.distance_bits != own.distance_bits
                || cert.weight_bits != own.weight_bits
                || cert.my_id == own.my_id
            {
                return false;
            }
            let Some(weight) = rec.edge.weight.filter(|&w| w >= 1 && w <= max_weight) else {
                return false;
            };
            neighbors.push(Neighbor {
                key: EdgeKey::new(weight, own.my_id, cert.my_id),
                cert,
                selected: selected(&rec.edge),
            });
        }
        if !(0..own.rounds.len()).all(|i| Self::verify_round(&own, &neighbors, i)) {
            return false;
        }
        neighbors
            .iter()
            .filter(|nb| nb.selected)
            .all(|nb| Self::edge_is_merge_edge(&own, nb))
    }
}

/// Edge indices merged by the prover's Borůvka run, sorted. Ignores the
/// `selected` attributes.
pub fn boruvka_tree(inst: &Instance) -> Result<Vec<usize>, String> {
    let (_, merges) = boruvka(inst, false)?;
    let mut all: Vec<usize> = merges.into_iter().flatten().collect();
    all.sort_unstable();
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{decide, CertificateMap};
    use crate::graph::{make_random_weighted, EdgeAttrs, Graph};
    use proptest::prelude::*;

    /// Marks the Kruskal tree as selected.
    pub(crate) fn with_mst_selected(mut inst: Instance) -> Instance {
        let mst = minimum_spanning_tree(&inst).unwrap();
        for e in 0..inst.graph().edge_count() {
            let mut a = inst.graph().edge(e).attrs;
            a.selected = Some(mst.contains(&e));
            inst.graph_mut().set_edge_attrs(e, a);
        }
        inst
    }

    #[test]
    fn two_nodes_one_round() {
        let mut g = Graph::from_pairs(2, &[(0, 1)]).unwrap();
        g.set_edge_attrs(0, EdgeAttrs { weight: Some(5), selected: Some(true) });
        let inst = Instance::from_graph(g, vec![1, 2]).unwrap();
        let certs = MstScheme.prove(&inst).unwrap();
        let decoded = MstCertificate::decode(certs.get(1).unwrap(), inst.id_bits()).unwrap();
        assert_eq!(decoded.round_count(), 1);
        assert!(decide(&inst, &certs, &MstScheme).unwrap().accepted());
    }

    #[test]
    fn single_node() {
        let g = Graph::from_pairs(1, &[]).unwrap();
        let inst = Instance::from_graph(g, vec![1]).unwrap();
        let certs = MstScheme.prove(&inst).unwrap();
        assert!(decide(&inst, &certs, &MstScheme).unwrap().accepted());
    }

    #[test]
    fn four_node_prover_matches_kruskal() {
        let inst = with_mst_selected(make_random_weighted(4, 5, 10, 11).unwrap());
        assert_eq!(boruvka_tree(&inst).unwrap(), minimum_spanning_tree(&inst).unwrap());
        let certs = MstScheme.prove(&inst).unwrap();
        assert!(decide(&inst, &certs, &MstScheme).unwrap().accepted());
    }

    #[test]
    fn replayed_certificates_fail_after_swap() {
        let inst = with_mst_selected(make_random_weighted(8, 14, 20, 3).unwrap());
        let certs = MstScheme.prove(&inst).unwrap();
        let g = inst.graph();
        let tree_edge = g.selected_edges().next().unwrap();
        let other = (0..g.edge_count()).find(|&e| !g.edge(e).attrs.is_selected()).unwrap();
        let mut mutated = inst.clone();
        for (e, s) in [(tree_edge, false), (other, true)] {
            let mut a = mutated.graph().edge(e).attrs;
            a.selected = Some(s);
            mutated.graph_mut().set_edge_attrs(e, a);
        }
        assert!(!decide(&mutated, &certs, &MstScheme).unwrap().accepted());
    }

    #[test]
    fn empty_certificates_rejected() {
        let inst = with_mst_selected(make_random_weighted(5, 7, 9, 1).unwrap());
        assert!(!decide(&inst, &CertificateMap::empty_for(&inst), &MstScheme).unwrap().accepted());
    }

    proptest! {
        #[test]
        fn codec_round_trip(n in 2usize..30, extra in 0usize..30, w in 1u64..200, seed in any::<u64>()) {
            let m = (n - 1 + extra).min(n * (n - 1) / 2);
            let inst = with_mst_selected(make_random_weighted(n, m, w, seed).unwrap());
            let certs = MstScheme.prove(&inst).unwrap();
            for (_, c) in certs.iter() {
                let decoded = MstCertificate::decode(c, inst.id_bits()).unwrap();
                prop_assert_eq!(&decoded.encode(inst.id_bits()), c);
                prop_assert!(decoded.round_count() <= ceil_log2(n as u64) as usize);
            }
            prop_assert!(decide(&inst, &certs, &MstScheme).unwrap().accepted());
        }

        #[test]
        fn decode_never_panics(bits in proptest::collection::vec(any::<bool>(), 0..200), id_bits in 1u32..8) {
            let _ = MstCertificate::decode(&BitString::from_bools(bits), id_bits);
        }
    }
}
