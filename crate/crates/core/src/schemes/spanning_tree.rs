use std::collections::VecDeque;

use crate::bits::{ceil_log2, BitString};
use crate::engine::{Descriptor, Scheme};
use crate::graph::algo::is_spanning_tree;
use crate::graph::Instance;
use crate::views::{Model, View};

use super::{descriptor, selected};

/// Root identifier on `id_bits` bits followed by the tree distance in all
/// remaining bits. With no remaining bits the distance is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanningTreeCertificate {
    pub root_id: u64,
    pub distance: u64,
}

impl SpanningTreeCertificate {
    pub fn encode(&self, id_bits: u32, distance_bits: u32) -> BitString {
        let mut b = BitString::from_uint(self.root_id, id_bits);
        b.push_uint(self.distance, distance_bits);
        b
    }

    pub fn decode(cert: &BitString, id_bits: u32) -> Option<Self> {
        let mut r = cert.reader();
        let root_id = r.read_uint(id_bits)?;
        let rest = r.remaining();
        if rest > 64 {
            return None;
        }
        let distance = r.read_uint(rest as u32)?;
        Some(SpanningTreeCertificate { root_id, distance })
    }
}

/// Selected edges form a spanning tree, certified by root id and distances.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpanningTree;

/// BFS distances from `root` along selected edges.
pub(crate) fn selected_tree_distances(inst: &Instance, root: usize) -> Vec<Option<u64>> {
    let g = inst.graph();
    let mut dist = vec![None; g.node_count()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(w, e) in g.neighbors(u) {
            if selected(&g.edge(e).attrs) && dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap_or(0) + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

pub(crate) fn min_id_node(inst: &Instance) -> usize {
    (0..inst.node_count()).min_by_key(|&v| inst.id(v)).expect("instances are non-empty")
}

impl Scheme for SpanningTree {
    fn name(&self) -> String {
        "spanning-tree".into()
    }

    fn model(&self) -> Model {
        Model::Pls
    }

    fn descriptor(&self) -> Descriptor {
        descriptor(self.name(), self.model(), "none", "selected", "id_bits + ceil(log2 n)")
    }

    fn membership(&self, inst: &Instance) -> Result<(), String> {
        let g = inst.graph();
        let chosen: Vec<usize> = g.selected_edges().collect();
        if is_spanning_tree(g, &chosen) {
            Ok(())
        } else {
            Err(format!("the {} selected edges do not form a spanning tree", chosen.len()))
        }
    }

    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        let root = min_id_node(inst);
        let dist = selected_tree_distances(inst, root);
        let width = ceil_log2(inst.node_count() as u64);
        dist.into_iter()
            .map(|d| {
                let distance = d.ok_or("selected edges do not reach every node")?;
                Ok(SpanningTreeCertificate {
                    root_id: inst.id(root),
                    distance,
                }
                .encode(inst.id_bits(), width))
            })
            .collect()
    }

    fn verify(&self, view: &View<'_>) -> bool {
        let Some(own) = SpanningTreeCertificate::decode(view.center_certificate, view.id_bits) else {
            return false;
        };
        let records = view.neighbor_records();
        let mut tree_neighbors = Vec::new();
        for r in records.iter() {
            match SpanningTreeCertificate::decode(r.certificate, view.id_bits) {
                Some(c) if c.root_id == own.root_id => {
                    if selected(&r.edge) {
                        tree_neighbors.push(c.distance);
                    }
                }
                _ => return false,
            }
        }
        let d = own.distance;
        if d == 0 {
            own.root_id == view.center_id && tree_neighbors.iter().all(|&x| x == 1)
        } else {
            let below = tree_neighbors.iter().filter(|&&x| x + 1 == d).count();
            let above = tree_neighbors.iter().filter(|&&x| x == d + 1).count();
            below == 1 && below + above == tree_neighbors.len()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{decide, CertificateMap};
    use crate::graph::{EdgeAttrs, Graph};

    fn selected_instance(n: usize, edges: &[(usize, usize, bool)], ids: Vec<u64>) -> Instance {
        let mut g = Graph::from_pairs(n, &edges.iter().map(|&(u, v, _)| (u, v)).collect::<Vec<_>>()).unwrap();
        for (i, &(_, _, s)) in edges.iter().enumerate() {
            g.set_edge_attrs(i, EdgeAttrs { weight: None, selected: Some(s) });
        }
        Instance::from_graph(g, ids).unwrap()
    }

    #[test]
    fn triangle_with_two_selected_edges() {
        let t = selected_instance(3, &[(0, 1, true), (0, 2, true), (1, 2, false)], vec![1, 2, 3]);
        let certs = SpanningTree.prove(&t).unwrap();
        let decoded: Vec<_> = [1, 2, 3]
            .iter()
            .map(|&id| SpanningTreeCertificate::decode(certs.get(id).unwrap(), t.id_bits()).unwrap().distance)
            .collect();
        assert_eq!(decoded, vec![0, 1, 1]);
        assert!(decide(&t, &certs, &SpanningTree).unwrap().accepted());
    }

    #[test]
    fn single_node_empty_selection() {
        let t = selected_instance(1, &[], vec![1]);
        let certs = SpanningTree.prove(&t).unwrap();
        assert_eq!(certs.max_bits(), t.id_bits() as usize);
        assert!(decide(&t, &certs, &SpanningTree).unwrap().accepted());
    }

    #[test]
    fn star_size_bound() {
        let n = 9;
        let edges: Vec<_> = (1..n).map(|v| (0, v, true)).collect();
        let star = selected_instance(n, &edges, (1..=n as u64).collect());
        let certs = SpanningTree.prove(&star).unwrap();
        assert!(decide(&star, &certs, &SpanningTree).unwrap().accepted());
        assert!(certs.max_bits() <= star.id_bits() as usize + ceil_log2(n as u64) as usize);
    }

    #[test]
    fn flipped_distance_rejected() {
        let t = selected_instance(3, &[(0, 1, true), (1, 2, true)], vec![1, 2, 3]);
        let mut certs = SpanningTree.prove(&t).unwrap();
        let c = certs.get(3).unwrap().clone();
        let mut flipped = c.slice(0, c.len() - 1);
        flipped.push(!c.get(c.len() - 1).unwrap());
        certs.insert(3, flipped);
        assert!(!decide(&t, &certs, &SpanningTree).unwrap().accepted());
        assert!(!decide(&t, &CertificateMap::empty_for(&t), &SpanningTree).unwrap().accepted());
    }
}
