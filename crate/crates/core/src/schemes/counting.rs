use std::collections::VecDeque;

use crate::bits::{ceil_log2, BitString};
use crate::engine::{Descriptor, Scheme};
use crate::graph::{input_as_bit, Instance};
use crate::views::{Model, View};

use super::descriptor;
use super::spanning_tree::min_id_node;

/// `root_id | my_id | parent_id | distance | counter`. The three ids take
/// `id_bits` each; distance and counter share the remaining bits equally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountCertificate {
    pub root_id: u64,
    pub my_id: u64,
    pub parent_id: u64,
    pub distance: u64,
    pub counter: u64,
}

impl CountCertificate {
    pub fn encode(&self, id_bits: u32, width: u32) -> BitString {
        let mut b = BitString::with_capacity(3 * id_bits as usize + 2 * width as usize);
        b.push_uint(self.root_id, id_bits);
        b.push_uint(self.my_id, id_bits);
        b.push_uint(self.parent_id, id_bits);
        b.push_uint(self.distance, width);
        b.push_uint(self.counter, width);
        b
    }

    pub fn decode(cert: &BitString, id_bits: u32) -> Option<Self> {
        let rest = cert.len().checked_sub(3 * id_bits as usize)?;
        if rest % 2 != 0 || rest / 2 > 64 {
            return None;
        }
        let width = (rest / 2) as u32;
        let mut r = cert.reader();
        Some(CountCertificate {
            root_id: r.read_uint(id_bits)?,
            my_id: r.read_uint(id_bits)?,
            parent_id: r.read_uint(id_bits)?,
            distance: r.read_uint(width)?,
            counter: r.read_uint(width)?,
        })
    }
}

/// Exactly `k` nodes have input 1, certified by a spanning tree whose nodes
/// carry subtree counters.
#[derive(Debug, Clone, Copy)]
pub struct ExactCount {
    pub k: u64,
}

impl Scheme for ExactCount {
    fn name(&self) -> String {
        format!("exact-count:{}", self.k)
    }

    fn model(&self) -> Model {
        Model::Pls
    }

    fn descriptor(&self) -> Descriptor {
        descriptor(
            self.name(),
            self.model(),
            "1 bit (absent reads as 0)",
            "none",
            "3 id_bits + 2 ceil(log2(n + 1))",
        )
    }

    fn membership(&self, inst: &Instance) -> Result<(), String> {
        let mut ones = 0u64;
        for v in 0..inst.node_count() {
            match input_as_bit(inst.input(v)) {
                None => return Err(format!("node {} has a malformed input", inst.id(v))),
                Some(b) => ones += u64::from(b),
            }
        }
        if ones == self.k {
            Ok(())
        } else {
            Err(format!("{ones} nodes have input 1, expected {}", self.k))
        }
    }

    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        let g = inst.graph();
        let n = g.node_count();
        let root = min_id_node(inst);
        let mut parent = vec![usize::MAX; n];
        let mut dist = vec![0u64; n];
        let mut order = Vec::with_capacity(n);
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(w, _) in g.neighbors(u) {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if order.len() != n {
            return Err("graph is disconnected".into());
        }
        let mut counter: Vec<u64> = (0..n)
            .map(|v| u64::from(input_as_bit(inst.input(v)).unwrap_or(false)))
            .collect();
        for &v in order.iter().rev() {
            if v != root {
                counter[parent[v]] += counter[v];
            }
        }
        let width = ceil_log2(n as u64 + 1);
        Ok((0..n)
            .map(|v| {
                CountCertificate {
                    root_id: inst.id(root),
                    my_id: inst.id(v),
                    parent_id: inst.id(parent[v]),
                    distance: dist[v],
                    counter: counter[v],
                }
                .encode(inst.id_bits(), width)
            })
            .collect())
    }

    fn verify(&self, view: &View<'_>) -> bool {
        let id_bits = view.id_bits;
        let Some(own) = CountCertificate::decode(view.center_certificate, id_bits) else {
            return false;
        };
        let Some(bit) = input_as_bit(view.center_input) else {
            return false;
        };
        if own.my_id != view.center_id {
            return false;
        }
        let mut parents = 0;
        let mut sum = u128::from(bit);
        for r in view.neighbor_records().iter() {
            let Some(c) = CountCertificate::decode(r.certificate, id_bits) else {
                return false;
            };
            if c.root_id != own.root_id {
                return false;
            }
            if own.distance > 0 && c.my_id == own.parent_id {
                if c.distance + 1 != own.distance {
                    return false;
                }
                parents += 1;
            }
            if c.parent_id == own.my_id && c.my_id != own.my_id {
                if c.distance != own.distance + 1 {
                    return false;
                }
                sum += u128::from(c.counter);
            }
        }
        if u128::from(own.counter) != sum {
            return false;
        }
        if own.distance == 0 {
            own.root_id == own.my_id && own.parent_id == own.my_id && own.counter == self.k
        } else {
            own.parent_id != own.my_id && parents == 1
        }
    }
}
