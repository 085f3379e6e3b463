//! Deliberately weak path schemes. Their provers succeed on paths, but
//! their verifiers also accept some cycles, which the crossing and
//! cut-and-plug attacks are meant to expose.

use crate::bits::BitString;
use crate::engine::{Descriptor, Scheme};
use crate::error::SchemeError;
use crate::graph::algo::{is_path, path_order};
use crate::graph::Instance;
use crate::views::{Model, View};

use super::{bad, descriptor};

fn path_membership(inst: &Instance) -> Result<(), String> {
    if is_path(inst.graph()) {
        Ok(())
    } else {
        Err("graph is not a path".into())
    }
}

/// Empty certificates, every node checks `degree <= 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Degree2;

impl Scheme for Degree2 {
    fn name(&self) -> String {
        "degree2".into()
    }
    fn model(&self) -> Model {
        Model::Pls
    }
    fn descriptor(&self) -> Descriptor {
        descriptor(self.name(), self.model(), "none", "none", "0")
    }
    fn membership(&self, inst: &Instance) -> Result<(), String> {
        path_membership(inst)
    }
    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        Ok(vec![BitString::new(); inst.node_count()])
    }
    fn verify(&self, view: &View<'_>) -> bool {
        view.center_degree <= 2
    }
}

/// Every certificate is the single bit `1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Const1Bit;

impl Scheme for Const1Bit {
    fn name(&self) -> String {
        "const1bit".into()
    }
    fn model(&self) -> Model {
        Model::Pls
    }
    fn descriptor(&self) -> Descriptor {
        descriptor(self.name(), self.model(), "none", "none", "1")
    }
    fn membership(&self, inst: &Instance) -> Result<(), String> {
        path_membership(inst)
    }
    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        Ok(vec![BitString::from_uint(1, 1); inst.node_count()])
    }
    fn verify(&self, view: &View<'_>) -> bool {
        let one = BitString::from_uint(1, 1);
        view.center_degree <= 2
            && *view.center_certificate == one
            && view.neighbor_records().iter().all(|r| *r.certificate == one)
    }
}

/// Distance to an endpoint modulo `2^bits`. Neighbors must hold the
/// adjacent residues, so cycles whose length is a multiple of `2^bits` pass.
#[derive(Debug, Clone, Copy)]
pub struct ModCounter {
    bits: u32,
}

impl ModCounter {
    pub fn new(bits: u64) -> Result<Self, SchemeError> {
        if !(1..=16).contains(&bits) {
            return Err(bad("mod-counter", "bits must be in 1..=16".into()));
        }
        Ok(ModCounter { bits: bits as u32 })
    }

    fn residue(&self, cert: &BitString) -> Option<u64> {
        (cert.len() == self.bits as usize).then(|| cert.to_uint()).flatten()
    }
}

impl Scheme for ModCounter {
    fn name(&self) -> String {
        if self.bits == 1 {
            "parity".into()
        } else {
            format!("mod-counter:{}", self.bits)
        }
    }
    fn model(&self) -> Model {
        Model::Pls
    }
    fn descriptor(&self) -> Descriptor {
        descriptor(self.name(), self.model(), "none", "none", &self.bits.to_string())
    }
    fn membership(&self, inst: &Instance) -> Result<(), String> {
        path_membership(inst)
    }
    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        let order = path_order(inst.graph()).ok_or("graph is not a path")?;
        let modulus = 1u64 << self.bits;
        let mut certs = vec![BitString::new(); inst.node_count()];
        for (d, &v) in order.iter().enumerate() {
            certs[v] = BitString::from_uint(d as u64 % modulus, self.bits);
        }
        Ok(certs)
    }
    fn verify(&self, view: &View<'_>) -> bool {
        let modulus = 1u64 << self.bits;
        let Some(own) = self.residue(view.center_certificate) else {
            return false;
        };
        if view.center_degree > 2 {
            return false;
        }
        let up = (own + 1) % modulus;
        let down = (own + modulus - 1) % modulus;
        let mut seen = Vec::new();
        for r in view.neighbor_records().iter() {
            match self.residue(r.certificate) {
                Some(x) if x == up || x == down => seen.push(x),
                _ => return false,
            }
        }
        if seen.len() == 2 {
            seen.sort_unstable();
            let mut expected = [up, down];
            expected.sort_unstable();
            seen == expected
        } else {
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{decide, CertificateMap};
    use crate::graph::{make_cycle, make_path, sequential_ids};

    #[test]
    fn pseudo_schemes_accept_paths_and_some_cycles() {
        let path = make_path(&sequential_ids(8)).unwrap();
        let cycle = make_cycle(&sequential_ids(8)).unwrap();
        let schemes: Vec<Box<dyn Scheme>> = vec![
            Box::new(Degree2),
            Box::new(Const1Bit),
            Box::new(ModCounter::new(1).unwrap()),
            Box::new(ModCounter::new(2).unwrap()),
        ];
        for s in &schemes {
            let certs = s.prove(&path).unwrap();
            assert!(decide(&path, &certs, s).unwrap().accepted(), "{}", s.name());
            let cyc_certs = CertificateMap::from_indexed(&cycle, certs.indexed(&path).unwrap().into_iter().cloned().collect());
            assert!(decide(&cycle, &cyc_certs, s).unwrap().accepted(), "{}", s.name());
        }
    }

    #[test]
    fn mod_counter_rejects_odd_cycle() {
        let s = ModCounter::new(1).unwrap();
        let c = make_cycle(&sequential_ids(5)).unwrap();
        let certs: CertificateMap = (1..=5).map(|id| (id, BitString::from_uint(id % 2, 1))).collect();
        assert!(!decide(&c, &certs, &s).unwrap().accepted());
    }
}
