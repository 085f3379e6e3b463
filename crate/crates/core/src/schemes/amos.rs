use crate::bits::BitString;
use crate::engine::{Descriptor, Scheme};
use crate::graph::{input_as_bit, Instance};
use crate::views::{Model, View};

use super::descriptor;

/// At most one node has input 1. Every certificate is the selected node's
/// identifier, or empty when nobody is selected.
#[derive(Debug, Clone, Copy, Default)]
pub struct Amos;

impl Scheme for Amos {
    fn name(&self) -> String {
        "amos".into()
    }

    fn model(&self) -> Model {
        Model::Pls
    }

    fn descriptor(&self) -> Descriptor {
        descriptor(self.name(), self.model(), "1 bit (absent reads as 0)", "none", "id_bits or 0")
    }

    fn membership(&self, inst: &Instance) -> Result<(), String> {
        let mut ones = 0;
        for v in 0..inst.node_count() {
            match input_as_bit(inst.input(v)) {
                None => return Err(format!("node {} has a malformed input", inst.id(v))),
                Some(true) => ones += 1,
                Some(false) => {}
            }
        }
        if ones <= 1 {
            Ok(())
        } else {
            Err(format!("{ones} nodes have input 1"))
        }
    }

    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        let chosen = (0..inst.node_count()).find(|&v| input_as_bit(inst.input(v)) == Some(true));
        let cert = match chosen {
            Some(v) => BitString::from_uint(inst.id(v), inst.id_bits()),
            None => BitString::new(),
        };
        Ok(vec![cert; inst.node_count()])
    }

    fn verify(&self, view: &View<'_>) -> bool {
        let own = view.center_certificate;
        if view.neighbor_records().iter().any(|r| r.certificate != own) {
            return false;
        }
        match input_as_bit(view.center_input) {
            None => false,
            Some(true) => *own == BitString::from_uint(view.center_id, view.id_bits),
            Some(false) => true,
        }
    }
}
