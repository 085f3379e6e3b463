use crate::bits::{ceil_log2, BitString};
use crate::engine::{Descriptor, Scheme};
use crate::graph::algo::{is_path, path_order};
use crate::graph::Instance;
use crate::views::{Model, View};

use super::descriptor;

/// The graph is a path. Every node holds its distance to one endpoint.
#[derive(Debug, Clone, Copy, Default)]
pub struct PathLanguage;

fn distance(cert: &BitString) -> Option<u64> {
    cert.to_uint()
}

impl Scheme for PathLanguage {
    fn name(&self) -> String {
        "path".into()
    }

    fn model(&self) -> Model {
        Model::Pls
    }

    fn descriptor(&self) -> Descriptor {
        descriptor(self.name(), self.model(), "none", "none", "max(1, ceil(log2 n))")
    }

    fn membership(&self, inst: &Instance) -> Result<(), String> {
        if is_path(inst.graph()) {
            Ok(())
        } else {
            Err("graph is not a path".into())
        }
    }

    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        let order = path_order(inst.graph()).ok_or("graph is not a path")?;
        let width = ceil_log2(inst.node_count() as u64).max(1);
        let mut certs = vec![BitString::new(); inst.node_count()];
        for (d, &v) in order.iter().enumerate() {
            certs[v] = BitString::from_uint(d as u64, width);
        }
        Ok(certs)
    }

    fn verify(&self, view: &View<'_>) -> bool {
        let Some(d) = distance(view.center_certificate) else {
            return false;
        };
        if view.center_degree > 2 {
            return false;
        }
        if d == 0 {
            return view.center_degree <= 1;
        }
        let records = view.neighbor_records();
        let mut below = 0;
        for r in records.iter() {
            match distance(r.certificate) {
                Some(x) if x + 1 == d => below += 1,
                Some(x) if x == d + 1 => {}
                _ => return false,
            }
        }
        below == 1
    }
}
