use crate::bits::{ceil_log2, BitString};
use crate::engine::{Descriptor, Scheme};
use crate::error::SchemeError;
use crate::graph::algo::k_coloring;
use crate::graph::Instance;
use crate::views::{Model, View};

use super::{bad, descriptor};

/// Decodes a color written on `ceil(log2 k)` bits. With `k = 1` the color
/// is the empty string, and an absent input also reads as color 0.
pub fn color_input(input: Option<&BitString>, k: u64) -> Option<u64> {
    let width = ceil_log2(k) as usize;
    match input {
        None if width == 0 => Some(0),
        None => None,
        Some(b) if b.len() == width => {
            let c = if width == 0 { 0 } else { b.to_uint()? };
            (c < k).then_some(c)
        }
        Some(_) => None,
    }
}

/// Proper coloring given as node inputs, checked with empty certificates.
///
/// Neighbor inputs are not part of a PLS view, so this scheme runs in the
/// LCP model with radius 1. Under a PLS override a node with neighbors
/// cannot see their colors and rejects.
#[derive(Debug, Clone, Copy)]
pub struct ProperColoring {
    k: u64,
}

impl ProperColoring {
    pub fn new(k: u64) -> Result<Self, SchemeError> {
        if k == 0 {
            return Err(bad("proper-coloring", "k must be at least 1".into()));
        }
        Ok(ProperColoring { k })
    }

    pub fn k(&self) -> u64 {
        self.k
    }
}

impl Scheme for ProperColoring {
    fn name(&self) -> String {
        format!("proper-coloring:{}", self.k)
    }

    fn model(&self) -> Model {
        Model::Lcp { radius: 1 }
    }

    fn descriptor(&self) -> Descriptor {
        descriptor(
            self.name(),
            self.model(),
            &format!("color on ceil(log2 k) = {} bits", ceil_log2(self.k)),
            "none",
            "0",
        )
    }

    fn membership(&self, inst: &Instance) -> Result<(), String> {
        let colors: Vec<Option<u64>> = (0..inst.node_count()).map(|v| color_input(inst.input(v), self.k)).collect();
        if let Some(v) = colors.iter().position(Option::is_none) {
            return Err(format!("node {} has no valid color below {}", inst.id(v), self.k));
        }
        match inst.graph().edges().iter().find(|e| colors[e.u] == colors[e.v]) {
            Some(e) => Err(format!("edge ({}, {}) is monochromatic", inst.id(e.u), inst.id(e.v))),
            None => Ok(()),
        }
    }

    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        Ok(vec![BitString::new(); inst.node_count()])
    }

    fn verify(&self, view: &View<'_>) -> bool {
        let Some(own) = color_input(view.center_input, self.k) else {
            return false;
        };
        let Some(ball) = view.ball() else {
            return view.center_degree == 0;
        };
        ball.center_edges()
            .all(|(i, _)| color_input(ball.nodes[i].input, self.k) != Some(own))
    }
}

/// k-colorability certified by writing a color in every certificate.
#[derive(Debug, Clone, Copy)]
pub struct KColorability {
    k: u64,
}

impl KColorability {
    pub fn new(k: u64) -> Result<Self, SchemeError> {
        if k == 0 {
            return Err(bad("k-colorability", "k must be at least 1".into()));
        }
        Ok(KColorability { k })
    }

    fn width(&self) -> u32 {
        ceil_log2(self.k)
    }

    fn color(&self, cert: &BitString) -> Option<u64> {
        if cert.len() != self.width() as usize {
            return None;
        }
        let c = if cert.is_empty() { 0 } else { cert.to_uint()? };
        (c < self.k).then_some(c)
    }
}

impl Scheme for KColorability {
    fn name(&self) -> String {
        format!("k-colorability:{}", self.k)
    }

    fn model(&self) -> Model {
        Model::Nld
    }

    fn descriptor(&self) -> Descriptor {
        descriptor(self.name(), self.model(), "none", "none", "ceil(log2 k)")
    }

    fn membership(&self, inst: &Instance) -> Result<(), String> {
        match k_coloring(inst.graph(), self.k as usize) {
            Some(_) => Ok(()),
            None => Err(format!("graph is not {}-colorable", self.k)),
        }
    }

    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        let colors = k_coloring(inst.graph(), self.k as usize).ok_or("no coloring found")?;
        Ok(colors
            .into_iter()
            .map(|c| BitString::from_uint(c as u64, self.width()))
            .collect())
    }

    fn verify(&self, view: &View<'_>) -> bool {
        let Some(own) = self.color(view.center_certificate) else {
            return false;
        };
        view.neighbor_records()
            .iter()
            .all(|r| self.color(r.certificate) != Some(own))
    }
}
