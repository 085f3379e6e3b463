use crate::bits::BitString;
use crate::engine::{Descriptor, Scheme};
use crate::graph::algo::{bipartition, is_matching, koenig_cover, maximum_bipartite_matching};
use crate::graph::Instance;
use crate::views::{Model, View};

use super::{descriptor, selected};

/// Selected edges are a maximum matching of a bipartite graph. Each node
/// holds two bits: membership in a König cover, and its side.
#[derive(Debug, Clone, Copy, Default)]
pub struct BipartiteMaxMatching;

fn decode(cert: &BitString) -> Option<(bool, bool)> {
    (cert.len() == 2).then(|| (cert.get(0) == Some(true), cert.get(1) == Some(true)))
}

impl Scheme for BipartiteMaxMatching {
    fn name(&self) -> String {
        "bipartite-matching".into()
    }

    fn model(&self) -> Model {
        Model::Pls
    }

    fn descriptor(&self) -> Descriptor {
        descriptor(self.name(), self.model(), "none", "selected", "2")
    }

    fn membership(&self, inst: &Instance) -> Result<(), String> {
        let g = inst.graph();
        let side = bipartition(g).ok_or("graph is not bipartite")?;
        let chosen: Vec<usize> = g.selected_edges().collect();
        if !is_matching(g, &chosen) {
            return Err("selected edges are not a matching".into());
        }
        let best = maximum_bipartite_matching(g, &side).len();
        if chosen.len() == best {
            Ok(())
        } else {
            Err(format!("matching has {} edges, a maximum matching has {best}", chosen.len()))
        }
    }

    fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
        let g = inst.graph();
        let side = bipartition(g).ok_or("graph is not bipartite")?;
        let chosen: Vec<usize> = g.selected_edges().collect();
        let cover = koenig_cover(g, &side, &chosen);
        Ok((0..g.node_count())
            .map(|v| BitString::from_bools([cover[v], side[v]]))
            .collect())
    }

    fn verify(&self, view: &View<'_>) -> bool {
        let Some((covered, side)) = decode(view.center_certificate) else {
            return false;
        };
        let mut matched = 0;
        for r in view.neighbor_records().iter() {
            let Some((their_cover, their_side)) = decode(r.certificate) else {
                return false;
            };
            if their_side == side || !(covered || their_cover) {
                return false;
            }
            if selected(&r.edge) {
                matched += 1;
                if covered == their_cover {
                    return false;
                }
            }
        }
        matched <= 1 && (!covered || matched == 1)
    }
}
