use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::engine::{accepts_all, decide, CertificateMap, Scheme};
use crate::error::FalsifierError;
use crate::graph::Instance;

/// Default enumeration cap, overridable through `CERTILAB_CAP`.
pub const DEFAULT_CAP: u128 = 100_000_000;

pub fn default_cap() -> u128 {
    std::env::var("CERTILAB_CAP")
        .ok()
        .and_then(|v| v.trim().parse::<u128>().ok())
        .unwrap_or(DEFAULT_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SoundnessOutcome {
    SoundUpToBudget,
    Counterexample { certificates: CertificateMap },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    #[serde(flatten)]
    pub outcome: SoundnessOutcome,
    /// Assignments evaluated, counting the counterexample itself.
    pub assignments_tested: u128,
    pub bit_budget: usize,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.outcome == SoundnessOutcome::SoundUpToBudget
    }
}

/// `(2^(budget+1) - 1)^n`, or `None` on overflow.
pub fn assignment_count(n: usize, bit_budget: usize) -> Option<u128> {
    let per_node = 1u128.checked_shl(u32::try_from(bit_budget + 1).ok()?)? - 1;
    let n = u32::try_from(n).ok()?;
    per_node.checked_pow(n)
}

/// Searches every assignment of bitstrings of length `<= bit_budget` for one
/// that makes every node accept the no-instance.
///
/// Nodes are ordered by identifier, the smallest being the most significant
/// digit; candidate strings go shortest first, lexicographic within a
/// length. The first accepted assignment in that order is reported.
pub fn exhaustive_soundness<S: Scheme + ?Sized>(
    scheme: &S,
    no_inst: &Instance,
    bit_budget: usize,
    cap: u128,
) -> Result<SoundnessReport, FalsifierError> {
    if scheme.is_member(no_inst) {
        return Err(FalsifierError::YesInstance);
    }
    let n = no_inst.node_count();
    let required = assignment_count(n, bit_budget).unwrap_or(u128::MAX);
    if required > cap {
        return Err(FalsifierError::CapExceeded { required, cap });
    }
    let candidates = BitString::all_up_to(bit_budget);
    let c = candidates.len();
    let mut by_id: Vec<usize> = (0..n).collect();
    by_id.sort_by_key(|&v| no_inst.id(v));

    // Workers own the assignments sharing their values on the first `depth` digits.
    let mut depth = 0;
    let mut prefixes = 1usize;
    while depth < n && prefixes < 4096 {
        depth += 1;
        prefixes *= c;
    }
    let suffix_len = n - depth;
    let suffix_count = (c as u128).pow(suffix_len as u32);

    let found = (0..prefixes).into_par_iter().find_map_first(|prefix| {
        let mut digits = vec![0usize; n];
        let mut rest = prefix;
        for pos in (0..depth).rev() {
            digits[pos] = rest % c;
            rest /= c;
        }
        let mut certs: Vec<&BitString> = vec![&candidates[0]; n];
        for (pos, &v) in by_id.iter().enumerate() {
            certs[v] = &candidates[digits[pos]];
        }
        let mut offset = 0u128;
        loop {
            if accepts_all(no_inst, &certs, scheme) {
                return Some((prefix as u128) * suffix_count + offset);
            }
            // Odometer over the suffix digits, least significant last.
            let mut pos = n;
            loop {
                if pos == depth {
                    return None;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < c {
                    certs[by_id[pos]] = &candidates[digits[pos]];
                    break;
                }
                digits[pos] = 0;
                certs[by_id[pos]] = &candidates[0];
            }
            offset += 1;
        }
    });

    match found {
        None => Ok(SoundnessReport {
            outcome: SoundnessOutcome::SoundUpToBudget,
            assignments_tested: required,
            bit_budget,
        }),
        Some(index) => {
            let mut certs = CertificateMap::new();
            let mut rest = index;
            for &v in by_id.iter().rev() {
                certs.insert(no_inst.id(v), candidates[(rest % c as u128) as usize].clone());
                rest /= c as u128;
            }
            let verdict = decide(no_inst, &certs, scheme)?;
            assert!(
                verdict.accepted(),
                "counterexample at position {index} failed re-verification"
            );
            Ok(SoundnessReport {
                outcome: SoundnessOutcome::Counterexample { certificates: certs },
                assignments_tested: index + 1,
                bit_budget,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Descriptor;
    use crate::graph::{make_cycle, make_path};
    use crate::schemes::PathLanguage;
    use crate::views::{Model, View};

    struct AcceptAll;

    impl Scheme for AcceptAll {
        fn name(&self) -> String {
            "accept-all".into()
        }
        fn model(&self) -> Model {
            Model::Pls
        }
        fn descriptor(&self) -> Descriptor {
            unimplemented!()
        }
        fn membership(&self, inst: &Instance) -> Result<(), String> {
            if crate::graph::algo::is_path(inst.graph()) {
                Ok(())
            } else {
                Err("not a path".into())
            }
        }
        fn certify(&self, inst: &Instance) -> Result<Vec<BitString>, String> {
            Ok(vec![BitString::new(); inst.node_count()])
        }
        fn verify(&self, _: &View<'_>) -> bool {
            true
        }
    }

    /// Accepts iff its own certificate equals the given string.
    struct WantsLabel(BitString, u64);

    impl Scheme for WantsLabel {
        fn name(&self) -> String {
            "wants".into()
        }
        fn model(&self) -> Model {
            Model::Pls
        }
        fn descriptor(&self) -> Descriptor {
            unimplemented!()
        }
        fn membership(&self, _: &Instance) -> Result<(), String> {
            Err("never".into())
        }
        fn certify(&self, _: &Instance) -> Result<Vec<BitString>, String> {
            Err("never".into())
        }
        fn verify(&self, view: &View<'_>) -> bool {
            view.center_id != self.1 || *view.center_certificate == self.0
        }
    }

    #[test]
    fn counts() {
        assert_eq!(assignment_count(5, 3), Some(15u128.pow(5)));
        assert_eq!(assignment_count(4, 0), Some(1));
        assert_eq!(assignment_count(0, 7), Some(1));
        assert_eq!(assignment_count(200, 60), None);
    }

    #[test]
    fn accept_all_yields_all_empty_counterexample() {
        let c = make_cycle(&[1, 2, 3]).unwrap();
        let report = exhaustive_soundness(&AcceptAll, &c, 2, DEFAULT_CAP).unwrap();
        assert_eq!(report.assignments_tested, 1);
        assert_eq!(
            report.outcome,
            SoundnessOutcome::Counterexample {
                certificates: CertificateMap::empty_for(&c)
            }
        );
    }

    #[test]
    fn counterexample_position_follows_enumeration_order() {
        let c = make_cycle(&[5, 6, 7]).unwrap();
        // Node 6 is the middle digit; "1" is the third candidate (index 2).
        let report = exhaustive_soundness(&WantsLabel(BitString::from_uint(1, 1), 6), &c, 1, DEFAULT_CAP).unwrap();
        assert_eq!(report.assignments_tested, 2 * 3 + 1);
        let SoundnessOutcome::Counterexample { certificates } = report.outcome else {
            panic!("expected a counterexample")
        };
        assert_eq!(certificates.get(6), Some(&BitString::from_uint(1, 1)));
        assert_eq!(certificates.get(5), Some(&BitString::new()));
    }

    #[test]
    fn path_scheme_sound_on_small_cycle() {
        let c = make_cycle(&[1, 2, 3, 4]).unwrap();
        let report = exhaustive_soundness(&PathLanguage, &c, 3, DEFAULT_CAP).unwrap();
        assert!(report.is_sound());
        assert_eq!(report.assignments_tested, 15u128.pow(4));
    }

    #[test]
    fn refusals() {
        let p = make_path(&[1, 2, 3]).unwrap();
        assert_eq!(
            exhaustive_soundness(&PathLanguage, &p, 2, DEFAULT_CAP).unwrap_err(),
            FalsifierError::YesInstance
        );
        let c = make_cycle(&[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(
            exhaustive_soundness(&PathLanguage, &c, 3, 1000).unwrap_err(),
            FalsifierError::CapExceeded {
                required: 15u128.pow(5),
                cap: 1000
            }
        );
    }
}
