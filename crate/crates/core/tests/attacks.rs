use certilab::engine::{decide, CertificateMap, Scheme, WithModel};
use certilab::falsifier::{
    chunks_from_path, crossing_attack, cut_and_plug_search, exhaustive_soundness, mutation_soundness,
    standard_mutations, AttackOutcome, SoundnessOutcome, DEFAULT_CAP,
};
use certilab::corpus::yes_instance;
use certilab::graph::{make_cycle, make_path, sequential_ids};
use certilab::schemes::scheme_by_name;
use certilab::views::{extract_view, views_indistinguishable, Model};
use certilab::BitString;
use proptest::prelude::*;

/// Exactly-`b`-bit schemes on a path with `2 * 4^b + 3` edges always expose
/// a crossing candidate.
#[test]
fn pigeonhole_candidates_for_small_budgets() {
    for (name, b) in [("degree2", 0u32), ("parity", 1), ("mod-counter:2", 2)] {
        let scheme = scheme_by_name(name).unwrap();
        let edges = 2 * 4usize.pow(b) + 3;
        let path = make_path(&sequential_ids(edges + 1)).unwrap();
        let certs = scheme.prove(&path).unwrap();
        assert!(certs.max_bits() <= b as usize);
        let report = crossing_attack(&scheme, &path, &certs).unwrap();
        assert!(report.candidates > 0, "{name}");
        assert!(report.outcome.is_fooled(), "{name}");
        assert_eq!(report.views_preserved, Some(true), "{name}");
    }
}

#[test]
fn one_bit_labels_on_eleven_edges() {
    let scheme = scheme_by_name("parity").unwrap();
    let path = make_path(&sequential_ids(12)).unwrap();
    let certs = scheme.prove(&path).unwrap();
    let report = crossing_attack(&scheme, &path, &certs).unwrap();
    let AttackOutcome::Fooled { instance, certificates } = report.outcome else {
        panic!("parity labels repeat along any path")
    };
    assert!(decide(&instance, &certificates, &scheme).unwrap().accepted());
    assert!(!scheme.is_member(&instance));
    assert_eq!(instance.node_count() % 2, 0);
}

#[test]
fn parity_scheme_fooled_by_exhaustive_search_on_even_cycle() {
    let scheme = scheme_by_name("parity").unwrap();
    let c4 = make_cycle(&[1, 2, 3, 4]).unwrap();
    let report = exhaustive_soundness(&scheme, &c4, 1, DEFAULT_CAP).unwrap();
    let SoundnessOutcome::Counterexample { certificates } = report.outcome else {
        panic!("alternating bits fool the parity check on C4")
    };
    assert!(decide(&c4, &certificates, &scheme).unwrap().accepted());
    let odd = make_cycle(&[1, 2, 3, 4, 5]).unwrap();
    assert!(exhaustive_soundness(&scheme, &odd, 1, DEFAULT_CAP).unwrap().is_sound());
}

#[test]
fn cut_and_plug_against_modular_counter() {
    // Residues mod 4 repeat every four nodes, so chunks plug in a cycle.
    let scheme = WithModel {
        inner: scheme_by_name("mod-counter:2").unwrap(),
        model: Model::Lcp { radius: 1 },
    };
    let mut pool = Vec::new();
    for t in 0..3u64 {
        let ids: Vec<u64> = (t * 40 + 1..=t * 40 + 24).collect();
        let path = make_path(&ids).unwrap();
        let certs = scheme.prove(&path).unwrap();
        pool.extend(chunks_from_path(&path, &certs, 1).unwrap());
    }
    let report = cut_and_plug_search(&scheme, &pool, 1).unwrap();
    assert!(report.cycle.is_some());
    let AttackOutcome::Fooled { instance, certificates } = report.outcome else {
        panic!("modular counters cannot tell long cycles from paths")
    };
    assert!(decide(&instance, &certificates, &scheme).unwrap().accepted());
    assert!(certilab::graph::algo::is_cycle(instance.graph()));
}

#[test]
fn honest_distances_resist_cut_and_plug_for_several_radii() {
    for k in 1..=3 {
        let scheme = WithModel {
            inner: scheme_by_name("path").unwrap(),
            model: Model::Lcp { radius: k },
        };
        let mut pool = Vec::new();
        for t in 0..3u64 {
            let ids: Vec<u64> = (t * 100 + 1..=t * 100 + 30).collect();
            let path = make_path(&ids).unwrap();
            let certs = scheme.prove(&path).unwrap();
            pool.extend(chunks_from_path(&path, &certs, k).unwrap());
        }
        let report = cut_and_plug_search(&scheme, &pool, k).unwrap();
        assert_eq!(report.cycle, None, "k={k}");
        assert_eq!(report.outcome, AttackOutcome::NoAttackFound);
    }
}

#[test]
fn mutation_replay_over_catalog_edge_schemes() {
    for name in ["spanning-tree", "mst", "bipartite-matching"] {
        let scheme = scheme_by_name(name).unwrap();
        for seed in 0..4 {
            let inst = yes_instance(name, 9, seed).unwrap();
            let report = mutation_soundness(&scheme, &inst, &standard_mutations(&inst)).unwrap();
            assert!(report.tested > 0, "{name} seed {seed}");
            assert!(report.all_caught(), "{name} seed {seed}: {:?}", report.silent);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Any constant-label PLS verifier that accepts the path is fooled, and
    /// the fooled cycle's views match the path's.
    #[test]
    fn crossing_preserves_views(n in 8usize..40, label in 0u64..4, width in 0u32..3) {
        let scheme = scheme_by_name("degree2").unwrap();
        let path = make_path(&sequential_ids(n)).unwrap();
        let cert = BitString::from_uint(label % (1 << width), width);
        let certs: CertificateMap = path.ids().iter().map(|&id| (id, cert.clone())).collect();
        let report = crossing_attack(&scheme, &path, &certs).unwrap();
        let AttackOutcome::Fooled { instance, certificates } = &report.outcome else {
            return Err(TestCaseError::fail("expected a fooled cycle"));
        };
        for &id in instance.ids() {
            let a = extract_view(&path, &certs, id, Model::Pls).unwrap();
            let b = extract_view(instance, certificates, id, Model::Pls).unwrap();
            prop_assert!(views_indistinguishable(&a, &b).unwrap());
        }
    }

    /// Counterexamples are accepted assignments and come first in order.
    #[test]
    fn counterexamples_are_real(n in 3usize..6, budget in 0usize..3) {
        let scheme = scheme_by_name("parity").unwrap();
        let cycle = make_cycle(&sequential_ids(n)).unwrap();
        let report = exhaustive_soundness(&scheme, &cycle, budget, DEFAULT_CAP).unwrap();
        match report.outcome {
            SoundnessOutcome::Counterexample { certificates } => {
                prop_assert!(n % 2 == 0 && budget >= 1);
                prop_assert!(decide(&cycle, &certificates, &scheme).unwrap().accepted());
            }
            SoundnessOutcome::SoundUpToBudget => {
                prop_assert!(n % 2 == 1 || budget == 0);
                prop_assert_eq!(report.assignments_tested, ((1u128 << (budget + 1)) - 1).pow(n as u32));
            }
        }
    }
}
